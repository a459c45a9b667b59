//! Scenario execution.

use std::collections::BTreeMap;

use serde_json::Value;
use thiserror::Error;

use super::report::{ExactSummary, Report, ScenarioEcho, CONVENTIONS};
use super::scenario::{FluxConfiguration, FluxQubitSpec, Scenario, ScenarioKind};
use crate::composites::{self, COMWavefunction};
use crate::distinctness::ResolutionCriterion;
use crate::estimators::{
    self, CatSizeReport, EstimationMode, Geometry, NucleonTreatment, PhysicalConstants, RigidBodySpec,
    SpeciesContribution, SpeciesKind,
};
use crate::fock::{self, ManyBodyState};

/// Paper-mode and first-principles totals further apart than this factor
/// raise a warning.
pub const MODE_DISCREPANCY_FACTOR: f64 = 2.0;

#[derive(Debug, Error)]
#[error("scenario `{scenario}`: {message}")]
pub struct RunError {
    pub scenario: String,
    pub message: String,
}

pub fn run_scenario(scenario: &Scenario, constants: &PhysicalConstants) -> Result<Report, RunError> {
    let wrap = |message: String| RunError {
        scenario: scenario.name.clone(),
        message,
    };
    match &scenario.kind {
        ScenarioKind::RigidBody(spec) => {
            run_rigid_body(&scenario.name, spec, &scenario.criterion, constants).map_err(|e| wrap(e.to_string()))
        }
        ScenarioKind::FluxQubit(spec) => run_flux_qubit(&scenario.name, spec).map_err(wrap),
        ScenarioKind::Exact { state_a, state_b } => {
            run_exact(&scenario.name, state_a, state_b).map_err(|e| wrap(e.to_string()))
        }
    }
}

fn base_report(name: &str, kind: &str, mode: &str, inputs: BTreeMap<String, Value>, cat: CatSizeReport) -> Report {
    Report {
        scenario: ScenarioEcho {
            name: name.to_string(),
            kind: kind.to_string(),
            inputs,
        },
        mode: mode.to_string(),
        species: cat.per_species,
        total_w_particles: cat.total_w_particles,
        total_w_raw: cat.total_w_raw,
        w_cp: None,
        classification: cat.classification,
        conventions: CONVENTIONS.map(String::from).to_vec(),
        notes: cat.notes,
        warnings: Vec::new(),
        exact: None,
    }
}

fn rigid_body_inputs(spec: &RigidBodySpec) -> BTreeMap<String, Value> {
    let mut inputs = BTreeMap::new();
    let mut put = |key: &str, value: Value| {
        inputs.insert(key.to_string(), value);
    };
    put("material", Value::from(spec.material.name.clone()));
    match spec.geometry {
        Geometry::SphereDiameter(d) => put("sphere_diameter_cm", Value::from(d)),
        Geometry::CubeSide(s) => put("cube_side_cm", Value::from(s)),
    }
    put("displacement_cm", Value::from(spec.displacement));
    put("duration_s", Value::from(spec.duration));
    put("shift_velocity_cm_s", Value::from(spec.shift_velocity()));
    put(
        "nucleon_treatment",
        Value::from(match spec.nucleon_treatment {
            NucleonTreatment::IntranuclearNucleons => "intranuclear_nucleons",
            NucleonTreatment::AtomicRms => "atomic_rms",
            NucleonTreatment::NucleusComposite => "nucleus_composite",
        }),
    );
    if let Some(n) = spec.electron_count_override {
        put("electron_count", Value::from(n));
    }
    put("magnification", Value::from(spec.available_magnification));
    inputs
}

fn run_rigid_body(
    name: &str,
    spec: &RigidBodySpec,
    criterion: &ResolutionCriterion,
    constants: &PhysicalConstants,
) -> Result<Report, estimators::EstimateError> {
    let cat = estimators::rigid_body_w(spec, constants, criterion)?;
    let mut report = base_report(name, "rigid_body", spec.mode.label(), rigid_body_inputs(spec), cat);

    let electrons = contribution_of(&report.species, SpeciesKind::Electrons);
    let others: f64 = report.total_w_particles - electrons;
    if electrons > 0.0 {
        report
            .notes
            .push(format!("non-electron/electron contribution ratio = {}", others / electrons));
    }

    let mut alternative = spec.clone();
    alternative.mode = spec.mode.other();
    let other_total = estimators::rigid_body_w(&alternative, constants, criterion)?.total_w_particles;
    report.notes.push(format!(
        "{} mode total for the same body: {}",
        alternative.mode.label(),
        other_total
    ));
    let (paper, first_principles) = match spec.mode {
        EstimationMode::Paper => (report.total_w_particles, other_total),
        EstimationMode::FirstPrinciples => (other_total, report.total_w_particles),
    };
    if paper > 0.0 && first_principles > 0.0 {
        let factor = (paper / first_principles).max(first_principles / paper);
        if factor > MODE_DISCREPANCY_FACTOR {
            report.warnings.push(format!(
                "paper-mode total {paper} and first-principles total {first_principles} differ by a factor {factor:.3}"
            ));
        }
    }
    Ok(report)
}

fn contribution_of(species: &[SpeciesContribution], kind: SpeciesKind) -> f64 {
    species.iter().filter(|s| s.kind == kind).map(|s| s.w_particles).sum()
}

fn run_flux_qubit(name: &str, spec: &FluxQubitSpec) -> Result<Report, String> {
    let cat = estimators::flux_qubit_w(spec.n_electrons, spec.velocity_ratio).map_err(|e| e.to_string())?;

    let mut inputs = BTreeMap::new();
    inputs.insert("n_electrons".to_string(), Value::from(spec.n_electrons));
    inputs.insert("velocity_ratio".to_string(), Value::from(spec.velocity_ratio));
    inputs.insert("gap_ratio".to_string(), Value::from(spec.condensate.gap_ratio()));

    let (com_a, com_b) = match spec.configuration {
        FluxConfiguration::Symmetric => COMWavefunction::symmetric_pair(),
        FluxConfiguration::Asymmetric(a, b) => (a, b),
    };
    inputs.insert(
        "configuration".to_string(),
        Value::from(match spec.configuration {
            FluxConfiguration::Symmetric => "symmetric",
            FluxConfiguration::Asymmetric(..) => "asymmetric",
        }),
    );
    inputs.insert("com_a".to_string(), serde_json::to_value(com_a).map_err(|e| e.to_string())?);
    inputs.insert("com_b".to_string(), serde_json::to_value(com_b).map_err(|e| e.to_string())?);

    let n_pairs = composites::condensate_pair_count(&spec.condensate);
    let k = composites::com_overlap(&com_a, &com_b).map_err(|e| e.to_string())?;
    let pair = composites::w_cp(n_pairs, k).map_err(|e| e.to_string())?;

    let mut report = base_report(name, "flux_qubit", "configured", inputs, cat);
    report.w_cp = Some(pair);
    report.notes.push("w_cp = N_p (1 - K) with N_p = N * gap_ratio".to_string());
    if let FluxConfiguration::Asymmetric(..) = spec.configuration {
        report
            .notes
            .push("COM wavefunctions are model stand-ins; K depends on the chosen model".to_string());
    }
    Ok(report)
}

fn run_exact(name: &str, a: &ManyBodyState, b: &ManyBodyState) -> Result<Report, fock::FockError> {
    let diffs = fock::occupation_differences(a, b)?;
    let w_fixed = fock::w_fixed_basis(a, b)?;
    let w_natural = fock::w_natural(a, b)?;
    let overlap = a.overlap(b)?;

    let species = diffs
        .iter()
        .enumerate()
        .map(|(k, d)| SpeciesContribution {
            name: format!("mode {k}"),
            kind: SpeciesKind::Other,
            count: d.abs(),
            shift_velocity: None,
            characteristic_velocity: None,
            velocity_ratio: None,
            w_particles: d.abs() / 2.0,
        })
        .collect();
    let cat = CatSizeReport::from_contributions(species);

    let mut inputs = BTreeMap::new();
    inputs.insert("num_modes".to_string(), Value::from(a.basis().num_modes()));
    inputs.insert("statistics".to_string(), Value::from(a.basis().statistics().to_string()));
    inputs.insert("max_occupancy".to_string(), Value::from(a.basis().max_occupancy()));
    inputs.insert("terms_a".to_string(), Value::from(a.num_terms()));
    inputs.insert("terms_b".to_string(), Value::from(b.num_terms()));

    let mut report = base_report(name, "exact", "exact", inputs, cat);
    report.exact = Some(ExactSummary {
        occupations_a: a.one_body_rdm().occupations(),
        occupations_b: b.one_body_rdm().occupations(),
        w_raw_fixed_basis: w_fixed,
        w_raw_natural: w_natural,
        overlap_re: overlap.re,
        overlap_im: overlap.im,
    });
    if (w_natural - w_fixed).abs() > 1e-10 {
        report.warnings.push(format!(
            "one-body density matrices are not simultaneously diagonal in the given modes: fixed-basis w_raw {w_fixed}, natural-orbital w_raw {w_natural}"
        ));
    }
    Ok(report)
}
