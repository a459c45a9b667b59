//! Scenario files (TOML, `schema = 1`).
//!
//! Lengths in scenario files are in micrometres and converted to cm here;
//! everything past this boundary is CGS. Every scenario is fully validated
//! during parsing, and each error carries the 1-based line of the offending
//! value (or of the table that lacks a field).

use std::ops::Range;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::composites::{COMWavefunction, CondensateSpec};
use crate::distinctness::ResolutionCriterion;
use crate::estimators::{
    EstimationMode, Geometry, NucleonTreatment, PaperInputs, RigidBodySpec, VelocityModel,
};
use crate::fock::{ManyBodyState, ModeBasis, Statistics};
use crate::materials::{Material, MaterialCatalog};

pub const SCHEMA_VERSION: i64 = 1;

const UM: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: missing field `{path}`")]
    MissingField { path: String, line: usize },
    #[error("line {line}: invalid value for `{path}`: {reason}")]
    InvalidValue {
        path: String,
        reason: String,
        line: usize,
    },
    #[error("line {line}: unknown scenario kind {}; expected exact, rigid_body or flux_qubit", .found.as_deref().map(|k| format!("`{k}`")).unwrap_or_else(|| "(missing `kind`)".to_string()))]
    UnknownScenarioKind { found: Option<String>, line: usize },
}

impl ScenarioError {
    pub fn line(&self) -> usize {
        match self {
            ScenarioError::Syntax { line, .. }
            | ScenarioError::MissingField { line, .. }
            | ScenarioError::InvalidValue { line, .. }
            | ScenarioError::UnknownScenarioKind { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub criterion: ResolutionCriterion,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioKind {
    Exact {
        state_a: ManyBodyState,
        state_b: ManyBodyState,
    },
    RigidBody(RigidBodySpec),
    FluxQubit(FluxQubitSpec),
}

impl ScenarioKind {
    pub fn label(&self) -> &'static str {
        match self {
            ScenarioKind::Exact { .. } => "exact",
            ScenarioKind::RigidBody(_) => "rigid_body",
            ScenarioKind::FluxQubit(_) => "flux_qubit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxQubitSpec {
    pub n_electrons: f64,
    pub velocity_ratio: f64,
    pub condensate: CondensateSpec,
    pub configuration: FluxConfiguration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxConfiguration {
    /// Half a flux quantum: pair COM angular momenta `±ħ/2`.
    Symmetric,
    /// Explicit model COM wavefunctions for the two branches.
    Asymmetric(COMWavefunction, COMWavefunction),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema: Option<Spanned<i64>>,
    kind: Option<Spanned<String>>,
    name: Option<String>,
    criterion: Option<Spanned<RawCriterion>>,
    rigid_body: Option<Spanned<RawRigidBody>>,
    flux_qubit: Option<Spanned<RawFluxQubit>>,
    exact: Option<Spanned<RawExact>>,
    #[serde(default)]
    material: Vec<Spanned<Material>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCriterion {
    min_resolvable_length_um: Option<Spanned<f64>>,
    max_observation_time_s: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRigidBody {
    material: Option<Spanned<String>>,
    sphere_diameter_um: Option<Spanned<f64>>,
    cube_side_um: Option<Spanned<f64>>,
    displacement_um: Option<Spanned<f64>>,
    duration_s: Option<Spanned<f64>>,
    mode: Option<Spanned<String>>,
    nucleon_treatment: Option<Spanned<String>>,
    electron_count: Option<Spanned<f64>>,
    magnification: Option<Spanned<f64>>,
    intranuclear_multiplier: Option<Spanned<f64>>,
    atomic_rms_multiplier: Option<Spanned<f64>>,
    paper_electron_count: Option<Spanned<f64>>,
    paper_reference_diameter_um: Option<Spanned<f64>>,
    paper_electron_v0_cm_s: Option<Spanned<f64>>,
    paper_nucleon_ratio: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFluxQubit {
    n_electrons: Option<Spanned<f64>>,
    velocity_ratio: Option<Spanned<f64>>,
    gap_ratio: Option<Spanned<f64>>,
    configuration: Option<Spanned<String>>,
    com_a: Option<Spanned<RawCom>>,
    com_b: Option<Spanned<RawCom>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCom {
    model: Option<Spanned<String>>,
    angular_momentum: Option<Spanned<f64>>,
    center_um: Option<Spanned<f64>>,
    mean_wavenumber_per_um: Option<Spanned<f64>>,
    width_um: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExact {
    state_a: Option<Spanned<RawState>>,
    state_b: Option<Spanned<RawState>>,
}

/// A many-body state: basis description plus `(occupations, amplitude)` terms.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    schema: Option<Spanned<i64>>,
    statistics: Option<Spanned<String>>,
    num_modes: Option<Spanned<i64>>,
    max_occupancy: Option<Spanned<i64>>,
    terms: Option<Spanned<Vec<Spanned<RawTerm>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    occupations: Option<Spanned<Vec<i64>>>,
    re: Option<Spanned<f64>>,
    im: Option<Spanned<f64>>,
}

/// Maps byte offsets to 1-based line numbers.
struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn line(&self, offset: usize) -> usize {
        let end = offset.min(self.text.len());
        self.text.as_bytes()[..end].iter().filter(|&&b| b == b'\n').count() + 1
    }

    fn span_line(&self, span: Range<usize>) -> usize {
        self.line(span.start)
    }

    fn missing(&self, path: &str, table: Range<usize>) -> ScenarioError {
        ScenarioError::MissingField {
            path: path.to_string(),
            line: self.span_line(table),
        }
    }

    fn invalid(&self, path: &str, reason: impl Into<String>, span: Range<usize>) -> ScenarioError {
        ScenarioError::InvalidValue {
            path: path.to_string(),
            reason: reason.into(),
            line: self.span_line(span),
        }
    }

    fn syntax(&self, error: toml::de::Error) -> ScenarioError {
        ScenarioError::Syntax {
            line: error.span().map(|s| self.line(s.start)).unwrap_or(1),
            message: error.message().trim().to_string(),
        }
    }

    fn required<'v, T>(
        &self,
        value: &'v Option<Spanned<T>>,
        path: &str,
        table: &Range<usize>,
    ) -> Result<&'v Spanned<T>, ScenarioError> {
        value.as_ref().ok_or_else(|| self.missing(path, table.clone()))
    }

    /// A finite number satisfying `check`, otherwise `InvalidValue(reason)`.
    fn number(
        &self,
        value: &Spanned<f64>,
        path: &str,
        reason: &str,
        check: impl Fn(f64) -> bool,
    ) -> Result<f64, ScenarioError> {
        let x = *value.get_ref();
        if x.is_finite() && check(x) {
            Ok(x)
        } else {
            Err(self.invalid(path, reason, value.span()))
        }
    }

    fn positive(&self, value: &Spanned<f64>, path: &str) -> Result<f64, ScenarioError> {
        self.number(value, path, "must be positive", |x| x > 0.0)
    }
}

/// Parses a scenario against the built-in material table.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    parse_scenario_with(text, &MaterialCatalog::builtin())
}

/// Parses a scenario; `[[material]]` entries in the file override `catalog`.
pub fn parse_scenario_with(text: &str, catalog: &MaterialCatalog) -> Result<Scenario, ScenarioError> {
    let loc = Locator { text };
    let raw: RawScenario = toml::from_str(text).map_err(|e| loc.syntax(e))?;
    let whole = 0..text.len();

    check_schema(&loc, raw.schema.as_ref(), "schema", &whole)?;

    let mut catalog = catalog.clone();
    for entry in &raw.material {
        catalog
            .insert(entry.get_ref().clone())
            .map_err(|e| loc.invalid("material", e.to_string(), entry.span()))?;
    }

    let criterion = match &raw.criterion {
        None => ResolutionCriterion::default(),
        Some(table) => parse_criterion(&loc, table)?,
    };

    let kind_field = raw.kind.as_ref();
    let kind = match kind_field.map(|k| k.get_ref().as_str()) {
        Some("exact") => {
            let table = section(&loc, &raw.exact, "exact", kind_field)?;
            parse_exact(&loc, table)?
        }
        Some("rigid_body") => {
            let table = section(&loc, &raw.rigid_body, "rigid_body", kind_field)?;
            ScenarioKind::RigidBody(parse_rigid_body(&loc, table, &catalog)?)
        }
        Some("flux_qubit") => {
            let table = section(&loc, &raw.flux_qubit, "flux_qubit", kind_field)?;
            ScenarioKind::FluxQubit(parse_flux_qubit(&loc, table)?)
        }
        other => {
            return Err(ScenarioError::UnknownScenarioKind {
                found: other.map(str::to_string),
                line: kind_field.map(|k| loc.span_line(k.span())).unwrap_or(1),
            })
        }
    };

    Ok(Scenario {
        name: raw.name.unwrap_or_else(|| kind.label().to_string()),
        kind,
        criterion,
    })
}

/// Parses a standalone state file (the `exact --state-a/--state-b` input).
pub fn parse_state(text: &str) -> Result<ManyBodyState, ScenarioError> {
    let loc = Locator { text };
    let raw: RawState = toml::from_str(text).map_err(|e| loc.syntax(e))?;
    if let Some(schema) = &raw.schema {
        check_schema(&loc, Some(schema), "schema", &(0..text.len()))?;
    }
    build_state(&loc, &raw, "", 0..text.len())
}

/// Checks that two independently parsed states share a mode basis.
pub fn check_same_basis(
    a: &ManyBodyState,
    b: &ManyBodyState,
    path_b: &str,
    line_b: usize,
) -> Result<(), ScenarioError> {
    if a.basis() == b.basis() {
        Ok(())
    } else {
        Err(ScenarioError::InvalidValue {
            path: path_b.to_string(),
            reason: "mode basis differs from state_a".into(),
            line: line_b,
        })
    }
}

fn check_schema(
    loc: &Locator<'_>,
    schema: Option<&Spanned<i64>>,
    path: &str,
    whole: &Range<usize>,
) -> Result<(), ScenarioError> {
    let schema = schema.ok_or_else(|| loc.missing(path, whole.clone()))?;
    if *schema.get_ref() != SCHEMA_VERSION {
        return Err(loc.invalid(path, format!("unsupported schema version (expected {SCHEMA_VERSION})"), schema.span()));
    }
    Ok(())
}

fn section<'a, T>(
    loc: &Locator<'_>,
    table: &'a Option<Spanned<T>>,
    name: &str,
    kind: Option<&Spanned<String>>,
) -> Result<&'a Spanned<T>, ScenarioError> {
    table.as_ref().ok_or_else(|| ScenarioError::MissingField {
        path: name.to_string(),
        line: kind.map(|k| loc.span_line(k.span())).unwrap_or(1),
    })
}

fn parse_criterion(loc: &Locator<'_>, table: &Spanned<RawCriterion>) -> Result<ResolutionCriterion, ScenarioError> {
    let raw = table.get_ref();
    let defaults = ResolutionCriterion::default();
    let length = match &raw.min_resolvable_length_um {
        Some(v) => loc.positive(v, "criterion.min_resolvable_length_um")? * UM,
        None => defaults.min_resolvable_length,
    };
    let time = match &raw.max_observation_time_s {
        Some(v) => loc.positive(v, "criterion.max_observation_time_s")?,
        None => defaults.max_observation_time,
    };
    ResolutionCriterion::new(length, time).map_err(|e| loc.invalid("criterion", e.to_string(), table.span()))
}

fn parse_rigid_body(
    loc: &Locator<'_>,
    table: &Spanned<RawRigidBody>,
    catalog: &MaterialCatalog,
) -> Result<RigidBodySpec, ScenarioError> {
    let raw = table.get_ref();
    let span = table.span();

    let material_name = loc.required(&raw.material, "rigid_body.material", &span)?;
    let material = catalog
        .get(material_name.get_ref())
        .map_err(|e| loc.invalid("rigid_body.material", e.to_string(), material_name.span()))?
        .clone();

    let geometry = match (&raw.sphere_diameter_um, &raw.cube_side_um) {
        (Some(d), None) => Geometry::SphereDiameter(loc.positive(d, "rigid_body.sphere_diameter_um")? * UM),
        (None, Some(s)) => Geometry::CubeSide(loc.positive(s, "rigid_body.cube_side_um")? * UM),
        (Some(_), Some(s)) => {
            return Err(loc.invalid(
                "rigid_body.cube_side_um",
                "give either sphere_diameter_um or cube_side_um, not both",
                s.span(),
            ))
        }
        (None, None) => return Err(loc.missing("rigid_body.sphere_diameter_um", span)),
    };

    let displacement = loc.number(
        loc.required(&raw.displacement_um, "rigid_body.displacement_um", &span)?,
        "rigid_body.displacement_um",
        "must be non-negative",
        |x| x >= 0.0,
    )? * UM;
    let duration = loc.positive(loc.required(&raw.duration_s, "rigid_body.duration_s", &span)?, "rigid_body.duration_s")?;

    let mode_field = loc.required(&raw.mode, "rigid_body.mode", &span)?;
    let mode = match mode_field.get_ref().as_str() {
        "paper" => EstimationMode::Paper,
        "first_principles" => EstimationMode::FirstPrinciples,
        _ => {
            return Err(loc.invalid(
                "rigid_body.mode",
                "must be \"paper\" or \"first_principles\"",
                mode_field.span(),
            ))
        }
    };

    let nucleon_treatment = match &raw.nucleon_treatment {
        None => NucleonTreatment::IntranuclearNucleons,
        Some(t) => match t.get_ref().as_str() {
            "intranuclear_nucleons" => NucleonTreatment::IntranuclearNucleons,
            "atomic_rms" => NucleonTreatment::AtomicRms,
            "nucleus_composite" => NucleonTreatment::NucleusComposite,
            _ => {
                return Err(loc.invalid(
                    "rigid_body.nucleon_treatment",
                    "must be \"intranuclear_nucleons\", \"atomic_rms\" or \"nucleus_composite\"",
                    t.span(),
                ))
            }
        },
    };
    if nucleon_treatment == NucleonTreatment::NucleusComposite && material.nuclei.is_empty() {
        return Err(loc.invalid(
            "rigid_body.nucleon_treatment",
            format!("material `{}` lists no nuclei", material.name),
            raw.nucleon_treatment.as_ref().map(|t| t.span()).unwrap_or(span.clone()),
        ));
    }

    let optional_positive = |value: &Option<Spanned<f64>>, path: &str| -> Result<Option<f64>, ScenarioError> {
        value.as_ref().map(|v| loc.positive(v, path)).transpose()
    };

    let electron_count_override = optional_positive(&raw.electron_count, "rigid_body.electron_count")?;
    let available_magnification = match &raw.magnification {
        Some(m) => loc.number(m, "rigid_body.magnification", "must be at least 1", |x| x >= 1.0)?,
        None => 1.0,
    };

    let mut velocity_model = VelocityModel::default();
    if let Some(x) = optional_positive(&raw.intranuclear_multiplier, "rigid_body.intranuclear_multiplier")? {
        velocity_model.intranuclear_multiplier = x;
    }
    if let Some(x) = optional_positive(&raw.atomic_rms_multiplier, "rigid_body.atomic_rms_multiplier")? {
        velocity_model.atomic_rms_multiplier = x;
    }

    let mut paper_inputs = PaperInputs::default();
    if let Some(x) = optional_positive(&raw.paper_electron_count, "rigid_body.paper_electron_count")? {
        paper_inputs.electron_count = x;
    }
    if let Some(x) = optional_positive(&raw.paper_reference_diameter_um, "rigid_body.paper_reference_diameter_um")? {
        paper_inputs.reference_diameter = x * UM;
    }
    if let Some(x) = optional_positive(&raw.paper_electron_v0_cm_s, "rigid_body.paper_electron_v0_cm_s")? {
        paper_inputs.electron_v0 = x;
    }
    if let Some(x) = optional_positive(&raw.paper_nucleon_ratio, "rigid_body.paper_nucleon_ratio")? {
        paper_inputs.nucleon_count_ratio = x;
    }

    let spec = RigidBodySpec {
        material,
        geometry,
        displacement,
        duration,
        electron_count_override,
        nucleon_treatment,
        mode,
        paper_inputs,
        velocity_model,
        available_magnification,
    };
    spec.validate()
        .map_err(|e| loc.invalid("rigid_body", e.to_string(), span))?;
    Ok(spec)
}

fn parse_flux_qubit(loc: &Locator<'_>, table: &Spanned<RawFluxQubit>) -> Result<FluxQubitSpec, ScenarioError> {
    let raw = table.get_ref();
    let span = table.span();
    let n_electrons = loc.positive(
        loc.required(&raw.n_electrons, "flux_qubit.n_electrons", &span)?,
        "flux_qubit.n_electrons",
    )?;
    let velocity_ratio = loc.number(
        loc.required(&raw.velocity_ratio, "flux_qubit.velocity_ratio", &span)?,
        "flux_qubit.velocity_ratio",
        "must be in [0,1]",
        |x| (0.0..=1.0).contains(&x),
    )?;
    let gap_ratio = loc.number(
        loc.required(&raw.gap_ratio, "flux_qubit.gap_ratio", &span)?,
        "flux_qubit.gap_ratio",
        "must be in (0,1)",
        |x| x > 0.0 && x < 1.0,
    )?;
    let condensate = CondensateSpec::new(n_electrons, gap_ratio)
        .map_err(|e| loc.invalid("flux_qubit", e.to_string(), span.clone()))?;

    let configuration = match raw.configuration.as_ref() {
        None => FluxConfiguration::Symmetric,
        Some(c) => match c.get_ref().as_str() {
            "symmetric" => FluxConfiguration::Symmetric,
            "asymmetric" => {
                let a = loc.required(&raw.com_a, "flux_qubit.com_a", &span)?;
                let b = loc.required(&raw.com_b, "flux_qubit.com_b", &span)?;
                let a_wave = parse_com(loc, a, "flux_qubit.com_a")?;
                let b_wave = parse_com(loc, b, "flux_qubit.com_b")?;
                crate::composites::com_overlap(&a_wave, &b_wave)
                    .map_err(|e| loc.invalid("flux_qubit.com_b", e.to_string(), b.span()))?;
                FluxConfiguration::Asymmetric(a_wave, b_wave)
            }
            _ => {
                return Err(loc.invalid(
                    "flux_qubit.configuration",
                    "must be \"symmetric\" or \"asymmetric\"",
                    c.span(),
                ))
            }
        },
    };
    if matches!(configuration, FluxConfiguration::Symmetric) {
        if let Some(extra) = raw.com_a.as_ref().or(raw.com_b.as_ref()) {
            return Err(loc.invalid(
                "flux_qubit.configuration",
                "COM wavefunctions are only used with configuration = \"asymmetric\"",
                extra.span(),
            ));
        }
    }

    Ok(FluxQubitSpec {
        n_electrons,
        velocity_ratio,
        condensate,
        configuration,
    })
}

fn parse_com(loc: &Locator<'_>, table: &Spanned<RawCom>, path: &str) -> Result<COMWavefunction, ScenarioError> {
    let raw = table.get_ref();
    let span = table.span();
    let field = |name: &str| format!("{path}.{name}");
    let model = loc.required(&raw.model, &field("model"), &span)?;
    match model.get_ref().as_str() {
        "ring" => {
            let l = loc.required(&raw.angular_momentum, &field("angular_momentum"), &span)?;
            let angular_momentum = loc.number(l, &field("angular_momentum"), "must be finite", |_| true)?;
            Ok(COMWavefunction::RingMode { angular_momentum })
        }
        "gaussian" => {
            let center = loc.number(
                loc.required(&raw.center_um, &field("center_um"), &span)?,
                &field("center_um"),
                "must be finite",
                |_| true,
            )?;
            let k = match &raw.mean_wavenumber_per_um {
                Some(k) => loc.number(k, &field("mean_wavenumber_per_um"), "must be finite", |_| true)?,
                None => 0.0,
            };
            let width = loc.positive(loc.required(&raw.width_um, &field("width_um"), &span)?, &field("width_um"))?;
            Ok(COMWavefunction::Gaussian {
                center: center * UM,
                mean_wavenumber: k / UM,
                width: width * UM,
            })
        }
        _ => Err(loc.invalid(&field("model"), "must be \"ring\" or \"gaussian\"", model.span())),
    }
}

fn parse_exact(loc: &Locator<'_>, table: &Spanned<RawExact>) -> Result<ScenarioKind, ScenarioError> {
    let raw = table.get_ref();
    let span = table.span();
    let a = loc.required(&raw.state_a, "exact.state_a", &span)?;
    let b = loc.required(&raw.state_b, "exact.state_b", &span)?;
    let state_a = build_state(loc, a.get_ref(), "exact.state_a.", a.span())?;
    let state_b = build_state(loc, b.get_ref(), "exact.state_b.", b.span())?;
    check_same_basis(&state_a, &state_b, "exact.state_b", loc.span_line(b.span()))?;
    Ok(ScenarioKind::Exact { state_a, state_b })
}

fn build_state(
    loc: &Locator<'_>,
    raw: &RawState,
    prefix: &str,
    span: Range<usize>,
) -> Result<ManyBodyState, ScenarioError> {
    let field = |name: &str| format!("{prefix}{name}");

    let statistics_field = loc.required(&raw.statistics, &field("statistics"), &span)?;
    let statistics = match statistics_field.get_ref().as_str() {
        "fermionic" => Statistics::Fermionic,
        "bosonic" => Statistics::Bosonic,
        _ => {
            return Err(loc.invalid(
                &field("statistics"),
                "must be \"fermionic\" or \"bosonic\"",
                statistics_field.span(),
            ))
        }
    };
    let modes_field = loc.required(&raw.num_modes, &field("num_modes"), &span)?;
    let num_modes = usize::try_from(*modes_field.get_ref())
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| loc.invalid(&field("num_modes"), "must be a positive integer", modes_field.span()))?;
    let max_occupancy = match (&raw.max_occupancy, statistics) {
        (Some(m), _) => u32::try_from(*m.get_ref())
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| loc.invalid(&field("max_occupancy"), "must be a positive integer", m.span()))?,
        (None, Statistics::Fermionic) => 1,
        (None, Statistics::Bosonic) => return Err(loc.missing(&field("max_occupancy"), span)),
    };
    if statistics == Statistics::Fermionic && max_occupancy != 1 {
        let m = raw.max_occupancy.as_ref().expect("checked above");
        return Err(loc.invalid(&field("max_occupancy"), "must be 1 for fermions", m.span()));
    }
    let basis = ModeBasis::new(num_modes, statistics, max_occupancy)
        .map_err(|e| loc.invalid(&field("num_modes"), e.to_string(), modes_field.span()))?;

    let terms_field = loc.required(&raw.terms, &field("terms"), &span)?;
    let mut terms = Vec::new();
    for term in terms_field.get_ref() {
        let t = term.get_ref();
        let occ_field = loc.required(&t.occupations, &field("terms.occupations"), &term.span())?;
        let occupations: Vec<u32> = occ_field
            .get_ref()
            .iter()
            .map(|&n| u32::try_from(n))
            .collect::<Result<_, _>>()
            .map_err(|_| loc.invalid(&field("terms.occupations"), "entries must be non-negative integers", occ_field.span()))?;
        basis
            .validate(&occupations)
            .map_err(|e| loc.invalid(&field("terms.occupations"), e.to_string(), occ_field.span()))?;
        let re = match &t.re {
            Some(v) => loc.number(v, &field("terms.re"), "must be finite", |_| true)?,
            None => 0.0,
        };
        let im = match &t.im {
            Some(v) => loc.number(v, &field("terms.im"), "must be finite", |_| true)?,
            None => 0.0,
        };
        if t.re.is_none() && t.im.is_none() {
            return Err(loc.missing(&field("terms.re"), term.span()));
        }
        terms.push((occupations, Complex64::new(re, im)));
    }
    ManyBodyState::from_terms(basis, terms)
        .map_err(|e| loc.invalid(&field("terms"), e.to_string(), terms_field.span()))
}
