//! The built-in scenario set and its comparison against the quoted figures.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::report::{render, sig6, Format, Report};
use super::run::{run_scenario, RunError};
use super::scenario::{parse_scenario, ScenarioError};
use crate::estimators::{PhysicalConstants, SpeciesKind};

/// `(file name, contents)` of every built-in scenario, in run order.
pub const BUILTIN_SCENARIOS: [(&str, &str); 10] = [
    ("lif-5um-paper.toml", include_str!("../../scenarios/lif-5um-paper.toml")),
    ("lif-5um-first-principles.toml", include_str!("../../scenarios/lif-5um-first-principles.toml")),
    ("lif-5um-paper-atomic-rms.toml", include_str!("../../scenarios/lif-5um-paper-atomic-rms.toml")),
    ("lif-5um-paper-nuclei.toml", include_str!("../../scenarios/lif-5um-paper-nuclei.toml")),
    ("lif-1.5um-first-principles.toml", include_str!("../../scenarios/lif-1.5um-first-principles.toml")),
    ("lif-1.5um-paper.toml", include_str!("../../scenarios/lif-1.5um-paper.toml")),
    ("flux-qubit-1e9-symmetric.toml", include_str!("../../scenarios/flux-qubit-1e9-symmetric.toml")),
    ("flux-qubit-1e10-symmetric.toml", include_str!("../../scenarios/flux-qubit-1e10-symmetric.toml")),
    (
        "flux-qubit-1e10-asymmetric-gaussian.toml",
        include_str!("../../scenarios/flux-qubit-1e10-asymmetric-gaussian.toml"),
    ),
    ("exact-single-hop.toml", include_str!("../../scenarios/exact-single-hop.toml")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub claim: String,
    /// Reference figure, as quoted; `-` where none is given.
    pub quoted: String,
    pub computed: f64,
    pub mode: String,
    pub scenario: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub reports: Vec<Report>,
    pub comparison: Vec<ComparisonRow>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReproduceError {
    #[error("built-in scenario {file}: {source}")]
    Scenario {
        file: String,
        #[source]
        source: ScenarioError,
    },
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("built-in scenario `{0}` is missing from the run")]
    MissingReport(String),
}

pub fn reproduce_paper(constants: &PhysicalConstants) -> Result<Reproduction, ReproduceError> {
    let mut reports = Vec::with_capacity(BUILTIN_SCENARIOS.len());
    for (file, text) in BUILTIN_SCENARIOS {
        let scenario = parse_scenario(text).map_err(|source| ReproduceError::Scenario {
            file: file.to_string(),
            source,
        })?;
        reports.push(run_scenario(&scenario, constants)?);
    }
    let comparison = comparison_rows(&reports)?;
    Ok(Reproduction { reports, comparison })
}

fn comparison_rows(reports: &[Report]) -> Result<Vec<ComparisonRow>, ReproduceError> {
    let find = |name: &str| {
        reports
            .iter()
            .find(|r| r.scenario.name == name)
            .ok_or_else(|| ReproduceError::MissingReport(name.to_string()))
    };
    let mut rows = Vec::new();
    let mut push = |claim: &str, quoted: &str, computed: f64, report: &Report| {
        rows.push(ComparisonRow {
            claim: claim.to_string(),
            quoted: quoted.to_string(),
            computed,
            mode: report.mode.clone(),
            scenario: report.scenario.name.clone(),
        });
    };
    let electrons = |r: &Report| species_sum(r, SpeciesKind::Electrons);
    let nucleon_ratio = |r: &Report| species_sum(r, SpeciesKind::Nucleons) / electrons(r);

    for name in ["lif-5um-paper", "lif-5um-first-principles"] {
        let r = find(name)?;
        push("W, 5 um LiF, electrons + intranuclear nucleons", "1600", r.total_w_particles, r);
    }
    for name in ["lif-5um-paper", "lif-5um-first-principles"] {
        let r = find(name)?;
        push("nucleon/electron contribution ratio", "0.2", nucleon_ratio(r), r);
    }
    let r = find("lif-5um-paper-atomic-rms")?;
    push("W, 5 um LiF, nucleons at atomic rms velocity", "-", r.total_w_particles, r);
    let r = find("lif-5um-paper-nuclei")?;
    push("W, 5 um LiF, electrons + nuclei", "1e5", r.total_w_particles, r);
    for name in ["lif-1.5um-first-principles", "lif-1.5um-paper"] {
        let r = find(name)?;
        push("W, 1.5 um LiF (minimum visible)", "<3", r.total_w_particles, r);
    }
    for name in ["flux-qubit-1e9-symmetric", "flux-qubit-1e10-symmetric"] {
        let r = find(name)?;
        push("W, flux qubit single electrons", "5000", r.total_w_particles, r);
    }
    for name in ["flux-qubit-1e9-symmetric", "flux-qubit-1e10-symmetric"] {
        let r = find(name)?;
        let w = r.w_cp.map(|p| p.w_cp).unwrap_or(f64::NAN);
        push("W_CP, symmetric flux qubit", "1e6-1e7", w, r);
    }
    let r = find("flux-qubit-1e10-asymmetric-gaussian")?;
    let w = r.w_cp.map(|p| p.w_cp).unwrap_or(f64::NAN);
    push("W_CP, asymmetric flux qubit (Gaussian COM model)", "-", w, r);

    let r = find("lif-5um-first-principles")?;
    let electron_row = r
        .species
        .iter()
        .find(|s| s.kind == SpeciesKind::Electrons)
        .ok_or_else(|| ReproduceError::MissingReport("lif-5um-first-principles electrons".into()))?;
    push(
        "band electron v0 = h/(m_e a) [cm/s]",
        "3e8",
        electron_row.characteristic_velocity.unwrap_or(f64::NAN),
        r,
    );
    push("electrons in 5 um LiF sphere", "8e14", electron_row.count, r);
    Ok(rows)
}

fn species_sum(report: &Report, kind: SpeciesKind) -> f64 {
    report
        .species
        .iter()
        .filter(|s| s.kind == kind)
        .map(|s| s.w_particles)
        .sum()
}

pub fn render_reproduction(reproduction: &Reproduction, format: Format) -> String {
    match format {
        Format::Json => super::report::to_json(reproduction),
        Format::Table => {
            let mut out = String::new();
            for report in &reproduction.reports {
                out.push_str(&render(report, Format::Table));
                out.push('\n');
            }
            out.push_str(&comparison_table(&reproduction.comparison));
            out
        }
    }
}

fn comparison_table(rows: &[ComparisonRow]) -> String {
    let header = ["claim", "quoted", "computed", "mode", "scenario"].map(String::from);
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.claim.clone(),
                r.quoted.clone(),
                sig6(r.computed),
                r.mode.clone(),
                r.scenario.clone(),
            ]
        })
        .collect();
    let mut widths = header.clone().map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::from("comparison with quoted figures\n");
    for row in std::iter::once(&header).chain(&cells) {
        let mut line = String::new();
        for (i, (cell, w)) in row.iter().zip(widths).enumerate() {
            if i == 2 {
                let _ = write!(line, "  {cell:>w$}");
            } else if i == 0 {
                let _ = write!(line, "{cell:<w$}");
            } else {
                let _ = write!(line, "  {cell:<w$}");
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_every_builtin_and_tags_rows() {
        let r = reproduce_paper(&PhysicalConstants::default()).unwrap();
        assert_eq!(r.reports.len(), BUILTIN_SCENARIOS.len());
        for quoted in ["1600", "5000", "1e6-1e7", "0.2", "<3"] {
            assert!(r.comparison.iter().any(|row| row.quoted == quoted), "{quoted}");
        }
        assert!(r.comparison.iter().all(|row| !row.mode.is_empty() && row.computed.is_finite()));
        let table = render_reproduction(&r, Format::Table);
        assert!(table.contains("comparison with quoted figures"));
    }
}
