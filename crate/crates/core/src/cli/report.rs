//! Report document and its table/JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::composites::PairReport;
use crate::distinctness::Distinctness;
use crate::estimators::SpeciesContribution;

pub const CONVENTIONS: [&str; 2] = [
    "w_raw = sum_k |<n_k>_A - <n_k>_B|",
    "w_particles = w_raw / 2 (number of shifted particles)",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub kind: String,
    pub inputs: BTreeMap<String, Value>,
}

/// Exact-engine quantities for a pair of explicit states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSummary {
    pub occupations_a: Vec<f64>,
    pub occupations_b: Vec<f64>,
    pub w_raw_fixed_basis: f64,
    pub w_raw_natural: f64,
    pub overlap_re: f64,
    pub overlap_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: ScenarioEcho,
    pub mode: String,
    pub species: Vec<SpeciesContribution>,
    pub total_w_particles: f64,
    pub total_w_raw: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_cp: Option<PairReport>,
    pub classification: Option<Distinctness>,
    pub conventions: Vec<String>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected table or json)")),
        }
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Table => render_table(report),
    }
}

/// Pretty JSON with a trailing newline; keys follow struct order.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports hold only finite numbers");
    text.push('\n');
    text
}

pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

/// Six significant digits, exponent form outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        let text = format!("{x:.5e}");
        let (mantissa, exp) = text.split_once('e').expect("exponent form");
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_else(|| "-".to_string())
}

fn render_table(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {} ({})", report.scenario.name, report.scenario.kind);
    let _ = writeln!(out, "mode: {}", report.mode);

    let header = ["species", "N", "v [cm/s]", "v0 [cm/s]", "v/v0", "contribution"];
    let rows: Vec<[String; 6]> = report
        .species
        .iter()
        .map(|s| {
            [
                s.name.clone(),
                sig6(s.count),
                opt(s.shift_velocity),
                opt(s.characteristic_velocity),
                opt(s.velocity_ratio),
                sig6(s.w_particles),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut text = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i == 0 {
                let _ = write!(text, "{cell:<w$}");
            } else {
                let _ = write!(text, "  {cell:>w$}");
            }
        }
        text.trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(&header.map(String::from)));
    for row in &rows {
        let _ = writeln!(out, "{}", line(row));
    }
    let _ = writeln!(out, "total {}", sig6(report.total_w_particles));
    let _ = writeln!(out, "total_w_raw {}", sig6(report.total_w_raw));

    if let Some(pair) = &report.w_cp {
        let _ = writeln!(
            out,
            "w_cp {} (N_p {}, K {})",
            sig6(pair.w_cp),
            sig6(pair.n_pairs),
            sig6(pair.overlap_k)
        );
    }
    if let Some(exact) = &report.exact {
        let _ = writeln!(
            out,
            "w_raw fixed basis {}, natural orbitals {}, |<A|B>| {}",
            sig6(exact.w_raw_fixed_basis),
            sig6(exact.w_raw_natural),
            sig6(exact.overlap_re.hypot(exact.overlap_im))
        );
    }
    if let Some(c) = &report.classification {
        let _ = writeln!(out, "classification: {}", c.label());
    }
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    for warning in &report.warnings {
        let _ = writeln!(out, "warning: {warning}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::SpeciesKind;

    fn empty() -> Report {
        Report {
            scenario: ScenarioEcho {
                name: "empty".into(),
                kind: "rigid_body".into(),
                inputs: BTreeMap::new(),
            },
            mode: "paper".into(),
            species: vec![],
            total_w_particles: 0.0,
            total_w_raw: 0.0,
            w_cp: None,
            classification: None,
            conventions: CONVENTIONS.map(String::from).to_vec(),
            notes: vec![],
            warnings: vec![],
            exact: None,
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig6(1626.6666666666667), "1626.67");
        assert_eq!(sig6(5000.0), "5000");
        assert_eq!(sig6(1e7), "1e7");
        assert_eq!(sig6(4.8047209996787e13), "4.80472e13");
        assert_eq!(sig6(0.22), "0.22");
        assert_eq!(sig6(5e-4), "0.0005");
        assert_eq!(sig6(1.666666e-12), "1.66667e-12");
        assert_eq!(sig6(-3.5), "-3.5");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn empty_table() {
        let text = render(&empty(), Format::Table);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[2].starts_with("species"));
        assert!(lines.contains(&"total 0"));
    }

    #[test]
    fn table_aligns_columns() {
        let mut r = empty();
        r.species.push(SpeciesContribution {
            name: "electrons".into(),
            kind: SpeciesKind::Electrons,
            count: 8e14,
            shift_velocity: Some(5e-4),
            characteristic_velocity: Some(3e8),
            velocity_ratio: Some(5e-4 / 3e8),
            w_particles: 4000.0 / 3.0,
        });
        let text = render(&r, Format::Table);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[2].len(), lines[3].len());
        assert!(lines[3].ends_with("1333.33"));
    }

    #[test]
    fn json_round_trip() {
        let mut r = empty();
        r.total_w_particles = 1626.6666666666667;
        r.total_w_raw = 2.0 * r.total_w_particles;
        r.classification = Some(Distinctness::Mesoscopic {
            required_magnification: 3.0000000000000004,
        });
        r.scenario.inputs.insert("duration_s".into(), Value::from(1.0));
        let text = render(&r, Format::Json);
        assert!(text.contains("\"total_w_particles\": 1626.6666666666667"));
        assert!(!text.contains("w_cp"));
        assert_eq!(from_json(&text).unwrap(), r);
    }

    #[test]
    fn format_names() {
        assert_eq!("json".parse::<Format>(), Ok(Format::Json));
        assert!("yaml".parse::<Format>().is_err());
    }
}
