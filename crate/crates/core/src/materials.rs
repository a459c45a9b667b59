//! Material data: density, stoichiometry and lattice scale.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable naming an extra material table.
pub const MATERIALS_ENV: &str = "CATSIZE_MATERIALS";

const BUILTIN_TABLE: &str = include_str!("../data/materials.toml");

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("unknown material `{0}`")]
    UnknownMaterial(String),
    #[error("material `{name}`: {reason}")]
    Invalid { name: String, reason: String },
    #[error("material table: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("reading material table {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Nucleus {
    pub name: String,
    pub mass_number: u32,
    pub per_formula_unit: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub name: String,
    #[serde(rename = "mass_density_g_cm3")]
    pub mass_density: f64,
    #[serde(rename = "molar_mass_g_mol")]
    pub molar_mass: f64,
    pub electrons_per_formula_unit: u32,
    pub nucleons_per_formula_unit: u32,
    /// Linear dimension of the cubic unit cell, cm.
    #[serde(rename = "cell_dimension_cm")]
    pub cell_dimension_a: f64,
    #[serde(default)]
    pub nuclei: Vec<Nucleus>,
}

impl Material {
    pub fn validate(&self) -> Result<(), MaterialError> {
        let invalid = |reason: &str| MaterialError::Invalid {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.mass_density) {
            return Err(invalid("mass_density_g_cm3 must be positive"));
        }
        if !positive(self.molar_mass) {
            return Err(invalid("molar_mass_g_mol must be positive"));
        }
        if !positive(self.cell_dimension_a) {
            return Err(invalid("cell_dimension_cm must be positive"));
        }
        if self.electrons_per_formula_unit == 0 || self.nucleons_per_formula_unit == 0 {
            return Err(invalid("particle counts per formula unit must be positive"));
        }
        if !self.nuclei.is_empty() {
            let total: u32 = self
                .nuclei
                .iter()
                .map(|n| n.mass_number * n.per_formula_unit)
                .sum();
            if total != self.nucleons_per_formula_unit {
                return Err(invalid(&format!(
                    "nuclei carry {total} nucleons per formula unit, expected {}",
                    self.nucleons_per_formula_unit
                )));
            }
            if self.nuclei.iter().any(|n| n.mass_number == 0 || n.per_formula_unit == 0) {
                return Err(invalid("nucleus mass numbers and multiplicities must be positive"));
            }
        }
        Ok(())
    }

    pub fn nucleon_electron_ratio(&self) -> f64 {
        f64::from(self.nucleons_per_formula_unit) / f64::from(self.electrons_per_formula_unit)
    }

    pub fn nuclei_per_formula_unit(&self) -> u32 {
        self.nuclei.iter().map(|n| n.per_formula_unit).sum()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    #[serde(default)]
    material: Vec<Material>,
}

/// Name-indexed material table.
#[derive(Debug, Clone, Default)]
pub struct MaterialCatalog {
    entries: BTreeMap<String, Material>,
}

impl MaterialCatalog {
    pub fn builtin() -> Self {
        let mut catalog = Self::default();
        catalog
            .merge_toml(BUILTIN_TABLE)
            .expect("built-in material table is valid");
        catalog
    }

    /// Built-ins, overlaid with the table named by `CATSIZE_MATERIALS` if set.
    pub fn from_env() -> Result<Self, MaterialError> {
        let mut catalog = Self::builtin();
        if let Some(path) = std::env::var_os(MATERIALS_ENV) {
            catalog.merge_file(Path::new(&path))?;
        }
        Ok(catalog)
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), MaterialError> {
        let text = std::fs::read_to_string(path).map_err(|source| MaterialError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.merge_toml(&text)
    }

    pub fn merge_toml(&mut self, text: &str) -> Result<(), MaterialError> {
        let file: MaterialFile = toml::from_str(text)?;
        for material in file.material {
            self.insert(material)?;
        }
        Ok(())
    }

    pub fn insert(&mut self, material: Material) -> Result<(), MaterialError> {
        material.validate()?;
        self.entries.insert(material.name.clone(), material);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Material, MaterialError> {
        self.entries
            .get(name)
            .ok_or_else(|| MaterialError::UnknownMaterial(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Built-in lithium fluoride.
pub fn lif() -> Material {
    MaterialCatalog::builtin()
        .get("LiF")
        .expect("LiF is built in")
        .clone()
}
