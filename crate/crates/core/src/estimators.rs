//! Order-of-magnitude cat-size estimates for real bodies.
//!
//! Every constituent species contributes `N · v / v₀` shifted particles,
//! where `N` is the number of particles of that species, `v` the velocity
//! difference between the two branches and `v₀` a characteristic velocity
//! (band electrons: `h / (m_e a)`). All quantities are CGS.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composites::{self, CompositeError, Grouping};
use crate::distinctness::{self, Distinctness, DistinctnessError, ResolutionCriterion};
use crate::materials::Material;

pub const PLANCK_H: f64 = 6.62607015e-27;
pub const ELECTRON_MASS: f64 = 9.1093837e-28;
pub const SPEED_OF_LIGHT: f64 = 2.99792458e10;
pub const AVOGADRO: f64 = 6.02214076e23;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("characteristic velocity must be positive, got {0}")]
    NonpositiveV0(f64),
    #[error("particle count must be non-negative and finite, got {0}")]
    InvalidCount(f64),
    #[error("shift velocity must be non-negative and finite, got {0}")]
    InvalidVelocity(f64),
    #[error("velocity ratio must lie in [0, 1], got {0}")]
    RatioOutOfRange(f64),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("duration must be positive, got {0}")]
    NonpositiveDuration(f64),
    #[error("invalid velocity model: {0}")]
    InvalidVelocityModel(String),
    #[error("{0}")]
    Material(String),
    #[error(transparent)]
    Composite(#[from] CompositeError),
    #[error(transparent)]
    Distinctness(#[from] DistinctnessError),
}

/// Constants entering `v₀ = h / (m_e a)` and the composition arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// erg·s
    pub planck_h: f64,
    /// g
    pub electron_mass: f64,
    /// cm/s
    pub speed_of_light: f64,
    /// 1/mol
    pub avogadro: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            planck_h: PLANCK_H,
            electron_mass: ELECTRON_MASS,
            speed_of_light: SPEED_OF_LIGHT,
            avogadro: AVOGADRO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeciesKind {
    Electrons,
    Nucleons,
    Nucleus,
    CooperPairs,
    Other,
}

/// One constituent species: `N`, `v` and `v₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesPopulation {
    pub name: String,
    pub kind: SpeciesKind,
    pub count: f64,
    /// cm/s
    pub shift_velocity: f64,
    /// cm/s
    pub characteristic_velocity: f64,
}

impl SpeciesPopulation {
    pub fn new(
        name: impl Into<String>,
        kind: SpeciesKind,
        count: f64,
        shift_velocity: f64,
        characteristic_velocity: f64,
    ) -> Result<Self, EstimateError> {
        let species = Self {
            name: name.into(),
            kind,
            count,
            shift_velocity,
            characteristic_velocity,
        };
        species.validate()?;
        Ok(species)
    }

    pub fn validate(&self) -> Result<(), EstimateError> {
        if !(self.count >= 0.0) || !self.count.is_finite() {
            return Err(EstimateError::InvalidCount(self.count));
        }
        if !(self.shift_velocity >= 0.0) || !self.shift_velocity.is_finite() {
            return Err(EstimateError::InvalidVelocity(self.shift_velocity));
        }
        if !(self.characteristic_velocity > 0.0) {
            return Err(EstimateError::NonpositiveV0(self.characteristic_velocity));
        }
        Ok(())
    }

    pub fn velocity_ratio(&self) -> f64 {
        self.shift_velocity / self.characteristic_velocity
    }
}

/// `N · v / v₀`, in shifted particles.
pub fn contribution(species: &SpeciesPopulation) -> Result<f64, EstimateError> {
    species.validate()?;
    Ok(species.count * species.shift_velocity / species.characteristic_velocity)
}

/// `h / (m_e a)` for the band electrons of a crystal.
pub fn band_electron_v0(material: &Material, constants: &PhysicalConstants) -> f64 {
    constants.planck_h / (constants.electron_mass * material.cell_dimension_a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// Diameter, cm.
    SphereDiameter(f64),
    /// Edge length, cm.
    CubeSide(f64),
}

impl Geometry {
    pub fn volume(&self) -> f64 {
        match *self {
            Geometry::SphereDiameter(d) => std::f64::consts::PI / 6.0 * d.powi(3),
            Geometry::CubeSide(s) => s.powi(3),
        }
    }

    /// Diameter or edge length.
    pub fn size(&self) -> f64 {
        match *self {
            Geometry::SphereDiameter(d) | Geometry::CubeSide(d) => d,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            Geometry::SphereDiameter(d) => Geometry::SphereDiameter(d * factor),
            Geometry::CubeSide(s) => Geometry::CubeSide(s * factor),
        }
    }

    fn validate(&self) -> Result<(), EstimateError> {
        let size = self.size();
        if size.is_finite() && size > 0.0 {
            Ok(())
        } else {
            Err(EstimateError::InvalidGeometry(format!("size must be positive, got {size}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Composition {
    pub electron_count: f64,
    pub nucleon_count: f64,
    pub formula_units: f64,
}

/// Particle content of a body from its volume, density and stoichiometry.
pub fn composition(
    material: &Material,
    geometry: &Geometry,
    constants: &PhysicalConstants,
) -> Result<Composition, EstimateError> {
    geometry.validate()?;
    material
        .validate()
        .map_err(|e| EstimateError::Material(e.to_string()))?;
    let formula_units =
        geometry.volume() * material.mass_density / material.molar_mass * constants.avogadro;
    Ok(Composition {
        electron_count: formula_units * f64::from(material.electrons_per_formula_unit),
        nucleon_count: formula_units * f64::from(material.nucleons_per_formula_unit),
        formula_units,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NucleonTreatment {
    /// Free nucleons with the intranuclear rms velocity as `v₀`.
    IntranuclearNucleons,
    /// Free nucleons with the atomic rms velocity as `v₀`.
    AtomicRms,
    /// Whole nuclei with the atomic rms velocity as `v₀`.
    NucleusComposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimationMode {
    /// Inputs pinned to the quoted reference figures.
    Paper,
    /// Inputs derived from material data and constants.
    FirstPrinciples,
}

impl EstimationMode {
    pub fn label(&self) -> &'static str {
        match self {
            EstimationMode::Paper => "paper",
            EstimationMode::FirstPrinciples => "first_principles",
        }
    }

    pub fn other(&self) -> Self {
        match self {
            EstimationMode::Paper => EstimationMode::FirstPrinciples,
            EstimationMode::FirstPrinciples => EstimationMode::Paper,
        }
    }
}

/// Quoted reference inputs used in paper mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperInputs {
    /// Electrons in the reference body.
    pub electron_count: f64,
    /// Diameter of the reference sphere, cm.
    pub reference_diameter: f64,
    /// Band-electron `v₀`, cm/s.
    pub electron_v0: f64,
    /// Nucleons per electron.
    pub nucleon_count_ratio: f64,
}

impl Default for PaperInputs {
    fn default() -> Self {
        Self {
            electron_count: 8e14,
            reference_diameter: 5e-4,
            electron_v0: 3e8,
            nucleon_count_ratio: 2.2,
        }
    }
}

impl PaperInputs {
    /// Electron count scaled from the reference sphere by volume.
    pub fn electron_count_for(&self, geometry: &Geometry) -> f64 {
        let reference = Geometry::SphereDiameter(self.reference_diameter).volume();
        self.electron_count * (geometry.volume() / reference)
    }
}

/// Nucleon characteristic velocities as multiples of the electron `v₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityModel {
    pub intranuclear_multiplier: f64,
    pub atomic_rms_multiplier: f64,
}

impl Default for VelocityModel {
    fn default() -> Self {
        Self {
            intranuclear_multiplier: 10.0,
            atomic_rms_multiplier: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidBodySpec {
    pub material: Material,
    pub geometry: Geometry,
    /// cm
    pub displacement: f64,
    /// s
    pub duration: f64,
    pub electron_count_override: Option<f64>,
    pub nucleon_treatment: NucleonTreatment,
    pub mode: EstimationMode,
    pub paper_inputs: PaperInputs,
    pub velocity_model: VelocityModel,
    pub available_magnification: f64,
}

impl RigidBodySpec {
    /// A body in the given mode with default reference inputs and velocity model.
    pub fn new(
        material: Material,
        geometry: Geometry,
        displacement: f64,
        duration: f64,
        nucleon_treatment: NucleonTreatment,
        mode: EstimationMode,
    ) -> Self {
        Self {
            material,
            geometry,
            displacement,
            duration,
            electron_count_override: None,
            nucleon_treatment,
            mode,
            paper_inputs: PaperInputs::default(),
            velocity_model: VelocityModel::default(),
            available_magnification: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), EstimateError> {
        self.geometry.validate()?;
        if !(self.duration > 0.0) {
            return Err(EstimateError::NonpositiveDuration(self.duration));
        }
        if !(self.displacement >= 0.0) || !self.displacement.is_finite() {
            return Err(EstimateError::InvalidGeometry(format!(
                "displacement must be non-negative, got {}",
                self.displacement
            )));
        }
        if let Some(n) = self.electron_count_override {
            if !(n > 0.0) || !n.is_finite() {
                return Err(EstimateError::InvalidCount(n));
            }
        }
        let vm = &self.velocity_model;
        if !(vm.intranuclear_multiplier > 0.0) || !(vm.atomic_rms_multiplier > 0.0) {
            return Err(EstimateError::InvalidVelocityModel(
                "multipliers must be positive".into(),
            ));
        }
        self.material
            .validate()
            .map_err(|e| EstimateError::Material(e.to_string()))
    }

    pub fn shift_velocity(&self) -> f64 {
        self.displacement / self.duration
    }

    /// The per-species populations this spec produces, before any
    /// contribution arithmetic.
    pub fn populations(&self, constants: &PhysicalConstants) -> Result<Vec<SpeciesPopulation>, EstimateError> {
        self.validate()?;
        let v = self.shift_velocity();
        let (electrons, nucleons, electron_v0) = match self.mode {
            EstimationMode::Paper => {
                let p = &self.paper_inputs;
                let electrons = self
                    .electron_count_override
                    .unwrap_or_else(|| p.electron_count_for(&self.geometry));
                (electrons, electrons * p.nucleon_count_ratio, p.electron_v0)
            }
            EstimationMode::FirstPrinciples => {
                let derived = composition(&self.material, &self.geometry, constants)?;
                let electrons = self.electron_count_override.unwrap_or(derived.electron_count);
                let nucleons = electrons * self.material.nucleon_electron_ratio();
                (electrons, nucleons, band_electron_v0(&self.material, constants))
            }
        };
        let vm = &self.velocity_model;
        let intranuclear_v0 = electron_v0 * vm.intranuclear_multiplier;
        let atomic_v0 = electron_v0 * vm.atomic_rms_multiplier;

        let mut species = vec![SpeciesPopulation::new(
            "electrons",
            SpeciesKind::Electrons,
            electrons,
            v,
            electron_v0,
        )?];
        match self.nucleon_treatment {
            NucleonTreatment::IntranuclearNucleons => species.push(SpeciesPopulation::new(
                "nucleons",
                SpeciesKind::Nucleons,
                nucleons,
                v,
                intranuclear_v0,
            )?),
            NucleonTreatment::AtomicRms => species.push(SpeciesPopulation::new(
                "nucleons",
                SpeciesKind::Nucleons,
                nucleons,
                v,
                atomic_v0,
            )?),
            NucleonTreatment::NucleusComposite => {
                let nucleon_species =
                    SpeciesPopulation::new("nucleons", SpeciesKind::Nucleons, nucleons, v, intranuclear_v0)?;
                let grouping = Grouping::Nuclei {
                    nuclei: self.material.nuclei.clone(),
                    atomic_rms_v0: atomic_v0,
                };
                species.extend(composites::regroup(&[nucleon_species], &grouping)?);
            }
        }
        Ok(species)
    }
}

/// One row of a cat-size report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesContribution {
    pub name: String,
    pub kind: SpeciesKind,
    pub count: f64,
    /// cm/s; absent when only the ratio `v/v₀` is known.
    pub shift_velocity: Option<f64>,
    /// cm/s; absent when only the ratio `v/v₀` is known.
    pub characteristic_velocity: Option<f64>,
    pub velocity_ratio: Option<f64>,
    pub w_particles: f64,
}

impl SpeciesContribution {
    pub fn from_population(species: &SpeciesPopulation) -> Result<Self, EstimateError> {
        Ok(Self {
            name: species.name.clone(),
            kind: species.kind,
            count: species.count,
            shift_velocity: Some(species.shift_velocity),
            characteristic_velocity: Some(species.characteristic_velocity),
            velocity_ratio: Some(species.velocity_ratio()),
            w_particles: contribution(species)?,
        })
    }
}

/// Per-species contributions and totals in both conventions:
/// `W_particles` counts shifted particles, `W_raw = Σ_k |Δn_k| = 2 W_particles`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatSizeReport {
    pub per_species: Vec<SpeciesContribution>,
    pub total_w_particles: f64,
    pub total_w_raw: f64,
    pub classification: Option<Distinctness>,
    pub notes: Vec<String>,
}

impl CatSizeReport {
    pub fn from_contributions(per_species: Vec<SpeciesContribution>) -> Self {
        let total_w_particles: f64 = per_species.iter().map(|s| s.w_particles).sum();
        Self {
            per_species,
            total_w_particles,
            total_w_raw: 2.0 * total_w_particles,
            classification: None,
            notes: Vec::new(),
        }
    }

    pub fn contribution_of(&self, kind: SpeciesKind) -> f64 {
        self.per_species
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| s.w_particles)
            .sum()
    }
}

/// Cat size of a rigid body moving relative to its rest state.
pub fn rigid_body_w(
    spec: &RigidBodySpec,
    constants: &PhysicalConstants,
    criterion: &ResolutionCriterion,
) -> Result<CatSizeReport, EstimateError> {
    let populations = spec.populations(constants)?;
    let rows = populations
        .iter()
        .map(SpeciesContribution::from_population)
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = CatSizeReport::from_contributions(rows);
    report.classification = Some(distinctness::classify(
        spec.displacement,
        spec.duration,
        spec.available_magnification,
        criterion,
    )?);
    match spec.mode {
        EstimationMode::Paper => {
            let p = &spec.paper_inputs;
            report.notes.push(match spec.electron_count_override {
                Some(n) => format!("paper mode: electron count {n:e} (configured)"),
                None => format!(
                    "paper mode: electron count scaled by volume from {:e} at {:e} cm diameter",
                    p.electron_count, p.reference_diameter
                ),
            });
            report.notes.push(format!(
                "paper mode: electron v0 = {:e} cm/s, nucleons per electron = {}",
                p.electron_v0, p.nucleon_count_ratio
            ));
        }
        EstimationMode::FirstPrinciples => {
            report.notes.push(format!(
                "first-principles mode: composition from density of {} and v0 = h/(m_e a) with a = {:e} cm",
                spec.material.name, spec.material.cell_dimension_a
            ));
        }
    }
    Ok(report)
}

/// Single-species estimate from a configured ratio `v/v₀`.
pub fn flux_qubit_w(n_electrons: f64, velocity_ratio: f64) -> Result<CatSizeReport, EstimateError> {
    if !(n_electrons > 0.0) || !n_electrons.is_finite() {
        return Err(EstimateError::InvalidCount(n_electrons));
    }
    if !(0.0..=1.0).contains(&velocity_ratio) {
        return Err(EstimateError::RatioOutOfRange(velocity_ratio));
    }
    let row = SpeciesContribution {
        name: "electrons".into(),
        kind: SpeciesKind::Electrons,
        count: n_electrons,
        shift_velocity: None,
        characteristic_velocity: None,
        velocity_ratio: Some(velocity_ratio),
        w_particles: n_electrons * velocity_ratio,
    };
    let mut report = CatSizeReport::from_contributions(vec![row]);
    report.notes.push(format!(
        "velocity_ratio = {velocity_ratio:e} is a configured input, not derived"
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::lif;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const UM: f64 = 1e-4;

    fn species(count: f64, v: f64, v0: f64) -> SpeciesPopulation {
        SpeciesPopulation::new("x", SpeciesKind::Other, count, v, v0).unwrap()
    }

    fn lif_sphere(d_um: f64, mode: EstimationMode, treatment: NucleonTreatment) -> RigidBodySpec {
        RigidBodySpec::new(lif(), Geometry::SphereDiameter(d_um * UM), d_um * UM, 1.0, treatment, mode)
    }

    fn total(spec: &RigidBodySpec) -> f64 {
        rigid_body_w(spec, &PhysicalConstants::default(), &ResolutionCriterion::default())
            .unwrap()
            .total_w_particles
    }

    #[test]
    fn contribution_examples() {
        assert_relative_eq!(contribution(&species(8e14, 5e-4, 3e8)).unwrap(), 4000.0 / 3.0, max_relative = 1e-14);
        assert_eq!(contribution(&species(1e12, 0.0, 7.0)).unwrap(), 0.0);
        assert_eq!(contribution(&species(1e9, 5e-6, 1.0)).unwrap(), 5000.0);
        assert_eq!(
            SpeciesPopulation::new("x", SpeciesKind::Other, 1.0, 1.0, 0.0),
            Err(EstimateError::NonpositiveV0(0.0))
        );
        assert!(SpeciesPopulation::new("x", SpeciesKind::Other, -1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn band_velocity() {
        let c = PhysicalConstants::default();
        let mut m = lif();
        // h / (m_e a) = 6.62607015e-27 / (9.1093837e-28 * 4.03e-8)
        assert_relative_eq!(band_electron_v0(&m, &c), 1.804_936_75e8, max_relative = 1e-9);
        let base = band_electron_v0(&m, &c);
        m.cell_dimension_a *= 2.0;
        assert_eq!(band_electron_v0(&m, &c), base / 2.0);
        m.cell_dimension_a = PLANCK_H / ELECTRON_MASS;
        assert_relative_eq!(band_electron_v0(&m, &c), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn lif_composition() {
        let c = PhysicalConstants::default();
        let small = composition(&lif(), &Geometry::SphereDiameter(5.0 * UM), &c).unwrap();
        // (π/6)(5e-4)³ · 2.635 / 25.939 · N_A · 12
        let oracle = std::f64::consts::PI / 6.0 * 1.25e-10 * 2.635 / 25.939 * AVOGADRO * 12.0;
        assert_relative_eq!(small.electron_count, oracle, max_relative = 1e-14);
        assert_relative_eq!(small.electron_count, 4.804_721e13, max_relative = 1e-6);
        assert_relative_eq!(small.nucleon_count / small.electron_count, 26.0 / 12.0, max_relative = 1e-14);
        let big = composition(&lif(), &Geometry::SphereDiameter(10.0 * UM), &c).unwrap();
        assert_relative_eq!(big.electron_count / small.electron_count, 8.0, max_relative = 1e-14);
        assert!(composition(&lif(), &Geometry::CubeSide(0.0), &c).is_err());
    }

    #[test]
    fn paper_mode_lif() {
        let spec = lif_sphere(5.0, EstimationMode::Paper, NucleonTreatment::IntranuclearNucleons);
        let report = rigid_body_w(&spec, &PhysicalConstants::default(), &ResolutionCriterion::default()).unwrap();
        let electrons = report.contribution_of(SpeciesKind::Electrons);
        let nucleons = report.contribution_of(SpeciesKind::Nucleons);
        assert_relative_eq!(electrons, 4000.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(nucleons / electrons, 0.22, max_relative = 1e-12);
        assert_relative_eq!(report.total_w_particles, 1_626.666_666_666_7, max_relative = 1e-12);
        assert_eq!(report.total_w_raw, 2.0 * report.total_w_particles);
        assert_eq!(report.classification, Some(Distinctness::Macroscopic));

        let tempting = lif_sphere(5.0, EstimationMode::Paper, NucleonTreatment::AtomicRms);
        assert_relative_eq!(total(&tempting), 4000.0 / 3.0 * (1.0 + 2200.0), max_relative = 1e-12);
    }

    #[test]
    fn treatment_ordering() {
        for mode in [EstimationMode::Paper, EstimationMode::FirstPrinciples] {
            for d in [1.5, 5.0, 20.0] {
                let w = |t| total(&lif_sphere(d, mode, t));
                let atomic = w(NucleonTreatment::AtomicRms);
                let nuclei = w(NucleonTreatment::NucleusComposite);
                let intranuclear = w(NucleonTreatment::IntranuclearNucleons);
                assert!(atomic > nuclei && nuclei > intranuclear, "{mode:?} {d}");
            }
        }
    }

    #[test]
    fn override_applies_in_both_modes() {
        for mode in [EstimationMode::Paper, EstimationMode::FirstPrinciples] {
            let mut spec = lif_sphere(5.0, mode, NucleonTreatment::IntranuclearNucleons);
            spec.electron_count_override = Some(1e10);
            let pops = spec.populations(&PhysicalConstants::default()).unwrap();
            assert_eq!(pops[0].count, 1e10);
        }
    }

    #[test]
    fn flux_qubit() {
        let r = flux_qubit_w(1e9, 5e-6).unwrap();
        assert_eq!(r.total_w_particles, 5000.0);
        assert_eq!(r.total_w_raw, 10000.0);
        assert_eq!(flux_qubit_w(1e10, 0.0).unwrap().total_w_particles, 0.0);
        assert_eq!(flux_qubit_w(1e10, 5e-7).unwrap().total_w_particles, 5000.0);
        assert!(r.notes.iter().any(|n| n.contains("configured input")));
        assert_eq!(flux_qubit_w(1e9, 1.5), Err(EstimateError::RatioOutOfRange(1.5)));
        assert!(flux_qubit_w(0.0, 0.1).is_err());
    }

    #[test]
    fn invalid_specs() {
        let mut spec = lif_sphere(5.0, EstimationMode::Paper, NucleonTreatment::IntranuclearNucleons);
        spec.duration = 0.0;
        assert!(matches!(spec.validate(), Err(EstimateError::NonpositiveDuration(_))));
        let mut spec = lif_sphere(5.0, EstimationMode::Paper, NucleonTreatment::IntranuclearNucleons);
        spec.electron_count_override = Some(-3.0);
        assert!(spec.validate().is_err());
    }

    proptest! {
        #[test]
        fn contribution_is_linear(n in 1.0f64..1e16, v in 1e-6f64..1e3, v0 in 1e3f64..1e10, k in 1.0f64..100.0) {
            let base = contribution(&species(n, v, v0)).unwrap();
            let tol = 1e-12 * base.abs();
            prop_assert!((contribution(&species(k * n, v, v0)).unwrap() - k * base).abs() <= tol * k);
            prop_assert!((contribution(&species(n, k * v, v0)).unwrap() - k * base).abs() <= tol * k);
            prop_assert!((contribution(&species(n, v, k * v0)).unwrap() - base / k).abs() <= tol);
        }

        #[test]
        fn totals_are_additive(d_um in 0.5f64..50.0, fp in any::<bool>()) {
            let mode = if fp { EstimationMode::FirstPrinciples } else { EstimationMode::Paper };
            let spec = lif_sphere(d_um, mode, NucleonTreatment::NucleusComposite);
            let r = rigid_body_w(&spec, &PhysicalConstants::default(), &ResolutionCriterion::default()).unwrap();
            let sum: f64 = r.per_species.iter().map(|s| s.w_particles).sum();
            prop_assert!((r.total_w_particles - sum).abs() <= 1e-12 * sum.max(1.0));
        }
    }
}
