//! Composite-particle regrouping and the Cooper-pair cat size.
//!
//! When constituents are bound into composites, the cat size can be counted
//! in terms of the composites instead: nucleons regroup into nuclei, and the
//! electrons of a superconductor into `N_p ≈ N (Δ/ε_F)` condensed pairs. For
//! pairs, the branch difference is carried by the pair center-of-mass (COM)
//! wavefunctions, and `W_CP = N_p (1 − K)` with `K` the modulus of their
//! overlap.
//!
//! Two COM models are available. Neither is derived from a microscopic
//! calculation; they are stand-ins that make `K` computable:
//!
//! * ring plane waves `e^{ilθ}` with a real effective angular momentum `l`
//!   (units of ħ), normalized on `θ ∈ [0, 2π)`;
//! * Gaussian packets `(2πσ²)^{-1/4} exp(−(x−x₀)²/(4σ²) + i k x)` of equal
//!   width.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimators::{SpeciesKind, SpeciesPopulation};
use crate::materials::Nucleus;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompositeError {
    #[error("gap ratio must lie in (0, 1), got {0}")]
    GapRatioOutOfRange(f64),
    #[error("electron count must be positive, got {0}")]
    InvalidElectronCount(f64),
    #[error("pair count must be non-negative, got {0}")]
    InvalidPairCount(f64),
    #[error("overlap must lie in [0, 1], got {0}")]
    OverlapOutOfRange(f64),
    #[error("COM wavefunctions belong to different model families")]
    ModelMismatch,
    #[error("Gaussian COM wavefunctions must have equal positive widths ({0} vs {1})")]
    UnequalWidths(f64, f64),
    #[error("invalid COM wavefunction: {0}")]
    InvalidWavefunction(String),
    #[error("grouping does not apply: {0}")]
    InapplicableGrouping(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensateSpec {
    n_electrons: f64,
    gap_ratio: f64,
}

impl CondensateSpec {
    pub fn new(n_electrons: f64, gap_ratio: f64) -> Result<Self, CompositeError> {
        if !(n_electrons > 0.0) || !n_electrons.is_finite() {
            return Err(CompositeError::InvalidElectronCount(n_electrons));
        }
        if !(gap_ratio > 0.0 && gap_ratio < 1.0) {
            return Err(CompositeError::GapRatioOutOfRange(gap_ratio));
        }
        Ok(Self {
            n_electrons,
            gap_ratio,
        })
    }

    pub fn n_electrons(&self) -> f64 {
        self.n_electrons
    }

    /// `Δ / ε_F`
    pub fn gap_ratio(&self) -> f64 {
        self.gap_ratio
    }
}

/// `N_p = N (Δ/ε_F)`: the macroscopic eigenvalue of the two-particle
/// reduced density matrix in BCS theory.
pub fn condensate_pair_count(spec: &CondensateSpec) -> f64 {
    spec.n_electrons * spec.gap_ratio
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum COMWavefunction {
    RingMode {
        /// Units of ħ.
        angular_momentum: f64,
    },
    Gaussian {
        /// cm
        center: f64,
        /// 1/cm
        mean_wavenumber: f64,
        /// cm
        width: f64,
    },
}

impl COMWavefunction {
    pub fn validate(&self) -> Result<(), CompositeError> {
        match *self {
            COMWavefunction::RingMode { angular_momentum } if !angular_momentum.is_finite() => Err(
                CompositeError::InvalidWavefunction("angular momentum must be finite".into()),
            ),
            COMWavefunction::Gaussian {
                center,
                mean_wavenumber,
                width,
            } => {
                if !(width > 0.0) || !width.is_finite() {
                    Err(CompositeError::InvalidWavefunction("Gaussian width must be positive".into()))
                } else if !center.is_finite() || !mean_wavenumber.is_finite() {
                    Err(CompositeError::InvalidWavefunction(
                        "Gaussian center and wavenumber must be finite".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// The two branches of a symmetric flux qubit: `l = ±1/2`.
    pub fn symmetric_pair() -> (Self, Self) {
        (
            COMWavefunction::RingMode {
                angular_momentum: 0.5,
            },
            COMWavefunction::RingMode {
                angular_momentum: -0.5,
            },
        )
    }
}

/// `K = |⟨a|b⟩|`.
pub fn com_overlap(a: &COMWavefunction, b: &COMWavefunction) -> Result<f64, CompositeError> {
    a.validate()?;
    b.validate()?;
    match (*a, *b) {
        (
            COMWavefunction::RingMode {
                angular_momentum: l1,
            },
            COMWavefunction::RingMode {
                angular_momentum: l2,
            },
        ) => {
            let dl = l1 - l2;
            if dl == 0.0 {
                Ok(1.0)
            } else if dl.fract() == 0.0 {
                // Distinct integer harmonics are exactly orthogonal.
                Ok(0.0)
            } else {
                let x = PI * dl;
                Ok((x.sin() / x).abs())
            }
        }
        (
            COMWavefunction::Gaussian {
                center: x1,
                mean_wavenumber: k1,
                width: s1,
            },
            COMWavefunction::Gaussian {
                center: x2,
                mean_wavenumber: k2,
                width: s2,
            },
        ) => {
            if s1 != s2 {
                return Err(CompositeError::UnequalWidths(s1, s2));
            }
            let d = x1 - x2;
            let dk = k1 - k2;
            Ok((-d * d / (8.0 * s1 * s1) - s1 * s1 * dk * dk / 2.0).exp())
        }
        _ => Err(CompositeError::ModelMismatch),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub n_pairs: f64,
    pub overlap_k: f64,
    pub w_cp: f64,
}

/// `W_CP = N_p (1 − K)`.
pub fn w_cp(n_pairs: f64, overlap_k: f64) -> Result<PairReport, CompositeError> {
    if !(n_pairs >= 0.0) || !n_pairs.is_finite() {
        return Err(CompositeError::InvalidPairCount(n_pairs));
    }
    if !(0.0..=1.0).contains(&overlap_k) {
        return Err(CompositeError::OverlapOutOfRange(overlap_k));
    }
    Ok(PairReport {
        n_pairs,
        overlap_k,
        w_cp: n_pairs * (1.0 - overlap_k),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grouping {
    /// Leave the species as they are.
    FreeNucleons,
    /// Merge nucleon species into one species per nucleus.
    Nuclei {
        nuclei: Vec<Nucleus>,
        /// cm/s
        atomic_rms_v0: f64,
    },
    /// Replace electron species by condensed pairs.
    CooperPairs {
        gap_ratio: f64,
        com: (COMWavefunction, COMWavefunction),
    },
}

/// Re-expresses a species list in terms of composites.
///
/// For [`Grouping::CooperPairs`] the pair species is dimensionless: its
/// `shift_velocity` is `1 − K` and its `characteristic_velocity` is 1, so
/// that `N v / v₀` reproduces `N_p (1 − K)`.
pub fn regroup(
    species: &[SpeciesPopulation],
    grouping: &Grouping,
) -> Result<Vec<SpeciesPopulation>, CompositeError> {
    if species.is_empty() {
        return Ok(Vec::new());
    }
    match grouping {
        Grouping::FreeNucleons => Ok(species.to_vec()),
        Grouping::Nuclei {
            nuclei,
            atomic_rms_v0,
        } => {
            if nuclei.is_empty() {
                return Err(CompositeError::InapplicableGrouping(
                    "material lists no nuclei".into(),
                ));
            }
            if !(*atomic_rms_v0 > 0.0) {
                return Err(CompositeError::InapplicableGrouping(
                    "atomic rms velocity must be positive".into(),
                ));
            }
            if !species.iter().any(|s| s.kind == SpeciesKind::Nucleons) {
                return Err(CompositeError::InapplicableGrouping("no nucleon species present".into()));
            }
            let per_unit: u32 = nuclei.iter().map(|n| n.mass_number * n.per_formula_unit).sum();
            let mut out = Vec::new();
            for s in species {
                if s.kind != SpeciesKind::Nucleons {
                    out.push(s.clone());
                    continue;
                }
                let formula_units = s.count / f64::from(per_unit);
                out.extend(nuclei.iter().map(|n| SpeciesPopulation {
                    name: format!("{} nuclei", n.name),
                    kind: SpeciesKind::Nucleus,
                    count: formula_units * f64::from(n.per_formula_unit),
                    shift_velocity: s.shift_velocity,
                    characteristic_velocity: *atomic_rms_v0,
                }));
            }
            Ok(out)
        }
        Grouping::CooperPairs { gap_ratio, com } => {
            if !species.iter().any(|s| s.kind == SpeciesKind::Electrons) {
                return Err(CompositeError::InapplicableGrouping("no electron species present".into()));
            }
            let k = com_overlap(&com.0, &com.1)?;
            let mut out = Vec::new();
            for s in species {
                if s.kind != SpeciesKind::Electrons {
                    out.push(s.clone());
                    continue;
                }
                let condensate = CondensateSpec::new(s.count, *gap_ratio)?;
                out.push(SpeciesPopulation {
                    name: "cooper pairs".into(),
                    kind: SpeciesKind::CooperPairs,
                    count: condensate_pair_count(&condensate),
                    shift_velocity: 1.0 - k,
                    characteristic_velocity: 1.0,
                });
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::contribution;
    use crate::materials::lif;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ring(l: f64) -> COMWavefunction {
        COMWavefunction::RingMode { angular_momentum: l }
    }

    fn gaussian(center: f64, k: f64, width: f64) -> COMWavefunction {
        COMWavefunction::Gaussian {
            center,
            mean_wavenumber: k,
            width,
        }
    }

    #[test]
    fn pair_counts() {
        let top = CondensateSpec::new(1e10, 1e-3).unwrap();
        assert_relative_eq!(condensate_pair_count(&top), 1e7, max_relative = 1e-12);
        let bottom = CondensateSpec::new(1e9, 1e-3).unwrap();
        assert_relative_eq!(condensate_pair_count(&bottom), 1e6, max_relative = 1e-12);
        assert_eq!(CondensateSpec::new(1e10, 1.0), Err(CompositeError::GapRatioOutOfRange(1.0)));
        assert!(CondensateSpec::new(1e10, 0.0).is_err());
        assert!(CondensateSpec::new(0.0, 0.5).is_err());
    }

    #[test]
    fn overlap_examples() {
        let (a, b) = COMWavefunction::symmetric_pair();
        assert_eq!(com_overlap(&a, &b).unwrap(), 0.0);
        assert_eq!(com_overlap(&a, &a).unwrap(), 1.0);
        let g = gaussian(0.0, 0.0, 1e-4);
        assert_eq!(com_overlap(&g, &g).unwrap(), 1.0);
        let shifted = gaussian(2e-4, 0.0, 1e-4);
        assert_relative_eq!(com_overlap(&g, &shifted).unwrap(), (-0.5f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(com_overlap(&g, &shifted).unwrap(), 0.60653, max_relative = 1e-5);

        assert_eq!(com_overlap(&a, &g), Err(CompositeError::ModelMismatch));
        assert!(matches!(
            com_overlap(&g, &gaussian(0.0, 0.0, 2e-4)),
            Err(CompositeError::UnequalWidths(..))
        ));
        assert!(com_overlap(&g, &gaussian(0.0, 0.0, -1.0)).is_err());
    }

    #[test]
    fn ring_overlap_vanishes_on_integers() {
        for dl in 1..50 {
            assert_eq!(com_overlap(&ring(0.25 + dl as f64), &ring(0.25)).unwrap(), 0.0);
            assert_eq!(com_overlap(&ring(-0.5), &ring(-0.5 + dl as f64)).unwrap(), 0.0);
        }
        assert_relative_eq!(com_overlap(&ring(0.5), &ring(0.0)).unwrap(), 2.0 / PI, max_relative = 1e-14);
    }

    #[test]
    fn pair_report() {
        assert_eq!(w_cp(1e7, 0.0).unwrap().w_cp, 1e7);
        assert_eq!(w_cp(1e7, 1.0).unwrap().w_cp, 0.0);
        assert_relative_eq!(w_cp(1e7, 0.60653).unwrap().w_cp, 3.9347e6, max_relative = 1e-12);
        assert_eq!(w_cp(1e7, 1.5), Err(CompositeError::OverlapOutOfRange(1.5)));
        assert!(w_cp(-1.0, 0.5).is_err());
    }

    #[test]
    fn regroup_nucleons_into_lif_nuclei() {
        let nucleons = SpeciesPopulation::new("nucleons", SpeciesKind::Nucleons, 1.76e15, 5e-4, 3e9).unwrap();
        let grouping = Grouping::Nuclei {
            nuclei: lif().nuclei,
            atomic_rms_v0: 3e5,
        };
        let nuclei = regroup(&[nucleons], &grouping).unwrap();
        assert_eq!(nuclei.len(), 2);
        assert_eq!(nuclei[0].name, "Li nuclei");
        assert_eq!(nuclei[0].count, nuclei[1].count);
        let total: f64 = nuclei.iter().map(|n| n.count).sum();
        // Same order as 8e14 electrons / 6 electrons per nucleus; the 2.2
        // vs 26/12 nucleon ratio accounts for the small difference.
        assert_relative_eq!(total, 8e14 / 6.0, max_relative = 0.02);
        let recovered = nuclei[0].count * 7.0 + nuclei[1].count * 19.0;
        assert_relative_eq!(recovered, 1.76e15, max_relative = 1e-15);
        assert!(nuclei.iter().all(|n| n.characteristic_velocity == 3e5));
    }

    #[test]
    fn regroup_cooper_pairs() {
        let electrons = SpeciesPopulation::new("electrons", SpeciesKind::Electrons, 1e10, 1.0, 1.0).unwrap();
        let grouping = Grouping::CooperPairs {
            gap_ratio: 1e-3,
            com: COMWavefunction::symmetric_pair(),
        };
        let pairs = regroup(&[electrons], &grouping).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].kind, SpeciesKind::CooperPairs);
        assert_relative_eq!(pairs[0].count, 1e7, max_relative = 1e-12);
        assert_relative_eq!(contribution(&pairs[0]).unwrap(), 1e7, max_relative = 1e-12);
    }

    #[test]
    fn regroup_edge_cases() {
        assert!(regroup(&[], &Grouping::FreeNucleons).unwrap().is_empty());
        assert!(regroup(&[], &Grouping::Nuclei { nuclei: vec![], atomic_rms_v0: 1.0 }).unwrap().is_empty());
        let electrons = SpeciesPopulation::new("electrons", SpeciesKind::Electrons, 1e10, 1.0, 1.0).unwrap();
        assert_eq!(regroup(std::slice::from_ref(&electrons), &Grouping::FreeNucleons).unwrap(), vec![electrons.clone()]);
        assert!(matches!(
            regroup(&[electrons], &Grouping::Nuclei { nuclei: lif().nuclei, atomic_rms_v0: 3e5 }),
            Err(CompositeError::InapplicableGrouping(_))
        ));
    }

    proptest! {
        #[test]
        fn w_cp_monotone_and_linear(n in 0.0f64..1e12, k1 in 0.0f64..=1.0, k2 in 0.0f64..=1.0, s in 0.0f64..10.0) {
            let (lo, hi) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
            prop_assert!(w_cp(n, hi).unwrap().w_cp <= w_cp(n, lo).unwrap().w_cp);
            let scaled = w_cp(s * n, k1).unwrap().w_cp;
            prop_assert!((scaled - s * w_cp(n, k1).unwrap().w_cp).abs() <= 1e-12 * scaled.max(1.0));
            let r = w_cp(n, k1).unwrap();
            prop_assert!((r.w_cp - r.n_pairs * (1.0 - r.overlap_k)).abs() <= 1e-12 * n.max(1.0));
        }

        #[test]
        fn overlap_symmetric_and_bounded(
            l1 in -5.0f64..5.0, l2 in -5.0f64..5.0,
            x in -3.0f64..3.0, k in -3.0f64..3.0,
        ) {
            let (a, b) = (ring(l1), ring(l2));
            let ab = com_overlap(&a, &b).unwrap();
            prop_assert_eq!(ab, com_overlap(&b, &a).unwrap());
            prop_assert!((0.0..=1.0).contains(&ab));
            if l1 != l2 {
                prop_assert!(ab < 1.0);
                prop_assert!(ab <= 1.0 / (PI * (l1 - l2).abs()) + 1e-15);
            }
            let (g, h) = (gaussian(0.0, 0.0, 1.0), gaussian(x, k, 1.0));
            let gh = com_overlap(&g, &h).unwrap();
            prop_assert_eq!(gh, com_overlap(&h, &g).unwrap());
            prop_assert!((0.0..=1.0).contains(&gh));
            if x != 0.0 || k != 0.0 {
                prop_assert!(gh < 1.0);
            }
        }
    }
}
