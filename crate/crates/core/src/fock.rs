//! Exact second-quantized states over a small, finite set of modes.
//!
//! States are stored sparsely as a map from occupation vectors to complex
//! amplitudes. The cat size of a pair of states is evaluated from mode
//! occupations either in the basis the states are written in
//! ([`w_fixed_basis`]) or basis-independently from the trace norm of the
//! difference of their one-body reduced density matrices ([`w_natural`]).
//!
//! Fermionic sign convention: an occupation vector `n` stands for
//! `a_{k1}† a_{k2}† ... |0⟩` with `k1 < k2 < ...`, so `a_k` and `a_k†` acting
//! on it pick up `(-1)^(number of occupied modes with index < k)`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Construction invariants (normalization, hermiticity) hold to this.
pub const CONSTRUCTION_TOLERANCE: f64 = 1e-12;

/// Occupation numbers, one entry per mode, ordered by mode index.
pub type Occupations = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("expected {expected} modes, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("mode {mode} holds {occupation} particles but at most {limit} are allowed")]
    OccupancyViolation { mode: usize, occupation: u32, limit: u32 },
    #[error("states are defined over different mode bases")]
    BasisMismatch,
    #[error("superposition has zero norm")]
    ZeroNorm,
    #[error("mode index {index} out of range for {num_modes} modes")]
    IndexOutOfRange { index: usize, num_modes: usize },
    #[error("invalid mode basis: {0}")]
    InvalidBasis(String),
    #[error("mode rotation must be a {expected}x{expected} unitary matrix")]
    InvalidRotation { expected: usize },
    #[error("mode rotation is only implemented for fermionic bases")]
    UnsupportedStatistics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Fermionic,
    Bosonic,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Fermionic => f.write_str("fermionic"),
            Statistics::Bosonic => f.write_str("bosonic"),
        }
    }
}

/// A finite single-particle mode set together with the particle statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeBasis {
    num_modes: usize,
    statistics: Statistics,
    max_occupancy: u32,
}

impl ModeBasis {
    /// `max_occupancy` is ignored (forced to 1) for fermions.
    pub fn new(
        num_modes: usize,
        statistics: Statistics,
        max_occupancy: u32,
    ) -> Result<Self, FockError> {
        if num_modes == 0 {
            return Err(FockError::InvalidBasis("at least one mode is required".into()));
        }
        let max_occupancy = match statistics {
            Statistics::Fermionic => 1,
            Statistics::Bosonic if max_occupancy == 0 => {
                return Err(FockError::InvalidBasis(
                    "bosonic max_occupancy must be positive".into(),
                ))
            }
            Statistics::Bosonic => max_occupancy,
        };
        Ok(Self {
            num_modes,
            statistics,
            max_occupancy,
        })
    }

    pub fn fermionic(num_modes: usize) -> Result<Self, FockError> {
        Self::new(num_modes, Statistics::Fermionic, 1)
    }

    pub fn bosonic(num_modes: usize, max_occupancy: u32) -> Result<Self, FockError> {
        Self::new(num_modes, Statistics::Bosonic, max_occupancy)
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn max_occupancy(&self) -> u32 {
        self.max_occupancy
    }

    /// Checks length and per-mode limits of an occupation vector.
    pub fn validate(&self, occupations: &[u32]) -> Result<(), FockError> {
        if occupations.len() != self.num_modes {
            return Err(FockError::DimensionMismatch {
                expected: self.num_modes,
                found: occupations.len(),
            });
        }
        for (mode, &occupation) in occupations.iter().enumerate() {
            if occupation > self.max_occupancy {
                return Err(FockError::OccupancyViolation {
                    mode,
                    occupation,
                    limit: self.max_occupancy,
                });
            }
        }
        Ok(())
    }

    /// Removes one particle from `mode`, returning the matrix element.
    fn annihilate(&self, occupations: &mut [u32], mode: usize) -> Option<f64> {
        let n = occupations[mode];
        if n == 0 {
            return None;
        }
        let factor = match self.statistics {
            Statistics::Fermionic => fermion_sign(occupations, mode),
            Statistics::Bosonic => f64::from(n).sqrt(),
        };
        occupations[mode] = n - 1;
        Some(factor)
    }

    /// Adds one particle to `mode`, returning the matrix element.
    fn create(&self, occupations: &mut [u32], mode: usize) -> Option<f64> {
        let n = occupations[mode];
        if n >= self.max_occupancy {
            return None;
        }
        let factor = match self.statistics {
            Statistics::Fermionic => fermion_sign(occupations, mode),
            Statistics::Bosonic => f64::from(n + 1).sqrt(),
        };
        occupations[mode] = n + 1;
        Some(factor)
    }
}

fn fermion_sign(occupations: &[u32], mode: usize) -> f64 {
    let below: u32 = occupations[..mode].iter().sum();
    if below.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Normalized pure state: a superposition of occupation-number basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyState {
    basis: ModeBasis,
    terms: BTreeMap<Occupations, Complex64>,
}

impl ManyBodyState {
    /// The single Fock state with the given occupations and amplitude 1.
    pub fn basis_state(basis: ModeBasis, occupations: &[u32]) -> Result<Self, FockError> {
        basis.validate(occupations)?;
        let mut terms = BTreeMap::new();
        terms.insert(occupations.to_vec(), Complex64::new(1.0, 0.0));
        Ok(Self { basis, terms })
    }

    /// Builds a normalized state from raw `(occupations, amplitude)` pairs.
    /// Repeated occupation vectors are summed.
    pub fn from_terms<I>(basis: ModeBasis, terms: I) -> Result<Self, FockError>
    where
        I: IntoIterator<Item = (Occupations, Complex64)>,
    {
        let mut map: BTreeMap<Occupations, Complex64> = BTreeMap::new();
        for (occupations, amplitude) in terms {
            basis.validate(&occupations)?;
            *map.entry(occupations).or_default() += amplitude;
        }
        Self::normalized(basis, map)
    }

    /// Normalized linear combination `Σ c_i |ψ_i⟩`.
    pub fn superpose(terms: &[(Complex64, &ManyBodyState)]) -> Result<Self, FockError> {
        let basis = match terms.first() {
            Some((_, state)) => state.basis,
            None => return Err(FockError::ZeroNorm),
        };
        let mut map: BTreeMap<Occupations, Complex64> = BTreeMap::new();
        for (coefficient, state) in terms {
            if state.basis != basis {
                return Err(FockError::BasisMismatch);
            }
            for (occupations, amplitude) in &state.terms {
                *map.entry(occupations.clone()).or_default() += coefficient * amplitude;
            }
        }
        Self::normalized(basis, map)
    }

    fn normalized(
        basis: ModeBasis,
        mut terms: BTreeMap<Occupations, Complex64>,
    ) -> Result<Self, FockError> {
        terms.retain(|_, amplitude| amplitude.norm_sqr() > 0.0);
        let norm = terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= CONSTRUCTION_TOLERANCE {
            return Err(FockError::ZeroNorm);
        }
        for amplitude in terms.values_mut() {
            *amplitude /= norm;
        }
        Ok(Self { basis, terms })
    }

    /// The 1D "Fermi sea" filling modes `shift .. shift + num_particles`.
    ///
    /// Modes are read as ordered momentum labels, so increasing `shift`
    /// moves the whole occupied block rigidly, like a band displaced by a
    /// uniform velocity.
    pub fn shifted_fermi_sea(
        num_modes: usize,
        num_particles: usize,
        shift: usize,
    ) -> Result<Self, FockError> {
        let basis = ModeBasis::fermionic(num_modes)?;
        if num_particles + shift > num_modes {
            return Err(FockError::DimensionMismatch {
                expected: num_modes,
                found: num_particles + shift,
            });
        }
        let mut occupations = vec![0; num_modes];
        for slot in &mut occupations[shift..shift + num_particles] {
            *slot = 1;
        }
        Self::basis_state(basis, &occupations)
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    /// Nonzero terms in occupation-vector order.
    pub fn terms(&self) -> impl Iterator<Item = (&Occupations, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn amplitude(&self, occupations: &[u32]) -> Complex64 {
        self.terms.get(occupations).copied().unwrap_or_default()
    }

    /// `⟨n_k⟩ = Σ |amplitude|² · n_k`.
    pub fn occupation_expectation(&self, mode: usize) -> Result<f64, FockError> {
        if mode >= self.basis.num_modes {
            return Err(FockError::IndexOutOfRange {
                index: mode,
                num_modes: self.basis.num_modes,
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(occupations, amplitude)| amplitude.norm_sqr() * f64::from(occupations[mode]))
            .sum())
    }

    /// Total particle number if every term has the same one.
    pub fn particle_number(&self) -> Option<u32> {
        let mut counts = self.terms.keys().map(|o| o.iter().sum::<u32>());
        let first = counts.next()?;
        counts.all(|n| n == first).then_some(first)
    }

    /// `⟨A|B⟩`.
    pub fn overlap(&self, other: &ManyBodyState) -> Result<Complex64, FockError> {
        if self.basis != other.basis {
            return Err(FockError::BasisMismatch);
        }
        Ok(self
            .terms
            .iter()
            .filter_map(|(occupations, a)| other.terms.get(occupations).map(|b| a.conj() * b))
            .sum())
    }

    /// One-body reduced density matrix with `ρ[i][j] = ⟨a_j† a_i⟩`.
    pub fn one_body_rdm(&self) -> OneBodyRDM {
        let n = self.basis.num_modes;
        let mut matrix = DMatrix::<Complex64>::zeros(n, n);
        let mut scratch = vec![0; n];
        for (occupations, amplitude) in &self.terms {
            for i in 0..n {
                scratch.copy_from_slice(occupations);
                let Some(removed) = self.basis.annihilate(&mut scratch, i) else {
                    continue;
                };
                let hole = scratch.clone();
                for j in 0..n {
                    scratch.copy_from_slice(&hole);
                    let Some(added) = self.basis.create(&mut scratch, j) else {
                        continue;
                    };
                    if let Some(target) = self.terms.get(&scratch) {
                        matrix[(i, j)] += target.conj() * amplitude * (removed * added);
                    }
                }
            }
        }
        OneBodyRDM {
            matrix,
            particle_number: self.particle_number().map(f64::from),
        }
    }

    /// Applies the single-particle unitary `a_k† → Σ_l U[l][k] a_l†` to every
    /// particle, so the one-body RDM transforms as `U ρ U†`.
    pub fn rotate_modes(&self, rotation: &DMatrix<Complex64>) -> Result<Self, FockError> {
        let n = self.basis.num_modes;
        if self.basis.statistics != Statistics::Fermionic {
            return Err(FockError::UnsupportedStatistics);
        }
        if rotation.nrows() != n || rotation.ncols() != n {
            return Err(FockError::InvalidRotation { expected: n });
        }
        let defect = (rotation.adjoint() * rotation - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(FockError::InvalidRotation { expected: n });
        }

        let mut map: BTreeMap<Occupations, Complex64> = BTreeMap::new();
        for (occupations, amplitude) in &self.terms {
            let columns = occupied_modes(occupations);
            for rows in subsets(n, columns.len()) {
                let minor = DMatrix::from_fn(rows.len(), columns.len(), |r, c| {
                    rotation[(rows[r], columns[c])]
                });
                let det = if rows.is_empty() {
                    Complex64::new(1.0, 0.0)
                } else {
                    minor.determinant()
                };
                let mut target = vec![0; n];
                for &r in &rows {
                    target[r] = 1;
                }
                *map.entry(target).or_default() += det * amplitude;
            }
        }
        map.retain(|_, a| a.norm() > 1e-15);
        Self::normalized(self.basis, map)
    }
}

fn occupied_modes(occupations: &[u32]) -> Vec<usize> {
    occupations
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(k, _)| k)
        .collect()
}

/// All size-`k` subsets of `0..n` as ascending index lists.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            recurse(i + 1, n, k, current, out);
            current.pop();
        }
    }
    recurse(0, n, k, &mut current, &mut out);
    out
}

/// Hermitian matrix of one-body expectation values `⟨a_j† a_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneBodyRDM {
    matrix: DMatrix<Complex64>,
    particle_number: Option<f64>,
}

impl OneBodyRDM {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Set when the state has a definite particle number.
    pub fn particle_number(&self) -> Option<f64> {
        self.particle_number
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Mode occupations `⟨n_k⟩`.
    pub fn occupations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Natural occupation numbers, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigenvalues(&self.matrix)
    }
}

fn sorted_eigenvalues(matrix: &DMatrix<Complex64>) -> Vec<f64> {
    let mut values: Vec<f64> = matrix.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

fn check_shared_basis(a: &ManyBodyState, b: &ManyBodyState) -> Result<(), FockError> {
    if a.basis == b.basis {
        Ok(())
    } else {
        Err(FockError::BasisMismatch)
    }
}

/// Per-mode occupation differences `⟨n_k⟩_A − ⟨n_k⟩_B` in the given basis.
pub fn occupation_differences(a: &ManyBodyState, b: &ManyBodyState) -> Result<Vec<f64>, FockError> {
    check_shared_basis(a, b)?;
    let occ_a = a.one_body_rdm().occupations();
    let occ_b = b.one_body_rdm().occupations();
    Ok(occ_a.iter().zip(&occ_b).map(|(x, y)| x - y).collect())
}

/// `Σ_k |Δ⟨n_k⟩|` in the basis the states are written in (raw convention).
pub fn w_fixed_basis(a: &ManyBodyState, b: &ManyBodyState) -> Result<f64, FockError> {
    Ok(occupation_differences(a, b)?.iter().map(|d| d.abs()).sum())
}

/// Trace norm of `ρ_A − ρ_B` (raw convention); basis independent.
pub fn w_natural(a: &ManyBodyState, b: &ManyBodyState) -> Result<f64, FockError> {
    check_shared_basis(a, b)?;
    let delta = a.one_body_rdm().matrix - b.one_body_rdm().matrix;
    Ok(sorted_eigenvalues(&delta).iter().map(|l| l.abs()).sum())
}
