//! Independent reference implementations used by the integration tests.
//!
//! None of these go through the library's sparse-state or eigen-solver code:
//! fermionic states are expanded into dense Fock-space vectors indexed by
//! bit strings, operators act by bit manipulation, eigenvalues come from a
//! Jacobi sweep on the real embedding of a hermitian matrix, and overlaps
//! come from direct quadrature.

#![allow(dead_code, clippy::needless_range_loop)]

use catsize::fock::{ManyBodyState, ModeBasis};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense amplitude vector over all `2^n` fermionic occupation patterns;
/// bit `k` of the index is the occupation of mode `k`.
pub fn dense(state: &ManyBodyState) -> Vec<Complex64> {
    let n = state.basis().num_modes();
    let mut psi = vec![c(0.0, 0.0); 1 << n];
    for (occupations, amplitude) in state.terms() {
        let index = occupations
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &o)| acc | ((o as usize) << k));
        psi[index] = *amplitude;
    }
    psi
}

/// `a_k ψ` with the Jordan-Wigner sign `(-1)^(occupied modes below k)`.
pub fn annihilate(psi: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); psi.len()];
    for (x, amp) in psi.iter().enumerate() {
        if x & (1 << k) == 0 {
            continue;
        }
        let below = (x & ((1 << k) - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
        out[x ^ (1 << k)] += amp * sign;
    }
    out
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `ρ[i][j] = ⟨a_j† a_i⟩ = ⟨a_j ψ | a_i ψ⟩`.
pub fn brute_rdm(psi: &[Complex64], num_modes: usize) -> Vec<Vec<Complex64>> {
    let lowered: Vec<Vec<Complex64>> = (0..num_modes).map(|k| annihilate(psi, k)).collect();
    (0..num_modes)
        .map(|i| (0..num_modes).map(|j| inner(&lowered[j], &lowered[i])).collect())
        .collect()
}

/// `⟨n_k⟩ = Σ_x |ψ_x|² bit_k(x)`.
pub fn brute_occupations(psi: &[Complex64], num_modes: usize) -> Vec<f64> {
    (0..num_modes)
        .map(|k| {
            psi.iter()
                .enumerate()
                .filter(|(x, _)| x & (1 << k) != 0)
                .map(|(_, a)| a.norm_sqr())
                .sum()
        })
        .collect()
}

pub fn brute_w_fixed(a: &ManyBodyState, b: &ManyBodyState) -> f64 {
    let n = a.basis().num_modes();
    let oa = brute_occupations(&dense(a), n);
    let ob = brute_occupations(&dense(b), n);
    oa.iter().zip(&ob).map(|(x, y)| (x - y).abs()).sum()
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let n = m.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for row in m.iter_mut() {
                    let (mkp, mkq) = (row[p], row[q]);
                    row[p] = cs * mkp - sn * mkq;
                    row[q] = sn * mkp + cs * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = cs * mpk - sn * mqk;
                    m[q][k] = sn * mpk + cs * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// Trace norm of a hermitian matrix via its real embedding
/// `[[Re, −Im], [Im, Re]]`, whose spectrum is the hermitian one doubled.
pub fn trace_norm(h: &[Vec<Complex64>]) -> f64 {
    let n = h.len();
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = h[i][j].re;
            m[i + n][j + n] = h[i][j].re;
            m[i][j + n] = -h[i][j].im;
            m[i + n][j] = h[i][j].im;
        }
    }
    jacobi_eigenvalues(m).iter().map(|l| l.abs()).sum::<f64>() / 2.0
}

pub fn brute_w_natural(a: &ManyBodyState, b: &ManyBodyState) -> f64 {
    let n = a.basis().num_modes();
    let ra = brute_rdm(&dense(a), n);
    let rb = brute_rdm(&dense(b), n);
    let delta: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| ra[i][j] - rb[i][j]).collect()).collect();
    trace_norm(&delta)
}

/// All fermionic occupation vectors over `num_modes` modes with at most
/// `max_particles` particles.
pub fn fermionic_fock_states(num_modes: usize, max_particles: u32) -> Vec<Vec<u32>> {
    (0..1usize << num_modes)
        .filter(|x| x.count_ones() <= max_particles)
        .map(|x| (0..num_modes).map(|k| ((x >> k) & 1) as u32).collect())
        .collect()
}

/// A random fixed-particle-number fermionic state with up to `max_terms` terms.
pub fn random_state<R: Rng>(rng: &mut R, basis: ModeBasis, particles: usize, max_terms: usize) -> ManyBodyState {
    let n = basis.num_modes();
    loop {
        let terms: Vec<(Vec<u32>, Complex64)> = (0..rng.gen_range(1..=max_terms))
            .map(|_| {
                let mut modes: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    modes.swap(i, rng.gen_range(0..=i));
                }
                let mut occupations = vec![0; n];
                for &m in &modes[..particles] {
                    occupations[m] = 1;
                }
                (occupations, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            })
            .collect();
        if let Ok(state) = ManyBodyState::from_terms(basis, terms) {
            return state;
        }
    }
}

/// A random unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while columns.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for u in &columns {
            let proj = inner(u, &v);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = inner(&v, &v).re.sqrt();
        if norm < 1e-6 {
            continue;
        }
        columns.push(v.into_iter().map(|x| x / norm).collect());
    }
    DMatrix::from_fn(n, n, |i, j| columns[j][i])
}

/// `|∫ conj(ψ_a) ψ_b dx|` for equal-width Gaussian packets
/// `(2πσ²)^{-1/4} exp(−(x−x₀)²/(4σ²) + i k x)`, by the trapezoid rule.
pub fn gaussian_overlap_quadrature(xa: f64, ka: f64, xb: f64, kb: f64, sigma: f64) -> f64 {
    let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.5);
    let lo = xa.min(xb) - 15.0 * sigma;
    let hi = xa.max(xb) + 15.0 * sigma;
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let integrand = |x: f64| {
        let envelope = (-(x - xa).powi(2) / (4.0 * sigma * sigma) - (x - xb).powi(2) / (4.0 * sigma * sigma)).exp();
        c(0.0, (kb - ka) * x).exp() * (norm * envelope)
    };
    let mut sum = (integrand(lo) + integrand(hi)) * 0.5;
    for i in 1..steps {
        sum += integrand(lo + i as f64 * h);
    }
    (sum * h).norm()
}
