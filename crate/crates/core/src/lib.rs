//! Cat size of superposed quantum states.
//!
//! * [`fock`]: exact evaluation of `Σ_k |Δ⟨n_k⟩|` for small second-quantized states.
//! * [`estimators`]: `N v / v₀` estimates for rigid bodies and flux qubits.
//! * [`composites`]: nuclei and Cooper-pair regrouping, `W_CP = N_p (1 − K)`.
//! * [`distinctness`]: macro/meso classification from visual resolution.
//! * [`cli`]: scenario files, reports and the built-in reproduction set.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod composites;
pub mod distinctness;
pub mod estimators;
pub mod fock;
pub mod materials;
