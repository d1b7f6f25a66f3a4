//! Brute-force open-system steady state of the driven Tavis–Cummings
//! model on a truncated Hilbert space.
//!
//! This is the ground-truth side of the crate: everything the closed
//! forms in [`crate::weakfield`] claim is checked against density
//! matrices produced here. The model is the full tensor product
//! cavity ⊗ atom₁ ⊗ … ⊗ atom_N (no symmetric-subspace reduction), which
//! keeps the implementation obvious at the price of capping N at 4 —
//! desk-scale atom numbers are all the cross-checks need.

mod diagnostics;
mod evolve;
mod model;
mod steady;

pub use diagnostics::{
    fock_convergence_scan, flux_balance, inversion_balance, weak_field_amplitudes, FluxBalance,
    InversionBalance, TruncationEntry, TruncationReport, WeakFieldEstimate,
};
pub use evolve::evolve;
pub use model::{CollapseOp, QuantumModel, MAX_ATOMS, MAX_DIM, MAX_FOCK};
pub use steady::{
    apply_liouvillian, liouvillian_matrix, steady_state, Observables, Residuals, SteadyStateResult,
};
