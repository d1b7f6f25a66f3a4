//! Steady state of the Lindblad master equation.
//!
//! The equation of motion, with collapse channels (r, A) in the half-form
//! convention of [`super::model`], is
//!
//! ```text
//! dρ/dt = L(ρ) = −i[H, ρ] + Σₖ rₖ (2AₖρAₖ† − Aₖ†Aₖρ − ρAₖ†Aₖ)
//! ```
//!
//! Up to dimension [`DIRECT_DIM_CAP`] the kernel of the vectorized
//! Liouvillian is found by a dense solve with one row traded for the
//! trace constraint. Beyond that the dense superoperator is out of reach
//! and the solver falls back to relaxing the vacuum state under RK4 until
//! the residual target is met.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

use super::evolve::rk4_step;
use super::model::QuantumModel;

type CMatrix = DMatrix<Complex64>;

/// Largest Hilbert dimension handled by the dense null-space solve; the
/// superoperator then has at most 4096² entries.
pub const DIRECT_DIM_CAP: usize = 64;

/// Normalized steady-state residual target, ‖L(ρ)‖/(‖L‖·‖ρ‖).
const RESIDUAL_TARGET: f64 = 1e-10;

/// Expectation values recorded from a steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    /// ⟨a⟩.
    pub field: Complex64,
    /// ⟨a†a⟩.
    pub photon_number: f64,
    /// ⟨Σσ⁺⟩.
    pub collective_raising: Complex64,
    /// ⟨σᶻ⟩ per atom.
    pub inversion: Vec<f64>,
    /// Σ⟨σ⁺σ⁻⟩, the total excited population.
    pub excited_population: f64,
    /// ⟨aΣσ⁺⟩.
    pub field_raising: Complex64,
    /// ⟨a†Σσ⁻⟩.
    pub creation_lowering: Complex64,
    /// Tr(ρ²).
    pub purity: f64,
}

/// Solver health indicators, all reported rather than silently fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// |Tr(ρ) − 1|.
    pub trace: f64,
    /// ‖L(ρ)‖ / (‖L‖·‖ρ‖), Frobenius norms (spectral estimate of ‖L‖ on
    /// the fallback path).
    pub liouvillian: f64,
    /// max |ρ − ρ†|.
    pub hermiticity: f64,
    /// Smallest eigenvalue of the Hermitian part of ρ.
    pub min_eigenvalue: f64,
}

/// Steady-state density matrix with observables and solver residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateResult {
    pub rho: CMatrix,
    pub observables: Observables,
    pub residuals: Residuals,
}

/// Apply the Liouvillian to a density matrix without materializing the
/// superoperator.
pub fn apply_liouvillian(model: &QuantumModel, rho: &CMatrix) -> CMatrix {
    let mut out = model.effective_drift() * rho + rho * model.effective_drift_dag();
    for ch in model.collapse_ops() {
        let sandwich = &ch.op * rho * ch.op_dag();
        out += sandwich * Complex64::new(2.0 * ch.rate, 0.0);
    }
    out
}

/// Adjoint action with respect to the Hilbert–Schmidt inner product;
/// used only for the spectral-norm estimate.
fn apply_liouvillian_adjoint(model: &QuantumModel, x: &CMatrix) -> CMatrix {
    let mut out = model.effective_drift_dag() * x + x * model.effective_drift();
    for ch in model.collapse_ops() {
        let sandwich = ch.op_dag() * x * &ch.op;
        out += sandwich * Complex64::new(2.0 * ch.rate, 0.0);
    }
    out
}

/// Dense vectorized Liouvillian, column-major convention:
/// vec(AρB) = (Bᵀ ⊗ A)·vec(ρ).
pub fn liouvillian_matrix(model: &QuantumModel) -> CMatrix {
    let dim = model.dim();
    let identity = CMatrix::identity(dim, dim);
    let h = model.hamiltonian();
    let mut l = (identity.kronecker(h) - h.transpose().kronecker(&identity))
        * Complex64::new(0.0, -1.0);
    for ch in model.collapse_ops() {
        let a = &ch.op;
        let ada = ch.op_dag_op();
        let term = a.conjugate().kronecker(a) * Complex64::new(2.0, 0.0)
            - identity.kronecker(ada)
            - ada.transpose().kronecker(&identity);
        l += term * Complex64::new(ch.rate, 0.0);
    }
    l
}

/// Solve for the steady state.
///
/// Direct path: replace the first Liouvillian row with the trace row and
/// solve L·vec(ρ) = e₀ by LU. A failed factorization means the kernel is
/// degenerate (multiple steady states), which the supported models never
/// produce. Fallback path (dim > [`DIRECT_DIM_CAP`]): RK4 relaxation of
/// the vacuum until the normalized residual passes the target.
pub fn steady_state(model: &QuantumModel) -> Result<SteadyStateResult> {
    if model.dim() <= DIRECT_DIM_CAP {
        steady_state_direct(model)
    } else {
        steady_state_relaxed(model)
    }
}

fn steady_state_direct(model: &QuantumModel) -> Result<SteadyStateResult> {
    let dim = model.dim();
    let d2 = dim * dim;
    let l = liouvillian_matrix(model);
    let mut system = l.clone();
    for col in 0..d2 {
        system[(0, col)] = Complex64::new(0.0, 0.0);
    }
    for k in 0..dim {
        system[(0, k * dim + k)] = Complex64::new(1.0, 0.0);
    }
    let mut rhs = DVector::zeros(d2);
    rhs[0] = Complex64::new(1.0, 0.0);
    let solution = system
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSteadyState)?;
    if solution.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularSteadyState);
    }
    let rho = CMatrix::from_column_slice(dim, dim, solution.as_slice());
    let action_norm = (&l * &solution).norm();
    let liouvillian_residual = action_norm / (l.norm() * solution.norm());
    Ok(assemble(model, rho, liouvillian_residual))
}

fn steady_state_relaxed(model: &QuantumModel) -> Result<SteadyStateResult> {
    let norm_l = action_norm_estimate(model);
    let dt = 1.5 / norm_l;
    let slow = model.rates().kappa().min(0.5 * model.rates().gamma());
    let chunk_steps = ((2.0 / slow) / dt).ceil() as usize;
    let max_chunks = 200;

    let mut rho = model.vacuum();
    let mut residual = f64::INFINITY;
    for _ in 0..max_chunks {
        for _ in 0..chunk_steps {
            rho = rk4_step(model, &rho, dt);
        }
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { what: "steady-state relaxation" });
        }
        residual = apply_liouvillian(model, &rho).norm() / (norm_l * rho.norm());
        if residual < RESIDUAL_TARGET {
            return Ok(assemble(model, rho, residual));
        }
    }
    Err(Error::NotConverged { residual, target: RESIDUAL_TARGET })
}

/// Spectral-norm estimate of the Liouvillian action by power iteration on
/// L†L from a fixed, deterministic start matrix.
fn action_norm_estimate(model: &QuantumModel) -> f64 {
    let dim = model.dim();
    let mut z = CMatrix::from_fn(dim, dim, |i, j| {
        let k = (31 * i + 17 * j) % 101;
        let m = (13 * i + 7 * j) % 97;
        Complex64::new(k as f64 / 50.5 - 1.0, m as f64 / 48.5 - 1.0)
    });
    z /= Complex64::new(z.norm(), 0.0);
    let mut sigma = 1.0;
    for _ in 0..25 {
        let w = apply_liouvillian(model, &z);
        let back = apply_liouvillian_adjoint(model, &w);
        let norm = back.norm();
        if norm == 0.0 {
            break;
        }
        sigma = norm.sqrt();
        z = back / Complex64::new(norm, 0.0);
    }
    sigma
}

fn assemble(model: &QuantumModel, rho: CMatrix, liouvillian_residual: f64) -> SteadyStateResult {
    let observables = observables(model, &rho);
    let trace = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    let hermiticity = (&rho - rho.adjoint()).camax();
    let hermitian_part = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eigenvalues = hermitian_part.symmetric_eigen().eigenvalues;
    let min_eigenvalue = eigenvalues.iter().fold(f64::INFINITY, |acc, &e| acc.min(e));
    SteadyStateResult {
        rho,
        observables,
        residuals: Residuals {
            trace,
            liouvillian: liouvillian_residual,
            hermiticity,
            min_eigenvalue,
        },
    }
}

/// Tr(Oρ) without forming the product matrix.
pub(super) fn expectation(op: &CMatrix, rho: &CMatrix) -> Complex64 {
    let dim = rho.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            acc += op[(i, j)] * rho[(j, i)];
        }
    }
    acc
}

pub(super) fn observables(model: &QuantumModel, rho: &CMatrix) -> Observables {
    let a = model.annihilation();
    let ad = a.adjoint();
    let sm = model.collective_lowering();
    let sp = sm.adjoint();
    let field = expectation(a, rho);
    let photon_number = expectation(&(&ad * a), rho).re;
    let collective_raising = expectation(&sp, rho);
    let mut inversion = Vec::with_capacity(model.n_atoms());
    let mut excited_population = 0.0;
    for atom in 0..model.n_atoms() {
        let sz = expectation(&model.inversion_op(atom), rho).re;
        inversion.push(sz);
        excited_population += 0.5 * (sz + 1.0);
    }
    let field_raising = expectation(&(a * &sp), rho);
    let creation_lowering = expectation(&(&ad * sm), rho);
    let purity = (rho * rho).trace().re;
    Observables {
        field,
        photon_number,
        collective_raising,
        inversion,
        excited_population,
        field_raising,
        creation_lowering,
        purity,
    }
}
