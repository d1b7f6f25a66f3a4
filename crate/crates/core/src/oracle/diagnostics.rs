//! Physics diagnostics evaluated on oracle steady states: the inversion
//! balance, weak-field amplitude extraction, the excitation-flux budget
//! and the Fock-truncation scan.

use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::{DriveSpec, SystemRates};

use super::model::QuantumModel;
use super::steady::{steady_state, SteadyStateResult};

/// Both sides of the steady-state inversion balance.
///
/// The equation of motion of the total inversion, in this crate's phase
/// convention (drive ε(a + a†), coupling g(a†σ⁻ + aσ⁺)), reads
///
/// ```text
/// d⟨Σσᶻ⟩/dt = 4g·Im⟨aΣσ⁺⟩ − γ(⟨Σσᶻ⟩ + N)
/// ```
///
/// so at steady state the coherent field–polarization exchange term must
/// equal the decay term exactly. Both are returned along with their
/// difference and the correlation gap ⟨aΣσ⁺⟩ − ⟨a⟩⟨Σσ⁺⟩, whose magnitude
/// is fourth order in the normalized drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionBalance {
    /// 4g·Im⟨aΣσ⁺⟩ (rad/µs).
    pub coherent_rate: f64,
    /// γ(⟨Σσᶻ⟩ + N) (rad/µs).
    pub decay_rate: f64,
    /// coherent_rate − decay_rate; vanishes at steady state.
    pub residual: f64,
    /// ⟨aΣσ⁺⟩ − ⟨a⟩⟨Σσ⁺⟩.
    pub decorrelation_gap: Complex64,
}

pub fn inversion_balance(model: &QuantumModel, ss: &SteadyStateResult) -> InversionBalance {
    let obs = &ss.observables;
    let g = model.rates().g();
    let gamma = model.rates().gamma();
    let n = model.n_atoms() as f64;
    let total_inversion: f64 = obs.inversion.iter().sum();
    let coherent_rate = 4.0 * g * obs.field_raising.im;
    let decay_rate = gamma * (total_inversion + n);
    InversionBalance {
        coherent_rate,
        decay_rate,
        residual: coherent_rate - decay_rate,
        decorrelation_gap: obs.field_raising - obs.field * obs.collective_raising,
    }
}

/// Weak-field amplitudes read off a steady state, normalized for direct
/// comparison with [`crate::weakfield`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakFieldEstimate {
    /// Estimate of x/y from ⟨a⟩.
    pub x_over_y: Complex64,
    /// Estimate of p/y from the collective ⟨Σσ⁻⟩.
    pub p_over_y: Complex64,
    /// Normalized drive the state was produced at.
    pub y: f64,
}

/// Extract (x/y, p/y) from a steady state.
///
/// With the drive written as ε(a + a†) the field ⟨a⟩ sits at −i times the
/// closed-form phase; a single global factor i, fixed once by the empty
/// cavity, aligns the two conventions for every N and Ω:
///
/// ```text
/// x/y = i·⟨a⟩/(√n₀·y)         p/y = −(g/κ)·⟨Σσ⁻⟩/(√n₀·y)
/// ```
///
/// The g/κ factor converts the collective dipole to the flux-normalized
/// polarization; it is exact in the weak-field limit, so a calibration
/// against the closed forms at Ω = 0 returns one up to O(y²) saturation.
/// Meaningful only for weak drives (y ≲ 0.2).
pub fn weak_field_amplitudes(
    model: &QuantumModel,
    ss: &SteadyStateResult,
) -> Result<WeakFieldEstimate> {
    let rates = model.rates();
    if model.drive().epsilon() == 0.0 {
        return Err(Error::ZeroDrive);
    }
    let y = model.drive().normalized(rates);
    let scale = 1.0 / (rates.saturation_photons().sqrt() * y);
    let x_over_y = Complex64::new(0.0, 1.0) * ss.observables.field * scale;
    let collective_lowering = ss.observables.collective_raising.conj();
    let p_over_y =
        Complex64::new(-rates.g() / rates.kappa() * scale, 0.0) * collective_lowering;
    Ok(WeakFieldEstimate { x_over_y, p_over_y, y })
}

/// Steady-state excitation budget: what the drive feeds in must leave
/// through the mirror or free-space emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBalance {
    /// Drive-Hamiltonian contribution to d⟨a†a + Σσ⁺σ⁻⟩/dt: −2ε·Im⟨a⟩.
    pub input: f64,
    /// 2κ⟨a†a⟩.
    pub cavity_output: f64,
    /// γΣ⟨σ⁺σ⁻⟩.
    pub atomic_output: f64,
    /// input − cavity_output − atomic_output.
    pub residual: f64,
}

pub fn flux_balance(model: &QuantumModel, ss: &SteadyStateResult) -> FluxBalance {
    let obs = &ss.observables;
    let input = -2.0 * model.drive().epsilon() * obs.field.im;
    let cavity_output = 2.0 * model.rates().kappa() * obs.photon_number;
    let atomic_output = model.rates().gamma() * obs.excited_population;
    FluxBalance {
        input,
        cavity_output,
        atomic_output,
        residual: input - cavity_output - atomic_output,
    }
}

/// Steady-state values at one Fock cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationEntry {
    pub n_max: usize,
    /// ⟨a†a⟩.
    pub photon_number: f64,
    /// ⟨aΣσ⁺⟩, the fluorescence cross-term correlator.
    pub cross_correlator: Complex64,
}

/// Result of a truncation scan. `converged_at` is the smallest cutoff
/// from which the tracked values stop changing (successive relative
/// difference below 1e−8); absent when the listed cutoffs never settle,
/// which is a flag rather than an error.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport {
    pub entries: Vec<TruncationEntry>,
    pub converged: bool,
    pub converged_at: Option<usize>,
}

const CONVERGENCE_TOL: f64 = 1e-8;

fn relative_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Solve the steady state at each cutoff in the strictly increasing
/// `n_max_list` and report where the observables converge.
pub fn fock_convergence_scan(
    rates: &SystemRates,
    drive: &DriveSpec,
    n_max_list: &[usize],
) -> Result<TruncationReport> {
    if n_max_list.len() < 2 {
        return Err(Error::EmptyGrid);
    }
    if n_max_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedGrid);
    }
    let mut entries = Vec::with_capacity(n_max_list.len());
    for &n_max in n_max_list {
        let model = QuantumModel::build(rates, drive, n_max)?;
        let ss = steady_state(&model)?;
        entries.push(TruncationEntry {
            n_max,
            photon_number: ss.observables.photon_number,
            cross_correlator: ss.observables.field_raising,
        });
    }
    let mut converged_at = None;
    for pair in entries.windows(2) {
        let dn = relative_change(pair[0].photon_number, pair[1].photon_number);
        let dc = relative_change(pair[0].cross_correlator.norm(), pair[1].cross_correlator.norm());
        if dn < CONVERGENCE_TOL && dc < CONVERGENCE_TOL {
            converged_at = Some(pair[0].n_max);
            break;
        }
    }
    Ok(TruncationReport { entries, converged: converged_at.is_some(), converged_at })
}
