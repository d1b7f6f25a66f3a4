//! Fixed-step RK4 integration of the master equation.
//!
//! Serves as the fallback steady-state route for dimensions the dense
//! solve cannot touch, and as an independent cross-check of the direct
//! solve (two solvers, one answer). The generator is trace-free on every
//! input, so the trace is preserved to roundoff regardless of step size.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

use super::model::QuantumModel;
use super::steady::apply_liouvillian;

type CMatrix = DMatrix<Complex64>;

/// One classical RK4 step of dρ/dt = L(ρ).
pub(super) fn rk4_step(model: &QuantumModel, rho: &CMatrix, dt: f64) -> CMatrix {
    let half = Complex64::new(0.5 * dt, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let k1 = apply_liouvillian(model, rho);
    let k2 = apply_liouvillian(model, &(rho + &k1 * half));
    let k3 = apply_liouvillian(model, &(rho + &k2 * half));
    let k4 = apply_liouvillian(model, &(rho + &k3 * full));
    rho + (k1 + k2 * two + k3 * two + k4) * sixth
}

/// Integrate from `rho0` to `t_final` with steps of at most `dt`.
///
/// The step must resolve the fastest rate in the model:
/// dt < 0.1/max(κ, γ, g√N, |Ω|, ε). The actual step is `t_final`
/// divided evenly so the end point is hit exactly.
pub fn evolve(model: &QuantumModel, rho0: &CMatrix, t_final: f64, dt: f64) -> Result<CMatrix> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::NonFinite { what: "evolution time" });
    }
    let rates = model.rates();
    let fastest = rates
        .kappa()
        .max(rates.gamma())
        .max(rates.collective_coupling())
        .max(model.drive().omega().abs())
        .max(model.drive().epsilon());
    let dt_max = 0.1 / fastest;
    if !(dt > 0.0 && dt < dt_max) {
        return Err(Error::StepSize { dt, max: dt_max });
    }
    if t_final == 0.0 {
        return Ok(rho0.clone());
    }
    let steps = (t_final / dt).ceil() as usize;
    let h = t_final / steps as f64;
    let mut rho = rho0.clone();
    for step in 0..steps {
        rho = rk4_step(model, &rho, h);
        if step % 64 == 0 && !rho.trace().re.is_finite() {
            return Err(Error::NonFinite { what: "evolution state" });
        }
    }
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { what: "evolution state" });
    }
    Ok(rho)
}
