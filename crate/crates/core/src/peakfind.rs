//! Numeric peak location: dense grid scan plus golden-section refinement.
//!
//! Used to cross-validate the closed-form doublet positions, so it must
//! stay independent of them: nothing here knows about line shapes.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Grid density of the initial scan.
const SCAN_POINTS: usize = 4001;
/// Golden-section stopping width relative to the search interval.
const REFINE_REL_TOL: f64 = 1e-8;

/// A located local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Abscissa of the maximum (same units as the interval).
    pub omega: f64,
    /// Function value at the maximum.
    pub height: f64,
}

/// Locate all local maxima of `f` on the nonnegative half of `interval`.
///
/// The interval must contain 0; symmetric spectra make the negative half
/// redundant. Scans a 4001-point grid on [0, hi], then refines each
/// bracketed maximum by golden section to 1e−8 of the interval width.
/// The left endpoint counts as a maximum when the function falls away
/// from it, which is how a single-peaked spectrum reports its center.
pub fn find_local_maxima<F>(f: F, interval: (f64, f64)) -> Result<Vec<Peak>>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = interval;
    if !(lo <= 0.0 && 0.0 < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::BadInterval { lo, hi });
    }
    let step = hi / (SCAN_POINTS - 1) as f64;
    let mut values = Vec::with_capacity(SCAN_POINTS);
    for i in 0..SCAN_POINTS {
        let x = i as f64 * step;
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::NonFinite { what: "peak search" });
        }
        values.push(y);
    }

    let tol = REFINE_REL_TOL * hi;
    let mut peaks: Vec<Peak> = Vec::new();
    let push = |cand: Peak, peaks: &mut Vec<Peak>| {
        if let Some(last) = peaks.last_mut() {
            if (cand.omega - last.omega).abs() < 4.0 * tol.max(step * 1e-3) {
                if cand.height > last.height {
                    *last = cand;
                }
                return;
            }
        }
        peaks.push(cand);
    };

    if values[0] >= values[1] {
        // Falling edge at the origin: refine inside the first cell.
        let (x, y) = golden_max(&f, 0.0, step, tol);
        let cand = if values[0] >= y {
            Peak { omega: 0.0, height: values[0] }
        } else {
            Peak { omega: x, height: y }
        };
        push(cand, &mut peaks);
    }
    for i in 1..SCAN_POINTS - 1 {
        if values[i] > values[i - 1] && values[i] >= values[i + 1] {
            let (x, y) = golden_max(&f, (i - 1) as f64 * step, (i + 1) as f64 * step, tol);
            push(Peak { omega: x, height: y }, &mut peaks);
        }
    }
    if values[SCAN_POINTS - 1] > values[SCAN_POINTS - 2] {
        push(Peak { omega: hi, height: values[SCAN_POINTS - 1] }, &mut peaks);
    }
    Ok(peaks)
}

/// Golden-section maximization on [a, b] down to width `tol`.
fn golden_max<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
