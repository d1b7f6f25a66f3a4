//! Property and cross-validation tests for the closed-form response:
//! scaling covariance, symmetry, energy conservation, the algebraic shape
//! of the cross term, and agreement between closed-form doublet positions
//! and blind numeric peak search.

use approx::assert_relative_eq;
use proptest::prelude::*;
use std::f64::consts::TAU;

use cqed_core::peakfind::find_local_maxima;
use cqed_core::{
    derive_params, split_thresholds, DriveSpec, SystemRates, WeakFieldSystem,
};

fn fig1(c: f64) -> WeakFieldSystem {
    WeakFieldSystem::from_cooperativity(TAU * 2.65, TAU * 6.0, c).unwrap()
}

proptest! {
    /// Multiplying (g, κ, γ, ε) by a common factor leaves every
    /// dimensionless output unchanged: exactly for binary factors, to
    /// rounding for s = 10.
    #[test]
    fn derived_params_scale_covariant(
        g in 0.1f64..50.0,
        kappa in 0.1f64..50.0,
        gamma in 0.1f64..50.0,
        eps in 0.0f64..10.0,
        n in 0u32..5,
    ) {
        let rates = SystemRates::new(g, kappa, gamma, n).unwrap();
        let drive = DriveSpec::new(eps, 0.0).unwrap();
        let base = derive_params(&rates, &drive);
        for s in [0.5, 2.0] {
            let scaled = derive_params(
                &SystemRates::new(s * g, s * kappa, s * gamma, n).unwrap(),
                &DriveSpec::new(s * eps, 0.0).unwrap(),
            );
            prop_assert_eq!(scaled.c1, base.c1);
            prop_assert_eq!(scaled.c, base.c);
            prop_assert_eq!(scaled.n_sat, base.n_sat);
            prop_assert_eq!(scaled.y, base.y);
        }
        let scaled = derive_params(
            &SystemRates::new(10.0 * g, 10.0 * kappa, 10.0 * gamma, n).unwrap(),
            &DriveSpec::new(10.0 * eps, 0.0).unwrap(),
        );
        prop_assert!((scaled.c1 - base.c1).abs() <= 1e-14 * base.c1);
        prop_assert!((scaled.n_sat - base.n_sat).abs() <= 1e-14 * base.n_sat);
        prop_assert!((scaled.y - base.y).abs() <= 1e-14 * base.y.abs());
    }

    /// C is exactly linear in the atom number.
    #[test]
    fn cooperativity_linear_in_atoms(
        g in 0.1f64..50.0,
        kappa in 0.1f64..50.0,
        gamma in 0.1f64..50.0,
        n in 0u32..50,
    ) {
        let rates = SystemRates::new(g, kappa, gamma, n).unwrap();
        prop_assert_eq!(rates.cooperativity(), n as f64 * rates.cooperativity_single());
    }

    /// On resonance the incident energy splits exactly: X(0) + F(0) = 1.
    #[test]
    fn resonant_energy_conservation(c in 0.0f64..100.0, kappa in 0.5f64..60.0, gamma in 0.5f64..60.0) {
        let sys = WeakFieldSystem::from_cooperativity(kappa, gamma, c).unwrap();
        let p = sys.response(0.0);
        prop_assert!((p.transmission + p.fluorescence - 1.0).abs() < 1e-12);
        prop_assert!(p.energy_residual().abs() < 1e-12);
    }

    /// The three intensity spectra are even in the detuning, bit for bit.
    #[test]
    fn spectra_are_symmetric(
        c in 0.0f64..50.0,
        kappa in 0.5f64..60.0,
        gamma in 0.5f64..60.0,
        omega in 0.0f64..300.0,
    ) {
        let sys = WeakFieldSystem::from_cooperativity(kappa, gamma, c).unwrap();
        let plus = sys.response(omega);
        let minus = sys.response(-omega);
        prop_assert_eq!(plus.transmission, minus.transmission);
        prop_assert_eq!(plus.cross_term, minus.cross_term);
        prop_assert_eq!(plus.polarization_sq, minus.polarization_sq);
    }

    /// |p|² = C · 2Re(x̄p) pointwise, so both spectra share their argmax.
    #[test]
    fn polarization_proportional_to_cross_term(
        c in 1e-3f64..50.0,
        kappa in 0.5f64..60.0,
        gamma in 0.5f64..60.0,
        omega in -200.0f64..200.0,
    ) {
        let sys = WeakFieldSystem::from_cooperativity(kappa, gamma, c).unwrap();
        let p = sys.response(omega);
        prop_assert!((p.polarization_sq - c * p.cross_term).abs() <= 1e-12 * p.polarization_sq.max(1e-300));
    }

    /// The cross term is a pure resonance curve,
    /// 4C(κγ/2)² / [(g²N + κγ/2 − Ω²)² + Ω²(κ + γ/2)²].
    #[test]
    fn cross_term_matches_quartic_form(
        c in 0.0f64..50.0,
        kappa in 0.5f64..60.0,
        gamma in 0.5f64..60.0,
        omega in -200.0f64..200.0,
    ) {
        let sys = WeakFieldSystem::from_cooperativity(kappa, gamma, c).unwrap();
        let p = sys.response(omega);
        let kg_half = 0.5 * kappa * gamma;
        let a = c * kappa * gamma + kg_half;
        let b = kappa + 0.5 * gamma;
        let q = (a - omega * omega) * (a - omega * omega) + omega * omega * b * b;
        let expected = 4.0 * c * kg_half * kg_half / q;
        prop_assert!((p.cross_term - expected).abs() <= 1e-12 * expected.max(1e-300));
    }

    /// Nonnegativity over random grids (cross term included, since the
    /// atomic and cavity resonances coincide).
    #[test]
    fn intensities_nonnegative(c in 0.0f64..50.0, omega in -500.0f64..500.0) {
        let p = fig1(c).response(omega);
        prop_assert!(p.transmission >= 0.0);
        prop_assert!(p.cross_term >= 0.0);
        prop_assert!(p.polarization_sq >= 0.0);
        prop_assert!(p.fluorescence >= 0.0);
    }
}

/// Strongest peak returned by the numeric search.
fn numeric_argmax(sys: &WeakFieldSystem, which: fn(&WeakFieldSystem, f64) -> f64) -> (f64, f64) {
    let peaks = find_local_maxima(|om| which(sys, om), sys.search_interval()).unwrap();
    peaks
        .iter()
        .fold((0.0, f64::NEG_INFINITY), |best, p| {
            if p.height > best.1 {
                (p.omega, p.height)
            } else {
                best
            }
        })
}

fn cross_of(sys: &WeakFieldSystem, om: f64) -> f64 {
    sys.response(om).cross_term
}

fn transmission_of(sys: &WeakFieldSystem, om: f64) -> f64 {
    sys.response(om).transmission
}

#[test]
fn closed_forms_agree_with_blind_peak_search() {
    for c in [0.6, 1.0, 2.0, 5.0, 20.0, 50.0] {
        let sys = fig1(c);
        let (om_num, _) = numeric_argmax(&sys, cross_of);
        let om_closed = sys.emission_peak_detuning().unwrap();
        assert_relative_eq!(om_num, om_closed, max_relative = 1e-6);

        let (om_num, _) = numeric_argmax(&sys, transmission_of);
        let om_closed = sys.transmission_peak_detuning().unwrap();
        assert_relative_eq!(om_num, om_closed, max_relative = 1e-6);
    }
}

#[test]
fn transmission_doublet_sits_outside_emission_doublet() {
    for c in [0.6, 1.0, 2.0, 5.0, 20.0, 50.0, 100.0] {
        let sys = fig1(c);
        let em = sys.emission_peak_detuning().unwrap();
        let tr = sys.transmission_peak_detuning().unwrap();
        assert!(tr > em, "C = {c}: {tr} vs {em}");
    }
}

#[test]
fn doublets_coalesce_at_large_cooperativity() {
    let mut previous_ratio = f64::INFINITY;
    for c in [20.0, 50.0, 100.0] {
        let sys = fig1(c);
        let em = sys.emission_peak_detuning().unwrap();
        let tr = sys.transmission_peak_detuning().unwrap();
        let ratio = tr / em;
        assert!(ratio > 1.0 && ratio < previous_ratio);
        previous_ratio = ratio;
    }
    let sys = fig1(50.0);
    let scale = sys.coupling_scale();
    assert!((sys.emission_peak_detuning().unwrap() - scale).abs() < 0.05 * scale);
    assert!((sys.transmission_peak_detuning().unwrap() - scale).abs() < 0.05 * scale);
}

#[test]
fn matched_rates_pin_the_doublet_height_at_half() {
    // κ = γ/2 makes the split cross-term peak exactly 1/2 at any C above
    // threshold.
    for c in [0.6, 1.0, 2.0, 5.0, 20.0] {
        let sys = WeakFieldSystem::from_cooperativity(TAU * 3.0, TAU * 6.0, c).unwrap();
        let om = sys.emission_peak_detuning().unwrap();
        assert!((sys.response(om).cross_term - 0.5).abs() < 1e-9, "C = {c}");
        // And the numeric search lands on the same height.
        let (_, height) = numeric_argmax(&sys, cross_of);
        assert!((height - 0.5).abs() < 1e-9, "C = {c}");
    }
}

#[test]
fn resonant_cross_term_peaks_at_half_cooperativity() {
    // Derivative sign change on a C grid: rising below 1/2, falling above.
    let mut cs = Vec::new();
    let mut values = Vec::new();
    let n = 1001;
    for i in 0..n {
        let c = 2.0 * i as f64 / (n - 1) as f64;
        cs.push(c);
        values.push(fig1(c).response(0.0).cross_term);
    }
    let argmax = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    assert!((cs[argmax] - 0.5).abs() < 1e-9);
    assert!((values[argmax] - 0.5).abs() < 1e-12);
    for i in 1..argmax {
        assert!(values[i] > values[i - 1]);
    }
    for i in argmax + 1..n {
        assert!(values[i] < values[i - 1]);
    }
}

#[test]
fn numeric_bifurcation_brackets_the_thresholds() {
    let (kappa, gamma) = (TAU * 2.65, TAU * 6.0);
    let thresholds = split_thresholds(kappa, gamma).unwrap();

    let splits = |c: f64, which: fn(&WeakFieldSystem, f64) -> f64| {
        let sys = WeakFieldSystem::from_cooperativity(kappa, gamma, c).unwrap();
        let (om, _) = numeric_argmax(&sys, which);
        om > 1e-6 * sys.search_interval().1
    };

    // Bisect the argmax bifurcation of the cross term.
    let (mut lo, mut hi) = (0.4, 0.6);
    assert!(!splits(lo, cross_of) && splits(hi, cross_of));
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if splits(mid, cross_of) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!((0.5 * (lo + hi) - thresholds.emission).abs() < 1e-4);

    // Same for the transmission spectrum.
    let (mut lo, mut hi) = (0.05, 0.3);
    assert!(!splits(lo, transmission_of) && splits(hi, transmission_of));
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if splits(mid, transmission_of) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!((0.5 * (lo + hi) - thresholds.transmission).abs() < 1e-4);
}

#[test]
fn spectrum_grid_round_trip() {
    let sys = fig1(2.0);
    let grid: Vec<f64> = (0..401).map(|i| TAU * (-10.0 + 0.05 * i as f64)).collect();
    let spec = sys.spectrum(&grid).unwrap();
    assert_eq!(spec.points.len(), grid.len());
    for (om, p) in grid.iter().zip(&spec.points) {
        assert_eq!(*om, p.omega);
        assert_eq!(p.transmission, sys.response(*om).transmission);
    }
    assert!(spec.peaks.emission_split && spec.peaks.transmission_split);
}
