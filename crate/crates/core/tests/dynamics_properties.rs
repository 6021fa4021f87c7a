mod common;

use std::f64::consts::TAU;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spin_init::dynamics::{
    evolve, fidelity, init_time, speed_from_time, stationary_residual, steady_state, ReducedPropagator,
    DEFAULT_THRESHOLD, STEADY_RESIDUAL_TOL,
};
use spin_init::linalg;
use spin_init::model::{build_liouvillian, DensityMatrix, Level, RateSet};

fn assert_physical(rho: &DensityMatrix, what: &str) {
    let m = rho.matrix();
    assert!((m.trace().re - 1.0).abs() < 1e-9 && m.trace().im.abs() < 1e-9, "{what}: trace {}", m.trace());
    assert!(m.hermiticity_deviation() < 1e-10, "{what}: not Hermitian");
    let e = linalg::hermitian_eigenvalues(&m.hermitian_part(), linalg::SOLVE_TOL).unwrap();
    assert!(e[0] >= -1e-9, "{what}: eigenvalue {}", e[0]);
}

#[test]
fn evolution_stays_physical() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for k in 0..20 {
        let rates = random_rates(&mut rng);
        let l = build_liouvillian(&rates).unwrap();
        let rho0 = if k % 2 == 0 { DensityMatrix::unpolarized() } else { DensityMatrix::pure(Level::SpinDown) };
        let horizon = 100.0 / rates.gamma15_angular();
        for f in [0.0, 0.01, 0.1, 0.5, 1.0] {
            let rho = evolve(&l, &rho0, f * horizon).unwrap();
            assert_physical(&rho, &format!("{rates:?} at t = {}", f * horizon));
        }
    }
}

#[test]
fn evolution_is_a_semigroup() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..5 {
        let rates = random_rates(&mut rng);
        let l = build_liouvillian(&rates).unwrap();
        let rho0 = DensityMatrix::unpolarized();
        let (t1, t2) = (0.13, 0.29);
        let stepwise = evolve(&l, &evolve(&l, &rho0, t1).unwrap(), t2).unwrap();
        let direct = evolve(&l, &rho0, t1 + t2).unwrap();
        assert!(stepwise.matrix().approx_eq(direct.matrix(), 1e-9));
    }
}

#[test]
fn reduced_propagator_matches_full_evolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..5 {
        let rates = random_rates(&mut rng);
        let l = build_liouvillian(&rates).unwrap();
        let rho0 = DensityMatrix::unpolarized();
        let reduced = ReducedPropagator::new(&l, &rho0);
        assert!(reduced.dimension() < 25);
        for t in [0.0, 0.05, 0.3, 2.0] {
            let full = evolve(&l, &rho0, t).unwrap();
            for level in Level::ALL {
                let p = reduced.population_at(level, t).unwrap();
                assert!((p - full.population(level)).abs() < 1e-10, "{level:?} at {t}");
            }
        }
    }
}

#[test]
fn steady_state_is_stationary_and_physical() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..20 {
        let l = build_liouvillian(&random_rates(&mut rng)).unwrap();
        let rho = steady_state(&l).unwrap();
        assert_physical(&rho, "steady state");
        assert!(stationary_residual(&l, rho.matrix()) < STEADY_RESIDUAL_TOL * l.matrix().frobenius_norm());
    }
}

#[test]
fn steady_state_is_long_time_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..5 {
        let mut rates = random_rates(&mut rng);
        // keep the slow spin-flip mode from dominating the horizon
        rates.gamma12 = 1e-3;
        rates.gamma25 = 1e-3;
        let l = build_liouvillian(&rates).unwrap();
        let t = 1000.0 / rates.gamma15_angular();
        let late = evolve(&l, &DensityMatrix::unpolarized(), t).unwrap();
        let stationary = steady_state(&l).unwrap();
        assert!(late.matrix().approx_eq(stationary.matrix(), 1e-6), "{rates:?}");
    }
}

#[test]
fn uniform_rate_scaling_is_time_rescaling() {
    let rates = RateSet::new(0.5, 10.0);
    let f = fidelity(&rates).unwrap();
    let t = init_time(&rates, DEFAULT_THRESHOLD).unwrap().t_init().unwrap();
    for s in [0.5, 2.0, 10.0] {
        let scaled = rates.scaled(s);
        assert!((fidelity(&scaled).unwrap() - f).abs() < 1e-9, "s = {s}");
        let ts = init_time(&scaled, DEFAULT_THRESHOLD).unwrap().t_init().unwrap();
        assert!((ts * s / t - 1.0).abs() < 1e-3, "s = {s}: {ts} vs {}", t / s);
    }
}

#[test]
fn weak_drive_fidelity_rises_with_omega() {
    let f: Vec<f64> = [0.01, 0.05, 0.1].iter().map(|&w| fidelity(&RateSet::new(w, 10.0)).unwrap()).collect();
    assert!(f[0] < f[1] && f[1] < f[2], "{f:?}");
}

#[test]
fn fidelity_peaks_at_intermediate_drive() {
    let omegas: Vec<f64> = (0..40).map(|k| 0.01 * 500f64.powf(k as f64 / 39.0)).collect();
    let f: Vec<f64> = omegas.iter().map(|&w| fidelity(&RateSet::new(w, 5.0)).unwrap()).collect();
    let (peak, _) = f.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!(peak > 0 && peak < omegas.len() - 1, "peak at the edge: Ω = {}", omegas[peak]);
    assert!(f[0] < f[peak] && f[f.len() - 1] < f[peak]);
}

#[test]
fn undriven_cascade_matches_closed_form() {
    // From |3⟩ with no drive: ρ₃₃ = e^{-at}, ρ₅₅ = a/(b−a)·(e^{-at} − e^{-bt})
    let rates = RateSet { omega: 0.0, gamma15: 7.0, gamma25: 0.2, gamma35: 3.0, gamma45: 9.0, gamma12: 0.0 };
    let a = TAU * rates.gamma35;
    let b = TAU * (rates.gamma15 + rates.gamma25);
    let l = build_liouvillian(&rates).unwrap();
    let rho0 = DensityMatrix::pure(Level::TrionDownP);
    let reduced = ReducedPropagator::new(&l, &rho0);
    for k in 0..20 {
        let t = 0.02 * k as f64;
        let p33 = (-a * t).exp();
        let p55 = a / (b - a) * ((-a * t).exp() - (-b * t).exp());
        let p11 = rates.gamma15 / (rates.gamma15 + rates.gamma25) * (1.0 - p33 - p55);
        let rho = evolve(&l, &rho0, t).unwrap();
        assert!((rho.population(Level::TrionDownP) - p33).abs() < 1e-9);
        assert!((rho.population(Level::TrionS) - p55).abs() < 1e-9);
        assert!((rho.population(Level::SpinUp) - p11).abs() < 1e-9);
        assert!((reduced.population_at(Level::TrionS, t).unwrap() - p55).abs() < 1e-9);
    }
}

#[test]
fn speed_times_time_is_inverse_two_pi() {
    for t in [1e-3, 0.111, 0.52, 40.0] {
        assert!((speed_from_time(t).unwrap() * TAU * t - 1.0).abs() < 1e-12);
    }
}
