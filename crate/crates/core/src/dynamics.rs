//! Steady state, time evolution and the two initialization observables.
//!
//! *Fidelity* is the stationary population of |↑ₛ⟩. *Initialization time*
//! is the first time ρ₁₁(t) reaches a threshold (1 − 1/e by default) when
//! starting from the unpolarized mixture ρ₁₁ = ρ₂₂ = ½. Speeds are
//! reported as `1 / (2π t)`.

use std::f64::consts::{E, TAU};

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError};
use crate::model::{self, DensityMatrix, Level, Liouvillian, ModelError, RateSet, DIM, LIOUVILLE_DIM};

/// Default initialization threshold, 1 − 1/e.
pub const DEFAULT_THRESHOLD: f64 = 1.0 - 1.0 / E;

/// Relative residual accepted for a stationary state.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(LinalgError),
    #[error("stationary state is not unique (condition estimate {condition_estimate:.3e})")]
    NonUniqueSteadyState { condition_estimate: f64 },
    #[error("stationary residual {relative_residual:.3e} exceeds tolerance")]
    SteadyStateResidual { relative_residual: f64 },
    #[error("evolution time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("threshold must lie strictly between 0 and 1, got {0}")]
    InvalidThreshold(f64),
    #[error("threshold {threshold} not crossed before horizon {horizon_ns:.3e} ns")]
    HorizonExceeded { threshold: f64, horizon_ns: f64 },
}

impl From<LinalgError> for DynamicsError {
    fn from(err: LinalgError) -> Self {
        match err {
            LinalgError::Singular { condition_estimate } => Self::NonUniqueSteadyState { condition_estimate },
            other => Self::Linalg(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, DynamicsError>;

/// Solves `L·vec(ρ) = 0` with `tr ρ = 1` appended as an extra equation.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let lm = l.matrix();
    let mut augmented = ComplexMatrix::zeros(LIOUVILLE_DIM + 1, LIOUVILLE_DIM);
    for i in 0..LIOUVILLE_DIM {
        for j in 0..LIOUVILLE_DIM {
            augmented[(i, j)] = lm[(i, j)];
        }
    }
    for k in 0..DIM {
        augmented[(LIOUVILLE_DIM, k * DIM + k)] = C64::new(1.0, 0.0);
    }
    let mut rhs = vec![C64::new(0.0, 0.0); LIOUVILLE_DIM + 1];
    rhs[LIOUVILLE_DIM] = C64::new(1.0, 0.0);

    let solution = linalg::solve_linear(&augmented, &rhs, linalg::SOLVE_TOL)?;
    let raw = ComplexMatrix::unvectorize(&solution.x, DIM, DIM).hermitian_part();
    let rho = raw.scale(C64::new(1.0, 0.0) / raw.trace());

    let relative_residual = stationary_residual(l, &rho);
    if relative_residual >= STEADY_RESIDUAL_TOL {
        return Err(DynamicsError::SteadyStateResidual { relative_residual });
    }
    Ok(model::validate_density(rho)?)
}

/// `‖L·vec(ρ)‖ / ‖L‖_F`.
pub fn stationary_residual(l: &Liouvillian, rho: &ComplexMatrix) -> f64 {
    let norm = l.matrix().frobenius_norm();
    let image = l.matrix().matvec(&rho.vectorize());
    let r = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        r
    } else {
        r / norm
    }
}

/// `ρ(t) = unvec(exp(L t) vec(ρ₀))`, with `t` in ns.
pub fn evolve(l: &Liouvillian, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if t.is_nan() || t < 0.0 {
        return Err(DynamicsError::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let propagator = linalg::matexp(l.matrix(), t)?;
    let v = propagator.matvec(&rho0.vectorize());
    let rho = ComplexMatrix::unvectorize(&v, DIM, DIM).hermitian_part();
    Ok(model::validate_density(rho)?)
}

/// Propagator restricted to the Liouville-space coordinates reachable from a
/// fixed initial state.
///
/// Coordinates that `L` never couples to the support of `vec(ρ₀)` stay zero
/// for all time, so `exp(L t)` only has to be formed on the closed block of
/// reachable coordinates. For an initially diagonal state of this model that
/// is the five populations plus the four driven coherences.
#[derive(Debug, Clone)]
pub struct ReducedPropagator {
    indices: Vec<usize>,
    block: ComplexMatrix,
    initial: Vec<C64>,
}

impl ReducedPropagator {
    pub fn new(l: &Liouvillian, rho0: &DensityMatrix) -> Self {
        let lm = l.matrix();
        let v = rho0.vectorize();
        let mut reached = [false; LIOUVILLE_DIM];
        let mut stack: Vec<usize> = (0..LIOUVILLE_DIM).filter(|&i| v[i] != C64::new(0.0, 0.0)).collect();
        for &i in &stack {
            reached[i] = true;
        }
        while let Some(j) = stack.pop() {
            for i in 0..LIOUVILLE_DIM {
                if !reached[i] && lm[(i, j)] != C64::new(0.0, 0.0) {
                    reached[i] = true;
                    stack.push(i);
                }
            }
        }
        let indices: Vec<usize> = (0..LIOUVILLE_DIM).filter(|&i| reached[i]).collect();
        let block = if indices.is_empty() { ComplexMatrix::zeros(1, 1) } else { lm.submatrix(&indices) };
        let initial = indices.iter().map(|&i| v[i]).collect();
        Self { indices, block, initial }
    }

    /// Size of the reachable block.
    pub fn dimension(&self) -> usize {
        self.indices.len()
    }

    /// `vec(ρ(t))` in the full Liouville space.
    pub fn vector_at(&self, t: f64) -> Result<Vec<C64>> {
        let mut full = vec![C64::new(0.0, 0.0); LIOUVILLE_DIM];
        if self.indices.is_empty() {
            return Ok(full);
        }
        let reduced = linalg::matexp(&self.block, t)?.matvec(&self.initial);
        for (&i, z) in self.indices.iter().zip(reduced) {
            full[i] = z;
        }
        Ok(full)
    }

    pub fn population_at(&self, level: Level, t: f64) -> Result<f64> {
        let k = level.index() * DIM + level.index();
        match self.indices.iter().position(|&i| i == k) {
            Some(pos) => {
                let reduced = linalg::matexp(&self.block, t)?.matvec(&self.initial);
                Ok(reduced[pos].re)
            }
            None => Ok(0.0),
        }
    }
}

/// Stationary population of |↑ₛ⟩.
pub fn fidelity(rates: &RateSet) -> Result<f64> {
    let l = model::build_liouvillian(rates)?;
    Ok(steady_state(&l)?.population(Level::SpinUp))
}

/// Outcome of an initialization-time search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitTimeResult {
    /// ρ₁₁ first reaches the threshold at `t_init` ns.
    Reached { t_init: f64 },
    /// The stationary ρ₁₁ lies below the threshold, so it is never reached.
    Unreachable { steady_fidelity: f64 },
}

impl InitTimeResult {
    pub fn t_init(&self) -> Option<f64> {
        match *self {
            Self::Reached { t_init } => Some(t_init),
            Self::Unreachable { .. } => None,
        }
    }

    pub fn is_reachable(&self) -> bool {
        matches!(self, Self::Reached { .. })
    }

    /// `1/(2π t)` in GHz, when reached at a positive time.
    pub fn speed_ghz(&self) -> Option<f64> {
        self.t_init().and_then(|t| speed_from_time(t).ok())
    }
}

/// Search controls for [`init_time_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitTimeOptions {
    pub threshold: f64,
    /// First point of the geometric sampling grid, ns.
    pub grid_start: f64,
    pub grid_ratio: f64,
    /// Sampling stops at `horizon_factor · max(1/Γ, 1/Ω)` in angular units.
    pub horizon_factor: f64,
    /// Bisection stops once the bracket is below this width (ns)...
    pub abs_tol: f64,
    /// ...or below this fraction of its upper end, whichever is smaller.
    pub rel_tol: f64,
}

impl Default for InitTimeOptions {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            grid_start: 1e-3,
            grid_ratio: 1.2,
            horizon_factor: 1e4,
            abs_tol: 1e-4,
            rel_tol: 1e-6,
        }
    }
}

/// Initialization time for `threshold`, with default search controls.
pub fn init_time(rates: &RateSet, threshold: f64) -> Result<InitTimeResult> {
    init_time_with(rates, &InitTimeOptions { threshold, ..InitTimeOptions::default() })
}

pub fn init_time_with(rates: &RateSet, opts: &InitTimeOptions) -> Result<InitTimeResult> {
    Ok(initialization(rates, opts)?.time)
}

/// Both observables for one rate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Initialization {
    pub fidelity: f64,
    pub time: InitTimeResult,
}

/// Fidelity and initialization time from a single Liouvillian build and
/// stationary solve.
pub fn initialization(rates: &RateSet, opts: &InitTimeOptions) -> Result<Initialization> {
    let threshold = opts.threshold;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(DynamicsError::InvalidThreshold(threshold));
    }
    let l = model::build_liouvillian(rates)?;
    let fidelity = steady_state(&l)?.population(Level::SpinUp);
    let time = time_to_threshold(&l, fidelity, opts)?;
    Ok(Initialization { fidelity, time })
}

fn time_to_threshold(l: &Liouvillian, steady_fidelity: f64, opts: &InitTimeOptions) -> Result<InitTimeResult> {
    let threshold = opts.threshold;
    if steady_fidelity < threshold {
        return Ok(InitTimeResult::Unreachable { steady_fidelity });
    }

    let rho0 = DensityMatrix::unpolarized();
    if rho0.population(Level::SpinUp) >= threshold {
        return Ok(InitTimeResult::Reached { t_init: 0.0 });
    }

    let propagator = ReducedPropagator::new(l, &rho0);
    let rho11 = |t: f64| propagator.population_at(Level::SpinUp, t);

    let horizon = search_horizon(l.rates(), opts);
    let mut lower = 0.0;
    let mut t = opts.grid_start;
    let mut upper = None;
    while t <= horizon {
        if rho11(t)? >= threshold {
            upper = Some(t);
            break;
        }
        lower = t;
        t *= opts.grid_ratio;
    }
    let Some(mut upper) = upper else {
        return Err(DynamicsError::HorizonExceeded { threshold, horizon_ns: horizon });
    };

    while upper - lower > opts.abs_tol.min(opts.rel_tol * upper) {
        let mid = 0.5 * (lower + upper);
        if rho11(mid)? >= threshold {
            upper = mid;
        } else {
            lower = mid;
        }
    }
    Ok(InitTimeResult::Reached { t_init: upper })
}

fn search_horizon(rates: &RateSet, opts: &InitTimeOptions) -> f64 {
    let slowest = [rates.gamma15_angular(), rates.omega_angular()]
        .into_iter()
        .filter(|&w| w > 0.0)
        .map(|w| 1.0 / w)
        .fold(0.0, f64::max);
    opts.horizon_factor * slowest
}

/// Initialization speed `1/(2π t)` in GHz for a time in ns.
pub fn speed_from_time(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(DynamicsError::NonPositiveTime(t));
    }
    Ok(1.0 / (TAU * t))
}

/// Drive-to-emission ratio Ω/Γ at which the stationary fidelity falls to
/// `threshold`, located by bisection on `[lo, hi]`.
///
/// Returns `None` when the fidelity does not straddle the threshold on the
/// bracket.
pub fn reachability_boundary(template: &RateSet, threshold: f64, lo: f64, hi: f64) -> Result<Option<f64>> {
    let f = |ratio: f64| -> Result<f64> {
        let rates = RateSet { omega: ratio * template.gamma15, ..*template };
        Ok(fidelity(&rates)? - threshold)
    };
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a)?, f(b)?);
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    while b - a > 1e-9 * b {
        let m = 0.5 * (a + b);
        if f(m)?.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trade_off() -> RateSet {
        RateSet::new(0.5, 10.0)
    }

    #[test]
    fn steady_state_without_drive_is_unpolarized() {
        let rho = steady_state(&model::build_liouvillian(&RateSet::new(0.0, 10.0)).unwrap()).unwrap();
        assert!((rho.population(Level::SpinUp) - 0.5).abs() < 1e-9);
        assert!((rho.population(Level::SpinDown) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn steady_state_at_trade_off_point() {
        let rho = steady_state(&model::build_liouvillian(&trade_off()).unwrap()).unwrap();
        assert!((rho.population(Level::SpinUp) - 0.973).abs() < 0.003);
    }

    #[test]
    fn steady_state_degenerate_is_reported() {
        // no drive and no spin flips: both ground spins are dark
        let rates = RateSet::new(0.0, 10.0).with_gamma12(0.0);
        let err = steady_state(&model::build_liouvillian(&rates).unwrap()).unwrap_err();
        assert!(matches!(err, DynamicsError::NonUniqueSteadyState { .. }), "{err:?}");

        let err = steady_state(&model::build_liouvillian(&RateSet::zero()).unwrap()).unwrap_err();
        assert!(matches!(err, DynamicsError::NonUniqueSteadyState { .. }), "{err:?}");
    }

    #[test]
    fn evolve_zero_time_is_identity() {
        let l = model::build_liouvillian(&trade_off()).unwrap();
        let rho0 = DensityMatrix::unpolarized();
        assert_eq!(evolve(&l, &rho0, 0.0).unwrap(), rho0);
        assert_eq!(evolve(&l, &rho0, -1.0), Err(DynamicsError::NegativeTime(-1.0)));
    }

    #[test]
    fn reduced_propagator_matches_full_evolution() {
        let l = model::build_liouvillian(&trade_off()).unwrap();
        let rho0 = DensityMatrix::unpolarized();
        let p = ReducedPropagator::new(&l, &rho0);
        assert_eq!(p.dimension(), 9);
        for t in [0.01, 0.3, 2.0, 40.0] {
            let full = evolve(&l, &rho0, t).unwrap().vectorize();
            let reduced = p.vector_at(t).unwrap();
            let diff = full.iter().zip(&reduced).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(diff < 1e-12, "t = {t}: {diff}");
        }
    }

    #[test]
    fn fidelity_without_drive() {
        assert!((fidelity(&RateSet::new(0.0, 10.0)).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn init_time_at_trade_off_point() {
        let r = init_time(&trade_off(), DEFAULT_THRESHOLD).unwrap();
        let t = r.t_init().expect("reachable");
        assert!((t - 0.50).abs() < 0.05, "{t}");
        let speed = r.speed_ghz().unwrap();
        assert!((speed - 0.32).abs() < 0.032, "{speed}");
    }

    #[test]
    fn init_time_unreachable_for_strong_drive() {
        let r = init_time(&RateSet::new(3.0, 10.0), DEFAULT_THRESHOLD).unwrap();
        match r {
            InitTimeResult::Unreachable { steady_fidelity } => assert!(steady_fidelity < DEFAULT_THRESHOLD),
            other => panic!("expected unreachable, got {other:?}"),
        }
        assert_eq!(r.speed_ghz(), None);
    }

    #[test]
    fn init_time_boundary_threshold() {
        assert_eq!(init_time(&trade_off(), 0.5).unwrap(), InitTimeResult::Reached { t_init: 0.0 });
    }

    #[test]
    fn init_time_rejects_bad_threshold() {
        for th in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(matches!(init_time(&trade_off(), th), Err(DynamicsError::InvalidThreshold(_))));
        }
    }

    #[test]
    fn speed_convention() {
        assert!((speed_from_time(0.12).unwrap() - 1.326).abs() < 1e-3);
        assert!((speed_from_time(0.497).unwrap() - 0.320).abs() < 1e-3);
        let s = speed_from_time(0.3).unwrap();
        assert!((speed_from_time(0.6).unwrap() - s / 2.0).abs() < 1e-15);
        assert!(speed_from_time(0.0).is_err());
        assert!(speed_from_time(-1.0).is_err());
    }

    #[test]
    fn boundary_lies_between_documented_ratios() {
        let ratio = reachability_boundary(&RateSet::new(0.0, 10.0), DEFAULT_THRESHOLD, 0.1, 0.3).unwrap().unwrap();
        assert!(ratio > 0.1 && ratio < 0.3, "{ratio}");
    }
}
