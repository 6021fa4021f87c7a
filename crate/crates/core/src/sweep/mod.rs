//! Parameter-plane sweeps over (Ω/2π, Γ/2π) and their outputs.

pub mod cli;
pub mod config;
pub mod csv;
pub mod heatmap;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{self, DynamicsError, InitTimeOptions};
use crate::model::RateSet;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("point (omega = {omega_ghz} GHz, gamma = {gamma_ghz} GHz) failed: {source}")]
    Point {
        omega_ghz: f64,
        gamma_ghz: f64,
        #[source]
        source: DynamicsError,
    },
    #[error("no records")]
    Empty,
    #[error("records do not form a rectangular grid: {0}")]
    RaggedGrid(String),
    #[error("malformed CSV at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "lin",
            Spacing::Log => "log",
        })
    }
}

/// One sweep axis in GHz. A single-point axis sits at `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    min: f64,
    max: f64,
    count: usize,
    spacing: Spacing,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self, SweepError> {
        if !min.is_finite() || !max.is_finite() {
            return Err(SweepError::InvalidGrid(format!("bounds must be finite, got {min}..{max}")));
        }
        if count == 0 {
            return Err(SweepError::InvalidGrid("count must be at least 1".into()));
        }
        if min > max || (min == max && count > 1) {
            return Err(SweepError::InvalidGrid(format!("min {min} must be below max {max}")));
        }
        if min < 0.0 {
            return Err(SweepError::InvalidGrid(format!("rates must be non-negative, got min {min}")));
        }
        if spacing == Spacing::Log && min <= 0.0 {
            return Err(SweepError::InvalidGrid("log spacing needs min > 0".into()));
        }
        Ok(Self { min, max, count, spacing })
    }

    /// Single-point axis.
    pub fn point(value: f64) -> Result<Self, SweepError> {
        Self::new(value, value, 1, Spacing::Linear)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == self.count - 1 {
                    return self.max;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.min, self.max, self.count, self.spacing)
    }
}

/// The (Ω/2π, Γ/2π) plane plus the rates held fixed across it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub omega_axis: Axis,
    pub gamma_axis: Axis,
    /// γ₂₅, γ₃₅, γ₄₅ and γ₁₂ are taken from here; Ω and Γ are overwritten.
    pub fixed_rates: RateSet,
    pub init: InitTimeOptions,
}

impl SweepGrid {
    pub fn new(omega_axis: Axis, gamma_axis: Axis, fixed_rates: RateSet) -> Self {
        Self { omega_axis, gamma_axis, fixed_rates, init: InitTimeOptions::default() }
    }

    /// Ω/2π log-spaced over 0.01–5 GHz (60 points), Γ/2π linear over
    /// 5–20 GHz (31 points), default fixed rates.
    pub fn standard() -> Self {
        Self::new(
            Axis { min: 0.01, max: 5.0, count: 60, spacing: Spacing::Log },
            Axis { min: 5.0, max: 20.0, count: 31, spacing: Spacing::Linear },
            RateSet::default(),
        )
    }

    pub fn with_fixed_rates(mut self, rates: RateSet) -> Self {
        self.fixed_rates = rates;
        self
    }

    pub fn len(&self) -> usize {
        self.omega_axis.count * self.gamma_axis.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid coordinates, Γ outer and Ω inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let omegas = self.omega_axis.values();
        self.gamma_axis.values().into_iter().flat_map(|g| omegas.iter().map(move |&o| (o, g))).collect()
    }

    /// Applies an axis spec such as `omega:0.01:5:60:log,gamma:5:20:31:lin`.
    /// Axes not mentioned are left alone.
    pub fn apply_axes(&mut self, spec: &str) -> Result<(), SweepError> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, axis) = part
                .split_once(':')
                .ok_or_else(|| SweepError::InvalidGrid(format!("axis spec `{part}` has no name")))?;
            let axis: Axis = axis.parse()?;
            match name {
                "omega" => self.omega_axis = axis,
                "gamma" => self.gamma_axis = axis,
                other => return Err(SweepError::InvalidGrid(format!("unknown axis `{other}`"))),
            }
        }
        Ok(())
    }
}

impl FromStr for Axis {
    type Err = SweepError;

    /// `min:max:count:lin|log`
    fn from_str(s: &str) -> Result<Self, SweepError> {
        let bad = || SweepError::InvalidGrid(format!("expected min:max:count:lin|log, got `{s}`"));
        let fields: Vec<&str> = s.split(':').collect();
        let [min, max, count, spacing] = fields[..] else {
            return Err(bad());
        };
        let min: f64 = min.trim().parse().map_err(|_| bad())?;
        let max: f64 = max.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        let spacing = match spacing.trim() {
            "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            _ => return Err(bad()),
        };
        Axis::new(min, max, count, spacing)
    }
}

/// Observables at one grid point. Time and speed are absent when the
/// threshold is unreachable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub omega_ghz: f64,
    pub gamma_ghz: f64,
    pub fidelity: f64,
    pub t_init_ns: Option<f64>,
    pub speed_ghz: Option<f64>,
    pub reachable: bool,
}

impl SweepRecord {
    pub fn evaluate(rates: &RateSet, opts: &InitTimeOptions) -> Result<Self, DynamicsError> {
        let result = dynamics::initialization(rates, opts)?;
        let t_init_ns = result.time.t_init();
        Ok(Self {
            omega_ghz: rates.omega,
            gamma_ghz: rates.gamma15,
            fidelity: result.fidelity,
            t_init_ns,
            speed_ghz: result.time.speed_ghz(),
            reachable: t_init_ns.is_some(),
        })
    }
}

/// Evaluates every grid point, in parallel, returning records in grid order.
pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<SweepRecord>, SweepError> {
    let outcomes: Vec<_> = grid
        .points()
        .into_par_iter()
        .map(|(omega, gamma)| {
            let rates = RateSet { omega, gamma15: gamma, ..grid.fixed_rates };
            SweepRecord::evaluate(&rates, &grid.init).map_err(|source| SweepError::Point {
                omega_ghz: omega,
                gamma_ghz: gamma,
                source,
            })
        })
        .collect();
    // first failure in grid order, independent of scheduling
    outcomes.into_iter().collect()
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(grid: &SweepGrid, threads: usize) -> Result<Vec<SweepRecord>, SweepError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SweepError::InvalidGrid(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_sweep(grid))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinTime {
    Found(SweepRecord),
    NoReachablePoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub max_fidelity: SweepRecord,
    pub min_time: MinTime,
}

/// Best-fidelity and fastest records. Ties go to the smaller Ω, then the
/// smaller Γ.
pub fn find_extrema(records: &[SweepRecord]) -> Result<Extrema, SweepError> {
    let tie = |a: &SweepRecord, b: &SweepRecord| {
        a.omega_ghz.total_cmp(&b.omega_ghz).then(a.gamma_ghz.total_cmp(&b.gamma_ghz))
    };
    let max_fidelity = records
        .iter()
        .min_by(|a, b| b.fidelity.total_cmp(&a.fidelity).then_with(|| tie(a, b)))
        .copied()
        .ok_or(SweepError::Empty)?;
    let min_time = records
        .iter()
        .filter_map(|r| r.t_init_ns.map(|t| (t, r)))
        .min_by(|(ta, a), (tb, b)| ta.total_cmp(tb).then_with(|| tie(a, b)))
        .map_or(MinTime::NoReachablePoint, |(_, r)| MinTime::Found(*r));
    Ok(Extrema { max_fidelity, min_time })
}
