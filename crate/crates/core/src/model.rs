//! The five-level electron/trion system and its Lindblad generator.
//!
//! Basis ordering is fixed by [`Level`] and shared by every matrix in the
//! crate:
//!
//! | index | level | state |
//! |-------|-------|-------|
//! | 0 | [`Level::SpinUp`] | electron spin up, s shell |
//! | 1 | [`Level::SpinDown`] | electron spin down, s shell |
//! | 2 | [`Level::TrionDownP`] | p-shell trion reached from spin down |
//! | 3 | [`Level::TrionUpP`] | p-shell trion reached from spin up |
//! | 4 | [`Level::TrionS`] | s-shell trion |
//!
//! Rates are given by the user as ν = rate/2π in GHz; internally every
//! generator is in angular units (rad/ns) so that time is in ns.
//! Superoperators act on column-stacked density matrices, i.e.
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{self, kron, ComplexMatrix, LinalgError};

/// Hilbert-space dimension of the model.
pub const DIM: usize = 5;
/// Dimension of the Liouville space.
pub const LIOUVILLE_DIM: usize = DIM * DIM;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("rate `{name}` must be finite and non-negative, got {value}")]
    InvalidRate { name: &'static str, value: f64 },
    #[error("density matrix must be {DIM}x{DIM}, got {rows}x{cols}")]
    Shape { rows: usize, cols: usize },
    #[error("density matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("density matrix trace deviates from 1 by {0:.3e}")]
    Trace(f64),
    #[error("density matrix has negative eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The five levels, in matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// |↑ₛ⟩, the target state of initialization.
    SpinUp,
    /// |↓ₛ⟩
    SpinDown,
    /// |↓ₛ↑ₚ⇑ₛ⟩
    TrionDownP,
    /// |↑ₛ↑ₚ⇑ₛ⟩
    TrionUpP,
    /// |↑ₛ↓ₛ⇑ₛ⟩
    TrionS,
}

impl Level {
    pub const ALL: [Level; DIM] = [Level::SpinUp, Level::SpinDown, Level::TrionDownP, Level::TrionUpP, Level::TrionS];

    /// Zero-based matrix index.
    pub const fn index(self) -> usize {
        self as usize
    }

    /// One-based label, matching the |1⟩…|5⟩ naming.
    pub const fn label(self) -> usize {
        self as usize + 1
    }
}

/// All model rates as ν = rate/2π in GHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    /// Effective two-photon Rabi rate Ω/2π.
    pub omega: f64,
    /// Purcell-enhanced emission |5⟩→|1⟩, Γ/2π.
    pub gamma15: f64,
    /// |5⟩→|2⟩ decay.
    pub gamma25: f64,
    /// Phonon relaxation |3⟩→|5⟩.
    pub gamma35: f64,
    /// Phonon relaxation |4⟩→|5⟩.
    pub gamma45: f64,
    /// Spin flip between |1⟩ and |2⟩, applied in both directions.
    pub gamma12: f64,
}

impl RateSet {
    pub const DEFAULT_GAMMA25: f64 = 1e-4;
    pub const DEFAULT_GAMMA12: f64 = 1e-5;
    pub const DEFAULT_GAMMA_P: f64 = 8.0;

    /// Drive and emission rates with every other rate at its default.
    pub fn new(omega: f64, gamma15: f64) -> Self {
        Self { omega, gamma15, ..Self::default() }
    }

    pub fn with_gamma12(mut self, gamma12: f64) -> Self {
        self.gamma12 = gamma12;
        self
    }

    pub fn with_gamma25(mut self, gamma25: f64) -> Self {
        self.gamma25 = gamma25;
        self
    }

    /// Sets both p-shell relaxation rates.
    pub fn with_gamma_p(mut self, gamma_p: f64) -> Self {
        self.gamma35 = gamma_p;
        self.gamma45 = gamma_p;
        self
    }

    /// Every rate multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            omega: self.omega * s,
            gamma15: self.gamma15 * s,
            gamma25: self.gamma25 * s,
            gamma35: self.gamma35 * s,
            gamma45: self.gamma45 * s,
            gamma12: self.gamma12 * s,
        }
    }

    pub fn zero() -> Self {
        Self { omega: 0.0, gamma15: 0.0, gamma25: 0.0, gamma35: 0.0, gamma45: 0.0, gamma12: 0.0 }
    }

    fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("omega", self.omega),
            ("gamma15", self.gamma15),
            ("gamma25", self.gamma25),
            ("gamma35", self.gamma35),
            ("gamma45", self.gamma45),
            ("gamma12", self.gamma12),
        ]
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, value) in self.named() {
            if !value.is_finite() || value < 0.0 {
                return Err(ModelError::InvalidRate { name, value });
            }
        }
        Ok(())
    }

    /// Ω in rad/ns.
    pub fn omega_angular(&self) -> f64 {
        TAU * self.omega
    }

    /// Γ in rad/ns.
    pub fn gamma15_angular(&self) -> f64 {
        TAU * self.gamma15
    }
}

impl Default for RateSet {
    fn default() -> Self {
        Self {
            omega: 0.0,
            gamma15: 0.0,
            gamma25: Self::DEFAULT_GAMMA25,
            gamma35: Self::DEFAULT_GAMMA_P,
            gamma45: Self::DEFAULT_GAMMA_P,
            gamma12: Self::DEFAULT_GAMMA12,
        }
    }
}

/// A validated 5×5 density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn population(&self, level: Level) -> f64 {
        self.0[(level.index(), level.index())].re
    }

    pub fn populations(&self) -> [f64; DIM] {
        Level::ALL.map(|l| self.population(l))
    }

    /// `|level⟩⟨level|`.
    pub fn pure(level: Level) -> Self {
        let i = level.index();
        Self(ComplexMatrix::single_entry(DIM, i, i, C64::new(1.0, 0.0)))
    }

    /// Equal mixture of the two ground spin states, the initialization
    /// starting point.
    pub fn unpolarized() -> Self {
        Self(ComplexMatrix::diag_real(&[0.5, 0.5, 0.0, 0.0, 0.0]))
    }

    pub fn vectorize(&self) -> Vec<C64> {
        self.0.vectorize()
    }
}

/// Checks Hermiticity, unit trace and positivity.
pub fn validate_density(rho: ComplexMatrix) -> Result<DensityMatrix, ModelError> {
    if rho.rows() != DIM || rho.cols() != DIM {
        return Err(ModelError::Shape { rows: rho.rows(), cols: rho.cols() });
    }
    let dev = rho.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(ModelError::NotHermitian(dev));
    }
    let trace_dev = (rho.trace() - C64::new(1.0, 0.0)).norm();
    if trace_dev > TRACE_TOL {
        return Err(ModelError::Trace(trace_dev));
    }
    let min_eig = linalg::hermitian_eigenvalues(&rho, HERMITIAN_TOL)?[0];
    if min_eig < -POSITIVITY_TOL {
        return Err(ModelError::NotPositive(min_eig));
    }
    Ok(DensityMatrix(rho))
}

/// Two-photon drive, ħ = 1, rad/ns: Ω(|4⟩⟨1| + |3⟩⟨2|) + h.c.
pub fn build_hamiltonian(rates: &RateSet) -> Result<ComplexMatrix, ModelError> {
    rates.validate()?;
    let w = C64::new(rates.omega_angular(), 0.0);
    let mut h = ComplexMatrix::zeros(DIM, DIM);
    for (excited, ground) in [(Level::TrionUpP, Level::SpinUp), (Level::TrionDownP, Level::SpinDown)] {
        h[(excited.index(), ground.index())] = w;
        h[(ground.index(), excited.index())] = w;
    }
    Ok(h)
}

/// The six jump operators √γ |to⟩⟨from| in rad/ns units, ordered
/// D₁…D₄ (radiative and phonon decays) then the two spin flips.
pub fn build_collapse_operators(rates: &RateSet) -> Result<Vec<ComplexMatrix>, ModelError> {
    rates.validate()?;
    use Level::*;
    let channels = [
        (SpinUp, TrionS, rates.gamma15),
        (SpinDown, TrionS, rates.gamma25),
        (TrionS, TrionDownP, rates.gamma35),
        (TrionS, TrionUpP, rates.gamma45),
        (SpinDown, SpinUp, rates.gamma12),
        (SpinUp, SpinDown, rates.gamma12),
    ];
    Ok(channels
        .iter()
        .map(|&(to, from, nu)| ComplexMatrix::single_entry(DIM, to.index(), from.index(), C64::new((TAU * nu).sqrt(), 0.0)))
        .collect())
}

/// Lindblad generator acting on column-stacked `vec(ρ)`, in rad/ns.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    matrix: ComplexMatrix,
    rates: RateSet,
}

impl Liouvillian {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    /// `L(ρ)` as a 5×5 matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::unvectorize(&self.matrix.matvec(&rho.vectorize()), DIM, DIM)
    }
}

pub fn build_liouvillian(rates: &RateSet) -> Result<Liouvillian, ModelError> {
    let h = build_hamiltonian(rates)?;
    let jumps = build_collapse_operators(rates)?;
    let id = ComplexMatrix::identity(DIM);

    // -i (I⊗H − Hᵀ⊗I)
    let coherent = &kron(&id, &h) - &kron(&h.transpose(), &id);
    let mut l = coherent.scale(C64::new(0.0, -1.0));

    for d in &jumps {
        let dd = &d.adjoint() * d;
        let gain = kron(&d.conj(), d);
        let loss = &kron(&id, &dd) + &kron(&dd.transpose(), &id);
        l = &l + &(&gain - &loss.scale_real(0.5));
    }
    Ok(Liouvillian { matrix: l, rates: *rates })
}
