//! Optical electron-spin initialization in a negatively charged quantum dot
//! driven by cavity-enhanced two-photon excitation.
//!
//! * [`linalg`]: dense complex kernels (Kronecker product, matrix
//!   exponential, least squares, Hermitian spectra).
//! * [`model`]: the five-level basis, Hamiltonian, collapse operators and
//!   Liouvillian.
//! * [`dynamics`]: steady state, time evolution, fidelity and
//!   initialization time.
//! * [`rabi`]: effective two-photon Rabi rate from cavity and dot
//!   parameters.
//! * [`sweep`]: (Ω, Γ) sweeps, extrema, CSV and SVG output, and the CLI.
//!
//! ```
//! use spin_init::{dynamics, model::RateSet};
//!
//! let fidelity = dynamics::fidelity(&RateSet::new(0.5, 10.0)).unwrap();
//! assert!((fidelity - 0.973).abs() < 0.003);
//! ```

pub mod dynamics;
pub mod linalg;
pub mod model;
pub mod rabi;
pub mod sweep;

pub use dynamics::{fidelity, init_time, InitTimeResult};
pub use model::{Level, RateSet};
