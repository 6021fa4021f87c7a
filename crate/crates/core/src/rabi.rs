//! Effective two-photon Rabi rate of a dot inside a cavity.
//!
//! Second-order perturbation theory with two intermediate states:
//!
//! ```text
//! Ω = η P Q φ / (4 ħ² ω n² ε₀ V) · Σₖ |d_gk| |d_ke| ψ_gk ψ_ke / Δ_gk
//! ```
//!
//! * path k₁ goes through the conduction-band s orbital:
//!   `|d_gk| = e r_cv`, `|d_ke| = e l_e`, with Δ from the s–s transition
//!   wavelength against the laser;
//! * path k₂ goes through the valence-band p orbital:
//!   `|d_gk| = e l_h`, `|d_ke| = e r_cv`, with Δ = ω_h − ω.
//!
//! Detunings keep their sign, so the two paths may interfere. With the
//! laser far below both intermediate resonances here, Δ₁ > 0 and Δ₂ < 0 and
//! the paths partially cancel.
//!
//! All inputs are SI. The dot defaults are representative InAs/GaAs numbers
//! and can be overridden field by field:
//!
//! | parameter | default |
//! |-----------|---------|
//! | r_cv | 0.6 nm |
//! | m_e* | 0.07 m₀ |
//! | m_h* | 0.34 m₀ |
//! | ħω_e | 50 meV |
//! | ħω_h | 25 meV |
//! | s–s wavelength | 930 nm |
//! | laser wavelength | 1800 nm |
//!
//! The cavity reference set is η = 2 %, P = 50 μW, Q = 5000, n = 3.4,
//! λ_c = 1800 nm and V = (λ_c/n)³.

use std::f64::consts::TAU;

use thiserror::Error;

/// Physical constants, CODATA 2018.
pub mod constants {
    /// Reduced Planck constant, J·s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Elementary charge, C.
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    /// Speed of light in vacuum, m/s.
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    /// Vacuum permittivity, F/m.
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
    /// Electron rest mass, kg.
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    /// One electronvolt in joules.
    pub const ELECTRON_VOLT: f64 = ELEMENTARY_CHARGE;
}

use constants::*;

/// Value the original cavity-dot estimate quotes for Ω/2π, GHz. Kept for
/// side-by-side reporting only.
pub const QUOTED_REFERENCE_OMEGA_GHZ: f64 = 4.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RabiError {
    #[error("parameter `{name}` out of range: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("intermediate state of path {path} is resonant with the laser")]
    ResonantIntermediate { path: usize },
}

pub type Result<T> = std::result::Result<T, RabiError>;

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(RabiError::InvalidParameter { name, value })
    }
}

/// Cavity and excitation parameters (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// In-coupling efficiency, 0 < η ≤ 1.
    pub eta: f64,
    /// Excitation power outside the cavity, W.
    pub power: f64,
    pub q: f64,
    /// Refractive index of the cavity material.
    pub n: f64,
    /// Mode volume, m³.
    pub mode_volume: f64,
    /// Resonance wavelength of the two-photon mode, m.
    pub lambda_cavity: f64,
}

impl CavityParams {
    /// η = 2 %, P = 50 μW, Q = 5000, n = 3.4, λ_c = 1800 nm, V = (λ_c/n)³.
    pub fn reference() -> Self {
        let (n, lambda_cavity) = (3.4, 1800e-9);
        Self { eta: 0.02, power: 50e-6, q: 5000.0, n, mode_volume: cubic_mode_volume(lambda_cavity, n), lambda_cavity }
    }

    pub fn omega_cavity(&self) -> f64 {
        angular_frequency(self.lambda_cavity)
    }

    pub fn validate(&self) -> Result<()> {
        positive("eta", self.eta)?;
        if self.eta > 1.0 {
            return Err(RabiError::InvalidParameter { name: "eta", value: self.eta });
        }
        // zero power is allowed and simply gives Ω = 0
        if !(self.power.is_finite() && self.power >= 0.0) {
            return Err(RabiError::InvalidParameter { name: "power", value: self.power });
        }
        positive("q", self.q)?;
        positive("n", self.n)?;
        positive("mode_volume", self.mode_volume)?;
        positive("lambda_cavity", self.lambda_cavity)
    }
}

impl Default for CavityParams {
    fn default() -> Self {
        Self::reference()
    }
}

/// `(λ/n)³`.
pub fn cubic_mode_volume(lambda: f64, n: f64) -> f64 {
    (lambda / n).powi(3)
}

/// Dot parameters (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotParams {
    /// Interband dipole length, m.
    pub r_cv: f64,
    pub m_e_eff: f64,
    pub m_h_eff: f64,
    /// Conduction-band confinement quantum, J.
    pub hbar_omega_e: f64,
    /// Valence-band confinement quantum, J.
    pub hbar_omega_h: f64,
    /// s–s interband transition wavelength, m.
    pub lambda_ss: f64,
    /// Two-photon laser wavelength, m.
    pub lambda_laser: f64,
}

impl Default for DotParams {
    fn default() -> Self {
        Self {
            r_cv: 0.6e-9,
            m_e_eff: 0.07 * ELECTRON_MASS,
            m_h_eff: 0.34 * ELECTRON_MASS,
            hbar_omega_e: 50e-3 * ELECTRON_VOLT,
            hbar_omega_h: 25e-3 * ELECTRON_VOLT,
            lambda_ss: 930e-9,
            lambda_laser: 1800e-9,
        }
    }
}

impl DotParams {
    pub fn omega_laser(&self) -> f64 {
        angular_frequency(self.lambda_laser)
    }

    pub fn validate(&self) -> Result<()> {
        positive("r_cv", self.r_cv)?;
        positive("m_e_eff", self.m_e_eff)?;
        positive("m_h_eff", self.m_h_eff)?;
        positive("hbar_omega_e", self.hbar_omega_e)?;
        positive("hbar_omega_h", self.hbar_omega_h)?;
        positive("lambda_ss", self.lambda_ss)?;
        positive("lambda_laser", self.lambda_laser)
    }
}

/// Field-amplitude ratio at the dot and dipole/polarization alignment for
/// one transition leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapFactors {
    field_ratio: f64,
    alignment: f64,
}

impl OverlapFactors {
    /// Dot at the field maximum with aligned dipole.
    pub const IDEAL: Self = Self { field_ratio: 1.0, alignment: 1.0 };

    pub fn new(field_ratio: f64, alignment: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&field_ratio) {
            return Err(RabiError::InvalidParameter { name: "field_ratio", value: field_ratio });
        }
        if !(-1.0..=1.0).contains(&alignment) {
            return Err(RabiError::InvalidParameter { name: "alignment", value: alignment });
        }
        Ok(Self { field_ratio, alignment })
    }

    pub fn field_ratio(&self) -> f64 {
        self.field_ratio
    }

    pub fn alignment(&self) -> f64 {
        self.alignment
    }
}

/// Overlaps for the two legs (g→k, k→e) of one intermediate path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOverlaps {
    pub ground_leg: OverlapFactors,
    pub excited_leg: OverlapFactors,
}

impl PathOverlaps {
    pub const IDEAL: Self = Self { ground_leg: OverlapFactors::IDEAL, excited_leg: OverlapFactors::IDEAL };
}

/// `2πc/λ`.
pub fn angular_frequency(lambda: f64) -> f64 {
    TAU * SPEED_OF_LIGHT / lambda
}

/// Lorentzian laser/cavity mismatch `(ω/ω_c) / (1 + 4Q²(ω/ω_c − 1)²)`.
pub fn spectral_mismatch(omega: f64, omega_c: f64, q: f64) -> f64 {
    let x = omega / omega_c;
    x / (1.0 + 4.0 * q * q * (x - 1.0).powi(2))
}

pub fn spatial_mismatch(overlap: &OverlapFactors) -> f64 {
    overlap.field_ratio * overlap.alignment
}

/// Ground-state extent `ħ / √(2 m ħω)` of a harmonic confinement.
pub fn oscillator_length(m_eff: f64, hbar_omega: f64) -> f64 {
    HBAR / (2.0 * m_eff * hbar_omega).sqrt()
}

/// `2πc (1/λ_transition − 1/λ_laser)` in rad/s; negative when the laser
/// photon exceeds the transition energy.
pub fn intermediate_detuning(lambda_transition: f64, lambda_laser: f64) -> f64 {
    TAU * SPEED_OF_LIGHT * (1.0 / lambda_transition - 1.0 / lambda_laser)
}

/// Detuning of the valence s→p excitation from the laser, `ω_h − ω`, rad/s.
pub fn valence_intraband_detuning(hbar_omega_h: f64, lambda_laser: f64) -> f64 {
    hbar_omega_h / HBAR - angular_frequency(lambda_laser)
}

/// One intermediate-state term of the sum, before the common prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathTerm {
    /// |d_gk|, C·m.
    pub dipole_ground: f64,
    /// |d_ke|, C·m.
    pub dipole_excited: f64,
    /// Δ_gk, rad/s.
    pub detuning: f64,
    /// ψ_gk ψ_ke.
    pub overlap: f64,
}

impl PathTerm {
    pub fn contribution(&self) -> f64 {
        self.dipole_ground * self.dipole_excited * self.overlap / self.detuning
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiEvaluation {
    /// Ω/2π, GHz.
    pub omega_ghz: f64,
    /// φ at the laser frequency.
    pub spectral_factor: f64,
    /// `η P Q φ / (4 ħ² ω n² ε₀ V)`.
    pub prefactor: f64,
    pub paths: [PathTerm; 2],
}

/// Ω/2π in GHz for the two-path model.
pub fn two_photon_rabi(cavity: &CavityParams, dot: &DotParams, overlaps: &[PathOverlaps; 2]) -> Result<f64> {
    Ok(evaluate_two_photon_rabi(cavity, dot, overlaps)?.omega_ghz)
}

/// [`two_photon_rabi`] with its intermediate quantities.
pub fn evaluate_two_photon_rabi(
    cavity: &CavityParams,
    dot: &DotParams,
    overlaps: &[PathOverlaps; 2],
) -> Result<RabiEvaluation> {
    cavity.validate()?;
    dot.validate()?;

    let omega = dot.omega_laser();
    let spectral_factor = spectral_mismatch(omega, cavity.omega_cavity(), cavity.q);
    let prefactor = cavity.eta * cavity.power * cavity.q * spectral_factor
        / (4.0 * HBAR * HBAR * omega * cavity.n * cavity.n * VACUUM_PERMITTIVITY * cavity.mode_volume);

    let l_e = oscillator_length(dot.m_e_eff, dot.hbar_omega_e);
    let l_h = oscillator_length(dot.m_h_eff, dot.hbar_omega_h);
    let interband = ELEMENTARY_CHARGE * dot.r_cv;
    let leg_overlap = |p: &PathOverlaps| spatial_mismatch(&p.ground_leg) * spatial_mismatch(&p.excited_leg);

    let paths = [
        PathTerm {
            dipole_ground: interband,
            dipole_excited: ELEMENTARY_CHARGE * l_e,
            detuning: intermediate_detuning(dot.lambda_ss, dot.lambda_laser),
            overlap: leg_overlap(&overlaps[0]),
        },
        PathTerm {
            dipole_ground: ELEMENTARY_CHARGE * l_h,
            dipole_excited: interband,
            detuning: valence_intraband_detuning(dot.hbar_omega_h, dot.lambda_laser),
            overlap: leg_overlap(&overlaps[1]),
        },
    ];
    for (i, p) in paths.iter().enumerate() {
        if p.detuning == 0.0 {
            return Err(RabiError::ResonantIntermediate { path: i + 1 });
        }
    }

    let sum: f64 = paths.iter().map(PathTerm::contribution).sum();
    let omega_rad_per_s = prefactor * sum;
    Ok(RabiEvaluation { omega_ghz: omega_rad_per_s / TAU / 1e9, spectral_factor, prefactor, paths })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_mismatch_values() {
        let wc = 1.0e15;
        assert_eq!(spectral_mismatch(wc, wc, 5000.0), 1.0);
        let q = 5000.0;
        let half = spectral_mismatch(wc * (1.0 + 1.0 / (2.0 * q)), wc, q);
        assert!((half - 0.50005).abs() < 1e-9, "{half}");
        let off = spectral_mismatch(1.01 * wc, wc, q);
        // 1.01 / (1 + 4·25e6·1e-4) = 1.01 / 10001
        assert!((off - 1.01 / 10001.0).abs() < 1e-15);
        assert!((off - 1.0e-4).abs() < 0.05e-4);
    }

    #[test]
    fn spatial_mismatch_values() {
        assert_eq!(spatial_mismatch(&OverlapFactors::new(1.0, 1.0).unwrap()), 1.0);
        assert_eq!(spatial_mismatch(&OverlapFactors::new(1.0, 0.0).unwrap()), 0.0);
        assert_eq!(spatial_mismatch(&OverlapFactors::new(0.5, 1.0).unwrap()), 0.5);
        assert!(OverlapFactors::new(1.2, 1.0).is_err());
        assert!(OverlapFactors::new(0.5, -1.5).is_err());
    }

    #[test]
    fn oscillator_lengths() {
        let le = oscillator_length(0.07 * ELECTRON_MASS, 50e-3 * ELECTRON_VOLT);
        assert!((le * 1e9 - 3.30).abs() < 0.005, "{le}");
        let lh = oscillator_length(0.34 * ELECTRON_MASS, 25e-3 * ELECTRON_VOLT);
        assert!((lh * 1e9 - 2.12).abs() < 0.005, "{lh}");
        let quad = oscillator_length(4.0 * 0.07 * ELECTRON_MASS, 50e-3 * ELECTRON_VOLT);
        assert!((quad - le / 2.0).abs() < 1e-12 * le);
    }

    #[test]
    fn detuning_values() {
        let d = intermediate_detuning(930e-9, 1800e-9);
        assert!((d / TAU / 1.559e14 - 1.0).abs() < 1e-3, "{}", d / TAU);
        let ev = HBAR * d / ELECTRON_VOLT;
        assert!((ev - 0.645).abs() < 1e-3, "{ev}");
        assert_eq!(intermediate_detuning(930e-9, 930e-9), 0.0);
        assert_eq!(intermediate_detuning(1800e-9, 930e-9), -d);
    }

    #[test]
    fn zero_power_gives_zero_rate() {
        let cavity = CavityParams { power: 0.0, ..CavityParams::reference() };
        let omega = two_photon_rabi(&cavity, &DotParams::default(), &[PathOverlaps::IDEAL; 2]).unwrap();
        assert_eq!(omega, 0.0);
    }

    #[test]
    fn resonant_intermediate_is_rejected() {
        let dot = DotParams { lambda_ss: 1800e-9, ..DotParams::default() };
        assert_eq!(
            two_photon_rabi(&CavityParams::reference(), &dot, &[PathOverlaps::IDEAL; 2]),
            Err(RabiError::ResonantIntermediate { path: 1 })
        );
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let cavity = CavityParams { eta: 1.5, ..CavityParams::reference() };
        assert!(matches!(
            two_photon_rabi(&cavity, &DotParams::default(), &[PathOverlaps::IDEAL; 2]),
            Err(RabiError::InvalidParameter { name: "eta", .. })
        ));
        let dot = DotParams { m_h_eff: -1.0, ..DotParams::default() };
        assert!(two_photon_rabi(&CavityParams::reference(), &dot, &[PathOverlaps::IDEAL; 2]).is_err());
    }

    #[test]
    fn reference_paths_have_opposite_sign() {
        let eval = evaluate_two_photon_rabi(&CavityParams::reference(), &DotParams::default(), &[PathOverlaps::IDEAL; 2])
            .unwrap();
        assert_eq!(eval.spectral_factor, 1.0);
        assert!(eval.paths[0].detuning > 0.0 && eval.paths[1].detuning < 0.0);
    }
}
