//! Second-order (proportional + integral) carrier phase tracking loop.
//!
//! The loop is parameterized the classical way: detector gain `K_P`,
//! oscillator gain `K_O`, damping ζ and normalized noise bandwidth
//! `B_n·T`. With `θ_n = B_nT/(ζ + 1/(4ζ))` the discrete loop gains are
//!
//! ```text
//! g_prop = 4ζθ_n / ((1 + 2ζθ_n + θ_n²)·K_P·K_O)
//! g_int  = 4θ_n² / ((1 + 2ζθ_n + θ_n²)·K_P·K_O)
//! ```
//!
//! so the effective proportional gain `γ₁ = K_P·K_O·g_prop` depends only on
//! ζ and `B_nT`. The error detector is data-aided:
//! `e = −K_P·Im{z·e^{jφ̂}·d*}` for reference symbol `d`, matching a channel
//! that rotates by `e^{−jθ}`.
//!
//! For a Wiener carrier phase with per-symbol increment variance `q` and a
//! detector measurement variance `σ²_m ≈ 1/(2·SNR)`, the tracking variance
//! is approximately `q/(2γ₁) + γ₁σ²_m/2`; [`PllConfig::balanced`] picks the
//! bandwidth minimizing that sum, clamped to a sane range.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Loop design parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PllConfig {
    /// Phase detector gain K_P.
    pub detector_gain: f64,
    /// Oscillator (NCO) gain K_O.
    pub oscillator_gain: f64,
    /// Damping factor ζ.
    pub damping: f64,
    /// Normalized noise bandwidth B_n·T.
    pub noise_bandwidth: f64,
}

impl Default for PllConfig {
    fn default() -> Self {
        Self {
            detector_gain: 1.0 / 15.0,
            oscillator_gain: 1.0,
            damping: 1.0,
            noise_bandwidth: 0.0045,
        }
    }
}

/// Clamp range for [`PllConfig::balanced`] on the normalized bandwidth.
/// The upper cap sits where widening the loop stops paying off: past ~0.2
/// symbol rates the extra detector-noise jitter outweighs the reduction in
/// tracking lag even at the fastest phase walks the link produces.
const BALANCED_MIN_BANDWIDTH: f64 = 0.0045;
const BALANCED_MAX_BANDWIDTH: f64 = 0.20;

impl PllConfig {
    /// Default loop with a different normalized noise bandwidth.
    pub fn with_noise_bandwidth(noise_bandwidth: f64) -> Self {
        Self {
            noise_bandwidth,
            ..Self::default()
        }
    }

    /// Proportional and integral gains `(g_prop, g_int)`.
    pub fn gains(&self) -> (f64, f64) {
        let zeta = self.damping;
        let theta = self.noise_bandwidth / (zeta + 1.0 / (4.0 * zeta));
        let denom =
            (1.0 + 2.0 * zeta * theta + theta * theta) * self.detector_gain * self.oscillator_gain;
        (4.0 * zeta * theta / denom, 4.0 * theta * theta / denom)
    }

    /// Effective proportional loop gain γ₁ = K_P·K_O·g_prop.
    pub fn effective_gain(&self) -> f64 {
        self.gains().0 * self.detector_gain * self.oscillator_gain
    }

    /// Pick the noise bandwidth balancing phase-noise lag against detector
    /// noise: γ* = √(q/σ²_m) for per-symbol phase increment variance `q` and
    /// measurement variance `σ²_m`, clamped to a practical range. With
    /// `q = 0` this returns the default loop.
    pub fn balanced(increment_variance: f64, measurement_variance: f64) -> Self {
        if increment_variance <= 0.0 || measurement_variance <= 0.0 {
            return Self::default();
        }
        let gamma = (increment_variance / measurement_variance).sqrt();
        let zeta = 1.0f64;
        // Invert γ = 4ζθ/(1 + 2ζθ + θ²) for θ (smaller root).
        let gamma = gamma.clamp(1e-6, 1.9);
        let b = 2.0 * zeta * gamma - 4.0 * zeta;
        let disc = (b * b - 4.0 * gamma * gamma).max(0.0);
        let theta = (-b - disc.sqrt()) / (2.0 * gamma);
        let bn = theta * (zeta + 1.0 / (4.0 * zeta));
        Self::with_noise_bandwidth(bn.clamp(BALANCED_MIN_BANDWIDTH, BALANCED_MAX_BANDWIDTH))
    }
}

/// Corrected symbols and the tracked phase trajectory.
#[derive(Debug, Clone)]
pub struct TrackResult {
    /// Input symbols after phase correction.
    pub corrected: Vec<Complex64>,
    /// Loop phase estimate at each symbol (before that symbol's update).
    pub phase: Vec<f64>,
}

/// Running loop state.
#[derive(Debug, Clone)]
pub struct Pll {
    detector_gain: f64,
    oscillator_gain: f64,
    g_prop: f64,
    g_int: f64,
    phase: f64,
    integrator: f64,
}

impl Pll {
    /// Create a loop at zero initial phase.
    pub fn new(config: &PllConfig) -> Self {
        let (g_prop, g_int) = config.gains();
        Self {
            detector_gain: config.detector_gain,
            oscillator_gain: config.oscillator_gain,
            g_prop,
            g_int,
            phase: 0.0,
            integrator: 0.0,
        }
    }

    /// Current phase estimate φ̂.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Correct one symbol with the current estimate, then update the loop
    /// using `reference` as the data decision. Returns the corrected symbol.
    pub fn step(&mut self, z: Complex64, reference: Complex64) -> Complex64 {
        let corrected = z * Complex64::from_polar(1.0, self.phase);
        let err = -self.detector_gain * (corrected * reference.conj()).im;
        self.integrator += self.g_int * err;
        self.phase += self.oscillator_gain * (self.g_prop * err + self.integrator);
        corrected
    }

    /// Track a block of symbols against reference decisions.
    pub fn track(&mut self, symbols: &[Complex64], references: &[Complex64]) -> Result<TrackResult> {
        if symbols.len() != references.len() {
            return Err(Error::LengthMismatch(format!(
                "symbols ({}) vs references ({})",
                symbols.len(),
                references.len()
            )));
        }
        let mut corrected = Vec::with_capacity(symbols.len());
        let mut phase = Vec::with_capacity(symbols.len());
        for (&z, &d) in symbols.iter().zip(references) {
            phase.push(self.phase);
            corrected.push(self.step(z, d));
        }
        Ok(TrackResult { corrected, phase })
    }
}
