//! IQ modulator/demodulator imbalance.
//!
//! An amplitude mismatch `A` (linear) and phase error `θ` between the I and
//! Q rails act on a complex baseband signal as
//!
//! ```text
//! y = g₁·x + g₂·x*,   g₁ = (1 + A·e^{−jθ})/2,   g₂ = (1 − A·e^{jθ})/2,
//! ```
//!
//! superimposing a conjugate image attenuated by the image rejection ratio
//! `|g₂|²/|g₁|²`.

use num_complex::Complex64;

/// Amplitude/phase mismatch between the I and Q rails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IqImbalance {
    /// Amplitude mismatch in dB (20·log₁₀ A).
    pub amplitude_db: f64,
    /// Phase error in degrees.
    pub phase_deg: f64,
}

impl Default for IqImbalance {
    fn default() -> Self {
        Self {
            amplitude_db: 0.0,
            phase_deg: 0.0,
        }
    }
}

impl IqImbalance {
    /// A perfectly balanced modulator.
    pub fn ideal() -> Self {
        Self::default()
    }

    /// True when both mismatches are zero.
    pub fn is_ideal(&self) -> bool {
        self.amplitude_db == 0.0 && self.phase_deg == 0.0
    }

    fn amplitude(&self) -> f64 {
        10f64.powf(self.amplitude_db / 20.0)
    }

    fn phase_rad(&self) -> f64 {
        self.phase_deg.to_radians()
    }

    /// Direct-path coefficient g₁ = (1 + A·e^{−jθ})/2.
    pub fn g1(&self) -> Complex64 {
        (Complex64::new(1.0, 0.0) + self.amplitude() * Complex64::from_polar(1.0, -self.phase_rad()))
            / 2.0
    }

    /// Image-path coefficient g₂ = (1 − A·e^{jθ})/2.
    pub fn g2(&self) -> Complex64 {
        (Complex64::new(1.0, 0.0) - self.amplitude() * Complex64::from_polar(1.0, self.phase_rad()))
            / 2.0
    }

    /// Apply the imbalance to one sample: `g₁·x + g₂·x*`.
    pub fn apply(&self, x: Complex64) -> Complex64 {
        self.g1() * x + self.g2() * x.conj()
    }

    /// Apply the imbalance in place to a waveform.
    pub fn apply_to(&self, wave: &mut [Complex64]) {
        if self.is_ideal() {
            return;
        }
        let g1 = self.g1();
        let g2 = self.g2();
        for w in wave.iter_mut() {
            *w = g1 * *w + g2 * w.conj();
        }
    }

    /// Image rejection ratio 10·log₁₀(|g₂|²/|g₁|²), dB (negative for any
    /// realistic imbalance).
    pub fn image_rejection_db(&self) -> f64 {
        10.0 * (self.g2().norm_sqr() / self.g1().norm_sqr()).log10()
    }
}
