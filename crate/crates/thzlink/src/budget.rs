//! Free-space link budget: path loss, molecular absorption, antenna
//! misalignment, and the resulting end-to-end amplitude gain.
//!
//! The channel is modeled as a single complex gain `α` applied to the
//! transmitted field:
//!
//! ```text
//! α = √(G_Tx·G_Rx) / [ (4π·d·f/c) · e^(κ·d) · e^(r²/w(d)²) ]
//! ```
//!
//! where the three denominator factors are *field* (amplitude) attenuations:
//! spreading loss, exponential molecular absorption with coefficient `κ`
//! (1/m), and Gaussian-beam pointing loss for a lateral offset `r` against
//! the beam radius `w(d) = θ_div·d`. In decibels each contributes
//! `20·log10(·)`, e.g. κ = 0.058 m⁻¹ ↔ 0.50 dB/m.

use crate::error::{Error, Result};
use crate::units::SPEED_OF_LIGHT;
use serde::{Deserialize, Serialize};

/// Geometry and propagation parameters of a point-to-point link.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelParams {
    /// Carrier frequency, Hz.
    pub carrier_frequency_hz: f64,
    /// Link distance, m.
    pub distance_m: f64,
    /// Transmit antenna gain, dBi.
    pub tx_gain_dbi: f64,
    /// Receive antenna gain, dBi.
    pub rx_gain_dbi: f64,
    /// Molecular absorption coefficient κ, 1/m (field convention:
    /// 20·log10(e)·κ ≈ 8.686·κ dB per meter).
    pub absorption_per_m: f64,
    /// Full beam divergence used for the pointing model, rad.
    pub beam_divergence_rad: f64,
    /// Lateral pointing offset at the receiver, m.
    pub pointing_offset_m: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_frequency_hz: 300e9,
            distance_m: 1.0,
            tx_gain_dbi: 40.0,
            rx_gain_dbi: 40.0,
            absorption_per_m: 0.058,
            beam_divergence_rad: 10e-3,
            pointing_offset_m: 2e-3,
        }
    }
}

/// Itemized link budget in dB (losses positive, gains subtracted in `total`).
#[derive(Debug, Clone, Copy)]
pub struct LinkBudget {
    /// Free-space spreading loss, dB.
    pub free_space_db: f64,
    /// Molecular absorption loss, dB.
    pub absorption_db: f64,
    /// Pointing (misalignment) loss, dB.
    pub pointing_db: f64,
    /// Combined antenna gains, dB.
    pub antenna_gain_db: f64,
    /// Net loss: free_space + absorption + pointing − antenna gains, dB.
    pub total_db: f64,
    /// End-to-end amplitude gain α = 10^(−total/20).
    pub alpha: f64,
}

/// Free-space spreading loss 20·log10(4π·d·f/c) in dB.
pub fn free_space_loss_db(distance_m: f64, frequency_hz: f64) -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * distance_m * frequency_hz / SPEED_OF_LIGHT).log10()
}

/// Molecular absorption loss in dB over `distance_m` for field coefficient
/// κ (1/m): 20·log10(e^{κd}) = 8.6859·κ·d.
pub fn absorption_loss_db(absorption_per_m: f64, distance_m: f64) -> f64 {
    20.0 * std::f64::consts::LOG10_E * absorption_per_m * distance_m
}

/// Gaussian-beam radius at distance `d` for divergence θ: w(d) = θ·d.
pub fn beam_radius(divergence_rad: f64, distance_m: f64) -> f64 {
    divergence_rad * distance_m
}

/// Pointing loss in dB for lateral offset `r` against beam radius `w`:
/// 20·log10(e^{r²/w²}).
pub fn pointing_loss_db(offset_m: f64, beam_radius_m: f64) -> f64 {
    20.0 * std::f64::consts::LOG10_E * (offset_m / beam_radius_m).powi(2)
}

impl ChannelParams {
    /// Validate and evaluate the budget.
    pub fn budget(&self) -> Result<LinkBudget> {
        if self.distance_m <= 0.0 {
            return Err(Error::invalid("distance_m", "must be positive", self.distance_m));
        }
        if self.carrier_frequency_hz <= 0.0 {
            return Err(Error::invalid(
                "carrier_frequency_hz",
                "must be positive",
                self.carrier_frequency_hz,
            ));
        }
        if self.absorption_per_m < 0.0 {
            return Err(Error::invalid(
                "absorption_per_m",
                "must be non-negative",
                self.absorption_per_m,
            ));
        }
        if self.beam_divergence_rad <= 0.0 && self.pointing_offset_m != 0.0 {
            return Err(Error::invalid(
                "beam_divergence_rad",
                "must be positive when a pointing offset is set",
                self.beam_divergence_rad,
            ));
        }

        let free_space_db = free_space_loss_db(self.distance_m, self.carrier_frequency_hz);
        let absorption_db = absorption_loss_db(self.absorption_per_m, self.distance_m);
        let pointing_db = if self.pointing_offset_m == 0.0 {
            0.0
        } else {
            pointing_loss_db(
                self.pointing_offset_m,
                beam_radius(self.beam_divergence_rad, self.distance_m),
            )
        };
        let antenna_gain_db = self.tx_gain_dbi + self.rx_gain_dbi;
        let total_db = free_space_db + absorption_db + pointing_db - antenna_gain_db;
        let alpha = 10f64.powf(-total_db / 20.0);
        if !alpha.is_finite() {
            return Err(Error::Numerical("link budget produced a non-finite gain".into()));
        }
        Ok(LinkBudget {
            free_space_db,
            absorption_db,
            pointing_db,
            antenna_gain_db,
            total_db,
            alpha,
        })
    }

    /// Shorthand for `budget()?.alpha`.
    pub fn alpha(&self) -> Result<f64> {
        Ok(self.budget()?.alpha)
    }
}
