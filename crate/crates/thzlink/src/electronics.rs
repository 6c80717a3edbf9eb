//! All-electronic transmitter / receiver model.
//!
//! The carrier comes from a multiplied microwave oscillator whose phase-noise
//! pedestal, integrated over the oscillation bandwidth, leaves a residual
//! multiplicative carrier noise of power σ²_c on the transmitted signal. The
//! receiver mixes with its own multiplied LO (power `P_LO`, residual noise
//! σ²_LO); thermal noise enters at both ends.
//!
//! For a unit-power symbol `x` the mixer output expands as the physical
//! product of the two noisy tones:
//!
//! ```text
//! y = α·(√P_s·x·(1 + c) + n_th,Tx)·(√P_LO + n_LO) + n_th,Rx
//!   = α√(P_s P_LO)·x + noise,
//! c ~ CN(0, σ²_c),  n_LO ~ CN(0, σ²_LO)
//! ```
//!
//! giving the average demodulator noise power
//!
//! ```text
//! σ²_th,Rx + α²[ P_LO·σ²_th,Tx + σ²_LO·σ²_th,Tx
//!              + P_s·(P_LO·σ²_c + σ²_LO + σ²_c·σ²_LO) ]
//! ```
//!
//! whose last group scales with the instantaneous symbol power
//! (signal-dependent noise).

use crate::error::{Error, Result};
use crate::noise;
use crate::rng::complex_gaussian;
use crate::units::{dbm_from_watt, watt_from_dbm};
use num_complex::Complex64;
use rand::Rng;

/// Physical state of an electronic link at one operating point.
#[derive(Debug, Clone)]
pub struct ElectronicsLink {
    parts: ElectronicsParts,
}

/// Directly specified powers of an electronic link, in watts.
#[derive(Debug, Clone)]
pub struct ElectronicsParts {
    /// Transmitted signal power P_s.
    pub p_s: f64,
    /// Receiver LO power P_LO.
    pub p_lo: f64,
    /// Multiplicative transmitter carrier-noise power σ²_c (relative).
    pub sigma2_c: f64,
    /// Multiplicative receiver LO-noise power σ²_LO (relative to a unit tone,
    /// i.e. the additive LO noise power is P_LO-independent in this
    /// normalization and beats against the signal as P_s·σ²_LO).
    pub sigma2_lo: f64,
    /// Transmitter thermal noise power.
    pub sigma2_th_tx: f64,
    /// Receiver thermal noise power.
    pub sigma2_th_rx: f64,
    /// End-to-end channel amplitude gain.
    pub alpha: f64,
}

/// Builder assembling an [`ElectronicsLink`] from system-level parameters.
#[derive(Debug, Clone)]
pub struct ElectronicsLinkBuilder {
    signal_power_dbm: f64,
    lo_power_dbm: f64,
    tx_floor_dbc_hz: f64,
    rx_floor_dbc_hz: f64,
    oscillator_bandwidth_hz: f64,
    sideband_factor: f64,
    electrical_bandwidth_hz: f64,
    temperature_k: f64,
    noise_figure_db: f64,
    tx_amplifier_gain_db: f64,
    rx_amplifier_gain_db: f64,
    alpha: f64,
}

impl Default for ElectronicsLinkBuilder {
    fn default() -> Self {
        Self {
            signal_power_dbm: 6.9,
            lo_power_dbm: 20.0,
            tx_floor_dbc_hz: -135.4,
            rx_floor_dbc_hz: -143.0,
            oscillator_bandwidth_hz: 6e9,
            sideband_factor: 2.0,
            electrical_bandwidth_hz: 40e9,
            temperature_k: 290.0,
            noise_figure_db: 5.0,
            tx_amplifier_gain_db: 5.0,
            rx_amplifier_gain_db: 5.0,
            alpha: 1.0,
        }
    }
}

impl ElectronicsLinkBuilder {
    /// Transmitted signal power, dBm.
    pub fn signal_power_dbm(mut self, dbm: f64) -> Self {
        self.signal_power_dbm = dbm;
        self
    }

    /// Receiver LO power, dBm.
    pub fn lo_power_dbm(mut self, dbm: f64) -> Self {
        self.lo_power_dbm = dbm;
        self
    }

    /// Transmitter oscillator phase-noise pedestal at the carrier, dBc/Hz.
    pub fn tx_floor_dbc_hz(mut self, dbc_hz: f64) -> Self {
        self.tx_floor_dbc_hz = dbc_hz;
        self
    }

    /// Receiver LO phase-noise pedestal at the carrier, dBc/Hz.
    pub fn rx_floor_dbc_hz(mut self, dbc_hz: f64) -> Self {
        self.rx_floor_dbc_hz = dbc_hz;
        self
    }

    /// Bandwidth over which the oscillator pedestal integrates, Hz
    /// (typically a few percent of the carrier frequency).
    pub fn oscillator_bandwidth_hz(mut self, hz: f64) -> Self {
        self.oscillator_bandwidth_hz = hz;
        self
    }

    /// Number of pedestal sidebands integrated (2 = both sides).
    pub fn sideband_factor(mut self, factor: f64) -> Self {
        self.sideband_factor = factor;
        self
    }

    /// Electrical (demodulation) bandwidth, Hz.
    pub fn electrical_bandwidth_hz(mut self, hz: f64) -> Self {
        self.electrical_bandwidth_hz = hz;
        self
    }

    /// Receiver temperature, K.
    pub fn temperature_k(mut self, k: f64) -> Self {
        self.temperature_k = k;
        self
    }

    /// Noise figure applied to both thermal contributions, dB.
    pub fn noise_figure_db(mut self, db: f64) -> Self {
        self.noise_figure_db = db;
        self
    }

    /// Transmitter-side amplifier gain entering its thermal noise, dB.
    pub fn tx_amplifier_gain_db(mut self, db: f64) -> Self {
        self.tx_amplifier_gain_db = db;
        self
    }

    /// Receiver-side amplifier gain entering its thermal noise, dB.
    pub fn rx_amplifier_gain_db(mut self, db: f64) -> Self {
        self.rx_amplifier_gain_db = db;
        self
    }

    /// End-to-end channel amplitude gain α.
    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Validate and build the link.
    pub fn build(self) -> Result<ElectronicsLink> {
        if self.oscillator_bandwidth_hz <= 0.0 || self.electrical_bandwidth_hz <= 0.0 {
            return Err(Error::invalid(
                "bandwidth",
                "oscillator and electrical bandwidths must be positive",
                format!("{} / {}", self.oscillator_bandwidth_hz, self.electrical_bandwidth_hz),
            ));
        }
        if self.alpha < 0.0 {
            return Err(Error::invalid("alpha", "must be non-negative", self.alpha));
        }
        let sigma2_c = noise::oscillator_floor_power(
            self.tx_floor_dbc_hz,
            self.oscillator_bandwidth_hz,
            self.sideband_factor,
        );
        let sigma2_lo = noise::oscillator_floor_power(
            self.rx_floor_dbc_hz,
            self.oscillator_bandwidth_hz,
            self.sideband_factor,
        );
        let sigma2_th_tx = noise::thermal_power(
            self.temperature_k,
            self.electrical_bandwidth_hz,
            self.noise_figure_db,
            self.tx_amplifier_gain_db,
        );
        let sigma2_th_rx = noise::thermal_power(
            self.temperature_k,
            self.electrical_bandwidth_hz,
            self.noise_figure_db,
            self.rx_amplifier_gain_db,
        );
        ElectronicsLink::from_parts(ElectronicsParts {
            p_s: watt_from_dbm(self.signal_power_dbm),
            p_lo: watt_from_dbm(self.lo_power_dbm),
            sigma2_c,
            sigma2_lo,
            sigma2_th_tx,
            sigma2_th_rx,
            alpha: self.alpha,
        })
    }
}

/// Demodulator noise decomposition for the electronic link, in watts at the
/// demodulator plane. `signal_independent + signal_dependent == total`.
#[derive(Debug, Clone, Copy)]
pub struct ElectronicsNoiseBreakdown {
    /// σ²_th,Rx.
    pub thermal_rx: f64,
    /// α²·P_LO·σ²_th,Tx — transmitter thermal noise mixed by the LO tone.
    pub tx_thermal_via_lo: f64,
    /// α²·σ²_LO·σ²_th,Tx — transmitter thermal noise mixed by the LO noise.
    pub tx_thermal_via_lo_noise: f64,
    /// α²·P_s·P_LO·σ²_c — carrier noise on the signal (signal-dependent).
    pub carrier_beat: f64,
    /// α²·P_s·σ²_LO — LO noise beating the signal (signal-dependent).
    pub lo_beat: f64,
    /// α²·P_s·σ²_c·σ²_LO — carrier-noise × LO-noise product (signal-dependent).
    pub carrier_lo_cross: f64,
    /// Sum of terms independent of the symbol power.
    pub signal_independent: f64,
    /// Sum of terms scaling with the symbol power.
    pub signal_dependent: f64,
    /// Total demodulator noise power.
    pub total: f64,
}

impl ElectronicsNoiseBreakdown {
    /// Fraction of the total noise that is signal-dependent.
    pub fn sdn_fraction(&self) -> f64 {
        self.signal_dependent / self.total
    }
}

impl ElectronicsLink {
    /// Start building a link from system-level parameters.
    pub fn builder() -> ElectronicsLinkBuilder {
        ElectronicsLinkBuilder::default()
    }

    /// Build a link directly from powers.
    pub fn from_parts(parts: ElectronicsParts) -> Result<Self> {
        for (name, v) in [
            ("p_s", parts.p_s),
            ("p_lo", parts.p_lo),
            ("sigma2_c", parts.sigma2_c),
            ("sigma2_lo", parts.sigma2_lo),
            ("sigma2_th_tx", parts.sigma2_th_tx),
            ("sigma2_th_rx", parts.sigma2_th_rx),
            ("alpha", parts.alpha),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::invalid(
                    "electronics",
                    "powers must be finite and non-negative",
                    format!("{name} = {v}"),
                ));
            }
        }
        Ok(Self { parts })
    }

    /// The underlying powers.
    pub fn parts(&self) -> &ElectronicsParts {
        &self.parts
    }

    /// Channel amplitude gain α.
    pub fn alpha(&self) -> f64 {
        self.parts.alpha
    }

    /// Replace the channel gain, keeping everything else.
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::invalid("alpha", "must be finite and non-negative", alpha));
        }
        self.parts.alpha = alpha;
        Ok(self)
    }

    /// Demodulated signal amplitude A = α√(P_s·P_LO) for a unit-power symbol.
    pub fn signal_amplitude(&self) -> f64 {
        self.parts.alpha * (self.parts.p_s * self.parts.p_lo).sqrt()
    }

    /// Received (post-mixer) signal power in dBm: 10log₁₀(α²P_sP_LO/1mW).
    pub fn received_power_dbm(&self) -> f64 {
        dbm_from_watt(self.signal_amplitude().powi(2))
    }

    /// Set α so the received power equals `p_rx_dbm`.
    pub fn with_received_power_dbm(self, p_rx_dbm: f64) -> Result<Self> {
        let g = (self.parts.p_s * self.parts.p_lo).sqrt();
        if g <= 0.0 {
            return Err(Error::invalid(
                "received_power",
                "signal and LO powers must be positive to target a received power",
                p_rx_dbm,
            ));
        }
        let alpha = watt_from_dbm(p_rx_dbm).sqrt() / g;
        self.with_alpha(alpha)
    }

    /// Transmitter output SNR: P_s / (P_s·σ²_c + σ²_th,Tx).
    ///
    /// Thermal-limited (rising) at low signal power, carrier-noise-limited
    /// (plateau at 1/σ²_c) at high signal power.
    pub fn snr_tx(&self) -> f64 {
        let p = &self.parts;
        let den = p.p_s * p.sigma2_c + p.sigma2_th_tx;
        if den == 0.0 {
            return f64::INFINITY;
        }
        p.p_s / den
    }

    /// [`Self::snr_tx`] in dB.
    pub fn snr_tx_db(&self) -> f64 {
        10.0 * self.snr_tx().log10()
    }

    /// Itemized demodulator noise including the channel gain.
    pub fn noise_breakdown(&self) -> ElectronicsNoiseBreakdown {
        let p = &self.parts;
        let a2 = p.alpha * p.alpha;
        let tx_thermal_via_lo = a2 * p.p_lo * p.sigma2_th_tx;
        let tx_thermal_via_lo_noise = a2 * p.sigma2_lo * p.sigma2_th_tx;
        let carrier_beat = a2 * p.p_s * p.p_lo * p.sigma2_c;
        let lo_beat = a2 * p.p_s * p.sigma2_lo;
        let carrier_lo_cross = a2 * p.p_s * p.sigma2_c * p.sigma2_lo;
        let signal_independent = p.sigma2_th_rx + tx_thermal_via_lo + tx_thermal_via_lo_noise;
        let signal_dependent = carrier_beat + lo_beat + carrier_lo_cross;
        ElectronicsNoiseBreakdown {
            thermal_rx: p.sigma2_th_rx,
            tx_thermal_via_lo,
            tx_thermal_via_lo_noise,
            carrier_beat,
            lo_beat,
            carrier_lo_cross,
            signal_independent,
            signal_dependent,
            total: signal_independent + signal_dependent,
        }
    }

    /// Demodulator noise power conditioned on an instantaneous symbol power.
    pub fn demod_noise_power_conditional(&self, symbol_power: f64) -> f64 {
        let b = self.noise_breakdown();
        b.signal_independent + symbol_power * b.signal_dependent
    }

    /// Receiver (demodulator) SNR: α²P_sP_LO over the total noise power.
    pub fn snr_rx(&self) -> f64 {
        let b = self.noise_breakdown();
        if b.total == 0.0 {
            return f64::INFINITY;
        }
        self.signal_amplitude().powi(2) / b.total
    }

    /// [`Self::snr_rx`] in dB.
    pub fn snr_rx_db(&self) -> f64 {
        10.0 * self.snr_rx().log10()
    }

    /// Draw the total demodulator noise for one symbol `x` (unit mean power)
    /// as the sum of four independently drawn terms:
    ///
    /// ```text
    /// n₁ ~ CN(0, α²P_LOσ²_th,Tx + σ²_th,Rx)
    /// n₂ = CN(0, σ²_LO) · CN(0, α²σ²_th,Tx)
    /// n₃ = α√P_s·x · CN(0, P_LOσ²_c + σ²_LO)
    /// n₄ = α√P_s·x · CN(0, σ²_c) · CN(0, σ²_LO)
    /// ```
    ///
    /// The product terms n₂ and n₄ are literal products of independent
    /// complex Gaussians (heavier-tailed than Gaussian, retained for
    /// fidelity even though they are small at typical operating points).
    pub fn sample_demod_noise<R: Rng + ?Sized>(&self, x: Complex64, rng: &mut R) -> Complex64 {
        let p = &self.parts;
        let a2 = p.alpha * p.alpha;
        let n1 = complex_gaussian(rng, a2 * p.p_lo * p.sigma2_th_tx + p.sigma2_th_rx);
        let n2 = complex_gaussian(rng, p.sigma2_lo) * complex_gaussian(rng, a2 * p.sigma2_th_tx);
        let scaled = p.alpha * p.p_s.sqrt() * x;
        let n3 = scaled * complex_gaussian(rng, p.p_lo * p.sigma2_c + p.sigma2_lo);
        let n4 = scaled * complex_gaussian(rng, p.sigma2_c) * complex_gaussian(rng, p.sigma2_lo);
        n1 + n2 + n3 + n4
    }

    /// End-to-end receive operation at symbol (or sample) granularity.
    ///
    /// Each input `x[n]` is rotated by the carrier offset `cfo_hz` (accrued
    /// at `sample_rate_hz`, starting from sample index zero) and by the
    /// per-sample phase trace `phase[n]`, scaled by the link amplitude
    /// [`Self::signal_amplitude`], and perturbed with one conditional noise
    /// draw:
    ///
    /// `y[n] = A·x[n]·e^{−j(2π·Δf·n/fs + φ[n])} + ñ(x̃[n])`.
    ///
    /// `phase` must match `x` in length. The noise draw is conditioned on the
    /// rotated sample, so its signal-dependent part follows the instantaneous
    /// envelope.
    pub fn receive<R: Rng + ?Sized>(
        &self,
        x: &[Complex64],
        cfo_hz: f64,
        sample_rate_hz: f64,
        phase: &[f64],
        rng: &mut R,
    ) -> Result<Vec<Complex64>> {
        if phase.len() != x.len() {
            return Err(Error::LengthMismatch(format!(
                "phase trace of {} entries does not match {} input samples",
                phase.len(),
                x.len()
            )));
        }
        if sample_rate_hz <= 0.0 {
            return Err(Error::invalid(
                "sample_rate_hz",
                "must be positive",
                sample_rate_hz,
            ));
        }
        let amp = self.signal_amplitude();
        let step = 2.0 * std::f64::consts::PI * cfo_hz / sample_rate_hz;
        Ok(x.iter()
            .zip(phase)
            .enumerate()
            .map(|(n, (&s, &phi))| {
                let rotated = s * Complex64::from_polar(1.0, -(step * n as f64 + phi));
                amp * rotated + self.sample_demod_noise(rotated, rng)
            })
            .collect())
    }
}
