//! Photonic transmitter / receiver model.
//!
//! The carrier is generated by beating two free-running lasers (combined
//! power `P_in` at an EDFA of gain `G`) on a photomixer with responsivity
//! `R`; one branch is data-modulated. The receiver beats the incoming field
//! with a second laser pair (combined power `P_B`, no amplifier). Amplified
//! spontaneous emission and relative intensity noise co-propagate with the
//! carriers and beat into the electrical domain together with shot and
//! thermal noise.
//!
//! With branch powers `P₁,P₂` (transmitter, `P₁` modulated) and `P₃,P₄`
//! (receiver LO), conversion gains are `G₁ = R√(P₁P₂)` and `G₂ = R√(P₃P₄)`,
//! and the demodulated observation for a unit-power symbol `x` is
//!
//! ```text
//! y = α·G₁·G₂·x·e^{−j(2πΔf·t + Δφ)} + α·G₂·ñ_Tx + α·G₁·x·ñ_LO + α·ñ_Tx·ñ_LO + n_th
//! ```
//!
//! where the equivalent transmitter-side beat noise has power
//!
//! ```text
//! E|ñ_Tx|² = σ²_sh,Tx + β_A·(σ²_Opt + 2P₂ + 2P₁),   β_A = R²σ²_Opt/4
//! ```
//!
//! (the `2P₁` share scaling with the instantaneous symbol power), and the
//! receiver-side LO beat noise likewise
//!
//! ```text
//! E|ñ_LO|² = σ²_sh,LO + β_B·(σ²_Opt,LO + 2P₃ + 2P₄),   β_B = R²σ²_Opt,LO/4.
//! ```
//!
//! Grouping terms by whether they scale with the instantaneous symbol power
//! splits the total demodulator noise into a signal-independent part (SIN)
//! and a signal-dependent part (SDN), a split that grows with received power
//! and ultimately caps the achievable SNR.
//!
//! Noise-product note: the ñ_Tx·ñ_LO term in the sampler uses draws
//! independent of the additive ñ_Tx and ñ_LO terms. The two conventions
//! (shared or independent draws) have identical first and second moments —
//! all cross-moments vanish because each factor is zero-mean circular — and
//! the independent form matches treating the beat products as decorrelated
//! wideband noise.

use crate::error::{Error, Result};
use crate::noise;
use crate::rng::complex_gaussian;
use crate::units::{dbm_from_watt, watt_from_dbm};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Physical state of a photonic link at one operating point.
///
/// Construct via [`PhotonicsLink::builder`] (system-level parameters) or
/// [`PhotonicsLink::from_parts`] (directly specified powers).
#[derive(Debug, Clone)]
pub struct PhotonicsLink {
    parts: PhotonicsParts,
}

/// Directly specified branch powers and noise powers of a photonic link.
/// All powers in watts.
#[derive(Debug, Clone)]
pub struct PhotonicsParts {
    /// Modulated transmitter branch power after amplification.
    pub p1: f64,
    /// Unmodulated transmitter branch power after amplification.
    pub p2: f64,
    /// First receiver LO branch power.
    pub p3: f64,
    /// Second receiver LO branch power.
    pub p4: f64,
    /// Photodiode responsivity, A/W.
    pub responsivity: f64,
    /// Transmitter-side optical noise power (ASE + RIN).
    pub sigma2_opt: f64,
    /// Receiver-side optical noise power (RIN of the LO pair).
    pub sigma2_opt_lo: f64,
    /// Transmitter photodiode shot-noise power.
    pub sigma2_sh_tx: f64,
    /// Receiver photodiode shot-noise power.
    pub sigma2_sh_lo: f64,
    /// Thermal noise power at the demodulator.
    pub sigma2_th: f64,
    /// End-to-end channel amplitude gain.
    pub alpha: f64,
}

/// Builder assembling a [`PhotonicsLink`] from system-level parameters.
#[derive(Debug, Clone)]
pub struct PhotonicsLinkBuilder {
    input_power_dbm: f64,
    gain_mode: GainMode,
    rin_db_hz: f64,
    n_sp: f64,
    optical_carrier_hz: f64,
    optical_bandwidth_hz: f64,
    responsivity: f64,
    lo_power_dbm: f64,
    electrical_bandwidth_hz: f64,
    temperature_k: f64,
    noise_figure_db: f64,
    amplifier_gain_db: f64,
    alpha: f64,
}

#[derive(Debug, Clone, Copy)]
enum GainMode {
    /// Fixed EDFA gain in dB.
    FixedGain(f64),
    /// Fixed EDFA output power in dBm (gain adapts to the input).
    FixedOutput(f64),
}

impl Default for PhotonicsLinkBuilder {
    fn default() -> Self {
        Self {
            input_power_dbm: 5.0,
            gain_mode: GainMode::FixedGain(18.0),
            rin_db_hz: -145.0,
            n_sp: 1.0,
            optical_carrier_hz: 193.4e12,
            optical_bandwidth_hz: 2e12,
            responsivity: 0.7,
            lo_power_dbm: 19.26,
            electrical_bandwidth_hz: 40e9,
            temperature_k: 290.0,
            noise_figure_db: 5.0,
            amplifier_gain_db: 5.0,
            alpha: 1.0,
        }
    }
}

impl PhotonicsLinkBuilder {
    /// Combined two-laser power at the EDFA input, dBm.
    pub fn input_power_dbm(mut self, dbm: f64) -> Self {
        self.input_power_dbm = dbm;
        self
    }

    /// Fixed EDFA gain, dB (clears any fixed-output setting).
    pub fn edfa_gain_db(mut self, db: f64) -> Self {
        self.gain_mode = GainMode::FixedGain(db);
        self
    }

    /// Fixed EDFA output power, dBm; the gain adapts to the input power
    /// (saturated-amplifier operating mode).
    pub fn edfa_output_dbm(mut self, dbm: f64) -> Self {
        self.gain_mode = GainMode::FixedOutput(dbm);
        self
    }

    /// Relative intensity noise of each laser, dB/Hz.
    pub fn rin_db_hz(mut self, db_hz: f64) -> Self {
        self.rin_db_hz = db_hz;
        self
    }

    /// Spontaneous-emission factor of the EDFA (1 = ideal).
    pub fn n_sp(mut self, n_sp: f64) -> Self {
        self.n_sp = n_sp;
        self
    }

    /// Optical carrier frequency, Hz.
    pub fn optical_carrier_hz(mut self, hz: f64) -> Self {
        self.optical_carrier_hz = hz;
        self
    }

    /// Optical filter bandwidth for ASE/RIN accumulation, Hz.
    pub fn optical_bandwidth_hz(mut self, hz: f64) -> Self {
        self.optical_bandwidth_hz = hz;
        self
    }

    /// Photodiode responsivity, A/W.
    pub fn responsivity(mut self, a_per_w: f64) -> Self {
        self.responsivity = a_per_w;
        self
    }

    /// Combined receiver LO laser-pair power, dBm.
    pub fn lo_power_dbm(mut self, dbm: f64) -> Self {
        self.lo_power_dbm = dbm;
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

    /// Receiver noise figure, dB.
    pub fn noise_figure_db(mut self, db: f64) -> Self {
        self.noise_figure_db = db;
        self
    }

    /// Receiver amplifier gain, dB.
    pub fn amplifier_gain_db(mut self, db: f64) -> Self {
        self.amplifier_gain_db = db;
        self
    }

    /// End-to-end channel amplitude gain α.
    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Validate and build the link.
    pub fn build(self) -> Result<PhotonicsLink> {
        if self.responsivity <= 0.0 {
            return Err(Error::invalid("responsivity", "must be positive", self.responsivity));
        }
        if self.optical_bandwidth_hz <= 0.0 || self.electrical_bandwidth_hz <= 0.0 {
            return Err(Error::invalid(
                "bandwidth",
                "optical and electrical bandwidths must be positive",
                format!("{} / {}", self.optical_bandwidth_hz, self.electrical_bandwidth_hz),
            ));
        }
        if self.alpha < 0.0 {
            return Err(Error::invalid("alpha", "must be non-negative", self.alpha));
        }
        if self.n_sp < 0.0 {
            return Err(Error::invalid("n_sp", "must be non-negative", self.n_sp));
        }

        let p_in = watt_from_dbm(self.input_power_dbm);
        let gain = match self.gain_mode {
            GainMode::FixedGain(db) => 10f64.powf(db / 10.0),
            GainMode::FixedOutput(dbm) => {
                let p_out = watt_from_dbm(dbm);
                if p_in <= 0.0 {
                    return Err(Error::invalid(
                        "input_power_dbm",
                        "fixed-output mode needs positive input power",
                        self.input_power_dbm,
                    ));
                }
                p_out / p_in
            }
        };
        if gain < 1.0 {
            return Err(Error::invalid(
                "edfa_gain",
                "amplifier gain below unity",
                format!("{gain:.4}"),
            ));
        }

        // Equal split across the two transmitter lasers.
        let per_laser_in = p_in / 2.0;
        let p1 = gain * per_laser_in;
        let p2 = p1;

        let sigma2_ase = noise::ase_power(gain, self.n_sp, self.optical_carrier_hz, self.optical_bandwidth_hz);
        let sigma2_rin_tx =
            2.0 * noise::rin_power(gain, per_laser_in, self.rin_db_hz, self.optical_bandwidth_hz);
        let sigma2_opt = sigma2_ase + sigma2_rin_tx;

        // Receiver LO pair: no amplifier, so RIN only.
        let p_b = watt_from_dbm(self.lo_power_dbm);
        let p3 = p_b / 2.0;
        let p4 = p3;
        let sigma2_opt_lo = 2.0 * noise::rin_power(1.0, p3, self.rin_db_hz, self.optical_bandwidth_hz);

        let sigma2_sh_tx = noise::shot_power(
            self.responsivity,
            (p1 + p2 + sigma2_opt) / 2.0,
            self.electrical_bandwidth_hz,
        );
        let sigma2_sh_lo = noise::shot_power(
            self.responsivity,
            (p3 + p4 + sigma2_opt_lo) / 2.0,
            self.electrical_bandwidth_hz,
        );
        let sigma2_th = noise::thermal_power(
            self.temperature_k,
            self.electrical_bandwidth_hz,
            self.noise_figure_db,
            self.amplifier_gain_db,
        );

        PhotonicsLink::from_parts(PhotonicsParts {
            p1,
            p2,
            p3,
            p4,
            responsivity: self.responsivity,
            sigma2_opt,
            sigma2_opt_lo,
            sigma2_sh_tx,
            sigma2_sh_lo,
            sigma2_th,
            alpha: self.alpha,
        })
    }
}

/// Demodulator noise decomposition in watts, all terms scaled to the
/// demodulator reference plane (i.e. already multiplied by α² where
/// applicable).
///
/// `signal_dependent` collects every contribution proportional to the
/// instantaneous symbol power (the `P₁` share of the transmitter beat noise,
/// everything entering through the conversion gain `G₁²`, and the matching
/// share of the cross term); `signal_independent` is the remainder including
/// thermal noise. `signal_independent + signal_dependent == total`.
#[derive(Debug, Clone, Copy)]
pub struct NoiseBreakdown {
    /// Thermal noise σ²_th.
    pub thermal: f64,
    /// α²G₂²·σ²_sh,Tx — transmitter shot noise via the LO conversion gain.
    pub tx_shot: f64,
    /// α²G₂²·β_A·σ²_Opt — optical-noise self-beat at the transmitter.
    pub tx_self_beat: f64,
    /// α²G₂²·2β_A·P₂ — optical noise beating the unmodulated carrier branch.
    pub tx_carrier_beat: f64,
    /// α²G₂²·2β_A·P₁ — optical noise beating the data branch (signal-dependent).
    pub tx_signal_beat: f64,
    /// α²G₁²·E|ñ_LO|² — receiver LO beat noise entering via the signal path
    /// (signal-dependent).
    pub lo_via_signal: f64,
    /// α²·E|ñ_Tx|²·E|ñ_LO|² — noise-times-noise cross term.
    pub cross: f64,
    /// Sum of all terms that do not scale with symbol power.
    pub signal_independent: f64,
    /// Sum of all terms that scale with symbol power.
    pub signal_dependent: f64,
    /// Total demodulator noise power.
    pub total: f64,
}

impl NoiseBreakdown {
    /// Fraction of the total noise that is signal-dependent.
    pub fn sdn_fraction(&self) -> f64 {
        self.signal_dependent / self.total
    }
}

impl PhotonicsLink {
    /// Start building a link from system-level parameters.
    pub fn builder() -> PhotonicsLinkBuilder {
        PhotonicsLinkBuilder::default()
    }

    /// Build a link directly from branch and noise powers.
    pub fn from_parts(parts: PhotonicsParts) -> Result<Self> {
        for (name, v) in [
            ("p1", parts.p1),
            ("p2", parts.p2),
            ("p3", parts.p3),
            ("p4", parts.p4),
            ("sigma2_opt", parts.sigma2_opt),
            ("sigma2_opt_lo", parts.sigma2_opt_lo),
            ("sigma2_sh_tx", parts.sigma2_sh_tx),
            ("sigma2_sh_lo", parts.sigma2_sh_lo),
            ("sigma2_th", parts.sigma2_th),
            ("alpha", parts.alpha),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::invalid(
                    "photonics",
                    "powers and gains must be finite and non-negative",
                    format!("{name} = {v}"),
                ));
            }
        }
        if parts.responsivity <= 0.0 {
            return Err(Error::invalid(
                "responsivity",
                "must be positive",
                parts.responsivity,
            ));
        }
        Ok(Self { parts })
    }

    /// The underlying powers.
    pub fn parts(&self) -> &PhotonicsParts {
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

    /// Transmitter conversion gain G₁ = R√(P₁P₂) (volts per unit symbol).
    pub fn g1(&self) -> f64 {
        self.parts.responsivity * (self.parts.p1 * self.parts.p2).sqrt()
    }

    /// Receiver conversion gain G₂ = R√(P₃P₄).
    pub fn g2(&self) -> f64 {
        self.parts.responsivity * (self.parts.p3 * self.parts.p4).sqrt()
    }

    /// Demodulated signal amplitude A = α·G₁·G₂ for a unit-power symbol.
    pub fn signal_amplitude(&self) -> f64 {
        self.parts.alpha * self.g1() * self.g2()
    }

    /// Received (post-photomixing) signal power in dBm: 10log₁₀((αG₁G₂)²/1mW).
    pub fn received_power_dbm(&self) -> f64 {
        dbm_from_watt(self.signal_amplitude().powi(2))
    }

    /// Set α so the received power equals `p_rx_dbm`.
    pub fn with_received_power_dbm(self, p_rx_dbm: f64) -> Result<Self> {
        let g = self.g1() * self.g2();
        if g <= 0.0 {
            return Err(Error::invalid(
                "received_power",
                "conversion gains must be positive to target a received power",
                p_rx_dbm,
            ));
        }
        let alpha = watt_from_dbm(p_rx_dbm).sqrt() / g;
        self.with_alpha(alpha)
    }

    /// β_A = R²σ²_Opt/4.
    fn beta_a(&self) -> f64 {
        let r2 = self.parts.responsivity * self.parts.responsivity;
        r2 * self.parts.sigma2_opt / 4.0
    }

    /// β_B = R²σ²_Opt,LO/4.
    fn beta_b(&self) -> f64 {
        let r2 = self.parts.responsivity * self.parts.responsivity;
        r2 * self.parts.sigma2_opt_lo / 4.0
    }

    /// Average transmitter-side beat-noise power
    /// E|ñ_Tx|² = σ²_sh,Tx + β_A(σ²_Opt + 2P₂ + 2P₁).
    pub fn tx_noise_power(&self) -> f64 {
        self.tx_noise_power_conditional(1.0)
    }

    /// Transmitter beat-noise power conditioned on an instantaneous symbol
    /// power `|x|²` (the data-branch share scales with it).
    pub fn tx_noise_power_conditional(&self, symbol_power: f64) -> f64 {
        let p = &self.parts;
        p.sigma2_sh_tx
            + self.beta_a() * (p.sigma2_opt + 2.0 * p.p2 + 2.0 * p.p1 * symbol_power)
    }

    /// Average receiver LO beat-noise power
    /// E|ñ_LO|² = σ²_sh,LO + β_B(σ²_Opt,LO + 2P₃ + 2P₄).
    pub fn lo_noise_power(&self) -> f64 {
        let p = &self.parts;
        p.sigma2_sh_lo + self.beta_b() * (p.sigma2_opt_lo + 2.0 * p.p3 + 2.0 * p.p4)
    }

    /// Transmitter output SNR:
    ///
    /// ```text
    /// SNR_Tx = 4R²P₁P₂ / (4σ²_sh,Tx + R²σ⁴_Opt + 2R²σ²_Opt(P₁+P₂))
    /// ```
    pub fn snr_tx(&self) -> f64 {
        let p = &self.parts;
        let r2 = p.responsivity * p.responsivity;
        let num = 4.0 * r2 * p.p1 * p.p2;
        let den = 4.0 * p.sigma2_sh_tx
            + r2 * p.sigma2_opt * p.sigma2_opt
            + 2.0 * r2 * p.sigma2_opt * (p.p1 + p.p2);
        if den == 0.0 {
            return f64::INFINITY;
        }
        num / den
    }

    /// [`Self::snr_tx`] in dB.
    pub fn snr_tx_db(&self) -> f64 {
        10.0 * self.snr_tx().log10()
    }

    /// Itemized demodulator noise including the channel gain.
    pub fn noise_breakdown(&self) -> NoiseBreakdown {
        let p = &self.parts;
        let a2 = p.alpha * p.alpha;
        let g1_sq = self.g1().powi(2);
        let g2_sq = self.g2().powi(2);
        let beta_a = self.beta_a();

        let e_tx = self.tx_noise_power();
        let e_lo = self.lo_noise_power();

        let tx_shot = a2 * g2_sq * p.sigma2_sh_tx;
        let tx_self_beat = a2 * g2_sq * beta_a * p.sigma2_opt;
        let tx_carrier_beat = a2 * g2_sq * 2.0 * beta_a * p.p2;
        let tx_signal_beat = a2 * g2_sq * 2.0 * beta_a * p.p1;
        let lo_via_signal = a2 * g1_sq * e_lo;
        let cross = a2 * e_tx * e_lo;

        // The cross term inherits the signal-dependent share of E|ñ_Tx|².
        let sdn_share_tx = if e_tx > 0.0 {
            2.0 * beta_a * p.p1 / e_tx
        } else {
            0.0
        };
        let signal_dependent = tx_signal_beat + lo_via_signal + cross * sdn_share_tx;
        let total = p.sigma2_th
            + tx_shot
            + tx_self_beat
            + tx_carrier_beat
            + tx_signal_beat
            + lo_via_signal
            + cross;
        NoiseBreakdown {
            thermal: p.sigma2_th,
            tx_shot,
            tx_self_beat,
            tx_carrier_beat,
            tx_signal_beat,
            lo_via_signal,
            cross,
            signal_independent: total - signal_dependent,
            signal_dependent,
            total,
        }
    }

    /// Demodulator noise power conditioned on an instantaneous symbol power.
    pub fn demod_noise_power_conditional(&self, symbol_power: f64) -> f64 {
        let b = self.noise_breakdown();
        b.signal_independent + symbol_power * b.signal_dependent
    }

    /// Receiver (demodulator) SNR: (αG₁G₂)² over the total noise power.
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

    /// Draw the transmitter-side beat noise ñ_Tx conditioned on the
    /// instantaneous (unit-mean-power) symbol `x`: the mean-removed optical
    /// self-beat (one χ²₁-distributed part per quadrature), a circular
    /// Gaussian collecting shot noise and the carrier-branch beat, and the
    /// data-branch beat scaled by `x`.
    pub fn sample_tx_noise<R: Rng + ?Sized>(&self, x: Complex64, rng: &mut R) -> Complex64 {
        let p = &self.parts;
        let r = p.responsivity;
        let self_beat = mean_removed_self_beat(r * p.sigma2_opt / 4.0, rng);
        let additive =
            complex_gaussian(rng, p.sigma2_sh_tx + r * r * p.sigma2_opt * p.p2 / 2.0);
        let signal_beat = x * complex_gaussian(rng, r * r * p.sigma2_opt * p.p1 / 2.0);
        self_beat + additive + signal_beat
    }

    /// Draw the receiver-side LO beat noise ñ_LO: the mean-removed optical
    /// self-beat plus a circular Gaussian collecting shot noise and the beats
    /// against both LO carriers.
    pub fn sample_lo_noise<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let p = &self.parts;
        let r = p.responsivity;
        let self_beat = mean_removed_self_beat(r * p.sigma2_opt_lo / 4.0, rng);
        let additive = complex_gaussian(
            rng,
            p.sigma2_sh_lo + r * r * p.sigma2_opt_lo * (p.p3 + p.p4) / 2.0,
        );
        self_beat + additive
    }

    /// Draw the total demodulator noise for one symbol `x` (unit mean power):
    ///
    /// ```text
    /// n = α·G₂·ñ_Tx + α·G₁·x·ñ_LO + α·ñ_Tx′·ñ_LO′ + n_th
    /// ```
    ///
    /// The noise-times-noise product uses fresh draws ñ_Tx′, ñ_LO′
    /// independent of the first two terms (the sources decorrelate over the
    /// electrical bandwidth; see the noise-product note in the module docs).
    /// Averaged over `x` of unit power, E|n|² equals
    /// [`Self::noise_breakdown`]'s `total`.
    pub fn sample_demod_noise<R: Rng + ?Sized>(&self, x: Complex64, rng: &mut R) -> Complex64 {
        let p = &self.parts;
        let n_tx = self.sample_tx_noise(x, rng);
        let n_lo = self.sample_lo_noise(rng);
        let n_tx_cross = self.sample_tx_noise(x, rng);
        let n_lo_cross = self.sample_lo_noise(rng);
        let thermal = complex_gaussian(rng, p.sigma2_th);
        p.alpha * (self.g2() * n_tx + self.g1() * x * n_lo + n_tx_cross * n_lo_cross) + thermal
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
        let step = 2.0 * PI * cfo_hz / sample_rate_hz;
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

/// Mean-removed optical self-beat contribution: per quadrature a scaled
/// (χ²₁ − 1) variate, `scale·(N(0,1)² − 1)`, giving total variance
/// 4·scale² = R²σ⁴/4 for scale = R·σ²/4.
fn mean_removed_self_beat<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> Complex64 {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    Complex64::new(scale * (a * a - 1.0), scale * (b * b - 1.0))
}
