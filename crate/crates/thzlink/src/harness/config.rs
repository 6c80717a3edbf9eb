//! Experiment configuration: TOML files, command-line overrides, and the
//! mapping onto link and chain objects.
//!
//! A [`RunConfig`] fully describes one experiment. Every field has a default
//! equal to the reference operating point, so an empty file (or no file) is
//! a valid configuration. Individual values are overridable with dotted
//! paths (`photonics.rin_db_hz=-150`), and the canonical serialised form of
//! the effective configuration is hashed into every result row, so a CSV can
//! always be traced back to the exact parameter set that produced it.

use crate::budget::ChannelParams;
use crate::electronics::ElectronicsLink;
use crate::error::{Error, Result};
use crate::phase::RfPhaseModel;
use crate::photonics::PhotonicsLink;
use crate::rxdsp::{IqImbalance, PllConfig};
use crate::sim::{CfoSetting, ChainConfig, FrontEnd, PhaseNoiseSetting, PllSetting};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Execution parameters shared by all runners.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Master seed; per-point seeds are derived from it by index.
    pub seed: u64,
    /// Symbol budget per Monte Carlo point.
    pub symbols: u64,
    /// Early-stop bit-error target per point.
    pub target_errors: u64,
    /// Symbols per processing block.
    pub block_symbols: usize,
    /// Worker threads for parallel sweeps (0 = automatic).
    pub workers: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            seed: 42,
            symbols: 100_000,
            target_errors: 100,
            block_symbols: 4096,
            workers: 0,
        }
    }
}

/// Modulation and pulse-shaping parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignalSection {
    /// QAM order (4, 16, 64, 256).
    pub order: usize,
    /// Symbol rate, baud.
    pub symbol_rate_hz: f64,
    /// Waveform oversampling factor.
    pub samples_per_symbol: usize,
    /// Root-raised-cosine roll-off.
    pub rolloff: f64,
    /// Filter span, symbols.
    pub filter_span: usize,
}

impl Default for SignalSection {
    fn default() -> Self {
        Self {
            order: 16,
            symbol_rate_hz: 32e9,
            samples_per_symbol: 4,
            rolloff: 0.2,
            filter_span: 32,
        }
    }
}

/// Which front end the experiment drives.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontendSection {
    /// `"photonics"` or `"electronics"`.
    pub kind: String,
}

impl Default for FrontendSection {
    fn default() -> Self {
        Self {
            kind: "photonics".to_string(),
        }
    }
}

/// Photomixing front-end parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhotonicsSection {
    /// Combined two-laser power at the EDFA input, dBm.
    pub input_power_dbm: f64,
    /// `"fixed-gain"` or `"fixed-output"`.
    pub gain_mode: String,
    /// EDFA gain in fixed-gain mode, dB.
    pub gain_db: f64,
    /// EDFA output power in fixed-output mode, dBm.
    pub output_power_dbm: f64,
    /// Laser relative intensity noise, dB/Hz.
    pub rin_db_hz: f64,
    /// EDFA spontaneous-emission factor.
    pub n_sp: f64,
    /// Optical carrier frequency, Hz.
    pub optical_carrier_hz: f64,
    /// Optical filter bandwidth, Hz.
    pub optical_bandwidth_hz: f64,
    /// Photodiode responsivity, A/W.
    pub responsivity: f64,
    /// Combined receiver LO laser-pair power, dBm.
    pub lo_power_dbm: f64,
    /// Electrical bandwidth, Hz.
    pub electrical_bandwidth_hz: f64,
    /// Receiver temperature, K.
    pub temperature_k: f64,
    /// Receiver noise figure, dB.
    pub noise_figure_db: f64,
    /// Receiver amplifier gain, dB.
    pub amplifier_gain_db: f64,
}

impl Default for PhotonicsSection {
    fn default() -> Self {
        Self {
            input_power_dbm: 5.0,
            gain_mode: "fixed-gain".to_string(),
            gain_db: 18.0,
            output_power_dbm: 23.0,
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
        }
    }
}

impl PhotonicsSection {
    /// Build the link at unit channel gain.
    pub fn build(&self) -> Result<PhotonicsLink> {
        let mut b = PhotonicsLink::builder()
            .input_power_dbm(self.input_power_dbm)
            .rin_db_hz(self.rin_db_hz)
            .n_sp(self.n_sp)
            .optical_carrier_hz(self.optical_carrier_hz)
            .optical_bandwidth_hz(self.optical_bandwidth_hz)
            .responsivity(self.responsivity)
            .lo_power_dbm(self.lo_power_dbm)
            .electrical_bandwidth_hz(self.electrical_bandwidth_hz)
            .temperature_k(self.temperature_k)
            .noise_figure_db(self.noise_figure_db)
            .amplifier_gain_db(self.amplifier_gain_db);
        b = match self.gain_mode.as_str() {
            "fixed-gain" => b.edfa_gain_db(self.gain_db),
            "fixed-output" => b.edfa_output_dbm(self.output_power_dbm),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "photonics.gain_mode must be \"fixed-gain\" or \"fixed-output\", got {other:?}"
                )))
            }
        };
        b.build()
    }
}

/// Multiplied-oscillator front-end parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ElectronicsSection {
    /// Transmit signal power, dBm.
    pub signal_power_dbm: f64,
    /// Receiver LO power, dBm.
    pub lo_power_dbm: f64,
    /// Transmitter oscillator pedestal after multiplication, dBc/Hz.
    pub tx_floor_dbc_hz: f64,
    /// Receiver oscillator pedestal after multiplication, dBc/Hz.
    pub rx_floor_dbc_hz: f64,
    /// Pedestal integration bandwidth per sideband, Hz.
    pub oscillator_bandwidth_hz: f64,
    /// Number of pedestal sidebands integrated.
    pub sideband_factor: f64,
    /// Electrical bandwidth, Hz.
    pub electrical_bandwidth_hz: f64,
    /// Temperature, K.
    pub temperature_k: f64,
    /// Noise figure, dB.
    pub noise_figure_db: f64,
    /// Transmitter amplifier gain, dB.
    pub tx_amplifier_gain_db: f64,
    /// Receiver amplifier gain, dB.
    pub rx_amplifier_gain_db: f64,
}

impl Default for ElectronicsSection {
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
        }
    }
}

impl ElectronicsSection {
    /// Build the link at unit channel gain.
    pub fn build(&self) -> Result<ElectronicsLink> {
        ElectronicsLink::builder()
            .signal_power_dbm(self.signal_power_dbm)
            .lo_power_dbm(self.lo_power_dbm)
            .tx_floor_dbc_hz(self.tx_floor_dbc_hz)
            .rx_floor_dbc_hz(self.rx_floor_dbc_hz)
            .oscillator_bandwidth_hz(self.oscillator_bandwidth_hz)
            .sideband_factor(self.sideband_factor)
            .electrical_bandwidth_hz(self.electrical_bandwidth_hz)
            .temperature_k(self.temperature_k)
            .noise_figure_db(self.noise_figure_db)
            .tx_amplifier_gain_db(self.tx_amplifier_gain_db)
            .rx_amplifier_gain_db(self.rx_amplifier_gain_db)
            .build()
    }
}

/// How the channel gain is set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    /// `"alpha"`, `"received-power"` or `"budget"`.
    pub mode: String,
    /// Amplitude gain α in `"alpha"` mode.
    pub alpha: f64,
    /// Target mean received power in `"received-power"` mode, dBm.
    pub received_power_dbm: f64,
    /// Geometry evaluated in `"budget"` mode.
    pub budget: ChannelParams,
}

impl Default for ChannelSection {
    fn default() -> Self {
        Self {
            mode: "alpha".to_string(),
            alpha: 1.0,
            received_power_dbm: -30.0,
            budget: ChannelParams::default(),
        }
    }
}

/// Phase-noise model selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseSection {
    /// `"none"`, `"laser"` or `"oscillator"`.
    pub model: String,
    /// Per-laser linewidth, Hz (laser model).
    pub linewidth_hz: f64,
    /// Number of independent lasers on the path (laser model).
    pub lasers: usize,
    /// White floor 10·log₁₀ K₀ (oscillator model), dB.
    pub k0_db: f64,
    /// f⁻² coefficient (oscillator model).
    pub k2: f64,
    /// f⁻³ coefficient (oscillator model).
    pub k3: f64,
    /// Shaping-filter length for the f⁻³ component.
    pub fir_taps: usize,
}

impl Default for PhaseSection {
    fn default() -> Self {
        Self {
            model: "none".to_string(),
            linewidth_hz: 100e3,
            lasers: 4,
            k0_db: -130.0,
            k2: 0.0,
            k3: 0.0,
            fir_taps: 1 << 14,
        }
    }
}

impl PhaseSection {
    /// Map onto the chain's phase-noise setting.
    pub fn setting(&self) -> Result<PhaseNoiseSetting> {
        match self.model.as_str() {
            "none" => Ok(PhaseNoiseSetting::None),
            "laser" => Ok(PhaseNoiseSetting::Laser {
                linewidth_hz: self.linewidth_hz,
                lasers: self.lasers,
            }),
            "oscillator" => Ok(PhaseNoiseSetting::Oscillator(RfPhaseModel::from_floor_db(
                self.k0_db, self.k2, self.k3,
            ))),
            other => Err(Error::InvalidConfig(format!(
                "phase.model must be \"none\", \"laser\" or \"oscillator\", got {other:?}"
            ))),
        }
    }
}

/// Deterministic front-end impairments.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImpairmentsSection {
    /// `"fixed"` or `"random"`.
    pub cfo_mode: String,
    /// Offset in `"fixed"` mode, Hz.
    pub cfo_hz: f64,
    /// Half-width of the per-run uniform draw in `"random"` mode, Hz.
    pub cfo_max_hz: f64,
    /// Run the blind estimator and de-rotate.
    pub compensate_cfo: bool,
    /// IQ amplitude imbalance, dB.
    pub iq_amplitude_db: f64,
    /// IQ phase imbalance, degrees.
    pub iq_phase_deg: f64,
}

impl Default for ImpairmentsSection {
    fn default() -> Self {
        Self {
            cfo_mode: "fixed".to_string(),
            cfo_hz: 0.0,
            cfo_max_hz: 1e9,
            compensate_cfo: true,
            iq_amplitude_db: 0.0,
            iq_phase_deg: 0.0,
        }
    }
}

impl ImpairmentsSection {
    /// Map onto the chain's offset setting.
    pub fn cfo_setting(&self) -> Result<CfoSetting> {
        match self.cfo_mode.as_str() {
            "fixed" => Ok(CfoSetting::Fixed(self.cfo_hz)),
            "random" => Ok(CfoSetting::RandomUniform {
                max_hz: self.cfo_max_hz,
            }),
            other => Err(Error::InvalidConfig(format!(
                "impairments.cfo_mode must be \"fixed\" or \"random\", got {other:?}"
            ))),
        }
    }

    /// Map onto the transmitter IQ imbalance.
    pub fn iq(&self) -> IqImbalance {
        IqImbalance {
            amplitude_db: self.iq_amplitude_db,
            phase_deg: self.iq_phase_deg,
        }
    }
}

/// Carrier-recovery loop selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PllSection {
    /// `"off"`, `"balanced"` or `"fixed"`.
    pub mode: String,
    /// Loop noise bandwidth in `"fixed"` mode (fraction of symbol rate).
    pub noise_bandwidth: f64,
    /// Phase-detector gain.
    pub detector_gain: f64,
    /// Oscillator gain.
    pub oscillator_gain: f64,
    /// Damping factor.
    pub damping: f64,
}

impl Default for PllSection {
    fn default() -> Self {
        let c = PllConfig::default();
        Self {
            mode: "balanced".to_string(),
            noise_bandwidth: c.noise_bandwidth,
            detector_gain: c.detector_gain,
            oscillator_gain: c.oscillator_gain,
            damping: c.damping,
        }
    }
}

impl PllSection {
    /// Map onto the chain's loop setting.
    pub fn setting(&self) -> Result<PllSetting> {
        match self.mode.as_str() {
            "off" => Ok(PllSetting::Off),
            "balanced" => Ok(PllSetting::Balanced),
            "fixed" => Ok(PllSetting::Fixed(PllConfig {
                detector_gain: self.detector_gain,
                oscillator_gain: self.oscillator_gain,
                damping: self.damping,
                noise_bandwidth: self.noise_bandwidth,
            })),
            other => Err(Error::InvalidConfig(format!(
                "pll.mode must be \"off\", \"balanced\" or \"fixed\", got {other:?}"
            ))),
        }
    }
}

/// Linear parameter sweep for the sweep runners.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    /// Swept quantity: `"received_power_dbm"`, `"input_power_dbm"`,
    /// `"signal_power_dbm"`, `"lo_power_dbm"` or `"alpha"`.
    pub variable: String,
    /// First value.
    pub start: f64,
    /// Last value (inclusive).
    pub stop: f64,
    /// Number of points.
    pub points: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            variable: "received_power_dbm".to_string(),
            start: -45.0,
            stop: -20.0,
            points: 26,
        }
    }
}

impl SweepSection {
    /// The swept values (linearly spaced, inclusive of both ends).
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::InvalidConfig("sweep.points must be positive".into()));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| self.start + step * i as f64)
            .collect())
    }
}

/// Conditional noise-statistics experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseStatsSection {
    /// Constellation analysed (its distinct symbol powers form the groups).
    pub order: usize,
    /// Noise draws per symbol-power group.
    pub samples_per_group: usize,
    /// Histogram bin count for the lowest/highest-power groups.
    pub histogram_bins: usize,
}

impl Default for NoiseStatsSection {
    fn default() -> Self {
        Self {
            order: 256,
            samples_per_group: 4096,
            histogram_bins: 61,
        }
    }
}

/// Phase-noise tolerance suite (required power vs phase-noise severity).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseSuiteSection {
    /// Modulation orders evaluated.
    pub orders: Vec<usize>,
    /// Laser linewidth grid, Hz (photonics; first entry is the baseline).
    pub linewidths_hz: Vec<f64>,
    /// Oscillator white-floor grid, dB (electronics; first is the baseline).
    pub floors_db: Vec<f64>,
    /// Target bit error rate solved for.
    pub target_ber: f64,
    /// Received-power search bracket, dBm.
    pub power_min_dbm: f64,
    /// Received-power search bracket, dBm.
    pub power_max_dbm: f64,
    /// Bisection iterations.
    pub iterations: usize,
}

impl Default for PhaseSuiteSection {
    fn default() -> Self {
        Self {
            orders: vec![4, 16, 64, 256],
            linewidths_hz: vec![0.0, 10e3, 100e3, 1e6],
            floors_db: vec![-145.0, -140.0, -130.0, -120.0],
            target_ber: 1e-2,
            power_min_dbm: -60.0,
            power_max_dbm: -10.0,
            iterations: 14,
        }
    }
}

/// Phase-trace PSD measurement.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsdSection {
    /// Synthesis sample rate, Hz.
    pub sample_rate_hz: f64,
    /// Number of synthesised samples.
    pub samples: usize,
    /// Welch segment length.
    pub segment: usize,
}

impl Default for PsdSection {
    fn default() -> Self {
        Self {
            sample_rate_hz: 128e6,
            samples: 1 << 21,
            segment: 1 << 16,
        }
    }
}

/// Validation against a frozen reference scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationSection {
    /// `"photonic-lab-link"` or `"electronic-lab-link"`.
    pub scenario: String,
}

impl Default for ValidationSection {
    fn default() -> Self {
        Self {
            scenario: "photonic-lab-link".to_string(),
        }
    }
}

/// Complete experiment description.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Execution parameters.
    pub run: RunSection,
    /// Modulation and pulse shaping.
    pub signal: SignalSection,
    /// Front-end selection.
    pub frontend: FrontendSection,
    /// Photomixing front end.
    pub photonics: PhotonicsSection,
    /// Multiplied-oscillator front end.
    pub electronics: ElectronicsSection,
    /// Channel gain.
    pub channel: ChannelSection,
    /// Phase noise.
    pub phase: PhaseSection,
    /// Deterministic impairments.
    pub impairments: ImpairmentsSection,
    /// Carrier recovery.
    pub pll: PllSection,
    /// Parameter sweep.
    pub sweep: SweepSection,
    /// Noise-statistics experiment.
    pub noise_stats: NoiseStatsSection,
    /// Phase-noise tolerance suite.
    pub phase_suite: PhaseSuiteSection,
    /// Phase PSD measurement.
    pub psd: PsdSection,
    /// Reference-scenario validation.
    pub validation: ValidationSection,
}

impl RunConfig {
    /// Parse from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    /// Load from a TOML file.
    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(&path)?;
        Self::from_toml_str(&text)
    }

    /// Load (or start from defaults when `path` is `None`) and apply dotted
    /// `key=value` overrides, e.g. `("photonics.rin_db_hz", "-150")`.
    pub fn load_with_overrides(
        path: Option<&Path>,
        overrides: &[(String, String)],
    ) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)?,
            None => String::new(),
        };
        let mut value: toml::Value =
            toml::from_str(&text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        for (key, raw) in overrides {
            apply_override(&mut value, key, raw)?;
        }
        value
            .try_into()
            .map_err(|e: toml::de::Error| Error::ConfigParse(e.to_string()))
    }

    /// FNV-1a hash of the canonical serialised configuration.
    ///
    /// Execution-only keys (`run.workers`) are normalised out first: the
    /// same experiment must hash identically whatever machine or thread
    /// count produced it.
    pub fn hash(&self) -> u64 {
        let mut canonical = self.clone();
        canonical.run.workers = 0;
        let text = toml::to_string(&canonical).unwrap_or_default();
        fnv1a64(text.as_bytes())
    }

    /// [`Self::hash`] as fixed-width hex, the form written into CSV rows.
    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.hash())
    }

    /// Resolve the channel amplitude factor.
    pub fn channel_alpha(&self, front: &FrontEnd) -> Result<f64> {
        match self.channel.mode.as_str() {
            "alpha" => Ok(self.channel.alpha),
            "received-power" => Ok(front
                .with_received_power_dbm(self.channel.received_power_dbm)?
                .alpha()),
            "budget" => self.channel.budget.alpha(),
            other => Err(Error::InvalidConfig(format!(
                "channel.mode must be \"alpha\", \"received-power\" or \"budget\", got {other:?}"
            ))),
        }
    }

    /// Build the configured front end with the channel applied.
    pub fn build_front_end(&self) -> Result<FrontEnd> {
        let unit = match self.frontend.kind.as_str() {
            "photonics" => FrontEnd::Photonics(self.photonics.build()?),
            "electronics" => FrontEnd::Electronics(self.electronics.build()?),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "frontend.kind must be \"photonics\" or \"electronics\", got {other:?}"
                )))
            }
        };
        let alpha = self.channel_alpha(&unit)?;
        unit.with_alpha(alpha)
    }

    /// Build the Monte Carlo chain configuration.
    pub fn chain_config(&self) -> Result<ChainConfig> {
        Ok(ChainConfig {
            order: self.signal.order,
            symbol_rate_hz: self.signal.symbol_rate_hz,
            samples_per_symbol: self.signal.samples_per_symbol,
            rolloff: self.signal.rolloff,
            filter_span: self.signal.filter_span,
            cfo: self.impairments.cfo_setting()?,
            compensate_cfo: self.impairments.compensate_cfo,
            phase_noise: self.phase.setting()?,
            fir_taps: self.phase.fir_taps,
            iq: self.impairments.iq(),
            pll: self.pll.setting()?,
            block_symbols: self.run.block_symbols,
            max_symbols: self.run.symbols,
            target_errors: self.run.target_errors,
        })
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes.iter().fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}

/// Set `key` (dotted path) to `raw` inside a TOML tree. `raw` is parsed as a
/// TOML value; if that fails it is taken as a bare string.
fn apply_override(root: &mut toml::Value, key: &str, raw: &str) -> Result<()> {
    let parsed: toml::Value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed table has v"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::InvalidConfig(format!("malformed override key {key:?}")));
    }
    for part in &parts[..parts.len() - 1] {
        let table = node.as_table_mut().ok_or_else(|| {
            Error::InvalidConfig(format!("override key {key:?} traverses a non-table value"))
        })?;
        node = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    }
    let table = node.as_table_mut().ok_or_else(|| {
        Error::InvalidConfig(format!("override key {key:?} traverses a non-table value"))
    })?;
    table.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn defaults_build_reference_photonics_link() {
        let cfg = RunConfig::default();
        let front = cfg.build_front_end().unwrap();
        assert_relative_eq!(front.snr_rx_db(), 29.03, epsilon = 0.05);
        assert_relative_eq!(front.alpha(), 1.0);
    }

    #[test]
    fn toml_round_trip_preserves_hash() {
        let cfg = RunConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back = RunConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg.hash(), back.hash());
        assert_eq!(cfg.hash_hex().len(), 16);
    }

    #[test]
    fn partial_toml_fills_defaults() {
        let cfg = RunConfig::from_toml_str(
            "[frontend]\nkind = \"electronics\"\n\n[signal]\norder = 64\n",
        )
        .unwrap();
        assert_eq!(cfg.signal.order, 64);
        assert_eq!(cfg.signal.samples_per_symbol, 4);
        assert!(matches!(
            cfg.build_front_end().unwrap(),
            FrontEnd::Electronics(_)
        ));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml_str("[signal]\nodrer = 64\n").is_err());
        assert!(RunConfig::from_toml_str("[sginal]\norder = 64\n").is_err());
    }

    #[test]
    fn overrides_change_values_and_hash() {
        let base = RunConfig::load_with_overrides(None, &[]).unwrap();
        let over = RunConfig::load_with_overrides(
            None,
            &[
                ("photonics.rin_db_hz".to_string(), "-150".to_string()),
                ("signal.order".to_string(), "256".to_string()),
                ("frontend.kind".to_string(), "\"photonics\"".to_string()),
            ],
        )
        .unwrap();
        assert_eq!(over.photonics.rin_db_hz, -150.0);
        assert_eq!(over.signal.order, 256);
        assert_ne!(base.hash(), over.hash());
    }

    #[test]
    fn bad_override_key_is_rejected() {
        assert!(RunConfig::load_with_overrides(
            None,
            &[("signal.order.deeper".to_string(), "1".to_string())]
        )
        .is_err());
        assert!(RunConfig::load_with_overrides(
            None,
            &[("signal..order".to_string(), "1".to_string())]
        )
        .is_err());
        // Unknown section/key surfaces at deserialisation.
        assert!(RunConfig::load_with_overrides(
            None,
            &[("nonsense.key".to_string(), "1".to_string())]
        )
        .is_err());
    }

    #[test]
    fn channel_modes_resolve_alpha() {
        let mut cfg = RunConfig::default();
        cfg.channel.mode = "received-power".to_string();
        cfg.channel.received_power_dbm = -30.0;
        let front = cfg.build_front_end().unwrap();
        assert_relative_eq!(front.received_power_dbm(), -30.0, epsilon = 1e-9);

        cfg.channel.mode = "budget".to_string();
        let front = cfg.build_front_end().unwrap();
        assert_relative_eq!(front.alpha(), 0.72, epsilon = 0.005);

        cfg.channel.mode = "nope".to_string();
        assert!(cfg.build_front_end().is_err());
    }

    #[test]
    fn sweep_values_are_inclusive_linspace() {
        let s = SweepSection {
            variable: "received_power_dbm".into(),
            start: -40.0,
            stop: -20.0,
            points: 5,
        };
        let v = s.values().unwrap();
        assert_eq!(v.len(), 5);
        assert_relative_eq!(v[0], -40.0);
        assert_relative_eq!(v[4], -20.0);
        assert_relative_eq!(v[1], -35.0);
    }

    #[test]
    fn fnv_hash_reference_values() {
        // Standard FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }
}
