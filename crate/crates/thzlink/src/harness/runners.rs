//! Experiment runners: each maps a [`RunConfig`] to one or more result
//! tables.
//!
//! Every runner is deterministic in (configuration, seed): per-point seeds
//! are derived from the master seed by point index, so the same experiment
//! produces byte-identical CSV output regardless of worker count or
//! scheduling order.

use crate::budget::LinkBudget;
use crate::error::{Error, Result};
use crate::harness::config::RunConfig;
use crate::harness::table::{Cell, Table};
use crate::phase::{RfPhaseGenerator, WienerPhase};
use crate::rng::{child_seed, rng_for_point};
use crate::signal::{ber_awgn_qam, Constellation};
use crate::sim::{run_ber, ChainConfig, FrontEnd, PhaseNoiseSetting};
use crate::spectrum::welch_psd;
use num_complex::Complex64;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::PI;

/// Result of one runner invocation.
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Primary result table.
    pub table: Table,
    /// Auxiliary tables (histograms, fit summaries), written as
    /// `<stem>.<name>.csv` next to the primary output.
    pub extras: Vec<(String, Table)>,
    /// True when any Monte Carlo point missed its error target within the
    /// symbol budget.
    pub low_confidence: bool,
}

impl RunOutput {
    fn table_only(table: Table) -> Self {
        Self {
            table,
            extras: Vec::new(),
            low_confidence: false,
        }
    }
}

/// Run a closure inside a rayon pool sized by the configuration (0 =
/// default global pool).
fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot build worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// Rebuild the configuration with one swept parameter replaced.
fn apply_sweep_value(cfg: &RunConfig, variable: &str, value: f64) -> Result<RunConfig> {
    let mut point = cfg.clone();
    match variable {
        "received_power_dbm" => {
            point.channel.mode = "received-power".to_string();
            point.channel.received_power_dbm = value;
        }
        "alpha" => {
            point.channel.mode = "alpha".to_string();
            point.channel.alpha = value;
        }
        "input_power_dbm" => point.photonics.input_power_dbm = value,
        "lo_power_dbm" => match point.frontend.kind.as_str() {
            "electronics" => point.electronics.lo_power_dbm = value,
            _ => point.photonics.lo_power_dbm = value,
        },
        "signal_power_dbm" => point.electronics.signal_power_dbm = value,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown sweep.variable {other:?}"
            )))
        }
    }
    Ok(point)
}

/// Analytic SNR sweep: transmitter and receiver SNR plus the
/// signal-dependent noise share at each swept operating point.
///
/// Operating points the hardware cannot realise (a saturated amplifier
/// asked for less than unit gain) are flagged `feasible = false` with empty
/// SNR cells instead of failing the whole sweep.
pub fn run_snr_sweep(cfg: &RunConfig) -> Result<RunOutput> {
    let values = cfg.sweep.values()?;
    let hash = cfg.hash_hex();
    let mut table = Table::new(&[
        "sweep_variable",
        "value",
        "snr_tx_db",
        "snr_rx_db",
        "received_power_dbm",
        "signal_independent_w",
        "signal_dependent_w",
        "sdn_fraction",
        "feasible",
        "config_hash",
    ]);

    for v in values {
        let point = apply_sweep_value(cfg, &cfg.sweep.variable, v)?;
        match point.build_front_end() {
            Ok(front) => {
                let split = front.noise_split();
                table.push_row(vec![
                    cfg.sweep.variable.as_str().into(),
                    v.into(),
                    (10.0 * front.snr_tx().log10()).into(),
                    front.snr_rx_db().into(),
                    front.received_power_dbm().into(),
                    split.signal_independent.into(),
                    split.signal_dependent.into(),
                    split.signal_dependent_fraction().into(),
                    true.into(),
                    hash.as_str().into(),
                ])?;
            }
            // A fixed-output amplifier driven above its output level cannot
            // provide gain ≥ 1; report the point as infeasible.
            Err(Error::InvalidParameter { name: "edfa_gain", .. }) => {
                table.push_row(vec![
                    cfg.sweep.variable.as_str().into(),
                    v.into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    false.into(),
                    hash.as_str().into(),
                ])?;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(RunOutput::table_only(table))
}

/// Monte Carlo BER versus the swept operating point, with the analytic
/// AWGN reference curve evaluated at the same post-demodulation SNR.
pub fn run_ber_sweep(cfg: &RunConfig) -> Result<RunOutput> {
    let values = cfg.sweep.values()?;
    let chain = cfg.chain_config()?;
    let hash = cfg.hash_hex();
    let master = cfg.run.seed;

    let points: Vec<(usize, f64, RunConfig)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| Ok((i, v, apply_sweep_value(cfg, &cfg.sweep.variable, v)?)))
        .collect::<Result<_>>()?;

    let results: Vec<(f64, FrontEnd, crate::sim::BerOutcome)> =
        with_workers(cfg.run.workers, || {
            points
                .par_iter()
                .map(|(i, v, point)| {
                    let front = point.build_front_end()?;
                    let outcome = run_ber(&front, &chain, child_seed(master, *i as u64))?;
                    Ok((*v, front, outcome))
                })
                .collect::<Result<Vec<_>>>()
        })??;

    let mut table = Table::new(&[
        "sweep_variable",
        "value",
        "received_power_dbm",
        "snr_rx_db",
        "ber",
        "ber_awgn",
        "errors",
        "bits",
        "symbols",
        "evm",
        "cfo_hz",
        "cfo_estimate_hz",
        "pll_bandwidth",
        "low_confidence",
        "config_hash",
    ]);
    let mut any_low = false;
    for (v, front, out) in results {
        any_low |= out.low_confidence;
        table.push_row(vec![
            cfg.sweep.variable.as_str().into(),
            v.into(),
            front.received_power_dbm().into(),
            front.snr_rx_db().into(),
            out.ber.into(),
            ber_awgn_qam(chain.order, front.thermal_only_snr())?.into(),
            out.errors.into(),
            out.bits.into(),
            out.symbols.into(),
            out.evm.into(),
            out.cfo_hz.into(),
            match out.cfo_estimate_hz {
                Some(e) => Cell::Float(e),
                None => "".into(),
            },
            match out.pll_bandwidth {
                Some(b) => Cell::Float(b),
                None => "".into(),
            },
            out.low_confidence.into(),
            hash.as_str().into(),
        ])?;
    }
    Ok(RunOutput {
        table,
        extras: Vec::new(),
        low_confidence: any_low,
    })
}

/// Empirical Kolmogorov–Smirnov statistic of `samples` against the standard
/// normal distribution.
fn ks_statistic_standard_normal(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let cdf = normal.cdf(x);
        d = d
            .max((cdf - i as f64 / n).abs())
            .max((cdf - (i as f64 + 1.0) / n).abs());
    }
    d
}

/// Conditional noise statistics per symbol-power group.
///
/// For each distinct symbol power of the configured constellation the runner
/// draws demodulated noise samples, compares their empirical variance with
/// the analytic conditional variance, tests per-quadrature normality against
/// the *predicted* Gaussian (Kolmogorov–Smirnov at the 1 % level), and fits
/// an affine law variance = a·power + b across groups. Histograms of the
/// lowest- and highest-power groups are emitted as extra tables.
pub fn run_noise_stats(cfg: &RunConfig) -> Result<RunOutput> {
    let front = cfg.build_front_end()?;
    let constellation = Constellation::new(cfg.noise_stats.order)?;
    let groups = constellation.power_groups();
    let per_group = cfg.noise_stats.samples_per_group;
    if per_group < 16 {
        return Err(Error::InvalidConfig(
            "noise_stats.samples_per_group must be at least 16".into(),
        ));
    }
    let hash = cfg.hash_hex();

    let mut table = Table::new(&[
        "group",
        "symbol_power",
        "samples",
        "measured_variance",
        "predicted_variance",
        "variance_ratio",
        "ks_statistic",
        "ks_critical_1pct",
        "ks_pass",
        "config_hash",
    ]);

    let mut powers = Vec::with_capacity(groups.len());
    let mut measured = Vec::with_capacity(groups.len());
    let mut histograms: Vec<(String, Table)> = Vec::new();

    for (g, group) in groups.iter().enumerate() {
        let mut rng = rng_for_point(cfg.run.seed, g as u64);
        let predicted = front.noise_power_conditional(group.power);
        let sigma_q = (predicted / 2.0).sqrt();

        // Cycle through the group's constellation points so the draws see
        // the actual transmitted symbols, not just their common power.
        let draws: Vec<Complex64> = (0..per_group)
            .map(|k| {
                let point = constellation.point(group.indices[k % group.indices.len()]);
                front.sample_noise(point, &mut rng)
            })
            .collect();

        let var = draws.iter().map(Complex64::norm_sqr).sum::<f64>() / per_group as f64;
        let mut normalised: Vec<f64> = draws
            .iter()
            .flat_map(|z| [z.re / sigma_q, z.im / sigma_q])
            .collect();
        let ks = ks_statistic_standard_normal(&mut normalised);
        let ks_critical = 1.62762 / (normalised.len() as f64).sqrt();

        table.push_row(vec![
            g.into(),
            group.power.into(),
            per_group.into(),
            var.into(),
            predicted.into(),
            (var / predicted).into(),
            ks.into(),
            ks_critical.into(),
            (ks < ks_critical).into(),
            hash.as_str().into(),
        ])?;
        powers.push(group.power);
        measured.push(var);

        if g == 0 || g == groups.len() - 1 {
            let name = if g == 0 { "histogram_low" } else { "histogram_high" };
            histograms.push((name.to_string(), histogram(&draws, sigma_q, cfg)?));
        }
    }

    // Affine fit of measured variance against symbol power.
    let n = powers.len() as f64;
    let mean_x = powers.iter().sum::<f64>() / n;
    let mean_y = measured.iter().sum::<f64>() / n;
    let sxx: f64 = powers.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = powers
        .iter()
        .zip(&measured)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = powers
        .iter()
        .zip(&measured)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = measured.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = 1.0 - ss_res / ss_tot;

    let split = front.noise_split();
    let mut fit = Table::new(&[
        "fitted_slope",
        "fitted_intercept",
        "r_squared",
        "predicted_slope",
        "predicted_intercept",
        "config_hash",
    ]);
    fit.push_row(vec![
        slope.into(),
        intercept.into(),
        r_squared.into(),
        split.signal_dependent.into(),
        split.signal_independent.into(),
        hash.as_str().into(),
    ])?;

    let mut extras = vec![("fit".to_string(), fit)];
    extras.extend(histograms);
    Ok(RunOutput {
        table,
        extras,
        low_confidence: false,
    })
}

/// Histogram of both quadratures of `draws` with the Gaussian expectation
/// for bins spanning ±4 standard deviations.
fn histogram(draws: &[Complex64], sigma_q: f64, cfg: &RunConfig) -> Result<Table> {
    let bins = cfg.noise_stats.histogram_bins.max(3);
    let lo = -4.0 * sigma_q;
    let width = 8.0 * sigma_q / bins as f64;
    let mut counts = vec![0u64; bins];
    let total = 2 * draws.len();
    for z in draws {
        for q in [z.re, z.im] {
            let idx = ((q - lo) / width).floor();
            if (0.0..bins as f64).contains(&idx) {
                counts[idx as usize] += 1;
            }
        }
    }
    let mut t = Table::new(&["bin_center", "count", "expected_count"]);
    for (i, &c) in counts.iter().enumerate() {
        let centre = lo + (i as f64 + 0.5) * width;
        let pdf = (-(centre * centre) / (2.0 * sigma_q * sigma_q)).exp()
            / (sigma_q * (2.0 * PI).sqrt());
        t.push_row(vec![
            centre.into(),
            c.into(),
            (total as f64 * width * pdf).into(),
        ])?;
    }
    Ok(t)
}

/// One cell of the phase-noise tolerance grid.
struct SuiteCell {
    order: usize,
    level: f64,
    setting: PhaseNoiseSetting,
}

/// Received power required to reach `target_ber`, found by bisection over
/// the configured bracket. Returns `None` when even the top of the bracket
/// cannot reach the target (an error floor above it).
fn required_power_dbm(
    front: &FrontEnd,
    chain: &ChainConfig,
    target_ber: f64,
    bracket: (f64, f64),
    iterations: usize,
    cell_seed: u64,
) -> Result<Option<f64>> {
    let ber_at = |p_dbm: f64, eval: u64| -> Result<f64> {
        let link = front.with_received_power_dbm(p_dbm)?;
        Ok(run_ber(&link, chain, child_seed(cell_seed, eval))?.ber)
    };
    let (mut lo, mut hi) = bracket;
    if ber_at(hi, 0)? > target_ber {
        return Ok(None);
    }
    for i in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if ber_at(mid, i as u64 + 1)? > target_ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(hi))
}

/// Phase-noise tolerance suite: power penalty at a target BER across a grid
/// of phase-noise severities and modulation orders.
///
/// Photonic links sweep laser linewidth; electronic links sweep the
/// oscillator white floor. The first grid entry is the penalty baseline.
pub fn run_phase_noise_suite(cfg: &RunConfig) -> Result<RunOutput> {
    let front = cfg.build_front_end()?;
    let base_chain = cfg.chain_config()?;
    let suite = &cfg.phase_suite;
    if suite.target_ber <= 0.0 || suite.target_ber >= 0.5 {
        return Err(Error::InvalidConfig(
            "phase_suite.target_ber must lie in (0, 0.5)".into(),
        ));
    }
    let photonic = matches!(front, FrontEnd::Photonics(_));
    let levels: &[f64] = if photonic {
        &suite.linewidths_hz
    } else {
        &suite.floors_db
    };
    if levels.is_empty() || suite.orders.is_empty() {
        return Err(Error::InvalidConfig(
            "phase_suite needs at least one order and one grid level".into(),
        ));
    }

    let cells: Vec<SuiteCell> = suite
        .orders
        .iter()
        .flat_map(|&order| {
            levels.iter().map(move |&level| {
                let setting = if photonic {
                    PhaseNoiseSetting::Laser {
                        linewidth_hz: level,
                        lasers: 4,
                    }
                } else {
                    PhaseNoiseSetting::Oscillator(crate::phase::RfPhaseModel::from_floor_db(
                        level, 0.0, 0.0,
                    ))
                };
                SuiteCell {
                    order,
                    level,
                    setting,
                }
            })
        })
        .collect();

    let master = cfg.run.seed;
    let bracket = (suite.power_min_dbm, suite.power_max_dbm);
    let solved: Vec<Option<f64>> = with_workers(cfg.run.workers, || {
        cells
            .par_iter()
            .enumerate()
            .map(|(i, cell)| {
                let mut chain = base_chain.clone();
                chain.order = cell.order;
                chain.phase_noise = cell.setting;
                required_power_dbm(
                    &front,
                    &chain,
                    suite.target_ber,
                    bracket,
                    suite.iterations,
                    child_seed(master, 0x5000 + i as u64),
                )
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let hash = cfg.hash_hex();
    let level_name = if photonic { "linewidth_hz" } else { "floor_db" };
    let mut table = Table::new(&[
        "order",
        level_name,
        "target_ber",
        "required_power_dbm",
        "penalty_db",
        "achievable",
        "config_hash",
    ]);
    for (i, (cell, power)) in cells.iter().zip(&solved).enumerate() {
        // The first level of each order row-group is that order's baseline.
        let baseline = solved[i - i % levels.len()];
        let (required, penalty, achievable) = match (power, baseline) {
            (Some(p), Some(b)) => (Cell::Float(*p), Cell::Float(p - b), true),
            (Some(p), None) => (Cell::Float(*p), "".into(), true),
            (None, _) => ("".into(), "".into(), false),
        };
        table.push_row(vec![
            cell.order.into(),
            cell.level.into(),
            suite.target_ber.into(),
            required,
            penalty,
            achievable.into(),
            hash.as_str().into(),
        ])?;
    }
    Ok(RunOutput::table_only(table))
}

/// Synthesise the configured phase-noise trace and measure its PSD, next to
/// the analytic model level at each frequency.
pub fn run_phase_psd(cfg: &RunConfig) -> Result<RunOutput> {
    let psd_cfg = &cfg.psd;
    let dt = 1.0 / psd_cfg.sample_rate_hz;
    if psd_cfg.sample_rate_hz <= 0.0 {
        return Err(Error::InvalidConfig("psd.sample_rate_hz must be positive".into()));
    }
    let mut trace = vec![0.0; psd_cfg.samples];
    let mut rng = rng_for_point(cfg.run.seed, 0);

    enum Model {
        Laser { combined_linewidth_hz: f64 },
        Oscillator(crate::phase::RfPhaseModel),
    }
    let model = match cfg.phase.setting()? {
        PhaseNoiseSetting::Laser {
            linewidth_hz,
            lasers,
        } => {
            let mut gen = WienerPhase::from_lasers(linewidth_hz, lasers, dt);
            gen.fill(&mut trace, &mut rng);
            Model::Laser {
                combined_linewidth_hz: linewidth_hz * lasers as f64,
            }
        }
        PhaseNoiseSetting::Oscillator(m) => {
            let mut gen = RfPhaseGenerator::new(m, dt, cfg.phase.fir_taps)?;
            gen.fill(&mut trace, &mut rng);
            Model::Oscillator(m)
        }
        PhaseNoiseSetting::None => {
            return Err(Error::InvalidConfig(
                "psd needs phase.model = \"laser\" or \"oscillator\"".into(),
            ))
        }
    };

    let estimate = welch_psd(&trace, psd_cfg.sample_rate_hz, psd_cfg.segment)?;
    let hash = cfg.hash_hex();
    let mut table = Table::new(&[
        "frequency_hz",
        "psd",
        "psd_db",
        "model_db",
        "config_hash",
    ]);
    for (f, p) in estimate
        .frequencies_hz
        .iter()
        .zip(&estimate.psd)
        .skip(1)
    {
        let model_level = match &model {
            Model::Laser {
                combined_linewidth_hz,
            } => combined_linewidth_hz / (2.0 * PI * f * f),
            Model::Oscillator(m) => m.psd(*f),
        };
        table.push_row(vec![
            (*f).into(),
            (*p).into(),
            (10.0 * p.log10()).into(),
            (10.0 * model_level.log10()).into(),
            hash.as_str().into(),
        ])?;
    }
    Ok(RunOutput::table_only(table))
}

/// A frozen reference scenario for validation.
struct Scenario {
    name: &'static str,
    reference_snr_db: f64,
    config: RunConfig,
}

/// The two frozen laboratory-system scenarios.
fn scenario(name: &str) -> Result<Scenario> {
    match name {
        "photonic-lab-link" => {
            let mut cfg = RunConfig::default();
            cfg.frontend.kind = "photonics".into();
            cfg.signal.order = 16;
            cfg.signal.symbol_rate_hz = 20e9;
            cfg.signal.rolloff = 0.35;
            cfg.photonics.input_power_dbm = -7.0; // two lasers at −10 dBm each
            cfg.photonics.gain_mode = "fixed-gain".into();
            cfg.photonics.gain_db = 27.0;
            cfg.photonics.rin_db_hz = -145.0;
            cfg.photonics.n_sp = 1.0;
            cfg.photonics.optical_bandwidth_hz = 27e9; // filter matched to the signal
            cfg.photonics.lo_power_dbm = 10.0 * 300f64.log10(); // 150 mW per LO laser
            cfg.photonics.electrical_bandwidth_hz = 27e9;
            cfg.photonics.noise_figure_db = 8.0;
            cfg.photonics.amplifier_gain_db = 10.0;
            cfg.channel.mode = "budget".into();
            cfg.channel.budget = crate::budget::ChannelParams {
                carrier_frequency_hz: 300e9,
                distance_m: 214.0,
                tx_gain_dbi: 60.0,
                rx_gain_dbi: 60.0,
                absorption_per_m: 0.001,
                beam_divergence_rad: 1e-3,
                pointing_offset_m: 99.6e-3,
            };
            Ok(Scenario {
                name: "photonic-lab-link",
                reference_snr_db: 20.6,
                config: cfg,
            })
        }
        "electronic-lab-link" => {
            let mut cfg = RunConfig::default();
            cfg.frontend.kind = "electronics".into();
            cfg.signal.order = 16;
            cfg.signal.symbol_rate_hz = 20e9;
            cfg.electronics.signal_power_dbm = 5.0;
            cfg.electronics.lo_power_dbm = 5.0;
            cfg.electronics.tx_floor_dbc_hz = -147.0;
            cfg.electronics.rx_floor_dbc_hz = -147.0;
            cfg.electronics.oscillator_bandwidth_hz = 5.5e9;
            cfg.electronics.electrical_bandwidth_hz = 24e9;
            cfg.electronics.tx_amplifier_gain_db = 21.0;
            cfg.electronics.rx_amplifier_gain_db = 21.0;
            cfg.channel.mode = "budget".into();
            cfg.channel.budget = crate::budget::ChannelParams {
                carrier_frequency_hz: 300e9,
                distance_m: 2.22,
                tx_gain_dbi: 50.0,
                rx_gain_dbi: 50.0,
                absorption_per_m: 0.058,
                beam_divergence_rad: 1e-3,
                pointing_offset_m: 0.0,
            };
            Ok(Scenario {
                name: "electronic-lab-link",
                reference_snr_db: 21.35,
                config: cfg,
            })
        }
        other => Err(Error::InvalidConfig(format!(
            "validation.scenario must be \"photonic-lab-link\" or \"electronic-lab-link\", got {other:?}"
        ))),
    }
}

/// Compare the analytic receiver SNR of a frozen scenario against its
/// reference value.
pub fn run_validation(cfg: &RunConfig) -> Result<RunOutput> {
    let sc = scenario(&cfg.validation.scenario)?;
    let front = sc.config.build_front_end()?;
    let predicted = front.snr_rx_db();
    let delta = predicted - sc.reference_snr_db;
    let mut table = Table::new(&[
        "scenario",
        "snr_tx_db",
        "predicted_snr_db",
        "reference_snr_db",
        "delta_db",
        "within_tolerance",
        "alpha",
        "received_power_dbm",
        "config_hash",
    ]);
    table.push_row(vec![
        sc.name.into(),
        (10.0 * front.snr_tx().log10()).into(),
        predicted.into(),
        sc.reference_snr_db.into(),
        delta.into(),
        (delta.abs() <= 0.3).into(),
        front.alpha().into(),
        front.received_power_dbm().into(),
        cfg.hash_hex().into(),
    ])?;
    Ok(RunOutput::table_only(table))
}

/// Itemised link budget of the configured geometry, plus the operating
/// point it implies for the configured front end.
pub fn run_budget(cfg: &RunConfig) -> Result<RunOutput> {
    let budget: LinkBudget = cfg.channel.budget.budget()?;
    let mut point = cfg.clone();
    point.channel.mode = "budget".into();
    let front = point.build_front_end()?;

    let mut table = Table::new(&["quantity", "value"]);
    let rows: [(&str, f64); 9] = [
        ("free_space_loss_db", budget.free_space_db),
        ("absorption_loss_db", budget.absorption_db),
        ("pointing_loss_db", budget.pointing_db),
        ("antenna_gain_db", budget.antenna_gain_db),
        ("total_loss_db", budget.total_db),
        ("alpha", budget.alpha),
        ("received_power_dbm", front.received_power_dbm()),
        ("snr_rx_db", front.snr_rx_db()),
        ("snr_tx_db", 10.0 * front.snr_tx().log10()),
    ];
    for (name, value) in rows {
        table.push_row(vec![name.into(), value.into()])?;
    }
    Ok(RunOutput::table_only(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_sweep_covers_range_and_flags_infeasible_points() {
        let mut cfg = RunConfig::default();
        cfg.photonics.gain_mode = "fixed-output".into();
        cfg.photonics.output_power_dbm = 19.26;
        cfg.sweep.variable = "input_power_dbm".into();
        cfg.sweep.start = 5.0;
        cfg.sweep.stop = 25.0;
        cfg.sweep.points = 5;
        let out = run_snr_sweep(&cfg).unwrap();
        assert_eq!(out.table.len(), 5);
        let feasible = out.table.column("feasible").unwrap();
        // 19.26 dBm output cannot amplify a 20 or 25 dBm input.
        assert_eq!(feasible[0], 1.0);
        assert_eq!(feasible[3], 0.0);
        assert_eq!(feasible[4], 0.0);
        assert!(!out.table.has_nan());
    }

    #[test]
    fn ber_sweep_is_deterministic_across_worker_counts() {
        let mut cfg = RunConfig::default();
        cfg.signal.order = 4;
        cfg.run.symbols = 4_000;
        cfg.run.block_symbols = 2_000;
        cfg.run.target_errors = 50;
        cfg.sweep.start = -48.0;
        cfg.sweep.stop = -44.0;
        cfg.sweep.points = 3;
        cfg.pll.mode = "off".into();
        let csv_one = {
            let mut c = cfg.clone();
            c.run.workers = 1;
            run_ber_sweep(&c).unwrap().table.to_csv_string().unwrap()
        };
        let csv_four = {
            let mut c = cfg.clone();
            c.run.workers = 4;
            run_ber_sweep(&c).unwrap().table.to_csv_string().unwrap()
        };
        assert_eq!(csv_one, csv_four);
    }

    #[test]
    fn noise_stats_groups_match_constellation() {
        let mut cfg = RunConfig::default();
        cfg.noise_stats.order = 16;
        cfg.noise_stats.samples_per_group = 2_000;
        cfg.channel.mode = "received-power".into();
        cfg.channel.received_power_dbm = -25.0;
        let out = run_noise_stats(&cfg).unwrap();
        // 16-QAM has three distinct symbol powers.
        assert_eq!(out.table.len(), 3);
        let ratio = out.table.column("variance_ratio").unwrap();
        for r in ratio {
            assert!((r - 1.0).abs() < 0.15, "variance ratio {r}");
        }
        assert_eq!(out.extras.len(), 3); // fit + two histograms
        assert_eq!(out.extras[0].0, "fit");
    }

    #[test]
    fn validation_scenarios_hit_reference_values() {
        let mut cfg = RunConfig::default();
        cfg.validation.scenario = "photonic-lab-link".into();
        let out = run_validation(&cfg).unwrap();
        let delta = out.table.column("delta_db").unwrap()[0];
        assert!(delta.abs() < 0.3, "photonic delta {delta}");

        cfg.validation.scenario = "electronic-lab-link".into();
        let out = run_validation(&cfg).unwrap();
        let delta = out.table.column("delta_db").unwrap()[0];
        assert!(delta.abs() < 0.3, "electronic delta {delta}");

        cfg.validation.scenario = "bogus".into();
        assert!(run_validation(&cfg).is_err());
    }

    #[test]
    fn budget_runner_itemises_reference_geometry() {
        let cfg = RunConfig::default();
        let out = run_budget(&cfg).unwrap();
        let names: Vec<String> = out
            .table
            .rows()
            .iter()
            .map(|r| r[0].render())
            .collect();
        assert!(names.contains(&"free_space_loss_db".to_string()));
        let values = out.table.column("value").unwrap();
        let alpha_idx = names.iter().position(|n| n == "alpha").unwrap();
        assert!((values[alpha_idx] - 0.72).abs() < 0.01);
    }

    #[test]
    fn psd_runner_matches_model_floor() {
        let mut cfg = RunConfig::default();
        cfg.phase.model = "oscillator".into();
        cfg.phase.k0_db = -120.0;
        cfg.phase.k2 = 0.0;
        cfg.phase.k3 = 0.0;
        cfg.psd.samples = 1 << 17;
        cfg.psd.segment = 1 << 12;
        let out = run_phase_psd(&cfg).unwrap();
        let freq = out.table.column("frequency_hz").unwrap();
        let db = out.table.column("psd_db").unwrap();
        // Average the measured floor over the top decade.
        let (mut acc, mut count) = (0.0, 0);
        for (f, v) in freq.iter().zip(&db) {
            if *f > 1e6 {
                acc += v;
                count += 1;
            }
        }
        let mean = acc / count as f64;
        assert!((mean + 120.0).abs() < 1.0, "floor {mean} dB");
    }
}
