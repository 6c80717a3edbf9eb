//! Elementary noise-power formulas shared by the photonic and electronic
//! front-end models. All powers are in watts into the detector / demodulator.

use crate::units::{BOLTZMANN, ELEMENTARY_CHARGE, PLANCK};

/// Amplified-spontaneous-emission power of an optical amplifier over an
/// optical bandwidth `b_opt`:
///
/// ```text
/// σ²_ASE = 2·n_sp·(G − 1)·h·ν·B_opt
/// ```
///
/// with gain `G` (linear), spontaneous-emission factor `n_sp` (1 for an
/// ideal amplifier), and optical carrier frequency `nu`. For G ≫ 1 this is
/// often quoted as 2·G·h·ν·B_opt.
pub fn ase_power(gain: f64, n_sp: f64, nu_hz: f64, b_opt_hz: f64) -> f64 {
    2.0 * n_sp * (gain - 1.0).max(0.0) * PLANCK * nu_hz * b_opt_hz
}

/// Relative-intensity-noise power contributed by one laser of pre-amplifier
/// mean power `laser_power` passing through gain `G`:
///
/// ```text
/// σ²_RIN(one laser) = G · P̄² · 10^(RIN/10) · B_opt
/// ```
///
/// `rin_db_hz` is the RIN level in dB/Hz.
pub fn rin_power(gain: f64, laser_power_w: f64, rin_db_hz: f64, b_opt_hz: f64) -> f64 {
    gain * laser_power_w * laser_power_w * 10f64.powf(rin_db_hz / 10.0) * b_opt_hz
}

/// Shot-noise power of a photodiode with responsivity `R` receiving mean
/// optical power `mean_power` over electrical bandwidth `b`:
///
/// ```text
/// σ²_sh = 2·q·R·P̄_in·B
/// ```
///
/// For a two-branch photomixer the incident mean power is
/// `P̄_in = (P_a + P_b + σ²_opt)/2`.
pub fn shot_power(responsivity: f64, mean_power_w: f64, b_hz: f64) -> f64 {
    2.0 * ELEMENTARY_CHARGE * responsivity * mean_power_w * b_hz
}

/// Thermal noise power referred through the receive amplifier:
///
/// ```text
/// σ²_th = k·T·B · F · G_e
/// ```
///
/// with noise figure `F` and amplifier gain `G_e` given in dB.
pub fn thermal_power(temperature_k: f64, b_hz: f64, noise_figure_db: f64, gain_db: f64) -> f64 {
    BOLTZMANN
        * temperature_k
        * b_hz
        * 10f64.powf(noise_figure_db / 10.0)
        * 10f64.powf(gain_db / 10.0)
}

/// Integrated oscillator noise power (relative to carrier) for a flat
/// single-sideband phase-noise floor `floor_dbc_hz` across an oscillator
/// noise bandwidth `b_osc_hz`:
///
/// ```text
/// σ² = sideband_factor · 10^(floor/10) · B_osc
/// ```
///
/// `sideband_factor` = 2 counts both sidebands of the quoted SSB level.
pub fn oscillator_floor_power(floor_dbc_hz: f64, b_osc_hz: f64, sideband_factor: f64) -> f64 {
    sideband_factor * 10f64.powf(floor_dbc_hz / 10.0) * b_osc_hz
}

/// Scale an oscillator noise variance through an ideal ×N frequency
/// multiplier: phase deviations multiply by N, so small-angle noise power
/// multiplies by N².
pub fn multiply_carrier(variance: f64, factor: u32) -> f64 {
    variance * (factor as f64) * (factor as f64)
}
