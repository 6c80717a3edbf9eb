//! Physical constants and decibel conversions used throughout the crate.

/// Speed of light in vacuum, m/s (exact, SI 2019).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Planck constant, J·s (exact, SI 2019).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Boltzmann constant, J/K (exact, SI 2019).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Elementary charge, C (exact, SI 2019).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Convert a power ratio to decibels: `10·log10(x)`.
#[inline]
pub fn db_from_ratio(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Convert decibels to a power ratio: `10^(x/10)`.
#[inline]
pub fn ratio_from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert watts to dBm.
#[inline]
pub fn dbm_from_watt(watts: f64) -> f64 {
    10.0 * (watts / 1e-3).log10()
}

/// Convert dBm to watts.
#[inline]
pub fn watt_from_dbm(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}
