//! Blind carrier-frequency-offset estimation for square QAM.
//!
//! Raising the received waveform to the 4th power collapses the (Gray-coded,
//! 4-fold rotationally symmetric) modulation and leaves a spectral line at
//! four times the frequency offset. The estimator locates that line with an
//! FFT and refines it by parabolic interpolation of the log-magnitude around
//! the peak bin.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Estimate the carrier frequency offset Δf of `samples` (sampled at
/// `sample_rate_hz`), following the rotation convention `x·e^{−j2πΔf·t}`
/// used by the channel model. Up to `max_fft` samples are used (rounded down
/// to a power of two). The unambiguous range is |Δf| < f_s/8.
pub fn estimate_cfo_pow4(
    samples: &[Complex64],
    sample_rate_hz: f64,
    max_fft: usize,
) -> Result<f64> {
    if sample_rate_hz <= 0.0 {
        return Err(Error::invalid(
            "sample_rate_hz",
            "must be positive",
            sample_rate_hz,
        ));
    }
    let n = samples.len().min(max_fft).next_power_of_two() / 2 * 2;
    let n = if n > samples.len().min(max_fft) { n / 2 } else { n };
    if n < 16 {
        return Err(Error::invalid(
            "samples",
            "need at least 16 samples for the 4th-power estimator",
            samples.len(),
        ));
    }

    let mut buf: Vec<Complex64> = samples[..n].iter().map(|s| s.powu(4)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);

    let mag: Vec<f64> = buf.iter().map(|c| c.norm_sqr()).collect();
    let (k_max, _) = mag
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");

    // Parabolic refinement on log-magnitude, circular neighbors.
    let prev = mag[(k_max + n - 1) % n].max(f64::MIN_POSITIVE).ln();
    let here = mag[k_max].max(f64::MIN_POSITIVE).ln();
    let next = mag[(k_max + 1) % n].max(f64::MIN_POSITIVE).ln();
    let denom = prev - 2.0 * here + next;
    let delta = if denom.abs() > 1e-300 {
        (0.5 * (prev - next) / denom).clamp(-0.5, 0.5)
    } else {
        0.0
    };

    // Map the bin index to a signed frequency.
    let mut k = k_max as f64 + delta;
    if k > n as f64 / 2.0 {
        k -= n as f64;
    }
    let f_line = k * sample_rate_hz / n as f64;
    // The channel rotates by e^{−j2πΔf·t}, so the 4th-power line sits at −4Δf.
    Ok(-f_line / 4.0)
}

/// Remove an estimated frequency offset: multiplies by `e^{+j2πΔf·t_n}` with
/// `t_n = (start_index + n)/sample_rate`, the inverse of the channel's
/// rotation convention.
pub fn derotate(wave: &mut [Complex64], cfo_hz: f64, sample_rate_hz: f64, start_index: u64) {
    if cfo_hz == 0.0 {
        return;
    }
    let step = 2.0 * PI * cfo_hz / sample_rate_hz;
    for (n, w) in wave.iter_mut().enumerate() {
        let t = start_index as f64 + n as f64;
        *w *= Complex64::from_polar(1.0, step * t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::rotate_by_cfo;
    use crate::rng::{complex_gaussian, rng_from_seed};
    use crate::signal::Constellation;

    fn qam_tone(order: usize, n: usize, seed: u64) -> Vec<Complex64> {
        let c = Constellation::new(order).unwrap();
        let mut rng = rng_from_seed(seed);
        use rand::Rng;
        (0..n)
            .map(|_| c.points()[rng.gen_range(0..order)])
            .collect()
    }

    #[test]
    fn recovers_offset_on_qpsk() {
        let mut wave = qam_tone(4, 1 << 14, 29);
        let fs = 128e9;
        let cfo = 1e9;
        rotate_by_cfo(&mut wave, cfo, fs, 0);
        let est = estimate_cfo_pow4(&wave, fs, 1 << 14).unwrap();
        assert!(
            (est - cfo).abs() < 2e6,
            "estimated {est:e} for true {cfo:e}"
        );
    }

    #[test]
    fn recovers_negative_offset_on_16qam_with_noise() {
        let fs = 128e9;
        let cfo = -0.733e9;
        let mut wave = qam_tone(16, 1 << 15, 31);
        rotate_by_cfo(&mut wave, cfo, fs, 0);
        let mut rng = rng_from_seed(37);
        for w in wave.iter_mut() {
            *w += complex_gaussian(&mut rng, 0.05);
        }
        let est = estimate_cfo_pow4(&wave, fs, 1 << 15).unwrap();
        assert!(
            (est - cfo).abs() < 2e6,
            "estimated {est:e} for true {cfo:e}"
        );
    }

    #[test]
    fn derotation_inverts_the_channel_rotation() {
        let mut wave = qam_tone(4, 4096, 41);
        let reference = wave.clone();
        let fs = 128e9;
        rotate_by_cfo(&mut wave, 0.4e9, fs, 100);
        derotate(&mut wave, 0.4e9, fs, 100);
        for (w, r) in wave.iter().zip(&reference) {
            assert!((w - r).norm() < 1e-10);
        }
    }

    #[test]
    fn short_input_rejected() {
        let wave = vec![Complex64::new(1.0, 0.0); 8];
        assert!(estimate_cfo_pow4(&wave, 1e9, 1 << 10).is_err());
    }
}
