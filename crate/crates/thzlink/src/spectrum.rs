//! Welch power spectral density estimation.
//!
//! Averaged modified periodograms with a periodic Hann window and 50 %
//! segment overlap. The estimate is reported as a **two-sided** density
//! (variance σ² of a real white sequence sampled at `f_s` appears as a flat
//! level σ²/f_s), evaluated on the non-negative frequency bins
//! `k·f_s/N, k = 0..N/2`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Welch PSD estimate of a real-valued sequence.
#[derive(Debug, Clone)]
pub struct PsdEstimate {
    /// Frequency grid, Hz (0 to f_s/2 inclusive).
    pub frequencies_hz: Vec<f64>,
    /// Two-sided PSD values on that grid, units²/Hz.
    pub psd: Vec<f64>,
    /// Number of averaged segments.
    pub segments: usize,
}

impl PsdEstimate {
    /// PSD linearly interpolated at `f` Hz.
    pub fn at(&self, f: f64) -> Option<f64> {
        let fs2 = *self.frequencies_hz.last()?;
        if !(0.0..=fs2).contains(&f) {
            return None;
        }
        let df = self.frequencies_hz.get(1).copied().unwrap_or(fs2);
        let idx = (f / df).floor() as usize;
        if idx + 1 >= self.frequencies_hz.len() {
            return self.psd.last().copied();
        }
        let frac = f / df - idx as f64;
        Some(self.psd[idx] * (1.0 - frac) + self.psd[idx + 1] * frac)
    }

    /// PSD at `f`, in dB (10·log₁₀).
    pub fn at_db(&self, f: f64) -> Option<f64> {
        self.at(f).map(|v| 10.0 * v.log10())
    }
}

/// Estimate the two-sided PSD of `x` sampled at `sample_rate_hz`, using
/// Hann-windowed segments of length `segment_len` with 50 % overlap.
pub fn welch_psd(x: &[f64], sample_rate_hz: f64, segment_len: usize) -> Result<PsdEstimate> {
    if segment_len < 8 || segment_len % 2 != 0 {
        return Err(Error::invalid(
            "segment_len",
            "segment length must be even and at least 8",
            segment_len,
        ));
    }
    if x.len() < segment_len {
        return Err(Error::invalid(
            "input",
            "input shorter than one segment",
            format!("{} < {}", x.len(), segment_len),
        ));
    }
    if sample_rate_hz <= 0.0 {
        return Err(Error::invalid(
            "sample_rate_hz",
            "must be positive",
            sample_rate_hz,
        ));
    }

    // Periodic Hann window and its energy.
    let window: Vec<f64> = (0..segment_len)
        .map(|n| 0.5 * (1.0 - (2.0 * PI * n as f64 / segment_len as f64).cos()))
        .collect();
    let window_energy: f64 = window.iter().map(|w| w * w).sum();

    let hop = segment_len / 2;
    let n_segments = (x.len() - segment_len) / hop + 1;

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(segment_len);

    let n_bins = segment_len / 2 + 1;
    let mut acc = vec![0.0; n_bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); segment_len];
    for s in 0..n_segments {
        let start = s * hop;
        for (b, (&v, &w)) in buf
            .iter_mut()
            .zip(x[start..start + segment_len].iter().zip(&window))
        {
            *b = Complex64::new(v * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(buf.iter().take(n_bins)) {
            *a += b.norm_sqr();
        }
    }

    let scale = 1.0 / (n_segments as f64 * sample_rate_hz * window_energy);
    let psd: Vec<f64> = acc.into_iter().map(|a| a * scale).collect();
    let df = sample_rate_hz / segment_len as f64;
    let frequencies_hz = (0..n_bins).map(|k| k as f64 * df).collect();
    Ok(PsdEstimate {
        frequencies_hz,
        psd,
        segments: n_segments,
    })
}
