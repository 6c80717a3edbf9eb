//! Root-raised-cosine pulse shaping and matched filtering.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A root-raised-cosine FIR filter used both as the transmit pulse shaper and
/// as its own matched filter.
///
/// The impulse response in symbol time `t` (rolloff `β`) is
///
/// ```text
/// h(0)        = 1 + β(4/π − 1)
/// h(±1/(4β))  = (β/√2)·[(1 + 2/π)·sin(π/(4β)) + (1 − 2/π)·cos(π/(4β))]
/// h(t)        = [sin(πt(1−β)) + 4βt·cos(πt(1+β))] / [πt·(1 − (4βt)²)]
/// ```
///
/// sampled at `sps` points per symbol over `span` symbols (an even span keeps
/// the end-to-end delay at an integer number of symbols), then normalized so
/// the tap energy equals `sps`:
///
/// * shaping a unit-power symbol stream yields a unit-power waveform, and
/// * the shaper → matched-filter cascade has exactly unit gain at the symbol
///   instants, while white per-sample noise of variance σ² lands at per-symbol
///   variance σ²/sps after matched filtering (the filter's noise bandwidth is
///   1/sps of the sampling rate).
///
/// # Example
///
/// ```
/// use thzlink::signal::RrcFilter;
///
/// let f = RrcFilter::new(0.2, 4, 32).unwrap();
/// assert_eq!(f.taps().len(), 129);
/// let energy: f64 = f.taps().iter().map(|t| t * t).sum();
/// assert!((energy - 4.0).abs() < 1e-12);
/// ```
#[derive(Debug, Clone)]
pub struct RrcFilter {
    taps: Vec<f64>,
    rolloff: f64,
    sps: usize,
    span: usize,
}

impl RrcFilter {
    /// Build a root-raised-cosine filter.
    ///
    /// * `rolloff` — excess-bandwidth factor β ∈ (0, 1].
    /// * `sps` — samples per symbol (≥ 1).
    /// * `span` — filter length in symbols (even, ≥ 2); the filter holds
    ///   `span·sps + 1` taps.
    pub fn new(rolloff: f64, sps: usize, span: usize) -> Result<Self> {
        if !(rolloff > 0.0 && rolloff <= 1.0) {
            return Err(Error::invalid("rolloff", "must lie in (0, 1]", rolloff));
        }
        if sps == 0 {
            return Err(Error::invalid("sps", "must be at least 1", sps));
        }
        if span < 2 || span % 2 != 0 {
            return Err(Error::invalid("span", "must be an even number of symbols >= 2", span));
        }

        let half = (span * sps / 2) as isize;
        let mut taps: Vec<f64> = (-half..=half)
            .map(|k| Self::tap_at(k as f64 / sps as f64, rolloff))
            .collect();
        let energy: f64 = taps.iter().map(|t| t * t).sum();
        let norm = (sps as f64 / energy).sqrt();
        for t in &mut taps {
            *t *= norm;
        }

        Ok(Self {
            taps,
            rolloff,
            sps,
            span,
        })
    }

    /// Unnormalized impulse response at symbol-time offset `t`.
    fn tap_at(t: f64, beta: f64) -> f64 {
        use std::f64::consts::PI;
        let singular = 1.0 / (4.0 * beta);
        if t == 0.0 {
            1.0 + beta * (4.0 / PI - 1.0)
        } else if (t.abs() - singular).abs() < 1e-9 {
            let arg = PI / (4.0 * beta);
            (beta / 2f64.sqrt())
                * ((1.0 + 2.0 / PI) * arg.sin() + (1.0 - 2.0 / PI) * arg.cos())
        } else {
            let num = (PI * t * (1.0 - beta)).sin() + 4.0 * beta * t * (PI * t * (1.0 + beta)).cos();
            let den = PI * t * (1.0 - (4.0 * beta * t).powi(2));
            num / den
        }
    }

    /// The normalized taps (energy = `sps`).
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Samples per symbol.
    pub fn sps(&self) -> usize {
        self.sps
    }

    /// Span in symbols.
    pub fn span(&self) -> usize {
        self.span
    }

    /// Rolloff factor β.
    pub fn rolloff(&self) -> f64 {
        self.rolloff
    }

    /// One-sided occupied bandwidth of the shaped signal at symbol rate
    /// `symbol_rate`: (1 + β)·R_s.
    pub fn occupied_bandwidth(&self, symbol_rate: f64) -> f64 {
        (1.0 + self.rolloff) * symbol_rate
    }

    /// Upsample a symbol stream by `sps` and convolve with the pulse.
    ///
    /// Output length is `symbols.len()·sps + span·sps` (full convolution);
    /// the n-th symbol's pulse peaks at output index `span·sps/2 + n·sps`.
    pub fn pulse_shape(&self, symbols: &[Complex64]) -> Vec<Complex64> {
        let n_out = symbols.len() * self.sps + self.span * self.sps;
        let mut out = vec![Complex64::new(0.0, 0.0); n_out];
        for (i, &s) in symbols.iter().enumerate() {
            if s.re == 0.0 && s.im == 0.0 {
                continue;
            }
            let base = i * self.sps;
            for (k, &t) in self.taps.iter().enumerate() {
                out[base + k] += s * t;
            }
        }
        out
    }

    /// Convolve a received waveform with the matched filter (taps scaled by
    /// 1/sps so the shaper→matched cascade has unit symbol gain) and sample
    /// at the symbol instants.
    ///
    /// `samples` must be the output of [`Self::pulse_shape`] (possibly with
    /// impairments applied); `n_symbols` symbols are extracted starting at
    /// the cascade group delay of `span·sps` samples.
    pub fn matched_filter_and_decimate(
        &self,
        samples: &[Complex64],
        n_symbols: usize,
    ) -> Result<Vec<Complex64>> {
        let delay = self.span * self.sps;
        let needed = delay + (n_symbols - 1) * self.sps + 1;
        if samples.len() + self.taps.len() - 1 < needed {
            return Err(Error::LengthMismatch(format!(
                "waveform of {} samples cannot yield {} symbols",
                samples.len(),
                n_symbols
            )));
        }
        let inv_sps = (self.sps as f64).recip();
        let out = (0..n_symbols)
            .map(|n| {
                // Full-convolution sample at index `delay + n·sps`:
                // y[m] = Σ_k h[k]·x[m − k].
                let m = delay + n * self.sps;
                let mut acc = Complex64::new(0.0, 0.0);
                let k_lo = (m + 1).saturating_sub(samples.len());
                let k_hi = m.min(self.taps.len() - 1);
                for k in k_lo..=k_hi {
                    acc += samples[m - k] * self.taps[k];
                }
                acc * inv_sps
            })
            .collect();
        Ok(out)
    }
}
