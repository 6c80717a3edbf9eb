//! Phase-noise processes and carrier rotation.
//!
//! Two families of carrier phase noise are modeled:
//!
//! * **Laser phase noise** — a Wiener process. Each free-running laser of
//!   linewidth Δν contributes independent Gaussian phase increments of
//!   variance 2πΔν·τ per sample interval τ; the increments of all lasers in
//!   the chain add, so `n` lasers of equal linewidth give increment variance
//!   `n·2πΔν·τ`.
//!
//! * **Multiplied-oscillator phase noise** — a two-sided phase PSD
//!   `S_φ(f) = K₀ + K₂/f² + K₃/f³` (rad²/Hz). Each slope is synthesized from
//!   white Gaussian innovations: `K₀` directly per sample, `K₂/f²` by an
//!   exact running accumulator (a discrete Wiener process whose PSD
//!   `σ²_w·τ/(4sin²(πfτ))` matches `K₂/f²` to well under 0.1 dB over the
//!   band of interest), and `K₃/f³` by a fractional-integrator FIR of order
//!   3/2 whose taps follow the binomial recursion
//!   `h[0] = 1, h[k] = (a/2 + k − 1)·h[k−1]/k` with `a = 3`.
//!
//! Innovation variances per sample interval τ:
//!
//! ```text
//! σ²_w0 = K₀/τ,    σ²_w2 = 4K₂τπ²,    σ²_w3 = 8K₃τ²π³.
//! ```
//!
//! Generators are streaming: successive [`RfPhaseGenerator::fill`] calls
//! continue the same process (accumulator state and FIR history carry over),
//! and the FIR history is primed with stationary innovations so no warm-up
//! transient leaks into the output.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Streaming Wiener phase process.
#[derive(Debug, Clone)]
pub struct WienerPhase {
    sigma_inc: f64,
    state: f64,
}

impl WienerPhase {
    /// Process with per-sample increment variance `2π·combined_linewidth·dt`.
    pub fn new(combined_linewidth_hz: f64, dt: f64) -> Self {
        Self {
            sigma_inc: (2.0 * PI * combined_linewidth_hz * dt).max(0.0).sqrt(),
            state: 0.0,
        }
    }

    /// Process for `n_lasers` independent lasers of equal linewidth.
    pub fn from_lasers(linewidth_hz: f64, n_lasers: usize, dt: f64) -> Self {
        Self::new(linewidth_hz * n_lasers as f64, dt)
    }

    /// Per-sample increment variance.
    pub fn increment_variance(&self) -> f64 {
        self.sigma_inc * self.sigma_inc
    }

    /// Advance one sample and return the accumulated phase.
    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        let w: f64 = StandardNormal.sample(rng);
        self.state += self.sigma_inc * w;
        self.state
    }

    /// Fill `out` with consecutive phase samples.
    pub fn fill<R: Rng + ?Sized>(&mut self, out: &mut [f64], rng: &mut R) {
        for v in out.iter_mut() {
            *v = self.next(rng);
        }
    }
}

/// Fractional-integrator FIR coefficients of order `a/2`:
/// `h[0] = 1, h[k] = (a/2 + k − 1)·h[k−1]/k`.
pub fn fractional_integrator_taps(a: f64, len: usize) -> Vec<f64> {
    let mut taps = Vec::with_capacity(len);
    if len == 0 {
        return taps;
    }
    taps.push(1.0);
    let half = a / 2.0;
    for k in 1..len {
        let prev = taps[k - 1];
        taps.push(prev * (half + k as f64 - 1.0) / k as f64);
    }
    taps
}

/// Two-sided oscillator phase PSD `S_φ(f) = K₀ + K₂/f² + K₃/f³`, all
/// coefficients in linear units (rad²/Hz at the respective slope).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfPhaseModel {
    /// White floor, rad²/Hz.
    pub k0: f64,
    /// Coefficient of the f⁻² slope.
    pub k2: f64,
    /// Coefficient of the f⁻³ slope.
    pub k3: f64,
}

impl RfPhaseModel {
    /// Model with the white floor given in dB (10·log₁₀ K₀).
    pub fn from_floor_db(k0_db: f64, k2: f64, k3: f64) -> Self {
        Self {
            k0: 10f64.powf(k0_db / 10.0),
            k2,
            k3,
        }
    }

    /// A silent model (no phase noise).
    pub fn quiet() -> Self {
        Self {
            k0: 0.0,
            k2: 0.0,
            k3: 0.0,
        }
    }

    /// True if all coefficients are zero.
    pub fn is_quiet(&self) -> bool {
        self.k0 == 0.0 && self.k2 == 0.0 && self.k3 == 0.0
    }

    /// Two-sided model PSD at `f` Hz.
    pub fn psd(&self, f: f64) -> f64 {
        self.k0 + self.k2 / (f * f) + self.k3 / (f * f * f)
    }

    /// Single-sideband representation L(f) = S_φ(f)/2, in dBc/Hz.
    pub fn ssb_dbc_hz(&self, f: f64) -> f64 {
        10.0 * (self.psd(f) / 2.0).log10()
    }
}

/// Streaming synthesizer for [`RfPhaseModel`] phase trajectories.
#[derive(Clone)]
pub struct RfPhaseGenerator {
    dt: f64,
    sigma_w0: f64,
    sigma_w2: f64,
    accumulator: f64,
    sigma_w3: f64,
    fir: Option<FirConvolver>,
    primed: bool,
}

impl std::fmt::Debug for RfPhaseGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RfPhaseGenerator")
            .field("dt", &self.dt)
            .field("sigma_w0", &self.sigma_w0)
            .field("sigma_w2", &self.sigma_w2)
            .field("sigma_w3", &self.sigma_w3)
            .field("fir_taps", &self.fir.as_ref().map(|f| f.n_taps))
            .finish()
    }
}

impl RfPhaseGenerator {
    /// Create a generator at sample interval `dt` seconds; `fir_taps` sets
    /// the length of the f⁻³ synthesis filter (longer extends the faithful
    /// low-frequency range, which reaches down to roughly `1/(fir_taps·dt)`).
    pub fn new(model: RfPhaseModel, dt: f64, fir_taps: usize) -> Result<Self> {
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::invalid("dt", "sample interval must be positive", dt));
        }
        if model.k0 < 0.0 || model.k2 < 0.0 || model.k3 < 0.0 {
            return Err(Error::invalid(
                "phase_model",
                "PSD coefficients must be non-negative",
                format!("{model:?}"),
            ));
        }
        let fir = if model.k3 > 0.0 {
            if fir_taps < 2 {
                return Err(Error::invalid(
                    "fir_taps",
                    "f⁻³ synthesis needs at least 2 taps",
                    fir_taps,
                ));
            }
            Some(FirConvolver::new(&fractional_integrator_taps(3.0, fir_taps)))
        } else {
            None
        };
        Ok(Self {
            dt,
            sigma_w0: (model.k0 / dt).sqrt(),
            sigma_w2: (4.0 * model.k2 * dt * PI * PI).sqrt(),
            accumulator: 0.0,
            sigma_w3: (8.0 * model.k3 * dt * dt * PI * PI * PI).sqrt(),
            fir,
            primed: false,
        })
    }

    /// Sample interval in seconds.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Fill `out` with consecutive phase samples, continuing the stream.
    pub fn fill<R: Rng + ?Sized>(&mut self, out: &mut [f64], rng: &mut R) {
        if !self.primed {
            if let Some(fir) = self.fir.as_mut() {
                let n = fir.n_taps - 1;
                let warmup: Vec<f64> = (0..n)
                    .map(|_| {
                        let w: f64 = StandardNormal.sample(rng);
                        self.sigma_w3 * w
                    })
                    .collect();
                fir.prime(&warmup);
            }
            self.primed = true;
        }
        out.fill(0.0);
        if self.sigma_w0 > 0.0 {
            for v in out.iter_mut() {
                let w: f64 = StandardNormal.sample(rng);
                *v += self.sigma_w0 * w;
            }
        }
        if self.sigma_w2 > 0.0 {
            for v in out.iter_mut() {
                let w: f64 = StandardNormal.sample(rng);
                self.accumulator += self.sigma_w2 * w;
                *v += self.accumulator;
            }
        }
        if self.sigma_w3 > 0.0 {
            let innovations: Vec<f64> = (0..out.len())
                .map(|_| {
                    let w: f64 = StandardNormal.sample(rng);
                    self.sigma_w3 * w
                })
                .collect();
            let fir = self.fir.as_mut().expect("FIR present when k3 > 0");
            let shaped = fir.process(&innovations);
            for (v, s) in out.iter_mut().zip(shaped) {
                *v += s;
            }
        }
    }

    /// Convenience: generate `n` samples of a fresh process.
    pub fn generate<R: Rng + ?Sized>(
        model: RfPhaseModel,
        dt: f64,
        n: usize,
        fir_taps: usize,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        let mut gen = Self::new(model, dt, fir_taps)?;
        let mut out = vec![0.0; n];
        gen.fill(&mut out, rng);
        Ok(out)
    }
}

/// Streaming FIR convolution via overlap-save FFT blocks. Keeps the last
/// `n_taps − 1` input samples between calls so concatenated outputs equal
/// one long convolution.
#[derive(Clone)]
struct FirConvolver {
    n_taps: usize,
    fft_len: usize,
    chunk: usize,
    taps_freq: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    history: Vec<f64>,
}

impl FirConvolver {
    fn new(taps: &[f64]) -> Self {
        let n_taps = taps.len();
        let fft_len = (2 * n_taps.max(4096)).next_power_of_two();
        let chunk = fft_len - (n_taps - 1);
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(fft_len);
        let ifft = planner.plan_fft_inverse(fft_len);
        let mut taps_freq: Vec<Complex64> = taps
            .iter()
            .map(|&t| Complex64::new(t, 0.0))
            .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
            .take(fft_len)
            .collect();
        fft.process(&mut taps_freq);
        Self {
            n_taps,
            fft_len,
            chunk,
            taps_freq,
            fft,
            ifft,
            history: vec![0.0; n_taps - 1],
        }
    }

    /// Seed the input history (e.g. with stationary innovations).
    fn prime(&mut self, samples: &[f64]) {
        let n = self.history.len();
        let take = samples.len().min(n);
        self.history.rotate_left(take.min(n));
        let start = n - take;
        self.history[start..].copy_from_slice(&samples[samples.len() - take..]);
    }

    /// Convolve `input` with the taps, carrying history across calls.
    fn process(&mut self, input: &[f64]) -> Vec<f64> {
        let mut extended = Vec::with_capacity(self.history.len() + input.len());
        extended.extend_from_slice(&self.history);
        extended.extend_from_slice(input);

        let mut out = Vec::with_capacity(input.len());
        let overlap = self.n_taps - 1;
        let mut pos = 0;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_len];
        while pos < input.len() {
            let want = (input.len() - pos).min(self.chunk);
            // Segment covering `overlap` history samples plus `want` outputs.
            for (i, b) in buf.iter_mut().enumerate() {
                let idx = pos + i;
                *b = if idx < extended.len() {
                    Complex64::new(extended[idx], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            self.fft.process(&mut buf);
            for (b, t) in buf.iter_mut().zip(&self.taps_freq) {
                *b *= t;
            }
            self.ifft.process(&mut buf);
            let scale = 1.0 / self.fft_len as f64;
            for i in 0..want {
                out.push(buf[overlap + i].re * scale);
            }
            pos += want;
        }

        // Carry the last `overlap` input samples forward.
        if overlap > 0 {
            let n = extended.len();
            self.history.copy_from_slice(&extended[n - overlap..]);
        }
        out
    }
}

/// Rotate a waveform by a per-sample phase trajectory: `x[n]·e^{−jφ[n]}`.
pub fn rotate_by_phase(wave: &mut [Complex64], phase: &[f64]) {
    for (w, &p) in wave.iter_mut().zip(phase) {
        *w *= Complex64::from_polar(1.0, -p);
    }
}

/// Rotate a waveform by a carrier frequency offset: `x[n]·e^{−j2πΔf·t_n}`
/// with `t_n = (start_index + n)/sample_rate`. The absolute sample index
/// keeps the rotation continuous across streamed blocks.
pub fn rotate_by_cfo(wave: &mut [Complex64], cfo_hz: f64, sample_rate: f64, start_index: u64) {
    if cfo_hz == 0.0 {
        return;
    }
    let step = -2.0 * PI * cfo_hz / sample_rate;
    for (n, w) in wave.iter_mut().enumerate() {
        let t = start_index as f64 + n as f64;
        *w *= Complex64::from_polar(1.0, step * t);
    }
}
