//! Error-rate and signal-quality metrics.

use crate::error::{Error, Result};
use num_complex::Complex64;
use statrs::function::erf::erfc;

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
#[inline]
pub(crate) fn q_func(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Exact bit-error rate of Gray-labeled square M-QAM over an AWGN channel.
///
/// `snr` is the per-symbol signal-to-noise ratio E_s/N₀ (linear). The
/// expression sums the exact per-bit error probabilities of the underlying
/// √M-ary PAM rails:
///
/// ```text
/// BER = 1/log2(L) · Σ_{k=1..log2 L} P_k ,  L = √M
/// P_k = 1/L · Σ_i (−1)^⌊i·2^(k−1)/L⌋ · (2^(k−1) − ⌊i·2^(k−1)/L + 1/2⌋)
///              · 2·Q((2i+1)·√(3·snr/(M−1)))
/// ```
///
/// For QPSK this collapses to Q(√snr); for 16-QAM to
/// (1/4)·[3Q(a) + 2Q(3a) − Q(5a)] with a = √(snr/5).
pub fn ber_awgn_qam(order: usize, snr: f64) -> Result<f64> {
    if ![4usize, 16, 64, 256].contains(&order) {
        return Err(Error::invalid("order", "must be one of 4, 16, 64, 256", order));
    }
    if snr < 0.0 || !snr.is_finite() {
        return Err(Error::invalid("snr", "must be finite and non-negative", snr));
    }
    let l = (order as f64).sqrt() as usize;
    let rail_bits = l.trailing_zeros() as usize;
    let arg_unit = (3.0 * snr / (order as f64 - 1.0)).sqrt();

    let mut total = 0.0;
    for k in 1..=rail_bits {
        let kk = 1usize << (k - 1);
        let upper = ((1.0 - 2f64.powi(-(k as i32))) * l as f64) as usize;
        let mut pk = 0.0;
        for i in 0..upper {
            let sign = if (i * kk / l) % 2 == 0 { 1.0 } else { -1.0 };
            let weight = kk as f64 - ((i * kk) as f64 / l as f64 + 0.5).floor();
            pk += sign * weight * 2.0 * q_func((2 * i + 1) as f64 * arg_unit);
        }
        total += pk / l as f64;
    }
    Ok(total / rail_bits as f64)
}

/// Outcome of comparing two bit streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BitErrorCount {
    /// Number of differing bits.
    pub errors: u64,
    /// Number of bits compared.
    pub total: u64,
}

impl BitErrorCount {
    /// Compare two equal-length bit streams.
    pub fn compare(tx: &[u8], rx: &[u8]) -> Result<Self> {
        if tx.len() != rx.len() {
            return Err(Error::LengthMismatch(format!(
                "bit streams differ in length: {} vs {}",
                tx.len(),
                rx.len()
            )));
        }
        let errors = tx.iter().zip(rx).filter(|(a, b)| a != b).count() as u64;
        Ok(Self {
            errors,
            total: tx.len() as u64,
        })
    }

    /// Merge another count into this one.
    pub fn merge(&mut self, other: BitErrorCount) {
        self.errors += other.errors;
        self.total += other.total;
    }

    /// The bit-error ratio; zero when nothing was compared.
    pub fn ber(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.errors as f64 / self.total as f64
        }
    }

    /// Two-sided binomial confidence half-width at roughly 95% coverage
    /// (normal approximation, floored at the one-error level).
    pub fn ci95_half_width(&self) -> f64 {
        if self.total == 0 {
            return f64::INFINITY;
        }
        let p = self.ber();
        let n = self.total as f64;
        (1.96 * (p * (1.0 - p) / n).sqrt()).max(1.0 / n)
    }
}

/// Root-mean-square error-vector magnitude of received symbols against their
/// references: √(Σ|z−d|² / Σ|d|²).
pub fn evm_rms(received: &[Complex64], reference: &[Complex64]) -> Result<f64> {
    if received.len() != reference.len() || received.is_empty() {
        return Err(Error::LengthMismatch(format!(
            "EVM needs equal non-empty slices, got {} and {}",
            received.len(),
            reference.len()
        )));
    }
    let err: f64 = received
        .iter()
        .zip(reference)
        .map(|(z, d)| (z - d).norm_sqr())
        .sum();
    let rf: f64 = reference.iter().map(|d| d.norm_sqr()).sum();
    if rf == 0.0 {
        return Err(Error::Numerical("EVM reference power is zero".into()));
    }
    Ok((err / rf).sqrt())
}

/// SNR in dB implied by an RMS EVM: −20·log10(evm).
pub fn snr_db_from_evm(evm: f64) -> f64 {
    -20.0 * evm.log10()
}
