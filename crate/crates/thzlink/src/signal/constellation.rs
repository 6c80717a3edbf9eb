//! Square quadrature-amplitude constellations with per-rail Gray labeling.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A square M-QAM constellation (M ∈ {4, 16, 64, 256}) normalized to unit
/// mean symbol power, with a reflected-binary Gray code applied independently
/// to the in-phase and quadrature rails.
///
/// Bit labels are interpreted most-significant-bit first; the first half of a
/// label addresses the I rail, the second half the Q rail. Grid-adjacent
/// points therefore differ in exactly one bit, which is what makes the
/// nearest-neighbor bit-error approximation tight at high SNR.
///
/// # Example
///
/// ```
/// use thzlink::signal::Constellation;
///
/// let c = Constellation::new(16).unwrap();
/// assert_eq!(c.bits_per_symbol(), 4);
/// // Unit mean power.
/// let p: f64 = c.points().iter().map(|z| z.norm_sqr()).sum::<f64>() / 16.0;
/// assert!((p - 1.0).abs() < 1e-12);
/// ```
#[derive(Debug, Clone)]
pub struct Constellation {
    order: usize,
    bits_per_symbol: usize,
    bits_per_rail: usize,
    levels_per_rail: usize,
    /// Points indexed by symbol label (bits as an MSB-first integer).
    points: Vec<Complex64>,
    /// 1/normalization: amplitude step between adjacent rail levels is 2·scale.
    scale: f64,
}

/// A group of constellation points sharing the same symbol power `|a|²`.
///
/// Signal-dependent noise is conditionally Gaussian given the transmitted
/// symbol with a variance affine in `|a|²`, so statistics are naturally
/// collected per power ring.
#[derive(Debug, Clone)]
pub struct PowerGroup {
    /// Common squared magnitude of the member points.
    pub power: f64,
    /// Symbol labels belonging to this ring.
    pub indices: Vec<usize>,
}

/// Reflected-binary Gray encoding of an index.
#[inline]
fn gray_encode(k: usize) -> usize {
    k ^ (k >> 1)
}

/// Inverse of [`gray_encode`].
#[inline]
fn gray_decode(mut g: usize) -> usize {
    let mut k = g;
    while g > 0 {
        g >>= 1;
        k ^= g;
    }
    k
}

impl Constellation {
    /// Build the unit-power constellation of the given order.
    ///
    /// Supported orders are 4, 16, 64 and 256 (square grids of 2, 4, 8 and
    /// 16 levels per rail). Normalization factors are √2, √10, √42 and √170
    /// respectively.
    pub fn new(order: usize) -> Result<Self> {
        if ![4, 16, 64, 256].contains(&order) {
            return Err(Error::invalid("order", "must be one of 4, 16, 64, 256", order));
        }
        let bits_per_symbol = order.trailing_zeros() as usize;
        let bits_per_rail = bits_per_symbol / 2;
        let levels_per_rail = 1usize << bits_per_rail;
        // Mean power of the unnormalized grid: 2·(L²−1)/3 per complex symbol
        // (each rail contributes (L²−1)/3 over the odd levels ±1,±3,…,±(L−1)).
        let mean_power = 2.0 * ((levels_per_rail * levels_per_rail - 1) as f64) / 3.0;
        let scale = mean_power.sqrt().recip();

        let mut points = vec![Complex64::new(0.0, 0.0); order];
        for (label, point) in points.iter_mut().enumerate() {
            let g_i = label >> bits_per_rail;
            let g_q = label & (levels_per_rail - 1);
            let ki = gray_decode(g_i);
            let kq = gray_decode(g_q);
            let re = (2 * ki) as f64 - (levels_per_rail - 1) as f64;
            let im = (2 * kq) as f64 - (levels_per_rail - 1) as f64;
            *point = Complex64::new(re * scale, im * scale);
        }

        Ok(Self {
            order,
            bits_per_symbol,
            bits_per_rail,
            levels_per_rail,
            points,
            scale,
        })
    }

    /// Constellation order M.
    pub fn order(&self) -> usize {
        self.order
    }

    /// log2(M).
    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// The unit-power constellation points, indexed by symbol label.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Point for a symbol label.
    #[inline]
    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    /// Map a bit stream (values 0/1, length a multiple of log2 M) to symbols.
    pub fn map_bits(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        if bits.len() % self.bits_per_symbol != 0 {
            return Err(Error::LengthMismatch(format!(
                "bit stream length {} is not a multiple of log2(M) = {}",
                bits.len(),
                self.bits_per_symbol
            )));
        }
        Ok(bits
            .chunks_exact(self.bits_per_symbol)
            .map(|chunk| self.point(Self::label_from_bits(chunk)))
            .collect())
    }

    /// Assemble an MSB-first symbol label from a bit chunk.
    #[inline]
    pub fn label_from_bits(chunk: &[u8]) -> usize {
        chunk.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize))
    }

    /// Append the MSB-first bits of `label` to `out`.
    pub fn push_bits_of(&self, label: usize, out: &mut Vec<u8>) {
        for shift in (0..self.bits_per_symbol).rev() {
            out.push(((label >> shift) & 1) as u8);
        }
    }

    /// Maximum-likelihood detection of a normalized observation.
    ///
    /// For a square grid with independent per-rail labeling, the
    /// nearest-point search factorizes into two scalar quantizations, which
    /// this method exploits; the result is identical to an exhaustive
    /// `argmin |z − aᵢ|` search.
    #[inline]
    pub fn detect(&self, z: Complex64) -> usize {
        let ki = self.quantize_rail(z.re);
        let kq = self.quantize_rail(z.im);
        (gray_encode(ki) << self.bits_per_rail) | gray_encode(kq)
    }

    /// Quantize one rail coordinate to the nearest level index 0..L-1.
    #[inline]
    fn quantize_rail(&self, x: f64) -> usize {
        let l = self.levels_per_rail as f64;
        let k = ((x / self.scale + (l - 1.0)) / 2.0).round();
        k.clamp(0.0, l - 1.0) as usize
    }

    /// Group the constellation labels by symbol power `|a|²`.
    ///
    /// Returned groups are sorted by increasing power. A 256-QAM grid has 32
    /// distinct rings; 64-QAM has 9; 16-QAM has 3; QPSK has 1.
    pub fn power_groups(&self) -> Vec<PowerGroup> {
        let mut groups: Vec<PowerGroup> = Vec::new();
        for (label, p) in self.points.iter().enumerate() {
            let power = p.norm_sqr();
            match groups
                .iter_mut()
                .find(|g| (g.power - power).abs() < 1e-9 * (1.0 + power))
            {
                Some(g) => g.indices.push(label),
                None => groups.push(PowerGroup {
                    power,
                    indices: vec![label],
                }),
            }
        }
        groups.sort_by(|a, b| a.power.total_cmp(&b.power));
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn orders_and_normalization() {
        for (order, norm) in [(4usize, 2.0f64), (16, 10.0), (64, 42.0), (256, 170.0)] {
            let c = Constellation::new(order).unwrap();
            assert_relative_eq!(c.scale, norm.sqrt().recip(), max_relative = 1e-12);
            let mean_power: f64 =
                c.points().iter().map(|z| z.norm_sqr()).sum::<f64>() / order as f64;
            assert_relative_eq!(mean_power, 1.0, max_relative = 1e-12);
        }
        assert!(Constellation::new(32).is_err());
        assert!(Constellation::new(0).is_err());
    }

    #[test]
    fn qpsk_corner_labels() {
        let c = Constellation::new(4).unwrap();
        let s = 0.5f64.sqrt();
        // Rail bit 0 → Gray 0 → level index 0 → amplitude −1.
        assert_relative_eq!(c.point(0b00).re, -s, max_relative = 1e-12);
        assert_relative_eq!(c.point(0b00).im, -s, max_relative = 1e-12);
        assert_relative_eq!(c.point(0b11).re, s, max_relative = 1e-12);
        assert_relative_eq!(c.point(0b10).im, -s, max_relative = 1e-12);
    }

    #[test]
    fn qam16_all_zero_label_is_lower_left_corner() {
        let c = Constellation::new(16).unwrap();
        let s = 10f64.sqrt().recip();
        let p = c.point(0b0000);
        assert_relative_eq!(p.re, -3.0 * s, max_relative = 1e-12);
        assert_relative_eq!(p.im, -3.0 * s, max_relative = 1e-12);
    }

    #[test]
    fn gray_labels_differ_by_one_bit_between_grid_neighbors() {
        for order in [4usize, 16, 64, 256] {
            let c = Constellation::new(order).unwrap();
            let step = 2.0 * c.scale;
            for a in 0..order {
                for b in (a + 1)..order {
                    let d = c.point(a) - c.point(b);
                    let adjacent = (d.norm() - step).abs() < 1e-9
                        && (d.re.abs() < 1e-9 || d.im.abs() < 1e-9);
                    if adjacent {
                        let hamming = (a ^ b).count_ones();
                        assert_eq!(hamming, 1, "order {order}: labels {a:#x} and {b:#x}");
                    }
                }
            }
        }
    }

    #[test]
    fn detect_matches_exhaustive_search() {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(99);
        for order in [4usize, 16, 64, 256] {
            let c = Constellation::new(order).unwrap();
            for _ in 0..2000 {
                let z = Complex64::new(rng.gen_range(-1.6..1.6), rng.gen_range(-1.6..1.6));
                let fast = c.detect(z);
                let brute = (0..order)
                    .min_by(|&i, &j| {
                        (z - c.point(i))
                            .norm_sqr()
                            .total_cmp(&(z - c.point(j)).norm_sqr())
                    })
                    .unwrap();
                assert_eq!(
                    (z - c.point(fast)).norm_sqr(),
                    (z - c.point(brute)).norm_sqr(),
                    "order {order}, z = {z}"
                );
            }
        }
    }

    #[test]
    fn bit_round_trip() {
        let c = Constellation::new(64).unwrap();
        let bits: Vec<u8> = (0..6 * 64).map(|i| ((i * 7 + 3) % 5 % 2) as u8).collect();
        let symbols = c.map_bits(&bits).unwrap();
        let mut recovered = Vec::new();
        for z in &symbols {
            let label = c.detect(*z);
            c.push_bits_of(label, &mut recovered);
        }
        assert_eq!(bits, recovered);
        assert!(c.map_bits(&bits[..5]).is_err());
    }

    #[test]
    fn ring_counts() {
        let counts: Vec<usize> = [4usize, 16, 64, 256]
            .iter()
            .map(|&m| Constellation::new(m).unwrap().power_groups().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 9, 32]);
        // Groups partition the constellation.
        let c = Constellation::new(256).unwrap();
        let total: usize = c.power_groups().iter().map(|g| g.indices.len()).sum();
        assert_eq!(total, 256);
    }
}
