//! Property-based tests for the analytic layers: constellation geometry,
//! pulse-shaping, link-budget algebra, noise-power formulas, and the
//! signal-independent / signal-dependent decomposition of both front ends.

use num_complex::Complex64;
use proptest::prelude::*;
use thzlink::budget::ChannelParams;
use thzlink::electronics::ElectronicsLink;
use thzlink::noise;
use thzlink::photonics::PhotonicsLink;
use thzlink::rxdsp::{IqImbalance, Pll, PllConfig};
use thzlink::signal::{BitErrorCount, Constellation, RrcFilter};

const QAM_ORDERS: [usize; 4] = [4, 16, 64, 256];

fn order_strategy() -> impl Strategy<Value = usize> {
    prop::sample::select(QAM_ORDERS.to_vec())
}

// ---------------------------------------------------------------------------
// Constellation geometry
// ---------------------------------------------------------------------------

#[test]
fn constellations_have_unit_average_power() {
    for order in QAM_ORDERS {
        let c = Constellation::new(order).unwrap();
        let mean_power: f64 =
            c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / order as f64;
        assert!(
            (mean_power - 1.0).abs() < 1e-12,
            "order {order}: mean power {mean_power}"
        );
    }
}

#[test]
fn power_groups_partition_with_increasing_power() {
    for order in QAM_ORDERS {
        let c = Constellation::new(order).unwrap();
        let groups = c.power_groups();
        let mut seen = vec![false; order];
        for g in &groups {
            for &i in &g.indices {
                assert!(!seen[i], "order {order}: label {i} in two groups");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "order {order}: labels missing from groups");
        for pair in groups.windows(2) {
            assert!(
                pair[1].power > pair[0].power,
                "order {order}: group powers not strictly increasing"
            );
        }
    }
}

proptest! {
    /// Scaling received samples and the channel amplitude together must not
    /// change any decision: detection operates on the normalized symbol.
    #[test]
    fn detection_is_invariant_under_joint_scaling(
        order in order_strategy(),
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
        amp in 0.05f64..20.0,
        scale in 0.01f64..100.0,
    ) {
        let c = Constellation::new(order).unwrap();
        let z = Complex64::new(re, im);

        // Skip draws that sit essentially on a decision boundary, where
        // floating-point rounding legitimately flips the argmin.
        let normalized = z / amp;
        let mut dists: Vec<f64> =
            c.points().iter().map(|p| (normalized - p).norm()).collect();
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assume!(dists[1] - dists[0] > 1e-6);

        let base = c.detect(z / amp);
        let scaled = c.detect((z * scale) / (amp * scale));
        prop_assert_eq!(base, scaled);
    }

    /// Bit-error counting is zero on identical streams and symmetric in its
    /// arguments.
    #[test]
    fn bit_error_count_is_reflexive_and_symmetric(
        bits_a in prop::collection::vec(0u8..2, 1..512),
        flips in prop::collection::vec(any::<bool>(), 1..512),
    ) {
        let self_count = BitErrorCount::compare(&bits_a, &bits_a).unwrap();
        prop_assert_eq!(self_count.errors, 0);

        let bits_b: Vec<u8> = bits_a
            .iter()
            .zip(flips.iter().cycle())
            .map(|(&b, &f)| if f { 1 - b } else { b })
            .collect();
        let ab = BitErrorCount::compare(&bits_a, &bits_b).unwrap();
        let ba = BitErrorCount::compare(&bits_b, &bits_a).unwrap();
        prop_assert_eq!(ab.errors, ba.errors);
        prop_assert_eq!(ab.total, ba.total);
    }
}

// ---------------------------------------------------------------------------
// Root-raised-cosine shaping
// ---------------------------------------------------------------------------

/// Worst symbol-instant tap of the transmit/matched-filter cascade, relative
/// to its peak.
fn cascade_isi_ratio(rolloff: f64, sps: usize, span: usize) -> f64 {
    let filter = RrcFilter::new(rolloff, sps, span).unwrap();
    let taps = filter.taps();
    let n = taps.len();
    // Full self-convolution; its center is the cascade peak.
    let mut cascade = vec![0.0f64; 2 * n - 1];
    for (i, &a) in taps.iter().enumerate() {
        for (j, &b) in taps.iter().enumerate() {
            cascade[i + j] += a * b;
        }
    }
    let center = n - 1;
    let peak = cascade[center];
    assert!(peak > 0.0);
    let mut worst: f64 = 0.0;
    let mut k = 1;
    while center >= k * sps {
        worst = worst.max(cascade[center - k * sps].abs());
        worst = worst.max(cascade[center + k * sps].abs());
        k += 1;
    }
    worst / peak
}

/// At the shaping settings the simulator actually runs (rolloff 0.2 and 0.35,
/// 32-symbol span), every off-peak symbol-instant tap of the self-cascade
/// stays below 1e-3 of the peak.
#[test]
fn rrc_cascade_isi_below_1e3_at_operating_settings() {
    for (rolloff, sps) in [(0.2, 4), (0.2, 8), (0.35, 4), (0.35, 8)] {
        let ratio = cascade_isi_ratio(rolloff, sps, 32);
        assert!(
            ratio < 1e-3,
            "rolloff {rolloff}, {sps} samples/symbol: ISI ratio {ratio:.2e}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Across the broader practical region the cascade stays near-Nyquist
    /// (taps below 1e-2 of peak — truncation tails at small rolloff make a
    /// uniform 1e-3 unattainable for short spans), and stretching the span
    /// from 16 to 64 symbols always tightens the residual.
    #[test]
    fn rrc_self_cascade_is_near_nyquist_at_symbol_instants(
        rolloff in 0.15f64..0.95,
        span in prop::sample::select(vec![16usize, 24, 32, 48]),
        sps in prop::sample::select(vec![2usize, 4, 8]),
    ) {
        let ratio = cascade_isi_ratio(rolloff, sps, span);
        prop_assert!(ratio < 1e-2, "ISI ratio {ratio:.2e}");
        let long = cascade_isi_ratio(rolloff, sps, 64);
        let short = cascade_isi_ratio(rolloff, sps, 16);
        prop_assert!(long < short);
    }
}

// ---------------------------------------------------------------------------
// Link-budget algebra
// ---------------------------------------------------------------------------

fn channel_strategy() -> impl Strategy<Value = ChannelParams> {
    (
        1.0f64..500.0,          // distance, m
        100e9f64..600e9,        // carrier, Hz
        10.0f64..60.0,          // tx gain, dBi
        10.0f64..60.0,          // rx gain, dBi
        0.0f64..0.2,            // absorption, 1/m
        1e-3f64..50e-3,         // divergence, rad
        0.0f64..5e-3,           // pointing offset, m
    )
        .prop_map(|(d, f, gt, gr, kappa, div, r)| ChannelParams {
            carrier_frequency_hz: f,
            distance_m: d,
            tx_gain_dbi: gt,
            rx_gain_dbi: gr,
            absorption_per_m: kappa,
            beam_divergence_rad: div,
            pointing_offset_m: r,
        })
}

proptest! {
    /// The amplitude gain recomposes exactly from the itemized dB terms.
    #[test]
    fn budget_recomposes_from_items(params in channel_strategy()) {
        let b = params.budget().unwrap();
        let total = b.free_space_db + b.absorption_db + b.pointing_db - b.antenna_gain_db;
        prop_assert!((b.total_db - total).abs() < 1e-9);
        prop_assert!((20.0 * b.alpha.log10() + b.total_db).abs() < 1e-9);
    }

    /// α grows with antenna gain and shrinks with distance, absorption, and
    /// pointing offset.
    #[test]
    fn budget_monotonicity(params in channel_strategy()) {
        let alpha = params.alpha().unwrap();

        let mut more_gain = params.clone();
        more_gain.tx_gain_dbi += 3.0;
        prop_assert!(more_gain.alpha().unwrap() > alpha);

        let mut farther = params.clone();
        farther.distance_m *= 2.0;
        prop_assert!(farther.alpha().unwrap() < alpha);

        let mut thicker = params.clone();
        thicker.absorption_per_m += 0.05;
        prop_assert!(thicker.alpha().unwrap() < alpha);

        let mut crooked = params.clone();
        crooked.pointing_offset_m += 1e-3;
        prop_assert!(crooked.alpha().unwrap() < alpha);
    }
}

// ---------------------------------------------------------------------------
// Elementary noise powers
// ---------------------------------------------------------------------------

proptest! {
    /// Every closed-form noise power is nonnegative and exactly linear in its
    /// bandwidth argument.
    #[test]
    fn noise_powers_nonnegative_and_linear_in_bandwidth(
        gain_db in 0.0f64..35.0,
        n_sp in 0.0f64..5.0,
        laser_mw in 0.01f64..500.0,
        rin in -200.0f64..-120.0,
        resp in 0.1f64..1.5,
        mean_mw in 0.01f64..500.0,
        temp in 100.0f64..400.0,
        nf in 0.0f64..15.0,
        amp_db in 0.0f64..30.0,
        floor in -160.0f64..-100.0,
        b in 1e9f64..100e9,
    ) {
        let gain = 10f64.powf(gain_db / 10.0);
        let nu = 193.5e12;
        let cases: Vec<(f64, f64)> = vec![
            (noise::ase_power(gain, n_sp, nu, b), noise::ase_power(gain, n_sp, nu, 2.0 * b)),
            (
                noise::rin_power(gain, laser_mw * 1e-3, rin, b),
                noise::rin_power(gain, laser_mw * 1e-3, rin, 2.0 * b),
            ),
            (
                noise::shot_power(resp, mean_mw * 1e-3, b),
                noise::shot_power(resp, mean_mw * 1e-3, 2.0 * b),
            ),
            (
                noise::thermal_power(temp, b, nf, amp_db),
                noise::thermal_power(temp, 2.0 * b, nf, amp_db),
            ),
            (
                noise::oscillator_floor_power(floor, b, 2.0),
                noise::oscillator_floor_power(floor, 2.0 * b, 2.0),
            ),
        ];
        for (one, two) in cases {
            prop_assert!(one >= 0.0);
            prop_assert!((two - 2.0 * one).abs() <= 1e-12 * two.abs().max(1e-300));
        }
    }
}

// ---------------------------------------------------------------------------
// Photonic front end: decomposition identities
// ---------------------------------------------------------------------------

fn photonics_strategy() -> impl Strategy<Value = PhotonicsLink> {
    (
        -10.0f64..15.0,   // input power, dBm
        5.0f64..30.0,     // EDFA gain, dB
        -200.0f64..-130.0, // RIN, dB/Hz
        0.5f64..4.0,      // n_sp
        5.0f64..25.0,     // LO power, dBm
        10e9f64..60e9,    // electrical bandwidth, Hz
        0.0f64..10.0,     // receiver noise figure, dB
        0.05f64..1.5,     // alpha
    )
        .prop_map(|(pin, g, rin, nsp, plo, be, nf, alpha)| {
            PhotonicsLink::builder()
                .input_power_dbm(pin)
                .edfa_gain_db(g)
                .rin_db_hz(rin)
                .n_sp(nsp)
                .lo_power_dbm(plo)
                .electrical_bandwidth_hz(be)
                .noise_figure_db(nf)
                .alpha(alpha)
                .build()
                .unwrap()
        })
}

proptest! {
    /// The optical noise power is exactly the sum of amplified spontaneous
    /// emission and (both lasers') relative intensity noise.
    #[test]
    fn optical_noise_is_ase_plus_rin(
        pin in -10.0f64..15.0,
        gain_db in 5.0f64..30.0,
        rin in -200.0f64..-130.0,
        nsp in 0.5f64..4.0,
    ) {
        let link = PhotonicsLink::builder()
            .input_power_dbm(pin)
            .edfa_gain_db(gain_db)
            .rin_db_hz(rin)
            .n_sp(nsp)
            .build()
            .unwrap();
        let parts = link.parts();
        let gain = 10f64.powf(gain_db / 10.0);
        let per_laser = 1e-3 * 10f64.powf(pin / 10.0) / 2.0;
        // Builder defaults: 193.4 THz carrier, 2 THz optical bandwidth.
        let ase = noise::ase_power(gain, nsp, 193.4e12, 2e12);
        let rin_power = 2.0 * noise::rin_power(gain, per_laser, rin, 2e12);
        prop_assert!(
            (parts.sigma2_opt - (ase + rin_power)).abs() <= 1e-15 + 1e-12 * parts.sigma2_opt
        );
    }

    /// The demodulator noise total splits exactly into the itemized beat
    /// terms, and the conditional variance is the affine form
    /// SIN + |x|²·SDN with SIN + SDN equal to the total at unit symbol power.
    #[test]
    fn photonics_decomposition_identities(link in photonics_strategy(), p in 0.0f64..4.0) {
        let b = link.noise_breakdown();
        let item_sum = b.thermal
            + b.tx_shot
            + b.tx_self_beat
            + b.tx_carrier_beat
            + b.tx_signal_beat
            + b.lo_via_signal
            + b.cross;
        prop_assert!((b.total - item_sum).abs() <= 1e-12 * b.total);
        prop_assert!((b.total - (b.signal_independent + b.signal_dependent)).abs() <= 1e-12 * b.total);
        prop_assert!(b.signal_independent >= 0.0 && b.signal_dependent >= 0.0);

        let conditional = link.demod_noise_power_conditional(p);
        let expected = b.signal_independent + p * b.signal_dependent;
        prop_assert!((conditional - expected).abs() <= 1e-12 * expected.max(1e-300));

        // SNR uses the same total: SNR·σ²_total = (signal amplitude)².
        let amp2 = link.signal_amplitude().powi(2);
        prop_assert!((link.snr_rx() * b.total - amp2).abs() <= 1e-9 * amp2);
    }

    /// The signal-dependent share of the noise grows with the channel gain.
    #[test]
    fn photonics_sdn_fraction_monotone_in_alpha(
        link in photonics_strategy(),
        a1 in 0.01f64..1.0,
        ratio in 1.05f64..10.0,
    ) {
        let low = link.clone().with_alpha(a1).unwrap();
        let high = link.with_alpha(a1 * ratio).unwrap();
        prop_assert!(
            high.noise_breakdown().sdn_fraction()
                >= low.noise_breakdown().sdn_fraction() - 1e-12
        );
    }
}

// ---------------------------------------------------------------------------
// Electronic front end: decomposition identities
// ---------------------------------------------------------------------------

fn electronics_strategy() -> impl Strategy<Value = ElectronicsLink> {
    (
        -10.0f64..15.0,    // signal power, dBm
        5.0f64..25.0,      // LO power, dBm
        -160.0f64..-110.0, // tx floor, dBc/Hz
        -160.0f64..-110.0, // rx floor, dBc/Hz
        1e9f64..10e9,      // oscillator bandwidth, Hz
        10e9f64..60e9,     // electrical bandwidth, Hz
        0.0f64..10.0,      // noise figure, dB
        0.05f64..1.5,      // alpha
    )
        .prop_map(|(ps, plo, txf, rxf, bosc, be, nf, alpha)| {
            ElectronicsLink::builder()
                .signal_power_dbm(ps)
                .lo_power_dbm(plo)
                .tx_floor_dbc_hz(txf)
                .rx_floor_dbc_hz(rxf)
                .oscillator_bandwidth_hz(bosc)
                .electrical_bandwidth_hz(be)
                .noise_figure_db(nf)
                .alpha(alpha)
                .build()
                .unwrap()
        })
}

proptest! {
    /// Electronic-chain analogue of the decomposition identity.
    #[test]
    fn electronics_decomposition_identities(link in electronics_strategy(), p in 0.0f64..4.0) {
        let b = link.noise_breakdown();
        let item_sum = b.thermal_rx
            + b.tx_thermal_via_lo
            + b.tx_thermal_via_lo_noise
            + b.carrier_beat
            + b.lo_beat
            + b.carrier_lo_cross;
        prop_assert!((b.total - item_sum).abs() <= 1e-12 * b.total);
        prop_assert!((b.total - (b.signal_independent + b.signal_dependent)).abs() <= 1e-12 * b.total);

        let conditional = link.demod_noise_power_conditional(p);
        let expected = b.signal_independent + p * b.signal_dependent;
        prop_assert!((conditional - expected).abs() <= 1e-12 * expected.max(1e-300));

        let amp2 = link.signal_amplitude().powi(2);
        prop_assert!((link.snr_rx() * b.total - amp2).abs() <= 1e-9 * amp2);
    }

    /// The signal-dependent share grows with the channel gain here too.
    #[test]
    fn electronics_sdn_fraction_monotone_in_alpha(
        link in electronics_strategy(),
        a1 in 0.01f64..1.0,
        ratio in 1.05f64..10.0,
    ) {
        let low = link.clone().with_alpha(a1).unwrap();
        let high = link.with_alpha(a1 * ratio).unwrap();
        prop_assert!(
            high.noise_breakdown().sdn_fraction()
                >= low.noise_breakdown().sdn_fraction() - 1e-12
        );
    }
}

// ---------------------------------------------------------------------------
// Receiver DSP
// ---------------------------------------------------------------------------

proptest! {
    /// IQ imbalance is a widely-linear map, so it commutes with any real
    /// scalar gain: apply(k·x) = k·apply(x).
    #[test]
    fn iq_imbalance_commutes_with_real_gain(
        amp_db in -1.0f64..1.0,
        phase_deg in -5.0f64..5.0,
        re in -3.0f64..3.0,
        im in -3.0f64..3.0,
        k in 0.01f64..100.0,
    ) {
        let imb = IqImbalance { amplitude_db: amp_db, phase_deg };
        let x = Complex64::new(re, im);
        let lhs = imb.apply(x * k);
        let rhs = imb.apply(x) * k;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-300));
    }

    /// A type-2 loop drives a constant phase offset to zero, and the error
    /// envelope decays monotonically across successive blocks.
    #[test]
    fn pll_tracks_out_constant_phase_offsets(
        phi in -3.0f64..3.0,
        bandwidth in 0.02f64..0.2,
    ) {
        prop_assume!(phi.abs() > 1e-3);
        let config = PllConfig::with_noise_bandwidth(bandwidth);
        let mut pll = Pll::new(&config);
        let reference = Complex64::new(1.0, 0.0);
        let rotated = Complex64::from_polar(1.0, phi);

        let block = 400;
        let mut block_errors = Vec::new();
        for _ in 0..4 {
            let mut worst: f64 = 0.0;
            for _ in 0..block {
                let corrected = pll.step(rotated, reference);
                worst = worst.max((corrected / reference).arg().abs());
            }
            block_errors.push(worst);
        }
        // Settled far below the initial offset, and improving monotonically.
        prop_assert!(block_errors[3] < 1e-4 * phi.abs() + 1e-9);
        for pair in block_errors.windows(2) {
            prop_assert!(pair[1] <= pair[0] * 1.01);
        }
    }
}
