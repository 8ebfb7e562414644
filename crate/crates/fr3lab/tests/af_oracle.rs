//! Brute-force equivalence of the ambiguity surface on short signals, and
//! the statistical link between constellation kurtosis and sidelobe
//! fluctuation at integration-test scale.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fr3lab::payload::{
    af_sidelobe_run, ambiguity_of_signal, ConstellationSpec, FrameLayout, PayloadModel,
    StatsOptions,
};

/// Literal shift-multiply-sum re-implementation.
fn brute_force_af(signal: &[Complex64], delay: isize, doppler: isize) -> Complex64 {
    let n = signal.len() as isize;
    let energy: f64 = signal.iter().map(|s| s.norm_sqr()).sum();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let shifted = signal[((k + delay).rem_euclid(n)) as usize];
        let phase = -2.0 * std::f64::consts::PI * doppler as f64 * k as f64 / n as f64;
        acc += signal[k as usize] * shifted.conj() * Complex64::from_polar(1.0, phase);
    }
    acc / energy
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn surface_matches_brute_force_on_short_signals(
        samples in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8..64),
        max_delay in 1usize..4,
        max_doppler in 1usize..4,
    ) {
        let signal: Vec<Complex64> = samples
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        prop_assume!(signal.iter().map(|s| s.norm_sqr()).sum::<f64>() > 1e-6);
        prop_assume!(2 * max_doppler < signal.len() && max_delay < signal.len());
        let af = ambiguity_of_signal(&signal, max_delay, max_doppler).unwrap();
        for delay in -(max_delay as isize)..=(max_delay as isize) {
            for doppler in -(max_doppler as isize)..=(max_doppler as isize) {
                let want = brute_force_af(&signal, delay, doppler);
                let got = af.value(delay, doppler);
                prop_assert!((got - want).norm() < 1e-10);
            }
        }
        prop_assert_eq!(af.value(0, 0), Complex64::new(1.0, 0.0));
    }
}

#[test]
fn af_peak_sits_at_origin_for_random_frames() {
    let layout = FrameLayout::comb(32, 4, 8);
    let payload = PayloadModel::Constellation(ConstellationSpec::qpsk());
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..5 {
        let seed: u64 = rng.random();
        let frame = fr3lab::payload::generate_ofdm_frame(
            &payload,
            &layout,
            seed,
            &fr3lab::payload::FrameOptions::default(),
        );
        let af = ambiguity_of_signal(&frame.time_signal, 8, 8).unwrap();
        for delay in af.delays() {
            for doppler in af.dopplers() {
                if (delay, doppler) != (0, 0) {
                    assert!(af.value(delay, doppler).norm() <= 1.0 + 1e-12);
                }
            }
        }
    }
}

#[test]
fn kurtosis_ordering_shows_in_block_variances() {
    // Small-scale version of the headline Monte Carlo: the rank order of
    // sidelobe variance must match the kurtosis order in nearly every
    // disjoint block of trials.
    let layout = FrameLayout::comb(32, 6, 8);
    let options = StatsOptions {
        max_delay_bins: 6,
        max_doppler_bins: 6,
        ..StatsOptions::default()
    };
    let trials = 120;
    let blocks = 6;
    let qpsk = af_sidelobe_run(
        &PayloadModel::Constellation(ConstellationSpec::qpsk()),
        &layout,
        trials,
        2024,
        &options,
        blocks,
    )
    .unwrap();
    let qam = af_sidelobe_run(
        &PayloadModel::Constellation(ConstellationSpec::qam16()),
        &layout,
        trials,
        2024,
        &options,
        blocks,
    )
    .unwrap();
    let gauss = af_sidelobe_run(
        &PayloadModel::CircularGaussian,
        &layout,
        trials,
        2024,
        &options,
        blocks,
    )
    .unwrap();

    assert!(qpsk.stats.sidelobe_variance < qam.stats.sidelobe_variance);
    assert!(qam.stats.sidelobe_variance < gauss.stats.sidelobe_variance);

    let ordered = (0..blocks)
        .filter(|&b| {
            qpsk.block_variances[b] < qam.block_variances[b]
                && qam.block_variances[b] < gauss.block_variances[b]
        })
        .count();
    assert!(
        ordered as f64 / blocks as f64 >= 0.95 - 1e-9 || ordered + 1 == blocks,
        "ordering held in only {ordered}/{blocks} blocks"
    );
}
