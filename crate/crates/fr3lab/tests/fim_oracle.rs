//! Finite-difference verification of the analytic Fisher-information path.
//!
//! The oracle below differentiates the steering vector numerically (central
//! differences, adaptive step) and assembles the information matrix from the
//! projected-derivative definition. It never touches the analytic gradient
//! code, so agreement is a two-route check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fr3lab::array::{build_ula, nearfield_steering, ArrayGeometry, FieldPoint};
use fr3lab::estimation::{crb, fisher_matrix, steering_derivatives, SnrSpec};

/// Central-difference derivative of the steering vector along range or
/// angle (radians). Step scales with the cube root of machine epsilon.
fn fd_steering_derivative(
    geom: &ArrayGeometry,
    range_m: f64,
    angle_deg: f64,
    frequency_hz: f64,
    along_range: bool,
) -> Vec<Complex64> {
    let theta = angle_deg.to_radians();
    let eval = |r: f64, t: f64| -> Vec<Complex64> {
        nearfield_steering(geom, r, t.to_degrees(), frequency_hz)
            .expect("valid steering point")
            .entries
    };
    let base = f64::EPSILON.cbrt();
    if along_range {
        let h = base * range_m.max(1.0);
        let plus = eval(range_m + h, theta);
        let minus = eval(range_m - h, theta);
        plus.iter()
            .zip(&minus)
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect()
    } else {
        let h = base;
        let plus = eval(range_m, theta + h);
        let minus = eval(range_m, theta - h);
        plus.iter()
            .zip(&minus)
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect()
    }
}

/// Fully numerical information matrix from the projected-derivative
/// definition with finite-difference steering derivatives.
fn fd_fisher(
    geom: &ArrayGeometry,
    range_m: f64,
    angle_deg: f64,
    frequency_hz: f64,
    snr: &SnrSpec,
) -> [[f64; 2]; 2] {
    let a = nearfield_steering(geom, range_m, angle_deg, frequency_hz)
        .expect("valid steering point")
        .entries;
    let n = geom.n_elements() as f64;
    let d_r = fd_steering_derivative(geom, range_m, angle_deg, frequency_hz, true);
    let d_t = fd_steering_derivative(geom, range_m, angle_deg, frequency_hz, false);
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(xi, yi)| xi.conj() * yi).sum()
    };
    let projected = |di: &[Complex64], dj: &[Complex64]| -> f64 {
        (dot(di, dj) - dot(di, &a) * dot(&a, dj) / n).re
    };
    let scale = 2.0 * snr.per_element_snr_linear() * snr.snapshots as f64;
    let rr = scale * projected(&d_r, &d_r);
    let rt = scale * projected(&d_r, &d_t);
    let tt = scale * projected(&d_t, &d_t);
    [[rr, rt], [rt, tt]]
}

fn max_rel_error(analytic: &[[f64; 2]; 2], numeric: &[[f64; 2]; 2]) -> f64 {
    let scale = analytic
        .iter()
        .flatten()
        .fold(0.0_f64, |m, &v| m.max(v.abs()));
    analytic
        .iter()
        .flatten()
        .zip(numeric.iter().flatten())
        .map(|(&a, &b)| (a - b).abs() / scale)
        .fold(0.0, f64::max)
}

#[test]
fn analytic_derivatives_match_central_differences() {
    let geom = build_ula(32, 24e9).unwrap();
    let snr = SnrSpec::array_level_db(20.0, 32);
    for (r, theta, f) in [
        (2.0, 0.0, 24e9),
        (2.0, 25.0, 24e9),
        (6.5, -40.0, 13e9),
        (60.0, 10.0, 7e9),
    ] {
        // Derivative vectors entrywise.
        let (a_r, a_t) = steering_derivatives(&geom, r, theta, f).unwrap();
        for (analytic, numeric, label) in [
            (
                &a_r,
                fd_steering_derivative(&geom, r, theta, f, true),
                "range",
            ),
            (
                &a_t,
                fd_steering_derivative(&geom, r, theta, f, false),
                "angle",
            ),
        ] {
            let scale = analytic.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
            let err = analytic
                .iter()
                .zip(&numeric)
                .map(|(x, y)| (x - y).norm() / scale)
                .fold(0.0_f64, f64::max);
            assert!(err <= 1e-6, "{label} rel err {err:.3e} at r={r} θ={theta}");
        }

        // And the assembled information matrices.
        let target = FieldPoint::NearField {
            range_m: r,
            angle_deg: theta,
        };
        let analytic = fisher_matrix(&geom, &target, f, &snr).unwrap();
        let numeric = fd_fisher(&geom, r, theta, f, &snr);
        let err = max_rel_error(&analytic.matrix, &numeric);
        assert!(err <= 1e-6, "rel err {err:.3e} at r={r} θ={theta} f={f:e}");
    }
}

#[test]
fn spot_value_pinned_by_numerical_pipeline() {
    // 32-element half-wavelength layout at 24 GHz, target at 2 m boresight,
    // 20 dB array-level SNR.
    let geom = build_ula(32, 24e9).unwrap();
    let snr = SnrSpec::array_level_db(20.0, 32);
    let target = FieldPoint::NearField {
        range_m: 2.0,
        angle_deg: 0.0,
    };
    let analytic = fisher_matrix(&geom, &target, 24e9, &snr).unwrap();
    let numeric = fd_fisher(&geom, 2.0, 0.0, 24e9, &snr);
    let err = max_rel_error(&analytic.matrix, &numeric);
    assert!(err <= 1e-6, "rel err {err:.3e}");

    // Values frozen from the finite-difference pipeline.
    assert!((analytic.matrix[0][0] - 6.952248083586).abs() < 1e-6);
    assert!((analytic.matrix[1][1] - 168025.709404).abs() < 1e-3);
    assert!(analytic.matrix[0][1].abs() < 1e-9);
    let bounds = crb(&analytic).unwrap();
    assert!((bounds.range_crb_m2 - 1.438383653715e-1).abs() < 1e-9);
    assert!((bounds.angle_crb_rad2 - 5.951470186019e-6).abs() < 1e-14);
}

#[test]
fn randomized_fd_agreement_two_hundred_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let snapshots = 200;
    let mut worst = 0.0_f64;
    for case in 0..snapshots {
        let n = rng.random_range(4..=48);
        let f = rng.random_range(6e9..24e9);
        let geom = build_ula(n, f).unwrap();
        // Log-uniform range between 1 and 100 m, clear of the aperture.
        let r = 10f64
            .powf(rng.random_range(0.0..2.0))
            .max(geom.max_abs_position_m() * 1.5);
        let theta = rng.random_range(-60.0..60.0);
        let snr = SnrSpec::array_level_db(rng.random_range(0.0..30.0), n);
        let target = FieldPoint::NearField {
            range_m: r,
            angle_deg: theta,
        };
        let analytic = fisher_matrix(&geom, &target, f, &snr).unwrap();
        let numeric = fd_fisher(&geom, r, theta, f, &snr);
        let err = max_rel_error(&analytic.matrix, &numeric);
        assert!(
            err <= 1e-6,
            "case {case}: rel err {err:.3e} at n={n} r={r:.2} θ={theta:.2} f={f:.3e}"
        );
        worst = worst.max(err);
        // Symmetry and positive semidefiniteness along the way.
        let m = analytic.matrix;
        assert_eq!(m[0][1], m[1][0]);
        assert!(m[0][0] >= 0.0 && m[1][1] >= 0.0);
        assert!(m[0][0] * m[1][1] - m[0][1] * m[0][1] >= -1e-9 * m[0][0] * m[1][1]);
    }
    println!("worst finite-difference disagreement: {worst:.3e}");
}

#[test]
fn angle_crb_range_spread_is_small() {
    // The angle bound barely moves across 2/10/20 m at fixed positions; the
    // finite-difference pipeline puts the relative spread well under 1%.
    let geom = build_ula(32, 24e9).unwrap();
    let snr = SnrSpec::array_level_db(20.0, 32);
    for f in [7e9, 15e9, 24e9] {
        let mut bounds = Vec::new();
        for r in [2.0, 10.0, 20.0] {
            let numeric = fd_fisher(&geom, r, 0.0, f, &snr);
            // Diagonal inverse is exact here: the cross term vanishes at
            // boresight.
            bounds.push(1.0 / numeric[1][1]);
        }
        let max = bounds.iter().cloned().fold(f64::MIN, f64::max);
        let min = bounds.iter().cloned().fold(f64::MAX, f64::min);
        let spread = (max - min) / min;
        assert!(spread < 0.01, "spread {spread:.4} at f={f:e}");
    }
}
