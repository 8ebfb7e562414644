//! Beam squint of fixed phase-shifter front ends across carriers and
//! bandwidths.
//!
//! A phase profile matched to a pointing angle at one design frequency keeps
//! its phases when the radiated frequency changes. The beam peak then moves
//! to `arcsin((f_design / f) · sin θ₀)`: a small drift across one carrier's
//! bandwidth (intra-beam squint) and a large jump between widely separated
//! carriers sharing the same profile (inter-beam squint). Digital
//! compensation is modeled as the ideal zero-loss regime.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{
    angle_grid, beampattern, gain_at, peak_angle_deg, pointing_weights, ArrayError, ArrayGeometry,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SquintError {
    #[error("beam lost to invisible region: |({design_hz:.3e}/{carrier_hz:.3e})·sin {pointing_deg}°| > 1")]
    BeamInvisible {
        design_hz: f64,
        carrier_hz: f64,
        pointing_deg: f64,
    },
    #[error("bandwidth must be positive, got {0} Hz")]
    NonPositiveBandwidth(f64),
    #[error("need at least 2 in-band samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// Where a fixed profile actually points when operated off its design
/// frequency, with the drift across one band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquintReport {
    pub design_frequency_hz: f64,
    pub carrier_center_hz: f64,
    pub bandwidth_hz: f64,
    pub pointing_angle_deg: f64,
    /// Numerically located beam peak at the carrier center.
    pub apparent_center_angle_deg: f64,
    /// Beam peaks at the lower and upper band edges.
    pub edge_angles_deg: (f64, f64),
    /// Largest |edge peak - center peak| over both edges.
    pub max_deviation_from_center_deg: f64,
    /// Band-averaged misalignment loss at the apparent center, dB ≥ 0.
    pub snr_loss_db: f64,
}

/// Band-averaged squint loss with per-sample visibility accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquintLoss {
    pub loss_db: f64,
    /// In-band samples whose beam fell outside the visible region; they are
    /// excluded from the average.
    pub excluded_samples: usize,
}

/// Closed-form beam-peak direction `arcsin((f_design / f_carrier) · sin θ₀)`
/// of a phase profile fixed at the design frequency and radiated at the
/// carrier.
pub fn apparent_angle(
    design_frequency_hz: f64,
    carrier_frequency_hz: f64,
    pointing_angle_deg: f64,
) -> Result<f64, SquintError> {
    let arg = design_frequency_hz / carrier_frequency_hz * pointing_angle_deg.to_radians().sin();
    if arg.abs() > 1.0 {
        return Err(SquintError::BeamInvisible {
            design_hz: design_frequency_hz,
            carrier_hz: carrier_frequency_hz,
            pointing_deg: pointing_angle_deg,
        });
    }
    Ok(arg.asin().to_degrees())
}

fn numeric_peak(
    geom: &ArrayGeometry,
    design_frequency_hz: f64,
    pointing_angle_deg: f64,
    frequency_hz: f64,
    grid_step_deg: f64,
) -> Result<f64, SquintError> {
    let weights = pointing_weights(geom, pointing_angle_deg, design_frequency_hz)?;
    let grid = angle_grid(-89.9, 89.9, grid_step_deg)?;
    let pattern = beampattern(geom, &weights, frequency_hz, &grid, false)?;
    Ok(peak_angle_deg(&pattern))
}

/// Default scan resolution for peak localization.
pub const DEFAULT_GRID_STEP_DEG: f64 = 0.01;

/// Intra-beam squint across one band: numerical beam peaks at the carrier
/// center and both edges `f ± B/2`, under weights fixed at the design
/// frequency.
pub fn intra_band_spread(
    geom: &ArrayGeometry,
    design_frequency_hz: f64,
    carrier_center_hz: f64,
    bandwidth_hz: f64,
    pointing_angle_deg: f64,
    grid_step_deg: f64,
) -> Result<SquintReport, SquintError> {
    if !(bandwidth_hz > 0.0) {
        return Err(SquintError::NonPositiveBandwidth(bandwidth_hz));
    }
    let lower = carrier_center_hz - bandwidth_hz / 2.0;
    let upper = carrier_center_hz + bandwidth_hz / 2.0;
    // Visibility at both edges (and implicitly the center) must hold before
    // any pattern scan.
    let closed_center = apparent_angle(design_frequency_hz, carrier_center_hz, pointing_angle_deg)?;
    apparent_angle(design_frequency_hz, lower, pointing_angle_deg)?;
    apparent_angle(design_frequency_hz, upper, pointing_angle_deg)?;

    let center = numeric_peak(
        geom,
        design_frequency_hz,
        pointing_angle_deg,
        carrier_center_hz,
        grid_step_deg,
    )?;
    // At carriers above the design frequency a grating lobe can tie the
    // mainlobe and make the argmax ambiguous; the closed-form check only
    // applies in the grating-free regime.
    debug_assert!(
        carrier_center_hz > design_frequency_hz
            || (center - closed_center).abs() <= 2.0 * grid_step_deg,
        "numerical peak {center} vs closed form {closed_center}"
    );
    let edge_lo = numeric_peak(
        geom,
        design_frequency_hz,
        pointing_angle_deg,
        lower,
        grid_step_deg,
    )?;
    let edge_hi = numeric_peak(
        geom,
        design_frequency_hz,
        pointing_angle_deg,
        upper,
        grid_step_deg,
    )?;
    let max_dev = (edge_lo - center).abs().max((edge_hi - center).abs());

    let loss = squint_snr_loss(
        geom,
        design_frequency_hz,
        carrier_center_hz,
        bandwidth_hz,
        pointing_angle_deg,
        center,
        16,
    )?;

    Ok(SquintReport {
        design_frequency_hz,
        carrier_center_hz,
        bandwidth_hz,
        pointing_angle_deg,
        apparent_center_angle_deg: center,
        edge_angles_deg: (edge_lo, edge_hi),
        max_deviation_from_center_deg: max_dev,
        snr_loss_db: loss.loss_db,
    })
}

/// Average in-band misalignment loss in dB at a fixed look direction.
///
/// Samples `n_band_samples` frequencies uniformly across the band, averages
/// the array gain at `true_angle_deg` normalized by the perfectly aligned
/// gain `N²`, and reports the result as a non-negative dB loss. Samples whose
/// beam leaves the visible region are excluded and counted.
pub fn squint_snr_loss(
    geom: &ArrayGeometry,
    design_frequency_hz: f64,
    carrier_center_hz: f64,
    bandwidth_hz: f64,
    pointing_angle_deg: f64,
    true_angle_deg: f64,
    n_band_samples: usize,
) -> Result<SquintLoss, SquintError> {
    if n_band_samples < 2 {
        return Err(SquintError::TooFewSamples(n_band_samples));
    }
    if bandwidth_hz < 0.0 {
        return Err(SquintError::NonPositiveBandwidth(bandwidth_hz));
    }
    let weights = pointing_weights(geom, pointing_angle_deg, design_frequency_hz)?;
    let n2 = (geom.n_elements() * geom.n_elements()) as f64;
    let mut sum = 0.0;
    let mut used = 0usize;
    let mut excluded = 0usize;
    for i in 0..n_band_samples {
        let frac = i as f64 / (n_band_samples - 1) as f64;
        let f = carrier_center_hz + bandwidth_hz * (frac - 0.5);
        if apparent_angle(design_frequency_hz, f, pointing_angle_deg).is_err() {
            excluded += 1;
            continue;
        }
        sum += gain_at(geom, &weights, true_angle_deg, f)? / n2;
        used += 1;
    }
    if used == 0 {
        return Err(SquintError::BeamInvisible {
            design_hz: design_frequency_hz,
            carrier_hz: carrier_center_hz,
            pointing_deg: pointing_angle_deg,
        });
    }
    let mean_gain = (sum / used as f64).min(1.0);
    Ok(SquintLoss {
        loss_db: -10.0 * mean_gain.log10(),
        excluded_samples: excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::build_ula;

    #[test]
    fn apparent_angle_identity_at_design_carrier() {
        for theta in [-60.0, -10.0, 0.0, 10.0, 45.0] {
            let a = apparent_angle(24e9, 24e9, theta).unwrap();
            assert!((a - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn apparent_angle_inter_band_values() {
        // 24 GHz profile received at 18 GHz: 10° turns into ~13.4°.
        let a = apparent_angle(24e9, 18e9, 10.0).unwrap();
        assert!((a - 13.39).abs() < 0.01, "got {a}");
        // Same profile at 6 GHz: arcsin(4·sin 10°) ≈ 44.0°.
        let b = apparent_angle(24e9, 6e9, 10.0).unwrap();
        let oracle = (4.0 * 10.0_f64.to_radians().sin()).asin().to_degrees();
        assert!((b - oracle).abs() < 1e-12);
        assert!((b - 44.0).abs() < 0.05, "got {b}");
    }

    #[test]
    fn apparent_angle_odd_in_pointing() {
        let plus = apparent_angle(24e9, 18e9, 25.0).unwrap();
        let minus = apparent_angle(24e9, 18e9, -25.0).unwrap();
        assert_eq!(plus, -minus);
    }

    #[test]
    fn invisible_region_reported() {
        // arcsin argument 4·sin(20°) > 1.
        let err = apparent_angle(24e9, 6e9, 20.0).unwrap_err();
        assert!(matches!(err, SquintError::BeamInvisible { .. }));
    }

    #[test]
    fn intra_band_deviation_at_design_carrier() {
        let geom = build_ula(32, 24e9).unwrap();
        let report =
            intra_band_spread(&geom, 24e9, 24e9, 400e6, 10.0, DEFAULT_GRID_STEP_DEG).unwrap();
        assert!((report.apparent_center_angle_deg - 10.0).abs() < 0.01);
        // Closed-form edge drift: ~0.085°, quoted as 0.1° at reading
        // precision.
        assert!(
            (report.max_deviation_from_center_deg - 0.1).abs() <= 0.02,
            "deviation {}",
            report.max_deviation_from_center_deg
        );
        assert!(report.snr_loss_db >= 0.0);
    }

    #[test]
    fn intra_band_deviation_far_below_design() {
        let geom = build_ula(32, 24e9).unwrap();
        let report =
            intra_band_spread(&geom, 24e9, 6e9, 100e6, 10.0, DEFAULT_GRID_STEP_DEG).unwrap();
        assert!(
            (report.apparent_center_angle_deg - 44.0).abs() < 0.1,
            "center {}",
            report.apparent_center_angle_deg
        );
        assert!(
            (report.max_deviation_from_center_deg - 0.5).abs() <= 0.1,
            "deviation {}",
            report.max_deviation_from_center_deg
        );
    }

    #[test]
    fn vanishing_band_means_vanishing_deviation() {
        let geom = build_ula(32, 24e9).unwrap();
        let report = intra_band_spread(&geom, 24e9, 24e9, 1.0, 10.0, 0.01).unwrap();
        assert!(report.max_deviation_from_center_deg < 2.0 * 0.01);
    }

    #[test]
    fn numeric_peaks_track_closed_form() {
        let geom = build_ula(32, 24e9).unwrap();
        let step = 0.01;
        for (fd, fc, theta) in [
            (24e9, 24e9, 10.0),
            (24e9, 18e9, 10.0),
            (24e9, 6e9, 10.0),
            (24e9, 20e9, -35.0),
            (18e9, 22e9, 15.0),
        ] {
            let closed = apparent_angle(fd, fc, theta).unwrap();
            let numeric = numeric_peak(&geom, fd, theta, fc, step).unwrap();
            assert!(
                (closed - numeric).abs() <= 2.0 * step,
                "closed {closed} numeric {numeric}"
            );
        }
    }

    #[test]
    fn loss_is_zero_when_perfectly_aligned() {
        let geom = build_ula(32, 24e9).unwrap();
        let loss = squint_snr_loss(&geom, 24e9, 24e9, 1e-6, 10.0, 10.0, 2).unwrap();
        assert!(loss.loss_db.abs() < 1e-9);
        assert_eq!(loss.excluded_samples, 0);
    }

    #[test]
    fn loss_matches_dense_integration_oracle() {
        let geom = build_ula(32, 24e9).unwrap();
        let loss = squint_snr_loss(&geom, 24e9, 24e9, 400e6, 10.0, 10.0, 64).unwrap();
        assert!(loss.loss_db > 0.0);

        // Dense trapezoid quadrature of the normalized gain across the band.
        let weights = pointing_weights(&geom, 10.0, 24e9).unwrap();
        let n2 = 32.0 * 32.0;
        let samples = 4096usize;
        let mut acc = 0.0;
        for i in 0..=samples {
            let f = 24e9 + 400e6 * (i as f64 / samples as f64 - 0.5);
            let g = gain_at(&geom, &weights, 10.0, f).unwrap() / n2;
            let w = if i == 0 || i == samples { 0.5 } else { 1.0 };
            acc += w * g;
        }
        let oracle_db = -10.0 * (acc / samples as f64).log10();
        assert!(
            (loss.loss_db - oracle_db).abs() < 0.01,
            "loss {} oracle {oracle_db}",
            loss.loss_db
        );
    }

    #[test]
    fn loss_large_outside_mainlobe() {
        let geom = build_ula(32, 24e9).unwrap();
        let loss = squint_snr_loss(&geom, 24e9, 24e9, 400e6, 10.0, 25.0, 64).unwrap();
        assert!(loss.loss_db > 10.0, "loss {}", loss.loss_db);
    }

    #[test]
    fn invisible_samples_are_excluded_and_counted() {
        // Band 3.75-6.25 GHz under a 24 GHz profile at 10°: samples below
        // 24·sin10° ≈ 4.17 GHz have no visible beam and drop out.
        let geom = build_ula(32, 24e9).unwrap();
        let loss = squint_snr_loss(&geom, 24e9, 5e9, 2.5e9, 10.0, 44.0, 32).unwrap();
        assert!(loss.excluded_samples > 0 && loss.excluded_samples < 32);
        assert!(loss.loss_db.is_finite() && loss.loss_db >= 0.0);

        // Whole band invisible: reported as an error, not a silent zero.
        let err = squint_snr_loss(&geom, 24e9, 3e9, 0.5e9, 10.0, 44.0, 8).unwrap_err();
        assert!(matches!(err, SquintError::BeamInvisible { .. }));
    }

    #[test]
    fn deviation_grows_with_pointing_angle() {
        // Fixed carrier offset and fractional bandwidth; drift grows toward
        // endfire because the arcsin slope does.
        let mut prev = 0.0;
        for theta in [5.0, 15.0, 25.0, 35.0, 45.0, 55.0] {
            let center = apparent_angle(24e9, 22e9, theta).unwrap();
            let edge = apparent_angle(24e9, 22e9 + 0.55e9, theta).unwrap();
            let dev = (center - edge).abs();
            assert!(dev > prev, "dev {dev} at {theta}");
            prev = dev;
        }
    }
}
