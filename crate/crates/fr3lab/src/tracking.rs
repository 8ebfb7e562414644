//! Drone-localization case study: compose a distance/frequency link budget,
//! the near-field estimation bounds, and squint losses into RMSE-vs-distance
//! curves for several operating regimes, plus a hybrid policy that always
//! rides the best one.
//!
//! The positional error at boresight combines the range bound with the
//! cross-range chord of the angle bound:
//! `rmse(d) = sqrt(CRB_range + d² · CRB_angle)`, CRB_angle in rad².

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{build_ula, ArrayError, FieldPoint};
use crate::estimation::{crb, fisher_matrix, EstimationError, SnrSpec};
use crate::squint::{squint_snr_loss, SquintError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackingError {
    #[error("distance must be positive, got {0} m")]
    BadDistance(f64),
    #[error("accuracy target must be positive, got {0} m")]
    BadTarget(f64),
    #[error("bracket [{0}, {1}] m is empty")]
    BadBracket(f64, f64),
    #[error("need at least 2 regimes for a hybrid policy")]
    TooFewRegimes,
    #[error("SNR floor: information matrix near-singular at {distance_m} m, RMSE unbounded")]
    SnrFloor { distance_m: f64 },
    #[error(transparent)]
    Array(#[from] ArrayError),
    #[error(transparent)]
    Squint(#[from] SquintError),
}

/// How squint is handled by one operating regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SquintMode {
    /// Narrow fractional bandwidth, squint negligible by construction.
    None,
    /// Fixed analog profile across the sensing bandwidth; pays the
    /// band-averaged misalignment loss.
    IntraUncompensated,
    /// Ideal frequency-dependent digital correction; zero squint loss.
    Compensated,
}

/// One operating point of the tracker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeConfig {
    pub name: String,
    pub carrier_hz: f64,
    pub n_elements: usize,
    pub squint_mode: SquintMode,
    pub design_frequency_hz: f64,
}

/// Glass-blockage band applied above a frequency threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Blockage {
    pub zone_m: (f64, f64),
    pub loss_db: f64,
    pub applies_above_hz: f64,
}

/// Steering scenario behind the uncompensated regime's squint loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquintScenario {
    pub bandwidth_hz: f64,
    pub pointing_angle_deg: f64,
    pub n_band_samples: usize,
}

/// Distance/frequency/array scaling law anchored at a reference point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBudget {
    /// Array-level SNR at the reference distance, frequency, and array size.
    pub reference_snr_db: f64,
    pub reference_distance_m: f64,
    pub reference_frequency_hz: f64,
    pub reference_n_elements: usize,
    pub path_loss_exponent: f64,
    pub blockage: Blockage,
    pub squint: SquintScenario,
}

impl LinkBudget {
    fn validate(&self) -> Result<(), TrackingError> {
        if !(self.path_loss_exponent > 0.0) || !(self.reference_distance_m > 0.0) {
            return Err(TrackingError::BadDistance(self.reference_distance_m));
        }
        if self.blockage.zone_m.1 < self.blockage.zone_m.0 || self.blockage.loss_db < 0.0 {
            return Err(TrackingError::BadBracket(
                self.blockage.zone_m.0,
                self.blockage.zone_m.1,
            ));
        }
        Ok(())
    }
}

/// The calibration shipped with the repository: free constants tuned so the
/// bundled scenario meets its named coverage targets. See the bundled
/// configuration file for the documented values; these mirror it.
pub fn reference_calibration() -> LinkBudget {
    LinkBudget {
        reference_snr_db: 105.0,
        reference_distance_m: 1.0,
        reference_frequency_hz: 6e9,
        reference_n_elements: 8,
        path_loss_exponent: 2.0,
        blockage: Blockage {
            zone_m: (20.0, 25.0),
            loss_db: 15.0,
            applies_above_hz: 10e9,
        },
        squint: SquintScenario {
            bandwidth_hz: 3e9,
            pointing_angle_deg: 50.0,
            n_band_samples: 64,
        },
    }
}

/// The three regimes of the bundled scenario: a wide 6 GHz beam and a 24 GHz
/// array of similar physical aperture with and without squint compensation.
pub fn default_regimes() -> Vec<RegimeConfig> {
    vec![
        RegimeConfig {
            name: "6ghz".into(),
            carrier_hz: 6e9,
            n_elements: 8,
            squint_mode: SquintMode::None,
            design_frequency_hz: 6e9,
        },
        RegimeConfig {
            name: "24ghz-uncompensated".into(),
            carrier_hz: 24e9,
            n_elements: 32,
            squint_mode: SquintMode::IntraUncompensated,
            design_frequency_hz: 24e9,
        },
        RegimeConfig {
            name: "24ghz-compensated".into(),
            carrier_hz: 24e9,
            n_elements: 32,
            squint_mode: SquintMode::Compensated,
            design_frequency_hz: 24e9,
        },
    ]
}

/// Band-averaged squint loss a regime pays, dB.
pub fn regime_squint_loss_db(
    link: &LinkBudget,
    regime: &RegimeConfig,
) -> Result<f64, TrackingError> {
    match regime.squint_mode {
        SquintMode::None | SquintMode::Compensated => Ok(0.0),
        SquintMode::IntraUncompensated => {
            let geom = build_ula(regime.n_elements, regime.design_frequency_hz)?;
            let loss = squint_snr_loss(
                &geom,
                regime.design_frequency_hz,
                regime.carrier_hz,
                link.squint.bandwidth_hz,
                link.squint.pointing_angle_deg,
                link.squint.pointing_angle_deg,
                link.squint.n_band_samples,
            )?;
            Ok(loss.loss_db)
        }
    }
}

fn snr_at_inner(
    link: &LinkBudget,
    regime: &RegimeConfig,
    distance_m: f64,
    include_blockage: bool,
) -> Result<f64, TrackingError> {
    link.validate()?;
    if !(distance_m > 0.0) {
        return Err(TrackingError::BadDistance(distance_m));
    }
    let mut snr = link.reference_snr_db;
    snr -= 10.0 * link.path_loss_exponent * (distance_m / link.reference_distance_m).log10();
    snr -= 20.0 * (regime.carrier_hz / link.reference_frequency_hz).log10();
    snr += 10.0 * (regime.n_elements as f64 / link.reference_n_elements as f64).log10();
    if include_blockage
        && regime.carrier_hz > link.blockage.applies_above_hz
        && distance_m >= link.blockage.zone_m.0
        && distance_m <= link.blockage.zone_m.1
    {
        snr -= link.blockage.loss_db;
    }
    snr -= regime_squint_loss_db(link, regime)?;
    Ok(snr)
}

/// Array-level SNR of a regime at a distance: the reference value minus
/// path-loss, frequency, blockage, and squint penalties plus array gain.
pub fn snr_at(
    link: &LinkBudget,
    regime: &RegimeConfig,
    distance_m: f64,
) -> Result<f64, TrackingError> {
    snr_at_inner(link, regime, distance_m, true)
}

fn rmse_inner(
    link: &LinkBudget,
    regime: &RegimeConfig,
    distance_m: f64,
    include_blockage: bool,
) -> Result<f64, TrackingError> {
    let snr_db = snr_at_inner(link, regime, distance_m, include_blockage)?;
    let geom = build_ula(regime.n_elements, regime.design_frequency_hz)?;
    let snr = SnrSpec::array_level_db(snr_db, regime.n_elements);
    let target = FieldPoint::NearField {
        range_m: distance_m,
        angle_deg: 0.0,
    };
    let fim = fisher_matrix(&geom, &target, regime.carrier_hz, &snr).map_err(|e| match e {
        EstimationError::Array(a) => TrackingError::Array(a),
        _ => TrackingError::SnrFloor { distance_m },
    })?;
    let bounds = crb(&fim).map_err(|_| TrackingError::SnrFloor { distance_m })?;
    Ok((bounds.range_crb_m2 + distance_m * distance_m * bounds.angle_crb_rad2).sqrt())
}

/// Positional RMSE bound of one regime at one distance, meters.
pub fn localization_rmse(
    link: &LinkBudget,
    regime: &RegimeConfig,
    distance_m: f64,
) -> Result<f64, TrackingError> {
    rmse_inner(link, regime, distance_m, true)
}

/// Where a coverage search ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "radius_m")]
pub enum CoverageOutcome {
    /// Largest distance meeting the target, to 1 cm.
    Radius(f64),
    /// The target is missed already at the near end of the bracket.
    NeverMeetsTarget,
    /// The target holds across the whole bracket.
    AlwaysMeetsWithinBracket,
}

/// Default search bracket for [`coverage_radius`], meters.
pub const COVERAGE_BRACKET_M: (f64, f64) = (1.0, 100.0);

/// Largest distance at which the regime's RMSE stays within the accuracy
/// target, by bisection over the bracket at 1 cm tolerance.
///
/// Blockage zones are ignored: coverage means the contiguous clear-air
/// radius, and RMSE is monotone in distance once blockage is excluded.
pub fn coverage_radius(
    link: &LinkBudget,
    regime: &RegimeConfig,
    accuracy_target_m: f64,
    bracket_m: (f64, f64),
) -> Result<CoverageOutcome, TrackingError> {
    if !(accuracy_target_m > 0.0) {
        return Err(TrackingError::BadTarget(accuracy_target_m));
    }
    let (mut lo, mut hi) = bracket_m;
    if !(lo > 0.0 && hi > lo) {
        return Err(TrackingError::BadBracket(lo, hi));
    }
    let meets = |d: f64| -> Result<bool, TrackingError> {
        match rmse_inner(link, regime, d, false) {
            Ok(rmse) => Ok(rmse <= accuracy_target_m),
            Err(TrackingError::SnrFloor { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    if !meets(lo)? {
        return Ok(CoverageOutcome::NeverMeetsTarget);
    }
    if meets(hi)? {
        return Ok(CoverageOutcome::AlwaysMeetsWithinBracket);
    }
    while hi - lo > 0.01 {
        let mid = 0.5 * (lo + hi);
        if meets(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CoverageOutcome::Radius(lo))
}

/// The regime a hybrid tracker runs at one distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridChoice {
    pub regime_index: usize,
    pub regime_name: String,
    pub rmse_m: f64,
}

/// Pick the minimum-RMSE regime at a distance; ties resolve toward the lower
/// carrier, then input order. Regimes at their SNR floor count as unbounded.
pub fn hybrid_policy(
    link: &LinkBudget,
    regimes: &[RegimeConfig],
    distance_m: f64,
) -> Result<HybridChoice, TrackingError> {
    if regimes.len() < 2 {
        return Err(TrackingError::TooFewRegimes);
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, regime) in regimes.iter().enumerate() {
        let rmse = match localization_rmse(link, regime, distance_m) {
            Ok(r) => r,
            Err(TrackingError::SnrFloor { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        let better = match best {
            None => true,
            Some((bi, br)) => {
                rmse < br || (rmse == br && regime.carrier_hz < regimes[bi].carrier_hz)
            }
        };
        if better {
            best = Some((i, rmse));
        }
    }
    let (index, rmse) = best.expect("at least two regimes");
    Ok(HybridChoice {
        regime_index: index,
        regime_name: regimes[index].name.clone(),
        rmse_m: rmse,
    })
}

/// RMSE of every regime plus the hybrid choice over a distance sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseCurve {
    pub distances_m: Vec<f64>,
    pub regime_names: Vec<String>,
    /// `rmse[regime][distance]`, infinite where the SNR floor was hit.
    pub rmse_m: Vec<Vec<f64>>,
    pub hybrid: Vec<HybridChoice>,
}

pub fn rmse_curve(
    link: &LinkBudget,
    regimes: &[RegimeConfig],
    distances_m: &[f64],
) -> Result<RmseCurve, TrackingError> {
    if regimes.len() < 2 {
        return Err(TrackingError::TooFewRegimes);
    }
    let mut rmse = vec![Vec::with_capacity(distances_m.len()); regimes.len()];
    let mut hybrid = Vec::with_capacity(distances_m.len());
    for &d in distances_m {
        for (i, regime) in regimes.iter().enumerate() {
            let value = match localization_rmse(link, regime, d) {
                Ok(r) => r,
                Err(TrackingError::SnrFloor { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            rmse[i].push(value);
        }
        hybrid.push(hybrid_policy(link, regimes, d)?);
    }
    Ok(RmseCurve {
        distances_m: distances_m.to_vec(),
        regime_names: regimes.iter().map(|r| r.name.clone()).collect(),
        rmse_m: rmse,
        hybrid,
    })
}
