//! Fisher information and Cramér-Rao bounds for joint near-field
//! (range, angle) estimation, plus the Fraunhofer boundary and a
//! channel-hardening Monte Carlo check.
//!
//! Observation model: a single snapshot `x = α a(r, θ) + w` with an unknown
//! deterministic complex amplitude `α`, known noise power, and the
//! unit-magnitude near-field steering vector `a`. Concentrating the
//! likelihood over `α` leaves the 2×2 information matrix
//!
//! ```text
//! F_ij = 2 ρ_elem · Re{ d_i^H (I - a a^H / (a^H a)) d_j },   d_i = ∂a/∂x_i
//! ```
//!
//! with `x = (r, θ)`, range in meters and angle in radians, and
//! `ρ_elem = ρ_array / N` the per-element SNR. A snapshot count multiplies
//! the matrix. Derivatives are analytic, written in cancellation-free form so
//! they stay accurate out to ranges far beyond the aperture.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{build_ula, nearfield_steering, ArrayError, ArrayGeometry, FieldPoint};
use crate::mc::{compensated_variance, trial_rng};
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimationError {
    #[error("target must be a near-field point with explicit range")]
    FarFieldTarget,
    #[error("SNR specification invalid: {0}")]
    InvalidSnr(String),
    #[error("SNR spec is for {snr} elements but geometry has {geometry}")]
    SnrElementMismatch { snr: usize, geometry: usize },
    #[error("Fisher matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("Fisher matrix near-singular: condition number {condition:.3e} exceeds {limit:.1e}")]
    NearSingular { condition: f64, limit: f64 },
    #[error("need at least 2 Monte Carlo trials, got {0}")]
    TooFewTrials(usize),
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// Array-level SNR plus the element count needed to convert it to the
/// per-element SNR used by the information matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrSpec {
    pub array_level_snr_db: f64,
    pub n_elements: usize,
    /// Independent-snapshot multiplier on the information matrix.
    pub snapshots: u32,
}

impl SnrSpec {
    pub fn array_level_db(array_level_snr_db: f64, n_elements: usize) -> Self {
        Self {
            array_level_snr_db,
            n_elements,
            snapshots: 1,
        }
    }

    pub fn with_snapshots(mut self, snapshots: u32) -> Self {
        self.snapshots = snapshots;
        self
    }

    /// `10^(dB/10) / n_elements`.
    pub fn per_element_snr_linear(&self) -> f64 {
        10f64.powf(self.array_level_snr_db / 10.0) / self.n_elements as f64
    }

    fn validate(&self, geom: &ArrayGeometry) -> Result<(), EstimationError> {
        if !self.array_level_snr_db.is_finite() {
            return Err(EstimationError::InvalidSnr(format!(
                "array-level SNR {} dB is not finite",
                self.array_level_snr_db
            )));
        }
        if self.n_elements == 0 || self.snapshots == 0 {
            return Err(EstimationError::InvalidSnr(
                "element and snapshot counts must be positive".into(),
            ));
        }
        if self.n_elements != geom.n_elements() {
            return Err(EstimationError::SnrElementMismatch {
                snr: self.n_elements,
                geometry: geom.n_elements(),
            });
        }
        Ok(())
    }
}

/// 2×2 Fisher information over (range m, angle rad).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherMatrix {
    /// Row-major symmetric matrix `[[F_rr, F_rθ], [F_rθ, F_θθ]]`.
    pub matrix: [[f64; 2]; 2],
    pub frequency_hz: f64,
    pub target: FieldPoint,
}

/// Cramér-Rao bounds extracted from the inverse information matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrbResult {
    pub range_crb_m2: f64,
    pub angle_crb_rad2: f64,
    pub angle_crb_deg2: f64,
    /// Full 2×2 inverse of the Fisher matrix, (m, rad) units.
    pub crb_matrix: [[f64; 2]; 2],
}

/// Condition-number limit above which the information matrix is reported as
/// near-singular instead of inverted.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Phase derivatives `(∂ψ_n/∂r, ∂ψ_n/∂θ)` of the steering phase
/// `a_n = exp(-j ψ_n)`, `ψ_n = k (r - r_n)`, with
/// `r_n = sqrt(r² + p² - 2 r p sinθ)`. The reference-phase term `∂r/∂r = 1`
/// is included.
///
/// The range derivative `k (1 - (r - p sinθ)/r_n)` is rewritten as
/// `k p² cos²θ / (r_n (r - p sinθ + r_n))`, which avoids the subtractive
/// cancellation of the direct form at large range.
fn phase_gradients(k: f64, range_m: f64, theta_rad: f64, p: f64) -> (f64, f64) {
    let (sin_t, cos_t) = theta_rad.sin_cos();
    let rn = (range_m * range_m + p * (p - 2.0 * range_m * sin_t)).sqrt();
    let dr = k * p * p * cos_t * cos_t / (rn * (range_m - p * sin_t + rn));
    let dtheta = k * range_m * p * cos_t / rn;
    (dr, dtheta)
}

/// Analytic steering-vector derivatives `(∂a/∂r, ∂a/∂θ)` for a near-field
/// target, angle in radians. `d_i = -j g_i ⊙ a` with the phase gradients
/// above.
pub fn steering_derivatives(
    geom: &ArrayGeometry,
    range_m: f64,
    angle_deg: f64,
    frequency_hz: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>), EstimationError> {
    let steering = nearfield_steering(geom, range_m, angle_deg, frequency_hz)?;
    let k = 2.0 * std::f64::consts::PI * frequency_hz / SPEED_OF_LIGHT;
    let theta = angle_deg.to_radians();
    let mut d_r = Vec::with_capacity(steering.entries.len());
    let mut d_t = Vec::with_capacity(steering.entries.len());
    for (&p, entry) in geom.element_positions_m().iter().zip(&steering.entries) {
        let (gr, gt) = phase_gradients(k, range_m, theta, p);
        let mj = Complex64::new(0.0, -1.0);
        d_r.push(mj * gr * entry);
        d_t.push(mj * gt * entry);
    }
    Ok((d_r, d_t))
}

/// Fisher information for a near-field target under the concentrated
/// single-snapshot model.
pub fn fisher_matrix(
    geom: &ArrayGeometry,
    target: &FieldPoint,
    frequency_hz: f64,
    snr: &SnrSpec,
) -> Result<FisherMatrix, EstimationError> {
    let (range_m, angle_deg) = match *target {
        FieldPoint::NearField { range_m, angle_deg } => (range_m, angle_deg),
        FieldPoint::FarField { .. } => return Err(EstimationError::FarFieldTarget),
    };
    snr.validate(geom)?;
    // Reuses the steering-vector validation (angle range, target outside the
    // aperture) and pins the target to the same phase model.
    let steering = nearfield_steering(geom, range_m, angle_deg, frequency_hz)?;
    let a = &steering.entries;
    let n = geom.n_elements() as f64;
    let (d_r, d_t) = steering_derivatives(geom, range_m, angle_deg, frequency_hz)?;

    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(xi, yi)| xi.conj() * yi).sum()
    };
    let a_vec: Vec<Complex64> = a.clone();
    let projected = |di: &[Complex64], dj: &[Complex64]| -> f64 {
        let dij = dot(di, dj);
        let dia = dot(di, &a_vec);
        let adj = dot(&a_vec, dj);
        (dij - dia * adj / n).re
    };

    let scale = 2.0 * snr.per_element_snr_linear() * snr.snapshots as f64;
    let f_rr = scale * projected(&d_r, &d_r);
    let f_tt = scale * projected(&d_t, &d_t);
    let f_rt = scale * projected(&d_r, &d_t);

    Ok(FisherMatrix {
        matrix: [[f_rr, f_rt], [f_rt, f_tt]],
        frequency_hz,
        target: *target,
    })
}

/// Invert the information matrix into Cramér-Rao bounds, with positive
/// definiteness and conditioning checks.
pub fn crb(fim: &FisherMatrix) -> Result<CrbResult, EstimationError> {
    crb_with_condition_limit(fim, CONDITION_LIMIT)
}

pub fn crb_with_condition_limit(
    fim: &FisherMatrix,
    condition_limit: f64,
) -> Result<CrbResult, EstimationError> {
    let [[a, b], [_, d]] = fim.matrix;
    let det = a * d - b * b;
    if !(a > 0.0 && det > 0.0) {
        return Err(EstimationError::NotPositiveDefinite);
    }
    // Eigenvalues of the symmetric 2×2 matrix: the large one directly, the
    // small one through the determinant so it survives the cancellation.
    let mean = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let hi = mean + disc;
    let lo = det / hi;
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > condition_limit {
        return Err(EstimationError::NearSingular {
            condition,
            limit: condition_limit,
        });
    }
    let inv = [[d / det, -b / det], [-b / det, a / det]];
    let rad2 = inv[1][1];
    let deg_per_rad = 180.0 / std::f64::consts::PI;
    Ok(CrbResult {
        range_crb_m2: inv[0][0],
        angle_crb_rad2: rad2,
        angle_crb_deg2: rad2 * deg_per_rad * deg_per_rad,
        crb_matrix: inv,
    })
}

/// How array geometry follows the carrier in a frequency sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum GeometryRule {
    /// Rebuild the array with half-wavelength spacing at every swept
    /// carrier: the electrical layout is constant, the physical aperture
    /// shrinks as frequency grows.
    PerCarrierHalfWavelength { n_elements: usize },
    /// Keep the physical element positions fixed at the half-wavelength
    /// layout of one design carrier for the whole sweep.
    FixedAperture {
        n_elements: usize,
        design_frequency_hz: f64,
    },
}

impl GeometryRule {
    pub fn n_elements(&self) -> usize {
        match *self {
            GeometryRule::PerCarrierHalfWavelength { n_elements } => n_elements,
            GeometryRule::FixedAperture { n_elements, .. } => n_elements,
        }
    }

    pub fn geometry_at(&self, carrier_hz: f64) -> Result<ArrayGeometry, ArrayError> {
        match *self {
            GeometryRule::PerCarrierHalfWavelength { n_elements } => {
                build_ula(n_elements, carrier_hz)
            }
            GeometryRule::FixedAperture {
                n_elements,
                design_frequency_hz,
            } => build_ula(n_elements, design_frequency_hz),
        }
    }
}

/// One (frequency, range) cell of a CRB sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrbCell {
    pub frequency_hz: f64,
    pub range_m: f64,
    pub angle_deg: f64,
    pub fraunhofer_m: f64,
    pub outcome: CellOutcome,
}

/// Per-cell result; failures are data, not aborts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum CellOutcome {
    Ok {
        range_crb_m2: f64,
        angle_crb_rad2: f64,
        angle_crb_deg2: f64,
    },
    Failed {
        reason: String,
    },
}

/// CRB table over a carrier × range grid at a fixed look angle.
///
/// Cells are independent and evaluated in parallel; the output order is the
/// row-major (frequency, range) order of the inputs regardless of thread
/// count.
pub fn crb_sweep(
    rule: &GeometryRule,
    frequencies_hz: &[f64],
    ranges_m: &[f64],
    angle_deg: f64,
    snr: &SnrSpec,
) -> Vec<CrbCell> {
    let cells: Vec<(f64, f64)> = frequencies_hz
        .iter()
        .flat_map(|&f| ranges_m.iter().map(move |&r| (f, r)))
        .collect();
    cells
        .par_iter()
        .map(|&(f, r)| {
            let outcome = (|| -> Result<(CrbResult, f64), EstimationError> {
                let geom = rule.geometry_at(f)?;
                let target = FieldPoint::NearField {
                    range_m: r,
                    angle_deg,
                };
                let fim = fisher_matrix(&geom, &target, f, snr)?;
                let result = crb(&fim)?;
                Ok((result, fraunhofer_distance(&geom, f)))
            })();
            match outcome {
                Ok((c, fraunhofer)) => CrbCell {
                    frequency_hz: f,
                    range_m: r,
                    angle_deg,
                    fraunhofer_m: fraunhofer,
                    outcome: CellOutcome::Ok {
                        range_crb_m2: c.range_crb_m2,
                        angle_crb_rad2: c.angle_crb_rad2,
                        angle_crb_deg2: c.angle_crb_deg2,
                    },
                },
                Err(e) => CrbCell {
                    frequency_hz: f,
                    range_m: r,
                    angle_deg,
                    fraunhofer_m: rule
                        .geometry_at(f)
                        .map(|g| fraunhofer_distance(&g, f))
                        .unwrap_or(f64::NAN),
                    outcome: CellOutcome::Failed {
                        reason: e.to_string(),
                    },
                },
            }
        })
        .collect()
}

/// Conventional near-/far-field boundary `2 D² / λ` for aperture `D`.
pub fn fraunhofer_distance(geom: &ArrayGeometry, frequency_hz: f64) -> f64 {
    let aperture = geom.aperture_m();
    2.0 * aperture * aperture * frequency_hz / SPEED_OF_LIGHT
}

/// Sample variance of `‖h‖²/N` for i.i.d. unit-variance complex Gaussian
/// entries, to check that fading hardens like 1/N.
///
/// Deterministic for a given seed: every trial draws from its own derived
/// stream, so thread count or evaluation order cannot alter the estimate.
pub fn hardening_variance(
    n_antennas: usize,
    n_trials: usize,
    seed: u64,
) -> Result<f64, EstimationError> {
    if n_trials < 2 {
        return Err(EstimationError::TooFewTrials(n_trials));
    }
    let values: Vec<f64> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let mut sum = 0.0;
            for _ in 0..n_antennas {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                // Unit-variance complex Gaussian: each quadrature has
                // variance 1/2.
                sum += 0.5 * (re * re + im * im);
            }
            sum / n_antennas as f64
        })
        .collect();
    Ok(compensated_variance(&values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spot_target() -> FieldPoint {
        FieldPoint::NearField {
            range_m: 2.0,
            angle_deg: 0.0,
        }
    }

    #[test]
    fn rejects_farfield_target() {
        let geom = build_ula(32, 24e9).unwrap();
        let snr = SnrSpec::array_level_db(20.0, 32);
        let err =
            fisher_matrix(&geom, &FieldPoint::FarField { angle_deg: 0.0 }, 24e9, &snr).unwrap_err();
        assert!(matches!(err, EstimationError::FarFieldTarget));
    }

    #[test]
    fn rejects_nonfinite_snr_and_mismatched_elements() {
        let geom = build_ula(32, 24e9).unwrap();
        let bad = SnrSpec::array_level_db(f64::NAN, 32);
        assert!(fisher_matrix(&geom, &spot_target(), 24e9, &bad).is_err());
        let mismatch = SnrSpec::array_level_db(20.0, 16);
        assert!(matches!(
            fisher_matrix(&geom, &spot_target(), 24e9, &mismatch),
            Err(EstimationError::SnrElementMismatch { .. })
        ));
    }

    #[test]
    fn fim_symmetric_and_positive_definite() {
        let geom = build_ula(32, 24e9).unwrap();
        let snr = SnrSpec::array_level_db(20.0, 32);
        let target = FieldPoint::NearField {
            range_m: 3.5,
            angle_deg: 20.0,
        };
        let fim = fisher_matrix(&geom, &target, 24e9, &snr).unwrap();
        let m = fim.matrix;
        assert_eq!(m[0][1], m[1][0]);
        assert!(m[0][0] > 0.0 && m[1][1] > 0.0);
        assert!(m[0][0] * m[1][1] - m[0][1] * m[0][1] > 0.0);
    }

    #[test]
    fn fim_scales_linearly_with_snr() {
        let geom = build_ula(32, 24e9).unwrap();
        let target = spot_target();
        let base = SnrSpec::array_level_db(20.0, 32);
        let doubled = SnrSpec::array_level_db(20.0 + 10.0 * 2f64.log10(), 32);
        let f1 = fisher_matrix(&geom, &target, 24e9, &base).unwrap();
        let f2 = fisher_matrix(&geom, &target, 24e9, &doubled).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let (x, y) = (f1.matrix[i][j], f2.matrix[i][j]);
                if x == 0.0 {
                    assert_eq!(y, 0.0);
                } else {
                    assert!((y / x - 2.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn snapshots_multiply_information() {
        let geom = build_ula(16, 10e9).unwrap();
        let target = spot_target();
        let one = SnrSpec::array_level_db(15.0, 16);
        let four = one.with_snapshots(4);
        let f1 = fisher_matrix(&geom, &target, 10e9, &one).unwrap();
        let f4 = fisher_matrix(&geom, &target, 10e9, &four).unwrap();
        assert_eq!(f4.matrix[0][0], 4.0 * f1.matrix[0][0]);
        assert_eq!(f4.matrix[1][1], 4.0 * f1.matrix[1][1]);
    }

    #[test]
    fn crb_inverts_diagonal_fim() {
        let fim = FisherMatrix {
            matrix: [[4.0, 0.0], [0.0, 25.0]],
            frequency_hz: 1e9,
            target: spot_target(),
        };
        let c = crb(&fim).unwrap();
        assert_eq!(c.range_crb_m2, 0.25);
        assert_eq!(c.angle_crb_rad2, 0.04);
    }

    #[test]
    fn crb_diagonal_dominates_reciprocal() {
        // (F^{-1})_ii >= 1/F_ii entrywise, equality iff off-diagonal is 0.
        let fim = FisherMatrix {
            matrix: [[4.0, 1.5], [1.5, 25.0]],
            frequency_hz: 1e9,
            target: spot_target(),
        };
        let c = crb(&fim).unwrap();
        assert!(c.range_crb_m2 > 1.0 / 4.0);
        assert!(c.angle_crb_rad2 > 1.0 / 25.0);
    }

    #[test]
    fn crb_product_is_identity() {
        let geom = build_ula(32, 24e9).unwrap();
        let snr = SnrSpec::array_level_db(20.0, 32);
        let target = FieldPoint::NearField {
            range_m: 2.0,
            angle_deg: 12.0,
        };
        let fim = fisher_matrix(&geom, &target, 24e9, &snr).unwrap();
        let c = crb(&fim).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let prod: f64 = (0..2).map(|k| c.crb_matrix[i][k] * fim.matrix[k][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((prod - expected).abs() < 1e-8, "({i},{j}) = {prod}");
            }
        }
    }

    #[test]
    fn crb_reports_near_singular() {
        let fim = FisherMatrix {
            matrix: [[1.0, 0.0], [0.0, 1e-14]],
            frequency_hz: 1e9,
            target: spot_target(),
        };
        assert!(matches!(
            crb(&fim),
            Err(EstimationError::NearSingular { .. })
        ));
        let indefinite = FisherMatrix {
            matrix: [[1.0, 3.0], [3.0, 1.0]],
            frequency_hz: 1e9,
            target: spot_target(),
        };
        assert!(matches!(
            crb(&indefinite),
            Err(EstimationError::NotPositiveDefinite)
        ));
    }

    #[test]
    fn fraunhofer_reference_values() {
        // Aperture equal to one wavelength: boundary at exactly 2λ.
        let f = 1e9;
        let lambda = SPEED_OF_LIGHT / f;
        let g = build_ula(3, f).unwrap(); // aperture = 2·λ/2 = λ
        assert!((g.aperture_m() - lambda).abs() < 1e-12);
        assert!((fraunhofer_distance(&g, f) - 2.0 * lambda).abs() < 1e-12);

        // 32 elements at 24 GHz: D = 0.1936 m, 2D²/λ ≈ 6.00 m.
        let g32 = build_ula(32, 24e9).unwrap();
        let d = fraunhofer_distance(&g32, 24e9);
        assert!((d - 6.00).abs() < 0.01, "got {d}");

        // Doubling frequency at fixed physical aperture doubles the distance.
        assert!((fraunhofer_distance(&g32, 48e9) - 2.0 * d).abs() < 1e-9);
    }

    #[test]
    fn range_information_dies_off_in_the_far_field() {
        // The default condition limit trips near r = 10 km by design, so
        // this growth check raises it explicitly.
        let geom = build_ula(32, 24e9).unwrap();
        let snr = SnrSpec::array_level_db(20.0, 32);
        let mut prev = 0.0;
        for r in [10.0, 100.0, 1000.0, 10_000.0] {
            let target = FieldPoint::NearField {
                range_m: r,
                angle_deg: 0.0,
            };
            let fim = fisher_matrix(&geom, &target, 24e9, &snr).unwrap();
            let c = crb_with_condition_limit(&fim, 1e20).unwrap();
            assert!(
                c.range_crb_m2 > prev,
                "range CRB {} did not grow at r={r}",
                c.range_crb_m2
            );
            prev = c.range_crb_m2;
        }
    }

    #[test]
    fn sweep_flags_failures_instead_of_aborting() {
        let rule = GeometryRule::PerCarrierHalfWavelength { n_elements: 32 };
        let snr = SnrSpec::array_level_db(20.0, 32);
        // 0.2 m range is inside the 7 GHz half-aperture (0.33 m) but clears
        // the 24 GHz one (0.097 m): exactly one cell must be flagged.
        let cells = crb_sweep(&rule, &[7e9, 24e9], &[0.2, 2.0], 0.0, &snr);
        assert_eq!(cells.len(), 4);
        let failed: Vec<_> = cells
            .iter()
            .filter(|c| matches!(c.outcome, CellOutcome::Failed { .. }))
            .collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].range_m, 0.2);
        assert_eq!(failed[0].frequency_hz, 7e9);
    }

    #[test]
    fn hardening_variance_tracks_one_over_n() {
        let n = 64;
        let var = hardening_variance(n, 100_000, 7).unwrap();
        let expected = 1.0 / n as f64;
        assert!(
            (var - expected).abs() / expected < 0.10,
            "var {var} vs {expected}"
        );
    }

    #[test]
    fn hardening_log_log_slope_near_minus_one() {
        let ns = [16usize, 64, 256];
        let points: Vec<(f64, f64)> = ns
            .iter()
            .map(|&n| {
                let v = hardening_variance(n, 100_000, 11).unwrap();
                ((n as f64).ln(), v.ln())
            })
            .collect();
        let mx = points.iter().map(|p| p.0).sum::<f64>() / 3.0;
        let my = points.iter().map(|p| p.1).sum::<f64>() / 3.0;
        let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!((slope + 1.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn hardening_rejects_degenerate_trials() {
        assert!(matches!(
            hardening_variance(8, 1, 0),
            Err(EstimationError::TooFewTrials(1))
        ));
    }

    #[test]
    fn hardening_deterministic_per_seed() {
        let a = hardening_variance(16, 5000, 123).unwrap();
        let b = hardening_variance(16, 5000, 123).unwrap();
        let c = hardening_variance(16, 5000, 124).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
