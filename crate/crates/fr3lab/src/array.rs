//! Uniform linear array geometry, steering vectors, beamformer weights, and
//! beampattern evaluation.
//!
//! Conventions shared by the whole crate:
//!
//! * Angles are degrees at every public interface and radians internally.
//! * Element positions lie on a line with the centroid at the origin, which
//!   is also the phase reference for every steering vector.
//! * Pure phase model: every steering and weight entry has unit magnitude
//!   (ideal phase shifters, no amplitude taper, no mutual coupling).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::SPEED_OF_LIGHT;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArrayError {
    #[error("array needs at least 2 elements, got {0}")]
    TooFewElements(usize),
    #[error("frequency must be positive, got {0} Hz")]
    NonPositiveFrequency(f64),
    #[error("angle {0}° outside the open interval (-90°, 90°)")]
    AngleOutOfRange(f64),
    #[error("range {range_m} m does not clear the aperture half-width {aperture_half_m} m")]
    RangeInsideAperture { range_m: f64, aperture_half_m: f64 },
    #[error("angle grid is empty")]
    EmptyGrid,
    #[error("angle grid must be strictly increasing")]
    UnsortedGrid,
    #[error("weights built for {weights} elements applied to {geometry}-element array")]
    ElementCountMismatch { weights: usize, geometry: usize },
}

/// Geometry of a uniform linear array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    n_elements: usize,
    design_frequency_hz: f64,
    /// Positions in meters along the array axis, centroid at 0, ascending.
    element_positions_m: Vec<f64>,
    spacing_m: f64,
}

impl ArrayGeometry {
    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn design_frequency_hz(&self) -> f64 {
        self.design_frequency_hz
    }

    pub fn element_positions_m(&self) -> &[f64] {
        &self.element_positions_m
    }

    pub fn spacing_m(&self) -> f64 {
        self.spacing_m
    }

    /// Physical aperture `(n_elements - 1) * spacing` in meters.
    pub fn aperture_m(&self) -> f64 {
        (self.n_elements - 1) as f64 * self.spacing_m
    }

    /// Largest |position|, i.e. the aperture half-width.
    pub fn max_abs_position_m(&self) -> f64 {
        self.element_positions_m
            .iter()
            .fold(0.0_f64, |m, p| m.max(p.abs()))
    }
}

/// Build a ULA with half-wavelength spacing at the design frequency.
///
/// Spacing is `c / (2 f)`; positions are centered so the centroid sits at
/// the origin.
pub fn build_ula(n_elements: usize, design_frequency_hz: f64) -> Result<ArrayGeometry, ArrayError> {
    if n_elements < 2 {
        return Err(ArrayError::TooFewElements(n_elements));
    }
    if !(design_frequency_hz > 0.0) || !design_frequency_hz.is_finite() {
        return Err(ArrayError::NonPositiveFrequency(design_frequency_hz));
    }
    let spacing = SPEED_OF_LIGHT / (2.0 * design_frequency_hz);
    let mid = (n_elements - 1) as f64 / 2.0;
    let positions = (0..n_elements)
        .map(|n| (n as f64 - mid) * spacing)
        .collect();
    Ok(ArrayGeometry {
        n_elements,
        design_frequency_hz,
        element_positions_m: positions,
        spacing_m: spacing,
    })
}

/// A point the array looks at: a bare direction, or a direction plus range
/// inside the radiating near field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FieldPoint {
    FarField { angle_deg: f64 },
    NearField { range_m: f64, angle_deg: f64 },
}

impl FieldPoint {
    pub fn angle_deg(&self) -> f64 {
        match *self {
            FieldPoint::FarField { angle_deg } => angle_deg,
            FieldPoint::NearField { angle_deg, .. } => angle_deg,
        }
    }
}

/// Per-element complex response to a field point at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    pub entries: Vec<Complex64>,
    pub frequency_hz: f64,
    pub point: FieldPoint,
}

/// Fixed analog phase profile pointed at one angle for one design carrier.
///
/// The profile never changes with the radiated frequency; that mismatch is
/// exactly what the squint analyses measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerWeights {
    pub entries: Vec<Complex64>,
    pub pointing_angle_deg: f64,
    pub design_frequency_hz: f64,
}

/// Power response over an angle grid at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Beampattern {
    pub angle_grid_deg: Vec<f64>,
    pub gains: Vec<f64>,
    pub frequency_hz: f64,
}

fn check_angle(angle_deg: f64) -> Result<(), ArrayError> {
    if !(angle_deg > -90.0 && angle_deg < 90.0) {
        return Err(ArrayError::AngleOutOfRange(angle_deg));
    }
    Ok(())
}

/// Far-field steering vector: `exp(-j 2π f/c · p_n · sin θ)` per element.
pub fn farfield_steering(
    geom: &ArrayGeometry,
    angle_deg: f64,
    frequency_hz: f64,
) -> Result<SteeringVector, ArrayError> {
    check_angle(angle_deg)?;
    if !(frequency_hz > 0.0) {
        return Err(ArrayError::NonPositiveFrequency(frequency_hz));
    }
    let k = 2.0 * std::f64::consts::PI * frequency_hz / SPEED_OF_LIGHT;
    let sin_theta = angle_deg.to_radians().sin();
    let entries = geom
        .element_positions_m
        .iter()
        .map(|&p| Complex64::from_polar(1.0, -k * p * sin_theta))
        .collect();
    Ok(SteeringVector {
        entries,
        frequency_hz,
        point: FieldPoint::FarField { angle_deg },
    })
}

/// Excess path `r_n - r` from the target to element `n` relative to the
/// centroid, with `r_n = sqrt(r² + p² - 2 r p sin θ)`.
///
/// Evaluated as `(p² - 2 r p sinθ) / (r_n + r)` so the difference stays
/// accurate at ranges far beyond the aperture.
pub(crate) fn excess_path_m(range_m: f64, sin_theta: f64, position_m: f64) -> f64 {
    let cross = position_m * (position_m - 2.0 * range_m * sin_theta);
    let rn = (range_m * range_m + cross).sqrt();
    cross / (rn + range_m)
}

/// Near-field steering vector with spherical wavefront curvature, phase
/// referenced to the centroid range `r` and sharing the far-field sign
/// convention: `exp(-j 2π f/c · (r - r_n))`, which tends to
/// `exp(-j 2π f/c · p_n sin θ)` as the wavefront flattens.
pub fn nearfield_steering(
    geom: &ArrayGeometry,
    range_m: f64,
    angle_deg: f64,
    frequency_hz: f64,
) -> Result<SteeringVector, ArrayError> {
    check_angle(angle_deg)?;
    if !(frequency_hz > 0.0) {
        return Err(ArrayError::NonPositiveFrequency(frequency_hz));
    }
    let half = geom.max_abs_position_m();
    if !(range_m > half) {
        return Err(ArrayError::RangeInsideAperture {
            range_m,
            aperture_half_m: half,
        });
    }
    let k = 2.0 * std::f64::consts::PI * frequency_hz / SPEED_OF_LIGHT;
    let sin_theta = angle_deg.to_radians().sin();
    let entries = geom
        .element_positions_m
        .iter()
        .map(|&p| Complex64::from_polar(1.0, k * excess_path_m(range_m, sin_theta, p)))
        .collect();
    Ok(SteeringVector {
        entries,
        frequency_hz,
        point: FieldPoint::NearField { range_m, angle_deg },
    })
}

/// Steering vector for an arbitrary field point.
pub fn steering_vector(
    geom: &ArrayGeometry,
    point: &FieldPoint,
    frequency_hz: f64,
) -> Result<SteeringVector, ArrayError> {
    match *point {
        FieldPoint::FarField { angle_deg } => farfield_steering(geom, angle_deg, frequency_hz),
        FieldPoint::NearField { range_m, angle_deg } => {
            nearfield_steering(geom, range_m, angle_deg, frequency_hz)
        }
    }
}

/// Conjugate-match weights for a far-field pointing angle at the design
/// frequency. The resulting phase profile is frequency independent, modeling
/// analog phase shifters that are set once.
pub fn pointing_weights(
    geom: &ArrayGeometry,
    pointing_angle_deg: f64,
    design_frequency_hz: f64,
) -> Result<BeamformerWeights, ArrayError> {
    let sv = farfield_steering(geom, pointing_angle_deg, design_frequency_hz)?;
    Ok(BeamformerWeights {
        entries: sv.entries.iter().map(|e| e.conj()).collect(),
        pointing_angle_deg,
        design_frequency_hz,
    })
}

/// Un-normalized array power gain `|w^H-combine of a(θ)|²` at one angle.
pub fn gain_at(
    geom: &ArrayGeometry,
    weights: &BeamformerWeights,
    angle_deg: f64,
    frequency_hz: f64,
) -> Result<f64, ArrayError> {
    if weights.entries.len() != geom.n_elements {
        return Err(ArrayError::ElementCountMismatch {
            weights: weights.entries.len(),
            geometry: geom.n_elements,
        });
    }
    let sv = farfield_steering(geom, angle_deg, frequency_hz)?;
    let sum: Complex64 = weights
        .entries
        .iter()
        .zip(&sv.entries)
        .map(|(w, a)| w * a)
        .sum();
    Ok(sum.norm_sqr())
}

/// Evaluate `gain(θ) = |Σ_n w_n a_n(θ, f)|²` over an angle grid.
///
/// With `normalize` the gains are divided by the grid maximum.
pub fn beampattern(
    geom: &ArrayGeometry,
    weights: &BeamformerWeights,
    frequency_hz: f64,
    angle_grid_deg: &[f64],
    normalize: bool,
) -> Result<Beampattern, ArrayError> {
    if angle_grid_deg.is_empty() {
        return Err(ArrayError::EmptyGrid);
    }
    if angle_grid_deg.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ArrayError::UnsortedGrid);
    }
    let mut gains = Vec::with_capacity(angle_grid_deg.len());
    for &angle in angle_grid_deg {
        gains.push(gain_at(geom, weights, angle, frequency_hz)?);
    }
    if normalize {
        let max = gains.iter().cloned().fold(f64::MIN, f64::max);
        if max > 0.0 {
            for g in &mut gains {
                *g /= max;
            }
        }
    }
    Ok(Beampattern {
        angle_grid_deg: angle_grid_deg.to_vec(),
        gains,
        frequency_hz,
    })
}

/// Regular angle grid over `[lo, hi]` with the given step, endpoints inside
/// the open interval (-90°, 90°).
pub fn angle_grid(lo_deg: f64, hi_deg: f64, step_deg: f64) -> Result<Vec<f64>, ArrayError> {
    if !(step_deg > 0.0) || hi_deg <= lo_deg {
        return Err(ArrayError::UnsortedGrid);
    }
    check_angle(lo_deg)?;
    check_angle(hi_deg)?;
    let n = ((hi_deg - lo_deg) / step_deg).round() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| lo_deg + i as f64 * step_deg).collect();
    if let Some(last) = grid.last_mut() {
        if *last > hi_deg {
            *last = hi_deg;
        }
    }
    grid.dedup_by(|a, b| *a <= *b);
    Ok(grid)
}

/// Peak angle of a beampattern via grid argmax plus a three-point parabolic
/// refinement. Ties resolve to the smallest angle.
pub fn peak_angle_deg(pattern: &Beampattern) -> f64 {
    let mut best = 0usize;
    for (i, &g) in pattern.gains.iter().enumerate() {
        if g > pattern.gains[best] {
            best = i;
        }
    }
    if best == 0 || best + 1 == pattern.gains.len() {
        return pattern.angle_grid_deg[best];
    }
    let (gl, gc, gr) = (
        pattern.gains[best - 1],
        pattern.gains[best],
        pattern.gains[best + 1],
    );
    let denom = gl - 2.0 * gc + gr;
    if denom >= 0.0 {
        return pattern.angle_grid_deg[best];
    }
    // Vertex of the parabola through the three samples, in grid steps.
    let offset = 0.5 * (gl - gr) / denom;
    let step = pattern.angle_grid_deg[best + 1] - pattern.angle_grid_deg[best];
    pattern.angle_grid_deg[best] + offset.clamp(-0.5, 0.5) * step
}

/// Half-power beamwidth of the matched pattern at a pointing angle, found by
/// scanning outward from the peak for the two half-gain crossings and
/// linearly interpolating each.
pub fn half_power_beamwidth_deg(
    geom: &ArrayGeometry,
    pointing_angle_deg: f64,
    frequency_hz: f64,
    scan_step_deg: f64,
) -> Result<f64, ArrayError> {
    let weights = pointing_weights(geom, pointing_angle_deg, frequency_hz)?;
    let peak = gain_at(geom, &weights, pointing_angle_deg, frequency_hz)?;
    let half = peak / 2.0;
    let cross = |dir: f64| -> f64 {
        let mut prev_angle = pointing_angle_deg;
        let mut prev_gain = peak;
        let mut i = 1u64;
        loop {
            let angle = pointing_angle_deg + dir * i as f64 * scan_step_deg;
            if !(angle > -90.0 && angle < 90.0) {
                return angle - dir * scan_step_deg;
            }
            let gain = gain_at(geom, &weights, angle, frequency_hz).unwrap_or(0.0);
            if gain <= half {
                let frac = (prev_gain - half) / (prev_gain - gain);
                return prev_angle + dir * frac * scan_step_deg;
            }
            prev_angle = angle;
            prev_gain = gain;
            i += 1;
        }
    };
    let upper = cross(1.0);
    let lower = cross(-1.0);
    Ok(upper - lower)
}
