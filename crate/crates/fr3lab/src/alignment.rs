//! Two-tier hierarchical beam alignment: a coarse low-band scan proposes an
//! angular window, a fine upper-band scan refines inside it.
//!
//! The scene model is incoherent: each source contributes its power times
//! the normalized matched-beamformer gain, with no phase interference
//! between sources, plus a flat noise floor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{
    angle_grid, build_ula, farfield_steering, half_power_beamwidth_deg, pointing_weights,
    ArrayError, Beampattern,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlignmentError {
    #[error("scene needs at least one source")]
    EmptyScene,
    #[error("source power and noise power must be non-negative")]
    NegativePower,
    #[error("scan step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("scan span [{0}°, {1}°] is empty or outside (-90°, 90°)")]
    BadSpan(f64, f64),
    #[error("fine grid step {fine}° must not exceed coarse step {coarse}°")]
    FineCoarserThanCoarse { fine: f64, coarse: f64 },
    #[error("peak prominence must be positive")]
    NonPositiveProminence,
    #[error("coarse miss: strongest response {peak:.3e} is within {margin_db} dB of the noise floor {noise:.3e}")]
    CoarseMiss {
        peak: f64,
        noise: f64,
        margin_db: f64,
    },
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// Point sources in the far field plus a flat noise floor, all in linear
/// power units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub sources: Vec<SceneSource>,
    pub noise_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneSource {
    pub angle_deg: f64,
    pub power: f64,
}

impl Scene {
    pub fn validate(&self) -> Result<(), AlignmentError> {
        if self.sources.is_empty() {
            return Err(AlignmentError::EmptyScene);
        }
        if self.noise_power < 0.0 || self.sources.iter().any(|s| s.power < 0.0) {
            return Err(AlignmentError::NegativePower);
        }
        for s in &self.sources {
            if !(s.angle_deg > -90.0 && s.angle_deg < 90.0) {
                return Err(AlignmentError::Array(ArrayError::AngleOutOfRange(
                    s.angle_deg,
                )));
            }
        }
        Ok(())
    }
}

/// One scan tier: carrier, array size, and the grid it sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierConfig {
    pub frequency_hz: f64,
    pub n_elements: usize,
    pub scan_grid_step_deg: f64,
    pub scan_span_deg: (f64, f64),
}

impl TierConfig {
    fn validate(&self) -> Result<(), AlignmentError> {
        if !(self.scan_grid_step_deg > 0.0) {
            return Err(AlignmentError::NonPositiveStep(self.scan_grid_step_deg));
        }
        let (lo, hi) = self.scan_span_deg;
        if !(lo < hi && lo > -90.0 && hi < 90.0) {
            return Err(AlignmentError::BadSpan(lo, hi));
        }
        Ok(())
    }
}

/// A local maximum of a scan response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub angle_deg: f64,
    pub gain: f64,
    /// Topographic prominence: height above the higher of the two base
    /// levels found by extending left and right until the response rises
    /// above the peak or the grid ends.
    pub prominence: f64,
}

/// Outcome of a two-tier alignment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentResult {
    pub coarse_peak_deg: f64,
    pub refinement_window_deg: (f64, f64),
    pub fine_peaks_deg: Vec<f64>,
    /// Per scene source: true iff some fine peak lies within one fine-tier
    /// half-power beamwidth of it.
    pub resolved: Vec<bool>,
    /// Pointing directions evaluated by the coarse scan.
    pub coarse_evaluations: usize,
    /// Pointing directions evaluated by the fine scan.
    pub fine_evaluations: usize,
}

/// Sweep a matched beamformer across the tier's grid.
///
/// At each grid angle the tier's array (half-wavelength at the tier carrier)
/// is pointed there and the response is the sum over sources of
/// `power · |w^H a(source)|² / N²` plus the noise floor. Weights and steering
/// share the tier frequency, so there is no squint within a tier.
pub fn scan_response(scene: &Scene, tier: &TierConfig) -> Result<Beampattern, AlignmentError> {
    scene.validate()?;
    tier.validate()?;
    let geom = build_ula(tier.n_elements, tier.frequency_hz)?;
    let grid = angle_grid(
        tier.scan_span_deg.0,
        tier.scan_span_deg.1,
        tier.scan_grid_step_deg,
    )?;
    scan_over_grid(scene, tier, &geom, &grid)
}

fn scan_over_grid(
    scene: &Scene,
    tier: &TierConfig,
    geom: &crate::array::ArrayGeometry,
    grid: &[f64],
) -> Result<Beampattern, AlignmentError> {
    let n2 = (tier.n_elements * tier.n_elements) as f64;
    let steerings: Vec<_> = scene
        .sources
        .iter()
        .map(|s| farfield_steering(geom, s.angle_deg, tier.frequency_hz))
        .collect::<Result<_, _>>()?;
    let mut gains = Vec::with_capacity(grid.len());
    for &scan_angle in grid {
        let weights = pointing_weights(geom, scan_angle, tier.frequency_hz)?;
        let mut response = scene.noise_power;
        for (source, steering) in scene.sources.iter().zip(&steerings) {
            let sum: num_complex::Complex64 = weights
                .entries
                .iter()
                .zip(&steering.entries)
                .map(|(w, a)| w * a)
                .sum();
            response += source.power * sum.norm_sqr() / n2;
        }
        gains.push(response);
    }
    Ok(Beampattern {
        angle_grid_deg: grid.to_vec(),
        gains,
        frequency_hz: tier.frequency_hz,
    })
}

/// Interior local maxima with topographic prominence at least
/// `min_prominence`, sorted by gain, strongest first. Grid endpoints are
/// never reported as peaks.
pub fn detect_peaks(
    pattern: &Beampattern,
    min_prominence: f64,
) -> Result<Vec<Peak>, AlignmentError> {
    if !(min_prominence > 0.0) {
        return Err(AlignmentError::NonPositiveProminence);
    }
    Ok(all_peaks(pattern)
        .into_iter()
        .filter(|p| p.prominence >= min_prominence)
        .collect())
}

fn all_peaks(pattern: &Beampattern) -> Vec<Peak> {
    let g = &pattern.gains;
    let mut peaks = Vec::new();
    let n = g.len();
    let mut i = 1;
    while i + 1 < n {
        // A peak rises strictly above its left neighbor; plateaus extend to
        // the right and count once, at the plateau's left edge.
        if g[i] > g[i - 1] {
            let mut j = i;
            while j + 1 < n && g[j + 1] == g[i] {
                j += 1;
            }
            if j + 1 < n && g[j + 1] < g[i] {
                let height = g[i];
                let left_base = side_base(g, i, height, -1);
                let right_base = side_base(g, j, height, 1);
                peaks.push(Peak {
                    angle_deg: pattern.angle_grid_deg[i],
                    gain: height,
                    prominence: height - left_base.max(right_base),
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks.sort_by(|a, b| {
        b.gain
            .total_cmp(&a.gain)
            .then(a.angle_deg.total_cmp(&b.angle_deg))
    });
    peaks
}

/// Minimum value between a peak and the nearest sample that rises above it,
/// walking one direction; the grid edge terminates the walk.
fn side_base(g: &[f64], start: usize, height: f64, dir: isize) -> f64 {
    let mut base = height;
    let mut idx = start as isize + dir;
    while idx >= 0 && (idx as usize) < g.len() {
        let v = g[idx as usize];
        if v > height {
            break;
        }
        base = base.min(v);
        idx += dir;
    }
    base
}

/// Default detection margin of the coarse peak over the noise floor, dB.
pub const DEFAULT_COARSE_MARGIN_DB: f64 = 3.0;

/// Run the coarse scan, open a window around its argmax, and refine inside.
///
/// The coarse argmax ties break toward the smaller angle. Fine peaks are the
/// local maxima inside the window whose prominence exceeds the noise floor
/// (or an absolute floor of 1e-12 for noiseless scenes). A source counts as
/// resolved when some fine peak lies within one fine-tier half-power
/// beamwidth of it.
pub fn hierarchical_align(
    scene: &Scene,
    coarse: &TierConfig,
    fine: &TierConfig,
    window_halfwidth_deg: f64,
) -> Result<AlignmentResult, AlignmentError> {
    hierarchical_align_with_margin(
        scene,
        coarse,
        fine,
        window_halfwidth_deg,
        DEFAULT_COARSE_MARGIN_DB,
    )
}

pub fn hierarchical_align_with_margin(
    scene: &Scene,
    coarse: &TierConfig,
    fine: &TierConfig,
    window_halfwidth_deg: f64,
    coarse_margin_db: f64,
) -> Result<AlignmentResult, AlignmentError> {
    if fine.scan_grid_step_deg > coarse.scan_grid_step_deg {
        return Err(AlignmentError::FineCoarserThanCoarse {
            fine: fine.scan_grid_step_deg,
            coarse: coarse.scan_grid_step_deg,
        });
    }
    let coarse_pattern = scan_response(scene, coarse)?;
    let (mut peak_angle, mut peak_gain) =
        (coarse_pattern.angle_grid_deg[0], coarse_pattern.gains[0]);
    for (&a, &g) in coarse_pattern
        .angle_grid_deg
        .iter()
        .zip(&coarse_pattern.gains)
    {
        if g > peak_gain {
            peak_angle = a;
            peak_gain = g;
        }
    }
    if peak_gain < scene.noise_power * 10f64.powf(coarse_margin_db / 10.0) {
        return Err(AlignmentError::CoarseMiss {
            peak: peak_gain,
            noise: scene.noise_power,
            margin_db: coarse_margin_db,
        });
    }

    let window = (
        (peak_angle - window_halfwidth_deg).max(-89.99),
        (peak_angle + window_halfwidth_deg).min(89.99),
    );
    let fine_geom = build_ula(fine.n_elements, fine.frequency_hz)?;
    let fine_grid = angle_grid(window.0, window.1, fine.scan_grid_step_deg)?;
    let fine_pattern = scan_over_grid(scene, fine, &fine_geom, &fine_grid)?;
    let floor = scene.noise_power.max(1e-12);
    let fine_peaks: Vec<f64> = all_peaks(&fine_pattern)
        .into_iter()
        .filter(|p| p.prominence >= floor)
        .map(|p| p.angle_deg)
        .collect();

    let fine_beamwidth = half_power_beamwidth_deg(
        &fine_geom,
        0.0,
        fine.frequency_hz,
        fine.scan_grid_step_deg.min(0.01),
    )?;
    let resolved = scene
        .sources
        .iter()
        .map(|s| {
            fine_peaks
                .iter()
                .any(|&p| (p - s.angle_deg).abs() <= fine_beamwidth)
        })
        .collect();

    Ok(AlignmentResult {
        coarse_peak_deg: peak_angle,
        refinement_window_deg: window,
        fine_peaks_deg: fine_peaks,
        resolved,
        coarse_evaluations: coarse_pattern.angle_grid_deg.len(),
        fine_evaluations: fine_grid.len(),
    })
}

/// Grid size of a full-span scan at the fine step, the cost baseline the
/// hierarchy is measured against.
pub fn exhaustive_scan_cost(fine: &TierConfig) -> Result<usize, AlignmentError> {
    fine.validate()?;
    Ok(angle_grid(
        fine.scan_span_deg.0,
        fine.scan_span_deg.1,
        fine.scan_grid_step_deg,
    )?
    .len())
}

/// Coarse tier used throughout: 10 elements at 8 GHz, 1° grid.
pub fn default_coarse_tier() -> TierConfig {
    TierConfig {
        frequency_hz: 8e9,
        n_elements: 10,
        scan_grid_step_deg: 1.0,
        scan_span_deg: (-60.0, 60.0),
    }
}

/// Fine tier used throughout: 30 elements at 24 GHz, 0.1° grid.
pub fn default_fine_tier() -> TierConfig {
    TierConfig {
        frequency_hz: 24e9,
        n_elements: 30,
        scan_grid_step_deg: 0.1,
        scan_span_deg: (-60.0, 60.0),
    }
}

/// Default refinement window half-width in degrees.
pub const DEFAULT_WINDOW_HALFWIDTH_DEG: f64 = 5.0;
