//! Payload-as-sensing instrumentation: pilot/payload accounting,
//! constellation kurtosis, OFDM frame synthesis, and Monte Carlo
//! ambiguity-function sidelobe statistics.
//!
//! Random payload symbols make the ambiguity function of the transmitted
//! frame a random surface. How much it fluctuates is governed by the
//! constellation's kurtosis `E|s|⁴ / (E|s|²)²`: constant-modulus alphabets
//! sit at the lower bound 1, a circular Gaussian at 2. The Monte Carlo
//! machinery here measures that link directly.
//!
//! The ambiguity function is periodic (cyclic correlation), matching
//! cyclic-prefix OFDM processing.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mc::{trial_rng, CompensatedSum};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PayloadError {
    #[error("alphabet must be non-empty")]
    EmptyAlphabet,
    #[error("alphabet has zero average power")]
    ZeroPower,
    #[error("probabilities invalid: {0}")]
    BadProbabilities(String),
    #[error("pilot mask has {got} cells, layout needs {want}")]
    MaskSizeMismatch { got: usize, want: usize },
    #[error("delay/Doppler extent ({delay}, {doppler}) too large for a {n}-sample signal")]
    BinLimits {
        delay: usize,
        doppler: usize,
        n: usize,
    },
    #[error("exclusion zone covers every surface bin")]
    ExclusionCoversAll,
    #[error("need at least 2 Monte Carlo trials, got {0}")]
    TooFewTrials(usize),
}

/// A discrete complex symbol alphabet with sampling probabilities,
/// normalized to unit average power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstellationSpec {
    pub name: String,
    pub alphabet: Vec<Complex64>,
    pub probabilities: Vec<f64>,
}

impl ConstellationSpec {
    /// Build and normalize a constellation. `probabilities` defaults to
    /// uniform; when given it must be non-negative and sum to 1 within
    /// 1e-12.
    pub fn new(
        name: impl Into<String>,
        alphabet: Vec<Complex64>,
        probabilities: Option<Vec<f64>>,
    ) -> Result<Self, PayloadError> {
        if alphabet.is_empty() {
            return Err(PayloadError::EmptyAlphabet);
        }
        let probabilities = match probabilities {
            Some(p) => {
                if p.len() != alphabet.len() {
                    return Err(PayloadError::BadProbabilities(format!(
                        "{} probabilities for {} symbols",
                        p.len(),
                        alphabet.len()
                    )));
                }
                if p.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                    return Err(PayloadError::BadProbabilities(
                        "probabilities must be finite and non-negative".into(),
                    ));
                }
                let sum: f64 = p.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(PayloadError::BadProbabilities(format!(
                        "probabilities sum to {sum}, expected 1"
                    )));
                }
                p
            }
            None => vec![1.0 / alphabet.len() as f64; alphabet.len()],
        };
        let power: f64 = alphabet
            .iter()
            .zip(&probabilities)
            .map(|(s, &p)| p * s.norm_sqr())
            .sum();
        if power <= 0.0 {
            return Err(PayloadError::ZeroPower);
        }
        let scale = power.sqrt().recip();
        Ok(Self {
            name: name.into(),
            alphabet: alphabet.into_iter().map(|s| s * scale).collect(),
            probabilities,
        })
    }

    /// Quadrature PSK at unit power.
    pub fn qpsk() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(
            "qpsk",
            vec![
                Complex64::new(h, h),
                Complex64::new(h, -h),
                Complex64::new(-h, h),
                Complex64::new(-h, -h),
            ],
            None,
        )
        .expect("static alphabet")
    }

    /// Uniform 16-QAM at unit power.
    pub fn qam16() -> Self {
        let levels = [-3.0, -1.0, 1.0, 3.0];
        let mut points = Vec::with_capacity(16);
        for &re in &levels {
            for &im in &levels {
                points.push(Complex64::new(re, im));
            }
        }
        Self::new("qam16", points, None).expect("static alphabet")
    }

    /// m-ary PSK at unit power.
    pub fn psk(order: usize) -> Result<Self, PayloadError> {
        if order == 0 {
            return Err(PayloadError::EmptyAlphabet);
        }
        let points = (0..order)
            .map(|k| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / order as f64)
            })
            .collect();
        Self::new(format!("psk{order}"), points, None)
    }
}

/// Fourth-moment ratio `E|s|⁴ / (E|s|²)²` over the weighted alphabet.
///
/// Exactly 1 for constant-modulus alphabets.
pub fn constellation_kurtosis(spec: &ConstellationSpec) -> f64 {
    let mut second = 0.0;
    let mut fourth = 0.0;
    for (s, &p) in spec.alphabet.iter().zip(&spec.probabilities) {
        let q = s.norm_sqr();
        second += p * q;
        fourth += p * q * q;
    }
    fourth / (second * second)
}

/// What fills the payload cells of a frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PayloadModel {
    Constellation(ConstellationSpec),
    /// Circular complex Gaussian of unit power, the kurtosis-2 reference.
    CircularGaussian,
}

impl PayloadModel {
    pub fn name(&self) -> &str {
        match self {
            PayloadModel::Constellation(c) => &c.name,
            PayloadModel::CircularGaussian => "gaussian",
        }
    }

    pub fn kurtosis(&self) -> f64 {
        match self {
            PayloadModel::Constellation(c) => constellation_kurtosis(c),
            PayloadModel::CircularGaussian => 2.0,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        match self {
            PayloadModel::Constellation(c) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (s, &p) in c.alphabet.iter().zip(&c.probabilities) {
                    acc += p;
                    if u < acc {
                        return *s;
                    }
                }
                *c.alphabet.last().expect("non-empty alphabet")
            }
            PayloadModel::CircularGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }
        }
    }
}

/// Time-frequency layout of one frame: which cells carry pilots.
///
/// Cells are indexed `(subcarrier, symbol)`, symbol-major in memory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameLayout {
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    pilot_mask: Vec<bool>,
}

impl FrameLayout {
    pub fn new(
        n_subcarriers: usize,
        n_symbols: usize,
        pilot_mask: Vec<bool>,
    ) -> Result<Self, PayloadError> {
        if pilot_mask.len() != n_subcarriers * n_symbols {
            return Err(PayloadError::MaskSizeMismatch {
                got: pilot_mask.len(),
                want: n_subcarriers * n_symbols,
            });
        }
        Ok(Self {
            n_subcarriers,
            n_symbols,
            pilot_mask,
        })
    }

    /// Comb layout: every `stride`-th subcarrier is a pilot on every symbol.
    pub fn comb(n_subcarriers: usize, n_symbols: usize, stride: usize) -> Self {
        let mask = (0..n_symbols)
            .flat_map(|_| (0..n_subcarriers).map(move |sc| stride != 0 && sc % stride == 0))
            .collect();
        Self {
            n_subcarriers,
            n_symbols,
            pilot_mask: mask,
        }
    }

    pub fn is_pilot(&self, subcarrier: usize, symbol: usize) -> bool {
        self.pilot_mask[symbol * self.n_subcarriers + subcarrier]
    }

    pub fn pilot_count(&self) -> usize {
        self.pilot_mask.iter().filter(|&&p| p).count()
    }
}

/// Pilot and payload shares of the time-frequency grid, counted exactly from
/// the mask. The pair sums to 1 by construction.
pub fn resource_split(layout: &FrameLayout) -> (f64, f64) {
    let total = (layout.n_subcarriers * layout.n_symbols) as f64;
    let pilot = layout.pilot_count() as f64 / total;
    (pilot, 1.0 - pilot)
}

/// Frame synthesis knobs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameOptions {
    pub cyclic_prefix_len: usize,
    /// Optional per-symbol time window (length must cover one symbol plus
    /// its prefix); `None` is the rectangular default.
    pub pulse_window: Option<Vec<f64>>,
}

/// One synthesized OFDM frame: the frequency grid and its time signal.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmFrame {
    /// Frequency-domain cells, symbol-major.
    pub grid: Vec<Complex64>,
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    pub cyclic_prefix_len: usize,
    pub time_signal: Vec<Complex64>,
}

impl OfdmFrame {
    pub fn cell(&self, subcarrier: usize, symbol: usize) -> Complex64 {
        self.grid[symbol * self.n_subcarriers + subcarrier]
    }

    pub fn frequency_energy(&self) -> f64 {
        self.grid.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn time_energy(&self) -> f64 {
        self.time_signal.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Deterministic unit-magnitude pilot cell: a quadratic-phase sequence
/// cyclically shifted by the symbol index. Independent of the seed.
fn pilot_value(subcarrier: usize, symbol: usize, n_subcarriers: usize) -> Complex64 {
    let m = (subcarrier + symbol) % n_subcarriers;
    let phase = -std::f64::consts::PI * (m * (m + 1)) as f64 / n_subcarriers as f64;
    Complex64::from_polar(1.0, phase)
}

/// Draw payload cells i.i.d. from the model, fill pilots from the fixed
/// sequence, and synthesize the time signal via per-symbol unitary inverse
/// DFTs with an optional cyclic prefix.
pub fn generate_ofdm_frame(
    payload: &PayloadModel,
    layout: &FrameLayout,
    seed: u64,
    options: &FrameOptions,
) -> OfdmFrame {
    let mut rng = trial_rng(seed, 0);
    generate_ofdm_frame_with_rng(payload, layout, &mut rng, options)
}

/// Same as [`generate_ofdm_frame`] with a caller-provided stream, used by
/// the Monte Carlo driver to give every trial its own stream.
pub fn generate_ofdm_frame_with_rng(
    payload: &PayloadModel,
    layout: &FrameLayout,
    rng: &mut ChaCha8Rng,
    options: &FrameOptions,
) -> OfdmFrame {
    let n = layout.n_subcarriers;
    let mut grid = Vec::with_capacity(n * layout.n_symbols);
    for symbol in 0..layout.n_symbols {
        for sc in 0..n {
            if layout.is_pilot(sc, symbol) {
                grid.push(pilot_value(sc, symbol, n));
            } else {
                grid.push(payload.sample(rng));
            }
        }
    }

    // Unitary inverse DFT per symbol, twiddles from one shared table.
    let twiddle: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / n as f64))
        .collect();
    let scale = 1.0 / (n as f64).sqrt();
    let cp = options.cyclic_prefix_len.min(n);
    let mut time_signal = Vec::with_capacity(layout.n_symbols * (n + cp));
    for symbol in 0..layout.n_symbols {
        let cells = &grid[symbol * n..(symbol + 1) * n];
        let mut body = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, cell) in cells.iter().enumerate() {
                acc += cell * twiddle[(m * k) % n];
            }
            body.push(acc * scale);
        }
        let mut symbol_samples = Vec::with_capacity(n + cp);
        symbol_samples.extend_from_slice(&body[n - cp..]);
        symbol_samples.extend_from_slice(&body);
        if let Some(window) = &options.pulse_window {
            for (sample, w) in symbol_samples.iter_mut().zip(window) {
                *sample *= *w;
            }
        }
        time_signal.extend(symbol_samples);
    }

    OfdmFrame {
        grid,
        n_subcarriers: n,
        n_symbols: layout.n_symbols,
        cyclic_prefix_len: cp,
        time_signal,
    }
}

/// Complex periodic ambiguity surface over integer delay/Doppler bins,
/// normalized so the origin is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguitySurface {
    /// Row-major over Doppler then delay; delay spans `-max_delay..=max_delay`,
    /// Doppler spans `-max_doppler..=max_doppler`.
    pub values: Vec<Complex64>,
    pub max_delay_bins: usize,
    pub max_doppler_bins: usize,
}

impl AmbiguitySurface {
    pub fn value(&self, delay: isize, doppler: isize) -> Complex64 {
        let d = (delay + self.max_delay_bins as isize) as usize;
        let v = (doppler + self.max_doppler_bins as isize) as usize;
        self.values[v * (2 * self.max_delay_bins + 1) + d]
    }

    pub fn delays(&self) -> impl Iterator<Item = isize> {
        -(self.max_delay_bins as isize)..=(self.max_delay_bins as isize)
    }

    pub fn dopplers(&self) -> impl Iterator<Item = isize> {
        -(self.max_doppler_bins as isize)..=(self.max_doppler_bins as isize)
    }
}

/// Periodic cross-correlation of a signal with its delay/Doppler-shifted
/// copies:
/// `χ(τ, ν) = Σ_k s[k] conj(s[(k+τ) mod n]) exp(-j2πνk/n) / Σ|s|²`.
pub fn ambiguity_of_signal(
    signal: &[Complex64],
    max_delay_bins: usize,
    max_doppler_bins: usize,
) -> Result<AmbiguitySurface, PayloadError> {
    let n = signal.len();
    if n == 0 || max_delay_bins >= n || 2 * max_doppler_bins >= n {
        return Err(PayloadError::BinLimits {
            delay: max_delay_bins,
            doppler: max_doppler_bins,
            n,
        });
    }
    let energy: f64 = signal.iter().map(|s| s.norm_sqr()).sum();
    let n_delay = 2 * max_delay_bins + 1;
    let n_doppler = 2 * max_doppler_bins + 1;
    let mut values = vec![Complex64::new(0.0, 0.0); n_delay * n_doppler];
    for (vi, doppler) in (-(max_doppler_bins as isize)..=(max_doppler_bins as isize)).enumerate() {
        for (di, delay) in (-(max_delay_bins as isize)..=(max_delay_bins as isize)).enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &s) in signal.iter().enumerate() {
                let shifted = signal[(k as isize + delay).rem_euclid(n as isize) as usize];
                let phase = -2.0 * std::f64::consts::PI * doppler as f64 * k as f64 / n as f64;
                acc += s * shifted.conj() * Complex64::from_polar(1.0, phase);
            }
            // Division keeps the origin exactly 1: the numerator there is
            // bitwise equal to the energy.
            values[vi * n_delay + di] = acc / energy;
        }
    }
    Ok(AmbiguitySurface {
        values,
        max_delay_bins,
        max_doppler_bins,
    })
}

/// Ambiguity surface of a frame's time signal.
pub fn ambiguity_function(
    frame: &OfdmFrame,
    max_delay_bins: usize,
    max_doppler_bins: usize,
) -> Result<AmbiguitySurface, PayloadError> {
    ambiguity_of_signal(&frame.time_signal, max_delay_bins, max_doppler_bins)
}

/// Delay/Doppler rectangle removed around the mainlobe before sidelobe
/// statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExclusionZone {
    pub delay_bins: usize,
    pub doppler_bins: usize,
}

impl Default for ExclusionZone {
    fn default() -> Self {
        Self {
            delay_bins: 1,
            doppler_bins: 1,
        }
    }
}

/// Knobs of the sidelobe Monte Carlo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsOptions {
    pub max_delay_bins: usize,
    pub max_doppler_bins: usize,
    pub exclusion: ExclusionZone,
    pub frame: FrameOptions,
}

impl Default for StatsOptions {
    fn default() -> Self {
        Self {
            max_delay_bins: 10,
            max_doppler_bins: 10,
            exclusion: ExclusionZone::default(),
            frame: FrameOptions::default(),
        }
    }
}

/// Constellation kurtosis plus Monte Carlo sidelobe statistics.
///
/// `sidelobe_mean` pools `|χ|²` over all sidelobe bins and trials;
/// `sidelobe_variance` is the across-trial variance per bin, averaged over
/// bins, so a fully deterministic frame (pilots only) scores exactly 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfStats {
    pub payload: String,
    pub kurtosis: f64,
    pub sidelobe_mean: f64,
    pub sidelobe_variance: f64,
    pub n_trials: usize,
    pub exclusion: ExclusionZone,
}

/// Sidelobe statistics over seeded trials; deterministic for a given seed
/// and independent of thread count (per-trial streams, in-order folds).
pub fn af_sidelobe_stats(
    payload: &PayloadModel,
    layout: &FrameLayout,
    n_trials: usize,
    seed: u64,
    options: &StatsOptions,
) -> Result<AfStats, PayloadError> {
    let run = af_sidelobe_run(payload, layout, n_trials, seed, options, 1)?;
    Ok(run.stats)
}

/// [`af_sidelobe_stats`] plus per-block variances for confidence checks.
#[derive(Debug, Clone, PartialEq)]
pub struct AfRun {
    pub stats: AfStats,
    /// Sidelobe variance of each disjoint block of trials, in block order.
    pub block_variances: Vec<f64>,
}

pub fn af_sidelobe_run(
    payload: &PayloadModel,
    layout: &FrameLayout,
    n_trials: usize,
    seed: u64,
    options: &StatsOptions,
    n_blocks: usize,
) -> Result<AfRun, PayloadError> {
    if n_trials < 2 {
        return Err(PayloadError::TooFewTrials(n_trials));
    }
    if options.exclusion.delay_bins >= options.max_delay_bins
        && options.exclusion.doppler_bins >= options.max_doppler_bins
    {
        return Err(PayloadError::ExclusionCoversAll);
    }

    let sidelobe_bins: Vec<(isize, isize)> = {
        let d = options.max_delay_bins as isize;
        let v = options.max_doppler_bins as isize;
        let zd = options.exclusion.delay_bins as isize;
        let zv = options.exclusion.doppler_bins as isize;
        (-v..=v)
            .flat_map(|dop| (-d..=d).map(move |del| (del, dop)))
            .filter(|&(del, dop)| del.abs() > zd || dop.abs() > zv)
            .collect()
    };

    // One |χ|² row per trial, bins in fixed order; trials computed in
    // parallel but collected in trial order.
    let rows: Vec<Vec<f64>> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64 + 1);
            let frame = generate_ofdm_frame_with_rng(payload, layout, &mut rng, &options.frame);
            let af = ambiguity_of_signal(
                &frame.time_signal,
                options.max_delay_bins,
                options.max_doppler_bins,
            )
            .expect("validated bin limits");
            sidelobe_bins
                .iter()
                .map(|&(del, dop)| af.value(del, dop).norm_sqr())
                .collect()
        })
        .collect();

    let n_bins = sidelobe_bins.len();
    let mut mean_acc = CompensatedSum::new();
    for row in &rows {
        for &v in row {
            mean_acc.add(v);
        }
    }
    let sidelobe_mean = mean_acc.total() / (n_trials * n_bins) as f64;

    let variance_over = |trial_range: std::ops::Range<usize>| -> f64 {
        let len = trial_range.len();
        let mut acc = CompensatedSum::new();
        let mut column = Vec::with_capacity(len);
        for bin in 0..n_bins {
            column.clear();
            column.extend(trial_range.clone().map(|t| rows[t][bin]));
            acc.add(crate::mc::compensated_variance(&column));
        }
        acc.total() / n_bins as f64
    };

    let sidelobe_variance = variance_over(0..n_trials);
    let n_blocks = n_blocks.max(1).min(n_trials / 2);
    let block_size = n_trials / n_blocks;
    let block_variances = (0..n_blocks)
        .map(|b| variance_over(b * block_size..(b + 1) * block_size))
        .collect();

    Ok(AfRun {
        stats: AfStats {
            payload: payload.name().to_string(),
            kurtosis: payload.kurtosis(),
            sidelobe_mean,
            sidelobe_variance,
            n_trials,
            exclusion: options.exclusion,
        },
        block_variances,
    })
}
