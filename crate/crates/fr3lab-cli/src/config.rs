//! Versioned scenario configuration: one TOML file with a section per
//! subcommand, strict about unknown keys, every numeric field unit-suffixed.
//!
//! Precedence: file < `--set key=value` overrides < dedicated flags
//! (`--seed`, `--out`, `--grid-step`).

use serde::{Deserialize, Serialize};

use fr3lab::alignment::{Scene, SceneSource, TierConfig};
use fr3lab::payload::{ConstellationSpec, PayloadModel};
use fr3lab::raas::{Band, BlockedSlot, InterferenceModel, MissionProfile, Policy, SlotGrid};
use fr3lab::tracking::{LinkBudget, RegimeConfig};

use crate::error::{CliError, ExitKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub master_seed: u64,
    pub output_dir: String,
    pub beampattern: BeampatternSection,
    pub squint: SquintSection,
    pub crb: CrbSection,
    pub align: AlignSection,
    pub schedule: ScheduleSection,
    pub drt: DrtSection,
    pub track: TrackSection,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            master_seed: 0,
            output_dir: "out".into(),
            beampattern: BeampatternSection::default(),
            squint: SquintSection::default(),
            crb: CrbSection::default(),
            align: AlignSection::default(),
            schedule: ScheduleSection::default(),
            drt: DrtSection::default(),
            track: TrackSection::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeampatternSection {
    pub n_elements: usize,
    pub design_frequency_hz: f64,
    pub pointing_angle_deg: f64,
    /// Frequency the pattern is evaluated at; the design carrier if omitted.
    pub evaluation_frequency_hz: Option<f64>,
    pub grid_step_deg: f64,
    pub span_deg: (f64, f64),
    pub normalize: bool,
}

impl Default for BeampatternSection {
    fn default() -> Self {
        Self {
            n_elements: 32,
            design_frequency_hz: 24e9,
            pointing_angle_deg: 10.0,
            evaluation_frequency_hz: None,
            grid_step_deg: 0.01,
            span_deg: (-89.0, 89.0),
            normalize: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquintCase {
    pub carrier_center_hz: f64,
    pub bandwidth_hz: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquintSection {
    pub n_elements: usize,
    pub design_frequency_hz: f64,
    pub pointing_angle_deg: f64,
    pub grid_step_deg: f64,
    pub cases: Vec<SquintCase>,
}

impl Default for SquintSection {
    fn default() -> Self {
        Self {
            n_elements: 32,
            design_frequency_hz: 24e9,
            pointing_angle_deg: 10.0,
            grid_step_deg: 0.01,
            cases: vec![
                SquintCase {
                    carrier_center_hz: 24e9,
                    bandwidth_hz: 400e6,
                },
                SquintCase {
                    carrier_center_hz: 18e9,
                    bandwidth_hz: 300e6,
                },
                SquintCase {
                    carrier_center_hz: 6e9,
                    bandwidth_hz: 100e6,
                },
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryMode {
    FixedAperture,
    PerCarrier,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrbSection {
    pub n_elements: usize,
    pub array_snr_db: f64,
    pub angle_deg: f64,
    pub ranges_m: Vec<f64>,
    pub frequency_start_hz: f64,
    pub frequency_stop_hz: f64,
    pub frequency_count: usize,
    pub geometry: GeometryMode,
    /// Carrier whose half-wavelength layout is frozen in fixed-aperture mode.
    pub design_frequency_hz: f64,
}

impl Default for CrbSection {
    fn default() -> Self {
        Self {
            n_elements: 32,
            array_snr_db: 20.0,
            angle_deg: 0.0,
            ranges_m: vec![2.0, 10.0, 20.0],
            frequency_start_hz: 7e9,
            frequency_stop_hz: 24e9,
            frequency_count: 35,
            geometry: GeometryMode::FixedAperture,
            design_frequency_hz: 24e9,
        }
    }
}

impl CrbSection {
    pub fn frequencies_hz(&self) -> Vec<f64> {
        if self.frequency_count <= 1 {
            return vec![self.frequency_start_hz];
        }
        let step =
            (self.frequency_stop_hz - self.frequency_start_hz) / (self.frequency_count - 1) as f64;
        (0..self.frequency_count)
            .map(|i| self.frequency_start_hz + i as f64 * step)
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlignSection {
    pub sources: Vec<SceneSource>,
    pub noise_power: f64,
    pub coarse: TierConfig,
    pub fine: TierConfig,
    pub window_halfwidth_deg: f64,
    /// Grid used by the two full-span response exports.
    pub figure_grid_step_deg: f64,
}

impl Default for AlignSection {
    fn default() -> Self {
        Self {
            sources: vec![
                SceneSource {
                    angle_deg: 0.0,
                    power: 1.0,
                },
                SceneSource {
                    angle_deg: 5.0,
                    power: 1.0,
                },
            ],
            noise_power: 0.01,
            coarse: fr3lab::alignment::default_coarse_tier(),
            fine: fr3lab::alignment::default_fine_tier(),
            window_halfwidth_deg: fr3lab::alignment::DEFAULT_WINDOW_HALFWIDTH_DEG,
            figure_grid_step_deg: 0.05,
        }
    }
}

impl AlignSection {
    pub fn scene(&self) -> Scene {
        Scene {
            sources: self.sources.clone(),
            noise_power: self.noise_power,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub n_slots_per_frame: usize,
    pub slot_duration_s: f64,
    pub horizon_frames: usize,
    pub bands: Vec<Band>,
    #[serde(default)]
    pub blocked: Vec<BlockedSlot>,
    pub missions: Vec<MissionProfile>,
    pub policy: Policy,
    #[serde(default)]
    pub cumulative_interference: bool,
    pub interference: InterferenceModel,
}

impl Default for ScheduleSection {
    fn default() -> Self {
        Self {
            n_slots_per_frame: 10,
            slot_duration_s: 1e-3,
            horizon_frames: 4,
            bands: vec![
                Band {
                    center_hz: 26.5e9,
                    width_hz: 400e6,
                },
                Band {
                    center_hz: 27.5e9,
                    width_hz: 200e6,
                },
            ],
            blocked: vec![
                BlockedSlot {
                    frame: 0,
                    slot: 0,
                    band: 0,
                },
                BlockedSlot {
                    frame: 2,
                    slot: 5,
                    band: 1,
                },
            ],
            missions: vec![
                MissionProfile {
                    node_id: "perimeter-radar".into(),
                    required_bandwidth_hz: 400e6,
                    window_length_slots: 2,
                    period_slots: 10,
                    required_sinr_db: 20.0,
                    position_m: (0.0, 0.0),
                    priority: 0,
                },
                MissionProfile {
                    node_id: "drone-watch".into(),
                    required_bandwidth_hz: 200e6,
                    window_length_slots: 1,
                    period_slots: 5,
                    required_sinr_db: 18.0,
                    position_m: (40.0, 30.0),
                    priority: 1,
                },
                MissionProfile {
                    node_id: "intersection-cam".into(),
                    required_bandwidth_hz: 100e6,
                    window_length_slots: 3,
                    period_slots: 0,
                    required_sinr_db: 15.0,
                    position_m: (8_000.0, 0.0),
                    priority: 2,
                },
            ],
            policy: Policy::GreedyPriority,
            cumulative_interference: false,
            interference: InterferenceModel::default(),
        }
    }
}

impl ScheduleSection {
    pub fn grid(&self) -> SlotGrid {
        SlotGrid {
            n_slots_per_frame: self.n_slots_per_frame,
            slot_duration_s: self.slot_duration_s,
            bands: self.bands.clone(),
            horizon_frames: self.horizon_frames,
            blocked: self.blocked.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrtSection {
    /// One of `qpsk`, `qam16`, `gaussian`, `psk<N>`.
    pub constellation: String,
    /// JSON file with `[[re, im], ...]` points overriding `constellation`.
    pub alphabet_file: Option<String>,
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    pub pilot_stride: usize,
    pub n_trials: usize,
    pub max_delay_bins: usize,
    pub max_doppler_bins: usize,
    pub exclusion_delay_bins: usize,
    pub exclusion_doppler_bins: usize,
    pub cyclic_prefix_len: usize,
}

impl Default for DrtSection {
    fn default() -> Self {
        Self {
            constellation: "qpsk".into(),
            alphabet_file: None,
            n_subcarriers: 64,
            n_symbols: 14,
            pilot_stride: 8,
            n_trials: 500,
            max_delay_bins: 10,
            max_doppler_bins: 10,
            exclusion_delay_bins: 1,
            exclusion_doppler_bins: 1,
            cyclic_prefix_len: 0,
        }
    }
}

impl DrtSection {
    pub fn payload_model(&self) -> Result<PayloadModel, CliError> {
        if let Some(path) = &self.alphabet_file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError {
                kind: ExitKind::Io,
                field: Some("drt.alphabet_file".into()),
                message: format!("cannot read {path}: {e}"),
            })?;
            let points: Vec<(f64, f64)> = serde_json::from_str(&text).map_err(|e| CliError {
                kind: ExitKind::ConfigParse,
                field: Some("drt.alphabet_file".into()),
                message: format!("invalid alphabet JSON: {e}"),
            })?;
            let alphabet = points
                .into_iter()
                .map(|(re, im)| num_complex::Complex64::new(re, im))
                .collect();
            let spec = ConstellationSpec::new("custom", alphabet, None).map_err(|e| CliError {
                kind: ExitKind::Validation,
                field: Some("drt.alphabet_file".into()),
                message: e.to_string(),
            })?;
            return Ok(PayloadModel::Constellation(spec));
        }
        match self.constellation.as_str() {
            "qpsk" => Ok(PayloadModel::Constellation(ConstellationSpec::qpsk())),
            "qam16" => Ok(PayloadModel::Constellation(ConstellationSpec::qam16())),
            "gaussian" => Ok(PayloadModel::CircularGaussian),
            other => {
                if let Some(order) = other.strip_prefix("psk") {
                    if let Ok(m) = order.parse::<usize>() {
                        if m >= 2 {
                            return Ok(PayloadModel::Constellation(
                                ConstellationSpec::psk(m).expect("psk order >= 2"),
                            ));
                        }
                    }
                }
                Err(CliError {
                    kind: ExitKind::Validation,
                    field: Some("drt.constellation".into()),
                    message: format!(
                        "unknown constellation {other:?} (expected qpsk, qam16, gaussian, or psk<N>)"
                    ),
                })
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackSection {
    pub distance_start_m: f64,
    pub distance_stop_m: f64,
    pub distance_step_m: f64,
    pub accuracy_target_m: f64,
    pub coverage_bracket_m: (f64, f64),
    pub link: LinkBudget,
    pub regimes: Vec<RegimeConfig>,
}

impl Default for TrackSection {
    fn default() -> Self {
        Self {
            distance_start_m: 2.0,
            distance_stop_m: 40.0,
            distance_step_m: 0.5,
            accuracy_target_m: 0.1,
            coverage_bracket_m: fr3lab::tracking::COVERAGE_BRACKET_M,
            link: fr3lab::tracking::reference_calibration(),
            regimes: fr3lab::tracking::default_regimes(),
        }
    }
}

impl TrackSection {
    pub fn distances_m(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut d = self.distance_start_m;
        while d <= self.distance_stop_m + 1e-9 {
            out.push(d);
            d += self.distance_step_m;
        }
        out
    }
}

/// Load a config file (or defaults when `None`), apply `--set` overrides,
/// and deserialize strictly.
///
/// The user tree is deep-merged over the serialized defaults, so partially
/// specified sections inherit field defaults while unknown keys still fail.
pub fn load_config(path: Option<&str>, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let user: toml::Value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError {
                kind: ExitKind::ConfigParse,
                field: None,
                message: format!("cannot read config {p}: {e}"),
            })?;
            toml::from_str(&text).map_err(|e| CliError {
                kind: ExitKind::ConfigParse,
                field: None,
                message: format!("TOML syntax error in {p}: {e}"),
            })?
        }
        None => toml::Value::Table(toml::map::Map::new()),
    };

    let mut value = toml::Value::try_from(ScenarioConfig::default()).map_err(|e| CliError {
        kind: ExitKind::ConfigParse,
        field: None,
        message: format!("internal default-config serialization error: {e}"),
    })?;
    deep_merge(&mut value, user);

    for entry in overrides {
        apply_override(&mut value, entry)?;
    }

    let config: ScenarioConfig = value.try_into().map_err(|e| CliError {
        kind: ExitKind::ConfigParse,
        field: None,
        message: format!("config schema error: {e}"),
    })?;
    if config.schema_version != SCHEMA_VERSION {
        return Err(CliError {
            kind: ExitKind::Validation,
            field: Some("schema_version".into()),
            message: format!(
                "unsupported schema_version {} (this build speaks {SCHEMA_VERSION})",
                config.schema_version
            ),
        });
    }
    validate(&config)?;
    Ok(config)
}

/// Tables merge key by key; everything else (including arrays) replaces.
fn deep_merge(base: &mut toml::Value, user: toml::Value) {
    match (base, user) {
        (toml::Value::Table(base_table), toml::Value::Table(user_table)) => {
            for (key, user_value) in user_table {
                match base_table.get_mut(&key) {
                    Some(base_value) => deep_merge(base_value, user_value),
                    None => {
                        // Unknown key: keep it so strict deserialization
                        // reports it instead of silently dropping.
                        base_table.insert(key, user_value);
                    }
                }
            }
        }
        (base_slot, user_value) => *base_slot = user_value,
    }
}

/// Apply one `dotted.path=value` override onto the raw TOML tree. The value
/// side is parsed as TOML, so numbers, booleans, strings, and arrays all
/// work.
fn apply_override(root: &mut toml::Value, entry: &str) -> Result<(), CliError> {
    let Some((path, raw)) = entry.split_once('=') else {
        return Err(CliError {
            kind: ExitKind::ConfigParse,
            field: None,
            message: format!("override {entry:?} is not of the form key=value"),
        });
    };
    // Numbers, booleans, arrays, and quoted strings parse as TOML values;
    // bare words fall back to strings so `--set crb.geometry=per-carrier`
    // reads naturally.
    let parsed: toml::Value = raw
        .parse::<toml::Value>()
        .unwrap_or_else(|_| toml::Value::String(raw.to_string()));

    let keys: Vec<&str> = path.split('.').collect();
    let mut cursor = root;
    for key in &keys[..keys.len() - 1] {
        let table = cursor.as_table_mut().ok_or_else(|| CliError {
            kind: ExitKind::ConfigParse,
            field: Some(path.to_string()),
            message: format!("override path {path} crosses a non-table value"),
        })?;
        cursor = table
            .entry(key.to_string())
            .or_insert(toml::Value::Table(toml::map::Map::new()));
    }
    let table = cursor.as_table_mut().ok_or_else(|| CliError {
        kind: ExitKind::ConfigParse,
        field: Some(path.to_string()),
        message: format!("override path {path} crosses a non-table value"),
    })?;
    table.insert(keys[keys.len() - 1].to_string(), parsed);
    Ok(())
}

fn positive(value: f64, field: &str) -> Result<(), CliError> {
    if value <= 0.0 || !value.is_finite() {
        return Err(CliError {
            kind: ExitKind::Validation,
            field: Some(field.to_string()),
            message: format!("{field} must be positive and finite, got {value}"),
        });
    }
    Ok(())
}

/// Semantic checks with field-path diagnostics; structural/type errors have
/// already been caught by serde.
fn validate(config: &ScenarioConfig) -> Result<(), CliError> {
    let b = &config.beampattern;
    positive(b.design_frequency_hz, "beampattern.design_frequency_hz")?;
    positive(b.grid_step_deg, "beampattern.grid_step_deg")?;

    let s = &config.squint;
    positive(s.design_frequency_hz, "squint.design_frequency_hz")?;
    positive(s.grid_step_deg, "squint.grid_step_deg")?;
    for (i, case) in s.cases.iter().enumerate() {
        positive(
            case.carrier_center_hz,
            &format!("squint.cases[{i}].carrier_center_hz"),
        )?;
        positive(
            case.bandwidth_hz,
            &format!("squint.cases[{i}].bandwidth_hz"),
        )?;
    }

    let c = &config.crb;
    positive(c.frequency_start_hz, "crb.frequency_start_hz")?;
    positive(c.frequency_stop_hz, "crb.frequency_stop_hz")?;
    positive(c.design_frequency_hz, "crb.design_frequency_hz")?;
    for (i, r) in c.ranges_m.iter().enumerate() {
        positive(*r, &format!("crb.ranges_m[{i}]"))?;
    }

    let a = &config.align;
    positive(a.window_halfwidth_deg, "align.window_halfwidth_deg")?;
    positive(a.figure_grid_step_deg, "align.figure_grid_step_deg")?;

    let sched = &config.schedule;
    for (i, band) in sched.bands.iter().enumerate() {
        positive(band.width_hz, &format!("schedule.bands[{i}].width_hz"))?;
    }
    for (i, m) in sched.missions.iter().enumerate() {
        positive(
            m.required_bandwidth_hz,
            &format!("schedule.missions[{i}].required_bandwidth_hz"),
        )?;
    }

    let d = &config.drt;
    if d.n_subcarriers == 0 || d.n_symbols == 0 {
        return Err(CliError {
            kind: ExitKind::Validation,
            field: Some("drt.n_subcarriers".into()),
            message: "frame dimensions must be positive".into(),
        });
    }
    if d.n_trials < 2 {
        return Err(CliError {
            kind: ExitKind::Validation,
            field: Some("drt.n_trials".into()),
            message: format!("need at least 2 trials, got {}", d.n_trials),
        });
    }

    let t = &config.track;
    positive(t.distance_start_m, "track.distance_start_m")?;
    positive(t.distance_step_m, "track.distance_step_m")?;
    positive(t.accuracy_target_m, "track.accuracy_target_m")?;
    positive(t.link.path_loss_exponent, "track.link.path_loss_exponent")?;
    positive(t.link.squint.bandwidth_hz, "track.link.squint.bandwidth_hz")?;
    for (i, regime) in t.regimes.iter().enumerate() {
        positive(regime.carrier_hz, &format!("track.regimes[{i}].carrier_hz"))?;
        positive(
            regime.design_frequency_hz,
            &format!("track.regimes[{i}].design_frequency_hz"),
        )?;
    }
    Ok(())
}
