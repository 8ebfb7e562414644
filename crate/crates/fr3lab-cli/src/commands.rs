//! One runner per subcommand: pull the section out of the scenario config,
//! call the library, write the artifact files.

use serde::Serialize;

use fr3lab::alignment::{exhaustive_scan_cost, hierarchical_align, scan_response, TierConfig};
use fr3lab::array::{angle_grid, beampattern, build_ula, pointing_weights};
use fr3lab::estimation::{crb_sweep, CellOutcome, GeometryRule, SnrSpec};
use fr3lab::mc::{trial_rng, CompensatedSum};
use fr3lab::payload::{
    af_sidelobe_run, ambiguity_of_signal, generate_ofdm_frame_with_rng, resource_split,
    ExclusionZone, FrameLayout, FrameOptions, StatsOptions,
};
use fr3lab::raas::{build_schedule, verify_schedule, BuildOptions};
use fr3lab::squint::intra_band_spread;
use fr3lab::tracking::{coverage_radius, regime_squint_loss_db, rmse_curve, CoverageOutcome};

use crate::config::{GeometryMode, ScenarioConfig};
use crate::error::CliError;
use crate::output::{Csv, CsvCell, OutputSink};

pub fn run_beampattern(config: &ScenarioConfig, sink: &mut OutputSink) -> Result<(), CliError> {
    let section = &config.beampattern;
    let geom =
        build_ula(section.n_elements, section.design_frequency_hz).map_err(CliError::numerical)?;
    let weights = pointing_weights(
        &geom,
        section.pointing_angle_deg,
        section.design_frequency_hz,
    )
    .map_err(CliError::numerical)?;
    let frequency = section
        .evaluation_frequency_hz
        .unwrap_or(section.design_frequency_hz);
    let grid = angle_grid(
        section.span_deg.0,
        section.span_deg.1,
        section.grid_step_deg,
    )
    .map_err(CliError::numerical)?;
    let pattern = beampattern(&geom, &weights, frequency, &grid, section.normalize)
        .map_err(CliError::numerical)?;
    let mut csv = Csv::new(&["angle_deg", "gain"]);
    for (a, g) in pattern.angle_grid_deg.iter().zip(&pattern.gains) {
        csv.row(&[CsvCell::F(*a), CsvCell::F(*g)]);
    }
    sink.write_text("beampattern.csv", &csv.into_text())
}

pub fn run_squint(
    config: &ScenarioConfig,
    sink: &mut OutputSink,
    file_name: &str,
) -> Result<(), CliError> {
    let section = &config.squint;
    let geom =
        build_ula(section.n_elements, section.design_frequency_hz).map_err(CliError::numerical)?;
    let mut csv = Csv::new(&[
        "design_frequency_hz",
        "carrier_center_hz",
        "bandwidth_hz",
        "pointing_angle_deg",
        "apparent_center_angle_deg",
        "edge_low_angle_deg",
        "edge_high_angle_deg",
        "max_deviation_deg",
        "snr_loss_db",
    ]);
    for case in &section.cases {
        let report = intra_band_spread(
            &geom,
            section.design_frequency_hz,
            case.carrier_center_hz,
            case.bandwidth_hz,
            section.pointing_angle_deg,
            section.grid_step_deg,
        )
        .map_err(CliError::numerical)?;
        csv.row(&[
            CsvCell::F(report.design_frequency_hz),
            CsvCell::F(report.carrier_center_hz),
            CsvCell::F(report.bandwidth_hz),
            CsvCell::F(report.pointing_angle_deg),
            CsvCell::F(report.apparent_center_angle_deg),
            CsvCell::F(report.edge_angles_deg.0),
            CsvCell::F(report.edge_angles_deg.1),
            CsvCell::F(report.max_deviation_from_center_deg),
            CsvCell::F(report.snr_loss_db),
        ]);
    }
    sink.write_text(file_name, &csv.into_text())
}

pub fn run_crb(
    config: &ScenarioConfig,
    sink: &mut OutputSink,
    file_name: &str,
) -> Result<(), CliError> {
    let section = &config.crb;
    let rule = match section.geometry {
        GeometryMode::FixedAperture => GeometryRule::FixedAperture {
            n_elements: section.n_elements,
            design_frequency_hz: section.design_frequency_hz,
        },
        GeometryMode::PerCarrier => GeometryRule::PerCarrierHalfWavelength {
            n_elements: section.n_elements,
        },
    };
    let snr = SnrSpec::array_level_db(section.array_snr_db, section.n_elements);
    let cells = crb_sweep(
        &rule,
        &section.frequencies_hz(),
        &section.ranges_m,
        section.angle_deg,
        &snr,
    );
    let mut csv = Csv::new(&[
        "frequency_hz",
        "range_m",
        "angle_deg",
        "crb_range_m2",
        "crb_angle_deg2",
        "fraunhofer_m",
    ]);
    for cell in &cells {
        match &cell.outcome {
            CellOutcome::Ok {
                range_crb_m2,
                angle_crb_deg2,
                ..
            } => csv.row(&[
                CsvCell::F(cell.frequency_hz),
                CsvCell::F(cell.range_m),
                CsvCell::F(cell.angle_deg),
                CsvCell::F(*range_crb_m2),
                CsvCell::F(*angle_crb_deg2),
                CsvCell::F(cell.fraunhofer_m),
            ]),
            CellOutcome::Failed { .. } => csv.row(&[
                CsvCell::F(cell.frequency_hz),
                CsvCell::F(cell.range_m),
                CsvCell::F(cell.angle_deg),
                CsvCell::F(f64::NAN),
                CsvCell::F(f64::NAN),
                CsvCell::F(cell.fraunhofer_m),
            ]),
        }
    }
    sink.write_text(file_name, &csv.into_text())
}

#[derive(Serialize)]
struct AlignSummary {
    coarse_peak_deg: f64,
    refinement_window_deg: (f64, f64),
    fine_peaks_deg: Vec<f64>,
    resolved: Vec<bool>,
    coarse_evaluations: usize,
    fine_evaluations: usize,
    exhaustive_fine_evaluations: usize,
}

pub fn run_align(
    config: &ScenarioConfig,
    sink: &mut OutputSink,
    prefix: &str,
) -> Result<(), CliError> {
    let section = &config.align;
    let scene = section.scene();

    // Figure exports: both tiers on one shared full-span grid.
    let span = section.coarse.scan_span_deg;
    for (tier, name) in [(&section.coarse, "coarse"), (&section.fine, "fine")] {
        let figure_tier = TierConfig {
            scan_grid_step_deg: section.figure_grid_step_deg,
            scan_span_deg: span,
            ..*tier
        };
        let pattern = scan_response(&scene, &figure_tier).map_err(CliError::numerical)?;
        let mut csv = Csv::new(&["angle_deg", "gain"]);
        for (a, g) in pattern.angle_grid_deg.iter().zip(&pattern.gains) {
            csv.row(&[CsvCell::F(*a), CsvCell::F(*g)]);
        }
        sink.write_text(&format!("{prefix}{name}_response.csv"), &csv.into_text())?;
    }

    let result = hierarchical_align(
        &scene,
        &section.coarse,
        &section.fine,
        section.window_halfwidth_deg,
    )
    .map_err(CliError::numerical)?;
    let summary = AlignSummary {
        coarse_peak_deg: result.coarse_peak_deg,
        refinement_window_deg: result.refinement_window_deg,
        fine_peaks_deg: result.fine_peaks_deg.clone(),
        resolved: result.resolved.clone(),
        coarse_evaluations: result.coarse_evaluations,
        fine_evaluations: result.fine_evaluations,
        exhaustive_fine_evaluations: exhaustive_scan_cost(&section.fine)
            .map_err(CliError::numerical)?,
    };
    sink.write_json(&format!("{prefix}alignment.json"), &summary)
}

pub fn run_schedule(config: &ScenarioConfig, sink: &mut OutputSink) -> Result<(), CliError> {
    let section = &config.schedule;
    let grid = section.grid();
    let schedule = build_schedule(
        &grid,
        &section.missions,
        &section.interference,
        BuildOptions {
            policy: section.policy,
            cumulative_interference: section.cumulative_interference,
        },
    )
    .map_err(CliError::numerical)?;
    let report = verify_schedule(&grid, &section.missions, &section.interference, &schedule);

    #[derive(Serialize)]
    struct ScheduleOutput<'a> {
        schedule: &'a fr3lab::raas::SensingSchedule,
        verification_conflicts: &'a [fr3lab::raas::ConflictItem],
    }
    sink.write_json(
        "schedule.json",
        &ScheduleOutput {
            schedule: &schedule,
            verification_conflicts: &report,
        },
    )?;

    let mut csv = Csv::new(&["band_index", "center_hz", "width_hz", "utilization"]);
    for (i, (band, util)) in grid.bands.iter().zip(&schedule.utilization).enumerate() {
        csv.row(&[
            CsvCell::I(i as i64),
            CsvCell::F(band.center_hz),
            CsvCell::F(band.width_hz),
            CsvCell::F(*util),
        ]);
    }
    sink.write_text("utilization.csv", &csv.into_text())
}

#[derive(Serialize)]
struct DrtSummary {
    payload: String,
    kurtosis: f64,
    pilot_fraction: f64,
    payload_fraction: f64,
    sidelobe_mean: f64,
    sidelobe_variance: f64,
    n_trials: usize,
    exclusion_delay_bins: usize,
    exclusion_doppler_bins: usize,
}

pub fn run_drt(config: &ScenarioConfig, sink: &mut OutputSink) -> Result<(), CliError> {
    let section = &config.drt;
    let payload = section.payload_model()?;
    let layout = FrameLayout::comb(
        section.n_subcarriers,
        section.n_symbols,
        section.pilot_stride,
    );
    let (pilot_fraction, payload_fraction) = resource_split(&layout);
    let options = StatsOptions {
        max_delay_bins: section.max_delay_bins,
        max_doppler_bins: section.max_doppler_bins,
        exclusion: ExclusionZone {
            delay_bins: section.exclusion_delay_bins,
            doppler_bins: section.exclusion_doppler_bins,
        },
        frame: FrameOptions {
            cyclic_prefix_len: section.cyclic_prefix_len,
            pulse_window: None,
        },
    };
    let run = af_sidelobe_run(
        &payload,
        &layout,
        section.n_trials,
        config.master_seed,
        &options,
        1,
    )
    .map_err(CliError::numerical)?;

    sink.write_json(
        "af_stats.json",
        &DrtSummary {
            payload: run.stats.payload.clone(),
            kurtosis: run.stats.kurtosis,
            pilot_fraction,
            payload_fraction,
            sidelobe_mean: run.stats.sidelobe_mean,
            sidelobe_variance: run.stats.sidelobe_variance,
            n_trials: run.stats.n_trials,
            exclusion_delay_bins: run.stats.exclusion.delay_bins,
            exclusion_doppler_bins: run.stats.exclusion.doppler_bins,
        },
    )?;

    // Mean |χ|² surface over the same trial streams.
    let n_delay = 2 * section.max_delay_bins + 1;
    let n_doppler = 2 * section.max_doppler_bins + 1;
    let mut sums = vec![CompensatedSum::new(); n_delay * n_doppler];
    for trial in 0..section.n_trials {
        let mut rng = trial_rng(config.master_seed, trial as u64 + 1);
        let frame = generate_ofdm_frame_with_rng(&payload, &layout, &mut rng, &options.frame);
        let af = ambiguity_of_signal(
            &frame.time_signal,
            section.max_delay_bins,
            section.max_doppler_bins,
        )
        .map_err(CliError::numerical)?;
        for (i, v) in af.values.iter().enumerate() {
            sums[i].add(v.norm_sqr());
        }
    }
    let mut csv = Csv::new(&["delay_bin", "doppler_bin", "af_power_mean"]);
    for (vi, doppler) in
        (-(section.max_doppler_bins as i64)..=(section.max_doppler_bins as i64)).enumerate()
    {
        for (di, delay) in
            (-(section.max_delay_bins as i64)..=(section.max_delay_bins as i64)).enumerate()
        {
            let mean = sums[vi * n_delay + di].total() / section.n_trials as f64;
            csv.row(&[CsvCell::I(delay), CsvCell::I(doppler), CsvCell::F(mean)]);
        }
    }
    sink.write_text("af_surface.csv", &csv.into_text())
}

#[derive(Serialize)]
struct RegimeCoverage {
    regime: String,
    squint_loss_db: f64,
    coverage: CoverageOutcome,
}

#[derive(Serialize)]
struct TrackSummary {
    accuracy_target_m: f64,
    coverage: Vec<RegimeCoverage>,
    /// Extra coverage bought by squint compensation, meters (when both
    /// 24 GHz regimes resolve to finite radii).
    compensation_coverage_gain_m: Option<f64>,
    /// RMSE improvement of compensation at the uncompensated coverage edge.
    compensation_rmse_gain_m: Option<f64>,
}

pub fn run_track(
    config: &ScenarioConfig,
    sink: &mut OutputSink,
    prefix: &str,
) -> Result<(), CliError> {
    let section = &config.track;
    let distances = section.distances_m();
    let curve =
        rmse_curve(&section.link, &section.regimes, &distances).map_err(CliError::numerical)?;

    let mut header: Vec<String> = vec!["distance_m".into()];
    for name in &curve.regime_names {
        header.push(format!("rmse_{}_m", name.replace('-', "_")));
    }
    header.push("rmse_hybrid_m".into());
    header.push("chosen_regime".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&header_refs);
    for (di, &d) in curve.distances_m.iter().enumerate() {
        let mut cells = vec![CsvCell::F(d)];
        for regime in 0..curve.regime_names.len() {
            cells.push(CsvCell::F(curve.rmse_m[regime][di]));
        }
        cells.push(CsvCell::F(curve.hybrid[di].rmse_m));
        cells.push(CsvCell::S(&curve.hybrid[di].regime_name));
        csv.row(&cells);
    }
    sink.write_text(&format!("{prefix}tracking.csv"), &csv.into_text())?;

    let mut coverage = Vec::new();
    for regime in &section.regimes {
        coverage.push(RegimeCoverage {
            regime: regime.name.clone(),
            squint_loss_db: regime_squint_loss_db(&section.link, regime)
                .map_err(CliError::numerical)?,
            coverage: coverage_radius(
                &section.link,
                regime,
                section.accuracy_target_m,
                section.coverage_bracket_m,
            )
            .map_err(CliError::numerical)?,
        });
    }

    let radius_of = |name: &str| -> Option<f64> {
        coverage
            .iter()
            .find(|c| c.regime == name)
            .and_then(|c| match c.coverage {
                CoverageOutcome::Radius(r) => Some(r),
                _ => None,
            })
    };
    let unc = radius_of("24ghz-uncompensated");
    let comp = radius_of("24ghz-compensated");
    let coverage_gain = match (unc, comp) {
        (Some(u), Some(c)) => Some(c - u),
        _ => None,
    };
    let rmse_gain = match unc {
        Some(u) => {
            let find = |name: &str| section.regimes.iter().find(|r| r.name == name);
            match (find("24ghz-uncompensated"), find("24ghz-compensated")) {
                (Some(ru), Some(rc)) => {
                    let at_edge = |r| fr3lab::tracking::localization_rmse(&section.link, r, u);
                    match (at_edge(ru), at_edge(rc)) {
                        (Ok(a), Ok(b)) => Some(a - b),
                        _ => None,
                    }
                }
                _ => None,
            }
        }
        None => None,
    };

    sink.write_json(
        &format!("{prefix}summary.json"),
        &TrackSummary {
            accuracy_target_m: section.accuracy_target_m,
            coverage,
            compensation_coverage_gain_m: coverage_gain,
            compensation_rmse_gain_m: rmse_gain,
        },
    )
}

/// Named figure-data bundles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureTarget {
    All,
    /// Two-tier beam-alignment responses.
    Fig2,
    /// CRB-versus-carrier table.
    Fig3,
    /// Squint anchor table.
    Fig4,
    /// Tracking RMSE curves and coverage summary.
    Fig5,
}

pub fn run_figures(
    config: &ScenarioConfig,
    sink: &mut OutputSink,
    target: FigureTarget,
) -> Result<(), CliError> {
    let all = target == FigureTarget::All;
    if all || target == FigureTarget::Fig2 {
        run_align(config, sink, "fig2_")?;
    }
    if all || target == FigureTarget::Fig3 {
        run_crb(config, sink, "fig3_crb.csv")?;
    }
    if all || target == FigureTarget::Fig4 {
        run_squint(config, sink, "fig4_squint.csv")?;
    }
    if all || target == FigureTarget::Fig5 {
        run_track(config, sink, "fig5_")?;
    }
    Ok(())
}
