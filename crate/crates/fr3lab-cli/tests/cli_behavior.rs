//! Black-box checks of the binary: exit codes, error reports, override
//! precedence, and the documented CSV schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fr3lab")
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fr3lab-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn header_of(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
        .lines()
        .next()
        .unwrap_or_default()
        .split(',')
        .map(str::to_string)
        .collect()
}

#[test]
fn csv_headers_match_documented_schemas() {
    let out = scratch("schemas");
    let out_str = out.to_str().unwrap();
    let status = run(&[
        "reproduce-figures",
        "all",
        "--out",
        out_str,
        "--set",
        "crb.frequency_count=3",
        "--set",
        "align.figure_grid_step_deg=0.5",
        "--set",
        "track.distance_step_m=5.0",
    ]);
    assert!(status.status.success());

    assert_eq!(
        header_of(&out.join("fig3_crb.csv")),
        [
            "frequency_hz",
            "range_m",
            "angle_deg",
            "crb_range_m2",
            "crb_angle_deg2",
            "fraunhofer_m"
        ]
    );
    assert_eq!(
        header_of(&out.join("fig4_squint.csv")),
        [
            "design_frequency_hz",
            "carrier_center_hz",
            "bandwidth_hz",
            "pointing_angle_deg",
            "apparent_center_angle_deg",
            "edge_low_angle_deg",
            "edge_high_angle_deg",
            "max_deviation_deg",
            "snr_loss_db"
        ]
    );
    assert_eq!(
        header_of(&out.join("fig2_coarse_response.csv")),
        ["angle_deg", "gain"]
    );
    // Both alignment exports share one angle grid.
    let coarse = std::fs::read_to_string(out.join("fig2_coarse_response.csv")).unwrap();
    let fine = std::fs::read_to_string(out.join("fig2_fine_response.csv")).unwrap();
    let grid = |text: &str| -> Vec<String> {
        text.lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap().to_string())
            .collect()
    };
    assert_eq!(grid(&coarse), grid(&fine));

    assert_eq!(
        header_of(&out.join("fig5_tracking.csv")),
        [
            "distance_m",
            "rmse_6ghz_m",
            "rmse_24ghz_uncompensated_m",
            "rmse_24ghz_compensated_m",
            "rmse_hybrid_m",
            "chosen_regime"
        ]
    );

    // The squint table carries its three anchor rows.
    let fig4 = std::fs::read_to_string(out.join("fig4_squint.csv")).unwrap();
    let mut anchors = 0;
    for line in fig4.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse::<f64>().unwrap()).collect();
        let (carrier, bandwidth, center, deviation) = (cells[1], cells[2], cells[4], cells[7]);
        if carrier == 24e9 && bandwidth == 400e6 {
            assert!((deviation - 0.1).abs() <= 0.02, "row: {line}");
            anchors += 1;
        }
        if carrier == 6e9 && bandwidth == 100e6 {
            assert!((deviation - 0.5).abs() <= 0.1, "row: {line}");
            anchors += 1;
        }
        if carrier == 18e9 {
            assert!((center - 13.4).abs() <= 0.1, "row: {line}");
            anchors += 1;
        }
    }
    assert_eq!(anchors, 3, "fig4 anchor rows missing:\n{fig4}");
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn schedule_outputs_and_exit_zero_with_rejections() {
    let out = scratch("sched");
    let out_str = out.to_str().unwrap();
    // Demand one mission wider than any band: rejected, but still exit 0.
    let status = run(&[
        "schedule",
        "--out",
        out_str,
        "--set",
        "schedule.missions=[{node_id = \"wide\", required_bandwidth_hz = 9e9, window_length_slots = 1, period_slots = 0, required_sinr_db = 20.0, position_m = [0.0, 0.0], priority = 0}]",
    ]);
    assert!(status.status.success());
    let schedule: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("schedule.json")).unwrap()).unwrap();
    assert_eq!(schedule["schedule"]["rejections"][0]["reason"], "bandwidth");
    assert_eq!(
        schedule["verification_conflicts"].as_array().unwrap().len(),
        0
    );
    assert_eq!(
        header_of(&out.join("utilization.csv")),
        ["band_index", "center_hz", "width_hz", "utilization"]
    );
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn config_parse_errors_exit_two() {
    let out = scratch("parse");
    let bad = out.join("broken.toml");
    std::fs::create_dir_all(&out).unwrap();
    std::fs::write(&bad, "this is not toml [").unwrap();
    let output = run(&["crb", "--config", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));

    // Unknown keys are config errors too.
    std::fs::write(&bad, "schema_version = 1\n[crb]\nnot_a_field = 3\n").unwrap();
    let output = run(&["crb", "--config", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("not_a_field"), "stderr: {stderr}");
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn validation_errors_exit_three_and_name_the_field() {
    let output = run(&[
        "squint",
        "--set",
        "squint.cases=[{carrier_center_hz = 24e9, bandwidth_hz = -1.0}]",
        "--out",
        scratch("val").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&output.stderr);
    let report: serde_json::Value =
        serde_json::from_str(stderr.lines().next().unwrap()).expect("machine-readable report");
    assert_eq!(report["error_kind"], "validation");
    assert_eq!(report["field"], "squint.cases[0].bandwidth_hz");
}

#[test]
fn numerical_failures_exit_four() {
    // 4x frequency ratio at 20° pushes the beam out of the visible region.
    let output = run(&[
        "squint",
        "--set",
        "squint.pointing_angle_deg=20.0",
        "--out",
        scratch("num").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("invisible"), "stderr: {stderr}");
}

#[test]
fn io_failures_exit_five() {
    let output = run(&[
        "crb",
        "--out",
        "/dev/null/nope",
        "--set",
        "crb.frequency_count=2",
    ]);
    assert_eq!(output.status.code(), Some(5));
}

#[test]
fn set_overrides_win_over_config_file() {
    let out = scratch("precedence");
    std::fs::create_dir_all(&out).unwrap();
    let cfg = out.join("scenario.toml");
    std::fs::write(
        &cfg,
        "[squint]\ncases = [{carrier_center_hz = 2.4e10, bandwidth_hz = 4e8}]\n",
    )
    .unwrap();
    let out_str = out.to_str().unwrap();
    let status = run(&[
        "squint",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_str,
        "--set",
        "squint.cases=[{carrier_center_hz = 2.4e10, bandwidth_hz = 4e8}, {carrier_center_hz = 1.8e10, bandwidth_hz = 3e8}]",
    ]);
    assert!(status.status.success());
    let rows = std::fs::read_to_string(out.join("squint.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(rows, 3, "header plus the two overridden cases");
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn seed_flag_changes_seeded_outputs() {
    let out_a = scratch("seed-a");
    let out_b = scratch("seed-b");
    let out_c = scratch("seed-c");
    for (dir, seed) in [(&out_a, "1"), (&out_b, "1"), (&out_c, "2")] {
        let status = run(&[
            "drt",
            "--seed",
            seed,
            "--set",
            "drt.n_trials=8",
            "--set",
            "drt.n_subcarriers=16",
            "--set",
            "drt.n_symbols=2",
            "--set",
            "drt.max_delay_bins=3",
            "--set",
            "drt.max_doppler_bins=3",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(status.status.success());
    }
    let read = |d: &Path| std::fs::read(d.join("af_stats.json")).unwrap();
    assert_eq!(read(&out_a), read(&out_b));
    assert_ne!(read(&out_a), read(&out_c));
    for d in [out_a, out_b, out_c] {
        let _ = std::fs::remove_dir_all(&d);
    }
}

#[test]
fn manifest_lists_every_artifact_with_digests() {
    let out = scratch("manifest");
    let out_str = out.to_str().unwrap();
    let status = run(&[
        "beampattern",
        "--out",
        out_str,
        "--set",
        "beampattern.grid_step_deg=0.5",
    ]);
    assert!(status.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("run_manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "beampattern");
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    assert_eq!(outputs[0]["file"], "beampattern.csv");
    let digest = outputs[0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    // Digest must actually match the bytes on disk.
    let bytes = std::fs::read(out.join("beampattern.csv")).unwrap();
    let recomputed = fr3lab_cli::output::hex_digest(&bytes);
    assert_eq!(digest, recomputed);
    let _ = std::fs::remove_dir_all(&out);
}
