//! Scenario runner binding every analysis behind one command-line tool.
//!
//! Run `fr3lab <subcommand> --config scenario.toml`; each subcommand reads
//! its own config section, writes CSV/JSON artifacts plus a digest manifest
//! into the output directory, and exits 0 on success. Exit codes: 2 config
//! parse, 3 validation, 4 numerical failure, 5 I/O.

use clap::{Parser, Subcommand};

use fr3lab_cli::commands::{self, FigureTarget};
use fr3lab_cli::config::{self, ScenarioConfig};
use fr3lab_cli::error::CliError;
use fr3lab_cli::output::OutputSink;

#[derive(Parser)]
#[command(name = "fr3lab", version, about = "FR3 ISAC numerical laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario config (TOML); built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<String>,

    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<String>,

    /// Dotted-path config overrides, e.g. --set crb.array_snr_db=23.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,

    /// Angle-grid resolution override for pattern scans, degrees.
    #[arg(long, global = true)]
    grid_step: Option<f64>,

    /// Worker threads for internal sweeps (outputs do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Array pattern of a fixed phase profile at one frequency.
    Beampattern,
    /// Intra-band squint reports for the configured carrier/bandwidth cases.
    Squint,
    /// Range/angle estimation bounds over a carrier × range table.
    Crb,
    /// Two-tier hierarchical beam alignment.
    Align,
    /// Sensing-slot scheduling with the independent verifier.
    Schedule,
    /// Payload ambiguity statistics.
    Drt,
    /// Drone-tracking RMSE curves and coverage radii.
    Track,
    /// Emit the named figure-data bundles.
    ReproduceFigures {
        #[arg(value_enum, default_value = "all")]
        target: FigureTarget,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Beampattern => "beampattern",
            Command::Squint => "squint",
            Command::Crb => "crb",
            Command::Align => "align",
            Command::Schedule => "schedule",
            Command::Drt => "drt",
            Command::Track => "track",
            Command::ReproduceFigures { .. } => "reproduce-figures",
        }
    }
}

fn apply_flag_overrides(cli: &Cli, config: &mut ScenarioConfig) {
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    if let Some(step) = cli.grid_step {
        config.beampattern.grid_step_deg = step;
        config.squint.grid_step_deg = step;
        config.align.figure_grid_step_deg = step;
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        // Ignore the error if a pool already exists (tests share a process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let mut config = config::load_config(cli.config.as_deref(), &cli.sets)?;
    apply_flag_overrides(cli, &mut config);
    let config_text = toml::to_string_pretty(&config).unwrap_or_default();
    let mut sink = OutputSink::new(
        &config.output_dir,
        cli.command.name(),
        config.master_seed,
        &config_text,
    )?;
    match &cli.command {
        Command::Beampattern => commands::run_beampattern(&config, &mut sink)?,
        Command::Squint => commands::run_squint(&config, &mut sink, "squint.csv")?,
        Command::Crb => commands::run_crb(&config, &mut sink, "crb.csv")?,
        Command::Align => commands::run_align(&config, &mut sink, "align_")?,
        Command::Schedule => commands::run_schedule(&config, &mut sink)?,
        Command::Drt => commands::run_drt(&config, &mut sink)?,
        Command::Track => commands::run_track(&config, &mut sink, "track_")?,
        Command::ReproduceFigures { target } => commands::run_figures(&config, &mut sink, *target)?,
    }
    let manifest = sink.finish()?;
    for entry in &manifest.outputs {
        println!("{}  {}", entry.sha256, entry.file);
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(err) => {
            // Machine-readable report on stderr, then the matching exit code.
            let report = serde_json::to_string(&err)
                .unwrap_or_else(|_| format!("{{\"message\":\"{err}\"}}"));
            eprintln!("{report}");
            eprintln!("error: {err}");
            std::process::exit(err.kind.code());
        }
    }
}
