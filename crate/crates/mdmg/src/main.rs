use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mdmg::config::{Cycle, ExperimentConfig};
use mdmg::preset::{self, Mode, PRESETS};
use mdmg::{experiment, output, ConfigError};

#[derive(Parser)]
#[command(name = "mdmg", version, about = "Mixed-dimensional multigrid for fractured porous media")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a preset or a configuration file.
    Run(RunArgs),
    /// Print a preset as a configuration file.
    Show { preset: String },
    /// List the presets.
    Presets,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Preset name or path to a TOML configuration.
    target: String,
    /// Finest grid, e.g. `64x32`.
    #[arg(long, value_parser = parse_grid, conflicts_with = "levels")]
    grid: Option<[usize; 2]>,
    /// Number of refinements of the coarsest grid.
    #[arg(long)]
    levels: Option<usize>,
    /// Fracture permeability applied to every fracture.
    #[arg(long, conflicts_with = "mode")]
    kf: Option<f64>,
    /// `conducting` (K_f = 1e4) or `blocking` (K_f = 1e-4).
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_parser = parse_cycle)]
    cycle: Option<Cycle>,
    #[arg(long)]
    nu1: Option<usize>,
    #[arg(long)]
    nu2: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected WxH")?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok([parse(a)?, parse(b)?])
}

fn parse_cycle(s: &str) -> Result<Cycle, String> {
    match s {
        "W" | "w" => Ok(Cycle::W),
        "V" | "v" => Ok(Cycle::V),
        _ => Err(format!("unknown cycle `{s}`")),
    }
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = if PRESETS.contains(&args.target.as_str()) {
        match (args.target.as_str(), args.mode) {
            ("benchmark", Some(mode)) => preset::benchmark(mode),
            (name, _) => preset::preset(name)?,
        }
    } else if Path::new(&args.target).exists() {
        ExperimentConfig::load(Path::new(&args.target))?
    } else {
        return Err(ConfigError::UnknownPreset(args.target.clone()));
    };
    if let Some(mode) = args.mode {
        cfg.set_fracture_permeability(mode.permeability());
    }
    if let Some(kf) = args.kf {
        cfg.set_fracture_permeability(kf);
    }
    if let Some(g) = args.grid {
        cfg.grid.cells = Some(g);
        cfg.grid.levels = None;
    }
    if let Some(m) = args.levels {
        cfg.grid.levels = Some(m);
        cfg.grid.cells = None;
    }
    let s = &mut cfg.solver;
    s.tolerance = args.tol.unwrap_or(s.tolerance);
    s.cycle = args.cycle.unwrap_or(s.cycle);
    s.pre_smoothing = args.nu1.unwrap_or(s.pre_smoothing);
    s.post_smoothing = args.nu2.unwrap_or(s.post_smoothing);
    s.max_iterations = args.max_iterations.unwrap_or(s.max_iterations);
    if let Some(dir) = &args.out {
        cfg.output.dir = Some(dir.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &RunArgs) -> ExitCode {
    let cfg = match load(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match experiment::run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let summary = output::summary(&cfg.name, &outcome);
    print!("{summary}");
    let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    if let Err(e) = output::write_all(&dir, &cfg.name, &outcome, &cfg.output.formats) {
        eprintln!("error: cannot write results to {}: {e}", dir.display());
        return ExitCode::from(1);
    }
    match &outcome.failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Run(args) => run(&args),
        Command::Show { preset } => match preset::preset(&preset) {
            Ok(cfg) => {
                print!("{}", cfg.to_toml());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Presets => {
            for p in PRESETS {
                println!("{p}");
            }
            ExitCode::SUCCESS
        }
    }
}
