//! `hubent`: local entanglement of the extended Hubbard chain from the command line.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use hubent_core::fock_basis::Boundary;

use crate::commands::Failure;
use crate::config::{default_format, resolve_seed, Command, Format, Range, RunConfig, SeriesKind, Sweep};

#[derive(Parser)]
#[command(
    name = "hubent",
    version,
    about = "Local entanglement of the 1D extended Hubbard model"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format; scans default to csv, everything else to json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<String>,
    /// Solver seed; overrides HUBENT_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Residual tolerance relative to the operator scale.
    #[arg(long)]
    tol: Option<f64>,
    /// Matrix-vector product budget per eigenpair.
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// Worker threads for scans.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long = "U", allow_negative_numbers = true, default_value_t = 0.0)]
    u: f64,
    #[arg(long = "V", allow_negative_numbers = true, default_value_t = 0.0)]
    v: f64,
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    match s {
        "periodic" => Ok(Boundary::Periodic),
        "open" => Ok(Boundary::Open),
        _ => Err(format!("expected 'periodic' or 'open', got '{s}'")),
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Entanglement of one ground state.
    Point {
        #[arg(long = "L")]
        sites: usize,
        #[arg(long)]
        nup: Option<usize>,
        #[arg(long)]
        ndown: Option<usize>,
        /// Total particle number; spins split as evenly as parity allows.
        #[arg(long = "N", conflicts_with_all = ["nup", "ndown"])]
        particles: Option<usize>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        mu: f64,
        /// Pick the particle number minimizing E0(N) - mu N.
        #[arg(long = "select-by-mu", conflicts_with_all = ["nup", "ndown", "particles"])]
        select_by_mu: bool,
        #[arg(long, value_parser = parse_boundary, default_value = "periodic")]
        boundary: Boundary,
        #[command(flatten)]
        common: Common,
    },
    /// Half-filling entanglement over a U x V grid.
    ScanUv {
        #[arg(long = "L", default_value_t = 8)]
        sites: usize,
        #[arg(long = "u-range", allow_hyphen_values = true)]
        u_range: Range,
        #[arg(long = "u-steps")]
        u_steps: usize,
        #[arg(long = "v-range", allow_hyphen_values = true)]
        v_range: Range,
        #[arg(long = "v-steps")]
        v_steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Half-filling entanglement versus V at fixed U, with feature detection.
    ScanV {
        #[arg(long = "L", default_value_t = 8)]
        sites: usize,
        #[arg(long = "U", allow_negative_numbers = true)]
        u: f64,
        #[arg(long = "v-range", allow_hyphen_values = true)]
        v_range: Range,
        #[arg(long = "v-steps")]
        v_steps: usize,
        #[arg(long = "cusp-threshold")]
        cusp_threshold: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Entanglement versus filling N/L for N = 1 .. 2L-1.
    ScanN {
        #[arg(long = "L")]
        sites: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "cusp-threshold")]
        cusp_threshold: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// One-sided slopes of E_v(n) at half filling and the charge-gap form.
    Slope {
        #[arg(long = "L")]
        sites: usize,
        #[arg(long = "U", allow_negative_numbers = true)]
        u: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Charge gap E0(N+1) + E0(N-1) - 2 E0(N).
    Gap {
        #[arg(long = "L")]
        sites: usize,
        #[arg(long = "N")]
        particles: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_boundary, default_value = "periodic")]
        boundary: Boundary,
        #[command(flatten)]
        common: Common,
    },
    /// Infinite-chain half-filling values from the exact solution.
    Bethe {
        #[arg(long = "U", allow_negative_numbers = true)]
        u: f64,
        /// Also evaluate a truncated series and its difference from the integral.
        #[arg(long, value_enum)]
        series: Option<SeriesKind>,
        #[command(flatten)]
        common: Common,
    },
    /// Rerun the configuration embedded in a JSON output file.
    Replay {
        /// JSON written by a previous run, or a bare configuration object.
        file: String,
        /// Override the output path stored in the configuration.
        #[arg(long)]
        output: Option<String>,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Point { .. } => "point",
            Cmd::ScanUv { .. } => "scan-uv",
            Cmd::ScanV { .. } => "scan-v",
            Cmd::ScanN { .. } => "scan-n",
            Cmd::Slope { .. } => "slope",
            Cmd::Gap { .. } => "gap",
            Cmd::Bethe { .. } => "bethe",
            Cmd::Replay { .. } => "replay",
        }
    }
}

fn apply_common(c: &mut RunConfig, common: &Common) -> Result<(), String> {
    c.format = common.format.unwrap_or(default_format(c.command));
    c.output = common.output.clone();
    c.seed = resolve_seed(common.seed)?;
    if let Some(t) = common.tol {
        c.tol = t;
    }
    if let Some(m) = common.max_iter {
        c.max_iter = m;
    }
    c.jobs = common.jobs;
    Ok(())
}

fn to_config(cmd: Cmd) -> Result<RunConfig, String> {
    let sweep = |range, steps| Some(Sweep { range, steps });
    let (mut c, common) = match cmd {
        Cmd::Point {
            sites,
            nup,
            ndown,
            particles,
            model,
            mu,
            select_by_mu,
            boundary,
            common,
        } => {
            let mut c = RunConfig::new(Command::Point);
            c.sites = sites;
            c.n_up = nup;
            c.n_down = ndown;
            c.particles = particles;
            c.u = model.u;
            c.v = model.v;
            c.mu = mu;
            c.select_by_mu = select_by_mu;
            c.boundary = boundary;
            (c, common)
        }
        Cmd::ScanUv {
            sites,
            u_range,
            u_steps,
            v_range,
            v_steps,
            common,
        } => {
            let mut c = RunConfig::new(Command::ScanUv);
            c.sites = sites;
            c.u_sweep = sweep(u_range, u_steps);
            c.v_sweep = sweep(v_range, v_steps);
            (c, common)
        }
        Cmd::ScanV {
            sites,
            u,
            v_range,
            v_steps,
            cusp_threshold,
            common,
        } => {
            let mut c = RunConfig::new(Command::ScanV);
            c.sites = sites;
            c.u = u;
            c.v_sweep = sweep(v_range, v_steps);
            if let Some(t) = cusp_threshold {
                c.cusp_threshold = t;
            }
            (c, common)
        }
        Cmd::ScanN {
            sites,
            model,
            cusp_threshold,
            common,
        } => {
            let mut c = RunConfig::new(Command::ScanN);
            c.sites = sites;
            c.u = model.u;
            c.v = model.v;
            if let Some(t) = cusp_threshold {
                c.cusp_threshold = t;
            }
            (c, common)
        }
        Cmd::Slope { sites, u, common } => {
            let mut c = RunConfig::new(Command::Slope);
            c.sites = sites;
            c.u = u;
            (c, common)
        }
        Cmd::Gap {
            sites,
            particles,
            model,
            boundary,
            common,
        } => {
            let mut c = RunConfig::new(Command::Gap);
            c.sites = sites;
            c.particles = Some(particles);
            c.u = model.u;
            c.v = model.v;
            c.boundary = boundary;
            (c, common)
        }
        Cmd::Bethe { u, series, common } => {
            let mut c = RunConfig::new(Command::Bethe);
            c.u = u;
            c.series = series;
            (c, common)
        }
        Cmd::Replay { file, output } => {
            let text = std::fs::read_to_string(&file).map_err(|e| format!("reading {file}: {e}"))?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("parsing {file}: {e}"))?;
            let config = value.get("config").cloned().unwrap_or(value);
            let mut c: RunConfig =
                serde_json::from_value(config).map_err(|e| format!("{file} holds no valid configuration: {e}"))?;
            if output.is_some() {
                c.output = output;
            }
            return Ok(c);
        }
    };
    apply_common(&mut c, &common)?;
    Ok(c)
}

fn usage_error(subcommand: &str, message: &str) -> ExitCode {
    let mut cmd = Cli::command();
    cmd.build();
    let usage = cmd
        .find_subcommand_mut(subcommand)
        .map(|s| s.render_usage().to_string())
        .unwrap_or_else(|| cmd.render_usage().to_string());
    eprintln!("error: {message}\n\n{usage}\n\nFor more information, try '--help'.");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                let sub = std::env::args().nth(1).unwrap_or_default();
                let mut cmd = Cli::command();
                cmd.build();
                let usage = match cmd.find_subcommand_mut(&sub) {
                    Some(s) => s.render_usage().to_string(),
                    None => cmd.render_usage().to_string(),
                };
                eprintln!("\n{usage}");
            }
            return ExitCode::from(2);
        }
    };
    let name = cli.command.name();
    let config = match to_config(cli.command) {
        Ok(c) => c,
        Err(msg) => return usage_error(name, &msg),
    };
    let name = match config.command {
        Command::Point => "point",
        Command::ScanUv => "scan-uv",
        Command::ScanV => "scan-v",
        Command::ScanN => "scan-n",
        Command::Slope => "slope",
        Command::Gap => "gap",
        Command::Bethe => "bethe",
    };
    if let Some(jobs) = config.jobs {
        if jobs > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
        }
    }
    let report = match commands::run(&config) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => return usage_error(name, &msg),
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {name} failed: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = output::emit(&config, &report) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if !report.failures.is_empty() {
        for f in &report.failures {
            eprintln!("error: point failed at {f}");
        }
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
