//! Resolved run configuration. Every subcommand is converted into a
//! [`RunConfig`] before it runs, and the same struct is embedded in JSON
//! output so a run can be replayed from its own output.

use std::fmt;
use std::str::FromStr;

use hubent_core::eigensolver::DEFAULT_SEED;
use hubent_core::fock_basis::Boundary;
use hubent_core::scan::DEFAULT_CUSP_THRESHOLD;
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "HUBENT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Point,
    ScanUv,
    ScanV,
    ScanN,
    Slope,
    Gap,
    Bethe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    /// Whitespace-delimited matrix block for contour plotters (scan-uv only).
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Strong,
    Weak,
}

/// Closed interval written `lo:hi` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad bound '{t}': {e}"));
        let r = Range {
            lo: parse(lo)?,
            hi: parse(hi)?,
        };
        if !(r.lo.is_finite() && r.hi.is_finite()) || r.lo > r.hi {
            return Err(format!("range '{s}' must be finite with lo <= hi"));
        }
        Ok(r)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// A sweep axis: range plus number of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub range: Range,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        hubent_core::scan::linspace(self.range.lo, self.range.hi, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub sites: usize,
    pub u: f64,
    pub v: f64,
    pub mu: f64,
    pub boundary: Boundary,
    pub n_up: Option<usize>,
    pub n_down: Option<usize>,
    pub particles: Option<usize>,
    pub select_by_mu: bool,
    pub u_sweep: Option<Sweep>,
    pub v_sweep: Option<Sweep>,
    pub series: Option<SeriesKind>,
    pub format: Format,
    pub output: Option<String>,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub jobs: Option<usize>,
    pub cusp_threshold: f64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            sites: 0,
            u: 0.0,
            v: 0.0,
            mu: 0.0,
            boundary: Boundary::Periodic,
            n_up: None,
            n_down: None,
            particles: None,
            select_by_mu: false,
            u_sweep: None,
            v_sweep: None,
            series: None,
            format: default_format(command),
            output: None,
            seed: DEFAULT_SEED,
            tol: hubent_core::SolverConfig::default().tol,
            max_iter: hubent_core::SolverConfig::default().max_iter,
            jobs: None,
            cusp_threshold: DEFAULT_CUSP_THRESHOLD,
        }
    }

    pub fn solver(&self) -> hubent_core::SolverConfig {
        hubent_core::SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
            ..hubent_core::SolverConfig::default()
        }
    }

    pub fn model(&self) -> hubent_core::ModelParams {
        hubent_core::ModelParams::new(self.sites, self.u, self.v)
            .with_mu(self.mu)
            .with_boundary(self.boundary)
    }

    /// Checks that do not need any numerics.
    pub fn validate(&self) -> Result<(), String> {
        for (name, sweep) in [("u", self.u_sweep), ("v", self.v_sweep)] {
            if let Some(s) = sweep {
                if s.steps < 2 {
                    return Err(format!("--{name}-steps must be at least 2, got {}", s.steps));
                }
            }
        }
        if self.format == Format::Matrix && self.command != Command::ScanUv {
            return Err("--format matrix is only available for scan-uv".into());
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(format!("--tol must be positive, got {}", self.tol));
        }
        if self.jobs == Some(0) {
            return Err("--jobs must be at least 1".into());
        }
        if let Some(path) = &self.output {
            if path.is_empty() {
                return Err("--output must not be empty".into());
            }
        }
        Ok(())
    }
}

pub fn default_format(command: Command) -> Format {
    match command {
        Command::ScanUv | Command::ScanV | Command::ScanN => Format::Csv,
        _ => Format::Json,
    }
}

/// Seed precedence: explicit flag, then the environment, then the built-in default.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| format!("{SEED_ENV}='{v}' is not an unsigned integer: {e}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!("-4:4".parse::<Range>().unwrap(), Range { lo: -4.0, hi: 4.0 });
        assert_eq!("0.5:0.5".parse::<Range>().unwrap(), Range { lo: 0.5, hi: 0.5 });
        assert!("4:-4".parse::<Range>().is_err());
        assert!("4".parse::<Range>().is_err());
        assert!("a:1".parse::<Range>().is_err());
    }

    #[test]
    fn sweep_steps_validated() {
        let mut c = RunConfig::new(Command::ScanV);
        c.v_sweep = Some(Sweep {
            range: Range { lo: 0.0, hi: 1.0 },
            steps: 1,
        });
        assert!(c.validate().is_err());
        c.v_sweep = Some(Sweep {
            range: Range { lo: 0.0, hi: 1.0 },
            steps: 2,
        });
        assert!(c.validate().is_ok());
        c.format = Format::Matrix;
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut c = RunConfig::new(Command::ScanUv);
        c.u_sweep = Some(Sweep {
            range: Range { lo: -1.0, hi: 1.0 },
            steps: 3,
        });
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
    }
}
