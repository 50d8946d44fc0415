//! Run configuration: a partial JSON file merged under command-line flags, then
//! resolved against per-command defaults and validated before anything runs.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use starbody::bodies::BodySpec;
use starbody::experiments::{Renormalize, ResponseOperator, MAX_STEPS};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eigvals,
    Verify,
    Iterate,
    CompareIstar,
    Perturb,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eigvals => "eigvals",
            Command::Verify => "verify",
            Command::Iterate => "iterate",
            Command::CompareIstar => "compare-istar",
            Command::Perturb => "perturb",
            Command::Sweep => "sweep",
        }
    }

    fn needs_body(self) -> bool {
        matches!(self, Command::Iterate | Command::CompareIstar)
    }

    fn uses_grid(self) -> bool {
        !matches!(self, Command::Eigvals)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenormalizeArg {
    MeanRadius,
    Volume,
}

impl From<RenormalizeArg> for Renormalize {
    fn from(r: RenormalizeArg) -> Self {
        match r {
            RenormalizeArg::MeanRadius => Renormalize::MeanRadius,
            RenormalizeArg::Volume => Renormalize::Volume,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResponseArg {
    Centroid,
    Ratio,
}

impl From<ResponseArg> for ResponseOperator {
    fn from(r: ResponseArg) -> Self {
        match r {
            ResponseArg::Centroid => ResponseOperator::Centroid,
            ResponseArg::Ratio => ResponseOperator::PolarIntersectionVsCentroid,
        }
    }
}

/// Flags shared by every subcommand. Each one overrides the matching field of `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON config file; either a bare config or a report with an embedded `config`.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Ambient dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Exponent of the p-cosine transform.
    #[arg(long)]
    pub p: Option<f64>,
    /// Grid resolution; the grid integrates exactly up to degree 2m−1.
    #[arg(long)]
    pub m: Option<usize>,
    /// Band limit.
    #[arg(long = "L", value_name = "L")]
    pub l: Option<usize>,
    /// Body as inline JSON or a path to a JSON file.
    #[arg(long, value_name = "JSON|PATH")]
    pub body: Option<String>,
    /// Single perturbation size.
    #[arg(long, conflicts_with = "eps_list")]
    pub eps: Option<f64>,
    /// Comma-separated perturbation sizes.
    #[arg(long, value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output directory; without it the main table goes to stdout.
    #[arg(long, value_name = "DIR")]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub renormalize: Option<RenormalizeArg>,
    #[arg(long)]
    pub isotropic_each_step: bool,
    /// Harmonic degree of the perturbation (perturb, sweep).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Inner exponent α of (C^p ρ^α)^β (sweep).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Outer exponent β of (C^p ρ^α)^β (sweep).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Which linear response to measure (perturb).
    #[arg(long, value_enum)]
    pub response: Option<ResponseArg>,
}

/// Every field optional; the shape of config files.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PartialConfig {
    command: Option<Command>,
    n: Option<usize>,
    p: Option<f64>,
    m: Option<usize>,
    #[serde(rename = "L")]
    l: Option<usize>,
    body: Option<BodySpec>,
    eps: Option<Vec<f64>>,
    steps: Option<usize>,
    output: Option<PathBuf>,
    seed: Option<u64>,
    renormalize: Option<Renormalize>,
    isotropic_each_step: Option<bool>,
    degree: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    response: Option<ResponseOperator>,
}

/// Fully resolved configuration, embedded verbatim in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub p: f64,
    pub m: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub body: Option<BodySpec>,
    pub eps: Vec<f64>,
    pub steps: usize,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub renormalize: Renormalize,
    pub isotropic_each_step: bool,
    pub degree: usize,
    pub alpha: f64,
    pub beta: f64,
    pub response: ResponseOperator,
}

const DEFAULT_EPS: [f64; 3] = [0.01, 0.02, 0.04];

/// Largest default grid that keeps a kernel application at desk scale; N = 2·m^{n−1}.
fn default_resolution(n: usize) -> usize {
    match n {
        3 => 32,
        4 => 12,
        5 => 10,
        _ => 6,
    }
}

impl RunConfig {
    pub fn resolve(command: Command, args: &RunArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => load_partial(path)?,
            None => PartialConfig::default(),
        };
        if let Some(c) = file.command {
            if c != command {
                log::warn!(
                    "config was written by `{}`; running `{}`",
                    c.name(),
                    command.name()
                );
            }
        }
        let body = match &args.body {
            Some(s) => Some(parse_body(s)?),
            None => file.body,
        };
        let eps = args
            .eps
            .map(|e| vec![e])
            .or_else(|| args.eps_list.clone())
            .or(file.eps)
            .unwrap_or_else(|| DEFAULT_EPS.to_vec());

        let n = args.n.or(file.n).unwrap_or(3);
        let p = args.p.or(file.p).unwrap_or(1.0);
        let m = args.m.or(file.m).unwrap_or(default_resolution(n));
        let config = RunConfig {
            command,
            n,
            p,
            m,
            l: args.l.or(file.l).unwrap_or(16.min(m.saturating_sub(1))),
            body,
            eps,
            steps: args.steps.or(file.steps).unwrap_or(12),
            output: args.output.clone().or(file.output),
            seed: args.seed.or(file.seed).unwrap_or(1),
            renormalize: args
                .renormalize
                .map(Into::into)
                .or(file.renormalize)
                .unwrap_or_default(),
            isotropic_each_step: args.isotropic_each_step
                || file.isotropic_each_step.unwrap_or(false),
            degree: args.degree.or(file.degree).unwrap_or(4),
            // (n+p, 1/p) is the Γ_p linearization; it is (n+1, 1) at p = 1
            alpha: args.alpha.or(file.alpha).unwrap_or(n as f64 + p),
            beta: args.beta.or(file.beta).unwrap_or(1.0 / p),
            response: args
                .response
                .map(Into::into)
                .or(file.response)
                .unwrap_or(ResponseOperator::Centroid),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n < 3 {
            return bad(format!("n must be at least 3, got {}", self.n));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return bad(format!("p must be a finite value >= 1, got {}", self.p));
        }
        if self.command.uses_grid() && self.m < 4 {
            return bad(format!(
                "grid resolution m must be at least 4, got {}",
                self.m
            ));
        }
        if self.steps == 0 || self.steps > MAX_STEPS {
            return bad(format!(
                "steps must lie in 1..={MAX_STEPS}, got {}",
                self.steps
            ));
        }
        if self.eps.is_empty() || self.eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return bad(format!("eps values must be positive, got {:?}", self.eps));
        }
        if !(self.alpha.is_finite() && self.beta.is_finite() && self.beta != 0.0) {
            return bad(format!(
                "alpha and beta must be finite with beta != 0, got {} and {}",
                self.alpha, self.beta
            ));
        }
        match &self.body {
            Some(b) => b
                .validate(self.n)
                .map_err(|e| CliError::Config(e.to_string()))?,
            None if self.command.needs_body() => {
                return bad(format!("`{}` needs --body", self.command.name()));
            }
            None => {}
        }
        Ok(())
    }

    /// Tag for output file names, e.g. `n3-m16-p1`.
    pub fn tag(&self) -> String {
        if self.command.uses_grid() {
            format!("n{}-m{}-p{}", self.n, self.m, self.p)
        } else {
            format!("n{}-p{}-L{}", self.n, self.p, self.l)
        }
    }
}

fn load_partial(path: &Path) -> Result<PartialConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    // reports carry the config that produced them
    let value = match value {
        serde_json::Value::Object(mut map) if map.contains_key("config") => {
            map.remove("config").unwrap_or_default()
        }
        v => v,
    };
    serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Inline JSON if it starts with `{`, otherwise a path to a JSON file.
pub fn parse_body(s: &str) -> Result<BodySpec, CliError> {
    let text = if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        fs::read_to_string(s)
            .map_err(|e| CliError::Config(format!("cannot read body file {s}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid body spec: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> RunArgs {
        RunArgs::default()
    }

    #[test]
    fn defaults_resolve() {
        let c = RunConfig::resolve(Command::Sweep, &args()).unwrap();
        assert_eq!((c.n, c.m, c.l, c.degree), (3, 32, 16, 4));
        assert_eq!(c.alpha, 4.0);
        assert_eq!(c.beta, 1.0);
        assert_eq!(c.eps, DEFAULT_EPS.to_vec());
    }

    #[test]
    fn body_is_required_where_used() {
        assert!(matches!(
            RunConfig::resolve(Command::Iterate, &args()),
            Err(CliError::Config(_))
        ));
        let a = RunArgs {
            body: Some(r#"{"type":"ball","radius":1.0}"#.into()),
            ..args()
        };
        assert!(RunConfig::resolve(Command::Iterate, &a).is_ok());
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for a in [
            RunArgs {
                n: Some(2),
                ..args()
            },
            RunArgs {
                p: Some(0.5),
                ..args()
            },
            RunArgs {
                m: Some(3),
                ..args()
            },
            RunArgs {
                steps: Some(0),
                ..args()
            },
            RunArgs {
                eps_list: Some(vec![0.01, -1.0]),
                ..args()
            },
            RunArgs {
                body: Some("{not json".into()),
                ..args()
            },
        ] {
            assert!(
                matches!(
                    RunConfig::resolve(Command::Verify, &a),
                    Err(CliError::Config(_))
                ),
                "{a:?}"
            );
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let a = RunArgs {
            body: Some(r#"{"type":"ellipsoid","axes":[1.0,1.05,0.95]}"#.into()),
            p: Some(1.5),
            ..args()
        };
        let c = RunConfig::resolve(Command::CompareIstar, &a).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let partial: PartialConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(partial.l, Some(16));
    }
}
