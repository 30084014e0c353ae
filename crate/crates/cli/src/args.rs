use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tailbound::BoundKind;

pub const DEFAULT_SAMPLES: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "tailbound", version, about = "Evaluate and verify Gaussian-shift tail bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate bounds at the given points.
    Eval(EvalArgs),
    /// Solve for the crossing points z_v, z_w, z_wtilde.
    Crossings(OutputArgs),
    /// Compare exact tails of an instance against bounds.
    VerifyExact(VerifyArgs),
    /// Compare Monte Carlo tails of an instance against bounds.
    VerifyMc(McArgs),
    /// Run the built-in numerical self-check.
    Selfcheck(SelfcheckArgs),
    /// Plot-ready table of normal tails and every bound on a grid.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Comma-separated evaluation points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "grid")]
    pub x: Vec<f64>,
    /// start:stop:points:lin|log
    #[arg(long)]
    pub grid: Option<GridSpec>,
}

impl PointArgs {
    pub fn points(&self) -> Vec<f64> {
        match (&self.grid, self.x.is_empty()) {
            (Some(g), _) => g.points(),
            (None, false) => self.x.clone(),
            (None, true) => GridSpec::default().points(),
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub points: PointArgs,
    /// Comma-separated bound names.
    #[arg(long, value_delimiter = ',')]
    pub bounds: Vec<BoundKind>,
    /// Reject points that are not strictly positive.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance JSON file.
    #[arg(long, required_unless_present = "report", conflicts_with = "report")]
    pub instance: Option<PathBuf>,
    /// Re-check the violation column of an existing CSV report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[arg(long, value_delimiter = ',')]
    pub bounds: Vec<BoundKind>,
    /// Reject weights that are not already normalized.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub verify: VerifyArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    /// Points per monotonicity grid.
    #[arg(long, default_value_t = tailbound::monotonicity::DEFAULT_GRID_SIZE)]
    pub grid_size: usize,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub perturb_lambda: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { start: 0.1, stop: 6.4, points: 64, spacing: Spacing::Log }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Lin => self.start + t * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("expected start:stop:points:lin|log, got `{s}`"));
        }
        let num = |p: &str, what: &str| -> Result<f64, String> {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("grid {what} `{p}` is not a finite number"))
        };
        let start = num(parts[0], "start")?;
        let stop = num(parts[1], "stop")?;
        let points: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("grid points `{}` is not a whole number", parts[2]))?;
        let spacing = match parts[3].trim() {
            "lin" => Spacing::Lin,
            "log" => Spacing::Log,
            other => return Err(format!("grid spacing must be lin or log, got `{other}`")),
        };
        if start <= 0.0 {
            return Err(format!("grid start must be > 0, got {start}"));
        }
        if stop < start {
            return Err(format!("grid stop {stop} is below start {start}"));
        }
        if points == 0 {
            return Err("grid needs at least one point".into());
        }
        Ok(GridSpec { start, stop, points, spacing })
    }
}
