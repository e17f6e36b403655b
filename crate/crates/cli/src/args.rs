use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptmetric::verify::Suite;
use ptmetric::Quadrature;

#[derive(Debug, Parser)]
#[command(
    name = "ptmetric",
    version,
    about = "Spectrum, metric and identity checks for the PT-symmetric Robin Laplacian"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Non-Hermitian boundary coupling.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_real)]
    pub alpha: Option<f64>,

    /// Hermitian Robin coupling of the two-parameter model.
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true, value_parser = parse_real)]
    pub beta: f64,

    /// Interval length. Accepts `pi`, `2pi`, `pi/2` and plain numbers.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_real)]
    pub d: Option<f64>,

    /// Grid subintervals.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Highest eigen-index, or the series cutoff for `metric apply`.
    #[arg(long, global = true)]
    pub jmax: Option<usize>,

    /// Largest |k| searched by the root finder.
    #[arg(long, global = true, value_parser = parse_real)]
    pub kmax: Option<f64>,

    /// Tolerance for quadrature-limited checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Quadrature rule: `cubic-panel` or `trapezoid`.
    #[arg(long, global = true, default_value = "cubic-panel", value_parser = parse_quadrature)]
    pub quadrature: Quadrature,
}

pub const DEFAULT_N: usize = 4096;

impl RunConfig {
    pub fn d_or_default(&self) -> f64 {
        self.d.unwrap_or(PI)
    }

    pub fn n_or_default(&self) -> usize {
        self.n.unwrap_or(DEFAULT_N)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues: closed form for beta = 0, root finder otherwise.
    Spectrum,
    /// Operations with the metric.
    #[command(subcommand)]
    Metric(MetricCommand),
    /// Run the verification suite.
    Verify {
        /// spectrum, metric, forms, expansions or all.
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// Eigenvalue trajectories over a range of alpha or beta.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        /// `start:stop:steps`, steps >= 2.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: SweepRange,
        /// Whitespace-delimited blocks for gnuplot instead of CSV.
        #[arg(long)]
        plot_data: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum MetricCommand {
    /// Apply the metric to a sampled function.
    Apply {
        /// GridFunction JSON file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(
                |i| {
                    if i + 1 == self.steps {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * i as f64 / last
                    }
                },
            )
            .collect()
    }
}

/// Real number with `pi` literals: `pi`, `-pi`, `2pi`, `2*pi`, `pi/3`, `-3pi/4`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(format!("`{s}` is not a finite number")) };
    }
    let bad = || format!("`{s}` is not a number or multiple of pi");
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a, Some(b.parse::<f64>().map_err(|_| bad())?)),
        None => (body, None),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(bad)?;
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
    let factor = if coeff.is_empty() { 1.0 } else { coeff.parse::<f64>().map_err(|_| bad())? };
    let value = sign * factor * PI / den.unwrap_or(1.0);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn parse_range(s: &str) -> Result<SweepRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, steps] = parts[..] else {
        return Err(format!("range `{s}` must look like start:stop:steps"));
    };
    let steps: usize = steps.trim().parse().map_err(|_| format!("steps `{steps}` is not a positive integer"))?;
    if steps < 2 {
        return Err(format!("a sweep needs at least 2 steps, got {steps}"));
    }
    Ok(SweepRange { start: parse_real(start)?, stop: parse_real(stop)?, steps })
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: ptmetric::Error| e.to_string())
}

fn parse_quadrature(s: &str) -> Result<Quadrature, String> {
    s.parse().map_err(|e: ptmetric::Error| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_literals() {
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_real("-3pi/4").unwrap(), -3.0 * PI / 4.0);
        assert_eq!(parse_real("0.5").unwrap(), 0.5);
        assert_eq!(parse_real("1e-3").unwrap(), 1e-3);
        for bad in ["", "p", "pie", "2p", "pi/x", "inf", "nan"] {
            assert!(parse_real(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ranges() {
        let r = parse_range("0:0.9:10").unwrap();
        let p = r.points();
        assert_eq!(p.len(), 10);
        assert_eq!((p[0], p[9]), (0.0, 0.9));
        assert!((p[1] - 0.1).abs() < 1e-15);
        assert_eq!(parse_range("-pi:pi:3").unwrap().points(), vec![-PI, 0.0, PI]);
        for bad in ["0:1", "0:1:1", "0:1:x", "a:1:3", "0:1:3:4"] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn command_line_shapes() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli =
            Cli::try_parse_from(["ptmetric", "verify", "--alpha", "1", "--d", "pi", "--suite", "metric"]).unwrap();
        assert_eq!(cli.run.alpha, Some(1.0));
        assert!(matches!(cli.command, Command::Verify { suite: Suite::Metric }));
        let cli = Cli::try_parse_from(["ptmetric", "--d", "-pi", "spectrum"]).unwrap();
        assert_eq!(cli.run.d, Some(-PI));
        assert!(Cli::try_parse_from(["ptmetric", "verify", "--suite", "nosuchsuite"]).is_err());
    }
}
