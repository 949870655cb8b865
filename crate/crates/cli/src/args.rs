use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qwalk_core::verify::Suite;
use qwalk_core::walk::{symmetric_c, symmetric_d};
use qwalk_core::{TracingScheme, WalkConfig};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "qwalk", version, about = "Quantum and classical random walks on the line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a walk and write its trajectory.
    Simulate(RunArgs),
    /// Derived statistics of a trajectory as CSV.
    Analyze {
        which: AnalysisKind,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Render a figure as SVG.
    Figure {
        which: FigureKind,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 12)]
        max_steps: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Prompt,
    Global,
    Kernel,
    Cp,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Prompt => "prompt",
            Scheme::Global => "global",
            Scheme::Kernel => "kernel",
            Scheme::Cp => "cp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnalysisKind {
    Entropy,
    Lorenz,
    Majorize,
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigureKind {
    MemoryDiagram,
    Lorenz,
    Entropy,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "global")]
    pub scheme: Scheme,
    /// Coin bias; a comma-separated list where several series are drawn.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Vec<f64>,
    /// Initial coin state, e.g. "c=0.7071067811865476,d=0.7071067811865476i".
    #[arg(long)]
    pub coin: Option<String>,
    /// Shorthand for p = 0.5 with the balanced coin state (1/√2, i/√2).
    #[arg(long, conflicts_with_all = ["p", "coin"])]
    pub symmetric: bool,
    /// Trace period for the cp and kernel schemes.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Either a step count N (steps 0..=N) or a comma-separated list of steps.
    #[arg(long, default_value = "10", allow_hyphen_values = true)]
    pub steps: String,
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// A validated run description.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub scheme: Scheme,
    pub ps: Vec<f64>,
    pub c: Complex64,
    pub d: Complex64,
    pub m: usize,
    pub steps: Vec<usize>,
    pub emit: Option<Emit>,
    pub out: Option<PathBuf>,
}

impl RunSpec {
    pub fn from_args(args: &RunArgs) -> Result<Self, CliError> {
        let ps = if args.p.is_empty() { vec![0.5] } else { args.p.clone() };
        let (c, d) = match &args.coin {
            Some(text) if !args.symmetric => parse_coin(text)?,
            _ => (symmetric_c(), symmetric_d()),
        };
        if args.m == 0 {
            return Err(CliError::Usage("--m must be at least 1".into()));
        }
        let spec = Self {
            scheme: args.scheme,
            ps,
            c,
            d,
            m: args.m,
            steps: parse_steps(&args.steps)?,
            emit: args.emit,
            out: args.out.clone(),
        };
        for &p in &spec.ps {
            spec.config_for(p)?;
        }
        Ok(spec)
    }

    /// The single bias of commands that draw one series.
    pub fn single_p(&self) -> Result<f64, CliError> {
        match self.ps.as_slice() {
            [p] => Ok(*p),
            _ => Err(CliError::Usage("this command takes a single --p value".into())),
        }
    }

    pub fn config_for(&self, p: f64) -> Result<WalkConfig, CliError> {
        let scheme = match self.scheme {
            Scheme::Prompt => TracingScheme::Prompt,
            Scheme::Global => TracingScheme::Global,
            Scheme::Kernel | Scheme::Cp => TracingScheme::Delayed(self.m),
        };
        Ok(WalkConfig::biased(p, self.c, self.d)?.with_scheme(scheme)?)
    }

    pub fn config(&self) -> Result<WalkConfig, CliError> {
        self.config_for(self.single_p()?)
    }

    pub fn max_step(&self) -> usize {
        self.steps.iter().copied().max().unwrap_or(0)
    }
}

pub fn parse_coin(text: &str) -> Result<(Complex64, Complex64), CliError> {
    let mut c = None;
    let mut d = None;
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value in --coin, got `{part}`")))?;
        let z = parse_complex(value)?;
        match key.trim() {
            "c" => c = Some(z),
            "d" => d = Some(z),
            other => return Err(CliError::Usage(format!("unknown coin component `{other}`"))),
        }
    }
    match (c, d) {
        (Some(c), Some(d)) => Ok((c, d)),
        _ => Err(CliError::Usage("--coin needs both c and d".into())),
    }
}

pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let cleaned: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    cleaned
        .parse::<Complex64>()
        .map_err(|_| CliError::Usage(format!("invalid complex literal `{text}`")))
}

pub fn parse_steps(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "invalid --steps `{text}`: expected N or a list of non-negative steps"
        ))
    };
    if text.contains(',') {
        let mut steps = text
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        steps.sort_unstable();
        steps.dedup();
        Ok(steps)
    } else {
        let n = text.trim().parse::<usize>().map_err(|_| bad())?;
        Ok((0..=n).collect())
    }
}
