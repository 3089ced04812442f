//! Command-line front end: reads a JSON spec, runs analyses of the affine
//! system and shift-invariant spaces it describes, and writes a JSON (or
//! CSV) report.

pub mod commands;
pub mod demo;
pub mod error;
pub mod report;
pub mod spec;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use siframes_core::{format_rational, parse_rational, Rational};

pub use commands::{Block, BlockOutcome, Overrides};
pub use error::{CliError, Result};
pub use report::Report;
pub use spec::{load_spec, parse_spec, SpecFile};

#[derive(Debug, Parser)]
#[command(
    name = "siframes",
    version,
    about = "Exact analysis of shift-invariant spaces and affine systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every block listed under `analysis` in the spec.
    Analyze(SpecArgs),
    /// Dimension function of the space.
    DimensionFunction(SpecArgs),
    /// Project every probe onto the space.
    Project(SpecArgs),
    /// Calderón sum, shift orthogonality, and probe frame sums.
    ParsevalCheck(SpecArgs),
    /// Subset sweep for linear independence of the affine system.
    Independence(SpecArgs),
    /// Dimension function of the dilated space against the dilation formula.
    DilationCheck(SpecArgs),
    /// Reproduce one of the built-in examples.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// JSON spec file.
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoKind {
    BownikSpeegle,
    Heil,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub which: DemoKind,
    /// Dilation factor (single-tile demo).
    #[arg(long, default_value_t = 2)]
    pub a: i64,
    /// Translation step (single-tile demo).
    #[arg(long, default_value = "1")]
    pub b: String,
    /// Left end of the generator's frequency support (single-tile demo).
    #[arg(long, default_value = "1")]
    pub c: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative tolerance for independence verdicts (rational or decimal).
    #[arg(long)]
    pub tol: Option<String>,
    /// Sweep window `JMIN:JMAX,KMIN:KMAX`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Largest subset size in a sweep.
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Largest number of subsets a sweep may enumerate.
    #[arg(long)]
    pub max_subsets: Option<u64>,
    /// Truncation depth of the space of negative dilates.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Parameter of the two-sided demo, in (0, 1).
    #[arg(long)]
    pub epsilon: Option<String>,
    /// JSON report (default).
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// CSV output for dimension functions and per-subset sweep results.
    #[arg(long)]
    pub csv: bool,
    /// Record wall-clock time per block (makes reports non-reproducible).
    #[arg(long)]
    pub timings: bool,
}

/// Default parameter of the two-sided demo.
pub const DEFAULT_EPSILON: &str = "1/4";

/// Output format requested on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn rational_arg(name: &str, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

impl CommonArgs {
    pub fn overrides(&self) -> Result<Overrides> {
        Ok(Overrides {
            tol: self.tol.as_deref().map(commands::parse_tol).transpose()?,
            window: self.window.as_deref().map(commands::parse_window).transpose()?,
            max_size: self.max_size,
            max_subsets: self.max_subsets.map(u128::from),
            depth: self.depth,
            csv: self.csv,
            timings: self.timings,
        })
    }

    pub fn format(&self) -> Format {
        if self.csv {
            Format::Csv
        } else {
            Format::Json
        }
    }
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Analyze(a)
            | Command::DimensionFunction(a)
            | Command::Project(a)
            | Command::ParsevalCheck(a)
            | Command::Independence(a)
            | Command::DilationCheck(a) => &a.common,
            Command::Demo(d) => &d.common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::DimensionFunction(_) => "dimension-function",
            Command::Project(_) => "project",
            Command::ParsevalCheck(_) => "parseval-check",
            Command::Independence(_) => "independence",
            Command::DilationCheck(_) => "dilation-check",
            Command::Demo(_) => "demo",
        }
    }
}

fn single_block(cmd: &Command) -> Option<Block> {
    Some(match cmd {
        Command::DimensionFunction(_) => Block::DimensionFunction { depth: None },
        Command::Project(_) => Block::Project { depth: None },
        Command::ParsevalCheck(_) => Block::ParsevalCheck {},
        Command::Independence(_) => Block::Independence {
            window: None,
            max_size: None,
            tol: None,
            max_subsets: None,
        },
        Command::DilationCheck(_) => Block::DilationCheck { depth: None },
        Command::Analyze(_) | Command::Demo(_) => return None,
    })
}

/// Executes a parsed command line.
pub fn execute(cmd: &Command) -> Result<Report> {
    let o = cmd.common().overrides()?;
    if let Command::Demo(d) = cmd {
        return run_demo(d, &o);
    }
    let args = match cmd {
        Command::Analyze(a)
        | Command::DimensionFunction(a)
        | Command::Project(a)
        | Command::ParsevalCheck(a)
        | Command::Independence(a)
        | Command::DilationCheck(a) => a,
        Command::Demo(_) => unreachable!("demo handled above"),
    };
    let spec = load_spec(&args.spec)?;
    let blocks: Vec<Block> = match single_block(cmd) {
        Some(b) => vec![b],
        None if spec.analysis.is_empty() => {
            return Err(CliError::schema("analysis", "no command blocks to run"));
        }
        None => spec.analysis.clone(),
    };
    let outcomes = blocks
        .iter()
        .map(|b| commands::run_block(&spec, b, &o))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(cmd.name(), spec.digest.clone(), outcomes))
}

fn run_demo(d: &DemoArgs, o: &Overrides) -> Result<Report> {
    let start = std::time::Instant::now();
    let (name, params, mut blocks) = match d.which {
        DemoKind::BownikSpeegle => {
            let eps = rational_arg("epsilon", d.common.epsilon.as_deref().unwrap_or(DEFAULT_EPSILON))?;
            let params = format!("demo bownik-speegle epsilon={}", format_rational(&eps));
            ("demo bownik-speegle", params, demo::bownik_speegle(&eps)?)
        }
        DemoKind::Heil => {
            let b = rational_arg("b", &d.b)?;
            let c = rational_arg("c", &d.c)?;
            let params = format!(
                "demo heil a={} b={} c={}",
                d.a,
                format_rational(&b),
                format_rational(&c)
            );
            ("demo heil", params, demo::heil(d.a, &b, &c)?)
        }
    };
    if o.timings {
        let total = start.elapsed().as_millis();
        for b in &mut blocks {
            b.elapsed_ms = Some(total);
        }
    }
    Ok(Report::new(name, spec::digest(params.as_bytes()), blocks))
}

/// Parses `args`, runs the command, and writes the report. Returns the
/// process exit code: 0 if every block passed, 1 on a failed check, 2 on
/// an input error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command).and_then(|r| write_report(&r, cli.command.common()).map(|()| r)) {
        Ok(r) => r.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_report(r: &Report, common: &CommonArgs) -> Result<()> {
    let text = match common.format() {
        Format::Json => r.to_json(),
        Format::Csv => r
            .to_csv()
            .ok_or_else(|| CliError::Usage("no CSV output for this command (use --json)".into()))?,
    };
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
