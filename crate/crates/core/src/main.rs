use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bifsphere::error::{Error, Result};
use bifsphere::report::{self, Command, Parameters};
use bifsphere::selftest::Grid;
use bifsphere::spectrum::Level;
use bifsphere::system::{parse_spec, SystemSpec};

/// Bifurcation indices and continuum verdicts for gradient elliptic systems
/// on spheres.
#[derive(Debug, Parser)]
#[command(name = "bifsphere", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// System file: {"N": int, "a": [±1, ...], "b": [0|1, ...], "orbits": 1|2}
    #[arg(long, global = true, value_name = "PATH")]
    spec: Option<PathBuf>,

    /// A level written +m, -m or 0
    #[arg(long, global = true, allow_hyphen_values = true)]
    level: Option<String>,

    /// Evaluation point p/q for `spectrum`
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,

    /// Largest harmonic index of the levels considered
    #[arg(long, global = true, default_value_t = 6)]
    m_max: u32,

    /// Largest harmonic index searched for bounded continua
    #[arg(long, global = true, default_value_t = 6)]
    mu_max: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Grid for `selftest`
    #[arg(long, global = true, value_enum, default_value_t = Grid::Small)]
    grid: Grid,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Cmd {
    /// Multiplicity tables of the harmonic spaces
    Decompose,
    /// Spectrum of the linearisation at a level or point
    Spectrum,
    /// Levels where the spectrum degenerates
    Levels,
    /// Bifurcation indices by every route
    Bif,
    /// Verdicts for every level, with indices and the bounded-pattern search
    Classify,
    /// Bounded-pattern search and theorem checks
    Search,
    /// Grid-wide invariant and oracle checks
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Decompose => Command::Decompose,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Levels => Command::Levels,
            Cmd::Bif => Command::Bif,
            Cmd::Classify => Command::Classify,
            Cmd::Search => Command::Search,
            Cmd::Selftest => Command::Selftest,
        }
    }
}

fn load_spec(path: &PathBuf) -> Result<SystemSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

fn run(cli: &Cli) -> Result<(String, bool)> {
    let command = Command::from(cli.command);
    let spec = match (&cli.spec, command.needs_spec()) {
        (Some(path), true) => Some(load_spec(path)?),
        (None, true) => {
            return Err(Error::MalformedInput(format!(
                "{} needs --spec PATH",
                command.name()
            )))
        }
        _ => None,
    };
    let level = cli.level.as_deref().map(str::parse::<Level>).transpose()?;
    if let Some(text) = &cli.lambda {
        report::parse_lambda(text)?;
    }
    let params = Parameters {
        m_max: cli.m_max,
        mu_max: cli.mu_max,
        level,
        lambda: cli.lambda.clone(),
        grid: (command == Command::Selftest).then_some(cli.grid),
    };
    let report = report::build(command, spec.as_ref(), &params)?;
    let out = match cli.format {
        Format::Text => report::render_text(&report),
        Format::Json => report::render_json(&report),
    };
    Ok((out, report.passed()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("bifsphere {}: {e}", Command::from(cli.command).name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
