mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use udsponge::scalar::parse_rational;
use udsponge::{Error, Rational};

use commands::{Config, Outcome};
use report::{Envelope, Format};

#[derive(Parser, Debug)]
#[command(name = "udsponge", version, about = "Uniform disconnectedness of Lalley-Gatzouras sponges")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Depth of cylinders, words or Cantor trees (subcommand-specific default).
    #[arg(long, global = true)]
    depth: Option<usize>,

    /// Depth of the binary Cantor tree.
    #[arg(long, global = true, default_value_t = 10)]
    binary_depth: usize,

    /// Scale `p/q`; repeat for a grid.
    #[arg(long = "delta", global = true, value_parser = positive_rational)]
    deltas: Vec<Rational>,

    /// Upper limit on enumerated objects.
    #[arg(long, global = true, default_value_t = udsponge::components::DEFAULT_CAP)]
    cap: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Fractional digits of decimal companions.
    #[arg(long, global = true, default_value_t = 12)]
    precision: u32,

    /// Comma-separated 0-based symbols, e.g. `1,0,2`.
    #[arg(long, global = true, value_parser = word)]
    word: Option<Word>,

    /// Which Cantor checks to run.
    #[arg(long, global = true, value_enum, default_value_t = Check::All)]
    check: Check,

    /// Size of the worker pool; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Check the Lalley-Gatzouras conditions.
    Validate { input: PathBuf },
    /// Decide uniform disconnectedness and the conformal dimension class.
    Classify { input: PathBuf },
    /// Print the labeled tree and its fiber IFS.
    Tree { input: PathBuf },
    /// Component diameter profile of the depth-n cylinder boxes.
    Components { input: PathBuf },
    /// Pre-Moran set of the top fiber family along a word.
    Premoran { input: PathBuf },
    /// Approximate squares along a word and the product decomposition.
    Square { input: PathBuf },
    /// Interval model of a special system and its checks.
    Cantor { input: PathBuf },
    /// Every applicable analysis; without input, every bundled fixture.
    All { input: Option<PathBuf> },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Tree,
    Lipschitz,
    Binary,
    All,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Tree => "tree",
            Check::Lipschitz => "lipschitz",
            Check::Binary => "binary",
            Check::All => "all",
        }
    }
}

fn positive_rational(text: &str) -> Result<Rational, String> {
    let q = parse_rational(text).map_err(|e| e.to_string())?;
    if q <= Rational::from_integer(0.into()) {
        return Err(format!("delta must be positive, got {q}"));
    }
    Ok(q)
}

#[derive(Debug, Clone)]
struct Word(Vec<usize>);

fn word(text: &str) -> Result<Word, String> {
    if text.trim().is_empty() {
        return Ok(Word(Vec::new()));
    }
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad symbol `{s}`")))
        .collect::<Result<_, _>>()
        .map(Word)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::ResourceCap { .. } => 3,
        Error::NotLalleyGatzouras(_)
        | Error::UnknownVertex(_)
        | Error::LeafVertex(..)
        | Error::Witness(_)
        | Error::NoWitness
        | Error::Cantor(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("udsponge: cannot start {n} workers: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();

    let config = Config {
        depth: cli.depth,
        binary_depth: cli.binary_depth,
        deltas: cli.deltas.clone(),
        cap: cli.cap,
        precision: cli.precision,
        word: cli.word.clone().map(|w| w.0),
        check: cli.check,
    };
    let (name, input) = match &cli.command {
        Command::Validate { input } => ("validate", Some(input)),
        Command::Classify { input } => ("classify", Some(input)),
        Command::Tree { input } => ("tree", Some(input)),
        Command::Components { input } => ("components", Some(input)),
        Command::Premoran { input } => ("premoran", Some(input)),
        Command::Square { input } => ("square", Some(input)),
        Command::Cantor { input } => ("cantor", Some(input)),
        Command::All { input } => ("all", input.as_ref()),
    };
    let text = match input {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("udsponge: cannot read {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => None,
    };

    let result = match &text {
        Some(t) => commands::run(name, t, &config),
        None => commands::run_fixtures(&config),
    };
    let Outcome { output, rejected } = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("udsponge: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let digest_source = text.unwrap_or_else(|| {
        udsponge::fixtures::all()
            .iter()
            .map(|(_, t)| *t)
            .collect::<String>()
    });
    let envelope = Envelope {
        subcommand: name,
        input: &digest_source,
        config: config.to_json(),
        output,
        elapsed: cli.timing.then(|| start.elapsed()),
    };
    match envelope.emit(cli.format) {
        Ok(bytes) => print!("{bytes}"),
        Err(msg) => {
            eprintln!("udsponge: {msg}");
            return ExitCode::from(1);
        }
    }
    if rejected {
        eprintln!("udsponge: input is not of Lalley-Gatzouras type");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
