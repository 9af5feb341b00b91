//! Argument parsing and dispatch for the `liesys` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::aut::{classify_presentation, TwistKind};
use crate::base::{fmt_rational, Window};
use crate::cli::format::{
    emit_finitary, emit_operator, parse_aut, parse_operator, parse_pairing, parse_vectors,
    run_scenario, Operator, Parsed, ScenarioFile,
};
use crate::cli::suite::run_suite;
use crate::dualize::gram_schmidt;
use crate::error::Error;
use crate::mackey::dense_approx;

/// Seed variable that takes precedence over `--seed`.
pub const SEED_ENV: &str = "LIESYS_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "liesys",
    version,
    about = "Exact computations with finitary and Mackey matrix Lie algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print [A, B].
    Bracket { a: PathBuf, b: PathBuf },
    /// Print A·B.
    Mul { a: PathBuf, b: PathBuf },
    /// Print the trace of A.
    Trace { a: PathBuf },
    /// Print the first K dual basis pairs as coefficient rows.
    Dualize {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long = "search-bound")]
        search_bound: usize,
    },
    /// Decide whether the twist of V by an automorphism is V or V_*.
    Classify {
        #[arg(long)]
        aut: PathBuf,
        #[arg(long = "max-window")]
        max_window: usize,
        #[arg(long = "start-window", default_value_t = 3)]
        start_window: usize,
    },
    /// Print a traceless finitary operator agreeing with OP on the vectors.
    Approx {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        vectors: PathBuf,
    },
    /// Run a property suite.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        window: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Execute a scenario file.
    Run { file: PathBuf },
}

/// Errors that stem from the input rather than from the computation.
fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::Precondition(_)
            | Error::UnknownSuite(_)
            | Error::InvalidWindow { .. }
            | Error::ZeroIndex
            | Error::NotInverse
    )
}

enum Fault {
    Usage(String),
    Failed(String),
}

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        if is_usage(&e) {
            Fault::Usage(e.to_string())
        } else {
            Fault::Failed(e.to_string())
        }
    }
}

struct Io<'a> {
    out: String,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &Path) -> Result<String, Fault> {
        std::fs::read_to_string(path).map_err(|e| Fault::Usage(format!("{}: {e}", path.display())))
    }

    fn warn<T>(&mut self, path: &Path, parsed: Parsed<T>) -> T {
        for w in &parsed.warnings {
            let _ = writeln!(self.err, "warning: {}: {w}", path.display());
        }
        parsed.value
    }

    fn operator(&mut self, path: &Path) -> Result<Operator, Fault> {
        let text = self.read(path)?;
        let parsed = parse_operator(&text).map_err(|e| located(path, e))?;
        Ok(self.warn(path, parsed))
    }
}

fn located(path: &Path, e: Error) -> Fault {
    match e {
        Error::Parse { .. } => Fault::Usage(format!("{}: {e}", path.display())),
        other => other.into(),
    }
}

/// Runs the binary on `args` (including the program name), writing results
/// to `out` and diagnostics to `err`; returns the exit code.
pub fn main_with(
    args: impl IntoIterator<Item = OsString>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut io = Io {
        out: String::new(),
        err,
    };
    let result = execute(cli.command, &mut io);
    let _ = out.write_all(io.out.as_bytes());
    match result {
        Ok(code) => code,
        Err(Fault::Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Fault::Failed(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn execute(cmd: Command, io: &mut Io) -> Result<i32, Fault> {
    match cmd {
        Command::Bracket { a, b } => {
            let (x, y) = (io.operator(&a)?, io.operator(&b)?);
            io.out = emit_operator(&x.combine(&y, |p, q| p.bracket(q), |p, q| p.bracket(q)));
        }
        Command::Mul { a, b } => {
            let (x, y) = (io.operator(&a)?, io.operator(&b)?);
            io.out = emit_operator(&x.combine(&y, |p, q| p.mul(q), |p, q| p.mul(q)));
        }
        Command::Trace { a } => {
            let x = io.operator(&a)?;
            io.out = format!("{}\n", fmt_rational(&x.trace()?));
        }
        Command::Dualize {
            spec,
            n,
            search_bound,
        } => {
            let text = io.read(&spec)?;
            let parsed = parse_pairing(&text).map_err(|e| located(&spec, e))?;
            let pairing = io.warn(&spec, parsed);
            let d = gram_schmidt(&pairing, n, search_bound)?;
            for (k, u) in d.u_rows.iter().enumerate() {
                let _ = writeln!(io.out, "u {} : {u}", k + 1);
            }
            for (k, w) in d.w_rows.iter().enumerate() {
                let _ = writeln!(io.out, "w {} : {w}", k + 1);
            }
        }
        Command::Classify {
            aut,
            max_window,
            start_window,
        } => {
            let text = io.read(&aut)?;
            let parsed = parse_aut(&text).map_err(|e| located(&aut, e))?;
            let h = io.warn(&aut, parsed);
            let c =
                classify_presentation(&h, Window::new(start_window)?, Window::new(max_window)?)?;
            let kind = match c.kind {
                TwistKind::TypeV => "V",
                TwistKind::TypeVstar => "V*",
            };
            let _ = writeln!(io.out, "type {kind}");
            let _ = writeln!(io.out, "window {}", c.window.n());
            let _ = write!(io.out, "{}", c.window_matrix());
        }
        Command::Approx { op, vectors } => {
            let a = io.operator(&op)?.to_mackey();
            let text = io.read(&vectors)?;
            let rs = parse_vectors(&text).map_err(|e| located(&vectors, e))?;
            io.out = emit_finitary(&dense_approx(&a, &rs)?);
        }
        Command::Check {
            suite,
            seed,
            window,
            cases,
        } => {
            let seed = match std::env::var(SEED_ENV) {
                Ok(s) => s.trim().parse().map_err(|_| {
                    Fault::Usage(format!("{SEED_ENV}={s} is not an unsigned 64-bit integer"))
                })?,
                Err(_) => seed,
            };
            let report = run_suite(&suite, seed, Window::new(window)?, cases)?;
            io.out = report.to_tap();
            if !report.passed() {
                return Ok(EXIT_FAILURE);
            }
        }
        Command::Run { file } => {
            let text = io.read(&file)?;
            let parsed = ScenarioFile::parse(&text).map_err(|e| located(&file, e))?;
            let scenario = io.warn(&file, parsed);
            run_scenario(&scenario, &mut io.out)?;
        }
    }
    Ok(EXIT_OK)
}
