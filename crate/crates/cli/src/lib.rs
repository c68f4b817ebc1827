//! Batch front end for floerkit.
//!
//! Every subcommand produces a human-readable table on stdout and a JSON
//! document (printed with `--json`, written with `--out FILE`).
//!
//! Exit codes: 0 success, 1 a check failed, 2 I/O, parse or usage error,
//! 3 unsupported case.

pub mod commands;
pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use floerkit::Error;
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "floerkit", version, about = "Exact computations with δ-complexes")]
pub struct Cli {
    /// Write the machine-readable report to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Print the machine-readable report instead of the table.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the defining relations of a δ-complex.
    Validate { file: String },
    /// Cohomology, reduced groups, ζ and h.
    Cohom { file: String },
    /// Cohomology in another chamber and the chamber map.
    Chambers {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Write the derived complex as an instance file.
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// The equivariant limit groups and the reduced group.
    Equivariant {
        file: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        window: Option<Vec<i64>>,
    },
    /// The fundamental exact sequence on a degree window.
    Fundseq {
        file: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        window: Vec<i64>,
    },
    /// The h-invariant over a field of the given characteristic.
    Hinv {
        file: String,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
    /// The dual complex and the sign change of ζ and h.
    Dual {
        file: String,
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Check the relations of the file's cobordism and its induced maps.
    CobordValidate { file: String },
    /// Lefschetz numbers of the file's endomorphism or self-cobordism.
    Lefschetz { file: String },
    /// `L(u^n ψ̂(W))` for the file's self-cobordism (identity if absent).
    Sw {
        file: String,
        #[arg(long, default_value_t = 0)]
        n: u32,
    },
    /// The inequality `-Σh ≥ (b₂ + c₁²)/8` for a negative definite filling.
    Froyshov {
        file: Option<String>,
        /// h of a boundary component (repeatable).
        #[arg(long = "h", allow_hyphen_values = true)]
        h: Vec<String>,
        #[arg(long)]
        b2: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        c1sq: Option<String>,
    },
    /// h of the simple lens space L(q,1) in every spin^c structure.
    Lens {
        #[arg(long)]
        q: i64,
    },
    /// Maximum of (n + c²)/8 over characteristic vectors.
    Obstruct {
        /// `diag:N`, `e8`, or a JSON file holding a Gram matrix.
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = 5)]
        bound: i64,
    },
    /// Equivariant cohomology from the Mayer–Vietoris splice.
    OracleMv {
        #[arg(long)]
        n: Option<usize>,
        /// Cohomology of (B*, B₀) as `q:dim,q:dim`.
        #[arg(long, default_value = "")]
        hb: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        window: Option<Vec<i64>>,
        /// Instance file with a Morse model to cross-check.
        #[arg(long)]
        model: Option<String>,
    },
    /// Spectral flow of a family of eigenvalue curves.
    OracleSpecflow {
        file: Option<String>,
        /// Use the built-in family with N crossing curves instead of a file.
        #[arg(long)]
        berger: Option<u32>,
    },
    /// Generate a random valid δ-complex.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        size: usize,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
}

/// Result of one subcommand.
#[derive(Debug, Clone)]
pub struct Report {
    pub human: String,
    pub json: Value,
    pub ok: bool,
    /// Exit code override for an unsupported sub-case.
    pub code: Option<i32>,
}

impl Report {
    pub fn new(human: String, json: Value, ok: bool) -> Self {
        Report { human, json, ok, code: None }
    }

    pub fn exit_code(&self) -> i32 {
        self.code.unwrap_or(if self.ok { EXIT_OK } else { EXIT_CHECK_FAILED })
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Unsupported(_) | Error::NotAField | Error::NotIntegers => EXIT_UNSUPPORTED,
        Error::Parse(_) | Error::InvalidInput(_) | Error::NotPrime(_) => EXIT_INPUT,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Directory holding the bundled corpus (`FLOERKIT_CORPUS` overrides).
pub fn corpus_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os("FLOERKIT_CORPUS") {
        return PathBuf::from(dir);
    }
    let local = PathBuf::from("corpus");
    if local.is_dir() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// `path`, `path.json`, or a corpus entry named by the last path component.
pub fn resolve(path: &str) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_file() {
        return p;
    }
    let with_ext = PathBuf::from(format!("{path}.json"));
    if with_ext.is_file() {
        return with_ext;
    }
    let name = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = name.strip_suffix(".json").unwrap_or(&name).to_string();
    corpus_dir().join(format!("{name}.json"))
}

pub fn execute(cli: &Cli) -> floerkit::Result<Report> {
    commands::dispatch(&cli.command)
}

/// Runs the command line and returns the exit code, writing to the given streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let doc = serde_json::to_string_pretty(&report.json).expect("report serializes");
            if cli.json {
                let _ = writeln!(stdout, "{doc}");
            } else {
                let _ = writeln!(stdout, "{}", report.human.trim_end());
            }
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, format!("{doc}\n")) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}
