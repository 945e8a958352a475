//! Batch front end. Machine-readable JSON goes to stdout, the human-readable
//! summary to stderr. Exit codes: 0 success, 1 validation failure, 2 parse
//! error.

mod commands;
mod selfcheck;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eqloc::Error;

#[derive(Parser, Debug)]
#[command(name = "eqloc", version, about = "Equivariant complexes over F2[[q]], localization maps and Mumford triples")]
pub struct Cli {
    /// Working precision N in powers of q; results are certified at N and 2N.
    #[arg(long, global = true)]
    pub precision: Option<usize>,

    /// Run the full invariant suite on the input as well.
    #[arg(long, global = true)]
    pub self_check: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a complex, datum, flow system, twisted or curve document.
    Validate { input: String },
    /// Cohomology dimensions of a complex, or of a datum's total complex.
    Cohomology { input: String },
    /// Module invariants of the Borel complex and the universal coefficient check.
    Borel { input: String },
    /// Build the truncated equivariant complex of a datum.
    Equiv { input: String },
    /// Localization map, its normalization and the cokernel polynomial.
    Localize { input: String },
    /// Smith inequality quantities of a datum.
    SmithReport { input: String },
    /// Pages of the q-adic spectral sequence.
    SsPages {
        input: String,
        /// Number of pages to compute.
        #[arg(long, default_value_t = 4)]
        pages: usize,
    },
    /// Derive a localization datum from a flow system.
    FlowDerive { input: String },
    /// Cohomology of a twisted complex over F2((q)).
    Twisted { input: String },
    /// Mumford triples, divisors and slice matrices.
    Mumford {
        #[command(subcommand)]
        op: MumfordOp,
    },
    /// Bundled flow systems.
    Examples {
        #[command(subcommand)]
        op: ExamplesOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum MumfordOp {
    /// Divisor to triple and slice blocks.
    ToMatrix { input: String },
    /// Triple to divisor.
    ToDivisor { input: String },
    /// Determinant identity and fixed-locus check of slice blocks.
    Check { input: String },
}

#[derive(Subcommand, Debug)]
pub enum ExamplesOp {
    List,
    Emit { name: String },
}

/// Reads a file, or stdin for `-`.
pub fn read_input(path: &str) -> Result<String, Error> {
    let mut s = String::new();
    let r = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| Error::Parse {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    Ok(s)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::PrecisionExhausted(_) => "PrecisionExhausted",
        Error::PrecisionUnstable { .. } => "PrecisionUnstable",
        Error::NotNilpotent(_) => "NotNilpotent",
        Error::InvalidComplex(_) => "InvalidComplex",
        Error::NotChainMap(_) => "NotChainMap",
        Error::NotInvolution(_) => "NotInvolution",
        Error::RelationViolated { .. } => "RelationViolated",
        Error::DegreeViolated { .. } => "DegreeViolated",
        Error::FiltrationViolated { .. } => "FiltrationViolated",
        Error::AcyclicityFailed { .. } => "AcyclicityFailed",
        Error::ChainMapViolated(_) => "ChainMapViolated",
        Error::NoLinearizingM(_) => "NoLinearizingM",
        Error::DifferentialNotSquareZero(_) => "DifferentialNotSquareZero",
        Error::InconsistentCover(_) => "InconsistentCover",
        Error::UnknownExample(_) => "UnknownExample",
        Error::UnsupportedProduct(_) => "UnsupportedProduct",
        Error::HyperellipticFibre(_) => "HyperellipticFibre",
        Error::FieldMismatch(_) => "FieldMismatch",
        Error::DoesNotSplit(_) => "DoesNotSplit",
        Error::InvariantViolated(_) => "InvariantViolated",
        Error::Parse { .. } => "ParseError",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", eqloc::io::to_json(&out.json));
            if !out.text.is_empty() {
                eprint!("{}", out.text);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let kind = error_kind(&e);
            let doc = serde_json::json!({ "error": { "kind": kind, "message": e.to_string() } });
            print!("{}", eqloc::io::to_json(&doc));
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
