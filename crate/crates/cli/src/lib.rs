//! Command-line front end.
//!
//! Exit codes: 0 all checks passed, 1 a check failed (the witness is
//! printed), 2 certification inconclusive at the cap, 3 input error.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use suspensia_core::constructions::ConstructionError;
use suspensia_core::derivation::{DerivationError, DEFAULT_CAP};
use suspensia_core::parse_io::LoadError;
use suspensia_core::suspension::SuspensionError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "suspensia", version, about = "Certificates for derivations of presented algebras and m-suspensions")]
pub struct Cli {
    /// Iteration cap for LND certification.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DerivationSelect {
    /// Algebra file (with embedded derivations) or derivation file.
    pub file: PathBuf,
    /// Which embedded derivation to use.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct SuspensionArgs {
    /// Base function f, an expression in the algebra's variables.
    #[arg(long = "f", allow_hyphen_values = true)]
    pub f: String,
    /// Exponents k_1,...,k_m.
    #[arg(long = "k", value_delimiter = ',', required = true)]
    pub k: Vec<u32>,
    /// Names for the new variables (default y1..ym).
    #[arg(long, value_delimiter = ',')]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a file and run its construction checks.
    Validate { file: PathBuf },
    /// Print the reduced Gröbner basis.
    Groebner { file: PathBuf },
    /// Check well-definedness and certify local nilpotency.
    CertifyDerivation {
        #[command(flatten)]
        select: DerivationSelect,
        /// Grading (by name) for the homogeneous degree.
        #[arg(long)]
        grading: Option<String>,
        /// Write the certificate JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a derivation into homogeneous components along a grading row.
    Decompose {
        #[command(flatten)]
        select: DerivationSelect,
        #[arg(long)]
        grading: String,
        #[arg(long, default_value_t = 0)]
        row: usize,
    },
    /// Replace a certified LND by its top homogeneous component for every row.
    Homogenize {
        #[command(flatten)]
        select: DerivationSelect,
        #[arg(long)]
        grading: String,
    },
    /// Build the m-suspension y_1^k_1...y_m^k_m = f.
    Suspend {
        file: PathBuf,
        #[command(flatten)]
        susp: SuspensionArgs,
        /// Directory for Y.json, torus.json, criterion.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the torus weight matrix of a suspension.
    Torus {
        file: PathBuf,
        #[command(flatten)]
        susp: SuspensionArgs,
    },
    /// Lift a derivation to a suspension (--f/--k) or through a root (--root/--e).
    Lift {
        #[command(flatten)]
        select: DerivationSelect,
        #[arg(long = "f", allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long = "k", value_delimiter = ',')]
        k: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
        /// Variable to replace by a power of a new one.
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        e: Option<u32>,
        /// Name of the new root variable.
        #[arg(long, default_value = "u")]
        new: String,
        /// Write the lifted algebra (with the derivation embedded) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and certify the cyclotomic family for prime p and p | n.
    BuildYp {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Exponential automorphism exp(t d) of a certified LND.
    Exp {
        #[command(flatten)]
        select: DerivationSelect,
        /// Parameter t, a constant expression.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Also check exp(s d) exp(t d) = exp((s+t) d).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CHECK_FAILED,
            message: message.into(),
        }
    }

    pub fn inconclusive(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INCONCLUSIVE,
            message: message.into(),
        }
    }
}

fn derivation_code(e: &DerivationError) -> i32 {
    match e {
        DerivationError::IllDefined { .. } | DerivationError::NotAMorphism { .. } => EXIT_CHECK_FAILED,
        DerivationError::NotCertified(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_INPUT,
    }
}

impl From<DerivationError> for Failure {
    fn from(e: DerivationError) -> Self {
        Failure {
            code: derivation_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        let code = match &e {
            LoadError::Derivation(d) => derivation_code(d),
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SuspensionError> for Failure {
    fn from(e: SuspensionError) -> Self {
        let code = match &e {
            SuspensionError::NotAnnihilated(_) | SuspensionError::NotInKernel { .. } => EXIT_CHECK_FAILED,
            SuspensionError::TorusWeight { .. } => EXIT_CHECK_FAILED,
            SuspensionError::Derivation(d) => derivation_code(d),
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        let code = match &e {
            ConstructionError::Check(_) => EXIT_CHECK_FAILED,
            ConstructionError::Derivation(d) => derivation_code(d),
            ConstructionError::Suspension(SuspensionError::Derivation(d)) => derivation_code(d),
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<suspensia_core::algebra::AlgebraError> for Failure {
    fn from(e: suspensia_core::algebra::AlgebraError) -> Self {
        Failure::input(e.to_string())
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match commands::dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
