//! Command-line front end for `vfree-core`.
//!
//! Every subcommand produces a [`Report`]: a JSON document, a text
//! rendering and a verdict. The binary prints one of the two renderings and
//! maps the verdict to the exit status (0 pass, 1 mathematical failure,
//! 2 usage error).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::Serialize;
use vfree_core::exact::{FieldKind, DEFAULT_CHARACTERISTIC};

pub mod commands;
pub mod parse;
pub mod suite;

#[derive(Debug, Parser)]
#[command(name = "vfree", version, about = "Normal bundles of rational curves and very free curve certificates")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    /// Field characteristic: 0 for the rationals, otherwise a prime.
    #[arg(long = "char", global = true, default_value_t = DEFAULT_CHARACTERISTIC)]
    pub characteristic: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { characteristic: DEFAULT_CHARACTERISTIC, seed: 0, trials: 5, json: true, out: None }
    }
}

impl RunConfig {
    pub fn field(&self) -> Result<FieldKind, CliError> {
        FieldKind::from_characteristic(self.characteristic).map_err(CliError::from)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn trials(&self) -> usize {
        self.trials as usize
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Kernel splitting of a general map E → F.
    Splitting {
        /// Summands of E, e.g. 0,2,2
        #[arg(long, allow_hyphen_values = true)]
        source: String,
        /// Summands of F, e.g. 2
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Tangent and normal bundle of a curve in a catalogued ambient.
    NormalBundle {
        /// projective:n | product:n1,n2 | grassmannian:k,n | flag:k1,k2/n | wps:a0,..,am/a
        #[arg(long)]
        ambient: String,
        /// auto | rnc:e | monomials:e:k0,..,kn | frobenius | random
        #[arg(long, default_value = "auto")]
        curve: String,
    },
    /// Quadrics times forms onto the twisted conormal bundle of a rational normal curve.
    Rathmann { e: usize, n: usize, b: usize },
    /// Complete intersections containing a curve and their normal bundles.
    Ci {
        #[arg(long)]
        ambient: String,
        #[arg(long, default_value = "auto")]
        curve: String,
        /// Classes, e.g. 3 or 3,3 or 1x2
        #[arg(long)]
        degrees: String,
        /// Build the hypersurfaces from a random surjection of the normal
        /// bundle instead of sampling them.
        #[arg(long)]
        construct: bool,
    },
    /// Very free curve certificate for a general complete intersection.
    SrcCertify {
        #[arg(long)]
        ambient: String,
        #[arg(long, default_value = "auto")]
        curve: String,
        #[arg(long)]
        degrees: String,
    },
    /// Normal bundle of a general twisted product of curves.
    Product {
        /// Factor as AMBIENT or AMBIENT@CURVE; repeat for each factor.
        #[arg(long = "factor", required = true)]
        factors: Vec<String>,
        #[arg(long, default_value_t = 2)]
        d_min: i64,
        #[arg(long, default_value_t = 8)]
        d_max: i64,
    },
    /// The twisted pair of (s^(p+1), s^p t, s t^p, t^(p+1)) over F_p.
    CharpDemo {
        p: u64,
        /// Largest twist checked, default 2p+2.
        #[arg(long)]
        d_max: Option<i64>,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    VerifyPaper {
        /// Only these criteria (1-10).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

/// A machine-readable failure.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub context: String,
    #[serde(skip)]
    pub exit: i32,
}

impl CliError {
    pub fn usage(message: impl Into<String>, context: impl Into<String>) -> Self {
        CliError { code: "usage".into(), message: message.into(), context: context.into(), exit: 2 }
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }
}

impl From<vfree_core::Error> for CliError {
    fn from(e: vfree_core::Error) -> Self {
        use vfree_core::Error as E;
        let (code, exit) = match &e {
            E::Parse(_) => ("parse", 2),
            E::Shape(_) => ("shape", 2),
            E::InvalidCharacteristic(_) => ("invalid_characteristic", 2),
            E::FieldMismatch { .. } => ("field_mismatch", 2),
            E::Hypothesis(_) => ("hypothesis", 2),
            E::InvalidAmbient(_) => ("invalid_ambient", 2),
            E::InvalidCurve(_) => ("invalid_curve", 2),
            E::InexpressibleExponent { .. } => ("inexpressible_exponent", 2),
            E::SingularAutomorphism => ("singular_automorphism", 2),
            E::NotContained { .. } => ("not_contained", 1),
            E::RankDrop(_) => ("rank_drop", 1),
            E::NotFiberwiseSurjective(_) => ("not_fiberwise_surjective", 1),
            E::LiftInfeasible(_) => ("lift_infeasible", 1),
            E::AllDegenerate { .. } => ("all_degenerate", 1),
            E::Verification(_) => ("verification", 1),
            E::InconsistentProfile(_) => ("inconsistent_profile", 1),
            E::KernelSearch { .. } => ("kernel_search", 1),
            E::NotInModel(_) => ("not_in_model", 1),
            _ => ("arithmetic", 1),
        };
        CliError { code: code.into(), message: e.to_string(), context: String::new(), exit }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)?;
        if !self.context.is_empty() {
            write!(f, " ({})", self.context)?;
        }
        Ok(())
    }
}

impl std::error::Error for CliError {}

/// Output of a subcommand.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: String,
    pub text: String,
    pub pass: bool,
}

impl Report {
    pub fn new<T: Serialize>(dto: &T, text: String, pass: bool) -> Self {
        let json = serde_json::to_string_pretty(dto).expect("report serializes");
        Report { json, text, pass }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Splittings are printed ascending and bracketed.
pub fn bracket(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Runs `$body` with `$f` bound to the configured field.
#[macro_export]
macro_rules! with_field {
    ($kind:expr, $f:ident => $body:expr) => {
        match $kind {
            vfree_core::exact::FieldKind::Rational => {
                let $f = vfree_core::exact::Rationals;
                $body
            }
            vfree_core::exact::FieldKind::Prime(p) => {
                let $f = vfree_core::exact::PrimeField::new(p)?;
                $body
            }
        }
    };
}

pub fn run(command: &Command, config: &RunConfig) -> Result<Report, CliError> {
    let report = commands::dispatch(command, config)?;
    if let Some(path) = &config.out {
        std::fs::write(path, &report.json)
            .map_err(|e| CliError { code: "io".into(), message: e.to_string(), context: path.display().to_string(), exit: 2 })?;
    }
    Ok(report)
}
