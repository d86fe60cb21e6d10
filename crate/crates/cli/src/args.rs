//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gl2q_core::fock::GridIndex;

use crate::parse::parse_index;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "gl2q",
    version,
    about = "Exact computations with the free-field realization of gl2 over a quantum torus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceName {
    Plain,
    Localized,
    Twisted,
    Quotient,
}

/// Parameter values. Each is a rational (`3`, `-1/2`) or an expression in the symbols
/// `q`, `mu`, `b`; an omitted parameter stays symbolic.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Quantum torus parameter (nonzero); symbolic if omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Highest weight; symbolic if omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Twist of a twisted space; symbolic if omitted there.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    #[arg(long, value_enum, default_value = "plain")]
    pub space: SpaceName,
    /// Distinguished index `m1,m2` of a localized, twisted or quotient space.
    #[arg(long, value_parser = parse_index, allow_hyphen_values = true)]
    pub m: Option<GridIndex>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Print the JSON report instead of the human-readable one.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Keep wall-clock timings in the JSON report (makes it run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Apply an algebra element to a module vector.
    Act {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        vec: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eigenvalues of e11(0), e22(0), d1, d2 on a weight vector.
    Weights {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        vec: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build the singular vector for integer mu and check that e12(-m) kills it.
    Singular {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, value_parser = parse_index, allow_hyphen_values = true)]
        m: GridIndex,
        #[arg(long, value_parser = parse_index, allow_hyphen_values = true)]
        n: GridIndex,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduce a quotient vector to a multiple of x[m]^-1 by degree-lowering steps.
    Reduce {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = parse_index, allow_hyphen_values = true)]
        m: GridIndex,
        #[arg(long, allow_hyphen_values = true)]
        vec: String,
        /// Maximum reduction steps per homogeneous component.
        #[arg(long, default_value_t = 32)]
        budget: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search the submodule generated by a vector for a target vector.
    ProbeSpan {
        #[command(flatten)]
        space: SpaceArgs,
        /// The seed vector.
        #[arg(long, allow_hyphen_values = true)]
        vec: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Generators e_ij(n) with |n1|, |n2| <= window are applied.
        #[arg(long, default_value_t = 1)]
        window: i64,
        /// Vectors with a monomial of total degree beyond +-cap are discarded.
        #[arg(long, default_value_t = 2)]
        degree_cap: i64,
        /// Maximum dimension of the span.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply one generator repeatedly until the vector vanishes.
    ProbeNilp {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        vec: String,
        /// Maximum number of applications.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the seeded identity suites.
    Verify {
        /// bracket, theta, lemmas, homomorphism or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent parameter points per trial.
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Act { output, .. }
            | Command::Weights { output, .. }
            | Command::Singular { output, .. }
            | Command::Reduce { output, .. }
            | Command::ProbeSpan { output, .. }
            | Command::ProbeNilp { output, .. }
            | Command::Verify { output, .. } => output,
        }
    }
}
