use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "monogen", version, about = "Exact Clifford algebra, Vahlen matrices and monogenic function checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Signature `p,q` of the quadratic space.
    #[arg(long, global = true, value_name = "P,Q")]
    pub signature: Option<String>,
    /// Seed for every random choice [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Exact rationals or floating point in printed values [default: exact].
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// JSON lines or human readable text [default: text].
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutArg>,
    /// Scene file with named matrices, functions and chambers.
    #[arg(long, global = true, value_name = "FILE")]
    pub scene: Option<PathBuf>,
    /// Sequential or data-parallel execution of sweeps [default: parallel].
    #[arg(long, global = true, value_enum)]
    pub exec: Option<ExecArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutArg {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExecArg {
    Sequential,
    Parallel,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Products, inverses and involutions of Clifford elements.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Vahlen matrices and their Möbius action.
    #[command(subcommand)]
    Vahlen(VahlenCmd),
    /// Points of the conformal compactification.
    #[command(subcommand)]
    Conformal(ConformalCmd),
    /// Clifford-valued functions of `x = x1 e1 + ... + xn en`.
    #[command(subcommand)]
    Fn(FnCmd),
    /// Transformation law, cocycle, appendix scenarios and the full suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Runs the tasks listed in the scene file.
    Run,
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Product of two or more elements, left to right.
    Mul {
        #[arg(required = true, num_args = 2..)]
        factors: Vec<String>,
    },
    /// Inverse of an element.
    Inv { element: String },
    /// Grade involution, reversal and conjugation.
    Involution {
        element: String,
        /// Only this involution (grade, reversal, conjugation).
        #[arg(long)]
        kind: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VahlenCmd {
    /// The six membership criteria for a 2x2 Clifford matrix.
    Check { matrix: String },
    /// The Möbius image of a point.
    Apply {
        matrix: String,
        #[arg(long)]
        point: String,
    },
    /// The Jacobian matrix of the Möbius map at a point.
    Jacobian {
        matrix: String,
        #[arg(long)]
        point: String,
    },
    /// The conformal factor at a point.
    Omega {
        matrix: String,
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConformalCmd {
    /// The null vector and projective point of a finite point.
    Embed {
        #[arg(long)]
        point: String,
    },
    /// Classifies a pair `(x, y)` and gives a simpler equivalent pair.
    Classify { x: String, y: String },
    /// The matrix `gamma(x, y)` and its null vector.
    Gamma { x: String, y: String },
}

#[derive(Args, Debug, Clone, Default)]
pub struct ChamberArgs {
    /// Named chamber from the scene file.
    #[arg(long)]
    pub chamber: Option<String>,
    /// Declares the sign of a base, as `BASE=+1` or `BASE=-1`.
    #[arg(long = "sign", value_name = "BASE=SIGN")]
    pub signs: Vec<String>,
    /// Takes the chamber containing this point.
    #[arg(long, value_name = "POINT")]
    pub at: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum FnCmd {
    /// Parses and prints an expression.
    Parse { expr: String },
    /// Evaluates at a point.
    Eval {
        expr: String,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        chamber: ChamberArgs,
    },
    /// Applies a Dirac-type operator.
    Dirac {
        expr: String,
        /// D, Dstar, right-D or right-Dstar.
        #[arg(long, default_value = "D")]
        op: String,
        #[command(flatten)]
        chamber: ChamberArgs,
    },
    /// Decides whether the expression vanishes on a chamber.
    IsZero {
        expr: String,
        #[command(flatten)]
        chamber: ChamberArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// The transformation law. Without `--matrix` every word of length at
    /// most `--max-len` is checked; without `--function` the monogenic
    /// catalog is used, left with D and reversed with right-D.
    Main {
        /// A single matrix instead of the word sweep.
        #[arg(long)]
        matrix: Option<String>,
        /// A single function instead of the catalog.
        #[arg(long)]
        function: Option<String>,
        /// Operator for `--function`.
        #[arg(long, default_value = "D")]
        op: String,
        /// Longest word in the sweep.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[command(flatten)]
        chamber: ChamberArgs,
    },
    /// The cocycle identity of the weight factor, for one pair of matrices
    /// at one point, or the full generator sweep when no pair is given.
    Cocycle {
        first: Option<String>,
        second: Option<String>,
        #[arg(long)]
        point: Option<String>,
    },
    /// The counterexamples for the all-plus operator.
    Appendix,
    /// Every acceptance criterion.
    All {
        /// Only these criteria.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        /// Includes wall-clock times in JSON output.
        #[arg(long)]
        timings: bool,
    },
}
