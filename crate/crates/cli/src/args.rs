use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use factorkit::quant::DEFAULT_TOL;
use factorkit::Theory;

#[derive(Debug, Parser)]
#[command(
    name = "factorkit",
    version,
    about = "Purity, factorisation and lifting for finite process theories"
)]
pub struct Cli {
    /// Numerical tolerance for the quantum theory.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Report membership of a morphism in the pure, copure, mixing and discarding classes.
    Classify {
        #[command(flatten)]
        theory: TheoryArg,
        /// Morphism document, or `-` for standard input.
        input: PathBuf,
    },
    /// Factor a morphism through a pure or copure part.
    Factor {
        #[command(flatten)]
        theory: TheoryArg,
        #[arg(long, value_enum)]
        mode: Mode,
        input: PathBuf,
    },
    /// Fill a lifting square, or decide whether `left` lifts against `right`.
    Lift {
        #[command(flatten)]
        theory: TheoryArg,
        /// Square document with `left`, `right`, `top` and `bottom`.
        #[arg(required_unless_present_all = ["left", "right"], conflicts_with_all = ["left", "right"])]
        square: Option<PathBuf>,
        #[arg(long, requires = "right")]
        left: Option<PathBuf>,
        #[arg(long, requires = "left")]
        right: Option<PathBuf>,
    },
    /// Run a seeded verification suite and emit a report.
    Verify {
        #[command(flatten)]
        theory: TheoryArg,
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Tabulate rival purity definitions over every small relation.
    CompareDefinitions {
        #[command(flatten)]
        theory: TheoryArg,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
    },
}

#[derive(Debug, Args)]
pub struct TheoryArg {
    /// fstoch, frel, fset or quant.
    #[arg(long = "theory")]
    pub value: Theory,
}

#[derive(Debug, Args)]
pub struct Bounds {
    /// Largest object size visited.
    #[arg(long, default_value_t = 2)]
    pub max_size: usize,
    #[arg(long, env = "FACTORKIT_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Purify,
    Copurify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Galois,
    Roundtrip,
    FillIn,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Galois => "galois",
            Suite::Roundtrip => "roundtrip",
            Suite::FillIn => "fill-in",
        }
    }
}
