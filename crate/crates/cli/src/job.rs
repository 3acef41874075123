//! Command-line job description.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use syzcalc::groebner::GbOptions;
use syzcalc::{Field, MonomialOrder};

pub const DEFAULT_SEED: u64 = 20240601;

/// `qq` or `fp:P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldChoice(pub Field);

impl FromStr for FieldChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qq" | "QQ" => Ok(FieldChoice(Field::Rationals)),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .ok_or_else(|| format!("expected `qq` or `fp:P`, got `{s}`"))?
                    .parse::<u64>()
                    .map_err(|e| format!("bad modulus: {e}"))?;
                Field::prime(p).map(FieldChoice).map_err(|e| e.to_string())
            }
        }
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Field::Rationals => write!(f, "qq"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// `grevlex`, `lex` or `block:K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderChoice(pub MonomialOrder);

impl FromStr for OrderChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        MonomialOrder::parse(s)
            .map(OrderChoice)
            .ok_or_else(|| format!("expected `grevlex`, `lex` or `block:K`, got `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyChoice {
    Exhaustive,
    Sampled,
}

/// One invocation: global options plus a subcommand.
#[derive(Clone, Debug, Parser)]
#[command(name = "syzcalc", version, about = "Exact syzygy computations: Gröbner bases, resolutions, Koszul cohomology")]
pub struct JobSpec {
    #[command(subcommand)]
    pub command: Command,

    /// Coefficient field: `qq` or `fp:P`.
    #[arg(long, global = true, default_value = "qq")]
    pub field: FieldChoice,

    /// Monomial order: `grevlex`, `lex` or `block:K`.
    #[arg(long, global = true, default_value = "grevlex")]
    pub order: OrderChoice,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Abort a Gröbner basis computation past this many elements.
    #[arg(long, global = true, default_value_t = 20_000)]
    pub max_basis: usize,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl JobSpec {
    pub fn gb_options(&self) -> GbOptions {
        GbOptions { max_basis: self.max_basis }
    }

    pub fn field(&self) -> Field {
        self.field.0
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_basis == 0 {
            return Err("--max-basis must be positive".into());
        }
        if self.threads == Some(0) {
            return Err("--threads must be positive".into());
        }
        Ok(())
    }
}

/// Polynomials either inline or from files in the module text format.
#[derive(Clone, Debug, Default, Args)]
pub struct IdealArgs {
    /// Variable names, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub vars: Vec<String>,

    /// Comma-separated generators; repeat for several ideals.
    #[arg(long)]
    pub ideal: Vec<String>,

    /// Ideal files: a `vars:` line, then one generator per line.
    #[arg(long)]
    pub input: Vec<PathBuf>,
}

/// A module file, or `S/I` given by an ideal.
#[derive(Clone, Debug, Default, Args)]
pub struct ModuleArgs {
    /// Module file in the text format, or JSON when the name ends in `.json`.
    pub file: Option<PathBuf>,

    #[arg(long, value_delimiter = ',')]
    pub vars: Vec<String>,

    /// Generators of `I`, presenting `S/I`.
    #[arg(long)]
    pub ideal: Option<String>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Reduced Gröbner basis of an ideal.
    Gb(IdealArgs),
    /// Eliminate variables from an ideal.
    Eliminate {
        #[command(flatten)]
        ideal: IdealArgs,
        /// Variables to eliminate.
        #[arg(long = "drop", value_delimiter = ',', required = true)]
        drop: Vec<String>,
    },
    /// Intersection of two or more ideals in one ring.
    Intersect(IdealArgs),
    /// Minimal graded free resolution.
    Resolve {
        #[command(flatten)]
        module: ModuleArgs,
        /// Also print the differentials.
        #[arg(long)]
        maps: bool,
    },
    /// Graded Betti table.
    Betti(ModuleArgs),
    /// Koszul cohomology of a module, or of sections on the projective line.
    Koszul {
        #[command(flatten)]
        module: ModuleArgs,
        /// Degree of B on the projective line.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
        /// Degree of L on the projective line.
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
        /// Largest `p` of the table.
        #[arg(long)]
        p_max: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        q_min: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        q_max: Option<i64>,
    },
    /// Module of sections of 𝒪(b + q·d) on the projective line.
    Sections {
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 3)]
        q_max: i64,
        /// Also give the Koszul table up to this `p`.
        #[arg(long)]
        koszul: Option<usize>,
    },
    /// Order of very ampleness of a linear system.
    Ample {
        /// The complete system of 𝒪(m) on the projective line.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        /// JSON description of sections, points and jets.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        p_max: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        strategy: StrategyChoice,
        #[arg(long, default_value_t = 64)]
        trials: usize,
    },
    /// Numerical nonvanishing criterion for `K_{p,1}` on a curve.
    CurveBound {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        p: i64,
        /// `h⁰(B)`; defaults to the generic value `max(b+1−g, 0)`.
        #[arg(long)]
        h0b: Option<i64>,
    },
    /// Equivariant Ext of a polygraph ring.
    Polygraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Ext index; defaults to `k + 1`.
        #[arg(long)]
        j: Option<usize>,
        /// Cap on the degree of presentation generators.
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
    },
    /// Effective bounds for a variety of dimension `n`.
    Report {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        /// Whether `K_{h⁰−1−n−p, n}(X; 𝒪_X, L)` is known to vanish.
        #[arg(long)]
        vanishing: bool,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gb(_) => "gb",
            Command::Eliminate { .. } => "eliminate",
            Command::Intersect(_) => "intersect",
            Command::Resolve { .. } => "resolve",
            Command::Betti(_) => "betti",
            Command::Koszul { .. } => "koszul",
            Command::Sections { .. } => "sections",
            Command::Ample { .. } => "ample",
            Command::CurveBound { .. } => "curve-bound",
            Command::Polygraph { .. } => "polygraph",
            Command::Report { .. } => "report",
            Command::Verify { .. } => "verify",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_choices() {
        assert_eq!("qq".parse::<FieldChoice>().unwrap().0, Field::Rationals);
        assert_eq!("fp:101".parse::<FieldChoice>().unwrap().0, Field::Prime(101));
        assert!("fp:100".parse::<FieldChoice>().is_err());
        assert!("rr".parse::<FieldChoice>().is_err());
        assert_eq!(FieldChoice(Field::Prime(7)).to_string(), "fp:7");
    }

    #[test]
    fn orders() {
        assert_eq!("block:2".parse::<OrderChoice>().unwrap().0, MonomialOrder::Block { split: 2 });
        assert!("deglex".parse::<OrderChoice>().is_err());
    }

    #[test]
    fn parses_global_flags_after_subcommand() {
        let job = JobSpec::try_parse_from(["syzcalc", "koszul", "--b", "0", "--d", "3", "--p", "1", "--q", "1", "--format", "json"]).unwrap();
        assert_eq!(job.format, Format::Json);
        assert!(matches!(job.command, Command::Koszul { b: Some(0), d: Some(3), p: Some(1), q: Some(1), .. }));
        let job = JobSpec::try_parse_from(["syzcalc", "--threads", "0", "verify"]).unwrap();
        assert!(job.validate().is_err());
    }
}
