use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "fatpoint", version, about = "Hilbert functions, resolutions and maximal rank for fat points in the plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hilbert function and the degrees α, β, τ.
    Hilbert {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Degree range `a..b` (inclusive); defaults to α−1..τ+2.
        #[arg(long, value_parser = parse_range)]
        degrees: Option<(i64, i64)>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Minimal generators and first syzygies by degree.
    Betti {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Fall back to the finite-field oracle where no closed form applies.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        oracle_cfg: OracleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rank status of each multiplication map.
    Maxrank {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Uniform failures for `m ≤ m-max` on `r` points.
    Scan {
        #[arg(short = 'r')]
        r: usize,
        #[arg(long = "m-max", default_value_t = 20)]
        m_max: i64,
        #[arg(long, value_parser = parse_order)]
        order: Option<Order>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bounded Weyl orbit of a nef class.
    Orbit {
        /// Class as `d;m1,m2,…`.
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        #[arg(long)]
        bound: String,
        /// Attach injectivity certificates to each element.
        #[arg(long)]
        certify: bool,
        #[arg(long, value_parser = parse_order)]
        order: Option<Order>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solutions of `b² − r·m² = 1`.
    Pell {
        #[arg(short = 'r')]
        r: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Odd convergents `p/q` of `√((ca)² + 4c²)`.
    Convergents {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare closed forms with the finite-field oracle.
    Verify {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        oracle_cfg: OracleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SchemeArgs {
    /// Number of points.
    #[arg(short = 'r')]
    pub r: Option<usize>,
    /// Uniform multiplicity.
    #[arg(short = 'm', conflicts_with = "mults")]
    pub m: Option<i64>,
    /// Multiplicities `m1,m2,…`.
    #[arg(long, value_delimiter = ',')]
    pub mults: Option<Vec<i64>>,
    /// Order of the nine points on their cubic: a positive integer or `inf`.
    #[arg(long, value_parser = parse_order)]
    pub order: Option<Order>,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "max-degree")]
    pub max_degree: Option<i64>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// JSON file caching results across runs.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn as_option(self) -> Option<u64> {
        match self {
            Order::Finite(l) => Some(l),
            Order::Infinite => None,
        }
    }
}

fn parse_order(s: &str) -> Result<Order, String> {
    match s {
        "inf" | "infinite" => Ok(Order::Infinite),
        _ => match s.parse::<u64>() {
            Ok(l) if l > 0 => Ok(Order::Finite(l)),
            _ => Err(format!("expected a positive integer or `inf`, got `{s}`")),
        },
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in `{s}`"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in `{s}`"))?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok((a, b))
}
