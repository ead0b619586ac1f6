use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

#[derive(Debug, Parser)]
#[command(
    name = "hkl",
    version,
    about = "Exact lattice computations for OG10-type hyper-Kähler manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Coordinate bound for spherical-class enumeration.
    #[arg(long, global = true, env = "HK_BOUND", default_value_t = 16,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub bound: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairing data of a Mukai vector.
    Mukai(MukaiArgs),
    /// Invariants of the moduli space with Mukai vector m·v0.
    Moduli(ModuliArgs),
    /// Wall and chamber structure of the movable cone.
    Cones(ConesArgs),
    /// All top intersection numbers of a BB form.
    FujikiTable(FujikiTableArgs),
    /// Solve for unknown BB Gram entries from intersection numbers.
    FujikiSolve(FujikiSolveArgs),
    /// Mordell–Weil ranks via Shioda–Tate.
    MwRank(MwRankArgs),
    /// Recompute every reference value and print a pass/fail table.
    #[command(name = "reproduce-paper")]
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct K3Args {
    /// Polarization parameter: C² = 2d.
    #[arg(long, default_value_t = BigInt::from(1), value_parser = parse_bigint)]
    pub d: BigInt,

    /// Mukai vector as r,a,b.
    #[arg(long, value_parser = parse_mukai_coords, allow_hyphen_values = true)]
    pub v0: [BigInt; 3],
}

#[derive(Debug, Args)]
pub struct MukaiArgs {
    #[command(flatten)]
    pub k3: K3Args,

    /// Second vector to pair against v0.
    #[arg(long, value_parser = parse_mukai_coords, allow_hyphen_values = true)]
    pub with: Option<[BigInt; 3]>,

    /// Twist v0 by O(nC).
    #[arg(long, value_parser = parse_bigint, allow_hyphen_values = true)]
    pub tensor: Option<BigInt>,
}

#[derive(Debug, Args)]
pub struct ModuliArgs {
    #[arg(long, default_value_t = 2)]
    pub m: u32,

    #[command(flatten)]
    pub k3: K3Args,
}

#[derive(Debug, Args)]
pub struct ConesArgs {
    #[command(flatten)]
    pub k3: K3Args,

    /// Use the labels of the intermediate Jacobian fibration.
    #[arg(long)]
    pub relabel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    #[value(name = "og10-L-theta")]
    Og10LTheta,
}

#[derive(Debug, Args)]
pub struct FujikiTableArgs {
    #[arg(long, value_enum, conflicts_with = "gram")]
    pub preset: Option<Preset>,

    /// Gram matrix, rows separated by ';' and entries by ','.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    pub gram: Option<String>,

    /// Half the complex dimension.
    #[arg(long, default_value_t = 5)]
    pub n: u32,

    /// Fujiki constant.
    #[arg(long, default_value = "945")]
    pub c: String,
}

#[derive(Debug, Args)]
pub struct FujikiSolveArgs {
    #[arg(long, value_enum, conflicts_with_all = ["template", "constraint"])]
    pub preset: Option<Preset>,

    /// Gram template; identifiers name unknown entries, e.g. "0,p;p,u".
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    pub template: Option<String>,

    /// Intersection constraint "e0,e1,...=value"; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub constraint: Vec<String>,

    #[arg(long, default_value_t = 5)]
    pub n: u32,

    #[arg(long, default_value = "945")]
    pub c: String,
}

#[derive(Debug, Args)]
pub struct MwRankArgs {
    /// Rank of H^{2,2}(X, Q) for a cubic fourfold X.
    #[arg(long, conflicts_with_all = ["ns_rank", "boundary", "no_section"],
          required_unless_present = "ns_rank")]
    pub h22: Option<u32>,

    /// Picard rank of a general fibration's total space.
    #[arg(long)]
    pub ns_rank: Option<u32>,

    /// Boundary components missing the section.
    #[arg(long, default_value_t = 0, requires = "ns_rank")]
    pub boundary: u32,

    #[arg(long, requires = "ns_rank")]
    pub no_section: bool,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Replace the Mukai Gram matrix (for sanity checks).
    #[arg(long, allow_hyphen_values = true)]
    pub mukai_gram: Option<String>,

    /// Replace the BB Gram matrix on ⟨L, Θ⟩.
    #[arg(long, allow_hyphen_values = true)]
    pub bb_gram: Option<String>,
}

fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{s:?} is not an integer"))
}

pub fn parse_int_list(s: &str) -> Result<Vec<BigInt>, String> {
    s.split(',').map(parse_bigint).collect()
}

fn parse_mukai_coords(s: &str) -> Result<[BigInt; 3], String> {
    let v = parse_int_list(s)?;
    let n = v.len();
    v.try_into()
        .map_err(|_| format!("a Mukai vector needs 3 comma-separated integers r,a,b, got {n}"))
}

pub fn parse_int_matrix(s: &str) -> Result<Vec<Vec<BigInt>>, String> {
    s.split(';').map(parse_int_list).collect()
}
