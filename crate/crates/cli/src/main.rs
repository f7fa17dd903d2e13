//! `cm-forms`: command line front end for the normal-form toolkit.
//!
//! Exit codes: 0 when the command succeeds, 1 when a check fails or a
//! computation is refused, 2 on usage or parse errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cm_forms::classification::{DimFormula, RootSystem};
use cm_forms::{FormId, GroupSpec};

#[derive(Parser, Debug)]
#[command(name = "cm-forms", version, about = "Exact invariants and normal-form identities for unitary stability groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit a versioned JSON result instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to FILE (emit-form writes the surface document).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Basis of the invariant polynomials of one bidegree.
    Invariants(InvariantsArgs),
    /// Whether a polynomial is annihilated by a group's Lie algebra.
    InvarianceCheck(InvarianceCheckArgs),
    /// Check the trace identities on a surface with scalar coefficients.
    NfCheck(SurfaceArgs),
    /// Linear constraints the trace identities impose on unknown coefficients.
    NfConstraints(SurfaceArgs),
    /// Emit a truncated surface in one of the special forms.
    EmitForm(SurfaceArgs),
    /// Match simple algebras against a dimension formula.
    ClassifyScan(ClassifyScanArgs),
    /// Block structures n = n₁ + … + n_m with Σ nⱼ² ≥ d.
    Blocks(BlocksArgs),
    /// Verify Σ nⱼ² ≤ n² − 2n over all factorizations up to a bound.
    FactorLemma(FactorLemmaArgs),
    /// Weyl dimension of an irreducible representation.
    WeylDim(WeylDimArgs),
    /// All irreducible dimensions up to a bound.
    IrrepDims(IrrepDimsArgs),
}

fn parse_group(s: &str) -> Result<GroupSpec, String> {
    s.parse().map_err(|e: cm_forms::Error| e.to_string())
}

fn parse_form(s: &str) -> Result<FormId, String> {
    s.parse().map_err(|e: cm_forms::Error| e.to_string())
}

fn parse_formula(s: &str) -> Result<DimFormula, String> {
    s.parse().map_err(|e: cm_forms::Error| e.to_string())
}

fn parse_root_system(s: &str) -> Result<RootSystem, String> {
    RootSystem::parse(s).map_err(|e| e.to_string())
}

/// Dynkin labels of a highest weight.
#[derive(Clone, Debug)]
pub struct Weight(pub Vec<i64>);

fn parse_weight(s: &str) -> Result<Weight, String> {
    s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| format!("invalid label {t:?}"))).collect::<Result<_, _>>().map(Weight)
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: GroupSpec,
    #[arg(long, num_args = 2, value_names = ["K", "L"], required = true)]
    pub bidegree: Vec<u32>,
}

#[derive(Args, Debug)]
pub struct InvarianceCheckArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: GroupSpec,
    /// Polynomial in the text grammar, e.g. "z1^2 + z2^2 + z3^2".
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub poly: Option<String>,
    /// Surface document whose body is checked.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    /// Read the surface from a JSON document.
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["form", "poly"])]
    pub input: Option<PathBuf>,
    /// a1 | a2 | a3:k1,k2 | b1 | b2 | b3 | prior-un | prior-u1xu
    #[arg(long, value_parser = parse_form, conflicts_with = "poly")]
    pub form: Option<FormId>,
    /// Body polynomial in the text grammar (requires --n).
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub max_weight: u32,
    #[arg(long, default_value_t = 0)]
    pub u_cap: u32,
    /// Coefficient assignment for --form, e.g. "1,1,0=1" or "2,3,0@u1=(1/2+1i)".
    /// Without any, each slot gets a fresh real unknown (or a re/im pair).
    #[arg(long, value_name = "SLOT=VALUE")]
    pub coeff: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ClassifyScanArgs {
    /// n2-2n+1 | n2-2n | n2-2n-1
    #[arg(long, value_parser = parse_formula)]
    pub dim_formula: DimFormula,
    #[arg(long, default_value_t = 50)]
    pub n_max: u64,
}

#[derive(Args, Debug)]
pub struct BlocksArgs {
    #[arg(long)]
    pub n: usize,
    /// Group dimension d.
    #[arg(long)]
    pub dim: usize,
}

#[derive(Args, Debug)]
pub struct FactorLemmaArgs {
    #[arg(long, default_value_t = 200)]
    pub n_max: u64,
}

#[derive(Args, Debug)]
pub struct WeylDimArgs {
    /// A<r> | B<r> | C<r> | D<r>
    #[arg(long, value_parser = parse_root_system)]
    pub root_system: RootSystem,
    /// Dynkin labels, comma separated.
    #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
    pub weight: Weight,
}

#[derive(Args, Debug)]
pub struct IrrepDimsArgs {
    #[arg(long, value_parser = parse_root_system)]
    pub root_system: RootSystem,
    #[arg(long)]
    pub bound: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(commands::run(&cli))
}
