//! `lbuild`: verifications and drawings for affine buildings over `ℚ^k`.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails (the
//! report is still written), 2 for usage and parse errors.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambda_buildings::root_systems::Tag;
use lambda_buildings::ValuationSpec;

#[derive(Parser, Debug)]
#[command(name = "lbuild", version, about = "Exact checks on affine buildings over lexicographic value groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every sampled check.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Sample count for sampled checks (each command has its own default).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Where to write the JSON report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Root system type: A, B, C, D or G2.
    #[arg(long, value_parser = parse_tag)]
    pub tag: Tag,
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Valuation {
    /// `ℚ(t)` with the degree valuation.
    Degree,
    /// `ℚ(X, Y)` with the lexicographic valuation in `ℚ²`.
    LexMultideg,
    /// `ℚ(X, Y)` with the `X`-degree valuation.
    FirstVar,
}

impl From<Valuation> for ValuationSpec {
    fn from(v: Valuation) -> Self {
        match v {
            Valuation::Degree => ValuationSpec::Degree,
            Valuation::LexMultideg => ValuationSpec::LexMultideg,
            Valuation::FirstVar => ValuationSpec::FirstVar,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct BuildingArgs {
    #[arg(long, value_enum, default_value_t = Valuation::Degree)]
    pub valuation: Valuation,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

fn parse_tag(s: &str) -> Result<Tag, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root system construction and axioms.
    #[command(subcommand)]
    Rootsys(RootsysCmd),
    /// Weyl groups and the extension map `σ`.
    #[command(subcommand)]
    Weyl(WeylCmd),
    /// Model apartments and the affine Weyl action.
    #[command(subcommand)]
    Apartment(ApartmentCmd),
    /// Morphisms of value groups, fields and apartments.
    #[command(subcommand)]
    Morphism(MorphismCmd),
    /// Valued fields and the lattice building.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// The ultrametric norm building.
    #[command(subcommand)]
    Norm(NormCmd),
    /// Morphisms of G-buildings.
    #[command(subcommand)]
    Building(BuildingCmd),
    /// SVG drawing of a rank 2 system, optionally with a sub-system overlaid.
    Render {
        #[arg(long, value_parser = parse_tag, conflicts_with = "embed")]
        tag: Option<Tag>,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Embedding preset or JSON file; draws the ambient system with the sub-system overlaid.
        #[arg(long)]
        embed: Option<String>,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = 400)]
        size: u32,
        #[arg(long, default_value_t = 0.7)]
        extent: f64,
        #[arg(long)]
        no_labels: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Runs every acceptance criterion.
    Suite {
        /// Run twice and compare the serialized reports byte for byte.
        #[arg(long)]
        twice: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum RootsysCmd {
    /// Builds a standard system and checks the root system axioms.
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum WeylCmd {
    /// Enumerates the Weyl group by closure under the simple reflections.
    Enumerate {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Builds `σ: W → W′` for an embedding and checks it.
    Sigma {
        #[arg(long)]
        embed: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum ApartmentCmd {
    /// Checks the affine Weyl action on seeded points.
    Verify {
        #[arg(long, value_parser = parse_tag, required_unless_present = "config")]
        tag: Option<Tag>,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Dimension `k` of `Λ = ℚ^k`.
        #[arg(long, default_value_t = 1)]
        lambda_dim: usize,
        /// TOML apartment description.
        #[arg(long)]
        config: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum MorphismCmd {
    /// Decides condition (△) for an embedding and cross-checks by sampling.
    CheckTriangle {
        #[arg(long)]
        embed: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decides whether a rational matrix preserves the lexicographic order.
    Order {
        /// JSON matrix, inline or as a file.
        #[arg(long)]
        gamma: String,
        #[command(flatten)]
        common: Common,
    },
    /// Verifies `x ↦ −x` as an apartment automorphism.
    Inversion {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Checks `γ ∘ v = v′` for a change of valuation on one field.
    Field {
        #[arg(long, value_enum)]
        source: Valuation,
        #[arg(long, value_enum)]
        target: Valuation,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Valuation axioms, order compatibility and the big-element comparison.
    Valuation {
        #[arg(long, value_enum, default_value_t = Valuation::Degree)]
        valuation: Valuation,
        #[command(flatten)]
        common: Common,
    },
    /// Normal form of the class spanned by the columns of a matrix.
    Canon {
        #[command(flatten)]
        building: BuildingArgs,
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluates a chart at a point, or checks chart well-definedness and the
    /// diagonal characterization on samples.
    Chart {
        #[command(flatten)]
        building: BuildingArgs,
        #[arg(long, requires = "point")]
        matrix: Option<String>,
        #[arg(long, requires = "matrix")]
        point: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Stabilizer of the base class, for one matrix or on samples.
    Stab {
        #[command(flatten)]
        building: BuildingArgs,
        #[arg(long)]
        matrix: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// A common chart through two classes.
    CommonApartment {
        #[command(flatten)]
        building: BuildingArgs,
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        other: String,
        #[command(flatten)]
        common: Common,
    },
    /// Monomial matrices as affine Weyl elements, checked on products.
    Monomial {
        #[command(flatten)]
        building: BuildingArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum NormCmd {
    /// `exp(v) = min(v(a_i) + w_i)` for a vector in an adapted norm.
    Eval {
        #[arg(long, value_enum, default_value_t = Valuation::Degree)]
        valuation: Valuation,
        /// `{"basis": {"entries": …}, "weights": […]}`.
        #[arg(long)]
        norm: String,
        #[arg(long)]
        vector: String,
        #[command(flatten)]
        common: Common,
    },
    /// The norm `f_E(x)`, with `E` the identity unless given.
    Chart {
        #[command(flatten)]
        building: BuildingArgs,
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        common: Common,
    },
    /// Stabilizer of `η_x`: the inequality predicate against class equality.
    Stab {
        #[command(flatten)]
        building: BuildingArgs,
        #[arg(long, requires = "point")]
        matrix: Option<String>,
        #[arg(long, requires = "matrix")]
        point: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Ultrametric axioms and class equality against an evaluation oracle.
    Check {
        #[command(flatten)]
        building: BuildingArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Instance {
    /// Lexicographic to `X`-degree valuation on `ℚ(X, Y)`, `τ` along `pr_1`.
    FieldChange,
    /// The field change along the second coordinate instead; fails.
    FieldChangeSwapped,
    /// `SL_m ↪ SL_n` as the upper-left block.
    BlockEmbed,
    /// The inversion of the apartment against inverse diagonals.
    Inversion,
    /// The identity of one lattice building.
    Identity,
}

#[derive(Subcommand, Debug)]
enum BuildingCmd {
    /// Checks the hypotheses for a building morphism and the sampled consequences.
    Check {
        #[arg(long, value_enum)]
        instance: Instance,
        #[command(flatten)]
        building: BuildingArgs,
        /// Block size for `block-embed`.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, outcome) = commands::dispatch(cli.command);
    match outcome {
        Ok(out) => {
            for line in &out.summary {
                println!("{line}");
            }
            if let Some(path) = &common.report {
                let text = serde_json::to_string_pretty(&out.report).expect("report serializes") + "\n";
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write `{}`: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            println!("{}", if out.passed { "PASS" } else { "FAIL" });
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
