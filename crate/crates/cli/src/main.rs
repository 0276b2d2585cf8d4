use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use conformal::arith::Scalar;
use conformal::modes::Window;
use conformal::report::{emit_reports, Format};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "confmod", version, about = "Exact checks for conformal (super)algebras and their modules")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Report format.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    pub format: Format,
    /// Mode window `lo:hi`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_window)]
    pub window: Option<Window>,
    /// ∂-degree cap for submodule probes.
    #[arg(long = "degree-cap", global = true)]
    pub degree_cap: Option<usize>,
    /// Family parameter `name=rational`, e.g. `alpha=1/2`.
    #[arg(long = "param", global = true, value_parser = parse_param)]
    pub params: Vec<(String, Scalar)>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the defining axioms of an algebra or module.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Read n-th products back off the bracket array.
    Ope(OpeArgs),
    /// Locality order of a pair of generators (or a generator and a vector).
    Locality(LocalityArgs),
    /// Mode brackets and the mode action on a module.
    #[command(subcommand)]
    Modes(ModesCmd),
    /// Submodule and singular-vector probes.
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// Brute-force classification.
    #[command(subcommand)]
    Classify(ClassifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// (C2)/(C3) on the product table; with --window also mode Jacobi.
    Algebra(AlgebraSource),
    /// Module axioms, then mode compatibility on the window (default -2:3).
    Module(ModuleSource),
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraSource {
    /// Builtin algebra, e.g. `virasoro` or `current(osp12)`.
    #[arg(long, alias = "algebra", conflicts_with = "file")]
    pub name: Option<String>,
    /// Algebra spec file.
    #[arg(long)]
    pub file: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ModuleSource {
    /// Builtin family, e.g. `virasoro_MVD`; parameters via --param.
    #[arg(long, conflicts_with = "file")]
    pub family: Option<String>,
    /// Module spec file.
    #[arg(long, alias = "module")]
    pub file: Option<String>,
    /// Lie superalgebra for current-type families (`sl2`, `osp12`).
    #[arg(long)]
    pub lie: Option<String>,
}

#[derive(Args, Debug)]
pub struct OpeArgs {
    #[command(flatten)]
    pub algebra: AlgebraSource,
    /// Two elements separated by a comma, e.g. `L,L`.
    #[arg(long)]
    pub pair: String,
    /// `a..b`, `a..=b` or a single index.
    #[arg(long, default_value = "0..4")]
    pub j: String,
}

#[derive(Args, Debug)]
pub struct LocalityArgs {
    /// Builtin algebra name or algebra spec file.
    #[arg(long, default_value = "virasoro")]
    pub algebra: String,
    /// Builtin family; the second entry of --pair is then a module element.
    #[arg(long, conflicts_with = "module")]
    pub family: Option<String>,
    /// Module spec file, used like --family.
    #[arg(long)]
    pub module: Option<String>,
    #[arg(long)]
    pub lie: Option<String>,
    #[arg(long)]
    pub pair: String,
}

#[derive(Subcommand, Debug)]
pub enum ModesCmd {
    /// `[x_(m), y_(n)]`, e.g. `--left L:2 --right L:1`.
    Bracket {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Mode action on V(M): mode compatibility on the window, and
    /// `x_(m) v_(n)` when --left and --right are given.
    Act {
        #[command(flatten)]
        module: ModuleSource,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ProbeCmd {
    /// Is the C[∂]-span of the candidates a submodule? With --contains,
    /// search the submodule generated by the first candidate instead.
    Submodule {
        #[command(flatten)]
        module: ModuleSource,
        #[arg(long = "candidate", required = true)]
        candidates: Vec<String>,
        #[arg(long)]
        contains: Option<String>,
    },
    /// Vectors killed by every a_(n), n ≥ level.
    Singular {
        #[command(flatten)]
        module: ModuleSource,
        #[arg(long)]
        level: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum ClassifyCmd {
    /// Rank-1 classification (rank (1|1), experimental, for neveu_schwarz).
    Rank1 {
        #[arg(long, default_value = "virasoro")]
        algebra: String,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
        #[arg(long, default_value_t = 2)]
        deg: usize,
        /// Include the per-branch Gröbner bases.
        #[arg(long)]
        branch_report: bool,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_window(s: &str) -> Result<Window, String> {
    s.parse().map_err(|e: conformal::Error| e.to_string())
}

fn parse_param(s: &str) -> Result<(String, Scalar), String> {
    conformal::parse::parse_param(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(mut reports) => {
            let elapsed = start.elapsed();
            for r in &mut reports {
                r.elapsed.get_or_insert(elapsed);
            }
            print!("{}", emit_reports(&reports, cli.global.format));
            if reports.iter().all(|r| r.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
