use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghcloud::rational::parse_rational;
use ghcloud::Rational;

mod commands;
mod files;
mod output;
mod verify;

/// Exact Gromov–Hausdorff tools for finite metric spaces.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or
/// input errors. `GH_WORKERS` sets the number of worker threads.
#[derive(Parser, Debug)]
#[command(name = "ghcloud", version)]
struct Cli {
    /// Emit header-less CSV rows instead of a report.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a `.msp` file and list every violated axiom.
    Validate { space: PathBuf },
    /// Exact Gromov–Hausdorff distance with an optimal correspondence.
    Gh(GhArgs),
    /// Glue spaces along correspondences and report the realized Hausdorff distances.
    Glue(GlueArgs),
    /// Discrete hedgehogs.
    #[command(subcommand)]
    Hedgehog(HedgehogCommand),
    /// Two needle families at distance zero that are not isometric.
    Needles(NeedlesArgs),
    /// Finite-depth thread limit of a chain spec.
    Limit {
        chain: PathBuf,
        /// Write the limit space here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample d(λ) = d_GH(X, λX) and compare with ½|λ−1|·diam X.
    Probe {
        space: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_rational, required = true)]
        lambdas: Vec<Rational>,
    },
    /// λⁿX with its tail bound, checked against d_GH(λᵐX, λᵏX) for k < m ≤ n.
    Center {
        space: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        lambda: Rational,
        #[arg(long)]
        n: u32,
        /// Also check d(λᵏ) against the geometric bound for k ≤ n.
        #[arg(long)]
        geometric: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Stabilizer of a space (or of a hedgehog spec with `--hedgehog`).
    Stab {
        input: PathBuf,
        /// Treat the input as a `.hh` spec.
        #[arg(long)]
        hedgehog: bool,
        /// Extra scale factors to test.
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        samples: Vec<Rational>,
    },
    /// Deterministic random inputs.
    Generate(GenerateArgs),
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct GhArgs {
    x: PathBuf,
    y: PathBuf,
    /// Largest number of points allowed on either side.
    #[arg(long, default_value_t = ghcloud::gh::DEFAULT_CAP)]
    cap: usize,
    /// Also minimize over every correspondence and compare (n·m ≤ 20).
    #[arg(long)]
    enumerate_oracle: bool,
    /// Search on one thread.
    #[arg(long)]
    sequential: bool,
    /// Write the optimal correspondence here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GlueSource {
    /// Two spaces and a correspondence between them.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "R"])]
    pair: Option<Vec<PathBuf>>,
    /// A `.tree` file.
    #[arg(long)]
    tree: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GlueArgs {
    #[command(flatten)]
    source: GlueSource,
    /// Write the carrier here and its provenance to `<output>.prov`.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum HedgehogCommand {
    /// Print the compiled space of a `.hh` spec.
    Compile { spec: PathBuf },
    /// Whether two specs give isometric hedgehogs.
    Iso { a: PathBuf, b: PathBuf },
    /// Bucket correspondence for step ε.
    Bucket {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Center-location checks for two hedgehogs glued along R.
    Center {
        a: PathBuf,
        b: PathBuf,
        r: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        radius: Rational,
    },
}

#[derive(Args, Debug)]
struct NeedlesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// A single index; all of `1..=N` when omitted.
    #[arg(long)]
    m: Option<usize>,
    /// Write `X.msp`, `Y.msp` and `map.txt` into this directory.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GenerateKind {
    RandomMetric,
    GridHedgehog,
    DenseSpec,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GenerateKind,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Points of a random metric.
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Coordinates range over `0..=bound` in steps of `1/denom`.
    #[arg(long, default_value_t = 6)]
    bound: i64,
    #[arg(long, default_value_t = 1)]
    denom: i64,
    /// Grid step of a grid hedgehog.
    #[arg(long, value_parser = parse_rational, default_value = "1")]
    eps: Rational,
    /// Longest needle of a grid hedgehog or dense spec.
    #[arg(long, value_parser = parse_rational, default_value = "4")]
    max: Rational,
    /// Needles of a dense spec.
    #[arg(long, default_value_t = 8)]
    count: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn configure_workers() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("GH_WORKERS") {
        let n: usize = value
            .parse()
            .map_err(|_| anyhow::anyhow!("GH_WORKERS must be a positive integer, got `{value}`"))?;
        if n == 0 {
            anyhow::bail!("GH_WORKERS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_workers().and_then(|()| commands::run(cli.command, cli.csv));
    match result {
        Ok(commands::Status::Pass) => ExitCode::SUCCESS,
        Ok(commands::Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
