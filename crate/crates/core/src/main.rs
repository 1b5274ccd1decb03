//! Command-line front end over the tower verification library.

use clap::{Args, Parser, Subcommand};
use radtower::cli::{self, RunOptions, SpecFile};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "radtower",
    about = "Exact integral closure of p-th root towers: build the explicit basis, verify \
             ring closure and integrality identities, cross-check against a characteristic \
             polynomial oracle",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Path to the spec file
    #[arg(long)]
    spec: PathBuf,
    /// RNG seed for the oracle cross-check (overrides the spec file)
    #[arg(long)]
    seed: Option<u64>,
    /// Oracle sample count (overrides the spec file)
    #[arg(long)]
    samples: Option<u32>,
    /// Comma-separated candidate list for the k-th root search
    #[arg(long = "k-candidates", value_delimiter = ',')]
    k_candidates: Option<Vec<u32>>,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate every tower hypothesis and name the first failure
    Check(Common),
    /// Emit the closure basis, one entry per line
    Basis(Common),
    /// Full verification: closure, witness identities, oracle cross-check
    Verify(Common),
    /// Express an element over the basis, or report the failure witness
    Reduce {
        /// Element text, e.g. "3^-2 * (w1 - X)^4"
        element: String,
        #[command(flatten)]
        common: Common,
    },
    /// Strip, substitute, certify and rebuild over a k-th root extension
    Pipeline(Common),
    /// Check linear disjointness of the block; with radicands present,
    /// build and verify the mixed tower
    Disjoint(Common),
}

fn load_spec(common: &Common) -> Result<SpecFile, String> {
    let text = std::fs::read_to_string(&common.spec)
        .map_err(|e| format!("cannot read {}: {e}", common.spec.display()))?;
    cli::parse_spec(&text).map_err(|e| format!("{}: {e}", common.spec.display()))
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // keep exit code 2 reserved for verification failures
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let (common, cmd) = match &args.cmd {
        Cmd::Check(c) => (c, cli::Subcommand::Check),
        Cmd::Basis(c) => (c, cli::Subcommand::Basis),
        Cmd::Verify(c) => (c, cli::Subcommand::Verify),
        Cmd::Reduce { element, common } => (common, cli::Subcommand::Reduce(element.clone())),
        Cmd::Pipeline(c) => (c, cli::Subcommand::Pipeline),
        Cmd::Disjoint(c) => (c, cli::Subcommand::Disjoint),
    };

    let spec = match load_spec(common) {
        Ok(spec) => spec,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let opts = RunOptions {
        seed: common.seed,
        samples: common.samples,
        k_candidates: common.k_candidates.clone(),
    };
    let (code, report) = cli::run(&cmd, &spec, &opts);

    match &common.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, report) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{report}"),
    }
    ExitCode::from(code as u8)
}
