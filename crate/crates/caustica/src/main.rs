use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use caustica::cli::{self, CliOverrides};

#[derive(Parser)]
#[command(
    name = "caustica",
    about = "Joint spectra, spectral-projector sums, and sup-norm scaling on the disk and surfaces of revolution",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Output directory (overrides the config's out_dir)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Cache file path (overrides CAUSTICA_CACHE and the config)
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Ignore any persistent cache (compute everything fresh, in memory)
    #[arg(long)]
    seedless: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the special-function verification suite
    SpecfunCheck {
        /// Emit the table as JSON
        #[arg(long)]
        json: bool,
    },
    /// Sweep λ levels, measure region sups, fit the growth exponent
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the per-band lemma checks at one λ
    Lemmas {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classify the action curve of a revolution profile
    Genericity {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn overrides(common: &CommonArgs) -> CliOverrides {
    CliOverrides {
        out: common.out.clone(),
        workers: common.workers,
        cache: common.cache.clone(),
        seedless: common.seedless,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::SpecfunCheck { json } => cli::cmd_specfun_check(*json),
        Command::Sweep { config, common } => {
            setup_workers(common.workers);
            cli::cmd_sweep(config, &overrides(common))
        }
        Command::Lemmas {
            config,
            lambda,
            common,
        } => {
            setup_workers(common.workers);
            cli::cmd_lemmas(config, *lambda, &overrides(common))
        }
        Command::Genericity { config, common } => cli::cmd_genericity(config, &overrides(common)),
    };
    ExitCode::from(code as u8)
}

fn setup_workers(workers: Option<usize>) {
    if let Some(w) = workers {
        if w > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
        }
    }
}
