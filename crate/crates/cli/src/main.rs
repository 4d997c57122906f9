//! `monres`: Poincaré series denominators, deviations, Golod checks and
//! complexes for monomial ideals read from JSON files.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monres::{Error, Field, PrimeField, RationalField};

#[derive(Parser, Debug)]
#[command(name = "monres", version, about = "Multigraded homological invariants of monomial quotient rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Coefficient field characteristic: 0 for the rationals, or a prime.
    #[arg(long = "char", global = true, default_value_t = 0)]
    pub characteristic: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Also run the invariant checks for the subcommand; exit 1 if any fails.
    #[arg(long, global = true)]
    pub check: bool,
    /// Worker threads for per-multidegree linear algebra.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Denominator Q_R(y,t) of the Poincaré series.
    Q {
        ideal: PathBuf,
        /// Default: deg m_I + 1.
        #[arg(long)]
        tmax: Option<u32>,
    },
    /// Multigraded Betti numbers of k over R and the Poincaré series.
    Poincare {
        ideal: PathBuf,
        /// Default: deg m_I + 1.
        #[arg(long)]
        tmax: Option<u32>,
    },
    /// Deviations e_{n,j} of R.
    Deviations {
        ideal: PathBuf,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
    },
    /// Signed lcm terms that may occur in Q_R.
    Candidates { ideal: PathBuf },
    /// Check that every term of Q_R sits at an lcm of generators.
    VerifyLcm {
        ideal: PathBuf,
        /// Series JSON to check instead of the computed denominator.
        #[arg(long)]
        series: Option<PathBuf>,
        #[arg(long)]
        tmax: Option<u32>,
    },
    /// Taylor resolution of S/I.
    Taylor { ideal: PathBuf },
    /// Scarf complex of I.
    Scarf { ideal: PathBuf },
    /// Koszul complex over R and its homology.
    Koszul { ideal: PathBuf },
    /// Betti numbers of S/I over S.
    Betti { ideal: PathBuf },
    /// Golod test by comparing P_R with the Golod bound up to t^tmax.
    Golod {
        ideal: PathBuf,
        /// Default: deg m_I + 2.
        #[arg(long)]
        tmax: Option<u32>,
    },
    /// Golod criterion for generic ideals via Scarf faces.
    GolodGeneric { ideal: PathBuf },
    /// Eagon resolution of k over R for generic I.
    Eagon {
        ideal: PathBuf,
        #[arg(long, default_value_t = 4)]
        imax: usize,
    },
    /// LCM-lattice isomorphisms between two ideals.
    LatticeIso {
        source: PathBuf,
        target: PathBuf,
        /// Transport the denominator of the source along every isomorphism.
        #[arg(long)]
        transport: bool,
        /// t-degree for the transported denominators. Default: deg m_I + 1.
        #[arg(long)]
        tdeg: Option<u32>,
    },
    /// Polarization of I.
    Polarize { ideal: PathBuf },
}

/// Rendered output plus whether every requested verification passed.
pub struct Outcome {
    pub text: String,
    pub verified: bool,
}

fn run<F: Field>(field: &F, command: &Command, common: &Common) -> monres::Result<Outcome> {
    commands::execute(field, command, common)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.common.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.common.jobs).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = if cli.common.characteristic == 0 {
        run(&RationalField, &cli.command, &cli.common)
    } else {
        PrimeField::new(cli.common.characteristic).and_then(|f| run(&f, &cli.command, &cli.common))
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Inconsistency(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
