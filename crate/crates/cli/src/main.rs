use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ltphi::config::Settings;
use ltphi::error::{CliError, EXIT_PROPERTY};
use ltphi::spec::ModuleSpec;
use ltphi::{commands, suites};

#[derive(Parser, Debug)]
#[command(name = "ltphi", version, about = "Lubin-Tate (phi, Gamma)-module computations at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Residue characteristic.
    #[arg(long, global = true)]
    p: Option<String>,
    /// Degree of F over Q_p (unramified, π = p).
    #[arg(long, global = true)]
    r: Option<String>,
    /// Inertia degree of K over F.
    #[arg(long, global = true)]
    s: Option<String>,
    /// standard, multiplicative, or coefficients of X, X^2, ... (e.g. 3,0,1)
    #[arg(long, global = true)]
    f: Option<String>,
    /// Degree cutoff.
    #[arg(long = "N", global = true)]
    n: Option<String>,
    /// Uniformizer-adic precision.
    #[arg(long = "M", global = true)]
    m: Option<String>,
    /// Seed for the random cases.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// key=value file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Suite for verify: all, group-law, gamma-phi, vd-charp, lift, two-tower.
    #[arg(long, global = true)]
    suite: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the formal group law F(X, Y).
    GroupLaw,
    /// Print the endomorphism [a](X).
    LtMul {
        #[arg(allow_hyphen_values = true)]
        a: i64,
    },
    /// Torsion polynomial of the given level and its Eisenstein check.
    Torsion {
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// The norm criterion on the unramified and two quadratic examples.
    NormCheck,
    /// The action u -> [c](u) on k_K((u)).
    GammaAct {
        #[arg(allow_hyphen_values = true)]
        c: i64,
    },
    /// Solutions of phi(x) = A x for a module-spec file.
    VSolve { file: PathBuf },
    /// Descent of a Galois representation given by its generator matrix.
    DDescend {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        level: u32,
    },
    /// Diagonal projective-limit round trip, optionally with a fault.
    Projlim {
        #[arg(long)]
        fault_digit: Option<usize>,
    },
    /// Phi and Psi of a module-spec file and the round-trip verdict.
    Compare { file: PathBuf },
    /// Run a verification suite.
    Verify,
}

fn read_spec(path: &PathBuf) -> Result<ModuleSpec, CliError> {
    ModuleSpec::parse(&std::fs::read_to_string(path)?)
}

fn run(cli: &Cli) -> Result<ltphi::report::Report, CliError> {
    let mut settings = match &cli.config {
        Some(path) => Settings::read(path)?,
        None => Settings::default(),
    };
    let flags = [
        ("p", &cli.p),
        ("r", &cli.r),
        ("s", &cli.s),
        ("f", &cli.f),
        ("N", &cli.n),
        ("M", &cli.m),
        ("seed", &cli.seed),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            settings.set(key, v)?;
        }
    }
    let cfg = settings.resolve()?;
    match &cli.command {
        Command::GroupLaw => commands::group_law(&cfg),
        Command::LtMul { a } => commands::lt_mul(&cfg, *a),
        Command::Torsion { level } => commands::torsion(&cfg, *level),
        Command::NormCheck => commands::norm_check(&cfg),
        Command::GammaAct { c } => commands::gamma_act(&cfg, *c),
        Command::VSolve { file } => commands::v_solve(&cfg, &read_spec(file)?),
        Command::DDescend { file, level } => commands::d_descend(&cfg, &read_spec(file)?, *level),
        Command::Projlim { fault_digit } => commands::projlim(&cfg, *fault_digit),
        Command::Compare { file } => commands::compare(&cfg, &read_spec(file)?),
        Command::Verify => suites::verify(&cfg, cli.suite.as_deref().unwrap_or("all")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.text());
            if report.failures() > 0 {
                ExitCode::from(EXIT_PROPERTY as u8)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
