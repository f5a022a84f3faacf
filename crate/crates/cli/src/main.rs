use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use freeconv_cli::commands::{self, ConvolveMode, Nodes, Route};
use freeconv_cli::verify::{self, Suite, Tamper};
use freeconv_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "freeconv", version, about = "Classical vs. free convolution of finitely supported measures")]
struct Cli {
    /// Worker threads for grid and quadrature evaluation; FREECONV_THREADS
    /// takes precedence when set.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the moments m_1..m_N of a measure.
    Moments {
        measure: PathBuf,
        #[arg(long, short = 'n', default_value_t = 16)]
        order: usize,
    },
    /// Print the free cumulants κ_1..κ_N of a measure.
    Cumulants {
        measure: PathBuf,
        #[arg(long, short = 'n', default_value_t = 16)]
        order: usize,
    },
    /// Classical convolution (atoms) or free convolution (moments).
    Convolve {
        mu: PathBuf,
        nu: PathBuf,
        #[arg(long, value_enum, default_value_t = ConvolveMode::Free)]
        mode: ConvolveMode,
        #[arg(long, short = 'n', default_value_t = 16)]
        order: usize,
        /// Emit the classical convolution as measure JSON.
        #[arg(long)]
        json: bool,
    },
    /// Moments (JSON) or density grid (CSV) of the convolution comparison measure.
    Ccm {
        mu: PathBuf,
        nu: PathBuf,
        /// Table of moments with n_mu, n_nu <= N.
        #[arg(long, value_name = "N", conflicts_with = "grid", required_unless_present = "grid")]
        moments: Option<usize>,
        /// Density grid size, e.g. 64x64.
        #[arg(long, value_name = "NAxNB")]
        grid: Option<String>,
        /// Grid node placement.
        #[arg(long, value_enum, default_value_t = Nodes::Uniform)]
        nodes: Nodes,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Route::Series)]
        route: Route,
    },
    /// Eigenvalue density of a measure's embedding: grid (CSV) or moments.
    Omega {
        measure: PathBuf,
        #[arg(long, value_name = "NAxNB", conflicts_with = "moments", required_unless_present = "moments")]
        grid: Option<String>,
        /// Grid node placement.
        #[arg(long, value_enum, default_value_t = Nodes::Uniform)]
        nodes: Nodes,
        /// Compare trace-formula and quadrature moments for k, l <= K.
        #[arg(long, value_name = "K")]
        moments: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run the seeded verification suites; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Tamper::None, hide = true)]
        tamper: Tamper,
    },
}

fn configure_threads(flag: Option<usize>) -> CliResult<()> {
    let threads = match std::env::var("FREECONV_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("FREECONV_THREADS must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => flag,
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Input("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(())
}

/// Runs the command; a failed verification still yields its report.
fn run(cli: &Cli) -> CliResult<(String, Option<CliError>)> {
    let text = match &cli.command {
        Command::Moments { measure, order } => commands::moments(&commands::read_measure(measure)?, *order),
        Command::Cumulants { measure, order } => commands::cumulants(&commands::read_measure(measure)?, *order),
        Command::Convolve {
            mu,
            nu,
            mode,
            order,
            json,
        } => commands::convolve(
            &commands::read_measure(mu)?,
            &commands::read_measure(nu)?,
            *mode,
            *order,
            *json,
        ),
        Command::Ccm {
            mu,
            nu,
            moments,
            grid,
            nodes,
            tol,
            route,
        } => {
            let (mu, nu) = (commands::read_measure(mu)?, commands::read_measure(nu)?);
            match (moments, grid) {
                (Some(n), _) => commands::ccm_moments(&mu, &nu, *n, *route, *tol)?,
                (None, Some(g)) => {
                    let (na, nb) = commands::parse_grid(g)?;
                    commands::ccm_grid(&mu, &nu, na, nb, *nodes, *tol)?
                }
                (None, None) => unreachable!("clap requires one of --moments, --grid"),
            }
        }
        Command::Omega {
            measure,
            grid,
            nodes,
            moments,
            tol,
        } => {
            let mu = commands::read_measure(measure)?;
            match (moments, grid) {
                (Some(k), _) => commands::omega_moments(&mu, *k, *tol)?,
                (None, Some(g)) => {
                    let (na, nb) = commands::parse_grid(g)?;
                    commands::omega_grid(&mu, na, nb, *nodes)?
                }
                (None, None) => unreachable!("clap requires one of --moments, --grid"),
            }
        }
        Command::Verify { suite, seed, tamper } => {
            let report = verify::run(*suite, *seed, *tamper);
            let failure = (!report.passed()).then(|| {
                let names: Vec<String> = report
                    .failures()
                    .iter()
                    .map(|c| format!("{}/{}", c.suite, c.name))
                    .collect();
                CliError::Verification(names.join(", "))
            });
            return Ok((report.render(), failure));
        }
    };
    Ok((text, None))
}

fn emit(text: &str, output: Option<&PathBuf>) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|_| run(&cli)).and_then(|(text, failure)| {
        emit(&text, cli.output.as_ref())?;
        failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("freeconv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
