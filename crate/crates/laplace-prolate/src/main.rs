use clap::{Parser, Subcommand};
use laplace_prolate::cli;
use std::path::PathBuf;

/// Spectral toolkit for the weighted finite Laplace transform on [-1, 1].
#[derive(Parser)]
#[command(name = "laplace-prolate", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute eigenvalues and eigenfunction coefficients; emit CSV rows
    /// n,chi,nu,log10_nu.
    Spectrum {
        /// Bandwidth parameter, c > 0.
        #[arg(long)]
        c: f64,
        /// Weight exponent, alpha > -1.
        #[arg(long)]
        alpha: f64,
        /// Highest mode index to compute.
        #[arg(long)]
        nmax: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also persist the spectrum to this cache file.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Print the built-in nu_0 reference table (c = k pi, alpha = -3/4 and 1).
    Table1 {
        /// Verify against the stored six-digit references; nonzero exit on
        /// mismatch.
        #[arg(long)]
        check: bool,
        /// Reuse cached spectra from this directory (default: the
        /// LAPLACE_PROLATE_CACHE_DIR environment variable).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Emit CSV of log nu_n and the decay bound for one or more bandwidths.
    Decay {
        /// Bandwidth; repeat the flag for several curves.
        #[arg(long = "c", required = true)]
        c_list: Vec<f64>,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the exact operator trace with a partial eigenvalue sum.
    Trace {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        alpha: f64,
        /// Highest index included in the partial sum.
        #[arg(long)]
        nsum: usize,
    },
    /// Project the closed-form image g = L(e^{bt} sin(at)) onto n+1
    /// eigenfunctions and report errors next to the Jacobi comparator.
    ApproxDemo {
        #[arg(long)]
        c: f64,
        /// Oscillation parameter of the source function.
        #[arg(long)]
        a: f64,
        #[arg(long)]
        beta: f64,
        /// Projection order.
        #[arg(long)]
        n: usize,
        /// Points of the sup-norm grid.
        #[arg(long, default_value_t = 1001)]
        grid_points: usize,
        /// Points of the quadrature rule.
        #[arg(long, default_value_t = 400)]
        quad_points: usize,
        /// Optional CSV of pointwise values.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the source function from its transform by the truncated
    /// spectral inverse and report errors.
    InvertDemo {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        beta: f64,
        /// Inversion truncation order.
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1001)]
        grid_points: usize,
        #[arg(long, default_value_t = 400)]
        quad_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(command: Command) -> laplace_prolate::Result<i32> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    match command {
        Command::Spectrum { c, alpha, nmax, out, cache } => {
            cli::cmd_spectrum(c, alpha, nmax, out.as_deref(), cache.as_deref(), &mut w)?;
            Ok(0)
        }
        Command::Table1 { check, cache_dir } => {
            let ok = cli::cmd_table1(check, cache_dir.as_deref(), &mut w)?;
            Ok(if !check || ok { 0 } else { 1 })
        }
        Command::Decay { c_list, alpha, nmax, out } => {
            cli::cmd_decay(&c_list, alpha, nmax, out.as_deref(), &mut w)?;
            Ok(0)
        }
        Command::Trace { c, alpha, nsum } => {
            cli::cmd_trace(c, alpha, nsum, &mut w)?;
            Ok(0)
        }
        Command::ApproxDemo { c, a, beta, n, grid_points, quad_points, out } => {
            cli::cmd_approx_demo(c, a, beta, n, grid_points, quad_points, out.as_deref(), &mut w)?;
            Ok(0)
        }
        Command::InvertDemo { c, a, beta, nmax, grid_points, quad_points, out } => {
            cli::cmd_invert_demo(c, a, beta, nmax, grid_points, quad_points, out.as_deref(), &mut w)?;
            Ok(0)
        }
    }
}

fn main() {
    let args = Cli::parse();
    match run(args.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(cli::exit_code(&err));
        }
    }
}
