use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptloc_cli::config::{Command, RawOptions, RunConfig};
use ptloc_cli::{datasets, output, verify, Format};

#[derive(Parser)]
#[command(name = "ptloc", version, about = "Proper-time localization datasets and checks")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Position-eigenvalue lattice m·z^n_φ over φ
    Figure1(Opts),
    /// Detection probabilities P_n(τ) at mτ = 0, 1, 2, 3
    Figure2(Opts),
    /// P_0, P_1, P_2 against mτ ∈ [0, 4]
    Figure3(Opts),
    /// Position eigenvalues at one extension angle
    Spectrum(Opts),
    /// P_n(τ) with light-cone flags at one proper time
    PovmProb(Opts),
    /// Position and time overlap kernels
    Kernel(Opts),
    /// Tail fits of strictly localized amplitudes
    Tails(Opts),
    /// Run every invariant check and report
    Verify(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Opts {
    #[arg(long, allow_negative_numbers = true)]
    mass: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Extension angle in (−π, π]
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    n_min: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    n_max: Option<i64>,
    #[arg(long)]
    grid_points: Option<usize>,
    /// Tightens every check tolerance (verify) or sets the quadrature target
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl Sub {
    fn split(self) -> (Command, Opts) {
        match self {
            Sub::Figure1(o) => (Command::Figure1, o),
            Sub::Figure2(o) => (Command::Figure2, o),
            Sub::Figure3(o) => (Command::Figure3, o),
            Sub::Spectrum(o) => (Command::Spectrum, o),
            Sub::PovmProb(o) => (Command::PovmProb, o),
            Sub::Kernel(o) => (Command::Kernel, o),
            Sub::Tails(o) => (Command::Tails, o),
            Sub::Verify(o) => (Command::Verify, o),
        }
    }
}

fn write_out(cfg: &RunConfig, text: &str) -> std::io::Result<()> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, o) = cli.command.split();
    let raw = RawOptions {
        mass: o.mass,
        tau: o.tau,
        phi: o.phi,
        n_min: o.n_min,
        n_max: o.n_max,
        grid_points: o.grid_points,
        tol: o.tol,
        seed: o.seed,
        output: o.output,
        format: o.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
    };
    let cfg = match RunConfig::new(command, raw) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ptloc: {e}");
            return ExitCode::from(2);
        }
    };

    let (text, ok) = if command == Command::Verify {
        match verify::run(&cfg) {
            Ok(rep) => {
                for c in rep.checks.iter().filter(|c| !c.passed) {
                    eprintln!("FAIL [{}] {}: measured {:e}, tolerance {:e}", c.group, c.name, c.measured, c.tolerance);
                }
                let text = match cfg.format {
                    Format::Csv => output::report_csv(&rep),
                    Format::Json => output::report_json(&cfg, &rep),
                };
                (text, rep.passed)
            }
            Err(e) => {
                eprintln!("ptloc: {e}");
                return ExitCode::from(1);
            }
        }
    } else {
        match datasets::build(&cfg) {
            Ok(ds) => {
                let text = match cfg.format {
                    Format::Csv => output::dataset_csv(&ds),
                    Format::Json => output::dataset_json(&cfg, &ds),
                };
                (text, true)
            }
            Err(e) => {
                eprintln!("ptloc: {e}");
                return ExitCode::from(1);
            }
        }
    };
    if let Err(e) = write_out(&cfg, &text) {
        eprintln!("ptloc: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
