use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use weil2_cli::commands::{fourier, lfunction, parse_fibers};
use weil2_cli::spec::{ModuleSpec, ModuleSpecFile, Overrides};
use weil2_cli::suites::{report, run_suite, Suite, SuiteConfig};
use weil2_cli::CliError;

#[derive(Parser)]
#[command(name = "weil2", version, about = "p-adic cohomology of exponential sums on the affine line")]
struct Cli {
    /// Truncation order of the Frobenius series.
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Target precision in v_q units.
    #[arg(long, global = true)]
    precision: Option<i64>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Include wall-clock timings (makes reports run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Character sums, L-polynomial and Frobenius on H¹ for one module.
    Lfunction {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// H¹ of M ⊗ L_{ax} at each listed fibre (`a` or `c0.c1` for F_{p^2}).
    Fourier {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        fibers: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: &Path, o: Overrides) -> Result<ModuleSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {}", path.display(), e)))?;
    ModuleSpecFile::from_json(&text)?.build(o)
}

fn write(path: &Path, doc: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("reports serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Spec(format!("{}: {}", path.display(), e)))
}

fn error_doc(command: &str, e: &CliError) -> Value {
    let status = match e {
        CliError::Spec(_) => "spec-error",
        CliError::Regime(_) => "regime-violation",
        CliError::Verification(_) => "verification-failure",
    };
    json!({ "command": command, "status": status, "error": e.to_string() })
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let o = Overrides { trunc: cli.trunc, precision: cli.precision };
    let t0 = Instant::now();
    let (command, out, result) = match &cli.cmd {
        Cmd::Lfunction { spec, n_max, out } => ("lfunction", out, load(spec, o).and_then(|s| lfunction(&s, *n_max))),
        Cmd::Fourier { spec, fibers, out } => (
            "fourier",
            out,
            parse_fibers(fibers).and_then(|f| load(spec, o).and_then(|s| fourier(&s, &f))),
        ),
        Cmd::Verify { suite, out } => {
            if let Some(p) = cli.precision {
                if p < 1 {
                    return Err(CliError::Spec(format!("precision {} must be positive", p)));
                }
            }
            let cfg = SuiteConfig { seed: cli.seed, precision: cli.precision, trunc: cli.trunc, timings: cli.timings };
            let checks = run_suite(*suite, &cfg);
            let pass = checks.iter().all(|c| c.pass());
            ("verify", out, Ok((report(*suite, &cfg, &checks), pass)))
        }
    };
    match result {
        Ok((mut doc, pass)) => {
            if cli.timings {
                doc["runtime_s"] = json!(format!("{:.3}", t0.elapsed().as_secs_f64()));
            }
            write(out, &doc)?;
            if pass {
                Ok(true)
            } else {
                Err(CliError::Verification(format!("{} checks failed; see {}", command, out.display())))
            }
        }
        Err(e) => {
            // Best effort: the error document is secondary to the exit status.
            let _ = write(out, &error_doc(command, &e));
            Err(e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("weil2: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
