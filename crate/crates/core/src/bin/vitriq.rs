use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vitriq::analysis::read_datapoints_csv;
use vitriq::compiler::{compile_prefix, export_circuit};
use vitriq::fss::{grid_search, ScalingGrid};
use vitriq::sweep::{emit_outputs, run_sweep, SweepConfig};
use vitriq::BitMatrix;

/// Measurement-driven entanglement transition toolkit.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Parent of the run directory.
        #[arg(long, default_value = "runs")]
        out: PathBuf,
        /// Also write the QASM of sample 0 at every (L, |M|) here.
        #[arg(long)]
        emit_circuits: Option<PathBuf>,
    },
    /// Finite-size-scaling collapse of a data point CSV.
    Collapse {
        #[arg(long)]
        data: PathBuf,
        /// TOML grid; the default grid when omitted.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Write the cost surface as CSV.
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Compile a parity-check matrix file.
    Compile {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        emit_qasm: bool,
    },
    /// Run the built-in oracle checks.
    Verify {
        /// Only suites whose name contains this string.
        #[arg(long)]
        only: Option<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> vitriq::Result<ExitCode> {
    match cmd {
        Command::Sweep {
            config,
            out,
            emit_circuits,
        } => {
            let mut cfg = SweepConfig::load(&config)?;
            cfg.emit_circuits = emit_circuits;
            let dir = out.join(cfg.run_dir_name());
            log::info!("writing to {}", dir.display());
            let res = run_sweep(&cfg)?;
            for path in emit_outputs(&res, &dir)? {
                println!("{}", path.display());
            }
            if !res.missing.is_empty() {
                log::warn!("{} tasks produced no order parameter", res.missing.len());
            }
        }
        Command::Collapse {
            data,
            grid,
            surface,
        } => {
            let grid = match grid {
                Some(p) => ScalingGrid::load(&p)?,
                None => ScalingGrid::default(),
            };
            let res = grid_search(&read_datapoints_csv(&data)?, &grid)?;
            print!("{}", res.report());
            if let Some(p) = surface {
                res.surface.write_csv(&p)?;
            }
        }
        Command::Compile { matrix, emit_qasm } => {
            let text = std::fs::read_to_string(&matrix).map_err(|e| vitriq::Error::io(&matrix, e))?;
            let b: BitMatrix = text.parse()?;
            let c = compile_prefix(&b)?;
            if emit_qasm {
                print!("{}", export_circuit(&c)?);
            } else {
                let s = c.stats();
                println!(
                    "qubits = {}\ncnot = {}\nh = {}\nmeasure = {}",
                    s.n_qubits, s.n_cnot, s.n_h, s.n_measure
                );
            }
        }
        Command::Verify { only } => {
            let outcomes = vitriq::verify::run_all(only.as_deref());
            let mut ok = true;
            for o in &outcomes {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                println!("{tag} {:<26} {:>7.2}s  {}", o.name, o.seconds, o.detail);
                ok &= o.passed;
            }
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
