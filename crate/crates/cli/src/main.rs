use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dfflab_cli::{
    run_fidelity, run_hubbard, run_lmg, run_thermo, CliError, HubbardConfig, LmgConfig, Progress,
    ThermoConfig,
};

#[derive(Parser)]
#[command(
    name = "dfflab",
    version,
    about = "Density-distribution fidelity sweeps"
)]
struct Cli {
    /// Progress messages on standard error.
    #[arg(long, global = true)]
    progress: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// LMG field sweep: lmg_density.csv, lmg_dff.csv.
    Lmg {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Hubbard continuation in U: hubbard_roots.csv, hubbard_dos.csv, hubbard_dff.csv.
    Hubbard {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Thermodynamic-limit density of state: thermo_dos.csv.
    ThermoDos {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Fidelity and susceptibility between two stored distributions.
    Fidelity {
        a: PathBuf,
        b: PathBuf,
        /// Parameter spacing between the two distributions.
        #[arg(long)]
        delta: f64,
        /// Parameter value to select from a three-column `a`.
        #[arg(long)]
        at_a: Option<f64>,
        /// Parameter value to select from a three-column `b`.
        #[arg(long)]
        at_b: Option<f64>,
        /// Rescale inputs instead of rejecting weights that do not sum to 1.
        #[arg(long)]
        renormalize: bool,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let progress = Progress(cli.progress);
    match cli.command {
        Command::Lmg { config, output_dir } => {
            let cfg = LmgConfig::parse(&read(&config)?)?;
            let dir = output_dir.unwrap_or_else(|| cfg.output_dir.clone());
            let run = run_lmg(&cfg, &dir, progress)?;
            print_files(&run.files);
            if let (Some(min), Some(max)) = (
                run.output.curve.min_fidelity(),
                run.output.curve.max_susceptibility(),
            ) {
                println!(
                    "min F = {:.16e} at h = {:.16e}",
                    min.fidelity, min.parameter
                );
                println!(
                    "max chi_eq5 = {:.16e} at h = {:.16e}",
                    max.chi_fidelity, max.parameter
                );
            }
        }
        Command::Hubbard { config, output_dir } => {
            let cfg = HubbardConfig::parse(&read(&config)?)?;
            let dir = output_dir.unwrap_or_else(|| cfg.output_dir.clone());
            let run = run_hubbard(&cfg, &dir, progress)?;
            print_files(&run.files);
            println!("solved {} interaction values", run.roots.len());
            if let Some(max) = run.curve.max_susceptibility() {
                println!(
                    "max chi_eq5 = {:.16e} at U = {:.16e}",
                    max.chi_fidelity, max.parameter
                );
            }
        }
        Command::ThermoDos { config, output_dir } => {
            let cfg = ThermoConfig::parse(&read(&config)?)?;
            let dir = output_dir.unwrap_or_else(|| cfg.output_dir.clone());
            let run = run_thermo(&cfg, &dir, progress)?;
            print_files(&run.files);
        }
        Command::Fidelity {
            a,
            b,
            delta,
            at_a,
            at_b,
            renormalize,
        } => {
            let (f, chi) = run_fidelity(&a, &b, delta, (at_a, at_b), renormalize)?;
            println!("F,chi_eq5");
            println!("{f:.16e},{chi:.16e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // one tab-separated line: tag, category, message
            eprintln!(
                "dfflab-error\t{}\t{}",
                e.kind(),
                e.to_string().replace(['\n', '\t'], " ")
            );
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
