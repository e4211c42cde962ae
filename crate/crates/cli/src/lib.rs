//! Configuration parsing, sweep orchestration and CSV output for `dfflab`.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{HubbardConfig, LmgConfig, ThermoConfig};
pub use error::{CliError, Result};
pub use run::{run_fidelity, run_hubbard, run_lmg, run_thermo, Progress};
