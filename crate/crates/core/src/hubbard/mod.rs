//! Half-filled one-dimensional Hubbard model through its Bethe-ansatz
//! solution, and the fidelity of its momentum-space density of state.

pub mod bae;
pub mod bessel;
pub mod dos;
pub mod exact;
pub mod params;
pub mod sweep;
pub mod thermo;

pub use bae::{
    continuation_sweep, energy, interaction_grid, solve_bae, solve_bae_with, BetheRoots,
    BetheSystem, ContinuationError, SolverOptions,
};
pub use bessel::bessel_j0;
pub use dos::{density_of_state, resample_to_grid, DensityOfStates};
pub use exact::exact_ground_energy_small;
pub use params::{ground_state_quantum_numbers, HubbardParams, QuantumNumbers};
pub use sweep::{fidelity_curve_from_roots, hubbard_dff_sweep, HubbardSweep, HubbardSweepOutput};
pub use thermo::{thermodynamic_dos, thermodynamic_dos_with, ThermoOptions};
