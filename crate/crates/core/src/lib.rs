//! Density-functional fidelity (DFF) and its susceptibility for ground-state
//! density distributions, with two model back ends:
//!
//! * [`lmg`]: Lipkin-Meshkov-Glick model by exact diagonalization in the
//!   `S_z` basis, fidelity of `n(s_z)` across the field `h`;
//! * [`hubbard`]: half-filled 1D Hubbard model through its Bethe-ansatz
//!   equations, fidelity of the momentum-space density of state across `U`.

pub mod error;
pub mod fidelity;
pub mod hubbard;
pub mod lmg;
pub mod quadrature;
pub mod tridiagonal;

pub use error::{Error, Result};
pub use fidelity::{
    central_difference, central_difference_density, fidelity, pair_susceptibilities,
    susceptibility_from_derivative, susceptibility_from_fidelity, DensityDistribution,
    FidelityCurve, FidelityRecord, Normalization, Susceptibility,
};
