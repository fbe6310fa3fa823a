//! Closed-form objects of the genus-zero quartic two-matrix model coupled to
//! Ising spins: phase-space parametrization, implicit sigma-equation, spectral
//! curve, equilibrium measures, free-energy routes, diagram enumeration, and
//! large-order coefficient asymptotics — every quantity computed by at least
//! two independent routes and cross-validated.

pub mod dd;
pub mod error;
pub mod free_energy;
pub mod phase_space;
pub mod quad;
pub mod series_tools;
pub mod spectral_curve;

pub use error::{Error, Result};
