//! The Euler-alignment system: parameters, `(ρ,u) ↔ (σ,u)` conversion,
//! the alignment commutator, and right-hand sides.

mod alignment;
mod params;
mod rhs;
mod scaling;
mod state;

pub use alignment::{alignment_commutator, alignment_direct, DIRECT_MAX_N};
pub use params::{default_mu, kernel_normalization, ModelParams};
pub use rhs::{conserved_tendency, rhs, rhs_with, Dynamics, Tendency};
pub(crate) use rhs::{explicit_rhs, Vars};
pub use scaling::{scaling_check, PressureScaling};
pub use state::{
    dsigma_drho, h_of_sigma, rho_from_sigma, sigma_floor, sigma_from_rho, sigma_of_rho,
    Representation, State, VACUUM_THRESHOLD,
};
