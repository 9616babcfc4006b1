//! Periodic FFT grid, Fourier multipliers and Littlewood-Paley blocks.

mod field;
mod grid;
mod littlewood_paley;
mod operators;

pub use field::{Field, SpectralField};
pub use grid::Grid;
pub use littlewood_paley::{chi, phi, LpDecomp};
pub use operators::{
    dealias, dealias_physical, fractional_laplacian, gradient_part, heat_semigroup, is_resolved,
    lambda_inv_div, lambda_power, leray_project, product, spectral_derivative, Derivative,
};
pub(crate) use operators::{heat_multiplier_unchecked, physical_product};
