//! Time evolution of first and second moments.
//!
//! Two independent routes are provided: the spectral closed form
//! ([`closed`]) and fixed-step RK4 on the raw equations of motion ([`rk4`]).

pub mod closed;
pub mod rk4;
pub mod spectral;
pub mod trajectory;

pub use closed::{
    asymptotic_variances, asymptotic_variances_spectral, evolve_closed, mean_evolution,
    pure_condition_residual, variance_evolution_closed, ClosedForm,
};
pub use rk4::{default_step, integrate_moments_rk4, max_step};
pub use spectral::{DiffusionVector, MomentVector, SpectralDecomposition};
pub use trajectory::{
    evolve_closed_trajectory, max_relative_discrepancy, Diagnostics, Trajectory, Warning,
};
