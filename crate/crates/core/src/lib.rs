//! Damped quantum harmonic oscillator in the Lindblad theory of open
//! systems, at the level of Gaussian states.
//!
//! A state is fully described by its means and its three second moments.
//! The crate evolves those moments in closed form and with RK4, tracks
//! purity, entropy and energy, characterises the environments that keep a
//! correlated coherent state pure, and evaluates the phase-space picture.
//!
//! ```
//! use oscillad::{purity::PureFamily, OscillatorParams};
//!
//! let params = OscillatorParams::unit(0.1, 0.0).unwrap();
//! let family = PureFamily::new(&params).unwrap();
//! assert!((family.coefficients.d_qq() - 0.05).abs() < 1e-15);
//! ```

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod params;
pub mod phasespace;
pub mod purity;
pub mod state;

pub use error::{Error, Result};
pub use params::{DiffusionCoefficients, OscillatorParams};
pub use state::{Covariances, GaussianState};
