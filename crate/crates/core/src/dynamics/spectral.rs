//! Spectral form of the covariance equations of motion.
//!
//! In the scaled variables `X = (m omega s_qq, s_pp / m omega, s_pq)` the
//! covariances obey `dX/dt = A X + D` with a constant 3x3 drift `A`.
//! `A = T K T` where `T` is an involution and `K` is diagonal, so the
//! propagator is `exp(A t) = T exp(K t) T`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{DiffusionCoefficients, OscillatorParams};
use crate::state::Covariances;

/// Imaginary residue allowed in products that must be real.
pub const REALITY_TOL: f64 = 1e-10;

/// Covariances in action units: `(m omega s_qq, s_pp / m omega, s_pq)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentVector(pub Vector3<f64>);

impl MomentVector {
    pub fn from_covariances(cov: &Covariances, params: &OscillatorParams) -> Self {
        let mw = params.m() * params.omega();
        Self(Vector3::new(mw * cov.s_qq, cov.s_pp / mw, cov.s_pq))
    }

    pub fn to_covariances(&self, params: &OscillatorParams) -> Covariances {
        let mw = params.m() * params.omega();
        Covariances::new(self.0[0] / mw, self.0[1] * mw, self.0[2])
    }
}

/// Diffusion source term `(2 m omega D_qq, 2 D_pp / m omega, 2 D_pq)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionVector(pub Vector3<f64>);

impl DiffusionVector {
    pub fn from_coefficients(d: &DiffusionCoefficients, params: &OscillatorParams) -> Self {
        let mw = params.m() * params.omega();
        Self(Vector3::new(2.0 * mw * d.d_qq(), 2.0 * d.d_pp() / mw, 2.0 * d.d_pq()))
    }
}

/// The eigenvector matrix `T` and the diagonal rates `K` of the covariance
/// drift in the underdamped regime.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    t_matrix: Matrix3<Complex64>,
    k_diag: [Complex64; 3],
}

impl SpectralDecomposition {
    pub fn new(params: &OscillatorParams) -> Result<Self> {
        let big_omega = params.damped_frequency()?;
        let (w, mu, lambda) = (params.omega(), params.mu(), params.lambda());
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let prefactor = c(0.0, 2.0 * big_omega).inv();
        #[rustfmt::skip]
        let t_matrix = Matrix3::new(
            c(mu, big_omega),  c(mu, -big_omega), c(2.0 * w, 0.0),
            c(mu, -big_omega), c(mu, big_omega),  c(2.0 * w, 0.0),
            c(-w, 0.0),        c(-w, 0.0),        c(-2.0 * mu, 0.0),
        ) * prefactor;
        let k_diag = [
            c(-2.0 * lambda, 2.0 * big_omega),
            c(-2.0 * lambda, -2.0 * big_omega),
            c(-2.0 * lambda, 0.0),
        ];
        Ok(Self { t_matrix, k_diag })
    }

    pub fn t_matrix(&self) -> &Matrix3<Complex64> {
        &self.t_matrix
    }

    /// Diagonal of `K`: `-2(lambda - i Omega)`, `-2(lambda + i Omega)`, `-2 lambda`.
    pub fn eigenvalues(&self) -> [Complex64; 3] {
        self.k_diag
    }

    /// `T exp(K t) T` in complex arithmetic.
    pub fn propagator(&self, t: f64) -> Matrix3<Complex64> {
        let exp_k = Matrix3::from_diagonal(&Vector3::from_iterator(
            self.k_diag.iter().map(|k| (k * t).exp()),
        ));
        self.t_matrix * exp_k * self.t_matrix
    }

    /// Real part of [`Self::propagator`], after checking that the imaginary
    /// residue is at roundoff level.
    pub fn real_propagator(&self, t: f64) -> Result<Matrix3<f64>> {
        real_part_checked(&self.propagator(t))
    }

    /// `X(inf) = -(T K^-1 T) D`.
    pub fn stationary(&self, d: &DiffusionVector) -> Result<MomentVector> {
        if self.k_diag.iter().any(|k| k.norm() == 0.0) {
            return Err(Error::NoStationaryState);
        }
        let k_inv = Matrix3::from_diagonal(&Vector3::from_iterator(
            self.k_diag.iter().map(|k| k.inv()),
        ));
        let m = -(self.t_matrix * k_inv * self.t_matrix);
        let real = real_part_checked(&m)?;
        Ok(MomentVector(real * d.0))
    }
}

pub(crate) fn real_part_checked(m: &Matrix3<Complex64>) -> Result<Matrix3<f64>> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let residue = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > REALITY_TOL * scale {
        return Err(Error::NumericalFailure(format!(
            "imaginary residue {residue:e} in a real propagator of magnitude {scale:e}"
        )));
    }
    Ok(m.map(|z| z.re))
}

/// Real drift matrix of the scaled covariance equations.
pub fn drift_matrix(params: &OscillatorParams) -> Matrix3<f64> {
    let (w, mu, lambda) = (params.omega(), params.mu(), params.lambda());
    #[rustfmt::skip]
    let a = Matrix3::new(
        -2.0 * (lambda - mu), 0.0,                   2.0 * w,
        0.0,                  -2.0 * (lambda + mu),  -2.0 * w,
        -w,                   w,                     -2.0 * lambda,
    );
    a
}
