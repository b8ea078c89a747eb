//! Five-parameter Gaussian states and their scalar diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{OscillatorParams, REL_TOL};

/// Second central moments `(sigma_qq, sigma_pp, sigma_pq)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Covariances {
    pub s_qq: f64,
    pub s_pp: f64,
    pub s_pq: f64,
}

impl Covariances {
    pub fn new(s_qq: f64, s_pp: f64, s_pq: f64) -> Self {
        Self { s_qq, s_pp, s_pq }
    }

    /// Determinant of the dispersion matrix.
    pub fn det(&self) -> f64 {
        self.s_pp * self.s_qq - self.s_pq * self.s_pq
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.s_qq, self.s_pp, self.s_pq]
    }
}

/// A Gaussian state described by its means and covariances.
///
/// Construction enforces `s_qq > 0`, `s_pp > 0` and the
/// Schrödinger–Robertson bound `det >= hbar^2/4` up to [`REL_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianState {
    q_mean: f64,
    p_mean: f64,
    s_qq: f64,
    s_pp: f64,
    s_pq: f64,
}

impl GaussianState {
    pub fn new(q_mean: f64, p_mean: f64, s_qq: f64, s_pp: f64, s_pq: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("q_mean", q_mean), ("p_mean", p_mean), ("s_pq", s_pq)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, format!("must be finite, got {v}")));
            }
        }
        if !(s_qq.is_finite() && s_qq > 0.0) {
            return Err(Error::invalid("s_qq", format!("must be positive, got {s_qq}")));
        }
        if !(s_pp.is_finite() && s_pp > 0.0) {
            return Err(Error::invalid("s_pp", format!("must be positive, got {s_pp}")));
        }
        let state = Self::from_moments(q_mean, p_mean, Covariances::new(s_qq, s_pp, s_pq));
        check_uncertainty(state.sigma_det(), hbar)?;
        if state.correlation_coefficient().abs() >= 1.0 {
            return Err(Error::invalid("s_pq", "correlation coefficient must satisfy |r| < 1"));
        }
        Ok(state)
    }

    pub fn from_covariances(q_mean: f64, p_mean: f64, cov: Covariances, hbar: f64) -> Result<Self> {
        Self::new(q_mean, p_mean, cov.s_qq, cov.s_pp, cov.s_pq, hbar)
    }

    /// Unvalidated constructor for integrator internals.
    pub(crate) fn from_moments(q_mean: f64, p_mean: f64, cov: Covariances) -> Self {
        Self {
            q_mean,
            p_mean,
            s_qq: cov.s_qq,
            s_pp: cov.s_pp,
            s_pq: cov.s_pq,
        }
    }

    /// Oscillator ground state: `s_qq = hbar/2m omega`, `s_pp = m hbar omega/2`.
    pub fn ground(params: &OscillatorParams) -> Self {
        let (m, w, h) = (params.m(), params.omega(), params.hbar());
        Self::from_moments(0.0, 0.0, Covariances::new(h / (2.0 * m * w), m * h * w / 2.0, 0.0))
    }

    /// Glauber coherent state: ground-state widths displaced to `(q_mean, p_mean)`.
    pub fn coherent(q_mean: f64, p_mean: f64, params: &OscillatorParams) -> Result<Self> {
        let g = Self::ground(params);
        Self::from_covariances(q_mean, p_mean, g.covariances(), params.hbar())
    }

    /// Correlated coherent state with correlation `r` and position width `eta`.
    pub fn correlated_coherent(
        r: f64,
        eta: f64,
        q_mean: f64,
        p_mean: f64,
        params: &OscillatorParams,
    ) -> Result<Self> {
        if !(r.is_finite() && r.abs() < 1.0) {
            return Err(Error::invalid("r", format!("must satisfy |r| < 1, got {r}")));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::invalid("eta", format!("must be positive, got {eta}")));
        }
        let h = params.hbar();
        let one_minus = 1.0 - r * r;
        let cov = Covariances::new(
            eta * eta,
            h * h / (4.0 * eta * eta * one_minus),
            h * r / (2.0 * one_minus.sqrt()),
        );
        Self::from_covariances(q_mean, p_mean, cov, h)
    }

    pub fn q_mean(&self) -> f64 {
        self.q_mean
    }

    pub fn p_mean(&self) -> f64 {
        self.p_mean
    }

    pub fn s_qq(&self) -> f64 {
        self.s_qq
    }

    pub fn s_pp(&self) -> f64 {
        self.s_pp
    }

    pub fn s_pq(&self) -> f64 {
        self.s_pq
    }

    pub fn covariances(&self) -> Covariances {
        Covariances::new(self.s_qq, self.s_pp, self.s_pq)
    }

    /// `sigma = s_pp s_qq - s_pq^2`.
    pub fn sigma_det(&self) -> f64 {
        self.covariances().det()
    }

    pub fn correlation_coefficient(&self) -> f64 {
        self.s_pq / (self.s_pp * self.s_qq).sqrt()
    }

    /// `gamma = Tr rho^2 = hbar / (2 sqrt(sigma))`.
    pub fn purity(&self, params: &OscillatorParams) -> Result<f64> {
        let sigma = self.sigma_det();
        check_uncertainty(sigma, params.hbar())?;
        Ok((params.hbar() / (2.0 * sigma.sqrt())).min(1.0))
    }

    pub fn linear_entropy(&self, params: &OscillatorParams) -> Result<f64> {
        Ok(1.0 - self.purity(params)?)
    }

    /// Von Neumann entropy (Boltzmann constant set to one).
    pub fn von_neumann_entropy(&self, params: &OscillatorParams) -> Result<f64> {
        let sigma = self.sigma_det();
        check_uncertainty(sigma, params.hbar())?;
        let nu = (sigma.sqrt() / params.hbar() - 0.5).max(0.0);
        Ok(entropy_from_nu(nu))
    }
}

/// `(nu+1) ln(nu+1) - nu ln nu`, with `nu ln nu -> 0` at the origin.
pub fn entropy_from_nu(nu: f64) -> f64 {
    if nu <= 1e-12 {
        return 0.0;
    }
    (nu + 1.0) * (nu + 1.0).ln() - nu * nu.ln()
}

fn check_uncertainty(sigma: f64, hbar: f64) -> Result<()> {
    let bound = hbar * hbar / 4.0;
    if sigma.is_finite() && sigma >= bound * (1.0 - REL_TOL) {
        Ok(())
    } else {
        Err(Error::UncertaintyViolation { det: sigma, bound })
    }
}
