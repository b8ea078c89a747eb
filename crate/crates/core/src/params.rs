//! Oscillator constants and environment diffusion coefficients.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance for roundoff-level purity overshoot and uncertainty
/// undershoot. Anything larger is an error.
pub const REL_TOL: f64 = 1e-9;

/// Relative threshold on `Omega^2 / omega^2` below which the oscillator is
/// treated as critically damped and rejected by the closed-form routes.
pub const CRITICAL_EPS: f64 = 1e-12;

/// Physical constants of the oscillator and its coupling to the environment.
///
/// The Hamiltonian is `p^2/2m + m omega^2 q^2/2 + (mu/2)(qp + pq)` and
/// `lambda` is the friction constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorParams {
    m: f64,
    omega: f64,
    lambda: f64,
    mu: f64,
    hbar: f64,
}

impl OscillatorParams {
    pub fn new(m: f64, omega: f64, lambda: f64, mu: f64, hbar: f64) -> Result<Self> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
            }
        };
        positive("m", m)?;
        positive("omega", omega)?;
        positive("hbar", hbar)?;
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::invalid(
                "lambda",
                format!("must be non-negative and finite, got {lambda}"),
            ));
        }
        if !mu.is_finite() {
            return Err(Error::invalid("mu", format!("must be finite, got {mu}")));
        }
        Ok(Self {
            m,
            omega,
            lambda,
            mu,
            hbar,
        })
    }

    /// Natural units: `m = omega = hbar = 1`.
    pub fn unit(lambda: f64, mu: f64) -> Result<Self> {
        Self::new(1.0, 1.0, lambda, mu, 1.0)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.m, self.omega, lambda, self.mu, self.hbar)
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        Self::new(self.m, self.omega, self.lambda, mu, self.hbar)
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::new(self.m, omega, self.lambda, self.mu, self.hbar)
    }

    /// `omega^2 - mu^2`, possibly negative.
    pub fn damped_frequency_sq(&self) -> f64 {
        self.omega * self.omega - self.mu * self.mu
    }

    pub fn is_underdamped(&self) -> bool {
        self.damped_frequency_sq() > CRITICAL_EPS * self.omega * self.omega
    }

    /// The damped frequency `Omega = sqrt(omega^2 - mu^2)`.
    pub fn damped_frequency(&self) -> Result<f64> {
        if self.is_underdamped() {
            Ok(self.damped_frequency_sq().sqrt())
        } else {
            Err(Error::OverdampedRegime {
                omega: self.omega,
                mu: self.mu,
                omega_sq: self.damped_frequency_sq(),
            })
        }
    }

    pub(crate) fn require_friction(&self) -> Result<()> {
        if self.lambda > 0.0 {
            Ok(())
        } else {
            Err(Error::NoStationaryState)
        }
    }

    /// Semigroup (weak-coupling) validity heuristic.
    pub fn is_weak_coupling(&self) -> bool {
        self.lambda <= 0.1 * self.omega
    }
}

/// Environment diffusion coefficients `(D_qq, D_pp, D_pq)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionCoefficients {
    d_qq: f64,
    d_pp: f64,
    d_pq: f64,
}

impl DiffusionCoefficients {
    pub fn new(d_qq: f64, d_pp: f64, d_pq: f64) -> Result<Self> {
        if !(d_qq.is_finite() && d_qq > 0.0) {
            return Err(Error::invalid("d_qq", format!("must be positive, got {d_qq}")));
        }
        if !(d_pp.is_finite() && d_pp > 0.0) {
            return Err(Error::invalid("d_pp", format!("must be positive, got {d_pp}")));
        }
        if !d_pq.is_finite() {
            return Err(Error::invalid("d_pq", format!("must be finite, got {d_pq}")));
        }
        Ok(Self { d_qq, d_pp, d_pq })
    }

    /// No environment noise at all. Only consistent with `lambda = 0`
    /// (the closed, unitary oscillator).
    pub fn closed_system() -> Self {
        Self {
            d_qq: 0.0,
            d_pp: 0.0,
            d_pq: 0.0,
        }
    }

    pub fn d_qq(&self) -> f64 {
        self.d_qq
    }

    pub fn d_pp(&self) -> f64 {
        self.d_pp
    }

    pub fn d_pq(&self) -> f64 {
        self.d_pq
    }

    /// `D_pp D_qq - D_pq^2`.
    pub fn det(&self) -> f64 {
        self.d_pp * self.d_qq - self.d_pq * self.d_pq
    }

    /// Signed margin of the complete-positivity constraint
    /// `D_pp D_qq - D_pq^2 >= lambda^2 hbar^2 / 4`.
    pub fn fundamental_residual(&self, params: &OscillatorParams) -> f64 {
        let bound = params.lambda() * params.lambda() * params.hbar() * params.hbar() / 4.0;
        self.det() - bound
    }

    pub fn check_fundamental(&self, params: &OscillatorParams) -> Result<()> {
        let residual = self.fundamental_residual(params);
        let scale = self.d_pp * self.d_qq;
        if residual >= -REL_TOL * scale {
            Ok(())
        } else {
            Err(Error::FundamentalConstraint { residual })
        }
    }

    pub fn with_d_qq(self, d_qq: f64) -> Result<Self> {
        Self::new(d_qq, self.d_pp, self.d_pq)
    }

    pub fn with_d_pp(self, d_pp: f64) -> Result<Self> {
        Self::new(self.d_qq, d_pp, self.d_pq)
    }

    pub fn with_d_pq(self, d_pq: f64) -> Result<Self> {
        Self::new(self.d_qq, self.d_pp, d_pq)
    }
}
