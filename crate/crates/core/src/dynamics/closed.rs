//! Closed-form solutions for the means and covariances.

use crate::dynamics::spectral::{DiffusionVector, MomentVector, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::params::{DiffusionCoefficients, OscillatorParams};
use crate::state::{Covariances, GaussianState};

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("t", format!("must be non-negative and finite, got {t}")))
    }
}

/// Damped oscillation of the first moments from `(q0, p0)` at time zero.
pub fn mean_evolution(params: &OscillatorParams, q0: f64, p0: f64, t: f64) -> Result<(f64, f64)> {
    let big_omega = params.damped_frequency()?;
    check_time(t)?;
    let (m, w, mu) = (params.m(), params.omega(), params.mu());
    let decay = (-params.lambda() * t).exp();
    let (sin, cos) = (big_omega * t).sin_cos();
    let q = decay * ((cos + mu / big_omega * sin) * q0 + sin / (m * big_omega) * p0);
    let p = decay * (-(m * w * w / big_omega) * sin * q0 + (cos - mu / big_omega * sin) * p0);
    Ok((q, p))
}

/// Asymptotic covariances, independent of the initial state.
pub fn asymptotic_variances(params: &OscillatorParams, d: &DiffusionCoefficients) -> Result<Covariances> {
    params.require_friction()?;
    params.damped_frequency()?;
    let (m, w, mu, l) = (params.m(), params.omega(), params.mu(), params.lambda());
    let (dqq, dpp, dpq) = (d.d_qq(), d.d_pp(), d.d_pq());
    let mw2 = (m * w) * (m * w);
    let denom = l * (l * l + w * w - mu * mu);

    let s_qq = (mw2 * (2.0 * l * (l + mu) + w * w) * dqq + w * w * dpp + 2.0 * m * w * w * (l + mu) * dpq)
        / (2.0 * mw2 * denom);
    let s_pp = (mw2 * w * w * dqq + (2.0 * l * (l - mu) + w * w) * dpp - 2.0 * m * w * w * (l - mu) * dpq)
        / (2.0 * denom);
    let s_pq = (-(l + mu) * mw2 * dqq + (l - mu) * dpp + 2.0 * m * (l * l - mu * mu) * dpq)
        / (2.0 * m * denom);
    let cov = Covariances::new(s_qq, s_pp, s_pq);

    #[cfg(debug_assertions)]
    {
        let spectral = asymptotic_variances_spectral(params, d)?;
        let x = MomentVector::from_covariances(&cov, params).0;
        let y = MomentVector::from_covariances(&spectral, params).0;
        debug_assert!(
            (x - y).amax() <= 1e-10 * x.amax().max(f64::MIN_POSITIVE),
            "closed-form and spectral asymptotic variances disagree: {x:?} vs {y:?}"
        );
    }
    Ok(cov)
}

/// Asymptotic covariances via `X(inf) = -(T K^-1 T) D`.
pub fn asymptotic_variances_spectral(
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
) -> Result<Covariances> {
    params.require_friction()?;
    let spectral = SpectralDecomposition::new(params)?;
    let x_inf = spectral.stationary(&DiffusionVector::from_coefficients(d, params))?;
    Ok(x_inf.to_covariances(params))
}

/// `X(t) = (T e^{Kt} T)(X(0) - X(inf)) + X(inf)` mapped back to covariances.
pub fn variance_evolution_closed(
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
    state0: &GaussianState,
    t: f64,
) -> Result<Covariances> {
    ClosedForm::new(params, d)?.covariances_at(state0, t)
}

/// Full state (means and covariances) at time `t`.
pub fn evolve_closed(
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
    state0: &GaussianState,
    t: f64,
) -> Result<GaussianState> {
    ClosedForm::new(params, d)?.state_at(state0, t)
}

/// Precomputed spectral data and stationary point for repeated evaluation.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    params: OscillatorParams,
    spectral: SpectralDecomposition,
    x_inf: MomentVector,
}

impl ClosedForm {
    pub fn new(params: &OscillatorParams, d: &DiffusionCoefficients) -> Result<Self> {
        let spectral = SpectralDecomposition::new(params)?;
        let x_inf = MomentVector::from_covariances(&asymptotic_variances(params, d)?, params);
        Ok(Self {
            params: *params,
            spectral,
            x_inf,
        })
    }

    pub fn stationary(&self) -> Covariances {
        self.x_inf.to_covariances(&self.params)
    }

    pub fn covariances_at(&self, state0: &GaussianState, t: f64) -> Result<Covariances> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(state0.covariances());
        }
        let x0 = MomentVector::from_covariances(&state0.covariances(), &self.params);
        let prop = self.spectral.real_propagator(t)?;
        let x = prop * (x0.0 - self.x_inf.0) + self.x_inf.0;
        Ok(MomentVector(x).to_covariances(&self.params))
    }

    pub fn state_at(&self, state0: &GaussianState, t: f64) -> Result<GaussianState> {
        let cov = self.covariances_at(state0, t)?;
        let (q, p) = mean_evolution(&self.params, state0.q_mean(), state0.p_mean(), t)?;
        GaussianState::from_covariances(q, p, cov, self.params.hbar())
    }
}

/// Signed residual of the pure-state condition
/// `D_pp s_qq + D_qq s_pp - 2 D_pq s_pq - hbar^2 lambda / 2`.
pub fn pure_condition_residual(
    d: &DiffusionCoefficients,
    params: &OscillatorParams,
    state: &GaussianState,
) -> f64 {
    let h = params.hbar();
    d.d_pp() * state.s_qq() + d.d_qq() * state.s_pp() - 2.0 * d.d_pq() * state.s_pq()
        - h * h * params.lambda() / 2.0
}
