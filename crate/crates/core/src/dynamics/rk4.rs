//! Fixed-step classical Runge–Kutta integration of the five moment equations.
//!
//! This path shares no code with the spectral solution and serves as its
//! oracle. It also covers the frictionless and overdamped regimes where the
//! closed form is unavailable.

use std::f64::consts::PI;

use crate::dynamics::trajectory::{Trajectory, Warning};
use crate::error::{Error, Result};
use crate::params::{DiffusionCoefficients, OscillatorParams};
use crate::state::{Covariances, GaussianState};

type Moments = [f64; 5];

/// Largest admissible step: `0.05 / max(lambda + |mu|, omega)`.
pub fn max_step(params: &OscillatorParams) -> f64 {
    0.05 / (params.lambda() + params.mu().abs()).max(params.omega())
}

/// `1e-3` of an undamped period, capped at [`max_step`].
pub fn default_step(params: &OscillatorParams) -> f64 {
    (1e-3 * 2.0 * PI / params.omega()).min(max_step(params))
}

fn rhs(params: &OscillatorParams, d: &DiffusionCoefficients, y: &Moments) -> Moments {
    let (m, w, l, mu) = (params.m(), params.omega(), params.lambda(), params.mu());
    let [q, p, sqq, spp, spq] = *y;
    [
        -(l - mu) * q + p / m,
        -m * w * w * q - (l + mu) * p,
        -2.0 * (l - mu) * sqq + 2.0 / m * spq + 2.0 * d.d_qq(),
        -2.0 * (l + mu) * spp - 2.0 * m * w * w * spq + 2.0 * d.d_pp(),
        -m * w * w * sqq + spp / m - 2.0 * l * spq + 2.0 * d.d_pq(),
    ]
}

fn axpy(y: &Moments, h: f64, k: &Moments) -> Moments {
    std::array::from_fn(|i| y[i] + h * k[i])
}

fn step(params: &OscillatorParams, d: &DiffusionCoefficients, y: &Moments, h: f64) -> Moments {
    let k1 = rhs(params, d, y);
    let k2 = rhs(params, d, &axpy(y, h / 2.0, &k1));
    let k3 = rhs(params, d, &axpy(y, h / 2.0, &k2));
    let k4 = rhs(params, d, &axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::invalid("t_grid", "must not be empty"));
    }
    if !(t_grid[0].is_finite() && t_grid[0] >= 0.0) {
        return Err(Error::invalid("t_grid", "times must be non-negative"));
    }
    if t_grid.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) || !w[1].is_finite()) {
        return Err(Error::invalid("t_grid", "times must be strictly increasing"));
    }
    Ok(())
}

/// Integrates the coupled mean/covariance equations from `state0` at `t = 0`
/// and samples exactly at every point of `t_grid`.
///
/// Each gap between samples is split into equal sub-steps no longer than `dt`,
/// so samples carry no interpolation error.
pub fn integrate_moments_rk4(
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
    state0: &GaussianState,
    t_grid: &[f64],
    dt: f64,
) -> Result<Trajectory> {
    let limit = max_step(params);
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    if dt > limit {
        return Err(Error::StepSizeTooLarge { dt, limit });
    }
    validate_grid(t_grid)?;

    let mut y: Moments = [
        state0.q_mean(),
        state0.p_mean(),
        state0.s_qq(),
        state0.s_pp(),
        state0.s_pq(),
    ];
    let mut t_now = 0.0;
    let mut states = Vec::with_capacity(t_grid.len());
    for &t_next in t_grid {
        let gap = t_next - t_now;
        if gap > 0.0 {
            let n = (gap / dt).ceil().max(1.0) as u64;
            let h = gap / n as f64;
            for _ in 0..n {
                y = step(params, d, &y, h);
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure(format!(
                "non-finite moments at t = {t_next}"
            )));
        }
        t_now = t_next;
        states.push(GaussianState::from_moments(
            y[0],
            y[1],
            Covariances::new(y[2], y[3], y[4]),
        ));
    }

    let mut warnings = Vec::new();
    if !params.is_underdamped() {
        warnings.push(Warning::Overdamped);
    }
    if !params.is_weak_coupling() {
        warnings.push(Warning::StrongCoupling);
    }
    Trajectory::build(params, d, t_grid.to_vec(), states, warnings)
}
