//! Purity-preserving environments.
//!
//! On the manifold `D_pp D_qq - D_pq^2 = hbar^2 lambda^2 / 4` with the
//! diffusion coefficients tied to the oscillator constants, a correlated
//! coherent state with correlation `-mu/omega` is a fixed point of the
//! covariance dynamics and stays pure forever.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::pure_condition_residual;
use crate::error::{Error, Result};
use crate::params::{DiffusionCoefficients, OscillatorParams, REL_TOL};
use crate::state::{Covariances, GaussianState};

/// Purity below which the near-pure entropy-production formula is flagged.
pub const NEAR_PURE_THRESHOLD: f64 = 0.99;

/// `D_qq = hbar lambda / 2 m Omega`, `D_pp = hbar lambda m omega^2 / 2 Omega`,
/// `D_pq = -hbar lambda mu / 2 Omega`.
pub fn purity_preserving_coefficients(params: &OscillatorParams) -> Result<DiffusionCoefficients> {
    params.require_friction()?;
    let big_omega = params.damped_frequency()?;
    let (m, w, mu, h, l) = (params.m(), params.omega(), params.mu(), params.hbar(), params.lambda());
    let k = h * l / (2.0 * big_omega);
    DiffusionCoefficients::new(k / m, k * m * w * w, -k * mu)
}

/// The stationary pure covariances, centred at the origin.
pub fn stationary_pure_variances(params: &OscillatorParams) -> Result<GaussianState> {
    let big_omega = params.damped_frequency()?;
    let (m, w, mu, h) = (params.m(), params.omega(), params.mu(), params.hbar());
    let k = h / (2.0 * big_omega);
    GaussianState::from_covariances(0.0, 0.0, Covariances::new(k / m, k * m * w * w, -k * mu), h)
}

/// `E = s_pp / 2m + m omega^2 s_qq / 2 + mu s_pq`.
pub fn fluctuation_energy(params: &OscillatorParams, state: &GaussianState) -> f64 {
    let (m, w) = (params.m(), params.omega());
    state.s_pp() / (2.0 * m) + m * w * w * state.s_qq() / 2.0 + params.mu() * state.s_pq()
}

/// Everything that characterises the purity-preserving environment of one
/// oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureFamily {
    pub coefficients: DiffusionCoefficients,
    pub stationary_state: GaussianState,
    /// `hbar Omega / 2`.
    pub e_min: f64,
    /// Correlation coefficient of the stationary state, `-mu / omega`.
    pub r_star: f64,
}

impl PureFamily {
    pub fn new(params: &OscillatorParams) -> Result<Self> {
        let coefficients = purity_preserving_coefficients(params)?;
        let stationary_state = stationary_pure_variances(params)?;
        Ok(Self {
            coefficients,
            stationary_state,
            e_min: params.hbar() * params.damped_frequency()? / 2.0,
            r_star: -params.mu() / params.omega(),
        })
    }
}

/// Whether `d` lies on the manifold `D_pp D_qq - D_pq^2 = hbar^2 lambda^2 / 4`.
pub fn on_pure_manifold(params: &OscillatorParams, d: &DiffusionCoefficients) -> Result<()> {
    let h = params.hbar();
    let target = h * h * params.lambda() * params.lambda() / 4.0;
    let det = d.det();
    if (det - target).abs() <= REL_TOL * d.d_pp() * d.d_qq() {
        Ok(())
    } else {
        Err(Error::NotOnPureFamily { det, target })
    }
}

/// Coefficients of a single environment operator `V = a p + b q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LindbladOperatorCoefficients {
    /// Coefficient of the momentum operator.
    pub a: Complex64,
    /// Coefficient of the position operator.
    pub b: Complex64,
}

/// Environment constants recovered from operator coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reconstruction {
    pub d_qq: f64,
    pub d_pp: f64,
    pub d_pq: f64,
    pub lambda: f64,
}

impl LindbladOperatorCoefficients {
    pub fn reconstruct(&self, hbar: f64) -> Reconstruction {
        let ab = self.a.conj() * self.b;
        Reconstruction {
            d_qq: hbar * self.a.norm_sqr() / 2.0,
            d_pp: hbar * self.b.norm_sqr() / 2.0,
            d_pq: -hbar / 2.0 * ab.re,
            lambda: -ab.im,
        }
    }

    /// `[V, V^dagger] = 2 hbar Im(a b*)`.
    pub fn commutator(&self, hbar: f64) -> f64 {
        2.0 * hbar * (self.a * self.b.conj()).im
    }
}

/// The single operator generating a purity-preserving environment. The free
/// phase is fixed by making the momentum coefficient purely imaginary.
pub fn single_lindblad_operator(
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
) -> Result<LindbladOperatorCoefficients> {
    on_pure_manifold(params, d)?;
    let h = params.hbar();
    let norm = (2.0 / (h * d.d_qq())).sqrt();
    Ok(LindbladOperatorCoefficients {
        a: Complex64::new(0.0, norm * d.d_qq()),
        b: Complex64::new(norm * params.lambda() * h / 2.0, -norm * d.d_pq()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyProduction {
    /// `(4 / hbar^2)` times the pure-state residual.
    pub rate: f64,
    /// Purity is at least [`NEAR_PURE_THRESHOLD`].
    pub near_pure: bool,
}

/// Linear-entropy production rate for an approximately pure state.
pub fn entropy_production_rate_pure(
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
    state: &GaussianState,
) -> EntropyProduction {
    let h = params.hbar();
    let gamma = h / (2.0 * state.sigma_det().sqrt());
    EntropyProduction {
        rate: 4.0 / (h * h) * pure_condition_residual(d, params, state),
        near_pure: gamma >= NEAR_PURE_THRESHOLD,
    }
}

/// Result of the numerical energy minimisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyMinimum {
    pub coefficients: DiffusionCoefficients,
    pub energy: f64,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 10_000;
const GOLDEN_ITERS: usize = 100;

/// Numerically minimises the stationary fluctuation energy
/// `(1/lambda)(D_pp/2m + m omega^2 D_qq/2 + mu D_pq)` over the pure manifold.
///
/// `D_pp` is eliminated through the manifold equation. A
/// `grid_resolution`^2 grid over log-spaced `D_qq` and linear `D_pq` seeds a
/// coordinate descent with golden-section line searches.
pub fn minimize_energy_on_pure_manifold(
    params: &OscillatorParams,
    grid_resolution: usize,
) -> Result<EnergyMinimum> {
    params.require_friction()?;
    let big_omega = params.damped_frequency()?;
    if grid_resolution < 2 {
        return Err(Error::invalid("grid_resolution", "must be at least 2"));
    }
    let (m, w, mu, h, l) = (params.m(), params.omega(), params.mu(), params.hbar(), params.lambda());
    let c = h * h * l * l / 4.0;
    let qq_scale = h * l / (2.0 * m * big_omega);
    let pq_halfwidth = 4.0 * (h * l / 2.0) * (w / big_omega);

    // x = ln(D_qq / qq_scale), y = D_pq
    let energy = |x: f64, y: f64| {
        let d_qq = qq_scale * x.exp();
        let d_pp = (c + y * y) / d_qq;
        (d_pp / (2.0 * m) + m * w * w * d_qq / 2.0 + mu * y) / l
    };

    let n = grid_resolution;
    let (x_lo, x_hi) = (1e-3f64.ln(), 1e3f64.ln());
    let x_step = (x_hi - x_lo) / (n - 1) as f64;
    let y_step = 2.0 * pq_halfwidth / (n - 1) as f64;
    let grid_x = |i: usize| x_lo + i as f64 * x_step;
    let grid_y = |j: usize| -pq_halfwidth + j as f64 * y_step;

    let (mut x, mut y, _) = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| (grid_x(i), grid_y(j), energy(grid_x(i), grid_y(j))))
                .fold((0.0, 0.0, f64::INFINITY), |best, cur| if cur.2 < best.2 { cur } else { best })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0, f64::INFINITY), |best, cur| if cur.2 < best.2 { cur } else { best });

    let mut e = energy(x, y);
    let (mut hx, mut hy) = (x_step, y_step);
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let x_new = line_minimize(|s| energy(s, y), x, hx);
        let y_new = line_minimize(|s| energy(x_new, s), y, hy);
        let e_new = energy(x_new, y_new);
        hx = (2.0 * (x_new - x).abs()).max(1e-9);
        hy = (2.0 * (y_new - y).abs()).max(1e-9 * pq_halfwidth);
        let improvement = e - e_new;
        if e_new <= e {
            x = x_new;
            y = y_new;
            e = e_new;
        }
        if improvement <= 1e-15 * e.abs() {
            break;
        }
    }

    let d_qq = qq_scale * x.exp();
    let coefficients = DiffusionCoefficients::new(d_qq, (c + y * y) / d_qq, y)?;
    Ok(EnergyMinimum {
        coefficients,
        energy: e,
        sweeps,
    })
}

/// Golden-section minimisation of `f` near `x0`, after bracketing with a
/// doubling step starting at `step`.
fn line_minimize(f: impl Fn(f64) -> f64, x0: f64, step: f64) -> f64 {
    let f0 = f(x0);
    let (left, right) = (f(x0 - step), f(x0 + step));
    let (mut a, mut c) = (x0 - step, x0 + step);
    if left < f0 || right < f0 {
        let dir = if left < right { -1.0 } else { 1.0 };
        let (mut prev, mut cur) = (x0, x0 + dir * step);
        let mut f_cur = left.min(right);
        let mut h = step;
        for _ in 0..200 {
            h *= 2.0;
            let next = cur + dir * h;
            let f_next = f(next);
            if f_next >= f_cur {
                (a, c) = (prev.min(next), prev.max(next));
                break;
            }
            (prev, cur, f_cur) = (cur, next, f_next);
            (a, c) = (prev.min(cur), prev.max(cur));
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = c - inv_phi * (c - a);
    let mut x2 = a + inv_phi * (c - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            c = x2;
            (x2, f2) = (x1, f1);
            x1 = c - inv_phi * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            (x1, f1) = (x2, f2);
            x2 = a + inv_phi * (c - a);
            f2 = f(x2);
        }
    }
    let best = 0.5 * (a + c);
    if f(best) <= f0 {
        best
    } else {
        x0
    }
}
