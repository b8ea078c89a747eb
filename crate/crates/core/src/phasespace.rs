//! Wigner functions and position-space density kernels of Gaussian states,
//! with quadrature cross-checks.
//!
//! Everything here is derived from [`GaussianState`] moments; there is no
//! separate phase-space PDE state.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{DiffusionCoefficients, OscillatorParams};
use crate::state::GaussianState;

/// Minimum window, in standard deviations, for Wigner-function quadrature.
pub const QUADRATURE_SIGMAS: f64 = 6.0;
/// Momentum window, in standard deviations, for the inverse Fourier check.
pub const FOURIER_SIGMAS: f64 = 8.0;

/// Gaussian Wigner function `W(p, q)` of `state`.
pub fn wigner(state: &GaussianState, p: f64, q: f64) -> f64 {
    let sigma = state.sigma_det();
    let dq = q - state.q_mean();
    let dp = p - state.p_mean();
    let quad = state.s_pp() * dq * dq + state.s_qq() * dp * dp - 2.0 * state.s_pq() * dq * dp;
    (-quad / (2.0 * sigma)).exp() / (2.0 * PI * sigma.sqrt())
}

/// Wigner function of a correlated coherent state written directly in terms
/// of `(r, eta)`, with the `1/(pi hbar)` prefactor.
pub fn correlated_coherent_wigner(
    r: f64,
    eta: f64,
    q_mean: f64,
    p_mean: f64,
    hbar: f64,
    p: f64,
    q: f64,
) -> f64 {
    let dq = q - q_mean;
    let dp = p - p_mean;
    let one_minus = 1.0 - r * r;
    let exponent = -2.0 * eta * eta / (hbar * hbar) * dp * dp - dq * dq / (2.0 * eta * eta * one_minus)
        + 2.0 * r / (hbar * one_minus.sqrt()) * dq * dp;
    exponent.exp() / (PI * hbar)
}

/// Long-time Wigner function of the purity-preserving environment.
pub fn stationary_wigner(params: &OscillatorParams, p: f64, q: f64) -> Result<f64> {
    let big_omega = params.damped_frequency()?;
    let (m, w, mu, h) = (params.m(), params.omega(), params.mu(), params.hbar());
    let quad = p * p / m + m * w * w * q * q + 2.0 * mu * q * p;
    Ok((-quad / (h * big_omega)).exp() / (PI * h))
}

/// Position-representation density matrix element `<x|rho|y>`.
pub fn density_kernel(state: &GaussianState, params: &OscillatorParams, x: f64, y: f64) -> Complex64 {
    let h = params.hbar();
    let (sqq, spp, spq) = (state.s_qq(), state.s_pp(), state.s_pq());
    let u = (x + y) / 2.0 - state.q_mean();
    let v = x - y;
    let re = -u * u / (2.0 * sqq) - (spp - spq * spq / sqq) * v * v / (2.0 * h * h);
    let im = spq / (h * sqq) * u * v + state.p_mean() * v / h;
    (1.0 / (2.0 * PI * sqq)).sqrt() * Complex64::new(re, im).exp()
}

/// Density kernel of a correlated coherent state carried by the
/// purity-preserving environment, centred on the given means.
pub fn pure_family_kernel(
    params: &OscillatorParams,
    q_mean: f64,
    p_mean: f64,
    x: f64,
    y: f64,
) -> Result<Complex64> {
    let big_omega = params.damped_frequency()?;
    let (m, mu, h) = (params.m(), params.mu(), params.hbar());
    let u = (x + y) / 2.0 - q_mean;
    let v = x - y;
    let re = -m * big_omega / h * u * u - m * big_omega / (4.0 * h) * v * v;
    let im = -m * mu / h * u * v + p_mean * v / h;
    Ok((m * big_omega / (PI * h)).sqrt() * Complex64::new(re, im).exp())
}

/// Long-time limit of [`pure_family_kernel`] (both means zero).
pub fn stationary_kernel(params: &OscillatorParams, x: f64, y: f64) -> Result<Complex64> {
    let big_omega = params.damped_frequency()?;
    let (m, mu, h) = (params.m(), params.mu(), params.hbar());
    let z = Complex64::new(big_omega * (x * x + y * y), mu * (x * x - y * y));
    Ok((m * big_omega / (PI * h)).sqrt() * (-m / (2.0 * h) * z).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexKernelSample {
    pub x: f64,
    pub y: f64,
    pub value: Complex64,
}

pub fn kernel_samples(
    state: &GaussianState,
    params: &OscillatorParams,
    points: &[(f64, f64)],
) -> Vec<ComplexKernelSample> {
    points
        .iter()
        .map(|&(x, y)| ComplexKernelSample {
            x,
            y,
            value: density_kernel(state, params, x, y),
        })
        .collect()
}

/// Uniform phase-space grid. `n_q` and `n_p` count intervals, so each axis
/// carries `n + 1` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceGrid {
    pub q_center: f64,
    pub p_center: f64,
    pub q_halfwidth: f64,
    pub p_halfwidth: f64,
    pub n_q: usize,
    pub n_p: usize,
}

impl PhaseSpaceGrid {
    pub fn new(
        q_center: f64,
        p_center: f64,
        q_halfwidth: f64,
        p_halfwidth: f64,
        n_q: usize,
        n_p: usize,
    ) -> Result<Self> {
        for (name, n) in [("n_q", n_q), ("n_p", n_p)] {
            if n < 16 || n % 2 != 0 {
                return Err(Error::invalid(name, format!("must be even and at least 16, got {n}")));
            }
        }
        for (name, w) in [("q_halfwidth", q_halfwidth), ("p_halfwidth", p_halfwidth)] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {w}")));
            }
        }
        if !(q_center.is_finite() && p_center.is_finite()) {
            return Err(Error::invalid("center", "must be finite"));
        }
        Ok(Self {
            q_center,
            p_center,
            q_halfwidth,
            p_halfwidth,
            n_q,
            n_p,
        })
    }

    /// Square grid centred on the state's means with halfwidths of
    /// `extent_sigmas` standard deviations.
    pub fn around(state: &GaussianState, extent_sigmas: f64, n: usize) -> Result<Self> {
        if !(extent_sigmas.is_finite() && extent_sigmas > 0.0) {
            return Err(Error::invalid("extent_sigmas", "must be positive"));
        }
        Self::new(
            state.q_mean(),
            state.p_mean(),
            extent_sigmas * state.s_qq().sqrt(),
            extent_sigmas * state.s_pp().sqrt(),
            n,
            n,
        )
    }

    pub fn q_nodes(&self) -> Vec<f64> {
        nodes(self.q_center, self.q_halfwidth, self.n_q)
    }

    pub fn p_nodes(&self) -> Vec<f64> {
        nodes(self.p_center, self.p_halfwidth, self.n_p)
    }

    fn require_coverage(&self, state: &GaussianState, sigmas: f64) -> Result<()> {
        let q_req = (state.q_mean() - self.q_center).abs() + sigmas * state.s_qq().sqrt();
        if q_req > self.q_halfwidth * (1.0 + 1e-12) {
            return Err(Error::GridTooSmall {
                axis: "q",
                required: q_req,
                available: self.q_halfwidth,
            });
        }
        let p_req = (state.p_mean() - self.p_center).abs() + sigmas * state.s_pp().sqrt();
        if p_req > self.p_halfwidth * (1.0 + 1e-12) {
            return Err(Error::GridTooSmall {
                axis: "p",
                required: p_req,
                available: self.p_halfwidth,
            });
        }
        Ok(())
    }

    /// Composite Simpson rule over the grid.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let (ps, qs) = (self.p_nodes(), self.q_nodes());
        let (wp, wq) = (simpson_weights(self.n_p), simpson_weights(self.n_q));
        let hp = 2.0 * self.p_halfwidth / self.n_p as f64;
        let hq = 2.0 * self.q_halfwidth / self.n_q as f64;
        let mut total = 0.0;
        for (p, a) in ps.iter().zip(&wp) {
            let row: f64 = qs.iter().zip(&wq).map(|(q, b)| b * f(*p, *q)).sum();
            total += a * row;
        }
        total * hp * hq / 9.0
    }
}

fn nodes(center: f64, halfwidth: f64, n: usize) -> Vec<f64> {
    let h = 2.0 * halfwidth / n as f64;
    (0..=n).map(|k| center - halfwidth + k as f64 * h).collect()
}

/// Simpson weights `1, 4, 2, 4, ..., 4, 1` for `n` (even) intervals.
fn simpson_weights(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            }
        })
        .collect()
}

/// Quadrature of `W` over the grid; one for a normalised state.
pub fn wigner_normalization(state: &GaussianState, grid: &PhaseSpaceGrid) -> Result<f64> {
    grid.require_coverage(state, QUADRATURE_SIGMAS)?;
    Ok(grid.integrate(|p, q| wigner(state, p, q)))
}

/// Purity as `2 pi hbar` times the phase-space integral of `W^2`.
pub fn wigner_purity_quadrature(
    state: &GaussianState,
    params: &OscillatorParams,
    grid: &PhaseSpaceGrid,
) -> Result<f64> {
    grid.require_coverage(state, QUADRATURE_SIGMAS)?;
    let integral = grid.integrate(|p, q| wigner(state, p, q).powi(2));
    Ok(2.0 * PI * params.hbar() * integral)
}

/// `<x|rho|y>` reconstructed from the Wigner function by a Simpson
/// quadrature of `exp(i p (x - y) / hbar) W(p, (x + y)/2)` over momentum.
///
/// The momentum window is centred on the conditional mean at `(x + y)/2`
/// and spans [`FOURIER_SIGMAS`] momentum standard deviations each side.
pub fn density_from_wigner_check(
    state: &GaussianState,
    params: &OscillatorParams,
    x: f64,
    y: f64,
    quadrature_points: usize,
) -> Result<Complex64> {
    if quadrature_points < 16 {
        return Err(Error::invalid("quadrature_points", "must be at least 16"));
    }
    let n = quadrature_points + quadrature_points % 2;
    let h_bar = params.hbar();
    let u = (x + y) / 2.0;
    let v = x - y;
    let center = state.p_mean() + state.s_pq() / state.s_qq() * (u - state.q_mean());
    let half = FOURIER_SIGMAS * state.s_pp().sqrt();
    let step = 2.0 * half / n as f64;
    let weights = simpson_weights(n);
    let sum: Complex64 = (0..=n)
        .map(|k| {
            let p = center - half + k as f64 * step;
            let phase = Complex64::from_polar(1.0, p * v / h_bar);
            phase * (weights[k] * wigner(state, p, u))
        })
        .sum();
    Ok(sum * (step / 3.0))
}

/// Finite-difference steps in time, position and momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub h_t: f64,
    pub h_q: f64,
    pub h_p: f64,
}

impl FdSteps {
    /// `h_t = 1e-4 / omega`, `h_q = 1e-3 sqrt(s_qq)`, `h_p = 1e-3 sqrt(s_pp)`.
    pub fn default_for(params: &OscillatorParams, state: &GaussianState) -> Self {
        Self {
            h_t: 1e-4 / params.omega(),
            h_q: 1e-3 * state.s_qq().sqrt(),
            h_p: 1e-3 * state.s_pp().sqrt(),
        }
    }
}

/// Relative residual of the phase-space Fokker–Planck equation for the
/// Gaussian solution `state_at(t)`, evaluated at `(p, q)`.
pub fn fokker_planck_residual<F>(
    state_at: F,
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
    t: f64,
    p: f64,
    q: f64,
    steps: FdSteps,
) -> Result<f64>
where
    F: Fn(f64) -> Result<GaussianState>,
{
    fokker_planck_residual_of(|t, p, q| Ok(wigner(&state_at(t)?, p, q)), params, d, t, p, q, steps)
}

/// Relative residual of the Fokker–Planck equation for an arbitrary
/// phase-space function `w(t, p, q)`.
///
/// Every derivative is a central finite difference. The residual
/// `|dW/dt - rhs|` is normalised by `|dW/dt|` plus the sum of the magnitudes
/// of the seven right-hand-side terms, so a stationary solution still gets a
/// meaningful scale.
pub fn fokker_planck_residual_of<W>(
    w: W,
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
    t: f64,
    p: f64,
    q: f64,
    steps: FdSteps,
) -> Result<f64>
where
    W: Fn(f64, f64, f64) -> Result<f64>,
{
    let FdSteps { h_t, h_q, h_p } = steps;
    let (m, om, l, mu) = (params.m(), params.omega(), params.lambda(), params.mu());
    let w_at = |p: f64, q: f64| w(t, p, q);

    let dw_dt = (w(t + h_t, p, q)? - w(t - h_t, p, q)?) / (2.0 * h_t);

    let w0 = w_at(p, q)?;
    let (wq_plus, wq_minus) = (w_at(p, q + h_q)?, w_at(p, q - h_q)?);
    let (wp_plus, wp_minus) = (w_at(p + h_p, q)?, w_at(p - h_p, q)?);

    let dw_dq = (wq_plus - wq_minus) / (2.0 * h_q);
    let dw_dp = (wp_plus - wp_minus) / (2.0 * h_p);
    let dqw_dq = ((q + h_q) * wq_plus - (q - h_q) * wq_minus) / (2.0 * h_q);
    let dpw_dp = ((p + h_p) * wp_plus - (p - h_p) * wp_minus) / (2.0 * h_p);
    let d2w_dq2 = (wq_plus - 2.0 * w0 + wq_minus) / (h_q * h_q);
    let d2w_dp2 = (wp_plus - 2.0 * w0 + wp_minus) / (h_p * h_p);
    let d2w_dpdq = (w_at(p + h_p, q + h_q)? - w_at(p + h_p, q - h_q)? - w_at(p - h_p, q + h_q)?
        + w_at(p - h_p, q - h_q)?)
        / (4.0 * h_p * h_q);

    let terms = [
        -p / m * dw_dq,
        m * om * om * q * dw_dp,
        (l - mu) * dqw_dq,
        (l + mu) * dpw_dp,
        d.d_qq() * d2w_dq2,
        d.d_pp() * d2w_dp2,
        // the mixed derivative carries both orderings of the symmetric
        // diffusion matrix
        2.0 * d.d_pq() * d2w_dpdq,
    ];
    let rhs: f64 = terms.iter().sum();
    let scale = dw_dt.abs() + terms.iter().map(|x| x.abs()).sum::<f64>() + f64::MIN_POSITIVE;
    Ok((dw_dt - rhs).abs() / scale)
}

/// `(p, q, W)` triples over the grid nodes, momentum-major.
pub fn wigner_on_grid(state: &GaussianState, grid: &PhaseSpaceGrid) -> Vec<(f64, f64, f64)> {
    let qs = grid.q_nodes();
    grid.p_nodes()
        .into_iter()
        .flat_map(|p| qs.iter().map(move |&q| (p, q, wigner(state, p, q))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> OscillatorParams {
        OscillatorParams::unit(0.1, 0.0).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn wigner_peak_value() {
        let g = GaussianState::ground(&unit());
        assert!((wigner(&g, 0.0, 0.0) - 1.0 / PI).abs() < 1e-16);
        assert!((wigner(&g, 0.0, 0.0) - 0.3183099).abs() < 1e-7);
        let s = GaussianState::new(0.4, -1.0, 2.0, 0.7, 0.3, 1.0).unwrap();
        let peak = 1.0 / (2.0 * PI * s.sigma_det().sqrt());
        assert!((wigner(&s, -1.0, 0.4) - peak).abs() < 1e-16);
    }

    #[test]
    fn ccs_form_matches_generic_form() {
        for hbar in [1.0, 0.3] {
            let p = OscillatorParams::new(1.0, 1.0, 0.1, 0.0, hbar).unwrap();
            let (r, eta, qm, pm) = (-0.6, 0.8, 0.3, -0.2);
            let s = GaussianState::correlated_coherent(r, eta, qm, pm, &p).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    let q = qm + (i as f64 - 2.0) * 0.5 * eta;
                    let pp = pm + (j as f64 - 2.0) * 0.5 * s.s_pp().sqrt();
                    let a = wigner(&s, pp, q);
                    let b = correlated_coherent_wigner(r, eta, qm, pm, hbar, pp, q);
                    assert!((a - b).abs() <= 1e-12 * b, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn kernel_diagonal_and_hermiticity() {
        let p = unit();
        let g = GaussianState::ground(&p);
        let k = density_kernel(&g, &p, 0.0, 0.0);
        assert!((k.re - PI.powf(-0.5)).abs() < 1e-15 && k.im == 0.0);
        assert!((k.re - 0.5641896).abs() < 1e-7);

        let s = GaussianState::new(0.4, -1.0, 2.0, 0.7, 0.3, 1.0).unwrap();
        for (x, y) in [(0.1, 0.9), (-1.3, 2.2), (3.0, -0.4)] {
            let a = density_kernel(&s, &p, x, y);
            let b = density_kernel(&s, &p, y, x);
            assert!((a - b.conj()).norm() < 1e-16);
        }
        let diag = density_kernel(&s, &p, 0.4, 0.4);
        assert!((diag.re - (1.0 / (2.0 * PI * 2.0)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kernel_trace_is_one() {
        let p = unit();
        let s = GaussianState::new(0.4, -1.0, 2.0, 0.7, 0.3, 1.0).unwrap();
        let half = 10.0 * s.s_qq().sqrt();
        let n = 400;
        let h = 2.0 * half / n as f64;
        let w = simpson_weights(n);
        let tr: f64 = (0..=n)
            .map(|k| {
                let x = s.q_mean() - half + k as f64 * h;
                w[k] * density_kernel(&s, &p, x, x).re
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((tr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_family_kernel_forms_agree() {
        let p = OscillatorParams::new(1.4, 1.1, 0.2, 0.35, 0.8).unwrap();
        let stat = crate::purity::stationary_pure_variances(&p).unwrap();
        let moved = GaussianState::from_covariances(0.7, -0.3, stat.covariances(), p.hbar()).unwrap();
        for (x, y) in [(0.0, 0.0), (0.5, -0.2), (-1.0, 0.8)] {
            let a = density_kernel(&moved, &p, x, y);
            let b = pure_family_kernel(&p, 0.7, -0.3, x, y).unwrap();
            assert!((a - b).norm() < 1e-14);
            let a = density_kernel(&stat, &p, x, y);
            let b = stationary_kernel(&p, x, y).unwrap();
            assert!((a - b).norm() < 1e-14);
            let c = pure_family_kernel(&p, 0.0, 0.0, x, y).unwrap();
            assert!((c - b).norm() < 1e-14);
        }
        let w0 = stationary_wigner(&p, 0.3, -0.4).unwrap();
        assert!((w0 - wigner(&stat, 0.3, -0.4)).abs() < 1e-14);
    }

    #[test]
    fn grid_validation() {
        assert!(PhaseSpaceGrid::new(0.0, 0.0, 1.0, 1.0, 15, 16).is_err());
        assert!(PhaseSpaceGrid::new(0.0, 0.0, 1.0, 1.0, 17, 16).is_err());
        assert!(PhaseSpaceGrid::new(0.0, 0.0, 0.0, 1.0, 16, 16).is_err());
        let g = PhaseSpaceGrid::new(0.0, 0.0, 1.0, 2.0, 16, 32).unwrap();
        assert_eq!(g.q_nodes().len(), 17);
        assert_eq!(g.p_nodes().len(), 33);
    }

    #[test]
    fn too_small_grid_rejected() {
        let p = unit();
        let g = GaussianState::ground(&p);
        let grid = PhaseSpaceGrid::around(&g, 5.0, 64).unwrap();
        assert!(matches!(
            wigner_purity_quadrature(&g, &p, &grid),
            Err(Error::GridTooSmall { .. })
        ));
        let off = PhaseSpaceGrid::new(3.0, 0.0, 6.0 * 0.5f64.sqrt(), 6.0 * 0.5f64.sqrt(), 64, 64).unwrap();
        assert!(wigner_normalization(&g, &off).is_err());
    }

    #[test]
    fn quadrature_purity_examples() {
        let p = unit();
        let g = GaussianState::ground(&p);
        let grid = PhaseSpaceGrid::around(&g, 6.0, 128).unwrap();
        assert!((wigner_purity_quadrature(&g, &p, &grid).unwrap() - 1.0).abs() < 1e-6);
        assert!((wigner_normalization(&g, &grid).unwrap() - 1.0).abs() < 1e-6);

        let mixed = GaussianState::new(0.2, 0.1, 1.0, 1.0, 0.0, 1.0).unwrap();
        let grid = PhaseSpaceGrid::around(&mixed, 6.0, 128).unwrap();
        assert!((wigner_purity_quadrature(&mixed, &p, &grid).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn quadrature_converges_at_least_fourth_order() {
        let p = unit();
        let s = GaussianState::new(0.0, 0.0, 1.3, 0.9, 0.4, 1.0).unwrap();
        let exact = s.purity(&p).unwrap();
        let err = |n| {
            let grid = PhaseSpaceGrid::around(&s, 6.0, n).unwrap();
            (wigner_purity_quadrature(&s, &p, &grid).unwrap() - exact).abs()
        };
        let (coarse, fine) = (err(16), err(32));
        assert!(coarse > 1e-8, "coarse grid should show a measurable error");
        assert!(coarse / fine >= 4.0, "{coarse} / {fine}");
    }

    #[test]
    fn inverse_fourier_examples() {
        let p = unit();
        let g = GaussianState::ground(&p);
        let diag = density_from_wigner_check(&g, &p, 0.3, 0.3, 2000).unwrap();
        let exact = density_kernel(&g, &p, 0.3, 0.3);
        assert!((diag - exact).norm() < 1e-6 * exact.norm());

        let off = density_from_wigner_check(&g, &p, 0.5, -0.5, 2000).unwrap();
        let exact = density_kernel(&g, &p, 0.5, -0.5);
        assert!((off - exact).norm() < 1e-5 * exact.norm());

        let fwd = density_from_wigner_check(&g, &p, 0.5, -0.2, 2000).unwrap();
        let back = density_from_wigner_check(&g, &p, -0.2, 0.5, 2000).unwrap();
        assert!((fwd - back.conj()).norm() < 1e-12);
    }

    #[test]
    fn stationary_solution_satisfies_fokker_planck() {
        let p = OscillatorParams::new(1.2, 0.9, 0.15, 0.3, 1.0).unwrap();
        let fam = crate::purity::PureFamily::new(&p).unwrap();
        let s = fam.stationary_state;
        let steps = FdSteps::default_for(&p, &s);
        for (pp, q) in [(0.0, 0.0), (0.4, -0.3), (-0.9, 1.1)] {
            let r = fokker_planck_residual(|_| Ok(s), &p, &fam.coefficients, 1.0, pp, q, steps).unwrap();
            assert!(r < 1e-5, "residual {r} at ({pp}, {q})");
            let r = fokker_planck_residual_of(
                |_, pp, q| stationary_wigner(&p, pp, q),
                &p,
                &fam.coefficients,
                1.0,
                pp,
                q,
                steps,
            )
            .unwrap();
            assert!(r < 1e-5, "printed form residual {r} at ({pp}, {q})");
        }
    }
}
