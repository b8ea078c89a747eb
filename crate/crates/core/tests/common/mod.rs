#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oscillad::{DiffusionCoefficients, GaussianState, OscillatorParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Underdamped, weakly coupled oscillator with all scales of order one.
pub fn random_params(rng: &mut impl Rng) -> OscillatorParams {
    let omega = rng.random_range(0.5..2.0);
    OscillatorParams::new(
        rng.random_range(0.5..2.0),
        omega,
        rng.random_range(0.02..0.1) * omega,
        rng.random_range(-0.9..0.9) * omega,
        rng.random_range(0.5..2.0),
    )
    .unwrap()
}

/// Diffusion coefficients satisfying the fundamental constraint, scaled to
/// the oscillator.
pub fn random_diffusion(rng: &mut impl Rng, p: &OscillatorParams) -> DiffusionCoefficients {
    let (m, w, l, h) = (p.m(), p.omega(), p.lambda(), p.hbar());
    let d_qq = log_uniform(rng, 0.3, 3.0) * h * l / (2.0 * m * w);
    let d_pq = rng.random_range(-0.5..0.5) * h * l / 2.0;
    let d_pp_min = (h * h * l * l / 4.0 + d_pq * d_pq) / d_qq;
    let d = DiffusionCoefficients::new(d_qq, d_pp_min * (1.0 + rng.random_range(0.0..2.0)), d_pq).unwrap();
    d.check_fundamental(p).unwrap();
    d
}

/// Admissible Gaussian state; pure with probability about one third.
pub fn random_state(rng: &mut impl Rng, p: &OscillatorParams) -> GaussianState {
    let (m, w, h) = (p.m(), p.omega(), p.hbar());
    let s_qq = log_uniform(rng, 0.3, 3.0) * h / (2.0 * m * w);
    let s_pq = rng.random_range(-1.0..1.0) * h / 2.0;
    let excess = if rng.random_bool(1.0 / 3.0) { 0.0 } else { rng.random_range(0.0..1.0) };
    let s_pp = (h * h / 4.0 + s_pq * s_pq) / s_qq * (1.0 + excess);
    let q0 = rng.random_range(-2.0..2.0) * (h / (m * w)).sqrt();
    let p0 = rng.random_range(-2.0..2.0) * (h * m * w).sqrt();
    GaussianState::new(q0, p0, s_qq, s_pp, s_pq, h).unwrap()
}

/// Pure correlated coherent state with random correlation and width.
pub fn random_pure_state(rng: &mut impl Rng, p: &OscillatorParams) -> GaussianState {
    let eta = (log_uniform(rng, 0.3, 3.0) * p.hbar() / (2.0 * p.m() * p.omega())).sqrt();
    let r = rng.random_range(-0.9..0.9);
    GaussianState::correlated_coherent(r, eta, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), p)
        .unwrap()
}

pub fn sorted_times(rng: &mut impl Rng, n: usize, t_max: f64) -> Vec<f64> {
    let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..t_max)).collect();
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}
