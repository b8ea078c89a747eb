// Numerical minimisation of the stationary fluctuation energy over the
// purity-preserving manifold, compared with the analytic minimiser.
//
//     cargo run --example energy_minimum

use oscillad::purity::{minimize_energy_on_pure_manifold, PureFamily};
use oscillad::{OscillatorParams, Result};

pub fn run() -> Result<()> {
    for (m, omega, lambda, mu) in [(1.0, 1.0, 0.1, 0.0), (2.0, 1.5, 0.05, 0.7), (0.5, 3.0, 0.2, -1.2)] {
        let params = OscillatorParams::new(m, omega, lambda, mu, 1.0)?;
        let numeric = minimize_energy_on_pure_manifold(&params, 64)?;
        let exact = PureFamily::new(&params)?;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        println!(
            "m = {m}, omega = {omega}, mu = {mu:+}: E = {:.10} (exact {:.10}), D_qq rel err {:.1e}, {} sweeps",
            numeric.energy,
            exact.e_min,
            rel(numeric.coefficients.d_qq(), exact.coefficients.d_qq()),
            numeric.sweeps
        );
        assert!(rel(numeric.energy, exact.e_min) < 1e-6);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
