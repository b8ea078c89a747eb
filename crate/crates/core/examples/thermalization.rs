// A displaced state relaxing to the thermal-like stationary state, with the
// closed form checked against RK4.
//
//     cargo run --example thermalization

use oscillad::dynamics::{
    asymptotic_variances, default_step, evolve_closed_trajectory, integrate_moments_rk4,
    max_relative_discrepancy,
};
use oscillad::{DiffusionCoefficients, GaussianState, OscillatorParams, Result};

pub fn run() -> Result<()> {
    let params = OscillatorParams::unit(0.1, 0.0)?;
    let d = DiffusionCoefficients::new(0.1, 0.1, 0.0)?;
    d.check_fundamental(&params)?;
    let start = GaussianState::coherent(2.0, 0.0, &params)?;
    let times: Vec<f64> = (0..=10).map(|k| 5.0 * k as f64).collect();

    let closed = evolve_closed_trajectory(&params, &d, &start, &times)?;
    let rk4 = integrate_moments_rk4(&params, &d, &start, &times, default_step(&params))?;

    println!("{:>6} {:>10} {:>10} {:>10} {:>8}", "t", "q", "sigma_qq", "sigma_pp", "gamma");
    for (t, s, diag) in closed.iter() {
        println!(
            "{t:>6.1} {:>10.6} {:>10.6} {:>10.6} {:>8.5}",
            s.q_mean(),
            s.s_qq(),
            s.s_pp(),
            diag.purity
        );
    }
    let gap = max_relative_discrepancy(&params, &closed, &rk4);
    let inf = asymptotic_variances(&params, &d)?;
    println!("closed form vs RK4: max relative discrepancy {gap:.2e}");
    println!("asymptotic variances: ({}, {}, {})", inf.s_qq, inf.s_pp, inf.s_pq);
    assert!(gap < 1e-6);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
