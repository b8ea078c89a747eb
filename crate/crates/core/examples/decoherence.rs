// Linear-entropy production of an almost pure state in a thermalizing
// environment: the analytic near-pure rate against a finite difference.
//
//     cargo run --example decoherence

use oscillad::dynamics::ClosedForm;
use oscillad::purity::entropy_production_rate_pure;
use oscillad::{DiffusionCoefficients, GaussianState, OscillatorParams, Result};

pub fn run() -> Result<()> {
    let params = OscillatorParams::unit(0.1, 0.0)?;
    let d = DiffusionCoefficients::new(0.1, 0.1, 0.0)?;
    let closed = ClosedForm::new(&params, &d)?;
    let start = GaussianState::ground(&params);
    let linear = |t: f64| -> Result<f64> { Ok(1.0 - closed.state_at(&start, t)?.purity(&params)?) };

    let h = 1e-3;
    println!("{:>6} {:>10} {:>14} {:>14}", "t", "gamma", "analytic rate", "fd rate");
    for t in [0.0, 0.05, 0.1, 0.5, 1.0, 2.0] {
        let s = closed.state_at(&start, t)?;
        let rate = entropy_production_rate_pure(&params, &d, &s);
        let fd = if t > h { (linear(t + h)? - linear(t - h)?) / (2.0 * h) } else { f64::NAN };
        let flag = if rate.near_pure { "" } else { "  (not near pure)" };
        println!("{t:>6.2} {:>10.6} {:>14.6e} {:>14.6e}{flag}", s.purity(&params)?, rate.rate, fd);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
