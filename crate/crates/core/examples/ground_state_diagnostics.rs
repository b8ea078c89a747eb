// Scalar diagnostics of a few standard Gaussian states.
//
//     cargo run --example ground_state_diagnostics

use oscillad::{GaussianState, OscillatorParams, Result};

pub fn run() -> Result<()> {
    let params = OscillatorParams::unit(0.1, 0.0)?;
    let states = [
        ("ground", GaussianState::ground(&params)),
        ("coherent(1, -0.5)", GaussianState::coherent(1.0, -0.5, &params)?),
        ("ccs(r = -0.6, eta = 0.8)", GaussianState::correlated_coherent(-0.6, 0.8, 0.0, 0.0, &params)?),
        ("thermal(1, 1, 0)", GaussianState::new(0.0, 0.0, 1.0, 1.0, 0.0, params.hbar())?),
    ];
    println!("{:<26} {:>9} {:>9} {:>9} {:>9}", "state", "det", "gamma", "r", "S_vn");
    for (name, s) in &states {
        println!(
            "{name:<26} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            s.sigma_det(),
            s.purity(&params)?,
            s.correlation_coefficient(),
            s.von_neumann_entropy(&params)?
        );
    }
    // pure states saturate det = hbar^2 / 4
    let bound = params.hbar().powi(2) / 4.0;
    for (name, s) in &states[..3] {
        assert!((s.sigma_det() - bound).abs() < 1e-12, "{name}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
