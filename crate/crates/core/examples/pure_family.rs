// Environments that keep a correlated coherent state pure, and the single
// environment operator that generates them.
//
//     cargo run --example pure_family

use oscillad::dynamics::evolve_closed_trajectory;
use oscillad::purity::{single_lindblad_operator, PureFamily};
use oscillad::{OscillatorParams, Result};

pub fn run() -> Result<()> {
    for mu in [0.0, 0.3, 0.6, 0.9] {
        let params = OscillatorParams::unit(0.1, mu)?;
        let fam = PureFamily::new(&params)?;
        let c = fam.coefficients;
        let op = single_lindblad_operator(&params, &c)?;
        println!(
            "mu = {mu:.1}: D = ({:.5}, {:.5}, {:+.5}), r* = {:+.2}, E_min = {:.5}, [V, V+] = {:.3}",
            c.d_qq(),
            c.d_pp(),
            c.d_pq(),
            fam.r_star,
            fam.e_min,
            op.commutator(params.hbar())
        );

        // the stationary state is a fixed point: purity stays one
        let times: Vec<f64> = (0..=20).map(|k| 15.0 * k as f64).collect();
        let traj = evolve_closed_trajectory(&params, &c, &fam.stationary_state, &times)?;
        let worst = traj
            .diagnostics()
            .iter()
            .map(|d| (d.purity - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "purity drifted by {worst}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
