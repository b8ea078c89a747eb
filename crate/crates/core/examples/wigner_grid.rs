// Wigner function of a correlated state on a grid, with quadrature purity,
// the density kernel recovered by Fourier transform, and the Fokker-Planck
// residual of the evolving Gaussian.
//
//     cargo run --example wigner_grid

use oscillad::dynamics::ClosedForm;
use oscillad::phasespace::{
    density_from_wigner_check, density_kernel, fokker_planck_residual, wigner_normalization,
    wigner_purity_quadrature, FdSteps, PhaseSpaceGrid,
};
use oscillad::{DiffusionCoefficients, GaussianState, OscillatorParams, Result};

pub fn run() -> Result<()> {
    let params = OscillatorParams::unit(0.1, 0.2)?;
    let state = GaussianState::new(0.5, -0.3, 0.9, 0.6, 0.25, params.hbar())?;
    let grid = PhaseSpaceGrid::around(&state, 6.0, 128)?;

    let purity = wigner_purity_quadrature(&state, &params, &grid)?;
    println!(
        "normalization {:.12}, purity {:.12} (analytic {:.12})",
        wigner_normalization(&state, &grid)?,
        purity,
        state.purity(&params)?
    );

    for (x, y) in [(0.5, 0.5), (1.0, 0.0), (-0.2, 0.9)] {
        let direct = density_kernel(&state, &params, x, y);
        let fourier = density_from_wigner_check(&state, &params, x, y, 2000)?;
        println!("<{x}|rho|{y}> = {direct:.8} (Fourier {fourier:.8})");
    }

    let d = DiffusionCoefficients::new(0.1, 0.12, -0.01)?;
    let closed = ClosedForm::new(&params, &d)?;
    let at = |t: f64| closed.state_at(&state, t);
    let steps = FdSteps::default_for(&params, &at(2.0)?);
    let worst = [(0.0, 0.0), (0.7, -0.4), (-1.0, 1.2)]
        .iter()
        .map(|&(p, q)| fokker_planck_residual(at, &params, &d, 2.0, p, q, steps))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("Fokker-Planck relative residual at t = 2: {worst:.2e}");
    assert!(worst < 1e-4);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
