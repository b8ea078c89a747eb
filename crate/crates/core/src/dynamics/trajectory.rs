use std::fmt;

use serde::Serialize;

use crate::dynamics::closed::{pure_condition_residual, ClosedForm};
use crate::error::{Error, Result};
use crate::params::{DiffusionCoefficients, OscillatorParams};
use crate::purity::{entropy_production_rate_pure, fluctuation_energy};
use crate::state::GaussianState;

/// Scalar diagnostics of one trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub det_sigma: f64,
    pub purity: f64,
    pub correlation: f64,
    pub entropy_vn: f64,
    pub entropy_linear: f64,
    pub energy: f64,
    pub pure_residual: f64,
    pub entropy_rate: f64,
    /// `false` once the state is too mixed for the near-pure rate formula.
    pub entropy_rate_valid: bool,
}

impl Diagnostics {
    pub fn compute(
        params: &OscillatorParams,
        d: &DiffusionCoefficients,
        state: &GaussianState,
    ) -> Result<Self> {
        let purity = state.purity(params)?;
        let rate = entropy_production_rate_pure(params, d, state);
        Ok(Self {
            det_sigma: state.sigma_det(),
            purity,
            correlation: state.correlation_coefficient(),
            entropy_vn: state.von_neumann_entropy(params)?,
            entropy_linear: 1.0 - purity,
            energy: fluctuation_energy(params, state),
            pure_residual: pure_condition_residual(d, params, state),
            entropy_rate: rate.rate,
            entropy_rate_valid: rate.near_pure,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Warning {
    /// `omega <= |mu|`: the moment equations still hold but no pure
    /// stationary state exists.
    Overdamped,
    /// `lambda > 0.1 omega`: outside the weak-coupling regime.
    StrongCoupling,
    /// Closed form unavailable (no friction); RK4 values were used.
    NoFrictionFallback,
    /// Closed form and RK4 disagree beyond the cross-check tolerance.
    OracleDiscrepancy,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Warning::Overdamped => "overdamped regime (omega <= |mu|): purity analysis does not apply",
            Warning::StrongCoupling => "lambda > 0.1 omega: weak-coupling assumption is questionable",
            Warning::NoFrictionFallback => "lambda = 0: closed form unavailable, RK4 values reported",
            Warning::OracleDiscrepancy => "closed form and RK4 disagree beyond 1e-6 relative",
        };
        f.write_str(msg)
    }
}

/// Time-ordered samples with eagerly computed diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<GaussianState>,
    diagnostics: Vec<Diagnostics>,
    warnings: Vec<Warning>,
}

impl Trajectory {
    pub(crate) fn build(
        params: &OscillatorParams,
        d: &DiffusionCoefficients,
        times: Vec<f64>,
        states: Vec<GaussianState>,
        warnings: Vec<Warning>,
    ) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::NumericalFailure("times and states differ in length".into()));
        }
        if times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::invalid("times", "must be strictly increasing"));
        }
        let diagnostics = states
            .iter()
            .map(|s| Diagnostics::compute(params, d, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times,
            states,
            diagnostics,
            warnings,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[GaussianState] {
        &self.states
    }

    pub fn diagnostics(&self) -> &[Diagnostics] {
        &self.diagnostics
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn push_warning(&mut self, w: Warning) {
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &GaussianState, &Diagnostics)> {
        self.times
            .iter()
            .zip(&self.states)
            .zip(&self.diagnostics)
            .map(|((t, s), d)| (*t, s, d))
    }
}

/// Samples the closed-form solution at each time of `times`.
pub fn evolve_closed_trajectory(
    params: &OscillatorParams,
    d: &DiffusionCoefficients,
    state0: &GaussianState,
    times: &[f64],
) -> Result<Trajectory> {
    let closed = ClosedForm::new(params, d)?;
    let states = times
        .iter()
        .map(|&t| closed.state_at(state0, t))
        .collect::<Result<Vec<_>>>()?;
    let mut warnings = Vec::new();
    if !params.is_weak_coupling() {
        warnings.push(Warning::StrongCoupling);
    }
    Trajectory::build(params, d, times.to_vec(), states, warnings)
}

/// Largest relative deviation between two trajectories sampled on the same
/// grid. Covariances are compared in action units against the norm of the
/// reference moment vector; means against the corresponding widths.
pub fn max_relative_discrepancy(
    params: &OscillatorParams,
    reference: &Trajectory,
    other: &Trajectory,
) -> f64 {
    use crate::dynamics::spectral::MomentVector;
    reference
        .states()
        .iter()
        .zip(other.states())
        .map(|(a, b)| {
            let xa = MomentVector::from_covariances(&a.covariances(), params).0;
            let xb = MomentVector::from_covariances(&b.covariances(), params).0;
            let cov = (xa - xb).amax() / xa.amax();
            let q = (a.q_mean() - b.q_mean()).abs() / (a.q_mean().abs() + a.s_qq().sqrt());
            let p = (a.p_mean() - b.p_mean()).abs() / (a.p_mean().abs() + a.s_pp().sqrt());
            cov.max(q).max(p)
        })
        .fold(0.0, f64::max)
}
