//! Subcommand implementations. Each returns the rendered output and the
//! process exit code; errors carry their own exit code.

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cli::config::{CoefficientSpec, ConfigError, Integrator, ScenarioConfig};
use crate::cli::output::{Cell, Format, Table};
use crate::dynamics::{
    asymptotic_variances, evolve_closed_trajectory, integrate_moments_rk4, max_relative_discrepancy,
    pure_condition_residual, ClosedForm, Diagnostics, Trajectory, Warning,
};
use crate::error::{Error, Result};
use crate::params::{DiffusionCoefficients, OscillatorParams, REL_TOL};
use crate::phasespace::{
    wigner_normalization, wigner_on_grid, wigner_purity_quadrature, PhaseSpaceGrid, QUADRATURE_SIGMAS,
};
use crate::purity::{on_pure_manifold, single_lindblad_operator, PureFamily};
use crate::state::GaussianState;

/// Closed-form/RK4 disagreement above which a warning is attached.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

pub const EVOLVE_HEADER: [&str; 13] = [
    "t",
    "q_mean",
    "p_mean",
    "sigma_qq",
    "sigma_pp",
    "sigma_pq",
    "det_sigma",
    "gamma",
    "entropy_vn",
    "entropy_linear",
    "energy",
    "pure_residual",
    "entropy_rate_pure",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: i32,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        Self { text, exit_code: 0 }
    }
}

fn usage_error(key: &str, message: impl Into<String>) -> Error {
    Error::Config(ConfigError {
        line: None,
        key: Some(key.to_owned()),
        message: message.into(),
        kind: crate::cli::config::ConfigErrorKind::Syntax,
    })
}

/// Diffusion coefficients that have passed the fundamental constraint.
fn checked_diffusion(cfg: &ScenarioConfig, params: &OscillatorParams) -> Result<DiffusionCoefficients> {
    let d = cfg.diffusion()?;
    d.check_fundamental(params)?;
    Ok(d)
}

fn closed_form_available(params: &OscillatorParams) -> bool {
    params.lambda() > 0.0 && params.is_underdamped()
}

fn echo_config(table: &mut Table, cfg: &ScenarioConfig) {
    for (k, v) in cfg.echo() {
        table.note(format!("config.{k}"), v);
    }
}

fn trajectory_rows(table: &mut Table, traj: &Trajectory) {
    for (t, s, d) in traj.iter() {
        let rate = if d.entropy_rate_valid { Cell::Num(d.entropy_rate) } else { Cell::Empty };
        table.push_row(vec![
            t.into(),
            s.q_mean().into(),
            s.p_mean().into(),
            s.s_qq().into(),
            s.s_pp().into(),
            s.s_pq().into(),
            d.det_sigma.into(),
            d.purity.into(),
            d.entropy_vn.into(),
            d.entropy_linear.into(),
            d.energy.into(),
            d.pure_residual.into(),
            rate,
        ]);
    }
}

/// Trajectory sampled on the configured time grid, plus the closed-form/RK4
/// discrepancy when both paths ran.
pub fn evolve_trajectory(cfg: &ScenarioConfig) -> Result<(Trajectory, Option<f64>)> {
    let params = cfg.params()?;
    let d = checked_diffusion(cfg, &params)?;
    let state0 = cfg.initial()?;
    let times = cfg.sample_times();
    let closed_ok = closed_form_available(&params);
    let rk4 = || integrate_moments_rk4(&params, &d, &state0, &times, cfg.rk4_dt);

    match (cfg.integrator, closed_ok) {
        (Integrator::Closed, true) => Ok((evolve_closed_trajectory(&params, &d, &state0, &times)?, None)),
        (Integrator::Rk4, _) => Ok((rk4()?, None)),
        (Integrator::Both, true) => {
            let mut closed = evolve_closed_trajectory(&params, &d, &state0, &times)?;
            let numeric = rk4()?;
            let gap = max_relative_discrepancy(&params, &closed, &numeric);
            if gap.is_nan() || gap > ORACLE_TOLERANCE {
                closed.push_warning(Warning::OracleDiscrepancy);
            }
            Ok((closed, Some(gap)))
        }
        (_, false) => {
            let mut numeric = rk4()?;
            if params.lambda() == 0.0 {
                numeric.push_warning(Warning::NoFrictionFallback);
            }
            Ok((numeric, None))
        }
    }
}

pub fn cmd_evolve(cfg: &ScenarioConfig, format: Format) -> Result<CommandOutput> {
    let params = cfg.params()?;
    let d = checked_diffusion(cfg, &params)?;
    let (traj, gap) = evolve_trajectory(cfg)?;
    let mut table = Table::new(EVOLVE_HEADER);
    trajectory_rows(&mut table, &traj);
    echo_config(&mut table, cfg);
    table.note("fundamental_residual", d.fundamental_residual(&params));
    if let Some(gap) = gap {
        table.note("max_rel_discrepancy", gap);
    }
    for w in traj.warnings() {
        table.note("warning", w.to_string());
    }
    Ok(CommandOutput::ok(table.render(format)))
}

fn stationary_state(cfg: &ScenarioConfig) -> Result<(OscillatorParams, DiffusionCoefficients, GaussianState)> {
    let params = cfg.params()?;
    if params.lambda() == 0.0 {
        return Err(Error::NoStationaryState);
    }
    let d = checked_diffusion(cfg, &params)?;
    let cov = asymptotic_variances(&params, &d)?;
    let state = GaussianState::from_covariances(0.0, 0.0, cov, params.hbar())?;
    Ok((params, d, state))
}

fn diagnostics_json(params: &OscillatorParams, d: &DiffusionCoefficients, s: &GaussianState) -> Result<Value> {
    let diag = Diagnostics::compute(params, d, s)?;
    Ok(json!({
        "sigma_qq": s.s_qq(),
        "sigma_pp": s.s_pp(),
        "sigma_pq": s.s_pq(),
        "det_sigma": diag.det_sigma,
        "gamma": diag.purity,
        "correlation": diag.correlation,
        "entropy_vn": diag.entropy_vn,
        "entropy_linear": diag.entropy_linear,
        "energy": diag.energy,
        "pure_residual": diag.pure_residual,
        "entropy_rate_pure": diag.entropy_rate,
        "entropy_rate_valid": diag.entropy_rate_valid,
    }))
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn cmd_steady(cfg: &ScenarioConfig) -> Result<CommandOutput> {
    let (params, d, state) = stationary_state(cfg)?;
    let mut warnings = Vec::new();
    if !params.is_weak_coupling() {
        warnings.push(Warning::StrongCoupling.to_string());
    }
    let doc = json!({
        "config": cfg,
        "d_qq": d.d_qq(),
        "d_pp": d.d_pp(),
        "d_pq": d.d_pq(),
        "steady": diagnostics_json(&params, &d, &state)?,
        "warnings": warnings,
    });
    Ok(CommandOutput::ok(to_pretty(&doc)))
}

pub fn cmd_pure_coeffs(cfg: &ScenarioConfig) -> Result<CommandOutput> {
    let params = cfg.params()?;
    let fam = PureFamily::new(&params)?;
    let c = fam.coefficients;
    let h = params.hbar();
    let target = h * h * params.lambda() * params.lambda() / 4.0;
    let op = single_lindblad_operator(&params, &c)?;
    let rec = op.reconstruct(h);
    let s = fam.stationary_state;
    let doc = json!({
        "config": cfg,
        "d_qq": c.d_qq(),
        "d_pp": c.d_pp(),
        "d_pq": c.d_pq(),
        "stationary": {
            "sigma_qq": s.s_qq(),
            "sigma_pp": s.s_pp(),
            "sigma_pq": s.s_pq(),
            "det_sigma": s.sigma_det(),
            "gamma": s.purity(&params)?,
        },
        "r_star": fam.r_star,
        "e_min": fam.e_min,
        "manifold": {
            "det": c.det(),
            "target": target,
            "residual": c.det() - target,
            "on_manifold": on_pure_manifold(&params, &c).is_ok(),
        },
        "operator": {
            "a": [op.a.re, op.a.im],
            "b": [op.b.re, op.b.im],
            "commutator": op.commutator(h),
            "reconstruction": rec,
        },
    });
    Ok(CommandOutput::ok(to_pretty(&doc)))
}

struct Check {
    name: &'static str,
    residual: f64,
    pass: bool,
    required: bool,
}

/// Evaluates the constraint predicates; exit 3 if any required one fails.
pub fn cmd_check(cfg: &ScenarioConfig) -> Result<CommandOutput> {
    let params = cfg.params()?;
    let h = params.hbar();
    let d = cfg.diffusion()?;
    let pure_requested = cfg.coefficients == CoefficientSpec::Pure;
    let bound = h * h / 4.0;
    let state0 = match cfg.initial() {
        Ok(s) => Ok(s),
        Err(Error::UncertaintyViolation { det, .. }) => Err(det),
        Err(e) => return Err(e),
    };
    let det0 = match &state0 {
        Ok(s) => s.sigma_det(),
        Err(det) => *det,
    };
    let manifold_target = bound * params.lambda() * params.lambda();

    let mut checks = vec![
        Check {
            name: "fundamental_constraint",
            residual: d.fundamental_residual(&params),
            pass: d.check_fundamental(&params).is_ok(),
            required: true,
        },
        Check {
            name: "uncertainty",
            residual: det0 - bound,
            pass: det0 - bound >= -REL_TOL * bound,
            required: true,
        },
        Check {
            name: "underdamped",
            residual: params.damped_frequency_sq(),
            pass: params.is_underdamped(),
            required: pure_requested,
        },
        Check {
            name: "pure_manifold",
            residual: d.det() - manifold_target,
            pass: on_pure_manifold(&params, &d).is_ok(),
            required: pure_requested,
        },
        Check {
            name: "purity_equality",
            residual: det0 - bound,
            pass: (det0 - bound).abs() <= REL_TOL * bound,
            required: false,
        },
    ];
    if let Ok(s) = &state0 {
        let residual = pure_condition_residual(&d, &params, s);
        let scale = d.d_pp() * s.s_qq() + d.d_qq() * s.s_pp() + 2.0 * (d.d_pq() * s.s_pq()).abs();
        checks.push(Check {
            name: "pure_state_condition",
            residual,
            pass: residual.abs() <= REL_TOL * scale.max(f64::MIN_POSITIVE),
            required: false,
        });
    }

    let mut text = String::new();
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let suffix = if c.required { "" } else { " (informational)" };
        text.push_str(&format!("{status} {}: residual = {:?}{suffix}\n", c.name, c.residual));
    }
    let failed = checks.iter().filter(|c| c.required && !c.pass).count();
    if failed == 0 {
        text.push_str("summary: all required constraints pass\n");
        Ok(CommandOutput::ok(text))
    } else {
        text.push_str(&format!("summary: {failed} required constraint(s) failed\n"));
        Ok(CommandOutput { text, exit_code: 3 })
    }
}

/// State at time `t` from the closed form, or RK4 where it is unavailable.
pub fn state_at_time(cfg: &ScenarioConfig, t: f64) -> Result<GaussianState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(usage_error("t", format!("must be a non-negative time, got {t}")));
    }
    let params = cfg.params()?;
    let d = checked_diffusion(cfg, &params)?;
    let state0 = cfg.initial()?;
    if t == 0.0 {
        return Ok(state0);
    }
    if closed_form_available(&params) && cfg.integrator != Integrator::Rk4 {
        ClosedForm::new(&params, &d)?.state_at(&state0, t)
    } else {
        let traj = integrate_moments_rk4(&params, &d, &state0, &[t], cfg.rk4_dt)?;
        Ok(traj.states()[0])
    }
}

pub fn cmd_wigner(cfg: &ScenarioConfig, t: f64, n: usize, extent: f64, format: Format) -> Result<CommandOutput> {
    if n < 16 || !n.is_multiple_of(2) {
        return Err(usage_error("n", format!("must be even and at least 16, got {n}")));
    }
    if !(extent.is_finite() && extent > 0.0) {
        return Err(usage_error("extent", format!("must be positive, got {extent}")));
    }
    let params = cfg.params()?;
    let state = state_at_time(cfg, t)?;
    let grid = PhaseSpaceGrid::around(&state, extent, n)?;
    let mut table = Table::new(["p", "q", "w"]);
    for (p, q, w) in wigner_on_grid(&state, &grid) {
        table.push_row(vec![p.into(), q.into(), w.into()]);
    }
    echo_config(&mut table, cfg);
    table.note("t", t);
    table.note("n", n as f64);
    table.note("extent_sigmas", extent);
    if extent >= QUADRATURE_SIGMAS {
        table.note("quadrature_purity", wigner_purity_quadrature(&state, &params, &grid)?);
        table.note("normalization", wigner_normalization(&state, &grid)?);
    } else {
        let why = format!("unavailable: window below {QUADRATURE_SIGMAS} standard deviations");
        table.note("quadrature_purity", why.clone());
        table.note("normalization", why);
    }
    table.note("analytic_purity", state.purity(&params)?);
    Ok(CommandOutput::ok(table.render(format)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    #[value(name = "lambda")]
    Lambda,
    #[value(name = "mu")]
    Mu,
    #[value(name = "omega")]
    Omega,
    #[value(name = "d_qq")]
    DQq,
    #[value(name = "d_pp")]
    DPp,
    #[value(name = "d_pq")]
    DPq,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Lambda => "lambda",
            SweepParam::Mu => "mu",
            SweepParam::Omega => "omega",
            SweepParam::DQq => "d_qq",
            SweepParam::DPp => "d_pp",
            SweepParam::DPq => "d_pq",
        }
    }

    fn apply(self, cfg: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut c = cfg.clone();
        match (self, &mut c.coefficients) {
            (SweepParam::Lambda, _) => c.lambda = value,
            (SweepParam::Mu, _) => c.mu = value,
            (SweepParam::Omega, _) => c.omega = value,
            (SweepParam::DQq, CoefficientSpec::Explicit { d_qq, .. }) => *d_qq = value,
            (SweepParam::DPp, CoefficientSpec::Explicit { d_pp, .. }) => *d_pp = value,
            (SweepParam::DPq, CoefficientSpec::Explicit { d_pq, .. }) => *d_pq = value,
            (_, CoefficientSpec::Pure) => unreachable!("checked before sweeping"),
        }
        c
    }
}

pub const SWEEP_COLUMNS: [&str; 12] = [
    "d_qq",
    "d_pp",
    "d_pq",
    "sigma_qq",
    "sigma_pp",
    "sigma_pq",
    "gamma",
    "correlation",
    "entropy_vn",
    "energy",
    "entropy_rate_pure",
    "error",
];

fn sweep_row(cfg: &ScenarioConfig) -> Result<Vec<Cell>> {
    let (params, d, s) = stationary_state(cfg)?;
    let diag = Diagnostics::compute(&params, &d, &s)?;
    Ok(vec![
        d.d_qq().into(),
        d.d_pp().into(),
        d.d_pq().into(),
        s.s_qq().into(),
        s.s_pp().into(),
        s.s_pq().into(),
        diag.purity.into(),
        diag.correlation.into(),
        diag.entropy_vn.into(),
        diag.energy.into(),
        diag.entropy_rate.into(),
        Cell::Empty,
    ])
}

/// Steady-state summary for each of `steps` evenly spaced values of `param`.
/// Rows that violate a constraint keep their value and report the error.
pub fn cmd_sweep(
    cfg: &ScenarioConfig,
    param: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
    format: Format,
) -> Result<CommandOutput> {
    if steps == 0 {
        return Err(usage_error("steps", "must be at least 1"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(usage_error("from/to", "must be finite"));
    }
    if matches!(param, SweepParam::DQq | SweepParam::DPp | SweepParam::DPq)
        && cfg.coefficients == CoefficientSpec::Pure
    {
        return Err(usage_error(
            param.name(),
            "sweeping a diffusion coefficient requires explicit coefficients",
        ));
    }
    let values: Vec<f64> = (0..steps)
        .map(|k| match (k, steps) {
            (0, _) => from,
            (k, s) if k == s - 1 => to,
            (k, s) => from + (to - from) * k as f64 / (s - 1) as f64,
        })
        .collect();
    let rows: Vec<Vec<Cell>> = values
        .par_iter()
        .map(|&v| {
            let mut row = vec![Cell::Num(v)];
            match sweep_row(&param.apply(cfg, v)) {
                Ok(cells) => row.extend(cells),
                Err(e) => {
                    row.extend(std::iter::repeat_n(Cell::Empty, SWEEP_COLUMNS.len() - 1));
                    row.push(Cell::Text(e.to_string()));
                }
            }
            row
        })
        .collect();

    let mut table = Table::new(std::iter::once(param.name()).chain(SWEEP_COLUMNS));
    for row in rows {
        table.push_row(row);
    }
    echo_config(&mut table, cfg);
    table.note("sweep", param.name());
    Ok(CommandOutput::ok(table.render(format)))
}
