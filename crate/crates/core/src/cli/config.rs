//! Flat `key = value` scenario files.
//!
//! ```text
//! # thermalizing oscillator
//! omega = 1
//! lambda = 0.1
//! mu = 0
//! coefficients = explicit(0.1, 0.1, 0)
//! initial_state = coherent(1, 0)
//! t_max = 50
//! ```

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::default_step;
use crate::error::Result;
use crate::params::{DiffusionCoefficients, OscillatorParams};
use crate::purity::purity_preserving_coefficients;
use crate::state::GaussianState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConfigErrorKind {
    /// Malformed, missing, duplicate or out-of-range entries.
    Syntax,
    /// Well-formed but physically inadmissible (regime guards).
    Constraint,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
    pub kind: ConfigErrorKind,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(key) = &self.key {
            write!(f, " (key `{key}`)")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl ConfigError {
    fn syntax(line: Option<usize>, key: Option<&str>, message: impl Into<String>) -> Self {
        Self {
            line,
            key: key.map(str::to_owned),
            message: message.into(),
            kind: ConfigErrorKind::Syntax,
        }
    }

    fn constraint(line: Option<usize>, key: &str, message: impl Into<String>) -> Self {
        Self {
            line,
            key: Some(key.to_owned()),
            message: message.into(),
            kind: ConfigErrorKind::Constraint,
        }
    }

    /// 2 for malformed input, 3 for a regime-guard violation.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ConfigErrorKind::Syntax => 2,
            ConfigErrorKind::Constraint => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CoefficientSpec {
    Pure,
    Explicit { d_qq: f64, d_pp: f64, d_pq: f64 },
}

impl fmt::Display for CoefficientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientSpec::Pure => f.write_str("pure"),
            CoefficientSpec::Explicit { d_qq, d_pp, d_pq } => {
                write!(f, "explicit({d_qq:?}, {d_pp:?}, {d_pq:?})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum InitialStateSpec {
    Ground,
    Coherent { q0: f64, p0: f64 },
    Ccs { r: f64, eta: f64, q0: f64, p0: f64 },
    Custom { q0: f64, p0: f64, s_qq: f64, s_pp: f64, s_pq: f64 },
}

impl fmt::Display for InitialStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialStateSpec::Ground => f.write_str("ground"),
            InitialStateSpec::Coherent { q0, p0 } => write!(f, "coherent({q0:?}, {p0:?})"),
            InitialStateSpec::Ccs { r, eta, q0, p0 } => {
                write!(f, "ccs({r:?}, {eta:?}, {q0:?}, {p0:?})")
            }
            InitialStateSpec::Custom { q0, p0, s_qq, s_pp, s_pq } => {
                write!(f, "custom({q0:?}, {p0:?}, {s_qq:?}, {s_pp:?}, {s_pq:?})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Integrator {
    Closed,
    Rk4,
    Both,
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Integrator::Closed => "closed",
            Integrator::Rk4 => "rk4",
            Integrator::Both => "both",
        })
    }
}

/// Complete declarative description of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub hbar: f64,
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub mu: f64,
    pub coefficients: CoefficientSpec,
    pub initial_state: InitialStateSpec,
    pub t_max: f64,
    pub samples: usize,
    pub integrator: Integrator,
    pub rk4_dt: f64,
}

const KEYS: [&str; 11] = [
    "hbar",
    "m",
    "omega",
    "lambda",
    "mu",
    "coefficients",
    "initial_state",
    "t_max",
    "samples",
    "integrator",
    "rk4_dt",
];
const REQUIRED: [&str; 6] = ["omega", "lambda", "mu", "coefficients", "initial_state", "t_max"];

/// Parses `name(a, b, ...)` or a bare `name`.
fn call_form(value: &str) -> Option<(&str, Vec<&str>)> {
    match value.find('(') {
        None => Some((value, Vec::new())),
        Some(open) => {
            let inner = value[open + 1..].strip_suffix(')')?;
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(str::trim).collect()
            };
            Some((value[..open].trim(), args))
        }
    }
}

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl Entry<'_> {
    fn err(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::syntax(Some(self.line), Some(self.key), message)
    }

    fn real(&self) -> Result<f64, ConfigError> {
        parse_real(self.value).ok_or_else(|| self.err(format!("expected a real number, got `{}`", self.value)))
    }

    fn args<const N: usize>(&self, name: &str, args: &[&str]) -> Result<[f64; N], ConfigError> {
        if args.len() != N {
            return Err(self.err(format!("`{name}` takes {N} arguments, got {}", args.len())));
        }
        let mut out = [0.0; N];
        for (slot, a) in out.iter_mut().zip(args) {
            *slot = parse_real(a).ok_or_else(|| self.err(format!("`{a}` is not a real number")))?;
        }
        Ok(out)
    }
}

fn parse_real(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::syntax(None, None, format!("cannot read {}: {e}", path.display()))
        })?;
        Ok(Self::parse(&text)?)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                ConfigError::syntax(Some(line), None, format!("expected `key = value`, got `{content}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(ConfigError::syntax(Some(line), Some(key), "unknown key"));
            }
            if !seen.insert(key) {
                return Err(ConfigError::syntax(Some(line), Some(key), "duplicate key"));
            }
            if value.is_empty() {
                return Err(ConfigError::syntax(Some(line), Some(key), "missing value"));
            }
            entries.push(Entry { line, key, value });
        }
        if let Some(missing) = REQUIRED.iter().find(|k| !seen.contains(*k)) {
            return Err(ConfigError::syntax(None, Some(missing), "required key is missing"));
        }

        let mut hbar = 1.0;
        let mut m = 1.0;
        let (mut omega, mut lambda, mut mu, mut t_max) = (0.0, 0.0, 0.0, 0.0);
        let mut coefficients = CoefficientSpec::Pure;
        let mut initial_state = InitialStateSpec::Ground;
        let mut samples = 200;
        let mut integrator = Integrator::Both;
        let mut rk4_dt = None;
        let mut line_of = std::collections::HashMap::new();

        for e in &entries {
            line_of.insert(e.key, e.line);
            match e.key {
                "hbar" => hbar = positive(e)?,
                "m" => m = positive(e)?,
                "omega" => omega = positive(e)?,
                "t_max" => t_max = positive(e)?,
                "rk4_dt" => rk4_dt = Some(positive(e)?),
                "lambda" => {
                    lambda = e.real()?;
                    if lambda < 0.0 {
                        return Err(e.err("must be non-negative"));
                    }
                }
                "mu" => mu = e.real()?,
                "samples" => {
                    samples = e
                        .value
                        .parse::<usize>()
                        .ok()
                        .filter(|n| *n > 0)
                        .ok_or_else(|| e.err(format!("expected a positive integer, got `{}`", e.value)))?;
                }
                "integrator" => {
                    integrator = match e.value {
                        "closed" => Integrator::Closed,
                        "rk4" => Integrator::Rk4,
                        "both" => Integrator::Both,
                        other => return Err(e.err(format!("expected closed, rk4 or both, got `{other}`"))),
                    }
                }
                "coefficients" => {
                    let (name, args) = call_form(e.value).ok_or_else(|| e.err("unbalanced parentheses"))?;
                    coefficients = match name {
                        "pure" if args.is_empty() => CoefficientSpec::Pure,
                        "explicit" => {
                            let [d_qq, d_pp, d_pq] = e.args::<3>(name, &args)?;
                            CoefficientSpec::Explicit { d_qq, d_pp, d_pq }
                        }
                        _ => return Err(e.err(format!("expected `pure` or `explicit(d_qq, d_pp, d_pq)`, got `{}`", e.value))),
                    }
                }
                "initial_state" => {
                    let (name, args) = call_form(e.value).ok_or_else(|| e.err("unbalanced parentheses"))?;
                    initial_state = match name {
                        "ground" if args.is_empty() => InitialStateSpec::Ground,
                        "coherent" => {
                            let [q0, p0] = e.args::<2>(name, &args)?;
                            InitialStateSpec::Coherent { q0, p0 }
                        }
                        "ccs" => {
                            let [r, eta, q0, p0] = e.args::<4>(name, &args)?;
                            InitialStateSpec::Ccs { r, eta, q0, p0 }
                        }
                        "custom" => {
                            let [q0, p0, s_qq, s_pp, s_pq] = e.args::<5>(name, &args)?;
                            InitialStateSpec::Custom { q0, p0, s_qq, s_pp, s_pq }
                        }
                        _ => return Err(e.err(format!("unrecognised initial state `{}`", e.value))),
                    }
                }
                _ => unreachable!("key list checked above"),
            }
        }

        let params = OscillatorParams::new(m, omega, lambda, mu, hbar)
            .map_err(|err| ConfigError::syntax(None, None, err.to_string()))?;

        if coefficients == CoefficientSpec::Pure {
            let line = line_of.get("coefficients").copied();
            if lambda == 0.0 {
                return Err(ConfigError::constraint(
                    line,
                    "coefficients",
                    "pure coefficients require friction (lambda > 0)",
                ));
            }
            if !params.is_underdamped() {
                return Err(ConfigError::constraint(
                    line,
                    "coefficients",
                    format!(
                        "pure coefficients require the underdamped regime omega > |mu|, \
                         got omega = {omega:?}, mu = {mu:?}"
                    ),
                ));
            }
        }
        if let CoefficientSpec::Explicit { d_qq, d_pp, .. } = coefficients {
            let zero_ok = lambda == 0.0 && d_qq == 0.0 && d_pp == 0.0;
            if !zero_ok && !(d_qq > 0.0 && d_pp > 0.0) {
                return Err(ConfigError::syntax(
                    line_of.get("coefficients").copied(),
                    Some("coefficients"),
                    "d_qq and d_pp must be positive",
                ));
            }
        }
        if let InitialStateSpec::Ccs { r, eta, .. } = initial_state {
            if !(r.abs() < 1.0 && eta > 0.0) {
                return Err(ConfigError::syntax(
                    line_of.get("initial_state").copied(),
                    Some("initial_state"),
                    "ccs requires |r| < 1 and eta > 0",
                ));
            }
        }
        if let InitialStateSpec::Custom { s_qq, s_pp, .. } = initial_state {
            if !(s_qq > 0.0 && s_pp > 0.0) {
                return Err(ConfigError::syntax(
                    line_of.get("initial_state").copied(),
                    Some("initial_state"),
                    "custom variances must be positive",
                ));
            }
        }

        Ok(Self {
            hbar,
            m,
            omega,
            lambda,
            mu,
            coefficients,
            initial_state,
            t_max,
            samples,
            integrator,
            rk4_dt: rk4_dt.unwrap_or_else(|| default_step(&params)),
        })
    }

    pub fn params(&self) -> Result<OscillatorParams> {
        OscillatorParams::new(self.m, self.omega, self.lambda, self.mu, self.hbar)
    }

    /// Diffusion coefficients, without the fundamental-constraint check.
    pub fn diffusion(&self) -> Result<DiffusionCoefficients> {
        let params = self.params()?;
        match self.coefficients {
            CoefficientSpec::Pure => purity_preserving_coefficients(&params),
            CoefficientSpec::Explicit { d_qq, d_pp, d_pq } => {
                if d_qq == 0.0 && d_pp == 0.0 && d_pq == 0.0 && self.lambda == 0.0 {
                    Ok(DiffusionCoefficients::closed_system())
                } else {
                    DiffusionCoefficients::new(d_qq, d_pp, d_pq)
                }
            }
        }
    }

    /// Initial state; fails with an uncertainty violation for an unphysical
    /// custom state.
    pub fn initial(&self) -> Result<GaussianState> {
        let params = self.params()?;
        match self.initial_state {
            InitialStateSpec::Ground => Ok(GaussianState::ground(&params)),
            InitialStateSpec::Coherent { q0, p0 } => GaussianState::coherent(q0, p0, &params),
            InitialStateSpec::Ccs { r, eta, q0, p0 } => {
                GaussianState::correlated_coherent(r, eta, q0, p0, &params)
            }
            InitialStateSpec::Custom { q0, p0, s_qq, s_pp, s_pq } => {
                GaussianState::new(q0, p0, s_qq, s_pp, s_pq, self.hbar)
            }
        }
    }

    /// `samples` equally spaced times from 0 to `t_max` inclusive.
    pub fn sample_times(&self) -> Vec<f64> {
        if self.samples == 1 {
            return vec![0.0];
        }
        let last = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|k| if k == self.samples - 1 { self.t_max } else { self.t_max * k as f64 / last })
            .collect()
    }

    /// `(key, value)` pairs in canonical order.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        vec![
            ("hbar", format!("{:?}", self.hbar)),
            ("m", format!("{:?}", self.m)),
            ("omega", format!("{:?}", self.omega)),
            ("lambda", format!("{:?}", self.lambda)),
            ("mu", format!("{:?}", self.mu)),
            ("coefficients", self.coefficients.to_string()),
            ("initial_state", self.initial_state.to_string()),
            ("t_max", format!("{:?}", self.t_max)),
            ("samples", self.samples.to_string()),
            ("integrator", self.integrator.to_string()),
            ("rk4_dt", format!("{:?}", self.rk4_dt)),
        ]
    }
}

fn positive(e: &Entry<'_>) -> Result<f64, ConfigError> {
    let v = e.real()?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(e.err(format!("must be positive, got {v:?}")))
    }
}
