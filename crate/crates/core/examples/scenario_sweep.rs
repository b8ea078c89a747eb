// Scenario files driven through the command layer: a steady-state sweep over
// mu that runs into the overdamped regime.
//
//     cargo run --example scenario_sweep

use oscillad::cli::{cmd_check, cmd_sweep, Format, ScenarioConfig, SweepParam};
use oscillad::Result;

const SCENARIO: &str = "\
# purity-preserving environment
omega = 1
lambda = 0.1
mu = 0
coefficients = pure
initial_state = ground
t_max = 50
";

pub fn run() -> Result<()> {
    let cfg = ScenarioConfig::parse(SCENARIO)?;
    print!("{}", cmd_check(&cfg)?.text);
    let out = cmd_sweep(&cfg, SweepParam::Mu, 0.0, 1.2, 7, Format::Csv)?;
    print!("{}", out.text);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
