//! Runs a scenario described in the same `key = value` format the CLI reads.
use kicklab::scenario::{run_scenario, ScenarioConfig};

const CONFIG: &str = "
experiment = which-way-violated
packet_width = 0.5
center_a = 10
center_b = -10
# far too wide to fit between the packets
pointer_width = 4
";

fn main() -> kicklab::Result<()> {
    let mut cfg = ScenarioConfig::parse(CONFIG, None)?;
    cfg.apply_override("detector_delta_f=0.5")?;
    let out = run_scenario(&cfg)?;
    for check in &out.report.checks {
        println!("{} {} ({:.3e})", if check.passed { "PASS" } else { "FAIL" }, check.name, check.value);
    }
    for (name, _) in &out.files {
        println!("would write {name}");
    }
    Ok(())
}
