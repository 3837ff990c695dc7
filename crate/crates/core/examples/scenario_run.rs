//! Runs named checks of a scenario with the default configuration and
//! prints the summary.

use slice_hardy::scenario::{run_scenario, CheckName, ScenarioConfig};

fn main() -> slice_hardy::Result<()> {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let checks = if names.is_empty() {
        CheckName::ALL.to_vec()
    } else {
        names.iter().map(|n| n.parse()).collect::<slice_hardy::Result<Vec<_>>>()?
    };
    let sc = ScenarioConfig::default().validate()?;
    let out = std::env::temp_dir().join("slice-hardy-scenario");
    let t0 = std::time::Instant::now();
    let summary = run_scenario(&sc, &checks, &out)?;
    print!("{summary}");
    println!("{} in {:.2?}; artifacts in {}", if summary.passed() { "passed" } else { "failed" }, t0.elapsed(), out.display());
    Ok(())
}
