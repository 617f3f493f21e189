//! Runs every invariant suite and prints the failed checks, if any.
use kicklab::scenario::verify_all;

fn main() -> kicklab::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let report = verify_all(seed, None)?;
    println!("{} checks with seed {seed}", report.checks.len());
    for c in report.failed_checks() {
        println!("FAIL {} = {:e} (tolerance {:?})", c.name, c.value, c.tolerance);
    }
    println!("{}", if report.passed { "all green" } else { "failures above" });
    Ok(())
}
