//! One PASS/FAIL line per acceptance criterion.

use betadet::verify::{run, DEFAULT_SEED};

#[test]
fn acceptance() {
    let report = run(None, DEFAULT_SEED).expect("suite runs");
    for c in &report.criteria {
        println!("{}", c.line());
        for k in &c.checks {
            let v = if k.pass { "ok  " } else { "FAIL" };
            println!("    {v} {} = {:.6e} (target {})", k.label, k.measured, k.target);
        }
    }
    let failed: Vec<u32> = report.criteria.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
