//! Runs the thirteen acceptance criteria and prints one pass/fail line for each.

use std::time::Instant;

use tiltlab::suite::{run, SuiteConfig, CRITERIA};

/// Criteria whose published expectation does not hold for the shipped fixture.
/// Criterion 7: the A_7 algebra is stably 4-CY, not 3-CY (see README).
const KNOWN_FAILING: [usize; 1] = [7];

#[test]
fn acceptance_criteria() {
    let cfg = SuiteConfig::default();
    let mut unexpected = Vec::new();
    for n in 1..=CRITERIA.len() {
        let start = Instant::now();
        let outcome = run(n, &cfg);
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match &outcome {
            Ok(o) => {
                let failed: Vec<&str> = o.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                (o.passed(), format!("{} checks, failed: {failed:?}", o.checks.len()))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {n:>2} [{}] {} ({secs:.2}s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            CRITERIA[n - 1]
        );
        if pass == KNOWN_FAILING.contains(&n) {
            unexpected.push(n);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
