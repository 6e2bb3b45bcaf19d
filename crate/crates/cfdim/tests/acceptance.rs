//! Acceptance suite: every criterion runs serially at its pinned
//! tolerance, printing one pass/fail line per criterion (visible with
//! `cargo test --test acceptance -- --nocapture`). All criteria are
//! evaluated even if an early one fails; the final assertion lists every
//! failure.

use cfdim::verify::{
    all_pass, suite_bracketing, suite_closed_forms, suite_lambda_subset, suite_local_dim,
    suite_measure, suite_neighbor, suite_qn_bounds, suite_series, PropertyResult,
};
use std::time::Instant;

struct CriterionOutcome {
    name: &'static str,
    pass: bool,
    elapsed_s: f64,
    budget_s: u64,
}

fn run_criterion(
    name: &'static str,
    budget_s: u64,
    runner: impl FnOnce() -> Vec<PropertyResult>,
) -> CriterionOutcome {
    let started = Instant::now();
    let results = runner();
    let elapsed_s = started.elapsed().as_secs_f64();
    let pass = all_pass(&results) && elapsed_s < budget_s as f64;
    println!(
        "{name}: {} ({elapsed_s:.1}s / budget {budget_s}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    for r in &results {
        println!(
            "  [{}] {}: {}",
            if r.pass { "ok" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    CriterionOutcome {
        name,
        pass,
        elapsed_s,
        budget_s,
    }
}

#[test]
fn acceptance_criteria() {
    let outcomes = vec![
        // 10^4 random rationals round-trip exactly; 10^4 random digit
        // tuples satisfy the length and splitting bounds at every index.
        run_criterion("criterion 1 (exact CF oracle)", 30, || {
            suite_qn_bounds(10_000, 10_000, 0xC1)
        }),
        // Exact depth-1 normalization and exact parent-equals-children
        // compatibility on 10^3 random prefixes, t in {2,3}, F and G.
        run_criterion("criterion 2 (measure suite)", 60, || {
            suite_measure(1000, 0xC2)
        }),
        // 10^3 sampled points per (family, t in {2,3}) at depth 500:
        // strict increase plus the exact block-boundary inequality.
        run_criterion("criterion 3 (lambda subset of J)", 120, || {
            suite_lambda_subset(1000, 500, 0xC3)
        }),
        // Series inequalities on the full parameter grids.
        run_criterion("criterion 4 (series inequalities)", 120, || {
            suite_series(10_000)
        }),
        // Local-dimension bound at depth 200 for F (nu = n) and G
        // (sigma = n(n+1)), t = 2: ratio >= min(A_k, B_k) - 1e-6.
        run_criterion("criterion 5 (lower-bound ratio)", 300, || {
            suite_local_dim(200, 3, 0xC5)
        }),
        // Formula values 1/4, 1/8, 1/4, 1/2, 0; scans within 1e-2 at
        // tol = 5e-3.
        run_criterion("criterion 6 (closed-form reproduction)", 600, || {
            suite_closed_forms(5e-3, 4000)
        }),
        // t = 10 ratio trend within 0.06 of 9/40 and below scan + 1e-2.
        run_criterion("criterion 7 (bracketing)", 600, || suite_bracketing(4000)),
        // Ball-to-cylinder count <= 4 on 10^3 (point, radius) pairs.
        run_criterion("criterion 8 (neighbor bound)", 60, || {
            suite_neighbor(1000, 0xC8)
        }),
    ];

    let failures: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| {
            format!(
                "{} ({:.1}s / budget {}s)",
                o.name, o.elapsed_s, o.budget_s
            )
        })
        .collect();
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
