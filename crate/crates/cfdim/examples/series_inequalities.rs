//! The two series inequalities behind the covering bounds, checked as
//! rigorous (truncation + integral tail) estimates against their
//! closed-form right-hand sides.
//!
//! ```bash
//! cargo run --example series_inequalities
//! ```

use cfdim::bounds::{ap_series_bound, descend_sum_bound};

fn main() {
    // sum over M of prod_{i=0..ell} (a + iM)^(-2s)
    //   <= a^(1 - 2s ell) * 2s ell / (2s ell - 1)
    println!("AP-segment series vs closed form:");
    for (a, ell, s) in [(2u64, 3u32, 0.5), (1, 3, 0.5), (5, 6, 0.3), (10, 8, 0.26)] {
        let check = ap_series_bound(a, ell, s, 10_000).unwrap();
        println!(
            "  a = {a:2}, ell = {ell}, s = {s}: estimate in [{:.6e}, {:.6e}] <= rhs {:.6e}: {}",
            check.estimate.lower, check.estimate.upper, check.rhs, check.holds
        );
    }

    // sum over increasing tuples of (a_1 ... a_(n-1))^(-2s) a_n^(-gamma)
    //   <= (c - 1)^-(gamma + n(2s-1) - 2s)
    println!("\ndescending-tuple series vs closed form:");
    for (c, n, s, gamma) in [
        (3u64, 2u32, 0.5, 3.0),
        (2, 2, 0.5, 2.0), // boundary gamma
        (4, 3, 0.4, 2.6),
        (6, 4, 0.3, 4.0),
    ] {
        let check = descend_sum_bound(c, n, s, gamma, 10_000).unwrap();
        println!(
            "  c = {c}, n = {n}, s = {s}, gamma = {gamma}: estimate in [{:.6e}, {:.6e}] <= rhs {:.6e}: {}",
            check.estimate.lower, check.estimate.upper, check.rhs, check.holds
        );
    }

    // Tightening: growing the truncation narrows the bracket.
    println!("\nbracket tightening with the truncation level:");
    for trunc in [100u64, 1000, 10_000, 100_000] {
        let est = ap_series_bound(2, 3, 0.5, trunc).unwrap().estimate;
        println!(
            "  trunc = {trunc:6}: [{:.12}, {:.12}] (width {:.2e})",
            est.lower,
            est.upper,
            est.upper - est.lower
        );
    }
}
