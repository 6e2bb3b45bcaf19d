//! The block ratio sequences A_k and B_k and their closed-form limits:
//! `(t-1)/(2t(1+alpha))` and `(t-1)/(2t)` for F, the lower bound
//! `(t-1)(beta-1)/(2t beta)` for G. Block bounds grow past 10^60, which
//! the log-sum machinery handles without ever materializing a digit.
//!
//! ```bash
//! cargo run --example ratio_limits
//! ```

use cfdim::lambda::{ratio_series, Family, LambdaParams};
use cfdim::seqspec::parse;

fn main() {
    for t in [2u32, 3, 10] {
        let nu = parse("nu(n) = n").unwrap();
        let params = LambdaParams::with_pairs(Family::F, nu, t, 9).unwrap();
        let series = ratio_series(&params, 8).unwrap();
        println!(
            "F family, nu(n) = n, t = {t}: limits A -> {:.6}, B -> {:.6}",
            series.a_limit, series.b_limit
        );
        for row in &series.rows {
            println!(
                "  k = {}: A_k = {:.6} (err {:.1e})  B_k = {:.6}",
                row.k, row.a.value, row.a.err, row.b.value
            );
        }
        let last = series.rows.last().unwrap();
        println!(
            "  gap to limit at k = {}: {:+.5}\n",
            last.k,
            last.a.value - series.a_limit
        );
    }

    let sigma = parse("sigma(n) = n*(n+1)").unwrap();
    let params = LambdaParams::with_pairs(Family::G, sigma, 3, 41).unwrap();
    let series = ratio_series(&params, 40).unwrap();
    println!(
        "G family, sigma(n) = n(n+1), t = 3: A bounded below by {:.6}, B -> {:.6}",
        series.a_limit, series.b_limit
    );
    for row in series.rows.iter().filter(|r| r.k % 10 == 0) {
        println!("  k = {}: A_k = {:.6}  B_k = {:.6}", row.k, row.a.value, row.b.value);
    }
}
