//! Reproducing the closed-form dimension values numerically: bisection
//! over the exponent finds the smallest certified `s`, which brackets the
//! formula value `1/(2(1+alpha))` or `(beta-1)/(2 beta)` from above,
//! while the ratio-series trend brackets it from below.
//!
//! ```bash
//! cargo run --example dimension_scan
//! ```

use cfdim::ap::Growth;
use cfdim::bounds::{dim_formula, dim_upper_scan};
use cfdim::lambda::{ratio_series, Family, LambdaParams};
use cfdim::seqspec::parse;

fn main() {
    println!("closed forms:");
    for (family, growth, label) in [
        (Family::F, Growth::Finite(0.0), "F, alpha = 0"),
        (Family::F, Growth::Finite(1.0), "F, alpha = 1"),
        (Family::F, Growth::Finite(3.0), "F, alpha = 3"),
        (Family::F, Growth::Infinite, "F, alpha = inf"),
        (Family::G, Growth::Finite(2.0), "G, beta = 2"),
        (Family::G, Growth::Infinite, "G, beta = inf"),
    ] {
        println!("  {label}: {}", dim_formula(family, growth).unwrap());
    }

    println!("\nscan vs formula (tol 5e-3, horizon 4000):");
    for (text, family, formula) in [
        ("nu(n) = n", Family::F, 0.25),
        ("nu(n) = 3*n", Family::F, 0.125),
        ("sigma(n) = n*(n+1)", Family::G, 0.25),
    ] {
        let spec = parse(text).unwrap();
        let scan = dim_upper_scan(&spec, family, 5e-3, 4000).unwrap();
        println!(
            "  {text}: scan {:.4}, formula {formula}, gap {:+.4}",
            scan.s,
            scan.s - formula
        );
    }

    // Bracketing at t = 10: the lower machinery comes within 0.06 of
    // (t-1)/(2t(1+alpha)) = 9/40 and stays below the upper scan.
    let nu = parse("nu(n) = n").unwrap();
    let params = LambdaParams::with_pairs(Family::F, nu, 10, 9).unwrap();
    let series = ratio_series(&params, 8).unwrap();
    let last = series.rows.last().unwrap();
    let nu = parse("nu(n) = n").unwrap();
    let scan = dim_upper_scan(&nu, Family::F, 5e-3, 4000).unwrap();
    println!(
        "\nbracketing at t = 10: A_{} = {:.4} <= true value 0.25 <= scan {:.4}",
        last.k, last.a.value, scan.s
    );
}
