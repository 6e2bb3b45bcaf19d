//! Arithmetic-progression structure in digit sequences: window tests,
//! maximal-run scanning, and finite-depth membership checks for the F-
//! and G-families.
//!
//! ```bash
//! cargo run --example ap_detection
//! ```

use cfdim::ap::{check_f_membership, check_g_membership, find_ap_runs, is_ap};
use cfdim::cf::DigitSeq;
use cfdim::lambda::{sample_point, LambdaParams};
use cfdim::seqspec::parse;
use num_bigint::BigUint;

fn window(digits: &[u64]) -> Vec<BigUint> {
    digits.iter().map(|&d| BigUint::from(d)).collect()
}

fn main() {
    for w in [vec![3u64, 5, 7, 9], vec![1, 2, 4], vec![4, 4, 4]] {
        match is_ap(&window(&w)) {
            Some(m) => println!("{w:?} is an AP with difference {m}"),
            None => println!("{w:?} is not an AP"),
        }
    }

    let d = DigitSeq::from_u64s(&[1, 3, 5, 6, 8, 10, 12]).unwrap();
    println!("\nmaximal runs of length >= 3 in {d}:");
    for run in find_ap_runs(&d, 3) {
        println!(
            "  start {} len {}: first {}, difference {}",
            run.start, run.len, run.first, run.difference
        );
    }

    // An F-construction sample carries AP windows at each scheduled anchor.
    let nu = parse("nu(n) = n").unwrap();
    let params = LambdaParams::new_f(nu, 2, 60).unwrap();
    let point = sample_point(&params, 7, 60).unwrap();
    let report = check_f_membership(&point, &params.spec).unwrap();
    println!(
        "\nF sample: verdict {:?}, witnesses at n = {:?}",
        report.verdict,
        report
            .witnesses
            .iter()
            .map(|(n, _)| *n)
            .collect::<Vec<_>>()
    );

    // A G-construction sample passes its scheduled windows at every depth;
    // corrupting one digit inside a window is detected.
    let sigma = parse("sigma(n) = n*(n+1)").unwrap();
    let params = LambdaParams::new_g(sigma, 2, 60).unwrap();
    let point = sample_point(&params, 7, 60).unwrap();
    let report = check_g_membership(&point, &params.spec, 1).unwrap();
    println!("G sample: verdict {:?}", report.verdict);

    let mut digits = point.digits().to_vec();
    digits[13] += 1u32; // last digit of the window at sigma_3 = 12
    let corrupted = DigitSeq::new(digits).unwrap();
    let report = check_g_membership(&corrupted, &params.spec, 1).unwrap();
    println!(
        "corrupted G sample: verdict {:?}, first violation at n = {:?}",
        report.verdict, report.first_violation
    );
}
