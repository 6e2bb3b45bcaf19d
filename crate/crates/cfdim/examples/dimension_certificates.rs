//! Covering certificates: finite witnesses `(s, delta, start)` that the
//! covering series is summable at exponent `s`, giving a dimension upper
//! bound; for the G family, the stage-by-stage contraction audit.
//!
//! ```bash
//! cargo run --example dimension_certificates
//! ```

use cfdim::bounds::{check_f_constants, f_certificate, g_certificate, h_recursion_audit};
use cfdim::seqspec::parse;

fn main() {
    let nu = parse("nu(n) = n").unwrap();

    // The worked witness: at s = 0.30, (delta, N) = (0.1, 22) is valid.
    println!(
        "nu(n) = n, s = 0.30, witness (delta, N) = (0.1, 22): {}",
        check_f_constants(&nu, 0.30, 0.1, 22, 1000).unwrap()
    );

    match f_certificate(&nu, 0.30, 1000) {
        Ok(cert) => println!(
            "searched certificate: delta = {:.4}, N = {}, covering sum <= {:.3e}",
            cert.delta,
            cert.start,
            cert.covering_sum_bound.unwrap()
        ),
        Err(e) => println!("unexpected: {e}"),
    }
    // Below the critical exponent 1/4 the slack is eventually negative.
    match f_certificate(&nu, 0.24, 1000) {
        Ok(_) => println!("unexpected acceptance at s = 0.24"),
        Err(e) => println!("s = 0.24 rejected as it must be: {e}"),
    }

    // G family with gaps exactly 2n (beta = 2).
    let sigma = parse("sigma(n) = n^2 - n + 1").unwrap();
    let cert = g_certificate(&sigma, 0.30, 1000).unwrap();
    println!(
        "\ngap-2n sigma, s = 0.30: delta = {}, n_0 = {}, s n_0 = {}",
        cert.delta,
        cert.start,
        cert.side_condition_sn.unwrap()
    );

    // Each stage factor I of the covering recursion stays below 1, so the
    // truncated covering sums never grow.
    println!("contraction audit from n_0:");
    for row in h_recursion_audit(&sigma, 0.30, cert.start, 6).unwrap() {
        println!(
            "  stage n = {}: free segment {} digits, I <= {:.3e}",
            row.n, row.ell, row.stage_bound
        );
    }
}
