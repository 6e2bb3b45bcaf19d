//! The V/W block partitions behind the constructions (free blocks vs
//! forced AP continuations) and growth-constant estimation for sequence
//! definitions.
//!
//! ```bash
//! cargo run --example block_partitions
//! ```

use cfdim::ap::{blocks_for_f, blocks_for_g, default_f_schedule, growth_constants};
use cfdim::seqspec::parse;

fn main() {
    let nu = parse("nu(n) = n").unwrap();
    let schedule = default_f_schedule(&nu, 5).unwrap();
    println!("default F schedule for nu(n) = n: {schedule:?}");
    let partition = blocks_for_f(&nu, &schedule).unwrap();
    println!("blocks (V = free digits, W = forced AP continuation):");
    for b in partition.blocks().iter().take(8) {
        println!(
            "  {:?}_{}: [{}, {}]{}",
            b.kind,
            b.k,
            b.lo,
            b.hi,
            if b.is_empty() { " (empty)" } else { "" }
        );
    }
    println!("contiguous: {}", partition.is_contiguous());

    let sigma = parse("sigma(n) = n*(n+1)").unwrap();
    let partition = blocks_for_g(&sigma, 5).unwrap();
    println!("\nG blocks for sigma(n) = n(n+1):");
    for b in partition.blocks() {
        println!(
            "  {:?}_{}: [{}, {}]{}",
            b.kind,
            b.k,
            b.lo,
            b.hi,
            if b.is_empty() { " (empty)" } else { "" }
        );
    }

    // Growth constants drive the dimension formulas.
    for text in ["nu(n) = 2*n", "sigma(n) = n*(n+1)", "nu(n) = n^2"] {
        let spec = parse(text).unwrap();
        let report = growth_constants(&spec, 2000).unwrap();
        println!(
            "\n{text}: estimate {:?}, converged {}, last-decade oscillation {:.2e}",
            report.estimate, report.converged, report.oscillation
        );
    }
}
