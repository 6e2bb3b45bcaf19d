//! Fundamental intervals: exact endpoints with parity orientation, the
//! length identity `|I_n| = 1/(q_n (q_n + q_(n-1)))`, nesting, and the
//! length/splitting bounds checked in exact arithmetic.
//!
//! ```bash
//! cargo run --example fundamental_intervals
//! ```

use cfdim::cf::{fundamental_interval, verify_qn_bounds, DigitSeq};

fn main() {
    for digits in [vec![2u64], vec![1, 2], vec![1, 2, 3], vec![3, 7, 15, 31]] {
        let d = DigitSeq::from_u64s(&digits).unwrap();
        let iv = fundamental_interval(&d).unwrap();
        println!(
            "I_{}({d}) = {}{}, {}{}  length {}",
            iv.depth,
            if iv.closed_left { "[" } else { "(" },
            iv.lo,
            iv.hi,
            if iv.closed_left { ")" } else { "]" },
            iv.length(),
        );
    }

    // Nesting: each deeper interval sits inside its parent.
    let d = DigitSeq::from_u64s(&[3, 7, 15, 31]).unwrap();
    println!("\nnesting along {d}:");
    for depth in 2..=d.len() {
        let inner = fundamental_interval(&d.prefix(depth).unwrap()).unwrap();
        let outer = fundamental_interval(&d.prefix(depth - 1).unwrap()).unwrap();
        println!(
            "  I_{depth} inside I_{}: {}",
            depth - 1,
            outer.contains_interval(&inner)
        );
    }

    // The three standard bounds at each split index.
    println!("\nbounds for {d}:");
    for k in 1..=d.len() {
        let rep = verify_qn_bounds(&d, k).unwrap();
        println!(
            "  k = {k}: length-vs-q {}  digit-products {}  split ratio {} in [1,2]: {}",
            rep.length_vs_qn, rep.length_vs_digit_products, rep.split_ratio, rep.split_ratio_in_range,
        );
    }
}
