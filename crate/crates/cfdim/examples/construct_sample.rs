//! Sampling points of the Cantor-type constructions: free digits uniform
//! on the windows `[(2n)^t, (2n+1)^t)`, forced digits continuing APs, and
//! the exact boundary inequality that keeps everything strictly
//! increasing.
//!
//! ```bash
//! cargo run --example construct_sample
//! ```

use cfdim::lambda::{boundary_chain_holds, digit_window, min_point, sample_point, LambdaParams, WindowRule};
use cfdim::seqspec::parse;
use num_bigint::BigUint;

fn main() {
    let nu = parse("nu(n) = n").unwrap();
    let params = LambdaParams::new_f(nu, 2, 30).unwrap();

    println!("digit rules for the first positions (t = 2):");
    for n in 1u32..=8 {
        match digit_window(&params, &BigUint::from(n)).unwrap() {
            WindowRule::Free { lo, hi } => println!("  n = {n}: free in [{lo}, {hi})"),
            WindowRule::Forced { anchor, offset } => {
                println!("  n = {n}: forced a_{anchor} + {offset}")
            }
        }
    }

    let point = sample_point(&params, 42, 30).unwrap();
    println!("\nseed 42: {point}");
    println!(
        "strictly increasing: {}, boundary chain holds: {}",
        point.is_strictly_increasing(),
        boundary_chain_holds(&params, &point).unwrap()
    );

    // Same seed, same point; the minimal point is a deterministic worked
    // example with every free digit at the bottom of its window.
    let again = sample_point(&params, 42, 30).unwrap();
    println!("deterministic given the seed: {}", point == again);
    println!("minimal point: {}", min_point(&params, 12).unwrap());

    let sigma = parse("sigma(n) = n*(n+1)").unwrap();
    let params = LambdaParams::new_g(sigma, 3, 25).unwrap();
    let point = sample_point(&params, 42, 25).unwrap();
    println!("\nG family, t = 3, seed 42: {point}");
    println!(
        "strictly increasing: {}, boundary chain holds: {}",
        point.is_strictly_increasing(),
        boundary_chain_holds(&params, &point).unwrap()
    );
}
