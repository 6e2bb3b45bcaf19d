//! Exact continued-fraction expansion of rationals, the convergent
//! recursion, and the Gauss map acting as the digit shift.
//!
//! ```bash
//! cargo run --example expand_and_convergents
//! ```

use cfdim::cf::{convergents, expand, gauss_map, parse_rational, value, DigitSeq};

fn main() {
    let x = parse_rational("7/10").unwrap();
    let digits = expand(&x).unwrap();
    println!("7/10 = {digits}");

    println!("\nconvergents of {digits}:");
    for c in convergents(&digits).unwrap() {
        println!("  p_{}/q_{} = {}/{}", c.index, c.index, c.p, c.q);
    }

    // The Gauss map drops the first digit: T(value([1,2,3])) = value([2,3]).
    let shifted = gauss_map(&x).unwrap();
    println!("\nT(7/10) = {shifted} = {}", expand(&shifted).unwrap());

    // Round trip through a larger example.
    let d = DigitSeq::from_u64s(&[2, 5, 11, 23, 47]).unwrap();
    let v = value(&d).unwrap();
    let back = expand(&v).unwrap();
    println!("\nvalue({d}) = {v}");
    println!("expand back: {back} (round trip exact: {})", back == d);
}
