//! The exact cylinder measure of the constructions: each free position
//! contributes `1/#L_n`, forced positions contribute nothing, and the
//! parent measure equals the sum over children exactly.
//!
//! ```bash
//! cargo run --example cylinder_measures
//! ```

use cfdim::cf::DigitSeq;
use cfdim::lambda::{min_point, mu_additivity_check, mu_cylinder, sample_point, LambdaParams};
use cfdim::logs::window_size;
use cfdim::seqspec::parse;
use num_bigint::BigUint;

fn main() {
    let nu = parse("nu(n) = n").unwrap();
    let params = LambdaParams::new_f(nu, 2, 30).unwrap();

    println!("window sizes #L_n = (2n+1)^t - (2n)^t at t = 2:");
    for n in 1u32..=4 {
        println!("  #L_{n} = {}", window_size(2, &BigUint::from(n)));
    }

    for digits in [vec![4u64], vec![4, 16], vec![4, 16, 36], vec![4, 16, 36, 37]] {
        let d = DigitSeq::from_u64s(&digits).unwrap();
        println!("mu(I_{}({d})) = {}", d.len(), mu_cylinder(&params, &d).unwrap());
    }
    let off = DigitSeq::from_u64s(&[3]).unwrap();
    println!("mu(I_1([3])) = {} (digit outside its window)", mu_cylinder(&params, &off).unwrap());

    // Compatibility: sum of children equals the parent, exactly.
    let d = DigitSeq::from_u64s(&[4]).unwrap();
    let rep = mu_additivity_check(&params, &d).unwrap();
    println!(
        "\nchildren of [4]: {} x {} = {} vs parent {} (exact: {})",
        rep.child_count, rep.child_measure, rep.sum, rep.parent, rep.exact_match
    );

    // A forced position has a single child of equal measure.
    let d = min_point(&params, 3).unwrap();
    let rep = mu_additivity_check(&params, &d).unwrap();
    println!(
        "children of {d}: {} child, measure preserved: {}",
        rep.child_count, rep.exact_match
    );

    // Deeper random prefixes keep exact compatibility.
    let point = sample_point(&params, 9, 20).unwrap();
    let rep = mu_additivity_check(&params, &point).unwrap();
    println!(
        "depth-20 prefix: {} children, exact: {} (exhaustive: {})",
        rep.child_count, rep.exact_match, rep.exhaustive
    );
}
