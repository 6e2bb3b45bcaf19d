//! The mass-distribution side: along construction points, the ratio
//! `log mu(I_n) / log |I_n|` dominates `min(A_k, B_k)`, cylinder lengths
//! shrink regularly, and small balls meet at most 4 cylinders.
//!
//! ```bash
//! cargo run --example local_dimension
//! ```

use cfdim::cf::interval_length;
use cfdim::lambda::{
    length_ratio_series, local_dim_series, neighbor_count_check, sample_point, LambdaParams,
};
use cfdim::seqspec::parse;

fn main() {
    let nu = parse("nu(n) = n").unwrap();
    let params = LambdaParams::new_f(nu, 2, 200).unwrap();
    let point = sample_point(&params, 1, 200).unwrap();

    let rows = local_dim_series(&params, &point, 200).unwrap();
    println!("n, ratio, bound = min(A_k, B_k):");
    for row in rows.iter().filter(|r| r.n % 25 == 0 || r.n == 1) {
        match row.bound {
            Some(b) => println!(
                "  n = {:3}: {:.6} >= {:.6} (margin {:+.4})",
                row.n,
                row.ratio,
                b,
                row.ratio - b
            ),
            None => println!("  n = {:3}: {:.6} (first free block, no pair bound)", row.n, row.ratio),
        }
    }
    let worst = rows
        .iter()
        .filter_map(|r| r.bound.map(|b| r.ratio - b))
        .fold(f64::INFINITY, f64::min);
    println!("worst margin over all 200 depths: {worst:+.6}");

    // Consecutive cylinder lengths shrink at a ratio tending to 1.
    let series = length_ratio_series(&point, 199).unwrap();
    println!(
        "\nlog|I_n|/log|I_(n+1)| at n = 50, 100, 199: {:.4}, {:.4}, {:.4}",
        series[49], series[99], series[198]
    );

    // Neighbor bound: with |I_(n+1)| <= r < |I_n|, the ball B(x, r) meets
    // at most 4 depth-n cylinders.
    for depth in [10usize, 20, 30] {
        let r = interval_length(&point.prefix(depth + 1).unwrap()).unwrap();
        let count = neighbor_count_check(&point, &r).unwrap();
        println!("ball at scale |I_{}|: meets {count} depth-{depth} cylinders", depth + 1);
    }
}
