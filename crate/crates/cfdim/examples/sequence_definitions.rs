//! The sequence definition language: expressions over `n` with exact
//! integer semantics, tabulated forms for pinned experiments, and the
//! validation rules (positivity, monotonicity, sigma gaps).
//!
//! ```bash
//! cargo run --example sequence_definitions
//! ```

use cfdim::seqspec::parse;

fn main() {
    for text in [
        "nu(n) = 2*n",
        "sigma(n) = n*(n+1)/2 + 5",
        "nu(n) = floor(n/3) + n",
    ] {
        let spec = parse(text).unwrap();
        let values = spec.eval_range(1, 6).unwrap();
        println!("{text}");
        println!("  canonical form: {}", spec.unparse());
        println!("  first values:   {values:?}");
    }

    // Tabulated definitions pin finite experiments exactly; reaching past
    // the table is an error, not an extrapolation.
    let table = parse("nu = [4,16,36,64]").unwrap();
    println!("\n{}", table.unparse());
    println!("  values 1..4: {:?}", table.eval_range(1, 4).unwrap());
    println!("  value at 5:  {}", table.eval(5).unwrap_err());

    // Division is exact-rational with an integrality check per n.
    let spec = parse("nu(n) = n/2").unwrap();
    println!("\nnu(n) = n/2 at n = 4: {:?}", spec.eval(4));
    println!("nu(n) = n/2 at n = 3: {:?}", spec.eval(3).err());

    // Validation examples.
    for text in ["sigma(n) = n^2", "sigma(n) = n + 10", "nu(n) = n - 5"] {
        let spec = parse(text).unwrap();
        let report = spec.validate(100);
        match report.first_violation {
            None => println!("{text}: valid to horizon 100"),
            Some(n) => println!(
                "{text}: fails at n = {n} ({})",
                report.reason.unwrap_or_default()
            ),
        }
    }

    // Parse errors carry positions.
    let err = parse("nu(n) = 2 +").unwrap_err();
    println!("\n'nu(n) = 2 +' -> {err}");
}
