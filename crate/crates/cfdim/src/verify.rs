//! Named verification suites over the whole library, shared by the CLI
//! `verify` subcommand and the acceptance test target. Every suite returns
//! a list of per-property pass/fail results and never panics on failure,
//! so a runner can print one line per property.

use crate::ap::Growth;
use crate::bounds::{
    ap_series_bound, check_f_constants, check_g_constants, descend_sum_bound, dim_formula,
    dim_upper_scan, f_certificate, g_certificate, h_recursion_audit,
};
use crate::cf::{convergents, expand, qn_bounds_hold_everywhere, verify_qn_bounds, DigitSeq};
use crate::lambda::{
    boundary_chain_holds, local_dim_series, mu_additivity_check, mu_cylinder,
    neighbor_count_check, ratio_series, sample_point, Family, LambdaParams,
};
use crate::logs::window_bounds;
use crate::seqspec::parse;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, serde::Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl PropertyResult {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        PropertyResult {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

pub fn all_pass(results: &[PropertyResult]) -> bool {
    results.iter().all(|r| r.pass)
}

/// Exact continued-fraction oracle: expand/convergents round trips on
/// random rationals, and the length/splitting bounds on random tuples
/// (all split indices, exact rational comparisons).
pub fn suite_qn_bounds(rationals: usize, tuples: usize, seed: u64) -> Vec<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();

    let mut round_trip_failures = 0usize;
    for _ in 0..rationals {
        let den = rng.gen_range(2u64..=1_000_000);
        let num = rng.gen_range(1u64..den);
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let ok = expand(&x)
            .and_then(|d| convergents(&d))
            .map(|cs| cs.last().unwrap().to_rational() == x)
            .unwrap_or(false);
        if !ok {
            round_trip_failures += 1;
        }
    }
    results.push(PropertyResult::new(
        "cf/round-trip",
        round_trip_failures == 0,
        format!("{rationals} rationals (den <= 10^6), {round_trip_failures} failures"),
    ));

    let mut bound_failures = 0usize;
    let mut spot_checks = 0usize;
    for i in 0..tuples {
        let depth = rng.gen_range(1usize..=30);
        let digits: Vec<u64> = (0..depth).map(|_| rng.gen_range(1u64..=1000)).collect();
        let d = DigitSeq::from_u64s(&digits).unwrap();
        if !qn_bounds_hold_everywhere(&d).unwrap_or(false) {
            bound_failures += 1;
        }
        // Spot-check the per-index report against the batched pass.
        if i % 16 == 0 {
            spot_checks += 1;
            let k = rng.gen_range(1usize..=depth);
            match verify_qn_bounds(&d, k) {
                Ok(rep) if rep.all_pass() => {}
                _ => bound_failures += 1,
            }
        }
    }
    results.push(PropertyResult::new(
        "cf/qn-bounds",
        bound_failures == 0,
        format!(
            "{tuples} tuples, all split indices ({spot_checks} per-index spot checks), {bound_failures} failures"
        ),
    ));
    results
}

fn families_and_t() -> Vec<(Family, u32)> {
    vec![
        (Family::F, 2),
        (Family::F, 3),
        (Family::G, 2),
        (Family::G, 3),
    ]
}

fn params_for(family: Family, t: u32, depth: u64) -> LambdaParams {
    match family {
        Family::F => {
            let nu = parse("nu(n) = n").unwrap();
            LambdaParams::new_f(nu, t, depth).unwrap()
        }
        Family::G => {
            let sigma = parse("sigma(n) = n*(n+1)").unwrap();
            LambdaParams::new_g(sigma, t, depth).unwrap()
        }
    }
}

/// Measure suite: exact depth-1 normalization and exact compatibility
/// (parent equals the sum of its children) on random admissible prefixes.
pub fn suite_measure(prefixes: usize, seed: u64) -> Vec<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();

    let mut norm_ok = true;
    for (family, t) in families_and_t() {
        let params = params_for(family, t, 50);
        let (lo, hi) = window_bounds(t, &BigUint::one());
        let mut sum = BigRational::zero();
        let mut g = lo;
        while g < hi {
            sum += mu_cylinder(&params, &DigitSeq::new(vec![g.clone()]).unwrap()).unwrap();
            g += 1u32;
        }
        if sum != BigRational::one() {
            norm_ok = false;
        }
    }
    results.push(PropertyResult::new(
        "measure/normalization",
        norm_ok,
        "sum of depth-1 cylinder measures equals 1 exactly (t in {2,3}, F and G)".to_string(),
    ));

    let configs = families_and_t();
    let mut failures = 0usize;
    for i in 0..prefixes {
        let (family, t) = configs[i % configs.len()];
        let params = params_for(family, t, 50);
        let depth = rng.gen_range(1u64..=40);
        let d = sample_point(&params, rng.gen(), depth).unwrap();
        match mu_additivity_check(&params, &d) {
            Ok(rep) if rep.exact_match => {}
            _ => failures += 1,
        }
    }
    results.push(PropertyResult::new(
        "measure/compatibility",
        failures == 0,
        format!("{prefixes} random admissible prefixes, {failures} failures"),
    ));
    results
}

/// Constructed points stay inside the strictly increasing digit set, with
/// the block-boundary chain checked as an exact integer inequality.
pub fn suite_lambda_subset(samples: usize, depth: u64, seed: u64) -> Vec<PropertyResult> {
    let mut results = Vec::new();
    for (family, t) in families_and_t() {
        let params = params_for(family, t, depth);
        let mut increase_failures = 0usize;
        let mut chain_failures = 0usize;
        for i in 0..samples {
            let d = sample_point(&params, seed.wrapping_add(i as u64), depth).unwrap();
            if !d.is_strictly_increasing() {
                increase_failures += 1;
            }
            if !boundary_chain_holds(&params, &d).unwrap() {
                chain_failures += 1;
            }
        }
        results.push(PropertyResult::new(
            &format!("lambda/strict-increase/{family}-t{t}"),
            increase_failures == 0,
            format!("{samples} samples at depth {depth}, {increase_failures} failures"),
        ));
        results.push(PropertyResult::new(
            &format!("lambda/boundary-chain/{family}-t{t}"),
            chain_failures == 0,
            format!("{samples} samples at depth {depth}, {chain_failures} failures"),
        ));
    }
    results
}

/// The two series inequalities on their parameter grids: rigorous upper
/// estimates never exceed the closed-form right-hand sides.
pub fn suite_series(trunc: u64) -> Vec<PropertyResult> {
    let mut results = Vec::new();

    let s_grid = [0.26, 0.30, 0.40, 0.50];
    let mut ap_points = 0usize;
    let mut ap_failures = Vec::new();
    for a in 1u64..=10 {
        for ell in 3u32..=8 {
            for &s in &s_grid {
                if 2.0 * s * ell as f64 <= 1.0 {
                    continue;
                }
                ap_points += 1;
                match ap_series_bound(a, ell, s, trunc) {
                    Ok(check) if check.holds => {}
                    _ => ap_failures.push(format!("(a={a}, ell={ell}, s={s})")),
                }
            }
        }
    }
    results.push(PropertyResult::new(
        "series/ap-progression-bound",
        ap_failures.is_empty(),
        format!("{ap_points} grid points, failures: {ap_failures:?}"),
    ));

    let mut descend_points = 0usize;
    let mut descend_failures = Vec::new();
    for c in 2u64..=6 {
        for n in 2u32..=4 {
            for &s in &s_grid {
                let boundary = 2.0 - (n as f64 - 1.0) * (2.0 * s - 1.0);
                for gamma in [boundary, boundary + 0.5, boundary + 2.0] {
                    descend_points += 1;
                    match descend_sum_bound(c, n, s, gamma, trunc) {
                        Ok(check) if check.holds => {}
                        _ => descend_failures.push(format!("(c={c}, n={n}, s={s}, gamma={gamma})")),
                    }
                }
            }
        }
    }
    results.push(PropertyResult::new(
        "series/descending-sum-bound",
        descend_failures.is_empty(),
        format!("{descend_points} grid points, failures: {descend_failures:?}"),
    ));
    results
}

/// Local-dimension lower bound: the exact-log measure-to-length ratio
/// dominates `min(A_k, B_k) - 1e-6` at every depth where the pair bound
/// is defined.
pub fn suite_local_dim(depth: u64, samples: usize, seed: u64) -> Vec<PropertyResult> {
    let mut results = Vec::new();
    for family in [Family::F, Family::G] {
        let params = params_for(family, 2, depth);
        let mut failures = 0usize;
        let mut checked = 0usize;
        let mut min_margin = f64::INFINITY;
        for i in 0..samples {
            let d = sample_point(&params, seed.wrapping_add(i as u64), depth).unwrap();
            let rows = local_dim_series(&params, &d, depth).unwrap();
            for row in rows {
                if let Some(bound) = row.bound {
                    checked += 1;
                    let margin = row.ratio - bound;
                    min_margin = min_margin.min(margin);
                    if margin < -1e-6 {
                        failures += 1;
                    }
                }
            }
        }
        results.push(PropertyResult::new(
            &format!("local-dim/ratio-bound/{family}"),
            failures == 0,
            format!(
                "{samples} samples, depth {depth}, {checked} bounded rows, min margin {min_margin:.3e}, {failures} failures"
            ),
        ));
    }
    results
}

/// Ball-to-cylinder neighbor bound: a ball at scale between consecutive
/// cylinder lengths meets at most 4 depth-n cylinders.
pub fn suite_neighbor(pairs: usize, seed: u64) -> Vec<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = params_for(Family::F, 2, 40);
    let mut failures = 0usize;
    let mut max_count = 0usize;
    for _ in 0..pairs {
        let d = sample_point(&params, rng.gen(), 34).unwrap();
        let n = rng.gen_range(5usize..=30);
        let len_n = crate::cf::interval_length(&d.prefix(n).unwrap()).unwrap();
        let len_n1 = crate::cf::interval_length(&d.prefix(n + 1).unwrap()).unwrap();
        // Radii spanning [ |I_(n+1)|, |I_n| ): the lower endpoint, an
        // interior point, and just below the upper endpoint.
        let spread = &len_n - &len_n1;
        let step = rng.gen_range(0u32..16);
        let r = &len_n1
            + spread * BigRational::new(BigInt::from(step), BigInt::from(16))
                * BigRational::new(BigInt::from(15), BigInt::from(16));
        match neighbor_count_check(&d, &r) {
            Ok(count) => {
                max_count = max_count.max(count);
                if count > 4 {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    vec![PropertyResult::new(
        "neighbor/ball-cylinder-count",
        failures == 0,
        format!("{pairs} (point, radius) pairs, max count {max_count}, {failures} failures"),
    )]
}

/// Covering certificates: the worked witnesses, rejection below the
/// critical exponent, monotonicity in `s`, and the stage audit.
pub fn suite_certificates(horizon: u64) -> Vec<PropertyResult> {
    let mut results = Vec::new();
    let nu = parse("nu(n) = n").unwrap();
    let sigma2n = parse("sigma(n) = n^2 - n + 1").unwrap();

    let witness_f = check_f_constants(&nu, 0.30, 0.1, 22, horizon).unwrap_or(false);
    results.push(PropertyResult::new(
        "certificates/f-witness",
        witness_f,
        "nu(n)=n, s=0.30 accepts (delta, N) = (0.1, 22)".to_string(),
    ));
    let reject_f = f_certificate(&nu, 0.24, horizon).is_err();
    results.push(PropertyResult::new(
        "certificates/f-reject-below-critical",
        reject_f,
        "nu(n)=n rejects s = 0.24 < 1/4".to_string(),
    ));

    let witness_g = check_g_constants(&sigma2n, 0.30, 1.0, 15, horizon).unwrap_or(false);
    results.push(PropertyResult::new(
        "certificates/g-witness",
        witness_g,
        "gap-2n sigma, s=0.30 accepts (delta, n_0) = (1, 15)".to_string(),
    ));
    let reject_g = g_certificate(&sigma2n, 0.24, horizon).is_err();
    results.push(PropertyResult::new(
        "certificates/g-reject-below-critical",
        reject_g,
        "gap-2n sigma rejects s = 0.24 < 1/4".to_string(),
    ));

    let audit_ok = h_recursion_audit(&sigma2n, 0.30, 15, 10)
        .map(|rows| rows.iter().all(|r| r.ok))
        .unwrap_or(false);
    results.push(PropertyResult::new(
        "certificates/g-stage-audit",
        audit_ok,
        "all stage factors <= 1 for 10 stages from n_0 = 15".to_string(),
    ));

    let mut monotone = true;
    let mut prev_accepted = false;
    for s in [0.20, 0.24, 0.26, 0.30, 0.40, 0.50] {
        let accepted = f_certificate(&nu, s, horizon).is_ok();
        if prev_accepted && !accepted {
            monotone = false;
        }
        prev_accepted = accepted;
    }
    results.push(PropertyResult::new(
        "certificates/monotone-in-s",
        monotone,
        "acceptance never flips back off as s grows".to_string(),
    ));
    results
}

/// Closed-form reproduction: formula values and bisection scans.
pub fn suite_closed_forms(tol: f64, horizon: u64) -> Vec<PropertyResult> {
    let mut results = Vec::new();
    let formula_cases = [
        ("F alpha=1", dim_formula(Family::F, Growth::Finite(1.0)), 0.25),
        ("F alpha=3", dim_formula(Family::F, Growth::Finite(3.0)), 0.125),
        ("G beta=2", dim_formula(Family::G, Growth::Finite(2.0)), 0.25),
        ("G beta=inf", dim_formula(Family::G, Growth::Infinite), 0.5),
        ("F alpha=inf", dim_formula(Family::F, Growth::Infinite), 0.0),
    ];
    let mut formula_ok = true;
    let mut details = Vec::new();
    for (name, got, want) in formula_cases {
        let ok = got.as_ref().map(|v| (v - want).abs() < 1e-12).unwrap_or(false);
        if !ok {
            formula_ok = false;
        }
        details.push(format!("{name}: {:?} (want {want})", got.ok()));
    }
    results.push(PropertyResult::new(
        "closed-form/formula",
        formula_ok,
        details.join("; "),
    ));

    let scan_cases = [
        ("F nu(n)=n", parse("nu(n) = n").unwrap(), Family::F, 0.25),
        ("F nu(n)=3*n", parse("nu(n) = 3*n").unwrap(), Family::F, 0.125),
        (
            "G sigma(n)=n*(n+1)",
            parse("sigma(n) = n*(n+1)").unwrap(),
            Family::G,
            0.25,
        ),
    ];
    for (name, spec, family, want) in scan_cases {
        let result = dim_upper_scan(&spec, family, tol, horizon);
        let (pass, detail) = match result {
            Ok(scan) => (
                (scan.s - want).abs() <= 1e-2,
                format!("scan {:.4} vs formula {want} (tol {tol})", scan.s),
            ),
            Err(e) => (false, format!("scan failed: {e}")),
        };
        results.push(PropertyResult::new(
            &format!("closed-form/scan/{name}"),
            pass,
            detail,
        ));
    }
    results
}

/// Bracketing of the true dimension between the two machineries: the
/// lower (ratio-series) trend at the largest reachable block index sits
/// near its limit and below the upper scan.
pub fn suite_bracketing(horizon: u64) -> Vec<PropertyResult> {
    let mut results = Vec::new();
    let t = 10u32;
    let nu = parse("nu(n) = n").unwrap();
    let params = LambdaParams::with_pairs(Family::F, nu, t, 10).unwrap();
    let mut series = None;
    for k_max in (4..=9).rev() {
        if let Ok(s) = ratio_series(&params, k_max) {
            series = Some(s);
            break;
        }
    }
    let target = 9.0 / 40.0; // (t-1)/(2t(1+alpha)) at t = 10, alpha = 1
    match series {
        None => results.push(PropertyResult::new(
            "bracket/ratio-trend",
            false,
            "no reachable block index".to_string(),
        )),
        Some(series) => {
            let last = series.rows.last().unwrap();
            let near = (last.a.value - target).abs() <= 0.06;
            results.push(PropertyResult::new(
                "bracket/ratio-trend",
                near,
                format!(
                    "A_{} = {:.4} vs (t-1)/(2t(1+alpha)) = {:.4} (tolerance 0.06)",
                    last.k, last.a.value, target
                ),
            ));
            let nu = parse("nu(n) = n").unwrap();
            match dim_upper_scan(&nu, Family::F, 5e-3, horizon) {
                Ok(scan) => {
                    let below = last.a.value <= scan.s + 1e-2;
                    results.push(PropertyResult::new(
                        "bracket/lower-below-upper",
                        below,
                        format!("A_{} = {:.4} <= scan {:.4} + 1e-2", last.k, last.a.value, scan.s),
                    ));
                }
                Err(e) => results.push(PropertyResult::new(
                    "bracket/lower-below-upper",
                    false,
                    format!("scan failed: {e}"),
                )),
            }
        }
    }
    results
}

/// The named CLI suites.
pub fn run_suite(name: &str) -> Result<Vec<PropertyResult>, String> {
    match name {
        "qn-bounds" => Ok(suite_qn_bounds(2000, 2000, 1)),
        "measure" => {
            let mut r = suite_measure(400, 2);
            r.extend(suite_lambda_subset(50, 200, 3));
            Ok(r)
        }
        "series" => Ok(suite_series(10_000)),
        "certificates" => Ok(suite_certificates(1000)),
        "all" => {
            let mut r = suite_qn_bounds(10_000, 10_000, 1);
            r.extend(suite_measure(1000, 2));
            r.extend(suite_lambda_subset(1000, 500, 3));
            r.extend(suite_series(10_000));
            r.extend(suite_local_dim(200, 5, 4));
            r.extend(suite_closed_forms(5e-3, 4000));
            r.extend(suite_bracketing(4000));
            r.extend(suite_neighbor(1000, 5));
            r.extend(suite_certificates(1000));
            Ok(r)
        }
        other => Err(format!(
            "unknown suite '{other}' (expected qn-bounds | measure | series | certificates | all)"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(all_pass(&suite_qn_bounds(200, 200, 1)));
        assert!(all_pass(&suite_measure(40, 2)));
        assert!(all_pass(&suite_lambda_subset(5, 120, 3)));
        assert!(all_pass(&suite_neighbor(50, 5)));
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope").is_err());
    }
}
