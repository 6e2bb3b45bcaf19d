//! Constructive Cantor-type subsets with prescribed AP structure, their
//! exact cylinder measures, and the measure-to-length ratios behind the
//! dimension lower bounds.
//!
//! A construction confines the digit at each free position `n` to the
//! window `L_n = [(2n)^t, (2n+1)^t)` and forces AP continuation
//! `a_n = a_(max V_k) + n - max V_k` on the `W_k` blocks. The associated
//! cylinder measure multiplies `1/#L_i` over free positions only, so its
//! value depends on the depth and block layout, never on which admissible
//! digits were chosen.

use crate::ap::{
    blocks_for_f, blocks_for_g, f_schedule_covering, g_pairs_covering, ApError, BlockKind,
    BlockPartition, Growth,
};
use crate::cf::{fundamental_interval, value, CfError, DigitSeq};
use crate::logs::{ln_biguint, ln_power_plus, sum_ln_odd, sum_ln_window, window_bounds, window_size, LogSum};
use crate::seqspec::{SeqError, SequenceSpec};
use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LambdaError {
    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("digit sequence is not admissible at position {position}")]
    Inadmissible { position: u64 },
    #[error("cylinder has zero measure (inadmissible digits)")]
    ZeroMeasure,
    #[error("radius out of range: {0}")]
    RadiusOutOfRange(String),
    #[error("digit a_n = {digit} at position {position} must be at least 2")]
    DigitTooSmall { position: u64, digit: String },
    #[error("schedule infeasible: {0}")]
    ScheduleInfeasible(String),
    #[error(transparent)]
    Ap(#[from] ApError),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Family {
    F,
    G,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::F => write!(f, "F"),
            Family::G => write!(f, "G"),
        }
    }
}

/// Parameters of one construction: the family, the window exponent `t`,
/// the sequence definition, and the block partition (derived from the
/// schedule for F, from sigma for G).
#[derive(Debug)]
pub struct LambdaParams {
    pub family: Family,
    pub t: u32,
    pub spec: SequenceSpec,
    pub partition: BlockPartition,
    /// F only: the anchors `n_1 < n_2 < ...` whose windows carry the APs.
    pub schedule: Option<Vec<BigUint>>,
}

impl LambdaParams {
    /// F-family params with the default super-geometric schedule, covering
    /// at least `depth` positions.
    pub fn new_f(spec: SequenceSpec, t: u32, depth: u64) -> Result<Self, LambdaError> {
        Self::new_f_with_schedule(spec, t, None, depth)
    }

    pub fn new_f_with_schedule(
        spec: SequenceSpec,
        t: u32,
        schedule: Option<Vec<BigUint>>,
        depth: u64,
    ) -> Result<Self, LambdaError> {
        check_t(t)?;
        let schedule = match schedule {
            Some(s) => s,
            None => f_schedule_covering(&spec, depth)?,
        };
        let partition = blocks_for_f(&spec, &schedule)?;
        if partition.covered_end() < BigUint::from(depth) {
            return Err(LambdaError::ScheduleInfeasible(format!(
                "schedule covers only {} of {depth} positions",
                partition.covered_end()
            )));
        }
        Ok(LambdaParams {
            family: Family::F,
            t,
            spec,
            partition,
            schedule: Some(schedule),
        })
    }

    /// G-family params covering at least `depth` positions.
    pub fn new_g(spec: SequenceSpec, t: u32, depth: u64) -> Result<Self, LambdaError> {
        check_t(t)?;
        let pairs = g_pairs_covering(&spec, depth)?;
        let partition = blocks_for_g(&spec, pairs)?;
        Ok(LambdaParams {
            family: Family::G,
            t,
            spec,
            partition,
            schedule: None,
        })
    }

    /// Params whose partition holds exactly `pairs` (V, W) pairs,
    /// regardless of covered depth; used by the ratio series.
    pub fn with_pairs(family: Family, spec: SequenceSpec, t: u32, pairs: u64) -> Result<Self, LambdaError> {
        check_t(t)?;
        match family {
            Family::F => {
                let schedule = crate::ap::default_f_schedule(&spec, pairs as usize)?;
                let partition = blocks_for_f(&spec, &schedule)?;
                Ok(LambdaParams {
                    family,
                    t,
                    spec,
                    partition,
                    schedule: Some(schedule),
                })
            }
            Family::G => {
                let partition = blocks_for_g(&spec, pairs)?;
                Ok(LambdaParams {
                    family,
                    t,
                    spec,
                    partition,
                    schedule: None,
                })
            }
        }
    }
}

fn check_t(t: u32) -> Result<(), LambdaError> {
    if t < 2 {
        Err(LambdaError::InvalidParams(format!(
            "window exponent t must be >= 2, got {t}"
        )))
    } else {
        Ok(())
    }
}

/// The admissibility rule at one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowRule {
    /// Free digit: any integer in `[lo, hi)`.
    Free { lo: BigUint, hi: BigUint },
    /// Forced continuation `a_n = a_anchor + offset` of the AP started at
    /// the anchor position (the last position of the enclosing V block).
    Forced { anchor: BigUint, offset: BigUint },
}

/// The digit rule at position `n`.
pub fn digit_window(params: &LambdaParams, n: &BigUint) -> Result<WindowRule, LambdaError> {
    let block = params
        .partition
        .block_containing(n)
        .ok_or_else(|| LambdaError::InvalidParams(format!("position {n} beyond the partition")))?;
    Ok(match block.kind {
        BlockKind::V => {
            let (lo, hi) = window_bounds(params.t, n);
            WindowRule::Free { lo, hi }
        }
        BlockKind::W => {
            let anchor = &block.lo - 1u32; // max V_k
            WindowRule::Forced {
                offset: n - &anchor,
                anchor,
            }
        }
    })
}

/// Draw a point of the construction to the given depth: free digits are
/// uniform on their windows (deterministic for a fixed seed), forced
/// digits continue their AP with difference 1.
pub fn sample_point(params: &LambdaParams, seed: u64, depth: u64) -> Result<DigitSeq, LambdaError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_point(params, depth, |lo, hi| rng.gen_biguint_range(lo, hi))
}

/// The deterministic minimal point: every free digit is the bottom of its
/// window.
pub fn min_point(params: &LambdaParams, depth: u64) -> Result<DigitSeq, LambdaError> {
    build_point(params, depth, |lo, _| lo.clone())
}

fn build_point<F>(params: &LambdaParams, depth: u64, mut pick: F) -> Result<DigitSeq, LambdaError>
where
    F: FnMut(&BigUint, &BigUint) -> BigUint,
{
    let mut digits: Vec<BigUint> = Vec::with_capacity(depth as usize);
    for n in 1..=depth {
        let n_big = BigUint::from(n);
        let digit = match digit_window(params, &n_big)? {
            WindowRule::Free { lo, hi } => pick(&lo, &hi),
            WindowRule::Forced { anchor, offset } => {
                let idx = anchor.to_u64().ok_or_else(|| {
                    LambdaError::InvalidParams("anchor beyond sampled depth".to_string())
                })?;
                &digits[(idx - 1) as usize] + offset
            }
        };
        digits.push(digit);
    }
    Ok(DigitSeq::new(digits)?)
}

/// First inadmissible position of the digit prefix, if any.
pub fn first_inadmissible(params: &LambdaParams, d: &DigitSeq) -> Result<Option<u64>, LambdaError> {
    for (i, digit) in d.digits().iter().enumerate() {
        let n = (i + 1) as u64;
        match digit_window(params, &BigUint::from(n))? {
            WindowRule::Free { lo, hi } => {
                if *digit < lo || *digit >= hi {
                    return Ok(Some(n));
                }
            }
            WindowRule::Forced { anchor, offset } => {
                let idx = anchor.to_u64().unwrap() as usize;
                if *digit != &d.digits()[idx - 1] + offset {
                    return Ok(Some(n));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_admissible(params: &LambdaParams, d: &DigitSeq) -> Result<bool, LambdaError> {
    Ok(first_inadmissible(params, d)?.is_none())
}

/// Exact cylinder measure of the digit prefix: the product of `1/#L_i`
/// over free positions `i <= n`, and zero off the construction.
pub fn mu_cylinder(params: &LambdaParams, d: &DigitSeq) -> Result<BigRational, LambdaError> {
    if first_inadmissible(params, d)?.is_some() {
        return Ok(BigRational::zero());
    }
    let mut den = BigUint::one();
    for i in 1..=d.len() as u64 {
        let n_big = BigUint::from(i);
        if let Some(block) = params.partition.block_containing(&n_big) {
            if block.kind == BlockKind::V {
                den *= window_size(params.t, &n_big);
            }
        }
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(den)))
}

/// Result of one parent-equals-sum-of-children check.
#[derive(Debug, Clone)]
pub struct AdditivityReport {
    pub parent: BigRational,
    pub child_count: BigUint,
    pub child_measure: BigRational,
    pub sum: BigRational,
    pub exact_match: bool,
    /// Whether every child was recomputed from scratch (small windows) or
    /// equality of sampled children was combined with the exact count.
    pub exhaustive: bool,
}

/// Threshold below which every child cylinder is recomputed individually.
const EXHAUSTIVE_CHILDREN: u64 = 4096;

/// Verify that the measure of a cylinder equals the exact sum of its
/// children's measures at the next position.
pub fn mu_additivity_check(
    params: &LambdaParams,
    d: &DigitSeq,
) -> Result<AdditivityReport, LambdaError> {
    let parent = mu_cylinder(params, d)?;
    if parent.is_zero() {
        return Err(LambdaError::ZeroMeasure);
    }
    let next = BigUint::from(d.len() as u64 + 1);
    match digit_window(params, &next)? {
        WindowRule::Forced { anchor, offset } => {
            let idx = anchor.to_u64().unwrap() as usize;
            let digit = &d.digits()[idx - 1] + offset;
            let child = extend(d, digit);
            let child_mu = mu_cylinder(params, &child)?;
            Ok(AdditivityReport {
                exact_match: child_mu == parent,
                parent,
                child_count: BigUint::one(),
                child_measure: child_mu.clone(),
                sum: child_mu,
                exhaustive: true,
            })
        }
        WindowRule::Free { lo, hi } => {
            let count = &hi - &lo;
            let exhaustive = count.to_u64().map_or(false, |c| c <= EXHAUSTIVE_CHILDREN);
            if exhaustive {
                let mut sum = BigRational::zero();
                let mut child_measure = BigRational::zero();
                let mut g = lo.clone();
                while g < hi {
                    let child_mu = mu_cylinder(params, &extend(d, g.clone()))?;
                    if child_measure.is_zero() {
                        child_measure = child_mu.clone();
                    }
                    sum += child_mu;
                    g += 1u32;
                }
                Ok(AdditivityReport {
                    exact_match: sum == parent,
                    parent,
                    child_count: count,
                    child_measure,
                    sum,
                    exhaustive: true,
                })
            } else {
                // Recompute a spread of children from scratch; they must
                // agree exactly, and count * value must equal the parent.
                let mut probes: Vec<BigUint> = vec![
                    lo.clone(),
                    &lo + 1u32,
                    &lo + (&count >> 1),
                    &hi - 2u32,
                    &hi - 1u32,
                ];
                for step in 2..10u32 {
                    probes.push(&lo + (&count * step) / 11u32);
                }
                let mut child_measure: Option<BigRational> = None;
                let mut all_equal = true;
                for g in probes {
                    let child_mu = mu_cylinder(params, &extend(d, g))?;
                    match &child_measure {
                        None => child_measure = Some(child_mu),
                        Some(v) => {
                            if *v != child_mu {
                                all_equal = false;
                            }
                        }
                    }
                }
                let child_measure = child_measure.unwrap();
                let sum = &child_measure * BigRational::from_integer(BigInt::from(count.clone()));
                Ok(AdditivityReport {
                    exact_match: all_equal && sum == parent,
                    parent,
                    child_count: count,
                    child_measure,
                    sum,
                    exhaustive: false,
                })
            }
        }
    }
}

fn extend(d: &DigitSeq, digit: BigUint) -> DigitSeq {
    let mut digits = d.digits().to_vec();
    digits.push(digit);
    DigitSeq::new(digits).unwrap()
}

/// Exact check of the block-boundary chain that keeps constructed digit
/// sequences strictly increasing: at every boundary with a nonempty W
/// block, `a_(min W_k) + #W_k - 1 < (2 min V_(k+1))^t`.
pub fn boundary_chain_holds(params: &LambdaParams, d: &DigitSeq) -> Result<bool, LambdaError> {
    let depth = BigUint::from(d.len() as u64);
    let blocks = params.partition.blocks();
    for (i, b) in blocks.iter().enumerate() {
        if b.kind != BlockKind::W || b.is_empty() || b.lo > depth {
            continue;
        }
        let w_min_idx = b.lo.to_u64().unwrap();
        let a_w_min = d.digit(w_min_idx as usize)?;
        let chain_lhs = a_w_min + b.len() - 1u32;
        let v_next = match blocks.get(i + 1) {
            Some(v) => v,
            None => continue,
        };
        let (v_lo_pow, _) = window_bounds(params.t, &v_next.lo);
        if chain_lhs >= v_lo_pow {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One measure-to-length ratio value with its tracked absolute error.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ErrVal {
    pub value: f64,
    pub err: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RatioRow {
    pub k: u64,
    pub a: ErrVal,
    pub b: ErrVal,
}

/// The per-block ratio sequences `A_k` (measure over cylinder length at
/// the AP anchors) and `B_k` (the running infimum across the next free
/// block), with their theoretical limits.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RatioSeries {
    pub family: Family,
    pub t: u32,
    pub rows: Vec<RatioRow>,
    /// Limit of `A_k`: `(t-1)/(2t(1+alpha))` for F; the lower bound
    /// `(t-1)(beta-1)/(2t beta)` for G (or `(t-1)/(2t)` at infinite beta).
    pub a_limit: f64,
    /// Limit of `B_k`: `(t-1)/(2t)` for both families.
    pub b_limit: f64,
}

/// Largest window base convertible to `f64` without overflow concerns.
const F64_SAFE_BOUND: f64 = 1e300;

/// Compute `A_k` and `B_k` for `k = 1..=k_max`.
///
/// Sums over blocks whose size exceeds machine range are evaluated by the
/// Euler-Maclaurin path in [`crate::logs`]; every value carries an error
/// bound. `B_k` scans its block exhaustively when small, and at
/// geometrically spaced depths (the cumulative quotient is monotone
/// decreasing, so the block end attains the infimum) when huge.
pub fn ratio_series(params: &LambdaParams, k_max: u64) -> Result<RatioSeries, LambdaError> {
    let needed_pairs = k_max + 1;
    let partition;
    let part = if params.partition.pairs() >= needed_pairs {
        &params.partition
    } else {
        match params.family {
            Family::F => match &params.schedule {
                Some(s) if (s.len() as u64) < needed_pairs => {
                    partition = blocks_for_f(
                        &params.spec,
                        &crate::ap::default_f_schedule(&params.spec, needed_pairs as usize)?,
                    )?;
                    &partition
                }
                _ => &params.partition,
            },
            Family::G => {
                partition = blocks_for_g(&params.spec, needed_pairs)?;
                &partition
            }
        }
    };
    if part.pairs() < needed_pairs {
        return Err(LambdaError::ScheduleInfeasible(format!(
            "need {needed_pairs} block pairs, schedule provides {}",
            part.pairs()
        )));
    }
    let end = part.v_block(needed_pairs).unwrap().hi.clone();
    if end.to_f64().map_or(true, |v| v > F64_SAFE_BOUND) {
        return Err(LambdaError::ScheduleInfeasible(format!(
            "block bounds near {end} overflow the evaluable horizon"
        )));
    }

    let t = params.t;
    let mut rows = Vec::with_capacity(k_max as usize);
    let mut num = LogSum::ZERO; // sum of ln #L_i over free positions
    let mut den_v = LogSum::ZERO; // sum of t ln(2i+1) over free positions
    let mut den_w = LogSum::ZERO; // AP-segment cost terms
    for k in 1..=k_max {
        let v = part.v_block(k).unwrap();
        let w = part.w_block(k).unwrap();
        num = num.add(sum_ln_window(t, &v.lo, &v.hi));
        den_v = den_v.add(sum_ln_odd(&v.lo, &v.hi).scale(t as f64));
        let w_len = w.len();
        if !w_len.is_zero() {
            let weight = w_len.to_f64().unwrap();
            let ln_cost = ln_power_plus(t, &v.hi, &(&w_len + 1u32));
            den_w = den_w.add(LogSum {
                value: weight * ln_cost,
                err: weight * 1e-13,
            });
        }
        let den_value = std::f64::consts::LN_2 + 2.0 * (den_v.value + den_w.value);
        let den_err = 2.0 * (den_v.err + den_w.err);
        let a_value = num.value / den_value;
        let a_err = num.err / den_value + a_value.abs() * den_err / den_value;

        let next_v = part.v_block(k + 1).unwrap();
        let b = b_infimum(t, &next_v.lo, &next_v.hi);

        rows.push(RatioRow {
            k,
            a: ErrVal {
                value: a_value,
                err: a_err,
            },
            b,
        });
    }

    let b_limit = (t as f64 - 1.0) / (2.0 * t as f64);
    // Tabulated specs cap the growth-estimation horizon (sigma ratios look
    // one entry ahead).
    let g_horizon = params
        .spec
        .table_len()
        .map(|l| (l.saturating_sub(1) as u64).max(10))
        .unwrap_or(2000)
        .min(2000);
    let growth = crate::ap::growth_constants(&params.spec, g_horizon)?;
    let a_limit = match (params.family, growth.estimate) {
        (Family::F, Growth::Finite(alpha)) => (t as f64 - 1.0) / (2.0 * t as f64 * (1.0 + alpha)),
        (Family::F, Growth::Infinite) => 0.0,
        (Family::G, Growth::Finite(beta)) => {
            (t as f64 - 1.0) * (beta - 1.0) / (2.0 * t as f64 * beta)
        }
        (Family::G, Growth::Infinite) => b_limit,
    };
    Ok(RatioSeries {
        family: params.family,
        t,
        rows,
        a_limit,
        b_limit,
    })
}

/// Infimum over `n` in the block `[lo, hi]` of
/// `sum_(i=lo..n) ln #L_i / (2 sum_(i=lo..n) t ln(2i+1))`.
fn b_infimum(t: u32, lo: &BigUint, hi: &BigUint) -> ErrVal {
    let span = hi - lo;
    if let Some(d) = span.to_u64().filter(|&d| d <= 4096) {
        // Exhaustive: incremental partial sums over the whole block.
        let mut best = f64::INFINITY;
        let mut best_err = 0.0;
        let mut s = 0.0f64;
        let mut w = 0.0f64;
        for j in 0..=d {
            let i = lo + j;
            let ln_odd = ln_biguint(&(&i * 2u32 + 1u32));
            let ln_win = ln_biguint(&window_size(t, &i));
            s += ln_win;
            w += (t as f64) * ln_odd;
            let q = s / (2.0 * w);
            if q < best {
                best = q;
                best_err = (1e-13 * (j + 1) as f64) / (2.0 * w) * (1.0 + q.abs());
            }
        }
        ErrVal {
            value: best,
            err: best_err.max(1e-12),
        }
    } else {
        // Geometrically spaced probes plus both endpoints; the cumulative
        // quotient decreases across the block, so the end is the infimum.
        let mut offsets: Vec<BigUint> = vec![BigUint::zero()];
        let mut step = BigUint::one();
        while &step < &span {
            offsets.push(step.clone());
            step = &step * 2u32;
        }
        offsets.push(span.clone());
        let mut best = f64::INFINITY;
        let mut best_err = 0.0;
        for j in offsets {
            let n = lo + &j;
            let s = sum_ln_window(t, lo, &n);
            let w = sum_ln_odd(lo, &n).scale(t as f64);
            let q = s.value / (2.0 * w.value);
            let err = s.err / (2.0 * w.value) + q.abs() * (2.0 * w.err) / (2.0 * w.value);
            if q < best {
                best = q;
                best_err = err;
            }
        }
        ErrVal {
            value: best,
            err: best_err.max(1e-12),
        }
    }
}

/// One local-dimension row: the exact-log ratio at depth `n` and, where
/// the block pair `k` is defined (`n` past the first free block), the
/// bound `min(A_k, B_k)` it must dominate.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LocalDimRow {
    pub n: u64,
    pub ratio: f64,
    pub err: f64,
    pub k: Option<u64>,
    pub bound: Option<f64>,
}

/// The ratio `log mu(I_n) / log |I_n|` for `n = 1..=n_max`, with exact
/// rationals underneath and logs taken at the end.
pub fn local_dim_series(
    params: &LambdaParams,
    d: &DigitSeq,
    n_max: u64,
) -> Result<Vec<LocalDimRow>, LambdaError> {
    let n_max = n_max.min(d.len() as u64);
    if let Some(p) = first_inadmissible(params, d)? {
        if p <= n_max {
            return Err(LambdaError::Inadmissible { position: p });
        }
    }
    // Bounds min(A_k, B_k) for every pair k whose range touches n_max.
    let last_block_k = params
        .partition
        .block_containing(&BigUint::from(n_max))
        .map(|b| b.k)
        .unwrap_or(1);
    let series = ratio_series(params, last_block_k.max(1))?;

    let mut rows = Vec::with_capacity(n_max as usize);
    let (mut q_prev, mut q_cur) = (BigUint::zero(), BigUint::one());
    let mut ln_mu = 0.0f64;
    let mut ln_mu_err = 0.0f64;
    for n in 1..=n_max {
        let a = d.digit(n as usize)?;
        let q_next = a * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, q_next);
        let n_big = BigUint::from(n);
        let block = params.partition.block_containing(&n_big).unwrap();
        if block.kind == BlockKind::V {
            ln_mu -= ln_biguint(&window_size(params.t, &n_big));
            ln_mu_err += 1e-13;
        }
        let ln_len = -(ln_biguint(&q_cur) + ln_biguint(&(&q_cur + &q_prev)));
        let ratio = ln_mu / ln_len;
        let err = ln_mu_err / ln_len.abs() + ratio.abs() * 2e-13 / ln_len.abs();
        let (k, bound) = match block.kind {
            BlockKind::W => (Some(block.k), bound_for(&series, block.k)),
            BlockKind::V if block.k >= 2 => (Some(block.k - 1), bound_for(&series, block.k - 1)),
            _ => (None, None),
        };
        rows.push(LocalDimRow {
            n,
            ratio,
            err,
            k,
            bound,
        });
    }
    Ok(rows)
}

fn bound_for(series: &RatioSeries, k: u64) -> Option<f64> {
    series
        .rows
        .iter()
        .find(|r| r.k == k)
        .map(|r| r.a.value.min(r.b.value))
}

/// Single-depth convenience over [`local_dim_series`].
pub fn local_dim_ratio(
    params: &LambdaParams,
    d: &DigitSeq,
    n: u64,
) -> Result<LocalDimRow, LambdaError> {
    let rows = local_dim_series(params, d, n)?;
    rows.into_iter()
        .last()
        .ok_or_else(|| LambdaError::InvalidParams("depth must be at least 1".to_string()))
}

/// Count the depth-`n` cylinders meeting the closed ball `B(x, r)`, where
/// `x` is the value of `d` and `n` is determined by
/// `|I_(n+1)| <= r < |I_n|`. Exact interval arithmetic throughout.
pub fn neighbor_count_check(d: &DigitSeq, r: &BigRational) -> Result<usize, LambdaError> {
    if !r.is_positive() {
        return Err(LambdaError::RadiusOutOfRange("radius must be positive".to_string()));
    }
    // Smallest m with |I_m| <= r; then n = m - 1.
    let mut m = None;
    for depth in 1..=d.len() {
        let len = crate::cf::interval_length(&d.prefix(depth)?)?;
        if len <= *r {
            m = Some(depth);
            break;
        }
    }
    let n = match m {
        Some(1) | None => {
            return Err(LambdaError::RadiusOutOfRange(format!(
                "need |I_(n+1)| <= r < |I_n| within depth {}",
                d.len()
            )))
        }
        Some(m) => m - 1,
    };
    let a_n = d.digit(n)?.clone();
    if a_n < BigUint::from(2u32) {
        return Err(LambdaError::DigitTooSmall {
            position: n as u64,
            digit: a_n.to_string(),
        });
    }
    let x = value(d)?;
    let lo = &x - r;
    let hi = &x + r;

    let prefix = d.prefix(n - 1)?;
    let scan_lo = if a_n > BigUint::from(4u32) {
        &a_n - 4u32
    } else {
        BigUint::one()
    };
    let scan_hi = &a_n + 5u32;
    let mut count = 0usize;
    let mut hull: Option<(BigRational, BigRational)> = None;
    let mut j = scan_lo;
    while j <= scan_hi {
        let mut digits = prefix.digits().to_vec();
        digits.push(j.clone());
        let cyl = fundamental_interval(&DigitSeq::new(digits)?)?;
        if cyl.intersects_closed(&lo, &hi) {
            count += 1;
        }
        hull = Some(match hull {
            None => (cyl.lo.clone(), cyl.hi.clone()),
            Some((hl, hh)) => (hl.min(cyl.lo.clone()), hh.max(cyl.hi.clone())),
        });
        j += 1u32;
    }
    // The scanned siblings must hull the ball, so nothing outside the scan
    // range could also intersect.
    let (hull_lo, hull_hi) = hull.unwrap();
    if lo < hull_lo || hi > hull_hi {
        return Err(LambdaError::RadiusOutOfRange(
            "ball escapes the scanned sibling range".to_string(),
        ));
    }
    Ok(count)
}

/// The series `log |I_n| / log |I_(n+1)|` for `n = 1..=horizon`.
pub fn length_ratio_series(d: &DigitSeq, horizon: u64) -> Result<Vec<f64>, LambdaError> {
    let n_max = (horizon as usize).min(d.len().saturating_sub(1));
    let mut out = Vec::with_capacity(n_max);
    let (mut q_prev, mut q_cur) = (BigUint::zero(), BigUint::one());
    let mut prev_ln: Option<f64> = None;
    for n in 1..=n_max + 1 {
        let a = d.digit(n)?;
        let q_next = a * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, q_next);
        let ln_len = -(ln_biguint(&q_cur) + ln_biguint(&(&q_cur + &q_prev)));
        if let Some(p) = prev_ln {
            out.push(p / ln_len);
        }
        prev_ln = Some(ln_len);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqspec::parse;
    use num_traits::FromPrimitive;

    fn f_params(t: u32, depth: u64) -> LambdaParams {
        let nu = parse("nu(n) = n").unwrap();
        LambdaParams::new_f(nu, t, depth).unwrap()
    }

    fn g_params(t: u32, depth: u64) -> LambdaParams {
        let sigma = parse("sigma(n) = n*(n+1)").unwrap();
        LambdaParams::new_g(sigma, t, depth).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn digit_window_examples() {
        let p = f_params(2, 50);
        match digit_window(&p, &BigUint::from(1u32)).unwrap() {
            WindowRule::Free { lo, hi } => {
                assert_eq!(lo, BigUint::from(4u32));
                assert_eq!(hi, BigUint::from(9u32));
            }
            other => panic!("expected free window, got {other:?}"),
        }
        match digit_window(&p, &BigUint::from(2u32)).unwrap() {
            WindowRule::Free { lo, hi } => {
                assert_eq!(lo, BigUint::from(16u32));
                assert_eq!(hi, BigUint::from(25u32));
            }
            other => panic!("expected free window, got {other:?}"),
        }
        // First W position: forced continuation of the digit at n_1 = 3.
        match digit_window(&p, &BigUint::from(4u32)).unwrap() {
            WindowRule::Forced { anchor, offset } => {
                assert_eq!(anchor, BigUint::from(3u32));
                assert_eq!(offset, BigUint::one());
            }
            other => panic!("expected forced rule, got {other:?}"),
        }
    }

    #[test]
    fn samples_are_strictly_increasing_and_deterministic() {
        for (p, name) in [(f_params(2, 100), "F"), (g_params(2, 100), "G")] {
            let a = sample_point(&p, 7, 100).unwrap();
            let b = sample_point(&p, 7, 100).unwrap();
            assert_eq!(a, b, "{name}: same seed must give the same point");
            assert!(a.is_strictly_increasing(), "{name}");
            assert!(boundary_chain_holds(&p, &a).unwrap(), "{name}");
            let c = sample_point(&p, 8, 100).unwrap();
            assert_ne!(a, c, "{name}: different seeds should differ");
        }
    }

    #[test]
    fn samples_pass_membership_scans() {
        let p = f_params(2, 60);
        let d = sample_point(&p, 3, 60).unwrap();
        let report = crate::ap::check_f_membership(&d, &p.spec).unwrap();
        assert_eq!(report.verdict, crate::ap::Verdict::Witnessed);
        // Scheduled anchors n_1 = 3, n_2 = 9 inside depth must be witnessed.
        let positions: Vec<u64> = report.witnesses.iter().map(|(n, _)| *n).collect();
        assert!(positions.contains(&3));
        assert!(positions.contains(&9));

        let p = g_params(2, 60);
        let d = sample_point(&p, 3, 60).unwrap();
        let report = crate::ap::check_g_membership(&d, &p.spec, 1).unwrap();
        assert_eq!(report.verdict, crate::ap::Verdict::Consistent);
        assert!(report.first_violation.is_none());
    }

    #[test]
    fn min_point_is_deterministic_floor() {
        let p = f_params(2, 10);
        let d = min_point(&p, 10).unwrap();
        assert_eq!(d.digit(1).unwrap(), &BigUint::from(4u32));
        assert_eq!(d.digit(2).unwrap(), &BigUint::from(16u32));
        assert_eq!(d.digit(3).unwrap(), &BigUint::from(36u32));
        assert_eq!(d.digit(4).unwrap(), &BigUint::from(37u32)); // forced
        assert_eq!(d.digit(5).unwrap(), &BigUint::from(38u32)); // forced
        assert_eq!(d.digit(6).unwrap(), &BigUint::from(144u32)); // V_2
    }

    #[test]
    fn mu_cylinder_examples() {
        let p = f_params(2, 10);
        let d = DigitSeq::from_u64s(&[4]).unwrap();
        assert_eq!(mu_cylinder(&p, &d).unwrap(), rat(1, 5));
        let d = DigitSeq::from_u64s(&[4, 16]).unwrap();
        assert_eq!(mu_cylinder(&p, &d).unwrap(), rat(1, 45));
        let d = DigitSeq::from_u64s(&[3]).unwrap(); // below the window
        assert!(mu_cylinder(&p, &d).unwrap().is_zero());
    }

    #[test]
    fn mu_w_positions_do_not_divide() {
        let p = f_params(2, 10);
        let d = min_point(&p, 5).unwrap(); // [4,16,36,37,38]
        let mu3 = mu_cylinder(&p, &d.prefix(3).unwrap()).unwrap();
        let mu5 = mu_cylinder(&p, &d).unwrap();
        assert_eq!(mu3, mu5); // positions 4, 5 are forced
    }

    #[test]
    fn additivity_small_window() {
        let p = f_params(2, 10);
        let d = DigitSeq::from_u64s(&[4]).unwrap();
        let rep = mu_additivity_check(&p, &d).unwrap();
        assert!(rep.exact_match);
        assert!(rep.exhaustive);
        assert_eq!(rep.child_count, BigUint::from(9u32)); // #L_2 = 25 - 16
        assert_eq!(rep.child_measure, rat(1, 45));
        assert_eq!(rep.sum, rat(1, 5));
    }

    #[test]
    fn additivity_forced_position() {
        let p = f_params(2, 10);
        let d = min_point(&p, 3).unwrap(); // next position 4 is forced
        let rep = mu_additivity_check(&p, &d).unwrap();
        assert!(rep.exact_match);
        assert_eq!(rep.child_count, BigUint::one());
    }

    #[test]
    fn normalization_at_depth_one() {
        for p in [f_params(2, 10), f_params(3, 10), g_params(2, 10), g_params(3, 10)] {
            let (lo, hi) = window_bounds(p.t, &BigUint::one());
            let mut sum = BigRational::zero();
            let mut g = lo;
            while g < hi {
                let d = DigitSeq::new(vec![g.clone()]).unwrap();
                sum += mu_cylinder(&p, &d).unwrap();
                g += 1u32;
            }
            assert_eq!(sum, BigRational::one());
        }
    }

    #[test]
    fn ratio_series_f_t2_limits() {
        // nu(n) = n has alpha = 1: A_k -> (t-1)/(2t(1+alpha)) = 1/8 and
        // B_k -> (t-1)/(2t) = 1/4 at t = 2.
        let p = f_params(2, 10);
        let series = ratio_series(&p, 6).unwrap();
        assert!((series.a_limit - 0.125).abs() < 1e-12);
        assert!((series.b_limit - 0.25).abs() < 1e-12);
        let last = series.rows.last().unwrap();
        assert!(
            (last.a.value - 0.125).abs() < 0.02,
            "A_6 = {} should approach 1/8",
            last.a.value
        );
        // B_k approaches 1/4 from above, logarithmically in the window base.
        assert!(
            last.b.value >= 0.25 - 1e-9 && last.b.value - 0.25 < 0.03,
            "B_6 = {} should approach 1/4 from above",
            last.b.value
        );
    }

    #[test]
    fn ratio_series_g_t3_beta2_bound() {
        // sigma(n) = n(n+1) has beta = 2: liminf A_k >= (t-1)(beta-1)/(2t beta)
        // = 1/6 at t = 3, and B_k -> 1/3.
        let sigma = parse("sigma(n) = n*(n+1)").unwrap();
        let p = LambdaParams::with_pairs(Family::G, sigma, 3, 40).unwrap();
        let series = ratio_series(&p, 30).unwrap();
        assert!((series.a_limit - 1.0 / 6.0).abs() < 2e-3);
        let last = series.rows.last().unwrap();
        assert!(
            last.a.value > 1.0 / 6.0 - 0.02,
            "A_30 = {} should stay near/above 1/6",
            last.a.value
        );
        assert!(
            last.b.value >= 1.0 / 3.0 - 1e-9 && last.b.value - 1.0 / 3.0 < 0.04,
            "B_30 = {} should approach 1/3 from above",
            last.b.value
        );
    }

    #[test]
    fn ratio_series_g_infinite_beta_from_table() {
        // sigma_n = 2^n makes beta infinite; the A_k bound side becomes
        // (t-1)/(2t) and the trend climbs toward it.
        let powers: Vec<String> = (1..=30).map(|k| (1u64 << k).to_string()).collect();
        let sigma = parse(&format!("sigma = [{}]", powers.join(","))).unwrap();
        let p = LambdaParams::with_pairs(Family::G, sigma, 3, 26).unwrap();
        let series = ratio_series(&p, 25).unwrap();
        assert!((series.a_limit - 1.0 / 3.0).abs() < 1e-12);
        assert!((series.b_limit - 1.0 / 3.0).abs() < 1e-12);
        // The bound is a liminf lower bound; the trend settles just above
        // it, within 0.02 by k = 25.
        let last = series.rows.last().unwrap();
        assert!(
            last.a.value > 1.0 / 3.0 - 1e-9 && last.a.value - 1.0 / 3.0 < 0.02,
            "A_25 = {} should settle just above 1/3",
            last.a.value
        );
        assert!(last.b.value - 1.0 / 3.0 < 0.02);
    }

    #[test]
    fn local_dim_first_cylinder() {
        // mu(I_1(4)) = 1/5 and |I_1(4)| = 1/20: ratio = ln 5 / ln 20.
        let p = f_params(2, 10);
        let d = min_point(&p, 2).unwrap();
        let row = local_dim_ratio(&p, &d, 1).unwrap();
        let want = 5f64.ln() / 20f64.ln();
        assert!((row.ratio - want).abs() < 1e-12);
        assert!((row.ratio - 0.5372).abs() < 1e-3);
        assert!(row.bound.is_none()); // V_1 carries no pair bound
    }

    #[test]
    fn local_dim_respects_bounds_to_depth_120() {
        let p = f_params(2, 120);
        let d = sample_point(&p, 11, 120).unwrap();
        let rows = local_dim_series(&p, &d, 120).unwrap();
        for row in rows {
            if let Some(bound) = row.bound {
                assert!(
                    row.ratio >= bound - 1e-6,
                    "n = {}: ratio {} below bound {}",
                    row.n,
                    row.ratio,
                    bound
                );
            }
        }
    }

    #[test]
    fn neighbor_count_examples() {
        let p = f_params(2, 40);
        let d = sample_point(&p, 5, 40).unwrap();
        // r = |I_(n+1)| exactly, for a few depths.
        for depth in [10usize, 20, 30] {
            let r = crate::cf::interval_length(&d.prefix(depth + 1).unwrap()).unwrap();
            let count = neighbor_count_check(&d, &r).unwrap();
            assert!(count <= 4, "depth {depth}: count = {count}");
            assert!(count >= 1);
        }
        // Radius at a deeper cylinder still stays within the bound.
        let r = crate::cf::interval_length(&d.prefix(13).unwrap()).unwrap();
        let count = neighbor_count_check(&d, &r).unwrap();
        assert!(count >= 1 && count <= 4);
    }

    #[test]
    fn neighbor_count_radius_errors() {
        let p = f_params(2, 10);
        let d = sample_point(&p, 5, 10).unwrap();
        let too_big = BigRational::one();
        assert!(matches!(
            neighbor_count_check(&d, &too_big),
            Err(LambdaError::RadiusOutOfRange(_))
        ));
        let too_small = crate::cf::interval_length(&d).unwrap()
            / BigRational::from_i64(1_000_000).unwrap();
        assert!(matches!(
            neighbor_count_check(&d, &too_small),
            Err(LambdaError::RadiusOutOfRange(_))
        ));
    }

    #[test]
    fn length_ratio_tends_to_one() {
        let p = f_params(2, 210);
        let d = sample_point(&p, 2, 210).unwrap();
        let series = length_ratio_series(&d, 200).unwrap();
        assert_eq!(series.len(), 200);
        for r in &series[180..] {
            assert!((r - 1.0).abs() < 0.05, "late ratio {r} should be near 1");
        }
    }
}
