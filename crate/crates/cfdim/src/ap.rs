//! Arithmetic-progression structure in digit sequences: window tests,
//! maximal-run scanning, finite-depth membership checks for the F- and
//! G-families, the V/W block partitions behind the lower-bound
//! constructions, and growth-constant estimation.

use crate::cf::DigitSeq;
use crate::seqspec::{SeqKind, SequenceSpec};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApError {
    #[error("digits are not strictly increasing at position {position}")]
    NotStrictlyIncreasing { position: usize },
    #[error("sequence constraint violated: {detail}")]
    SpecConstraintViolated { detail: String },
    #[error("schedule too dense at k = {k}: n_k + nu(n_k) must stay below n_(k+1)")]
    ScheduleTooDense { k: usize },
    #[error("sequence evaluation failed: {0}")]
    Seq(#[from] crate::seqspec::SeqError),
}

/// A detected run `b, b+M, ..., b+(len-1)M` at a 1-based digit position.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct APSegment {
    pub start: u64,
    pub len: u64,
    #[serde(serialize_with = "crate::report::serialize_biguint")]
    pub first: BigUint,
    #[serde(serialize_with = "crate::report::serialize_biguint")]
    pub difference: BigUint,
}

/// Common difference of the window if it is an arithmetic progression with
/// difference `M >= 1`, else `None`.
///
/// Singleton windows qualify vacuously (any `M` fits) and report the
/// minimal difference 1; two increasing terms always qualify. Constant
/// windows do not: the difference must be a positive integer.
pub fn is_ap(window: &[BigUint]) -> Option<BigUint> {
    match window {
        [] => None,
        [_] => Some(BigUint::one()),
        [first, rest @ ..] => {
            if rest[0] <= *first {
                return None;
            }
            let diff = &rest[0] - first;
            let mut prev = &rest[0];
            for x in &rest[1..] {
                if x <= prev || x - prev != diff {
                    return None;
                }
                prev = x;
            }
            Some(diff)
        }
    }
}

/// Scan left to right for runs of length at least `min_len` with a common
/// positive difference.
///
/// Positions are consumed greedily: once a run is reported the scan resumes
/// after its last digit, so reported segments never overlap. Each segment
/// cannot be extended to the right, and extending it to the left either
/// breaks its difference or collides with the previously reported run.
pub fn find_ap_runs(d: &DigitSeq, min_len: usize) -> Vec<APSegment> {
    let min_len = min_len.max(2);
    let digits = d.digits();
    let n = digits.len();
    let mut out = Vec::new();
    let mut pos = 0usize; // 0-based index of the candidate start
    while pos + 1 < n {
        if digits[pos + 1] <= digits[pos] {
            pos += 1;
            continue;
        }
        let diff = &digits[pos + 1] - &digits[pos];
        let mut end = pos + 1;
        while end + 1 < n
            && digits[end + 1] > digits[end]
            && &digits[end + 1] - &digits[end] == diff
        {
            end += 1;
        }
        let len = end - pos + 1;
        if len >= min_len {
            out.push(APSegment {
                start: (pos + 1) as u64,
                len: len as u64,
                first: digits[pos].clone(),
                difference: diff,
            });
            pos = end + 1;
        } else {
            pos = end;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Consistent,
    Witnessed,
    Violated,
}

/// Outcome of a finite-depth membership scan.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MembershipReport {
    pub verdict: Verdict,
    pub witnesses: Vec<(u64, APSegment)>,
    pub first_violation: Option<u64>,
}

/// Scan the prefix for F-membership witnesses: positions `n` whose window
/// `a_n, ..., a_{n+nu_n-1}` lies fully inside the prefix and forms an AP.
///
/// Membership in F asks for infinitely many witnesses, which no finite
/// prefix can refute, so the verdict is never `Violated`; it is
/// `Witnessed` when at least one window qualifies.
pub fn check_f_membership(
    d: &DigitSeq,
    nu: &SequenceSpec,
) -> Result<MembershipReport, ApError> {
    if let Some(position) = d.first_non_increase() {
        return Err(ApError::NotStrictlyIncreasing { position });
    }
    let depth = d.len() as u64;
    let mut witnesses = Vec::new();
    for n in 1..=depth {
        let len_big = nu.eval(n)?;
        if len_big < BigInt::one() {
            return Err(ApError::SpecConstraintViolated {
                detail: format!("nu({n}) = {len_big} is not positive"),
            });
        }
        let len = match len_big.to_u64() {
            Some(l) if n + l - 1 <= depth => l,
            _ => continue, // window exceeds the prefix
        };
        let window = &d.digits()[(n - 1) as usize..(n + len - 1) as usize];
        if let Some(diff) = is_ap(window) {
            witnesses.push((
                n,
                APSegment {
                    start: n,
                    len,
                    first: window[0].clone(),
                    difference: diff,
                },
            ));
        }
    }
    let verdict = if witnesses.is_empty() {
        Verdict::Consistent
    } else {
        Verdict::Witnessed
    };
    Ok(MembershipReport {
        verdict,
        witnesses,
        first_violation: None,
    })
}

/// Scan the prefix for G-membership: every window `a_{sigma_n}, ...,
/// a_{sigma_n + n - 1}` with `n >= n_start` that lies fully inside the
/// prefix must be an AP. The first failing window refutes membership.
pub fn check_g_membership(
    d: &DigitSeq,
    sigma: &SequenceSpec,
    n_start: u64,
) -> Result<MembershipReport, ApError> {
    if let Some(position) = d.first_non_increase() {
        return Err(ApError::NotStrictlyIncreasing { position });
    }
    let depth = d.len() as u64;
    let mut witnesses = Vec::new();
    let mut first_violation = None;
    for n in n_start.max(1)..=depth {
        let start_big = sigma.eval(n)?;
        if start_big < BigInt::one() {
            return Err(ApError::SpecConstraintViolated {
                detail: format!("sigma({n}) = {start_big} is not positive"),
            });
        }
        if n > 1 {
            let prev = sigma.eval(n - 1)?;
            if &start_big - &prev < BigInt::from(n - 1) {
                return Err(ApError::SpecConstraintViolated {
                    detail: format!("sigma gap below {} at n = {}", n - 1, n - 1),
                });
            }
        }
        let start = match start_big.to_u64() {
            Some(s) if s + n - 1 <= depth => s,
            _ => continue,
        };
        let window = &d.digits()[(start - 1) as usize..(start + n - 1) as usize];
        match is_ap(window) {
            Some(diff) => witnesses.push((
                n,
                APSegment {
                    start,
                    len: n,
                    first: window[0].clone(),
                    difference: diff,
                },
            )),
            None => {
                first_violation = Some(n);
                break;
            }
        }
    }
    let verdict = if first_violation.is_some() {
        Verdict::Violated
    } else {
        Verdict::Consistent
    };
    Ok(MembershipReport {
        verdict,
        witnesses,
        first_violation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BlockKind {
    V,
    W,
}

/// One integer interval of positions; a `W` block may be empty (`hi < lo`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub k: u64,
    pub lo: BigUint,
    pub hi: BigUint,
}

impl Block {
    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn len(&self) -> BigUint {
        if self.is_empty() {
            BigUint::zero()
        } else {
            &self.hi - &self.lo + 1u32
        }
    }

    pub fn contains(&self, n: &BigUint) -> bool {
        !self.is_empty() && *n >= self.lo && *n <= self.hi
    }
}

/// The alternating partition `V_1, W_1, V_2, W_2, ...` of an initial
/// segment of position indices into free and AP-forced blocks.
#[derive(Debug, Clone)]
pub struct BlockPartition {
    blocks: Vec<Block>,
}

impl BlockPartition {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of complete (V, W) pairs.
    pub fn pairs(&self) -> u64 {
        (self.blocks.len() / 2) as u64
    }

    pub fn v_block(&self, k: u64) -> Option<&Block> {
        self.blocks.get((2 * (k - 1)) as usize)
    }

    pub fn w_block(&self, k: u64) -> Option<&Block> {
        self.blocks.get((2 * (k - 1) + 1) as usize)
    }

    /// Highest covered position.
    pub fn covered_end(&self) -> BigUint {
        self.blocks
            .iter()
            .rev()
            .find(|b| !b.is_empty())
            .map(|b| b.hi.clone())
            .unwrap_or_else(BigUint::zero)
    }

    /// Block containing position `n`, if covered.
    pub fn block_containing(&self, n: &BigUint) -> Option<&Block> {
        self.blocks.iter().find(|b| b.contains(n))
    }

    /// The blocks tile `1..=covered_end` with no gap or overlap.
    pub fn is_contiguous(&self) -> bool {
        let mut next = BigUint::one();
        for b in &self.blocks {
            if b.is_empty() {
                continue;
            }
            if b.lo != next {
                return false;
            }
            next = &b.hi + 1u32;
        }
        true
    }
}

/// Build the F-construction partition from an explicit schedule
/// `n_1 < n_2 < ...`: `V_k = [n_{k-1} + nu(n_{k-1}), n_k]` (with the seed
/// `n_0 + nu(n_0) := 1`) and `W_k = [n_k + 1, n_k + nu(n_k) - 1]`.
pub fn blocks_for_f(
    nu: &SequenceSpec,
    schedule: &[BigUint],
) -> Result<BlockPartition, ApError> {
    if schedule.is_empty() {
        return Err(ApError::SpecConstraintViolated {
            detail: "schedule is empty".to_string(),
        });
    }
    let mut blocks = Vec::with_capacity(schedule.len() * 2);
    let mut v_lo = BigUint::one();
    for (i, n_k) in schedule.iter().enumerate() {
        if *n_k < v_lo {
            return Err(ApError::ScheduleTooDense { k: i + 1 });
        }
        let nu_k = nu
            .eval_big(&BigInt::from(n_k.clone()))?
            .to_biguint()
            .ok_or_else(|| ApError::SpecConstraintViolated {
                detail: format!("nu(n_{}) is negative", i + 1),
            })?;
        if nu_k.is_zero() {
            return Err(ApError::SpecConstraintViolated {
                detail: format!("nu(n_{}) = 0", i + 1),
            });
        }
        blocks.push(Block {
            kind: BlockKind::V,
            k: (i + 1) as u64,
            lo: v_lo.clone(),
            hi: n_k.clone(),
        });
        blocks.push(Block {
            kind: BlockKind::W,
            k: (i + 1) as u64,
            lo: n_k + 1u32,
            hi: n_k + &nu_k - 1u32,
        });
        v_lo = n_k + &nu_k;
        if let Some(next) = schedule.get(i + 1) {
            if v_lo >= *next {
                return Err(ApError::ScheduleTooDense { k: i + 1 });
            }
        }
    }
    Ok(BlockPartition { blocks })
}

/// The default F-schedule: `n_1 = 3`, then
/// `n_{k+1} = max(n_k + nu(n_k) + 1, n_k^2)`, which grows fast enough for
/// the normalized block sums to converge at small `k`.
pub fn default_f_schedule(nu: &SequenceSpec, k_max: usize) -> Result<Vec<BigUint>, ApError> {
    let mut schedule: Vec<BigUint> = Vec::with_capacity(k_max);
    let mut n_k = BigUint::from(3u32);
    for _ in 0..k_max {
        schedule.push(n_k.clone());
        let nu_k = nu
            .eval_big(&BigInt::from(n_k.clone()))?
            .to_biguint()
            .ok_or_else(|| ApError::SpecConstraintViolated {
                detail: format!("nu({n_k}) is negative"),
            })?;
        let linear = &n_k + &nu_k + 1u32;
        let squared = &n_k * &n_k;
        n_k = linear.max(squared);
    }
    Ok(schedule)
}

/// Extend the default F-schedule until it covers positions `1..=depth`.
pub fn f_schedule_covering(nu: &SequenceSpec, depth: u64) -> Result<Vec<BigUint>, ApError> {
    let target = BigUint::from(depth.max(3));
    let mut k = 2usize;
    loop {
        let schedule = default_f_schedule(nu, k)?;
        if *schedule.last().unwrap() >= target {
            return Ok(schedule);
        }
        k += 1;
    }
}

/// Build the G-construction partition: `V_k = [sigma(k-1) + k - 1,
/// sigma(k)]` and `W_k = [sigma(k) + 1, sigma(k) + k - 1]`, with the seed
/// `sigma(0) := 1`.
pub fn blocks_for_g(sigma: &SequenceSpec, k_max: u64) -> Result<BlockPartition, ApError> {
    if k_max == 0 {
        return Err(ApError::SpecConstraintViolated {
            detail: "k_max must be at least 1".to_string(),
        });
    }
    let mut blocks = Vec::with_capacity((2 * k_max) as usize);
    let mut sigma_prev = BigUint::one(); // sigma(0)
    for k in 1..=k_max {
        let sigma_k = sigma
            .eval_big(&BigInt::from(k))?
            .to_biguint()
            .ok_or_else(|| ApError::SpecConstraintViolated {
                detail: format!("sigma({k}) is negative"),
            })?;
        let v_lo = &sigma_prev + (k - 1);
        if v_lo > sigma_k {
            return Err(ApError::SpecConstraintViolated {
                detail: format!("sigma({k}) - sigma({}) < {}", k - 1, k - 1),
            });
        }
        blocks.push(Block {
            kind: BlockKind::V,
            k,
            lo: v_lo,
            hi: sigma_k.clone(),
        });
        blocks.push(Block {
            kind: BlockKind::W,
            k,
            lo: &sigma_k + 1u32,
            hi: &sigma_k + (k - 1),
        });
        sigma_prev = sigma_k;
    }
    Ok(BlockPartition { blocks })
}

/// Number of (V, W) pairs needed so the G-partition covers `1..=depth`.
pub fn g_pairs_covering(sigma: &SequenceSpec, depth: u64) -> Result<u64, ApError> {
    let target = BigUint::from(depth);
    let mut k = 1u64;
    loop {
        let sigma_k = sigma
            .eval_big(&BigInt::from(k))?
            .to_biguint()
            .ok_or_else(|| ApError::SpecConstraintViolated {
                detail: format!("sigma({k}) is negative"),
            })?;
        if &sigma_k + (k - 1) >= target {
            return Ok(k);
        }
        k += 1;
    }
}

/// A possibly infinite growth constant.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum Growth {
    Finite(f64),
    Infinite,
}

impl Growth {
    pub fn as_f64(&self) -> f64 {
        match self {
            Growth::Finite(v) => *v,
            Growth::Infinite => f64::INFINITY,
        }
    }
}

/// Finite-horizon estimate of `alpha = liminf nu_n / n` or
/// `beta = lim (sigma_{n+1} - sigma_n) / n`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GrowthReport {
    pub kind: SeqKind,
    pub estimate: Growth,
    /// `(n, trend_n)`: the running minimum of the ratio for `nu` (liminf),
    /// the raw ratio for `sigma` (limit).
    pub trend: Vec<(u64, f64)>,
    /// Max-minus-min of the raw ratio over the last decade of the horizon.
    pub oscillation: f64,
    pub converged: bool,
}

/// Estimate the growth constant of a sequence over `n <= horizon`.
///
/// Divergence (an infinite constant) is declared when the raw ratio grows
/// by more than 1 between `horizon/2` and `horizon`.
pub fn growth_constants(spec: &SequenceSpec, horizon: u64) -> Result<GrowthReport, ApError> {
    let horizon = horizon.max(10);
    let ratio_at = |n: u64| -> Result<f64, ApError> {
        let r = match spec.kind {
            SeqKind::Nu => spec.eval(n)?.to_f64().unwrap_or(f64::INFINITY) / n as f64,
            SeqKind::Sigma => {
                let hi = spec.eval(n + 1)?.to_f64().unwrap_or(f64::INFINITY);
                let lo = spec.eval(n)?.to_f64().unwrap_or(f64::INFINITY);
                (hi - lo) / n as f64
            }
        };
        Ok(r)
    };
    let mut trend = Vec::with_capacity(horizon as usize);
    let mut running_min = f64::INFINITY;
    let mut last_decade = Vec::new();
    let decade_start = horizon - horizon / 10;
    for n in 1..=horizon {
        let r = ratio_at(n)?;
        running_min = running_min.min(r);
        let t = match spec.kind {
            SeqKind::Nu => running_min,
            SeqKind::Sigma => r,
        };
        trend.push((n, t));
        if n >= decade_start {
            last_decade.push(r);
        }
    }
    let osc = last_decade.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - last_decade.iter().cloned().fold(f64::INFINITY, f64::min);
    let r_half = ratio_at(horizon / 2)?;
    let r_end = ratio_at(horizon)?;
    let divergent = !r_end.is_finite() || r_end >= r_half + 1.0;
    let estimate = if divergent {
        Growth::Infinite
    } else {
        Growth::Finite(trend.last().unwrap().1)
    };
    Ok(GrowthReport {
        kind: spec.kind,
        estimate,
        trend,
        oscillation: osc,
        converged: osc.abs() <= 1e-3 && !divergent,
    })
}
