//! Exact arithmetic for regular continued fractions: convergents,
//! fundamental intervals, the Gauss map, and expansion of rationals.
//!
//! Everything here is computed with arbitrary-precision integers and
//! rationals; no operation rounds. Digits `a_1, a_2, ...` are the partial
//! quotients of a number in `(0,1)`, and the fundamental interval of a
//! digit prefix is the set of points whose expansion starts with it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("digit sequence is empty")]
    EmptySequence,
    #[error("digit at position {position} is not a positive integer")]
    NonPositiveDigit { position: usize },
    #[error("{value} is outside the domain {domain}")]
    OutOfDomain { value: String, domain: &'static str },
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("digits are not strictly increasing at position {position}")]
    NotStrictlyIncreasing { position: usize },
}

/// A finite prefix of a partial-quotient sequence. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSeq {
    digits: Vec<BigUint>,
}

impl DigitSeq {
    pub fn new(digits: Vec<BigUint>) -> Result<Self, CfError> {
        for (i, d) in digits.iter().enumerate() {
            if d.is_zero() {
                return Err(CfError::NonPositiveDigit { position: i + 1 });
            }
        }
        Ok(DigitSeq { digits })
    }

    pub fn from_u64s(digits: &[u64]) -> Result<Self, CfError> {
        Self::new(digits.iter().map(|&d| BigUint::from(d)).collect())
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    /// Digit at 1-based position `i`.
    pub fn digit(&self, i: usize) -> Result<&BigUint, CfError> {
        if i == 0 || i > self.digits.len() {
            return Err(CfError::IndexOutOfRange {
                index: i,
                len: self.digits.len(),
            });
        }
        Ok(&self.digits[i - 1])
    }

    /// Prefix of the first `n` digits.
    pub fn prefix(&self, n: usize) -> Result<DigitSeq, CfError> {
        if n > self.digits.len() {
            return Err(CfError::IndexOutOfRange {
                index: n,
                len: self.digits.len(),
            });
        }
        Ok(DigitSeq {
            digits: self.digits[..n].to_vec(),
        })
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.digits.windows(2).all(|w| w[0] < w[1])
    }

    /// First 1-based position `i` with `a_i >= a_{i+1}`, if any.
    pub fn first_non_increase(&self) -> Option<usize> {
        self.digits.windows(2).position(|w| w[0] >= w[1]).map(|i| i + 1)
    }
}

impl fmt::Display for DigitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// One convergent `p_i / q_i` of a digit sequence, together with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigUint,
    pub q: BigUint,
    pub index: usize,
}

impl Convergent {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.p.clone()),
            BigInt::from(self.q.clone()),
        )
    }
}

/// Convergents `(p_i, q_i)` for `i = 1..n`, from the double recursion with
/// seeds `p_{-1}=1, p_0=0, q_{-1}=0, q_0=1`.
pub fn convergents(d: &DigitSeq) -> Result<Vec<Convergent>, CfError> {
    if d.is_empty() {
        return Err(CfError::EmptySequence);
    }
    let mut out = Vec::with_capacity(d.len());
    let (mut p_prev, mut p_cur) = (BigUint::one(), BigUint::zero());
    let (mut q_prev, mut q_cur) = (BigUint::zero(), BigUint::one());
    for (i, a) in d.digits().iter().enumerate() {
        let p_next = a * &p_cur + &p_prev;
        let q_next = a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        out.push(Convergent {
            p: p_cur.clone(),
            q: q_cur.clone(),
            index: i + 1,
        });
    }
    Ok(out)
}

/// Denominators `(q_{n-1}, q_n)` of a digit sequence, without keeping the
/// whole convergent list.
pub fn q_pair(d: &DigitSeq) -> Result<(BigUint, BigUint), CfError> {
    if d.is_empty() {
        return Err(CfError::EmptySequence);
    }
    let (mut q_prev, mut q_cur) = (BigUint::zero(), BigUint::one());
    for a in d.digits() {
        let q_next = a * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, q_next);
    }
    Ok((q_prev, q_cur))
}

/// Exact value `p_n / q_n` of a finite digit sequence.
pub fn value(d: &DigitSeq) -> Result<BigRational, CfError> {
    let convs = convergents(d)?;
    Ok(convs.last().unwrap().to_rational())
}

/// An `n`-th fundamental interval: the set of points in `(0,1]` whose
/// expansion begins with a given digit prefix.
///
/// The endpoints are `p_n/q_n` and `(p_n+p_{n-1})/(q_n+q_{n-1})`; which one
/// is the closed end depends on the parity of `n`. `closed_left` is true
/// iff `n` is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub depth: usize,
    pub closed_left: bool,
}

impl FundInterval {
    /// Exact diameter, equal to `1/(q_n (q_n + q_{n-1}))`.
    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Exact membership, honoring which endpoint is closed.
    pub fn contains(&self, x: &BigRational) -> bool {
        if self.closed_left {
            x >= &self.lo && x < &self.hi
        } else {
            x > &self.lo && x <= &self.hi
        }
    }

    /// Exact set containment of `other` in `self`, honoring which side of
    /// each interval is closed.
    pub fn contains_interval(&self, other: &FundInterval) -> bool {
        use std::cmp::Ordering;
        let left_ok = match other.lo.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => !other.closed_left || self.closed_left,
            Ordering::Less => false,
        };
        let right_ok = match other.hi.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => other.closed_left || !self.closed_left,
            Ordering::Greater => false,
        };
        left_ok && right_ok
    }

    /// Whether the interval meets the closed ball `[lo, hi]`.
    pub fn intersects_closed(&self, lo: &BigRational, hi: &BigRational) -> bool {
        if lo > hi {
            return false;
        }
        let left_ok = if self.closed_left {
            hi >= &self.lo
        } else {
            hi > &self.lo
        };
        let right_ok = if self.closed_left {
            lo < &self.hi
        } else {
            lo <= &self.hi
        };
        left_ok && right_ok
    }
}

/// Fundamental interval of a digit prefix, by parity of the depth.
pub fn fundamental_interval(d: &DigitSeq) -> Result<FundInterval, CfError> {
    let convs = convergents(d)?;
    let n = d.len();
    let last = &convs[n - 1];
    let (p_prev, q_prev) = if n >= 2 {
        (convs[n - 2].p.clone(), convs[n - 2].q.clone())
    } else {
        (BigUint::zero(), BigUint::one())
    };
    let a = last.to_rational();
    let b = BigRational::new(
        BigInt::from(&last.p + &p_prev),
        BigInt::from(&last.q + &q_prev),
    );
    let (lo, hi, closed_left) = if n % 2 == 0 {
        (a, b, true) // [p_n/q_n, (p_n+p_{n-1})/(q_n+q_{n-1}))
    } else {
        (b, a, false) // ((p_n+p_{n-1})/(q_n+q_{n-1}), p_n/q_n]
    };
    Ok(FundInterval {
        lo,
        hi,
        depth: n,
        closed_left,
    })
}

/// Exact interval length `1/(q_n (q_n + q_{n-1}))` straight from the
/// denominators, without building the endpoints.
pub fn interval_length(d: &DigitSeq) -> Result<BigRational, CfError> {
    let (q_prev, q_cur) = q_pair(d)?;
    let den = &q_cur * (&q_cur + &q_prev);
    Ok(BigRational::new(BigInt::one(), BigInt::from(den)))
}

/// Gauss map `T(x) = 1/x - floor(1/x)` on `(0, 1]`, exact.
pub fn gauss_map(x: &BigRational) -> Result<BigRational, CfError> {
    if x <= &BigRational::zero() || x > &BigRational::one() {
        return Err(CfError::OutOfDomain {
            value: x.to_string(),
            domain: "(0, 1]",
        });
    }
    let inv = x.recip();
    Ok(&inv - inv.floor())
}

/// Continued-fraction digits of a rational in `(0,1)`.
///
/// The expansion is canonical: it terminates and its last digit is >= 2,
/// so `convergents(expand(x))` ends exactly at `x`.
pub fn expand(x: &BigRational) -> Result<DigitSeq, CfError> {
    if x <= &BigRational::zero() || x >= &BigRational::one() {
        return Err(CfError::OutOfDomain {
            value: x.to_string(),
            domain: "(0, 1)",
        });
    }
    let mut p = x.denom().abs().to_biguint().unwrap();
    let mut q = x.numer().abs().to_biguint().unwrap();
    // Euclidean algorithm on (p, q) = (den, num): a = floor(p/q).
    let mut digits = Vec::new();
    while !q.is_zero() {
        let (a, r) = num_integer::Integer::div_rem(&p, &q);
        digits.push(a);
        p = std::mem::replace(&mut q, r);
    }
    DigitSeq::new(digits)
}

/// Exact pass/fail report for the three standard bounds connecting a
/// fundamental interval's length with its convergent denominators:
///
/// 1. `1/(2 q_n^2) <= |I_n| <= 1/q_n^2`
/// 2. `(1/2) prod (a_i + 1)^{-2} <= |I_n| <= prod a_i^{-2}`
/// 3. `1 <= q_n / (q_k(a_1..a_k) q_{n-k}(a_{k+1}..a_n)) <= 2`
#[derive(Debug, Clone)]
pub struct QnBoundsReport {
    pub length_vs_qn: bool,
    pub length_vs_digit_products: bool,
    pub split_ratio_in_range: bool,
    pub split_ratio: BigRational,
}

impl QnBoundsReport {
    pub fn all_pass(&self) -> bool {
        self.length_vs_qn && self.length_vs_digit_products && self.split_ratio_in_range
    }
}

/// Check the length and splitting bounds at split index `k`, `1 <= k <= n`,
/// entirely in exact rational arithmetic.
pub fn verify_qn_bounds(d: &DigitSeq, k: usize) -> Result<QnBoundsReport, CfError> {
    let n = d.len();
    if n == 0 {
        return Err(CfError::EmptySequence);
    }
    if k == 0 || k > n {
        return Err(CfError::IndexOutOfRange { index: k, len: n });
    }
    let (q_prev, q_n) = q_pair(d)?;
    let len = BigRational::new(BigInt::one(), BigInt::from(&q_n * (&q_n + &q_prev)));

    let q_n_sq = BigRational::new(BigInt::one(), BigInt::from(&q_n * &q_n));
    let half_q_n_sq = &q_n_sq / BigRational::from_integer(BigInt::from(2u32));
    let length_vs_qn = len >= half_q_n_sq && len <= q_n_sq;

    let mut prod_a = BigUint::one();
    let mut prod_a1 = BigUint::one();
    for a in d.digits() {
        prod_a *= a * a;
        let a1 = a + BigUint::one();
        prod_a1 *= &a1 * &a1;
    }
    let upper = BigRational::new(BigInt::one(), BigInt::from(prod_a));
    let lower = BigRational::new(BigInt::one(), BigInt::from(prod_a1 * BigUint::from(2u32)));
    let length_vs_digit_products = len >= lower && len <= upper;

    let (_, q_k) = q_pair(&d.prefix(k)?)?;
    let q_tail = if k == n {
        BigUint::one() // q_0 seed for the empty suffix
    } else {
        let tail = DigitSeq::new(d.digits()[k..].to_vec())?;
        q_pair(&tail)?.1
    };
    let split_ratio = BigRational::new(BigInt::from(q_n), BigInt::from(q_k * q_tail));
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2u32));
    let split_ratio_in_range = split_ratio >= one && split_ratio <= two;

    Ok(QnBoundsReport {
        length_vs_qn,
        length_vs_digit_products,
        split_ratio_in_range,
        split_ratio,
    })
}

/// Check all three bounds at every split index `1 <= k <= n` in one pass,
/// sharing prefix and suffix denominator arrays. Everything reduces to
/// big-integer comparisons: with `den = q_n (q_n + q_(n-1))`, the length
/// bounds read `q_n^2 <= den <= 2 q_n^2` and
/// `prod a_i^2 <= den <= 2 prod (a_i + 1)^2`, and the splitting bound
/// reads `q_k q_(n-k) <= q_n <= 2 q_k q_(n-k)`.
pub fn qn_bounds_hold_everywhere(d: &DigitSeq) -> Result<bool, CfError> {
    let n = d.len();
    if n == 0 {
        return Err(CfError::EmptySequence);
    }
    // Prefix denominators q_0..q_n.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(BigUint::one());
    let (mut q_prev, mut q_cur) = (BigUint::zero(), BigUint::one());
    for a in d.digits() {
        let q_next = a * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, q_next);
        prefix.push(q_cur.clone());
    }
    let q_n = prefix[n].clone();
    let den = &q_n * (&q_n + &q_prev);

    let q_n_sq = &q_n * &q_n;
    if den < q_n_sq || den > (&q_n_sq << 1) {
        return Ok(false);
    }
    let mut prod_a = BigUint::one();
    let mut prod_a1 = BigUint::one();
    for a in d.digits() {
        prod_a *= a * a;
        let a1 = a + BigUint::one();
        prod_a1 *= &a1 * &a1;
    }
    if den < prod_a || den > (prod_a1 << 1) {
        return Ok(false);
    }
    // Suffix denominators: suffix[k] = q_(n-k)(a_(k+1), ..., a_n).
    let mut suffix = vec![BigUint::one(); n + 1];
    let (mut s_prev, mut s_cur) = (BigUint::zero(), BigUint::one());
    for (i, a) in d.digits().iter().enumerate().rev() {
        let s_next = a * &s_cur + &s_prev;
        s_prev = std::mem::replace(&mut s_cur, s_next);
        suffix[i] = s_cur.clone();
    }
    for k in 1..=n {
        let split = &prefix[k] * &suffix[k];
        if q_n < split || q_n > (split << 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parse a rational written as `num/den` or a bare integer.
pub fn parse_rational(text: &str) -> Result<BigRational, CfError> {
    let bad = || CfError::OutOfDomain {
        value: text.to_string(),
        domain: "rational of the form p/q",
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn convergents_of_1_2_3() {
        let d = DigitSeq::from_u64s(&[1, 2, 3]).unwrap();
        let cs = convergents(&d).unwrap();
        let pq: Vec<(u64, u64)> = cs
            .iter()
            .map(|c| (c.p.to_u64().unwrap(), c.q.to_u64().unwrap()))
            .collect();
        assert_eq!(pq, vec![(1, 1), (2, 3), (7, 10)]);
        // Oracle: the nested fraction 1/(1+1/(2+1/3)) evaluated exactly.
        let nested = (rat(1, 1) / (rat(1, 1) + rat(1, 1) / (rat(2, 1) + rat(1, 3)))).reduced();
        assert_eq!(cs.last().unwrap().to_rational(), nested);
    }

    #[test]
    fn convergents_of_single_digits() {
        let d = DigitSeq::from_u64s(&[1]).unwrap();
        let cs = convergents(&d).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].to_rational(), rat(1, 1));
        let d = DigitSeq::from_u64s(&[5]).unwrap();
        let cs = convergents(&d).unwrap();
        assert_eq!(cs[0].to_rational(), rat(1, 5));
    }

    #[test]
    fn convergents_errors() {
        assert_eq!(
            convergents(&DigitSeq::new(vec![]).unwrap()),
            Err(CfError::EmptySequence)
        );
        assert!(matches!(
            DigitSeq::new(vec![BigUint::from(1u32), BigUint::zero()]),
            Err(CfError::NonPositiveDigit { position: 2 })
        ));
    }

    #[test]
    fn interval_of_2_is_third_to_half() {
        let d = DigitSeq::from_u64s(&[2]).unwrap();
        let iv = fundamental_interval(&d).unwrap();
        assert_eq!(iv.lo, rat(1, 3));
        assert_eq!(iv.hi, rat(1, 2));
        assert!(!iv.closed_left); // n odd: (1/3, 1/2]
        assert_eq!(iv.length(), rat(1, 6));
    }

    #[test]
    fn interval_of_1_2_is_two_thirds_to_three_quarters() {
        let d = DigitSeq::from_u64s(&[1, 2]).unwrap();
        let iv = fundamental_interval(&d).unwrap();
        assert_eq!(iv.lo, rat(2, 3));
        assert_eq!(iv.hi, rat(3, 4));
        assert!(iv.closed_left); // n even: [2/3, 3/4)
        assert_eq!(iv.length(), rat(1, 12));
        assert_eq!(interval_length(&d).unwrap(), rat(1, 12));
    }

    #[test]
    fn gauss_map_values() {
        assert_eq!(gauss_map(&rat(7, 10)).unwrap(), rat(3, 7));
        assert_eq!(gauss_map(&rat(1, 3)).unwrap(), rat(0, 1));
        assert_eq!(gauss_map(&rat(2, 5)).unwrap(), rat(1, 2));
        assert!(gauss_map(&rat(0, 1)).is_err());
        assert!(gauss_map(&rat(3, 2)).is_err());
    }

    #[test]
    fn expand_values() {
        let digits = |x: BigRational| -> Vec<u64> {
            expand(&x)
                .unwrap()
                .digits()
                .iter()
                .map(|d| d.to_u64().unwrap())
                .collect()
        };
        assert_eq!(digits(rat(7, 10)), vec![1, 2, 3]);
        assert_eq!(digits(rat(1, 2)), vec![2]);
        assert_eq!(digits(rat(3, 7)), vec![2, 3]);
        assert!(expand(&rat(1, 1)).is_err());
        assert!(expand(&rat(-1, 2)).is_err());
    }

    #[test]
    fn qn_bounds_examples() {
        let d = DigitSeq::from_u64s(&[1, 2]).unwrap();
        let rep = verify_qn_bounds(&d, 1).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.split_ratio, rat(3, 2));

        let d = DigitSeq::from_u64s(&[1]).unwrap();
        let rep = verify_qn_bounds(&d, 1).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.split_ratio, rat(1, 1));

        assert!(verify_qn_bounds(&d, 2).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_rationals(num in 1u64..1_000_000, den in 2u64..1_000_000) {
            prop_assume!(num < den);
            let x = rat(num as i64, den as i64).reduced();
            let d = expand(&x).unwrap();
            prop_assert!(*d.digits().last().unwrap() >= BigUint::from(2u32));
            let cs = convergents(&d).unwrap();
            prop_assert_eq!(cs.last().unwrap().to_rational(), x);
        }

        #[test]
        fn shift_property(digits in proptest::collection::vec(1u64..50, 2..8)) {
            // Canonical form requires the final digit >= 2.
            let mut digits = digits;
            if *digits.last().unwrap() < 2 {
                *digits.last_mut().unwrap() = 2;
            }
            let d = DigitSeq::from_u64s(&digits).unwrap();
            let x = value(&d).unwrap();
            let shifted = expand(&gauss_map(&x).unwrap()).unwrap();
            prop_assert_eq!(shifted.digits(), &d.digits()[1..]);
        }

        #[test]
        fn interval_nesting_and_length(digits in proptest::collection::vec(1u64..1000, 2..12)) {
            let d = DigitSeq::from_u64s(&digits).unwrap();
            let inner = fundamental_interval(&d).unwrap();
            let outer = fundamental_interval(&d.prefix(d.len() - 1).unwrap()).unwrap();
            // Closures always nest; as half-open sets the child sits inside
            // the parent except when the appended digit is 1, where its
            // closed endpoint coincides with the parent's open endpoint.
            prop_assert!(inner.lo >= outer.lo && inner.hi <= outer.hi);
            if *digits.last().unwrap() >= 2 {
                prop_assert!(outer.contains_interval(&inner));
            }
            let (q_prev, q_n) = q_pair(&d).unwrap();
            let expect = BigRational::new(
                BigInt::one(),
                BigInt::from(&q_n * (&q_n + &q_prev)),
            );
            prop_assert_eq!(inner.length(), expect);
        }

        #[test]
        fn qn_split_ratio_bounds(digits in proptest::collection::vec(1u64..1000, 1..20), k_seed: usize) {
            let d = DigitSeq::from_u64s(&digits).unwrap();
            let k = 1 + k_seed % d.len();
            let rep = verify_qn_bounds(&d, k).unwrap();
            prop_assert!(rep.all_pass());
        }
    }
}
