//! Logarithms of arbitrary-precision values and sums of logarithms over
//! huge integer ranges.
//!
//! Two regimes are needed. Exact rationals at moderate depth get a direct
//! logarithm using the bit length and the leading 64-bit mantissa. Sums
//! like `sum ln((2i+1)^t - (2i)^t)` over digit-window ranges whose blocks
//! grow super-geometrically can span 10^30 integers, so they are evaluated
//! with Euler-Maclaurin corrections around a numerically integrated main
//! term, always parameterized by the offset from the (exact) range base so
//! that narrow slices of giant ranges lose no precision.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

// ln 2 split so that `bits * LN2_HI` is exact for bit counts below 2^20.
const LN2_HI: f64 = 6.931_471_803_691_238_16e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_70e-10;

/// Natural log of a positive big integer via the leading 64-bit mantissa:
/// `ln x = ln(top 64 bits) + (bits - 64) * ln 2`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    let s = shift as f64;
    top.ln() + s * LN2_HI + s * LN2_LO
}

/// Natural log of a positive exact rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    ln_biguint(&x.numer().to_biguint().unwrap()) - ln_biguint(&x.denom().to_biguint().unwrap())
}

/// A sum of logarithms with a tracked absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSum {
    pub value: f64,
    pub err: f64,
}

impl LogSum {
    pub const ZERO: LogSum = LogSum { value: 0.0, err: 0.0 };

    pub fn add(self, other: LogSum) -> LogSum {
        LogSum {
            value: self.value + other.value,
            err: self.err + other.err + 1e-16 * (self.value.abs() + other.value.abs()),
        }
    }

    pub fn scale(self, c: f64) -> LogSum {
        LogSum {
            value: c * self.value,
            err: c.abs() * self.err + 1e-16 * (c * self.value).abs(),
        }
    }
}

/// Ranges longer than this are summed by Euler-Maclaurin instead of a loop.
const DIRECT_MAX: u64 = 1_000_000;
/// Euler-Maclaurin is only entered with offsets at least this large, where
/// its remainder is far below the tracked error.
const EM_MIN_OFFSET: u64 = 10_000;

/// `sum_{i=a}^{b} ln(2i + 1)`, empty (zero) when `b < a`.
pub fn sum_ln_odd(a: &BigUint, b: &BigUint) -> LogSum {
    if b < a {
        return LogSum::ZERO;
    }
    let base = ln_biguint(&(a * 2u32 + 1u32));
    let q = (a * 2u32 + 1u32).to_f64().unwrap();
    let span = b - a;
    let count = span.to_f64().unwrap() + 1.0;
    // ln(2(a+j)+1) = ln(2a+1) + ln1p(2j / (2a+1))
    let g = move |j: f64| (2.0 * j / q).ln_1p();
    let gp = move |j: f64| 2.0 / (q + 2.0 * j);
    let offset_sum = offset_range_sum(&span, g, gp);
    LogSum {
        value: count * base + offset_sum.value,
        err: count * 2e-16 * base.abs() + offset_sum.err,
    }
}

/// `sum_{i=a}^{b} ln((2i+1)^t - (2i)^t)`, the log-sizes of digit windows
/// `[(2i)^t, (2i+1)^t)`, empty when `b < a`.
///
/// Rewritten as `t ln(2i+1) + ln(1 - (2i/(2i+1))^t)` so no power is ever
/// materialized; the second factor is evaluated with `ln_1p`/`exp_m1`.
pub fn sum_ln_window(t: u32, a: &BigUint, b: &BigUint) -> LogSum {
    if b < a {
        return LogSum::ZERO;
    }
    let main = sum_ln_odd(a, b).scale(t as f64);
    let q = (a * 2u32 + 1u32).to_f64().unwrap();
    let tf = t as f64;
    let span = b - a;
    let f = move |j: f64| {
        let w = tf * (-1.0 / (q + 2.0 * j)).ln_1p();
        (-w.exp_m1()).ln()
    };
    let fp = move |j: f64| {
        let x = q + 2.0 * j;
        let w = tf * (-1.0 / x).ln_1p();
        let wp = 2.0 * tf / ((x - 1.0) * x);
        -wp / (-w).exp_m1()
    };
    main.add(offset_range_sum(&span, f, fp))
}

/// `sum_{j=0}^{span} f(j)` for a smooth, slowly varying `f` given with its
/// derivative. Loops when the range is short, otherwise splits off a short
/// head and applies Euler-Maclaurin with two correction terms.
fn offset_range_sum<F, G>(span: &BigUint, f: F, fp: G) -> LogSum
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    match span.to_u64() {
        Some(d) if d <= DIRECT_MAX => direct_sum(0, d, &f),
        _ => {
            let head = direct_sum(0, EM_MIN_OFFSET - 1, &f);
            let hi = span.to_f64().unwrap();
            head.add(euler_maclaurin(EM_MIN_OFFSET as f64, hi, &f, &fp))
        }
    }
}

fn direct_sum<F: Fn(f64) -> f64>(lo: u64, hi: u64, f: &F) -> LogSum {
    let mut acc = 0.0f64;
    let mut comp = 0.0f64; // Kahan compensation
    let mut abs = 0.0f64;
    for j in lo..=hi {
        let v = f(j as f64);
        abs += v.abs();
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    LogSum {
        value: acc,
        err: 4e-16 * abs + 1e-15 * acc.abs(),
    }
}

/// Euler-Maclaurin over integers in `[a, b]`:
/// `integral + (f(a)+f(b))/2 + (f'(b)-f'(a))/12 - (f'''(b)-f'''(a))/720`.
///
/// The remainder is bounded by `0.0014 * int |f''''|`, estimated from the
/// third derivative at the endpoints; with offsets >= 10^4 this sits many
/// orders below the integration error.
fn euler_maclaurin<F, G>(a: f64, b: f64, f: &F, fp: &G) -> LogSum
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let (integral, int_err) = integrate_smooth(a, b, f);
    let boundary = 0.5 * (f(a) + f(b));
    let b2 = (fp(b) - fp(a)) / 12.0;
    let f3a = third_derivative(a, fp);
    let f3b = third_derivative(b, fp);
    let b4 = -(f3b - f3a) / 720.0;
    let remainder = 1.4e-3 * (f3a.abs() + f3b.abs());
    LogSum {
        value: integral + boundary + b2 + b4,
        err: int_err + remainder + 0.05 * b4.abs() + 1e-15 * integral.abs(),
    }
}

fn third_derivative<G: Fn(f64) -> f64>(x: f64, fp: &G) -> f64 {
    let h = 1e-3 * (x.abs() + 1.0);
    (fp(x + h) - 2.0 * fp(x) + fp(x - h)) / (h * h)
}

/// Integrate a smooth slowly varying function over a geometric partition
/// (each segment sees O(1) relative variation), with adaptive Simpson and
/// Richardson extrapolation inside each segment.
fn integrate_smooth<F: Fn(f64) -> f64>(a: f64, b: f64, f: &F) -> (f64, f64) {
    let mut total = 0.0f64;
    let mut err = 0.0f64;
    let mut lo = a;
    while lo < b {
        let hi = (2.0 * (lo + 1.0)).min(b);
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let whole = (fa + 4.0 * fm + fb) * (hi - lo) / 6.0;
        let eps = 1e-13 * (1.0 + whole.abs());
        let (v, e) = simpson_rec(f, lo, hi, fa, fm, fb, whole, eps, 24);
        total += v;
        err += e + 1e-15 * v.abs();
        lo = hi;
    }
    (total, err)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (fa + 4.0 * flm + fm) * (m - a) / 6.0;
    let right = (fm + 4.0 * frm + fb) * (b - m) / 6.0;
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    let (lv, le) = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1);
    let (rv, re) = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
    (lv + rv, le + re)
}

/// Exact window size `#L_n = (2n+1)^t - (2n)^t` as a big integer.
pub fn window_size(t: u32, n: &BigUint) -> BigUint {
    let lo = n * 2u32;
    let hi = &lo + 1u32;
    hi.pow(t) - lo.pow(t)
}

/// Exact window bounds `[(2n)^t, (2n+1)^t)`.
pub fn window_bounds(t: u32, n: &BigUint) -> (BigUint, BigUint) {
    let lo = n * 2u32;
    let hi = &lo + 1u32;
    (lo.pow(t), hi.pow(t))
}

/// `ln((2m+1)^t + w)` for big `m`, `w`, evaluated in log space.
pub fn ln_power_plus(t: u32, m: &BigUint, w: &BigUint) -> f64 {
    let ln_pow = (t as f64) * ln_biguint(&(m * 2u32 + 1u32));
    if w.is_zero() {
        return ln_pow;
    }
    let ln_w = ln_biguint(w);
    let diff = ln_w - ln_pow;
    if diff < -700.0 {
        ln_pow
    } else {
        ln_pow + diff.exp().ln_1p()
    }
}

/// Log of an exact rational together with a small tracked error.
pub fn ln_rational_tracked(x: &BigRational) -> LogSum {
    let value = ln_rational(x);
    LogSum {
        value,
        err: 1e-15 * value.abs() + 1e-13,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    #[test]
    fn ln_biguint_matches_f64() {
        for x in [1u64, 2, 3, 10, 12345, 1 << 52, u64::MAX] {
            let big = BigUint::from(x);
            let got = ln_biguint(&big);
            let want = (x as f64).ln();
            assert!((got - want).abs() < 1e-12, "x={x} got={got} want={want}");
        }
    }

    #[test]
    fn ln_biguint_large_power() {
        // ln(7^500) = 500 ln 7
        let big = BigUint::from(7u32).pow(500);
        let got = ln_biguint(&big);
        let want = 500.0 * 7f64.ln();
        assert!((got - want).abs() < 1e-10, "got={got} want={want}");
    }

    #[test]
    fn ln_rational_signs() {
        let x = BigRational::new(BigInt::from(3), BigInt::from(7));
        assert!((ln_rational(&x) - (3f64 / 7.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn sum_ln_odd_small_range_exact() {
        let a = BigUint::from(4u32);
        let b = BigUint::from(9u32);
        let got = sum_ln_odd(&a, &b);
        let want: f64 = (4..=9).map(|i| ((2 * i + 1) as f64).ln()).sum();
        assert!((got.value - want).abs() < 1e-12);
        assert!(got.err < 1e-10);
    }

    #[test]
    fn sum_ln_odd_empty() {
        let a = BigUint::from(5u32);
        let b = BigUint::from(4u32);
        assert_eq!(sum_ln_odd(&a, &b), LogSum::ZERO);
    }

    #[test]
    fn sum_ln_window_small_range_matches_exact_big_integers() {
        for t in [2u32, 3, 10] {
            let a = BigUint::from(1u32);
            let b = BigUint::from(200u32);
            let got = sum_ln_window(t, &a, &b);
            let mut want = 0.0;
            let mut i = a.clone();
            while i <= b {
                want += ln_biguint(&window_size(t, &i));
                i += 1u32;
            }
            assert!(
                (got.value - want).abs() < 1e-9,
                "t={t} got={} want={want}",
                got.value
            );
        }
    }

    /// Kahan-compensated oracle loop (a naive f64 sum drifts at the 1e-2
    /// level over millions of terms).
    fn kahan_sum(lo: u64, hi: u64, f: impl Fn(u64) -> f64) -> f64 {
        let mut acc = 0.0f64;
        let mut comp = 0.0f64;
        for i in lo..=hi {
            let y = f(i) - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        acc
    }

    #[test]
    fn euler_maclaurin_agrees_with_direct_sum() {
        // Range just past the direct threshold, so the EM path engages.
        let a = BigUint::from(50_000u32);
        let b = BigUint::from(50_000u32 + 3_000_000u32);
        let em = sum_ln_odd(&a, &b);
        let want = kahan_sum(50_000, 3_050_000, |i| ((2 * i + 1) as f64).ln());
        assert!(
            (em.value - want).abs() < 1e-6,
            "em={} direct={} diff={}",
            em.value,
            want,
            em.value - want
        );
    }

    #[test]
    fn euler_maclaurin_window_agrees_with_direct() {
        let a = BigUint::from(20_000u32);
        let b = BigUint::from(20_000u32 + 2_000_000u32);
        let em = sum_ln_window(3, &a, &b);
        let want = kahan_sum(20_000, 2_020_000, |i| {
            let x = (2 * i + 1) as f64;
            let w = 3.0 * (-1.0 / x).ln_1p();
            3.0 * x.ln() + (-w.exp_m1()).ln()
        });
        assert!(
            (em.value - want).abs() < 1e-5,
            "em={} direct={}",
            em.value,
            want
        );
    }

    #[test]
    fn narrow_slice_of_giant_base_is_accurate() {
        // A 10-term slice at base 10^30: each term is ln(2i+1) with
        // i = 10^30 + j, so the sum is close to 10 ln(2e30) with a tiny
        // correction; verify against per-term big-integer logs.
        let a = BigUint::from(10u32).pow(30);
        let b = &a + 9u32;
        let got = sum_ln_odd(&a, &b);
        let mut want = 0.0;
        let mut i = a.clone();
        while i <= b {
            want += ln_biguint(&(&i * 2u32 + 1u32));
            i += 1u32;
        }
        assert!((got.value - want).abs() < 1e-9, "got={} want={want}", got.value);
    }

    #[test]
    fn window_size_examples() {
        assert_eq!(window_size(2, &BigUint::from(1u32)), BigUint::from(5u32));
        assert_eq!(window_size(2, &BigUint::from(2u32)), BigUint::from(9u32));
        assert_eq!(window_size(3, &BigUint::from(1u32)), BigUint::from(19u32));
    }

    #[test]
    fn ln_power_plus_matches_exact() {
        let m = BigUint::from(9u32);
        let w = BigUint::from(9u32);
        let exact = ln_biguint(&(BigUint::from(19u32).pow(2) + 9u32));
        assert!((ln_power_plus(2, &m, &w) - exact).abs() < 1e-12);
        assert_eq!(ln_power_plus(2, &m, &BigUint::one()) > ln_power_plus(2, &m, &BigUint::zero()), true);
    }
}
