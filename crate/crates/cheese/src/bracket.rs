//! Rational brackets for the irrational quantities the construction needs:
//! square roots, n-th roots and natural logarithms.
//!
//! Each function returns `(lo, hi)` with the true value certified to lie in
//! `[lo, hi]` and `hi - lo <= 2^-t`. All intermediate arithmetic is exact;
//! roots come from integer floor roots, logarithms from the atanh series
//! with an explicit tail bound.

use crate::num::{pow2, q, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Brackets for `sqrt(x)`, `x >= 0`: `lo^2 <= x <= hi^2`, `hi - lo <= 2^-t`.
/// Exact square roots collapse to a zero-width bracket.
pub fn sqrt_brackets(x: &Q, t: u32) -> (Q, Q) {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return (Q::zero(), Q::zero());
    }
    // sqrt(p/q) = sqrt(p*q)/q, scaled by 2^t.
    let m: BigInt = (x.numer() * x.denom()) << (2 * t as usize);
    let s = m.sqrt();
    let den = x.denom() * (BigInt::one() << t as usize);
    let lo = Q::new(s.clone(), den.clone());
    if &s * &s == m {
        (lo.clone(), lo)
    } else {
        (lo, Q::new(s + 1, den))
    }
}

/// Brackets for `x^(1/n)`, `x >= 0`, `n >= 1`.
pub fn nth_root_brackets(x: &Q, n: u32, t: u32) -> (Q, Q) {
    assert!(n >= 1);
    assert!(!x.is_negative(), "nth root of negative rational");
    if x.is_zero() {
        return (Q::zero(), Q::zero());
    }
    if n == 1 {
        return (x.clone(), x.clone());
    }
    // x^(1/n) = (p * q^(n-1))^(1/n) / q, scaled by 2^t.
    let m: BigInt = (x.numer() * x.denom().pow(n - 1)) << ((t * n) as usize);
    let s = m.nth_root(n);
    let den = x.denom() * (BigInt::one() << t as usize);
    let lo = Q::new(s.clone(), den.clone());
    if s.pow(n) == m {
        (lo.clone(), lo)
    } else {
        (lo, Q::new(s + 1, den))
    }
}

/// Dyadic floor/ceiling brackets of width `2^-t` (zero width on dyadics).
fn dyadic_brackets(x: &Q, t: u32) -> (Q, Q) {
    let scaled_num: BigInt = x.numer() << t as usize;
    let floor = scaled_num.div_floor(x.denom());
    let den = BigInt::one() << t as usize;
    let lo = Q::new(floor.clone(), den.clone());
    if lo == *x {
        (lo.clone(), lo)
    } else {
        (lo, Q::new(floor + 1, den))
    }
}

/// Lower bound of `atanh(v)` for `|v| < 1/2`.
fn atanh_lower(v: &Q, t: u32) -> Q {
    if v.is_negative() {
        return -atanh_upper(&-v.clone(), t);
    }
    atanh_series(v, t).0
}

/// Upper bound of `atanh(v)` for `|v| < 1/2`.
fn atanh_upper(v: &Q, t: u32) -> Q {
    if v.is_negative() {
        return -atanh_lower(&-v.clone(), t);
    }
    atanh_series(v, t).1
}

/// Partial sums of `atanh(v) = sum v^(2k+1)/(2k+1)` for `0 <= v < 1/2`,
/// with the geometric tail bound `v^(2K+3) / ((2K+3)(1 - v^2))`.
fn atanh_series(v: &Q, t: u32) -> (Q, Q) {
    assert!(!v.is_negative() && *v < q(1, 2));
    if v.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let tol = pow2(-(t as i64 + 2));
    let v2 = v * v;
    let one_minus_v2 = Q::one() - &v2;
    let mut power = v.clone(); // v^(2k+1)
    let mut sum = Q::zero();
    let mut k: i64 = 0;
    loop {
        sum += &power / Q::from_integer(BigInt::from(2 * k + 1));
        let next_power = &power * &v2;
        let tail = &next_power / (&one_minus_v2 * Q::from_integer(BigInt::from(2 * k + 3)));
        if tail <= tol {
            return (sum.clone(), sum + tail);
        }
        power = next_power;
        k += 1;
        assert!(k < 10_000, "atanh series failed to converge");
    }
}

/// Brackets of `ln 2`.
pub fn ln2_brackets(t: u32) -> (Q, Q) {
    // ln 2 = 2 atanh(1/3)
    let third = q(1, 3);
    (
        qi2(&atanh_lower(&third, t + 2)),
        qi2(&atanh_upper(&third, t + 2)),
    )
}

fn qi2(x: &Q) -> Q {
    x * Q::from_integer(BigInt::from(2))
}

/// Brackets for `ln x`, `x > 0`, of width at most `2^-t`.
pub fn ln_brackets(x: &Q, t: u32) -> (Q, Q) {
    assert!(x.is_positive(), "log of non-positive rational");
    if x.is_one() {
        return (Q::zero(), Q::zero());
    }
    // Range-reduce: x = y * 2^e with y in [3/4, 3/2).
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut y = x / pow2(e);
    let hi_cut = q(3, 2);
    let lo_cut = q(3, 4);
    let two = Q::from_integer(BigInt::from(2));
    while y >= hi_cut {
        y = y / &two;
        e += 1;
    }
    while y < lo_cut {
        y = y * &two;
        e -= 1;
    }
    // Extra working precision: series/rounding slack plus room for the
    // e * ln2 contribution.
    let tt = t + 8 + (64 - e.unsigned_abs().leading_zeros());
    let u = (&y - Q::one()) / (&y + Q::one()); // in [-1/7, 1/5]
    let (u_lo, u_hi) = dyadic_brackets(&u, tt);
    let a_lo = qi2(&atanh_lower(&u_lo, tt));
    let a_hi = qi2(&atanh_upper(&u_hi, tt));
    if e == 0 {
        return (a_lo, a_hi);
    }
    let (l2_lo, l2_hi) = ln2_brackets(tt);
    let eq = Q::from_integer(BigInt::from(e));
    if e > 0 {
        (a_lo + &eq * l2_lo, a_hi + &eq * l2_hi)
    } else {
        (a_lo + &eq * l2_hi, a_hi + &eq * l2_lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q_to_f64, qi};
    use proptest::prelude::*;

    #[test]
    fn sqrt_exact_square() {
        let (lo, hi) = sqrt_brackets(&q(9, 16), 32);
        assert_eq!(lo, q(3, 4));
        assert_eq!(hi, q(3, 4));
    }

    #[test]
    fn sqrt_two() {
        let (lo, hi) = sqrt_brackets(&qi(2), 40);
        assert!(&lo * &lo <= qi(2));
        assert!(&hi * &hi >= qi(2));
        assert!(&hi - &lo <= pow2(-40));
        let mid = q_to_f64(&lo);
        assert!((mid - std::f64::consts::SQRT_2).abs() < 1e-11);
    }

    #[test]
    fn nth_root_cube() {
        let (lo, hi) = nth_root_brackets(&qi(27), 3, 32);
        assert_eq!(lo, qi(3));
        assert_eq!(hi, qi(3));
        let (lo, hi) = nth_root_brackets(&qi(2), 5, 32);
        let pow = |v: &Q| v * v * v * v * v;
        assert!(pow(&lo) <= qi(2));
        assert!(pow(&hi) >= qi(2));
        assert!(&hi - &lo <= pow2(-32));
    }

    #[test]
    fn ln_values() {
        let (lo, hi) = ln_brackets(&qi(2), 48);
        assert!(&hi - &lo <= pow2(-48));
        assert!((q_to_f64(&lo) - std::f64::consts::LN_2).abs() < 1e-13);
        let (lo, hi) = ln_brackets(&q(1, 2), 48);
        assert!((q_to_f64(&lo) + std::f64::consts::LN_2).abs() < 1e-13);
        assert!(lo <= hi);
        let (lo, hi) = ln_brackets(&Q::one(), 48);
        assert!(lo.is_zero() && hi.is_zero());
        let (lo, hi) = ln_brackets(&qi(1_000_000), 40);
        let truth = 1_000_000f64.ln();
        assert!(q_to_f64(&lo) <= truth && truth <= q_to_f64(&hi) + 1e-12);
    }

    proptest! {
        #[test]
        fn sqrt_contains(n in 1i64..100_000, d in 1i64..100_000) {
            let x = q(n, d);
            let (lo, hi) = sqrt_brackets(&x, 32);
            prop_assert!(&lo * &lo <= x);
            prop_assert!(&hi * &hi >= x);
            prop_assert!(&hi - &lo <= pow2(-32));
        }

        #[test]
        fn ln_contains(n in 1i64..50_000, d in 1i64..50_000) {
            let x = q(n, d);
            let (lo, hi) = ln_brackets(&x, 40);
            let truth = (n as f64 / d as f64).ln();
            prop_assert!(q_to_f64(&lo) <= truth + 1e-9);
            prop_assert!(q_to_f64(&hi) >= truth - 1e-9);
            prop_assert!(&hi - &lo <= pow2(-40));
        }
    }
}
