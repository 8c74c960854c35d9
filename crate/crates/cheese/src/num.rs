//! Exact rational scalars and rational-complex numbers.
//!
//! Every quantity the construction certifies is held as a `BigRational`
//! (always in lowest terms with a positive denominator, as guaranteed by
//! `num-rational`). Floating point appears only in diagnostics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Q = BigRational;

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d` as a rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `2^t` for possibly negative `t`.
pub fn pow2(t: i64) -> Q {
    if t >= 0 {
        Q::from_integer(BigInt::one() << t as usize)
    } else {
        Q::new(BigInt::one(), BigInt::one() << (-t) as usize)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parse a rational literal: `p/q`, an integer, or a finite decimal string.
/// Floats in exponent notation are rejected; nothing is rounded.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal literal {s:?}"));
        }
        let negative = int_part.starts_with('-');
        let int: BigInt = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| format!("bad decimal literal {s:?}"))?
        };
        let frac: BigInt = frac_part
            .parse()
            .map_err(|_| format!("bad decimal literal {s:?}"))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mag = int.abs() * &scale + frac;
        let signed = if negative { -mag } else { mag };
        return Ok(Q::new(signed, scale));
    }
    let n: BigInt = s.parse().map_err(|_| format!("bad rational literal {s:?}"))?;
    Ok(Q::from_integer(n))
}

/// `p/q` form, `p` alone when the denominator is 1.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QComplex {
    pub re: Q,
    pub im: Q,
}

impl QComplex {
    pub fn new(re: Q, im: Q) -> Self {
        QComplex { re, im }
    }

    pub fn zero() -> Self {
        QComplex {
            re: Q::zero(),
            im: Q::zero(),
        }
    }

    pub fn one() -> Self {
        QComplex {
            re: Q::one(),
            im: Q::zero(),
        }
    }

    pub fn from_real(re: Q) -> Self {
        QComplex {
            re,
            im: Q::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &QComplex) -> QComplex {
        QComplex::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn sub(&self, other: &QComplex) -> QComplex {
        QComplex::new(&self.re - &other.re, &self.im - &other.im)
    }

    pub fn neg(&self) -> QComplex {
        QComplex::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, other: &QComplex) -> QComplex {
        QComplex::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    pub fn scale(&self, s: &Q) -> QComplex {
        QComplex::new(&self.re * s, &self.im * s)
    }

    /// Exact division; the divisor must be nonzero.
    pub fn div(&self, other: &QComplex) -> QComplex {
        let m = other.modulus_sq();
        assert!(!m.is_zero(), "division by complex zero");
        let conj = QComplex::new(other.re.clone(), -other.im.clone());
        self.mul(&conj).scale(&m.recip())
    }

    pub fn pow(&self, k: usize) -> QComplex {
        let mut acc = QComplex::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `|z|^2`, exact.
    pub fn modulus_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn modulus_f64(&self) -> f64 {
        q_to_f64(&self.modulus_sq()).sqrt()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

impl fmt::Display for QComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}i",
            format_rational(&self.re),
            format_rational(&self.im)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), q(-3, 4));
        assert_eq!(parse_rational("2").unwrap(), qi(2));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("1.125").unwrap(), q(9, 8));
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn complex_arithmetic() {
        let i = QComplex::new(Q::zero(), Q::one());
        assert_eq!(i.mul(&i), QComplex::from_real(qi(-1)));
        let z = QComplex::new(qi(3), qi(4));
        assert_eq!(z.modulus_sq(), qi(25));
        let w = z.div(&z);
        assert_eq!(w, QComplex::one());
    }

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), qi(8));
        assert_eq!(pow2(-2), q(1, 4));
        assert_eq!(pow2(0), qi(1));
    }

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
