//! Polynomials and rational functions with exact rational-complex
//! coefficients: the elements of `R_0(X)` that the bounds and witness
//! machinery evaluate and differentiate.

use crate::geometry::QPoint;
use crate::num::{QComplex, Q};

/// Dense polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<QComplex>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<QComplex>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![QComplex::one()],
        }
    }

    pub fn constant(c: QComplex) -> Self {
        Poly::new(vec![c])
    }

    /// `z - a`
    pub fn linear(a: QComplex) -> Self {
        Poly::new(vec![a.neg(), QComplex::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, z: &QComplex) -> QComplex {
        let mut acc = QComplex::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn eval_at_point(&self, z: &QPoint) -> QComplex {
        self.eval(&QComplex::new(z.x.clone(), z.y.clone()))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(QComplex::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(QComplex::zero);
            out.push(a.add(&b));
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![QComplex::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    pub fn scale_complex(&self, s: &QComplex) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.scale(&crate::num::qi(i as i64)));
        }
        Poly::new(out)
    }
}

/// Quotient of polynomials. `reduced` records whether a gcd content
/// reduction was performed; the default pipeline never reduces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
    pub reduced: bool,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "denominator identically zero");
        RationalFunction {
            num,
            den,
            reduced: false,
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction::new(p, Poly::one())
    }

    /// `c / (z - a)`
    pub fn simple_pole(c: QComplex, a: QComplex) -> Self {
        RationalFunction::new(Poly::constant(c), Poly::linear(a))
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            self.num
                .mul(&other.den)
                .sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    /// Exact evaluation; `None` when the denominator vanishes at `z`.
    pub fn eval(&self, z: &QComplex) -> Option<QComplex> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(z).div(&d))
    }

    pub fn eval_at_point(&self, z: &QPoint) -> Option<QComplex> {
        self.eval(&QComplex::new(z.x.clone(), z.y.clone()))
    }

    /// Numerator of the k-th derivative over `den^(k+1)`:
    /// `N_0 = num`, `N_{j+1} = N_j' * den - (j+1) * N_j * den'`.
    /// Keeps degrees linear in `k` instead of doubling.
    pub fn derivative_numerator(&self, k: usize) -> Poly {
        let dp = self.den.derivative();
        let mut nk = self.num.clone();
        for j in 0..k {
            nk = nk
                .derivative()
                .mul(&self.den)
                .sub(&nk.mul(&dp).scale(&crate::num::qi(j as i64 + 1)));
        }
        nk
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qi};

    fn c(re: i64, im: i64) -> QComplex {
        QComplex::new(qi(re), qi(im))
    }

    #[test]
    fn eval_horner() {
        // p(z) = 1 + 2z + z^2 at z = 1+i -> 1 + 2(1+i) + (1+i)^2 = 3 + 4i
        let p = Poly::new(vec![c(1, 0), c(2, 0), c(1, 0)]);
        assert_eq!(p.eval(&c(1, 1)), c(3, 4));
    }

    #[test]
    fn derivative_rule() {
        // (z^3)' = 3z^2
        let p = Poly::new(vec![c(0, 0), c(0, 0), c(0, 0), c(1, 0)]);
        let d = p.derivative();
        assert_eq!(d, Poly::new(vec![c(0, 0), c(0, 0), c(3, 0)]));
    }

    #[test]
    fn rational_eval_and_pole() {
        // f = 1/(z-2)
        let f = RationalFunction::simple_pole(QComplex::one(), c(2, 0));
        assert_eq!(f.eval(&c(0, 0)).unwrap(), QComplex::from_real(q(-1, 2)));
        assert!(f.eval(&c(2, 0)).is_none());
        // f = z at 1/3
        let idp = RationalFunction::from_poly(Poly::linear(QComplex::zero()));
        assert_eq!(
            idp.eval(&QComplex::from_real(q(1, 3))).unwrap(),
            QComplex::from_real(q(1, 3))
        );
    }

    #[test]
    fn derivative_numerator_matches_quotient_rule() {
        // f = 1/(z-2): f' = -1/(z-2)^2, so N_1 / den^2 with N_1 = -1
        let f = RationalFunction::simple_pole(QComplex::one(), c(2, 0));
        let n1 = f.derivative_numerator(1);
        assert_eq!(n1, Poly::constant(c(-1, 0)));
    }
}
