//! Certified derivative bounds at points of the cheese.
//!
//! The central estimate is the Cauchy-type sum
//! `|f^(k)(z)| <= k! * sum_j r_j / s_j^(k+1) * ||f||`
//! over the outer boundary (`r_0 = 1`, `s_0 = 1 - |z|`) and the deleted
//! discs (`s_j = dist(z, Delta_j)`). The distances are irrational, so each
//! `s_j` is replaced by a certified rational lower bracket and the whole
//! sum rounds upward: the returned value is a true upper bound.

use crate::bracket::sqrt_brackets;
use crate::geometry::{dist_sq, QPoint};
use crate::num::{factorial, q_to_f64, Q};
use crate::poly::RationalFunction;
use crate::schedule::{BoundTable, CheeseDescription};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct BoundQuery {
    pub z: QPoint,
    pub k: usize,
    /// Starting bracket precision for the distance roots.
    pub root_precision: u32,
}

#[derive(Clone, Debug)]
pub struct DerivativeBound {
    /// Certified upper bound for `|f^(k)(z)| / ||f||`.
    pub value_upper: Q,
    /// Number of summands: one outer term plus one per deletion.
    pub terms: usize,
    /// Bracket precision that made every distance bound positive.
    pub precision_used: u32,
}

const MAX_PRECISION: u32 = 4096;

/// Evaluate the certified Cauchy bound at `query.z`.
///
/// Fails with `InvalidQuery` when `z` is outside the open unit disc or
/// inside the closure of a deletion (the bound is infinite there), and with
/// `PrecisionExhausted` if the brackets cannot separate `z` from a deletion
/// within the precision cap.
pub fn cauchy_bound(cheese: &CheeseDescription, query: &BoundQuery) -> Result<DerivativeBound> {
    let z = &query.z;
    let origin = QPoint::origin();
    let z_sq = dist_sq(z, &origin);
    if z_sq >= Q::one() {
        return Err(Error::InvalidQuery(
            "point not interior to the unit disc".into(),
        ));
    }
    for d in &cheese.deletions {
        let dd = dist_sq(z, &d.disc.center);
        if dd <= &d.disc.radius * &d.disc.radius {
            return Err(Error::InvalidQuery(
                "point lies in the closure of a deleted disc".into(),
            ));
        }
    }

    let mut t = query.root_precision.max(8);
    loop {
        if let Some(total) = try_sum(cheese, z, &z_sq, query.k, t) {
            return Ok(DerivativeBound {
                value_upper: Q::from_integer(factorial(query.k)) * total,
                terms: cheese.deletions.len() + 1,
                precision_used: t,
            });
        }
        if t >= MAX_PRECISION {
            return Err(Error::PrecisionExhausted(format!(
                "distance brackets still degenerate at 2^-{t}"
            )));
        }
        t *= 2;
    }
}

/// One pass of the sum at precision `t`; `None` if any lower distance
/// bracket fails to clear zero.
fn try_sum(cheese: &CheeseDescription, z: &QPoint, z_sq: &Q, k: usize, t: u32) -> Option<Q> {
    // s_0 >= 1 - hi(sqrt(|z|^2))
    let (_, z_hi) = sqrt_brackets(z_sq, t);
    let s0 = Q::one() - z_hi;
    if !s0.is_positive() {
        return None;
    }
    let mut total = inv_pow(&s0, k + 1);
    for d in &cheese.deletions {
        let (lo, _) = sqrt_brackets(&dist_sq(z, &d.disc.center), t);
        let s = lo - &d.disc.radius;
        if !s.is_positive() {
            return None;
        }
        total += &d.disc.radius * inv_pow(&s, k + 1);
    }
    Some(total)
}

fn inv_pow(s: &Q, e: usize) -> Q {
    let mut acc = Q::one();
    let inv = s.recip();
    for _ in 0..e {
        acc *= &inv;
    }
    acc
}

/// Exact value of `f^(k)(z)` via the iterated quotient rule; `PoleAtPoint`
/// when the denominator vanishes at `z`.
pub fn derivative_oracle(f: &RationalFunction, z: &QPoint, k: usize) -> Result<crate::num::QComplex> {
    let zc = crate::num::QComplex::new(z.x.clone(), z.y.clone());
    let den_val = f.den.eval(&zc);
    if den_val.is_zero() {
        return Err(Error::PoleAtPoint);
    }
    let nk = f.derivative_numerator(k);
    Ok(nk.eval(&zc).div(&den_val.pow(k + 1)))
}

/// The running stage estimate `n! * T_m(n)` that the bound table dominates.
pub fn stage_bound_formula(cheese: &CheeseDescription, n: usize) -> Q {
    Q::from_integer(factorial(n)) * crate::schedule::accumulated_term(cheese, n)
}

#[derive(Clone, Debug)]
pub struct BlockCheck {
    /// 1-based block index.
    pub block: usize,
    /// Block range `(start, end]`.
    pub start: usize,
    pub end: usize,
    /// Certified rational lower bound of `sum A_n^(-1/n)` over the block.
    pub lower_sum: Q,
    pub lower_sum_f64: f64,
    pub pass: bool,
}

/// Per-block divergence certificates for the condition
/// `sum_n A_n^(-1/n) = infinity`: each frozen block's certified lower sum
/// must reach 1.
pub fn star_check(table: &BoundTable, root_precision: u32) -> Vec<BlockCheck> {
    let mut out = Vec::new();
    for (i, (start, end)) in table.blocks().into_iter().enumerate() {
        let mut lower = Q::zero();
        for n in start + 1..=end {
            let (lo, _) = crate::bracket::nth_root_brackets(
                &table.entry(n).recip(),
                n as u32,
                root_precision,
            );
            lower += lo;
        }
        let pass = lower >= Q::one();
        out.push(BlockCheck {
            block: i + 1,
            start,
            end,
            lower_sum_f64: q_to_f64(&lower),
            lower_sum: lower,
            pass,
        });
    }
    out
}

/// `A_n` grows superexponentially, so the star sums need every early term;
/// exposes the tail behaviour for diagnostics: `A_n^(-1/n)` as f64.
pub fn star_terms_f64(table: &BoundTable, root_precision: u32) -> Vec<f64> {
    (1..=table.entries.len())
        .map(|n| {
            let (lo, _) = crate::bracket::nth_root_brackets(
                &table.entry(n).recip(),
                n as u32,
                root_precision,
            );
            q_to_f64(&lo)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::QDisc;
    use crate::num::{q, qi, QComplex};
    use crate::poly::Poly;
    use crate::schedule::{build_cheese, Deletion, Truncation};

    fn empty() -> CheeseDescription {
        CheeseDescription::empty(32, 0)
    }

    #[test]
    fn outer_term_only() {
        // z = 0, no deletions: bound = k! / 1^(k+1) = k!
        let c = empty();
        for k in 0..4 {
            let b = cauchy_bound(
                &c,
                &BoundQuery {
                    z: QPoint::origin(),
                    k,
                    root_precision: 32,
                },
            )
            .unwrap();
            assert_eq!(b.value_upper, Q::from_integer(factorial(k)));
            assert_eq!(b.terms, 1);
        }
    }

    #[test]
    fn hand_computed_single_deletion() {
        // deletion at (0, 1/2) radius 1/4; z = 0: dist_sq = 1/4 is a
        // perfect square, so the bracket is exact and s = 1/4.
        let mut c = empty();
        c.deletions.push(Deletion {
            stage: 1,
            parent_index: 1,
            disc: QDisc::open(QPoint::new(Q::zero(), q(1, 2)), q(1, 4)),
        });
        let b = cauchy_bound(
            &c,
            &BoundQuery {
                z: QPoint::origin(),
                k: 0,
                root_precision: 32,
            },
        )
        .unwrap();
        // 1/(1-0) + (1/4)/(1/4) = 2
        assert_eq!(b.value_upper, qi(2));
        // k = 1: 1 + (1/4)/(1/16) = 5
        let b = cauchy_bound(
            &c,
            &BoundQuery {
                z: QPoint::origin(),
                k: 1,
                root_precision: 32,
            },
        )
        .unwrap();
        assert_eq!(b.value_upper, qi(5));
    }

    #[test]
    fn rejects_bad_points() {
        let c = build_cheese(
            1,
            &Truncation {
                systems_per_stage: 2,
                discs_per_system: 3,
            },
            32,
            0,
        )
        .unwrap();
        // outside the unit disc
        let err = cauchy_bound(
            &c,
            &BoundQuery {
                z: QPoint::from_ints(2, 0),
                k: 0,
                root_precision: 32,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidQuery(_)));
        // center of the first deletion
        let z = c.deletions[0].disc.center.clone();
        let err = cauchy_bound(
            &c,
            &BoundQuery {
                z,
                k: 0,
                root_precision: 32,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidQuery(_)));
    }

    #[test]
    fn bound_dominates_exact_derivative_for_pole_function() {
        // f = r/(z - p) with pole p at a deletion center: ||f|| over the
        // complement of the deletion is r / s_min, and Lemma-style algebra
        // gives |f^(k)(z)| = k! r / |z - p|^(k+1). The certified bound with
        // ||f|| <= r/(radius) factored out must dominate.
        let c = build_cheese(
            1,
            &Truncation {
                systems_per_stage: 2,
                discs_per_system: 3,
            },
            32,
            0,
        )
        .unwrap();
        let del = &c.deletions[0].disc;
        let p = QComplex::new(del.center.x.clone(), del.center.y.clone());
        let f = RationalFunction::simple_pole(QComplex::from_real(del.radius.clone()), p);
        // On the cheese, |f| <= radius / dist >= ... <= 1 exactly when
        // dist >= radius, which holds outside the closure; sup |f| = 1,
        // attained on the deletion boundary.
        let z = QPoint::origin();
        for k in 0..4 {
            let exact = derivative_oracle(&f, &z, k).unwrap();
            let bound = cauchy_bound(
                &c,
                &BoundQuery {
                    z: z.clone(),
                    k,
                    root_precision: 48,
                },
            )
            .unwrap();
            // compare squared moduli to stay exact
            let b2 = &bound.value_upper * &bound.value_upper;
            assert!(exact.modulus_sq() <= b2, "k = {k}");
        }
    }

    #[test]
    fn derivative_oracle_values() {
        // f = 1/(z-2): f'' = 2/(z-2)^3, at 0 -> -1/4
        let f = RationalFunction::simple_pole(QComplex::one(), QComplex::from_real(qi(2)));
        let v = derivative_oracle(&f, &QPoint::origin(), 2).unwrap();
        assert_eq!(v, QComplex::from_real(q(-1, 4)));
        assert!(matches!(
            derivative_oracle(&f, &QPoint::from_ints(2, 0), 1),
            Err(Error::PoleAtPoint)
        ));
        // polynomial branch: (z^2)'' = 2 everywhere
        let p = RationalFunction::from_poly(Poly::new(vec![
            QComplex::zero(),
            QComplex::zero(),
            QComplex::one(),
        ]));
        let v = derivative_oracle(&p, &QPoint::new(q(1, 3), q(1, 5)), 2).unwrap();
        assert_eq!(v, QComplex::from_real(qi(2)));
    }

    #[test]
    fn star_check_on_built_table() {
        let c = build_cheese(
            1,
            &Truncation {
                systems_per_stage: 2,
                discs_per_system: 3,
            },
            32,
            0,
        )
        .unwrap();
        let checks = star_check(&c.bound_table, 32);
        assert_eq!(checks.len(), 1);
        assert!(checks[0].pass);
        assert_eq!(checks[0].start, 0);
        assert_eq!(checks[0].end, c.stages[0].block_end);
        assert!(checks[0].lower_sum >= Q::one());
        let terms = star_terms_f64(&c.bound_table, 32);
        assert_eq!(terms.len(), c.bound_table.entries.len());
        assert!(terms.iter().all(|v| *v > 0.0));
    }
}
