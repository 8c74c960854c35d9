//! Disc systems in the sense of McKissick's lemma: for a parent disc and a
//! radius budget, a pairwise-disjoint family of open discs inside the parent
//! whose radii sum below the budget, all verified exactly.
//!
//! The analytic witness (the rational-function sequence converging off the
//! union) is a pluggable object checked only numerically; the geometric
//! contract is the certified part.

use crate::geometry::{
    closure_inside_open, disc_relation, dist_sq, point_in_open_disc, DiscRelation, QDisc, QPoint,
};
use crate::num::{pow2, q, QComplex, Q};
use crate::poly::RationalFunction;
use crate::report::VerificationReport;
use crate::{Error, Result};
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscSystem {
    pub parent: QDisc,
    pub budget: Q,
    pub discs: Vec<QDisc>,
    pub radius_sum: Q,
}

/// Deterministic disc placement: centers on a spiral of exactly-rational
/// points `C + R * s_k * d_k` with `s_k = 1/2 - 1/(k+2)` and unit vectors
/// `d_k` from the tan-half-angle parameterization. Distinct moduli give a
/// rational lower bound on pairwise distances, so radii
/// `min(budget * 2^-(k+1), R / (4 (k+2) (k+3)))` keep the family disjoint
/// and inside the parent without any root extraction.
pub fn build_disc_system(parent: &QDisc, budget: &Q, count: usize) -> DiscSystem {
    assert!(budget.is_positive(), "budget must be positive");
    assert!(count >= 1, "count must be at least 1");
    let big_r = &parent.radius;
    let mut discs = Vec::with_capacity(count);
    let mut radius_sum = Q::zero();
    for k in 1..=count as i64 {
        let s_k = q(1, 2) - q(1, k + 2);
        // d_k = ((1 - k^2)/(1 + k^2), 2k/(1 + k^2)), exactly unit length
        let denom = k * k + 1;
        let dir_x = q(1 - k * k, denom);
        let dir_y = q(2 * k, denom);
        let reach = big_r * &s_k;
        let center = QPoint::new(
            &parent.center.x + &reach * dir_x,
            &parent.center.y + &reach * dir_y,
        );
        let cap_budget = budget * pow2(-(k + 1));
        let cap_geom = big_r * q(1, 4 * (k + 2) * (k + 3));
        let radius = if cap_budget <= cap_geom {
            cap_budget
        } else {
            cap_geom
        };
        radius_sum += &radius;
        discs.push(QDisc::open(center, radius));
    }
    DiscSystem {
        parent: parent.clone(),
        budget: budget.clone(),
        discs,
        radius_sum,
    }
}

/// Exact pass/fail for disjointness, containment and the radius budget.
pub fn validate_disc_system(s: &DiscSystem) -> VerificationReport {
    let mut report = VerificationReport::new();
    let mut disjoint = true;
    let mut first_bad = String::new();
    for i in 0..s.discs.len() {
        for j in i + 1..s.discs.len() {
            if disc_relation(&s.discs[i], &s.discs[j]) != DiscRelation::Disjoint {
                disjoint = false;
                if first_bad.is_empty() {
                    first_bad = format!("discs {i} and {j} intersect");
                }
            }
        }
    }
    report.push(
        "pairwise-disjoint",
        disjoint,
        if disjoint {
            format!("{} discs pairwise disjoint", s.discs.len())
        } else {
            first_bad
        },
    );
    let contained = s
        .discs
        .iter()
        .all(|d| closure_inside_open(d, &s.parent));
    report.push(
        "parent-containment",
        contained,
        "each closure inside the open parent disc",
    );
    let sum: Q = s.discs.iter().map(|d| d.radius.clone()).sum();
    let sum_ok = sum == s.radius_sum && sum < s.budget;
    report.push(
        "radius-budget",
        sum_ok,
        format!(
            "radius sum {} vs budget {}",
            crate::num::format_rational(&sum),
            crate::num::format_rational(&s.budget)
        ),
    );
    report
}

/// Axis-aligned rational box certified to contain a pole, plus the index of
/// the system disc that swallows the whole box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleCertificate {
    pub box_lo: QPoint,
    pub box_hi: QPoint,
    pub disc_index: usize,
}

/// A pluggable analytic witness for a disc system: approximants to the
/// limit function `F`, with pole certificates locating every pole inside
/// some system disc.
#[derive(Clone, Debug)]
pub struct AnalyticWitness {
    pub system: DiscSystem,
    pub sequence: Vec<RationalFunction>,
    pub pole_certificates: Vec<Vec<PoleCertificate>>,
}

/// The whole closed box lies inside the open disc (discs are convex, so
/// checking the four corners is exact).
pub fn box_in_open_disc(lo: &QPoint, hi: &QPoint, d: &QDisc) -> bool {
    let corners = [
        QPoint::new(lo.x.clone(), lo.y.clone()),
        QPoint::new(lo.x.clone(), hi.y.clone()),
        QPoint::new(hi.x.clone(), lo.y.clone()),
        QPoint::new(hi.x.clone(), hi.y.clone()),
    ];
    corners.iter().all(|c| point_in_open_disc(c, d))
}

/// Exact check of the pole-containment invariant of a witness.
pub fn validate_witness(w: &AnalyticWitness) -> VerificationReport {
    let mut report = VerificationReport::new();
    let mut ok = true;
    let mut detail = String::from("all pole boxes inside their named discs");
    for (fi, certs) in w.pole_certificates.iter().enumerate() {
        for (ci, cert) in certs.iter().enumerate() {
            let valid = cert.disc_index < w.system.discs.len()
                && box_in_open_disc(&cert.box_lo, &cert.box_hi, &w.system.discs[cert.disc_index]);
            if !valid {
                ok = false;
                detail = format!("approximant {fi} certificate {ci} escapes its disc");
            }
        }
    }
    report.push("pole-containment", ok, detail);
    report
}

/// Evaluation result of `eval_rational`.
#[derive(Clone, Debug)]
pub enum EvalValue {
    Exact(QComplex),
    Approx { re: f64, im: f64, rel_err: f64 },
}

#[derive(Clone, Copy, Debug)]
pub enum EvalMode {
    Exact,
    /// Floating output; reports `PoleProximity` when the exact lower bound
    /// on the denominator modulus drops below `2^threshold_log2`.
    Float { threshold_log2: i64 },
}

impl Default for EvalMode {
    fn default() -> Self {
        EvalMode::Float { threshold_log2: -40 }
    }
}

/// Evaluate a rational function at an exact point. The exact route errors
/// only on a true pole; the floating route additionally flags near-pole
/// evaluations whose certified relative error would be meaningless.
pub fn eval_rational(f: &RationalFunction, z: &QPoint, mode: EvalMode) -> Result<EvalValue> {
    let zc = QComplex::new(z.x.clone(), z.y.clone());
    let d = f.den.eval(&zc);
    if d.is_zero() {
        return Err(Error::PoleAtPoint);
    }
    match mode {
        EvalMode::Exact => Ok(EvalValue::Exact(f.num.eval(&zc).div(&d))),
        EvalMode::Float { threshold_log2 } => {
            if d.modulus_sq() < pow2(2 * threshold_log2) {
                return Err(Error::PoleProximity);
            }
            let v = f.num.eval(&zc).div(&d);
            let (re, im) = v.to_f64();
            // the value is exact; only the final conversion rounds
            Ok(EvalValue::Approx {
                re,
                im,
                rel_err: 2f64.powi(-50),
            })
        }
    }
}

/// Numerical convergence diagnostics for a witness over a grid.
#[derive(Clone, Debug, Default)]
pub struct ConvergenceReport {
    /// `max |f_{i+1} - f_i|` over the grid, per consecutive pair.
    pub successive_max: Vec<f64>,
    /// `max |f_last|` over grid points outside the closed parent disc.
    pub outer_max: Option<f64>,
    /// `min |f_last|` over grid points inside the parent minus the union.
    pub inner_min: Option<f64>,
    pub grid_size: usize,
}

/// Diagnostic report on uniform convergence off the union, vanishing off
/// the parent and nonvanishing inside. Thresholds are the caller's
/// business; the report only measures.
pub fn convergence_report(w: &AnalyticWitness, grid: &[QPoint]) -> Result<ConvergenceReport> {
    for (i, p) in grid.iter().enumerate() {
        for d in &w.system.discs {
            // exact margin: the point must clear the closed disc
            if dist_sq(p, &d.center) <= &d.radius * &d.radius {
                return Err(Error::GridTouchesUnion(format!("grid point {i}")));
            }
        }
    }
    let mut report = ConvergenceReport {
        grid_size: grid.len(),
        ..Default::default()
    };
    if grid.is_empty() || w.sequence.is_empty() {
        return Ok(report);
    }
    let values: Vec<Vec<QComplex>> = w
        .sequence
        .iter()
        .map(|f| {
            grid.iter()
                .map(|p| f.eval_at_point(p).ok_or(Error::PoleAtPoint))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    for pair in values.windows(2) {
        let max = pair[0]
            .iter()
            .zip(&pair[1])
            .map(|(a, b)| b.sub(a).modulus_f64())
            .fold(0.0f64, f64::max);
        report.successive_max.push(max);
    }
    let last = values.last().expect("nonempty sequence");
    let r2 = &w.parent_radius_sq();
    for (p, v) in grid.iter().zip(last) {
        let d2 = dist_sq(p, &w.system.parent.center);
        if &d2 > r2 {
            let m = v.modulus_f64();
            report.outer_max = Some(report.outer_max.map_or(m, |x: f64| x.max(m)));
        } else if &d2 < r2 {
            let m = v.modulus_f64();
            report.inner_min = Some(report.inner_min.map_or(m, |x: f64| x.min(m)));
        }
    }
    Ok(report)
}

impl AnalyticWitness {
    fn parent_radius_sq(&self) -> Q {
        &self.system.parent.radius * &self.system.parent.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qi;
    use crate::poly::Poly;
    use num_traits::One;

    fn unit_parent() -> QDisc {
        QDisc::open(QPoint::origin(), Q::one())
    }

    #[test]
    fn placement_rule_first_disc() {
        // parent = unit disc, budget 1/4, one disc: the documented rule puts
        // it at C + R*(1/6)*(0,1) with radius min(1/16, 1/48) = 1/48.
        let s = build_disc_system(&unit_parent(), &q(1, 4), 1);
        assert_eq!(s.discs.len(), 1);
        assert_eq!(s.discs[0].center, QPoint::new(Q::zero(), q(1, 6)));
        assert_eq!(s.discs[0].radius, q(1, 48));
        assert!(s.discs[0].radius <= q(1, 16));
        assert!(s.radius_sum < q(1, 4));
    }

    #[test]
    fn systems_validate_clean_and_deterministic() {
        for count in [1usize, 4, 16] {
            let s = build_disc_system(&unit_parent(), &q(1, 4), count);
            assert!(validate_disc_system(&s).all_passed(), "count={count}");
            let s2 = build_disc_system(&unit_parent(), &q(1, 4), count);
            assert_eq!(s, s2);
        }
        // off-center parent
        let parent = QDisc::open(QPoint::new(q(1, 2), q(-1, 4)), q(1, 8));
        let s = build_disc_system(&parent, &q(1, 100), 8);
        assert!(validate_disc_system(&s).all_passed());
        // per-disc radius caps
        for (i, d) in s.discs.iter().enumerate() {
            assert!(d.radius <= q(1, 100) * pow2(-(i as i64 + 2)));
        }
    }

    #[test]
    fn mutations_fail_validation() {
        let mut s = build_disc_system(&unit_parent(), &q(1, 4), 3);
        s.discs[0].radius = &s.budget + qi(1);
        let rep = validate_disc_system(&s);
        assert!(!rep.all_passed());
        let mut s = build_disc_system(&unit_parent(), &q(1, 4), 3);
        s.discs[1].center = QPoint::from_ints(5, 5);
        assert!(!validate_disc_system(&s).all_passed());
    }

    #[test]
    fn eval_rational_cases() {
        let f = RationalFunction::simple_pole(QComplex::one(), QComplex::from_real(qi(2)));
        match eval_rational(&f, &QPoint::origin(), EvalMode::Exact).unwrap() {
            EvalValue::Exact(v) => assert_eq!(v, QComplex::from_real(q(-1, 2))),
            _ => panic!("expected exact value"),
        }
        assert!(matches!(
            eval_rational(&f, &QPoint::from_ints(2, 0), EvalMode::Exact),
            Err(Error::PoleAtPoint)
        ));
        let idp = RationalFunction::from_poly(Poly::linear(QComplex::zero()));
        match eval_rational(&idp, &QPoint::new(q(1, 3), Q::zero()), EvalMode::Exact).unwrap() {
            EvalValue::Exact(v) => assert_eq!(v, QComplex::from_real(q(1, 3))),
            _ => panic!("expected exact value"),
        }
        // proximity flag
        let close = RationalFunction::simple_pole(
            QComplex::one(),
            QComplex::new(q(1, 1 << 30) * q(1, 1 << 30), Q::zero()),
        );
        assert!(matches!(
            eval_rational(&close, &QPoint::origin(), EvalMode::default()),
            Err(Error::PoleProximity)
        ));
    }

    #[test]
    fn convergence_constant_and_empty() {
        let system = build_disc_system(&unit_parent(), &q(1, 4), 2);
        let zero = RationalFunction::from_poly(Poly::zero());
        let w = AnalyticWitness {
            system,
            sequence: vec![zero.clone(), zero.clone(), zero],
            pole_certificates: vec![vec![], vec![], vec![]],
        };
        let grid = vec![QPoint::from_ints(2, 0), QPoint::new(q(1, 2), q(1, 2))];
        let rep = convergence_report(&w, &grid).unwrap();
        assert_eq!(rep.successive_max, vec![0.0, 0.0]);
        let rep = convergence_report(&w, &[]).unwrap();
        assert!(rep.successive_max.is_empty());
        assert_eq!(rep.grid_size, 0);
    }

    #[test]
    fn grid_touching_union_rejected() {
        let system = build_disc_system(&unit_parent(), &q(1, 4), 1);
        let inside = system.discs[0].center.clone();
        let w = AnalyticWitness {
            system,
            sequence: vec![],
            pole_certificates: vec![],
        };
        assert!(matches!(
            convergence_report(&w, &[inside]),
            Err(Error::GridTouchesUnion(_))
        ));
    }

    #[test]
    fn geometric_series_witness_decays() {
        // Approximants: partial sums of sum_j g^j with g = c/(z - p),
        // p inside disc 1 of the system. On a grid where |g| <= 1/2 the
        // successive differences decay at least geometrically.
        let system = build_disc_system(&unit_parent(), &q(1, 4), 2);
        let p = system.discs[0].center.clone();
        let pc = QComplex::new(p.x.clone(), p.y.clone());
        let c = QComplex::from_real(q(1, 8));
        let g = RationalFunction::simple_pole(c, pc);
        let mut partial = RationalFunction::from_poly(Poly::zero());
        let mut power = g.clone();
        let mut seq = Vec::new();
        for _ in 0..5 {
            partial = partial.add(&power);
            seq.push(partial.clone());
            power = power.mul(&g);
        }
        let eps = q(1, 1 << 20);
        let certs: Vec<Vec<PoleCertificate>> = (0..seq.len())
            .map(|_| {
                vec![PoleCertificate {
                    box_lo: QPoint::new(&p.x - &eps, &p.y - &eps),
                    box_hi: QPoint::new(&p.x + &eps, &p.y + &eps),
                    disc_index: 0,
                }]
            })
            .collect();
        let w = AnalyticWitness {
            system,
            sequence: seq,
            pole_certificates: certs,
        };
        assert!(validate_witness(&w).all_passed());
        let grid = vec![
            QPoint::from_ints(2, 0),
            QPoint::new(q(-1, 2), q(-1, 2)),
            QPoint::new(q(3, 4), Q::zero()),
        ];
        // |g| <= (1/8) / dist(grid, p); all grid points are > 1/4 from p
        let rep = convergence_report(&w, &grid).unwrap();
        assert_eq!(rep.successive_max.len(), 4);
        for pair in rep.successive_max.windows(2) {
            assert!(pair[1] <= pair[0] * 0.51 + 1e-15, "{:?}", rep.successive_max);
        }
        // closed-form tail: |f_{n+1} - f_n| = |g|^{n+1} <= (1/2)^{n+1}
        for (i, m) in rep.successive_max.iter().enumerate() {
            assert!(*m <= 0.5f64.powi(i as i32 + 2) + 1e-12);
        }
    }
}
