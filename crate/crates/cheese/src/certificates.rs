//! Point-of-continuity certificates: for a point `z` off the interval and a
//! point `w` to separate from, exhibit the minimal level `n` with
//! `dist(z, I) > delta_n` and the first disc of the `S_n` enumeration that
//! contains `z` while keeping `w` outside its closure.
//!
//! The search walks the enumeration height by height; within a height it
//! restricts to the window of centers within one radius of `z`, which
//! preserves the global (height, lex) order on the subsequence of discs
//! containing `z`. `enumeration_index` is the 1-based rank of the returned
//! disc within that subsequence.

use crate::geometry::{
    capsule_margin, dist_sq, dist_sq_to_segment, enumeration_cmp, fraction_height,
    fractions_in_open_interval, fractions_up_to_height, in_family, point_in_closed_disc,
    point_in_open_disc, triple_height, QDisc, QPoint,
};
use crate::num::{q_to_f64, Q};
use crate::report::VerificationReport;
use crate::schedule::CheeseDescription;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityCertificate {
    pub z: QPoint,
    pub w: QPoint,
    /// Minimal `n` with `dist(z, I) > delta_n`.
    pub stage: u32,
    pub disc: QDisc,
    /// 1-based rank of `disc` among the `S_stage` discs containing `z`.
    pub enumeration_index: usize,
}

/// Smallest `n >= 1` with `dist(z, I) > 1/(n+2)`; `InvalidInput` on `I`.
pub fn minimal_level(z: &QPoint) -> Result<u32> {
    let d2 = dist_sq_to_segment(z);
    if d2.is_zero() {
        return Err(Error::InvalidInput(
            "point lies on the interval I".into(),
        ));
    }
    for n in 1..=1_000_000u32 {
        let m = capsule_margin(n);
        if d2 > &m * &m {
            return Ok(n);
        }
    }
    Err(Error::PrecisionExhausted(
        "point closer to I than 1/1000002".into(),
    ))
}

/// Search for a certificate, walking enumeration heights up to
/// `max_height`.
pub fn find_certificate(
    z: &QPoint,
    w: &QPoint,
    max_height: i64,
) -> Result<ContinuityCertificate> {
    if z == w {
        return Err(Error::InvalidInput("z and w coincide".into()));
    }
    let z2 = dist_sq(z, &QPoint::origin());
    if z2 > Q::one() {
        return Err(Error::InvalidInput("z outside the closed unit disc".into()));
    }
    let n = minimal_level(z)?;
    let mut rank = 0usize;
    for h in 1..=max_height {
        for (r, x, y) in candidates_at_height(z, n, h) {
            let disc = QDisc::open(QPoint::new(x, y), r);
            rank += 1;
            if !point_in_closed_disc(w, &disc) {
                return Ok(ContinuityCertificate {
                    z: z.clone(),
                    w: w.clone(),
                    stage: n,
                    disc,
                    enumeration_index: rank,
                });
            }
        }
    }
    Err(Error::NoCertificate(format!(
        "no separating disc for z up to enumeration height {max_height} \
         ({rank} containing discs seen)"
    )))
}

/// All `S_n` discs of exact triple height `h` that contain `z`, in
/// enumeration tie order.
fn candidates_at_height(z: &QPoint, n: u32, h: i64) -> Vec<(Q, Q, Q)> {
    let fracs = fractions_up_to_height(h);
    let h_big = BigInt::from(h);
    let (zxf, zyf) = z.to_f64();
    let delta_f = 1.0 / (n as f64 + 2.0);
    let mut out = Vec::new();
    for r in &fracs {
        if !r.is_positive() || *r >= Q::one() {
            continue;
        }
        let rf = q_to_f64(r);
        let r_h = fraction_height(r);
        let xs = fractions_in_open_interval(&(&z.x - r), &(&z.x + r), h);
        let ys = fractions_in_open_interval(&(&z.y - r), &(&z.y + r), h);
        for x in &xs {
            let xf = q_to_f64(x);
            let dxf = xf - zxf;
            // fast reject on the x-offset alone
            if dxf * dxf > rf * rf + 1e-12 {
                continue;
            }
            let x_h = fraction_height(x);
            for y in &ys {
                // exact-height filter keeps each triple in exactly one level
                if r_h < h_big && x_h < h_big && fraction_height(y) < h_big {
                    continue;
                }
                let yf = q_to_f64(y);
                let dyf = yf - zyf;
                if dxf * dxf + dyf * dyf > rf * rf + 1e-12 {
                    continue;
                }
                // float prefilters for the family predicates, generous slack
                let seg = dist_to_segment_f64(xf, yf);
                if seg < rf + delta_f - 1e-9 {
                    continue;
                }
                if (xf * xf + yf * yf).sqrt() + rf > 1.0 + 1e-9 {
                    continue;
                }
                if triple_height(r, x, y) != h_big {
                    continue;
                }
                let disc = QDisc::open(QPoint::new(x.clone(), y.clone()), r.clone());
                if point_in_open_disc(z, &disc) && in_family(&disc, n) {
                    out.push((r.clone(), x.clone(), y.clone()));
                }
            }
        }
    }
    out.sort_by(enumeration_cmp);
    out
}

fn dist_to_segment_f64(x: f64, y: f64) -> f64 {
    let cx = x.clamp(-0.5, 0.5);
    ((x - cx) * (x - cx) + y * y).sqrt()
}

/// Exact re-check of every stated fact of a certificate. With a cheese
/// supplied, additionally confirms `z` belongs to it.
pub fn validate_certificate(
    cert: &ContinuityCertificate,
    cheese: Option<&CheeseDescription>,
) -> VerificationReport {
    let mut report = VerificationReport::new();
    report.push(
        "points-distinct",
        cert.z != cert.w,
        "z and w are different points",
    );

    let d2 = dist_sq_to_segment(&cert.z);
    let m = capsule_margin(cert.stage);
    let clears = d2 > &m * &m;
    let minimal = if cert.stage == 1 {
        true
    } else {
        let prev = capsule_margin(cert.stage - 1);
        d2 <= &prev * &prev
    };
    report.push(
        "level-clearance",
        clears,
        format!("dist(z, I) > delta_{}", cert.stage),
    );
    report.push(
        "level-minimal",
        minimal,
        "no smaller level already clears z",
    );

    report.push(
        "family-membership",
        in_family(&cert.disc, cert.stage),
        "disc belongs to the stage family",
    );
    report.push(
        "contains-z",
        point_in_open_disc(&cert.z, &cert.disc),
        "z interior to the certificate disc",
    );
    report.push(
        "excludes-w",
        !point_in_closed_disc(&cert.w, &cert.disc),
        "w outside the closed certificate disc",
    );

    if let Some(c) = cheese {
        let in_unit = dist_sq(&cert.z, &QPoint::origin()) <= Q::one();
        let outside_deletions = c
            .deletions
            .iter()
            .all(|d| !point_in_open_disc(&cert.z, &d.disc));
        report.push(
            "z-in-cheese",
            in_unit && outside_deletions,
            "z in the unit disc and outside every deletion",
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;
    use crate::schedule::{build_cheese, Truncation};

    #[test]
    fn minimal_level_values() {
        // dist = 1/2 > 1/3
        assert_eq!(minimal_level(&QPoint::new(Q::zero(), q(1, 2))).unwrap(), 1);
        // dist = 1/4: 1/5 < 1/4 but 1/4 is not strictly below 1/4
        assert_eq!(minimal_level(&QPoint::new(Q::zero(), q(1, 4))).unwrap(), 3);
        assert!(matches!(
            minimal_level(&QPoint::origin()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn hand_worked_first_certificate() {
        // z = (0, 1/2), w = 0: level 1; the first S_1 disc containing z in
        // the enumeration is (radius 1/4, center (0, 2/3)) at height 4.
        let z = QPoint::new(Q::zero(), q(1, 2));
        let cert = find_certificate(&z, &QPoint::origin(), 16).unwrap();
        assert_eq!(cert.stage, 1);
        assert_eq!(cert.disc.radius, q(1, 4));
        assert_eq!(cert.disc.center, QPoint::new(Q::zero(), q(2, 3)));
        assert_eq!(cert.enumeration_index, 1);
        assert!(validate_certificate(&cert, None).all_passed());
    }

    #[test]
    fn matches_brute_force_oracle() {
        let zs = [
            QPoint::new(Q::zero(), q(1, 2)),
            QPoint::new(q(1, 4), q(-1, 2)),
            QPoint::new(q(-3, 8), q(5, 8)),
        ];
        let ws = [QPoint::origin(), QPoint::new(Q::zero(), q(2, 3))];
        for z in &zs {
            for w in &ws {
                let got = find_certificate(z, w, 8);
                let want = brute_force(z, w, 8);
                match (got, want) {
                    (Ok(cert), Some((disc, rank))) => {
                        assert_eq!(cert.disc, disc, "z={z:?} w={w:?}");
                        assert_eq!(cert.enumeration_index, rank);
                        assert!(validate_certificate(&cert, None).all_passed());
                    }
                    (Err(Error::NoCertificate(_)), None) => {}
                    (g, w2) => panic!("mismatch: {g:?} vs {w2:?}"),
                }
            }
        }
    }

    /// Unwindowed reference: every triple up to height `h_max`, sorted by
    /// the enumeration order, filtered the slow way.
    fn brute_force(z: &QPoint, w: &QPoint, h_max: i64) -> Option<(QDisc, usize)> {
        let n = minimal_level(z).unwrap();
        let fracs = fractions_up_to_height(h_max);
        let mut triples = Vec::new();
        for r in &fracs {
            if !r.is_positive() || *r >= Q::one() {
                continue;
            }
            for x in &fracs {
                for y in &fracs {
                    if triple_height(r, x, y) > BigInt::from(h_max) {
                        continue;
                    }
                    triples.push((r.clone(), x.clone(), y.clone()));
                }
            }
        }
        triples.sort_by(enumeration_cmp);
        let mut rank = 0;
        for (r, x, y) in triples {
            let d = QDisc::open(QPoint::new(x, y), r);
            if in_family(&d, n) && point_in_open_disc(z, &d) {
                rank += 1;
                if !point_in_closed_disc(w, &d) {
                    return Some((d, rank));
                }
            }
        }
        None
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let z = QPoint::new(Q::zero(), q(1, 2));
        assert!(matches!(
            find_certificate(&z, &z, 8),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            find_certificate(&QPoint::from_ints(3, 0), &QPoint::origin(), 8),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            find_certificate(&QPoint::new(q(1, 4), Q::zero()), &QPoint::origin(), 8),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn validation_catches_mutations() {
        let z = QPoint::new(Q::zero(), q(1, 2));
        let cert = find_certificate(&z, &QPoint::origin(), 16).unwrap();
        let mut bad = cert.clone();
        bad.stage = 2; // level 1 already clears z, so 2 is not minimal
        assert!(!validate_certificate(&bad, None).all_passed());
        let mut bad = cert.clone();
        bad.w = bad.disc.center.clone();
        assert!(!validate_certificate(&bad, None).all_passed());
        let mut bad = cert.clone();
        bad.z = QPoint::origin();
        assert!(!validate_certificate(&bad, None).all_passed());
    }

    #[test]
    fn cheese_membership_check() {
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
        let z = QPoint::new(Q::zero(), q(1, 2));
        let cert = find_certificate(&z, &QPoint::origin(), 16).unwrap();
        let rep = validate_certificate(&cert, Some(&c));
        // z = (0, 1/2) may or may not be deleted; the check must agree with
        // the direct membership predicate
        let member = c
            .deletions
            .iter()
            .all(|d| !point_in_open_disc(&z, &d.disc));
        let check = rep
            .checks
            .iter()
            .find(|ch| ch.name == "z-in-cheese")
            .unwrap();
        assert_eq!(check.pass, member);
    }
}
