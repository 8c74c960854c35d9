//! Exact rational plane geometry: points, discs, the interval
//! `I = [-1/2, 1/2] x {0}`, the capsules `K_n`, and the deterministic
//! enumeration of the disc families `S_n`.
//!
//! Every predicate is decided exactly through squared-distance
//! comparisons; no floating point enters any decision.

use crate::num::{q, qi, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub x: Q,
    pub y: Q,
}

impl QPoint {
    pub fn new(x: Q, y: Q) -> Self {
        QPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        QPoint::new(qi(x), qi(y))
    }

    pub fn origin() -> Self {
        QPoint::new(Q::zero(), Q::zero())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (crate::num::q_to_f64(&self.x), crate::num::q_to_f64(&self.y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiscKind {
    Open,
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QDisc {
    pub center: QPoint,
    pub radius: Q,
    pub kind: DiscKind,
}

impl QDisc {
    pub fn open(center: QPoint, radius: Q) -> Self {
        assert!(radius.is_positive(), "disc radius must be positive");
        QDisc {
            center,
            radius,
            kind: DiscKind::Open,
        }
    }

    pub fn closed(center: QPoint, radius: Q) -> Self {
        assert!(radius.is_positive(), "disc radius must be positive");
        QDisc {
            center,
            radius,
            kind: DiscKind::Closed,
        }
    }

    /// The ambient set `X_0`: the closed unit disc.
    pub fn unit_closed() -> Self {
        QDisc::closed(QPoint::origin(), Q::one())
    }
}

/// The closed `delta_n`-neighbourhood of `I`, with `delta_n = 1/(n+2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capsule {
    pub level: u32,
    pub margin: Q,
}

impl Capsule {
    pub fn new(level: u32) -> Self {
        assert!(level >= 1);
        Capsule {
            level,
            margin: capsule_margin(level),
        }
    }
}

/// `delta_n = 1/(n+2)`.
pub fn capsule_margin(n: u32) -> Q {
    q(1, n as i64 + 2)
}

/// `|a - b|^2`, exact.
pub fn dist_sq(a: &QPoint, b: &QPoint) -> Q {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    &dx * &dx + &dy * &dy
}

/// Exact squared distance from `z` to the interval `I = [-1/2, 1/2] x {0}`.
pub fn dist_sq_to_segment(z: &QPoint) -> Q {
    let half = q(1, 2);
    let neg_half = q(-1, 2);
    let clamped = if z.x > half {
        half
    } else if z.x < neg_half {
        neg_half
    } else {
        z.x.clone()
    };
    let dx = &z.x - clamped;
    &dx * &dx + &z.y * &z.y
}

/// `dist(z, d) > q` decided exactly: `|z - c| > q + r` iff
/// `|z - c|^2 > (q + r)^2`. Points on or inside the closed disc give false.
pub fn separation_exceeds(z: &QPoint, d: &QDisc, bound: &Q) -> bool {
    assert!(!bound.is_negative(), "separation bound must be >= 0");
    let lhs = dist_sq(z, &d.center);
    let rhs = bound + &d.radius;
    lhs > &rhs * &rhs
}

/// True iff the closed disc of `d` is disjoint from `K_n`:
/// `dist(center, I) > radius + delta_n`, squared comparison.
pub fn disc_avoids_capsule(d: &QDisc, n: u32) -> bool {
    assert!(n >= 1);
    let lhs = dist_sq_to_segment(&d.center);
    let rhs = &d.radius + capsule_margin(n);
    lhs > &rhs * &rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscRelation {
    Disjoint,
    AInsideB,
    BInsideA,
    Overlapping,
}

/// Exact classification of two discs under open-set semantics: boundary
/// tangencies count as disjoint (externally) or contained (internally).
pub fn disc_relation(a: &QDisc, b: &QDisc) -> DiscRelation {
    let d2 = dist_sq(&a.center, &b.center);
    let sum = &a.radius + &b.radius;
    if d2 >= &sum * &sum {
        return DiscRelation::Disjoint;
    }
    let diff = &b.radius - &a.radius;
    let diff2 = &diff * &diff;
    if d2 <= diff2 {
        return if a.radius <= b.radius {
            DiscRelation::AInsideB
        } else {
            DiscRelation::BInsideA
        };
    }
    DiscRelation::Overlapping
}

/// Closure of `d` lies inside the open unit disc: `|c| + r < 1`.
pub fn closed_disc_inside_unit(d: &QDisc) -> bool {
    if d.radius >= Q::one() {
        return false;
    }
    let gap = Q::one() - &d.radius;
    dist_sq(&d.center, &QPoint::origin()) < &gap * &gap
}

/// Closure of `inner` lies inside the open disc of `outer`.
pub fn closure_inside_open(inner: &QDisc, outer: &QDisc) -> bool {
    if inner.radius >= outer.radius {
        return false;
    }
    let gap = &outer.radius - &inner.radius;
    dist_sq(&inner.center, &outer.center) < &gap * &gap
}

pub fn point_in_open_disc(z: &QPoint, d: &QDisc) -> bool {
    dist_sq(z, &d.center) < &d.radius * &d.radius
}

pub fn point_in_closed_disc(z: &QPoint, d: &QDisc) -> bool {
    dist_sq(z, &d.center) <= &d.radius * &d.radius
}

/// All reduced fractions `p/q` with `q >= 1`, `max(|p|, q) <= h`,
/// sorted increasingly.
pub fn fractions_up_to_height(h: i64) -> Vec<Q> {
    assert!(h >= 1);
    let mut out = Vec::new();
    for den in 1..=h {
        for num in -h..=h {
            if num.unsigned_abs().gcd(&den.unsigned_abs()) == 1 {
                out.push(q(num, den));
            }
        }
    }
    // 0/1 is the canonical zero; gcd(0, 1) == 1 keeps exactly that copy.
    out.sort();
    out
}

/// Reduced fractions strictly inside `(lo, hi)` with height at most `h`,
/// sorted increasingly.
pub fn fractions_in_open_interval(lo: &Q, hi: &Q, h: i64) -> Vec<Q> {
    let mut out = Vec::new();
    if lo >= hi {
        return out;
    }
    for den in 1..=h {
        let d = BigInt::from(den);
        // smallest num with num/den > lo
        let lo_scaled = lo.numer() * &d;
        let mut n_min = lo_scaled.div_floor(lo.denom()) + BigInt::one();
        // guard: if lo*den is an integer, floor+1 is already strict
        let hi_scaled = hi.numer() * &d;
        let mut n_max = hi_scaled.div_ceil(hi.denom()) - BigInt::one();
        let cap = BigInt::from(h);
        if n_min < -&cap {
            n_min = -&cap;
        }
        if n_max > cap {
            n_max = BigInt::from(h);
        }
        let mut n = n_min;
        while n <= n_max {
            if let Some(ni) = to_i64(&n) {
                if ni.unsigned_abs().gcd(&den.unsigned_abs()) == 1 {
                    let cand = q(ni, den);
                    if &cand > lo && &cand < hi {
                        out.push(cand);
                    }
                }
            }
            n += BigInt::one();
        }
    }
    out.sort();
    out.dedup();
    out
}

fn to_i64(n: &BigInt) -> Option<i64> {
    use num_traits::ToPrimitive;
    n.to_i64()
}

/// Height of a reduced fraction: `max(|numerator|, denominator)`.
pub fn fraction_height(x: &Q) -> BigInt {
    let n = x.numer().abs();
    let d = x.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

/// Height of a disc candidate triple `(radius, x, y)`.
pub fn triple_height(r: &Q, x: &Q, y: &Q) -> BigInt {
    let mut h = fraction_height(r);
    for v in [x, y] {
        let fh = fraction_height(v);
        if fh > h {
            h = fh;
        }
    }
    h
}

/// Compare disc candidates by the documented enumeration order:
/// increasing height, ties broken lexicographically on `(r, x, y)`.
pub fn enumeration_cmp(a: &(Q, Q, Q), b: &(Q, Q, Q)) -> Ordering {
    triple_height(&a.0, &a.1, &a.2)
        .cmp(&triple_height(&b.0, &b.1, &b.2))
        .then_with(|| a.0.cmp(&b.0))
        .then_with(|| a.1.cmp(&b.1))
        .then_with(|| a.2.cmp(&b.2))
}

/// Membership predicate for `S_n`: closed disc inside the open unit disc
/// and avoiding `K_n`.
pub fn in_family(d: &QDisc, n: u32) -> bool {
    closed_disc_inside_unit(d) && disc_avoids_capsule(d, n)
}

/// The first `count` members of the fixed enumeration of `S_n`: open discs
/// with center in `Q + iQ` and rational radius whose closed disc lies inside
/// the open unit disc and misses `K_n`. Ordered by increasing triple height
/// `(radius, x, y)`, ties lexicographic.
pub fn enumerate_rational_discs(n: u32, count: usize) -> Vec<QDisc> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut h: i64 = 1;
    loop {
        let level = family_level(n, h);
        for (r, x, y) in level {
            out.push(QDisc::open(QPoint::new(x, y), r));
            if out.len() == count {
                return out;
            }
        }
        h += 1;
        assert!(h <= 64, "enumeration height cap reached; count too large");
    }
}

/// Members of `S_n` whose triple height is exactly `h`, in tie order.
fn family_level(n: u32, h: i64) -> Vec<(Q, Q, Q)> {
    let all = fractions_up_to_height(h);
    let h_big = BigInt::from(h);
    let radii: Vec<&Q> = all.iter().filter(|r| r.is_positive() && **r < Q::one()).collect();
    let mut level = Vec::new();
    for r in &radii {
        for x in &all {
            for y in &all {
                // keep only triples new at this height
                if triple_height(r, x, y) != h_big {
                    continue;
                }
                let d = QDisc::open(QPoint::new(x.clone(), y.clone()), (*r).clone());
                if in_family(&d, n) {
                    level.push(((*r).clone(), x.clone(), y.clone()));
                }
            }
        }
    }
    level.sort_by(enumeration_cmp);
    level
}
