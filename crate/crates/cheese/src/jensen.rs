//! Jensen-measure probes over discrete supports.
//!
//! For a candidate measure `mu = sum w_i delta_{z_i}` and a test function
//! `f`, the Jensen inequality `ln|f(x)| <= integral ln|f| d mu` is checked
//! through certified brackets of each logarithm. The LP search asks the
//! sharper question: over all weights on a fixed grid satisfying every
//! bracketed inequality, how much mass can sit away from the base point?
//! Test families mix polynomials with simple poles placed inside deleted
//! discs, which is what pins measures down near the base point.

use crate::bracket::ln_brackets;
use crate::geometry::{point_in_closed_disc, point_in_open_disc, QPoint};
use crate::num::{pow2, q, q_to_f64, QComplex, Q};
use crate::poly::RationalFunction;
use crate::report::VerificationReport;
use crate::schedule::CheeseDescription;
use crate::simplex::{solve_lp, LpOutcome};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure {
    pub points: Vec<QPoint>,
    pub weights: Vec<Q>,
}

impl DiscreteMeasure {
    pub fn point_mass(x: QPoint) -> Self {
        DiscreteMeasure {
            points: vec![x],
            weights: vec![Q::one()],
        }
    }

    /// Total weight away from `x`.
    pub fn off_mass(&self, x: &QPoint) -> Q {
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| *p != x)
            .map(|(_, w)| w.clone())
            .sum()
    }

    /// Probability-measure and support invariants, exactly.
    pub fn validate(&self, cheese: &CheeseDescription) -> VerificationReport {
        let mut report = VerificationReport::new();
        report.push(
            "support-weights-aligned",
            self.points.len() == self.weights.len(),
            "one weight per support point",
        );
        report.push(
            "weights-nonnegative",
            self.weights.iter().all(|w| !w.is_negative()),
            "no negative weights",
        );
        let total: Q = self.weights.iter().cloned().sum();
        report.push(
            "weights-sum-to-one",
            total.is_one(),
            "total mass exactly 1",
        );
        let in_cheese = self.points.iter().all(|p| {
            point_in_closed_disc(p, &cheese.outer)
                && cheese
                    .deletions
                    .iter()
                    .all(|d| !point_in_open_disc(p, &d.disc))
        });
        report.push(
            "support-in-cheese",
            in_cheese,
            "every support point belongs to the cheese",
        );
        report
    }
}

/// `ln|f(z)|` as a certified bracket, or minus infinity at a zero of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogValue {
    NegInfinity,
    Bracket { lo: Q, hi: Q },
}

/// Bracket `ln|f(z)|` to width `2^-t`; `PoleAtPoint` at a pole.
pub fn log_abs_brackets(f: &RationalFunction, z: &QPoint, t: u32) -> Result<LogValue> {
    let zc = QComplex::new(z.x.clone(), z.y.clone());
    let den = f.den.eval(&zc);
    if den.is_zero() {
        return Err(Error::PoleAtPoint);
    }
    let num = f.num.eval(&zc);
    if num.is_zero() {
        return Ok(LogValue::NegInfinity);
    }
    // ln|f| = (ln|num|^2 - ln|den|^2) / 2
    let (nlo, nhi) = ln_brackets(&num.modulus_sq(), t + 2);
    let (dlo, dhi) = ln_brackets(&den.modulus_sq(), t + 2);
    let half = q(1, 2);
    Ok(LogValue::Bracket {
        lo: (nlo - &dhi) * &half,
        hi: (nhi - &dlo) * &half,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeficitValue {
    /// `f(x) = 0`: the inequality holds vacuously.
    PlusInfinity,
    /// The integral diverges to minus infinity while `f(x)` does not vanish.
    MinusInfinity,
    /// Certified bracket of `integral ln|f| d mu - ln|f(x)|`.
    Bracket { lo: Q, hi: Q },
}

/// Bracket the Jensen deficit of `f` at `x` against `mu`. Nonnegative lower
/// bound certifies the inequality; negative upper bound refutes it.
pub fn jensen_deficit(
    f: &RationalFunction,
    x: &QPoint,
    mu: &DiscreteMeasure,
    t: u32,
) -> Result<DeficitValue> {
    let at_x = log_abs_brackets(f, x, t).map_err(|e| match e {
        Error::PoleAtPoint => Error::InvalidQuery("pole at the base point".into()),
        other => other,
    })?;
    let (x_lo, x_hi) = match at_x {
        LogValue::NegInfinity => return Ok(DeficitValue::PlusInfinity),
        LogValue::Bracket { lo, hi } => (lo, hi),
    };
    let mut int_lo = Q::zero();
    let mut int_hi = Q::zero();
    for (i, (p, w)) in mu.points.iter().zip(&mu.weights).enumerate() {
        if w.is_zero() {
            continue;
        }
        let v = log_abs_brackets(f, p, t).map_err(|e| match e {
            Error::PoleAtPoint => Error::PoleOnSupport(format!("support point {i}")),
            other => other,
        })?;
        match v {
            LogValue::NegInfinity => return Ok(DeficitValue::MinusInfinity),
            LogValue::Bracket { lo, hi } => {
                int_lo += w * lo;
                int_hi += w * hi;
            }
        }
    }
    Ok(DeficitValue::Bracket {
        lo: int_lo - x_hi,
        hi: int_hi - x_lo,
    })
}

/// A finite family of test functions from the algebra: polynomials and
/// rational functions with poles inside deleted discs.
#[derive(Clone, Debug)]
pub struct TestFamily {
    pub functions: Vec<RationalFunction>,
}

impl TestFamily {
    /// `z - a` for every listed value of `a`.
    pub fn linear(points: &[QComplex]) -> Self {
        TestFamily {
            functions: points
                .iter()
                .map(|a| RationalFunction::from_poly(crate::poly::Poly::linear(a.clone())))
                .collect(),
        }
    }

    /// Simple poles at the centers of the first `count` deletions.
    pub fn poles_from(cheese: &CheeseDescription, count: usize) -> Self {
        TestFamily {
            functions: cheese
                .deletions
                .iter()
                .take(count)
                .map(|d| {
                    let c = &d.disc.center;
                    RationalFunction::simple_pole(
                        QComplex::one(),
                        QComplex::new(c.x.clone(), c.y.clone()),
                    )
                })
                .collect(),
        }
    }

    pub fn extend(mut self, other: TestFamily) -> Self {
        self.functions.extend(other.functions);
        self
    }

    /// Exact check that no pole of the family sits on a grid point.
    pub fn check_clear_of(&self, grid: &[QPoint]) -> Result<()> {
        for (j, f) in self.functions.iter().enumerate() {
            for (i, p) in grid.iter().enumerate() {
                let zc = QComplex::new(p.x.clone(), p.y.clone());
                if f.den.eval(&zc).is_zero() {
                    return Err(Error::PoleOnSupport(format!(
                        "function {j} has a pole at grid point {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Certified maximum of the off-`x` mass over the feasible region.
    pub max_off_mass: Q,
    pub measure: DiscreteMeasure,
    /// Active constraints and slack used, for the report.
    pub evidence: String,
}

/// Default inequality slack compensating bracket width: `2^-(t-2)`.
pub fn default_slack(t: u32) -> Q {
    pow2(-(t as i64) + 2)
}

/// Maximize the mass away from `x` over weights on `grid` subject to every
/// bracketed Jensen inequality for `family`, plus total mass 1.
///
/// Brackets are applied adversarially (lower brackets on the integral side,
/// upper bracket at `x`, relaxed by `slack`), so any reported measure
/// genuinely satisfies each inequality up to `slack`.
pub fn lp_search(
    x: &QPoint,
    grid: &[QPoint],
    family: &TestFamily,
    t: u32,
    slack: &Q,
) -> Result<SearchResult> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    assert!(!slack.is_negative());
    family.check_clear_of(grid)?;

    let n = grid.len();
    let mut forced_zero = vec![false; n];
    // (coefficients over grid, rhs)
    let mut constraints: Vec<(Vec<Option<Q>>, Q)> = Vec::new();
    let mut skipped = 0usize;
    for f in &family.functions {
        let rhs = match log_abs_brackets(f, x, t).map_err(|e| match e {
            Error::PoleAtPoint => Error::InvalidQuery("pole at the base point".into()),
            other => other,
        })? {
            LogValue::NegInfinity => {
                skipped += 1;
                continue;
            }
            LogValue::Bracket { hi, .. } => hi - slack,
        };
        let mut coeffs: Vec<Option<Q>> = Vec::with_capacity(n);
        for p in grid {
            match log_abs_brackets(f, p, t)? {
                LogValue::NegInfinity => coeffs.push(None),
                LogValue::Bracket { lo, .. } => coeffs.push(Some(lo)),
            }
        }
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_none() {
                forced_zero[i] = true;
            }
        }
        constraints.push((coeffs, rhs));
    }

    // column map for the surviving weights
    let cols: Vec<usize> = (0..n).filter(|i| !forced_zero[*i]).collect();
    if cols.is_empty() {
        return Err(Error::InfeasibleGrid(
            "every grid point is forced to weight zero".into(),
        ));
    }
    let nc = constraints.len();
    let nv = cols.len() + nc; // weights plus one surplus per inequality
    let mut a: Vec<Vec<Q>> = Vec::with_capacity(nc + 1);
    let mut b: Vec<Q> = Vec::with_capacity(nc + 1);
    for (j, (coeffs, rhs)) in constraints.iter().enumerate() {
        let mut row = vec![Q::zero(); nv];
        for (v, &i) in cols.iter().enumerate() {
            row[v] = coeffs[i].clone().expect("forced columns removed");
        }
        row[cols.len() + j] = -Q::one(); // surplus: sum - s = rhs
        a.push(row);
        b.push(rhs.clone());
    }
    let mut mass_row = vec![Q::zero(); nv];
    for v in 0..cols.len() {
        mass_row[v] = Q::one();
    }
    a.push(mass_row);
    b.push(Q::one());

    let mut c = vec![Q::zero(); nv];
    for (v, &i) in cols.iter().enumerate() {
        if &grid[i] != x {
            c[v] = Q::one();
        }
    }

    match solve_lp(&a, &b, &c) {
        LpOutcome::Optimal { value, x: sol } => {
            let mut weights = vec![Q::zero(); n];
            for (v, &i) in cols.iter().enumerate() {
                weights[i] = sol[v].clone();
            }
            Ok(SearchResult {
                max_off_mass: value,
                measure: DiscreteMeasure {
                    points: grid.to_vec(),
                    weights,
                },
                evidence: format!(
                    "{} active constraints ({} vacuous), {} of {} grid weights free, \
                     slack {}",
                    nc,
                    skipped,
                    cols.len(),
                    n,
                    q_to_f64(slack)
                ),
            })
        }
        LpOutcome::Infeasible => Err(Error::InfeasibleGrid(if grid.contains(x) {
            "no weights satisfy the bracketed inequalities; slack too small \
             for this bracket precision"
                .into()
        } else {
            "grid does not support any measure for the family; the base \
             point is not on the grid"
                .into()
        })),
        LpOutcome::Unbounded => Err(Error::InvariantViolation(
            "mass-constrained program cannot be unbounded".into(),
        )),
    }
}

/// `m` rational points exactly on the circle of radius `r` about `center`,
/// at near-uniform angles. Tangent-half-angle parametrization keeps the
/// points exactly on the circle; only the angular spacing is approximate
/// (dyadic `u` with denominator `2^20`).
pub fn circle_points(center: &QPoint, r: &Q, m: usize) -> Vec<QPoint> {
    assert!(m >= 1 && r.is_positive());
    let scale = 1u64 << 20;
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let theta = -std::f64::consts::PI
            + 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / m as f64;
        let uf = (theta / 2.0).tan();
        let u = Q::new(
            num_bigint::BigInt::from((uf * scale as f64).round() as i64),
            num_bigint::BigInt::from(scale),
        );
        let u2 = &u * &u;
        let denom = Q::one() + &u2;
        let cx = (Q::one() - &u2) / &denom;
        let sx = (&u + &u) / &denom;
        out.push(QPoint::new(&center.x + r * cx, &center.y + r * sx));
    }
    out
}
