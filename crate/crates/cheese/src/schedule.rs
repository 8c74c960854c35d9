//! The staged inductive construction: per-stage margins `delta_m`, budgets
//! `epsilon_m`, bound tables `A_{m,n}`, block boundaries `N_m`, and the
//! deletion schedule assembled from McKissick disc systems over the
//! enumerated families `S_m`.
//!
//! Everything here is exact rational arithmetic; the only bracketed
//! quantities are the n-th roots inside the block-sum certificates.

use crate::bracket::nth_root_brackets;
use crate::geometry::{
    closure_inside_open, disc_avoids_capsule, disc_relation, dist_sq_to_segment,
    enumerate_rational_discs, DiscRelation, QDisc,
};
use crate::mckissick::build_disc_system;
use crate::num::{factorial, format_rational, pow2, q, Q};
use crate::report::VerificationReport;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// Truncation limits for a desk-scale build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    /// How many discs `D_{m,k}` of `S_m` receive a disc system per stage.
    pub systems_per_stage: usize,
    /// How many discs are materialized per system.
    pub discs_per_system: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            systems_per_stage: 8,
            discs_per_system: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageParams {
    pub m: u32,
    pub delta: Q,
    pub epsilon: Q,
    /// Block boundary `N_m`.
    pub block_end: usize,
    pub systems: usize,
    pub discs_per_system: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deletion {
    pub stage: u32,
    /// 1-based index `k` of the parent `D_{m,k}` in the `S_m` enumeration.
    pub parent_index: usize,
    pub disc: QDisc,
}

/// Frozen bound table: `entries[k-1] = A_k` for `k <= N_M`, plus the block
/// boundaries `N_1 < N_2 < ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundTable {
    pub entries: Vec<Q>,
    pub block_boundaries: Vec<usize>,
}

impl BoundTable {
    /// `A_k`, 1-based; panics past the frozen range.
    pub fn entry(&self, k: usize) -> &Q {
        &self.entries[k - 1]
    }

    /// Blocks as `(start_exclusive, end_inclusive)` index pairs.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut prev = 0usize;
        for &b in &self.block_boundaries {
            out.push((prev, b));
            prev = b;
        }
        out
    }
}

/// The finite-stage cheese: outer disc, staged deletions with provenance,
/// stage records and the frozen bound table. Doubles as the running state
/// of the induction (stage `m` is built from the state after `m - 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheeseDescription {
    pub outer: QDisc,
    pub stages: Vec<StageParams>,
    pub deletions: Vec<Deletion>,
    pub bound_table: BoundTable,
    /// Bracket width exponent used for root certification.
    pub root_precision: u32,
    /// Recorded in provenance; sampling-based diagnostics key off it.
    pub seed: u64,
}

/// `delta_n = 1/(n+2)`.
pub fn delta(n: u32) -> Q {
    assert!(n >= 1);
    q(1, n as i64 + 2)
}

/// `epsilon_1 = 1/4`, fixed by the construction.
pub fn epsilon_one() -> Q {
    q(1, 4)
}

impl CheeseDescription {
    pub fn empty(root_precision: u32, seed: u64) -> Self {
        CheeseDescription {
            outer: QDisc::unit_closed(),
            stages: Vec::new(),
            deletions: Vec::new(),
            bound_table: BoundTable::default(),
            root_precision,
            seed,
        }
    }

    pub fn completed_stages(&self) -> u32 {
        self.stages.len() as u32
    }

    /// Stage budgets `epsilon_1 .. epsilon_m`.
    fn epsilons(&self) -> Vec<Q> {
        self.stages.iter().map(|s| s.epsilon.clone()).collect()
    }

    /// The parents `D_{m,1} .. D_{m,systems}` of a completed stage,
    /// recomputed from the deterministic enumeration.
    pub fn stage_parents(&self, m: u32) -> Vec<QDisc> {
        let stage = &self.stages[m as usize - 1];
        enumerate_rational_discs(m, stage.systems)
    }
}

/// `T_m(n) = (1 + eps_1)/delta_1^(n+1) + sum_{j=2}^m eps_j/delta_j^(n+1)`
/// for the epsilon prefix given; exact.
fn accumulated_term_for(epsilons: &[Q], n: usize) -> Q {
    assert!(!epsilons.is_empty(), "at least stage 1 must be complete");
    let mut total = Q::zero();
    for (idx, eps) in epsilons.iter().enumerate() {
        let stage = idx as u32 + 1;
        let d = delta(stage);
        let numer = if stage == 1 {
            Q::one() + eps
        } else {
            eps.clone()
        };
        total += numer / pow_q(&d, n + 1);
    }
    total
}

fn pow_q(x: &Q, e: usize) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// The running Cauchy-sum term `T_m(n)` for the completed stages of `state`.
pub fn accumulated_term(state: &CheeseDescription, n: usize) -> Q {
    accumulated_term_for(&state.epsilons(), n)
}

/// `A_{m,n}`: the frozen value for `n` inside an earlier block, otherwise
/// `2 n! T_m(n)`.
pub fn bound_a(state: &CheeseDescription, m: u32, n: usize) -> Q {
    assert!(m >= 1 && m <= state.completed_stages());
    let eps = state.epsilons();
    // find the first stage j <= m whose block already covers n
    for j in 1..=m as usize {
        if n <= state.stages[j - 1].block_end {
            return a_value(&eps[..j], n);
        }
    }
    a_value(&eps[..m as usize], n)
}

fn a_value(epsilon_prefix: &[Q], n: usize) -> Q {
    let t = accumulated_term_for(epsilon_prefix, n);
    Q::from_integer(factorial(n)) * q(2, 1) * t
}

/// The largest dyadic `epsilon = 2^-p` (`p >= m+1`) keeping the strict
/// inequalities `n! (T_{m-1}(n) + eps/delta_m^(n+1)) < A_{m-1,n}` for all
/// `1 <= n <= N_{m-1}`.
pub fn choose_epsilon(state: &CheeseDescription, m: u32) -> Q {
    assert!(m >= 2, "epsilon_1 is fixed at 1/4");
    assert_eq!(state.completed_stages(), m - 1, "previous stage incomplete");
    let n_prev = state.stages.last().expect("stage m-1 complete").block_end;
    let d_m = delta(m);
    let mut cap: Option<Q> = None;
    for n in 1..=n_prev {
        let a = bound_a(state, m - 1, n);
        let t = accumulated_term(state, n);
        // n!(T + eps/d^(n+1)) < A  <=>  eps < (A/n! - T) * d^(n+1)
        let slack = (a / Q::from_integer(factorial(n)) - t) * pow_q(&d_m, n + 1);
        debug_assert!(slack.is_positive(), "domination invariant violated");
        cap = Some(match cap {
            None => slack,
            Some(c) => {
                if slack < c {
                    slack
                } else {
                    c
                }
            }
        });
    }
    let cap = cap.expect("N_{m-1} >= 1");
    let mut p = m as i64 + 1;
    while pow2(-p) >= cap {
        p += 1;
    }
    pow2(-p)
}

/// Smallest `N > N_{m-1}` whose bracketed lower block sum
/// `sum A_{m,n}^{-1/n}` reaches 1, with minimality certified by the upper
/// brackets at `N - 1`.
pub fn choose_block_end(
    state: &CheeseDescription,
    m: u32,
    epsilon_m: &Q,
    root_precision: u32,
) -> Result<usize> {
    let prev_end = state.stages.last().map_or(0, |s| s.block_end);
    let mut epsilons = state.epsilons();
    if m == 1 {
        assert!(epsilons.is_empty());
        epsilons.push(epsilon_m.clone());
    } else {
        epsilons.push(epsilon_m.clone());
    }
    let mut lower = Q::zero();
    let mut upper = Q::zero();
    for n in prev_end + 1..=prev_end + 500 {
        let a = a_value(&epsilons, n);
        let (lo, hi) = nth_root_brackets(&a.recip(), n as u32, root_precision);
        let upper_before = upper.clone();
        lower += lo;
        upper += hi;
        if lower >= Q::one() {
            if upper_before >= Q::one() {
                return Err(Error::PrecisionExhausted(format!(
                    "block for stage {m}: upper sum reached 1 before the lower sum; \
                     raise the root precision above {root_precision}"
                )));
            }
            return Ok(n);
        }
    }
    Err(Error::PrecisionExhausted(format!(
        "block for stage {m} did not certify within 500 terms"
    )))
}

/// Run one stage of the induction on top of `state`.
pub fn run_stage(state: &CheeseDescription, trunc: &Truncation) -> Result<CheeseDescription> {
    assert!(trunc.systems_per_stage >= 1 && trunc.discs_per_system >= 1);
    let m = state.completed_stages() + 1;
    let epsilon = if m == 1 {
        epsilon_one()
    } else {
        choose_epsilon(state, m)
    };
    let mut next = state.clone();
    let parents = enumerate_rational_discs(m, trunc.systems_per_stage);
    for (idx, parent) in parents.iter().enumerate() {
        let k = idx + 1;
        let budget = &epsilon * pow2(-(k as i64));
        let system = build_disc_system(parent, &budget, trunc.discs_per_system);
        for disc in system.discs {
            next.deletions.push(Deletion {
                stage: m,
                parent_index: k,
                disc,
            });
        }
    }
    let block_end = choose_block_end(state, m, &epsilon, state.root_precision)?;
    let prev_end = state.stages.last().map_or(0, |s| s.block_end);
    next.stages.push(StageParams {
        m,
        delta: delta(m),
        epsilon,
        block_end,
        systems: trunc.systems_per_stage,
        discs_per_system: trunc.discs_per_system,
    });
    // freeze A_k for the new block
    let eps = next.epsilons();
    for n in prev_end + 1..=block_end {
        next.bound_table.entries.push(a_value(&eps, n));
    }
    next.bound_table.block_boundaries.push(block_end);
    Ok(next)
}

/// Run stages `1..=stages` from the empty state.
pub fn build_cheese(
    stages: u32,
    trunc: &Truncation,
    root_precision: u32,
    seed: u64,
) -> Result<CheeseDescription> {
    assert!(stages >= 1);
    let mut state = CheeseDescription::empty(root_precision, seed);
    for _ in 0..stages {
        state = run_stage(&state, trunc)?;
    }
    Ok(state)
}

/// Exact post-hoc verification of every construction invariant.
pub fn verify_schedule(c: &CheeseDescription) -> VerificationReport {
    let mut report = VerificationReport::new();

    report.push(
        "outer-disc",
        c.outer == QDisc::unit_closed(),
        "ambient set is the closed unit disc",
    );

    // stage parameters
    let mut params_ok = true;
    let mut detail = String::from("delta_m = 1/(m+2), dyadic budgets, N strictly increasing");
    let mut prev_block = 0usize;
    for (i, s) in c.stages.iter().enumerate() {
        let m = i as u32 + 1;
        if s.m != m || s.delta != delta(m) {
            params_ok = false;
            detail = format!("stage {m}: bad delta or index");
        }
        if m == 1 && s.epsilon != epsilon_one() {
            params_ok = false;
            detail = "stage 1: epsilon != 1/4".into();
        }
        if m >= 2 && &s.epsilon > &pow2(-(m as i64 + 1)) {
            params_ok = false;
            detail = format!("stage {m}: epsilon above the dyadic cap");
        }
        if s.block_end <= prev_block {
            params_ok = false;
            detail = format!("stage {m}: block end not increasing");
        }
        prev_block = s.block_end;
    }
    report.push("stage-params", params_ok, detail);

    // capsule avoidance
    let bad_capsule = c
        .deletions
        .iter()
        .filter(|d| !disc_avoids_capsule(&d.disc, d.stage))
        .count();
    report.push(
        "capsule-avoidance",
        bad_capsule == 0,
        format!("{bad_capsule} deletions meet their stage capsule"),
    );

    // I disjoint from every deletion
    let bad_interval = c
        .deletions
        .iter()
        .filter(|d| dist_sq_to_segment(&d.disc.center) <= &d.disc.radius * &d.disc.radius)
        .count();
    report.push(
        "interval-preserved",
        bad_interval == 0,
        format!("{bad_interval} deletions touch I"),
    );

    // per-system and per-stage budgets, disjointness, parent containment
    let mut system_budget_ok = true;
    let mut stage_budget_ok = true;
    let mut disjoint_ok = true;
    let mut containment_ok = true;
    let mut budget_detail = String::from("all radius sums strictly under budget");
    let mut total = Q::zero();
    for s in &c.stages {
        let parents = c.stage_parents(s.m);
        let mut stage_sum = Q::zero();
        for k in 1..=s.systems {
            let discs: Vec<&QDisc> = c
                .deletions
                .iter()
                .filter(|d| d.stage == s.m && d.parent_index == k)
                .map(|d| &d.disc)
                .collect();
            let sum: Q = discs.iter().map(|d| d.radius.clone()).sum();
            let budget = &s.epsilon * pow2(-(k as i64));
            if sum >= budget {
                system_budget_ok = false;
                budget_detail = format!("stage {} system {k} exceeds its budget", s.m);
            }
            stage_sum += &sum;
            for i in 0..discs.len() {
                for j in i + 1..discs.len() {
                    if disc_relation(discs[i], discs[j]) != DiscRelation::Disjoint {
                        disjoint_ok = false;
                    }
                }
                if k <= parents.len() && !closure_inside_open(discs[i], &parents[k - 1]) {
                    containment_ok = false;
                }
            }
        }
        if stage_sum >= s.epsilon {
            stage_budget_ok = false;
            budget_detail = format!("stage {} exceeds epsilon_m", s.m);
        }
        total += stage_sum;
    }
    report.push("system-budgets", system_budget_ok, budget_detail.clone());
    report.push(
        "stage-budgets",
        stage_budget_ok,
        "per-stage radius sums under epsilon_m",
    );
    report.push(
        "pairwise-disjoint",
        disjoint_ok,
        "deletions within one system pairwise disjoint",
    );
    report.push(
        "parent-containment",
        containment_ok,
        "deletion closures inside their parent discs",
    );
    report.push(
        "total-budget",
        total < q(1, 2),
        format!("total deleted radius sum {} < 1/2", format_rational(&total)),
    );

    // bound-table freezing: entry k matches the stage whose block holds k
    let mut freeze_ok = c.bound_table.block_boundaries.len() == c.stages.len();
    if freeze_ok {
        let eps_all: Vec<Q> = c.stages.iter().map(|s| s.epsilon.clone()).collect();
        let mut prev = 0usize;
        for (j, s) in c.stages.iter().enumerate() {
            if s.block_end != c.bound_table.block_boundaries[j]
                || c.bound_table.entries.len() < s.block_end
            {
                freeze_ok = false;
                break;
            }
            for n in prev + 1..=s.block_end {
                if *c.bound_table.entry(n) != a_value(&eps_all[..=j], n) {
                    freeze_ok = false;
                }
            }
            prev = s.block_end;
        }
        freeze_ok = freeze_ok && c.bound_table.entries.len() == prev;
    }
    report.push(
        "bound-freezing",
        freeze_ok,
        "A_k frozen to the stage whose block covers k",
    );

    // epsilon constraints: n! T_m(n) < A_{m-1,n} for n <= N_{m-1}
    let mut eps_ok = true;
    for m in 2..=c.completed_stages() {
        let n_prev = c.stages[m as usize - 2].block_end;
        let eps_prefix: Vec<Q> = c.stages[..m as usize]
            .iter()
            .map(|s| s.epsilon.clone())
            .collect();
        for n in 1..=n_prev {
            let lhs = Q::from_integer(factorial(n)) * accumulated_term_for(&eps_prefix, n);
            if &lhs >= c.bound_table.entry(n) {
                eps_ok = false;
            }
        }
    }
    report.push(
        "epsilon-constraints",
        eps_ok,
        "strict domination n! T_m(n) < A_{m-1,n} on earlier blocks",
    );

    // block sums >= 1 with bracketed roots
    let mut blocks_ok = true;
    let mut block_detail = String::new();
    for (start, end) in c.bound_table.blocks() {
        if end > c.bound_table.entries.len() {
            blocks_ok = false;
            break;
        }
        let mut lower = Q::zero();
        for n in start + 1..=end {
            let (lo, _) =
                nth_root_brackets(&c.bound_table.entry(n).recip(), n as u32, c.root_precision);
            lower += lo;
        }
        if lower < Q::one() {
            blocks_ok = false;
            block_detail = format!("block ({start}, {end}] lower sum below 1");
        }
    }
    report.push(
        "block-sums",
        blocks_ok,
        if block_detail.is_empty() {
            "every block's certified lower sum >= 1".to_string()
        } else {
            block_detail
        },
    );

    report
}
