//! Exact two-phase primal simplex over rationals, dense tableau, Bland's
//! rule. Intended for the small measure-search programs (tens of variables),
//! where exactness matters more than speed.

use crate::num::Q;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

/// Maximize `c . x` subject to `A x = b`, `x >= 0`. `a` is row-major with
/// `a.len() == b.len()` and every row of length `c.len()`.
pub fn solve_lp(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|row| row.len() == n));

    // rows with b_i < 0 are negated so artificials start feasible
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let mut r: Vec<Q> = row.to_vec();
        r.push(b[i].clone());
        if b[i].is_negative() {
            for v in r.iter_mut() {
                *v = -v.clone();
            }
        }
        rows.push(r);
    }

    // append artificial columns (identity)
    let total = n + m;
    for (i, row) in rows.iter_mut().enumerate() {
        let rhs = row.pop().unwrap();
        for j in 0..m {
            row.push(if j == i { Q::from_integer(1.into()) } else { Q::zero() });
        }
        row.push(rhs);
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // phase 1: maximize -(sum of artificials); obj stores reduced costs
    // and, in the last slot, the negated objective value
    let mut obj = vec![Q::zero(); total + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] += &row[j];
        }
        obj[total] += &row[total];
    }

    if !run_simplex(&mut rows, &mut basis, &mut obj, total, total) {
        unreachable!("phase 1 is bounded by construction");
    }
    if obj[total].is_positive() {
        return LpOutcome::Infeasible;
    }

    // drive remaining artificials out of the basis or drop redundant rows
    let mut i = 0;
    while i < rows.len() {
        if basis[i] >= n {
            let pivot_col = (0..n).find(|j| !rows[i][*j].is_zero());
            match pivot_col {
                Some(j) => pivot(&mut rows, &mut basis, &mut obj, i, j),
                None => {
                    rows.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2 objective from scratch: c_j - c_B B^-1 A_j, value = c_B b
    let mut obj = vec![Q::zero(); total + 1];
    for j in 0..n {
        obj[j] = c[j].clone();
    }
    for (i, &bi) in basis.iter().enumerate() {
        debug_assert!(bi < n);
        let cb = c[bi].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..total {
            let delta = &cb * &rows[i][j];
            obj[j] -= delta;
        }
        // negated value convention: obj[total] holds -(c_B b)
        let delta = &cb * &rows[i][total];
        obj[total] -= delta;
    }
    // artificial columns may not re-enter: entering is capped at n
    if !run_simplex(&mut rows, &mut basis, &mut obj, total, n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Q::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = rows[i][total].clone();
        }
    }
    LpOutcome::Optimal {
        value: -obj[total].clone(),
        x,
    }
}

/// Bland-rule simplex loop over entering columns `0..enter_limit`;
/// returns false on unboundedness.
fn run_simplex(
    rows: &mut Vec<Vec<Q>>,
    basis: &mut Vec<usize>,
    obj: &mut Vec<Q>,
    total: usize,
    enter_limit: usize,
) -> bool {
    loop {
        // entering: lowest index with positive reduced cost
        let enter = match (0..enter_limit).find(|j| obj[*j].is_positive()) {
            Some(j) => j,
            None => return true,
        };
        // leaving: min ratio, ties by lowest basis index
        let mut leave: Option<usize> = None;
        for i in 0..rows.len() {
            if rows[i][enter].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let cur = &rows[i][total] * &rows[l][enter];
                        let best = &rows[l][total] * &rows[i][enter];
                        cur < best || (cur == best && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let leave = match leave {
            Some(l) => l,
            None => return false,
        };
        pivot(rows, basis, obj, leave, enter);
    }
}

fn pivot(
    rows: &mut [Vec<Q>],
    basis: &mut [usize],
    obj: &mut [Q],
    r: usize,
    c: usize,
) {
    let p = rows[r][c].clone();
    debug_assert!(!p.is_zero());
    for v in rows[r].iter_mut() {
        *v = &*v / &p;
    }
    for i in 0..rows.len() {
        if i == r {
            continue;
        }
        let f = rows[i][c].clone();
        if f.is_zero() {
            continue;
        }
        for j in 0..rows[r].len() {
            let delta = &f * &rows[r][j];
            rows[i][j] -= delta;
        }
    }
    let f = obj[c].clone();
    if !f.is_zero() {
        for j in 0..rows[r].len() {
            let delta = &f * &rows[r][j];
            obj[j] -= delta;
        }
    }
    basis[r] = c;
}
