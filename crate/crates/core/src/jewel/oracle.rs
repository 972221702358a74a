//! Brute-force vertex enumeration: every m-subset of inequalities, made
//! tight together with Σx = 1, solved exactly and kept if feasible.

use itertools::Itertools;

use super::{x_of, Constraint, JewelError};
use crate::scalar::Scalar;

/// Largest number of linear systems the oracle will attempt.
pub const ORACLE_LIMIT: u128 = 5_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Solve a square system by Gaussian elimination; `None` if singular.
pub(crate) fn solve_square<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let pivot = if T::EXACT {
            (col..n).find(|&r| !a[r][col].is_zero())?
        } else {
            let p = (col..n).max_by(|&x, &y| {
                a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a[p][col].abs() <= T::tolerance() {
                return None;
            }
            p
        };
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let v = a[col][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - v;
            }
            let v = b[col].clone() * f;
            b[r] = b[r].clone() - v;
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

pub fn vertices_oracle<T: Scalar>(constraints: &[Constraint<T>], size: usize) -> Result<Vec<Vec<T>>, JewelError> {
    let m = size - 1;
    let systems = binomial(constraints.len(), m);
    if systems > ORACLE_LIMIT {
        return Err(JewelError::TooLarge(systems, ORACLE_LIMIT));
    }
    let mut out: Vec<Vec<T>> = Vec::new();
    for pick in (0..constraints.len()).combinations(m) {
        let mut a: Vec<Vec<T>> = Vec::with_capacity(size);
        let mut b: Vec<T> = Vec::with_capacity(size);
        for &j in &pick {
            let c = &constraints[j];
            a.push((0..size).map(|i| if c.set.contains(i) { T::one() } else { T::zero() }).collect());
            b.push(c.constant.clone());
        }
        a.push(vec![T::one(); size]);
        b.push(T::one());
        let Some(x) = solve_square(a, b) else { continue };
        if !constraints.iter().all(|c| x_of(&x, c.set).approx_ge(&c.constant)) {
            continue;
        }
        if !out.iter().any(|y| y.iter().zip(&x).all(|(p, q)| p.approx_eq(q))) {
            out.push(x);
        }
    }
    Ok(out)
}
