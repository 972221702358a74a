//! Reduced simplicial homology through boundary matrices.
//!
//! Each boundary matrix is first reduced sparsely on unit pivots, and the
//! leftover block goes through a dense Smith normal form in checked i64.
//! On overflow the leftover rank is taken over the rationals and torsion is
//! marked unknown.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{ComplexError, FlagComplex};

pub const MAX_SIMPLICES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    /// Reduced Betti numbers for degrees −1, 0, …, `max_dim`.
    pub betti: Vec<usize>,
    /// Torsion coefficients per degree, same indexing.
    pub torsion: Vec<Vec<u64>>,
    /// Dimension of the complex, −1 when empty.
    pub dim: isize,
    pub max_dim: isize,
    pub torsion_known: bool,
}

impl HomologyReport {
    fn slot(&self, d: isize) -> Option<usize> {
        if d < -1 || d > self.max_dim {
            None
        } else {
            Some((d + 1) as usize)
        }
    }

    pub fn reduced_betti(&self, d: isize) -> usize {
        self.slot(d).map_or(0, |i| self.betti[i])
    }

    pub fn torsion_in(&self, d: isize) -> &[u64] {
        self.slot(d).map_or(&[], |i| &self.torsion[i])
    }

    fn trivial_in(&self, d: isize) -> bool {
        self.reduced_betti(d) == 0 && self.torsion_in(d).is_empty()
    }

    /// H̃_i = 0 for all i < d.
    pub fn vanishes_below(&self, d: isize) -> bool {
        (-1..d).all(|i| self.trivial_in(i))
    }

    /// H̃_i = 0 for every i ≠ d, with the whole complex inside the computed range.
    pub fn concentrated_in(&self, d: isize) -> bool {
        self.dim <= self.max_dim && (-1..=self.max_dim).filter(|&i| i != d).all(|i| self.trivial_in(i))
    }

    pub fn is_acyclic(&self) -> bool {
        self.dim <= self.max_dim && (-1..=self.max_dim).all(|i| self.trivial_in(i))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,betti,torsion\n");
        for d in -1..=self.max_dim {
            let t: Vec<String> = self.torsion_in(d).iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{d},{},{}\n", self.reduced_betti(d), t.join(" ")));
        }
        s
    }
}

/// Reduced homology in degrees −1..=`max_dim`.
pub fn homology(c: &FlagComplex, max_dim: usize) -> Result<HomologyReport, ComplexError> {
    let total = c.count_simplices(MAX_SIMPLICES);
    if total > MAX_SIMPLICES {
        return Err(ComplexError::TooLarge(total, MAX_SIMPLICES));
    }
    let simplices = c.simplices(max_dim + 2);
    let dim = simplices.len() as isize - 1;
    let size = |d: isize| -> usize {
        if d == -1 {
            1
        } else if d < 0 {
            0
        } else {
            simplices.get(d as usize).map_or(0, Vec::len)
        }
    };
    // rank and divisors of ∂_d : C_d → C_{d−1}, for d = 0..=max_dim+1
    let mut ranks: Vec<usize> = Vec::new();
    let mut divisors: Vec<Vec<u64>> = Vec::new();
    let mut torsion_known = true;
    for d in 0..=max_dim + 1 {
        let Some(cols) = simplices.get(d) else {
            ranks.push(0);
            divisors.push(Vec::new());
            continue;
        };
        let columns: Vec<Vec<(usize, i64)>> = if d == 0 {
            cols.iter().map(|_| vec![(0, 1)]).collect()
        } else {
            let index: HashMap<&[usize], usize> =
                simplices[d - 1].iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
            cols.iter()
                .map(|s| {
                    let mut col = Vec::with_capacity(s.len());
                    let mut face = Vec::with_capacity(s.len() - 1);
                    for skip in 0..s.len() {
                        face.clear();
                        face.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                        let sign = if skip % 2 == 0 { 1 } else { -1 };
                        col.push((index[face.as_slice()], sign));
                    }
                    col
                })
                .collect()
        };
        let (rank, divs, known) = smith(size(d as isize - 1), columns);
        torsion_known &= known;
        ranks.push(rank);
        divisors.push(divs);
    }
    let rank_of = |d: isize| -> usize {
        if d < 0 {
            0
        } else {
            ranks.get(d as usize).copied().unwrap_or(0)
        }
    };
    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    for d in -1..=max_dim as isize {
        betti.push(size(d) - rank_of(d) - rank_of(d + 1));
        let t = divisors.get((d + 1) as usize).map_or(Vec::new(), |v| v.iter().copied().filter(|&x| x > 1).collect());
        torsion.push(t);
    }
    Ok(HomologyReport { betti, torsion, dim, max_dim: max_dim as isize, torsion_known })
}

/// Rank and nonzero elementary divisors of a sparse integer matrix given by
/// columns. The flag reports whether the divisors are exact.
pub(crate) fn smith(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> (usize, Vec<u64>, bool) {
    let mut cols: Vec<BTreeMap<usize, i64>> = columns.into_iter().map(|c| c.into_iter().collect()).collect();
    let mut row_occ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); rows];
    for (j, c) in cols.iter().enumerate() {
        for &r in c.keys() {
            row_occ[r].insert(j);
        }
    }
    let mut alive_cols: BTreeSet<usize> = (0..cols.len()).filter(|&j| !cols[j].is_empty()).collect();
    let mut units = 0usize;
    loop {
        // unit pivot with the sparsest row
        let mut best: Option<(usize, usize, usize)> = None;
        for &j in &alive_cols {
            for (&r, &v) in &cols[j] {
                if v.abs() == 1 {
                    let occ = row_occ[r].len();
                    if best.is_none_or(|(o, _, _)| occ < o) {
                        best = Some((occ, r, j));
                    }
                }
            }
            if matches!(best, Some((1, _, _))) {
                break;
            }
        }
        let Some((_, r, j)) = best else { break };
        let u = cols[j][&r];
        let pivot = cols[j].clone();
        let others: Vec<usize> = row_occ[r].iter().copied().filter(|&k| k != j).collect();
        let mut overflow = false;
        for k in others {
            let a = cols[k][&r] * u;
            let mut updated = cols[k].clone();
            for (&pr, &pv) in &pivot {
                let old = updated.get(&pr).copied().unwrap_or(0);
                let Some(new) = pv.checked_mul(a).and_then(|x| old.checked_sub(x)) else {
                    overflow = true;
                    break;
                };
                if new == 0 {
                    updated.remove(&pr);
                } else {
                    updated.insert(pr, new);
                }
            }
            if overflow {
                break;
            }
            for &pr in pivot.keys() {
                if updated.contains_key(&pr) {
                    row_occ[pr].insert(k);
                } else {
                    row_occ[pr].remove(&k);
                }
            }
            if updated.is_empty() {
                alive_cols.remove(&k);
            }
            cols[k] = updated;
        }
        if overflow {
            break;
        }
        for &pr in pivot.keys() {
            row_occ[pr].remove(&j);
        }
        cols[j].clear();
        alive_cols.remove(&j);
        // row r is now zero outside column j
        units += 1;
    }
    let rest: Vec<&BTreeMap<usize, i64>> = alive_cols.iter().map(|&j| &cols[j]).collect();
    if rest.is_empty() {
        return (units, vec![1; units], true);
    }
    let used_rows: Vec<usize> = {
        let s: BTreeSet<usize> = rest.iter().flat_map(|c| c.keys().copied()).collect();
        s.into_iter().collect()
    };
    let row_pos: HashMap<usize, usize> = used_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut dense = vec![vec![0i64; rest.len()]; used_rows.len()];
    for (j, c) in rest.iter().enumerate() {
        for (&r, &v) in c.iter() {
            dense[row_pos[&r]][j] = v;
        }
    }
    match dense_smith(dense.clone()) {
        Some(d) => {
            let mut all = vec![1u64; units];
            all.extend(d);
            (all.len(), all, true)
        }
        None => {
            let r = rational_rank(&dense);
            (units + r, vec![1; units], false)
        }
    }
}

/// Nonzero diagonal of the Smith normal form, or `None` on overflow.
fn dense_smith(mut a: Vec<Vec<i64>>) -> Option<Vec<u64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the remaining block
        let mut piv: Option<(i64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && piv.is_none_or(|(p, _, _)| v.abs() < p) {
                    piv = Some((v.abs(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = piv else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(p);
                    for j in t..n {
                        a[i][j] = a[i][j].checked_sub(q.checked_mul(a[t][j])?)?;
                    }
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(p);
                    for i in t..m {
                        a[i][j] = a[i][j].checked_sub(q.checked_mul(a[i][t])?)?;
                    }
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the rest of the block
                let bad = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..n {
                            a[t][j] = a[t][j].checked_add(a[i][j])?;
                        }
                        continue;
                    }
                }
            }
            // move a smaller remainder into the pivot position
            let mut small: Option<(i64, usize, usize)> = None;
            for i in t..m {
                if a[i][t] != 0 && small.is_none_or(|(s, _, _)| a[i][t].abs() < s) {
                    small = Some((a[i][t].abs(), i, t));
                }
            }
            for j in t..n {
                if a[t][j] != 0 && small.is_none_or(|(s, _, _)| a[t][j].abs() < s) {
                    small = Some((a[t][j].abs(), t, j));
                }
            }
            if let Some((_, i, j)) = small {
                a.swap(t, i);
                for row in a.iter_mut() {
                    row.swap(t, j);
                }
            }
        }
        out.push(a[t][t].unsigned_abs());
        t += 1;
    }
    Some(out)
}

fn rational_rank(a: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = BigRational::one() / m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() * inv.clone();
                for cc in c..cols {
                    let v = m[rank][cc].clone() * f.clone();
                    m[r][cc] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}
