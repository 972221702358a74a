//! Face lattice from vertex/facet incidence.

use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use super::JewelPolytope;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub vertices: FixedBitSet,
    pub dim: usize,
    /// Constraints tight on every vertex of the face.
    pub active: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub dim: usize,
    /// Sorted by decreasing dimension, then vertex set.
    pub faces: Vec<Face>,
}

/// Dimension of the affine hull of the given points.
pub fn affine_dimension<T: Scalar>(points: &[&Vec<T>]) -> usize {
    let Some((first, rest)) = points.split_first() else { return 0 };
    let mut rows: Vec<Vec<T>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    let cols = first.len();
    let mut rank = 0;
    for c in 0..cols {
        let piv = (rank..rows.len()).find(|&r| !rows[r][c].approx_zero());
        let Some(p) = piv else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].approx_zero() {
                let f = rows[r][c].clone() / rows[rank][c].clone();
                for cc in c..cols {
                    let v = rows[rank][cc].clone() * f.clone();
                    rows[r][cc] = rows[r][cc].clone() - v;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl FaceLattice {
    pub fn compute<T: Scalar>(p: &JewelPolytope<T>) -> FaceLattice {
        let nv = p.vertices().len();
        let coords: Vec<&Vec<T>> = p.vertices().iter().map(|v| &v.coords).collect();
        let active: Vec<Vec<usize>> = coords.iter().map(|x| p.active_constraints(x)).collect();
        let m = p.dim();
        let dim_of = |set: &FixedBitSet| -> usize {
            let pts: Vec<&Vec<T>> = set.ones().map(|i| coords[i]).collect();
            affine_dimension(&pts)
        };
        let active_on = |set: &FixedBitSet| -> Vec<usize> {
            let mut it = set.ones();
            let Some(first) = it.next() else { return Vec::new() };
            let mut acc = active[first].clone();
            for v in it {
                acc.retain(|c| active[v].contains(c));
            }
            acc
        };
        let mut facets: Vec<FixedBitSet> = Vec::new();
        for j in 0..p.constraints().len() {
            let mut s = FixedBitSet::with_capacity(nv);
            for v in 0..nv {
                if active[v].contains(&j) {
                    s.insert(v);
                }
            }
            if s.count_ones(..) > 0 && m >= 1 && dim_of(&s) == m - 1 && !facets.contains(&s) {
                facets.push(s);
            }
        }
        let mut all = FixedBitSet::with_capacity(nv);
        all.insert_range(..);
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut faces = Vec::new();
        let mut queue: VecDeque<FixedBitSet> = VecDeque::new();
        seen.insert(all.clone());
        faces.push(Face { dim: m, active: active_on(&all), vertices: all });
        for f in &facets {
            if seen.insert(f.clone()) {
                queue.push_back(f.clone());
            }
        }
        while let Some(f) = queue.pop_front() {
            for g in &facets {
                let mut h = f.clone();
                h.intersect_with(g);
                if h.count_ones(..) > 0 && seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
            faces.push(Face { dim: dim_of(&f), active: active_on(&f), vertices: f });
        }
        faces.sort_by(|a, b| {
            b.dim.cmp(&a.dim).then_with(|| a.vertices.ones().collect::<Vec<_>>().cmp(&b.vertices.ones().collect()))
        });
        FaceLattice { dim: m, faces }
    }

    /// (f_0, …, f_{m−1}); the polytope itself is not counted.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim).map(|d| self.faces.iter().filter(|f| f.dim == d).count()).collect()
    }

    pub fn count_codim(&self, k: usize) -> usize {
        self.faces.iter().filter(|f| f.dim + k == self.dim).count()
    }

    pub fn faces_of_dim(&self, d: usize) -> Vec<&Face> {
        self.faces.iter().filter(|f| f.dim == d).collect()
    }

    pub fn f_vector_csv(&self) -> String {
        let mut s = String::from("dim,count\n");
        for (d, c) in self.f_vector().iter().enumerate() {
            s.push_str(&format!("{d},{c}\n"));
        }
        s
    }
}
