//! Flag complexes of ideal edges, their homology, and sphericity reports.

mod homology;
mod pi1;
mod vdecomp;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use homology::{homology, HomologyReport, MAX_SIMPLICES};
pub use pi1::{fundamental_group_check, Pi1Result};
pub use vdecomp::{build_z, build_z_rho, enumerate_v_ideal_edges, BlockSet, VDecomposition, VIdealEdge};

use crate::stars::StarsError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("complex has {0} simplices, above the limit {1}")]
    TooLarge(usize, usize),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("malformed complex json: {0}")]
    Json(String),
    #[error(transparent)]
    Stars(#[from] StarsError),
}

/// Vertices plus a symmetric adjacency relation; simplices are the cliques.
#[derive(Debug, Clone)]
pub struct FlagComplex {
    labels: Vec<String>,
    adj: Vec<FixedBitSet>,
}

impl FlagComplex {
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> FlagComplex {
        let n = labels.len();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        FlagComplex { labels, adj }
    }

    /// Adjacency from a symmetric predicate on vertex indices.
    pub fn from_relation(labels: Vec<String>, rel: impl Fn(usize, usize) -> bool) -> FlagComplex {
        let n = labels.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rel(a, b) {
                    edges.push((a, b));
                }
            }
        }
        FlagComplex::new(labels, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.vertex_count() {
            for b in self.adj[a].ones().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    /// All cliques with at most `max_size` vertices, grouped by size − 1.
    pub fn simplices(&self, max_size: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
        let n = self.vertex_count();
        let mut cur = Vec::new();
        for v in 0..n {
            let mut cand = self.adj[v].clone();
            cand.set_range(..v + 1, false);
            cur.push(v);
            self.grow(&mut cur, &cand, max_size, &mut out);
            cur.pop();
        }
        out
    }

    fn grow(&self, cur: &mut Vec<usize>, cand: &FixedBitSet, max_size: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        let d = cur.len() - 1;
        if out.len() <= d {
            out.resize(d + 1, Vec::new());
        }
        out[d].push(cur.clone());
        if cur.len() == max_size {
            return;
        }
        for w in cand.ones() {
            let mut next = cand.clone();
            next.intersect_with(&self.adj[w]);
            next.set_range(..w + 1, false);
            cur.push(w);
            self.grow(cur, &next, max_size, out);
            cur.pop();
        }
    }

    /// Number of cliques, stopping early once `limit` is passed.
    pub fn count_simplices(&self, limit: usize) -> usize {
        fn go(c: &FlagComplex, cand: &FixedBitSet, count: &mut usize, limit: usize) {
            for w in cand.ones() {
                if *count > limit {
                    return;
                }
                *count += 1;
                let mut next = cand.clone();
                next.intersect_with(&c.adj[w]);
                next.set_range(..w + 1, false);
                go(c, &next, count, limit);
            }
        }
        let mut all = FixedBitSet::with_capacity(self.vertex_count());
        all.insert_range(..);
        let mut count = 0;
        go(self, &all, &mut count, limit);
        count
    }

    /// Size of the largest clique minus one; −1 when empty.
    pub fn dimension(&self) -> isize {
        fn go(c: &FlagComplex, size: usize, cand: &FixedBitSet, best: &mut usize) {
            if size + cand.count_ones(..) <= *best {
                return;
            }
            if cand.count_ones(..) == 0 {
                *best = (*best).max(size);
                return;
            }
            for w in cand.ones() {
                let mut next = cand.clone();
                next.intersect_with(&c.adj[w]);
                next.set_range(..w + 1, false);
                go(c, size + 1, &next, best);
            }
        }
        let mut all = FixedBitSet::with_capacity(self.vertex_count());
        all.insert_range(..);
        let mut best = 0;
        go(self, 0, &all, &mut best);
        best as isize - 1
    }

    pub fn induced(&self, keep: &[usize]) -> FlagComplex {
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        FlagComplex::from_relation(labels, |a, b| self.is_edge(keep[a], keep[b]))
    }

    /// Repeatedly delete a vertex whose closed neighbourhood lies inside
    /// another vertex's closed neighbourhood. The homotopy type is unchanged.
    pub fn strong_collapse(&self) -> FlagComplex {
        let n = self.vertex_count();
        let closed: Vec<FixedBitSet> = (0..n)
            .map(|v| {
                let mut s = self.adj[v].clone();
                s.insert(v);
                s
            })
            .collect();
        let mut alive = FixedBitSet::with_capacity(n);
        alive.insert_range(..);
        loop {
            let mut removed = false;
            for v in 0..n {
                if !alive.contains(v) {
                    continue;
                }
                let mut nv = closed[v].clone();
                nv.intersect_with(&alive);
                let dominated = nv.ones().any(|w| {
                    if w == v {
                        return false;
                    }
                    let mut nw = closed[w].clone();
                    nw.intersect_with(&alive);
                    nv.is_subset(&nw)
                });
                if dominated {
                    alive.set(v, false);
                    removed = true;
                }
            }
            if !removed {
                break;
            }
        }
        let keep: Vec<usize> = alive.ones().collect();
        self.induced(&keep)
    }

    /// Vertices of both, every vertex of one joined to every vertex of the other.
    pub fn join(&self, other: &FlagComplex) -> FlagComplex {
        let a = self.vertex_count();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        FlagComplex::from_relation(labels, |x, y| match (x < a, y < a) {
            (true, true) => self.is_edge(x, y),
            (false, false) => other.is_edge(x - a, y - a),
            _ => true,
        })
    }

    /// Reads the `{vertices, edges}` form written by [`FlagComplex::to_json`].
    pub fn from_json(s: &str) -> Result<FlagComplex, ComplexError> {
        #[derive(Deserialize)]
        struct In {
            vertices: Vec<String>,
            edges: Vec<[usize; 2]>,
        }
        let j: In = serde_json::from_str(s).map_err(|e| ComplexError::Json(e.to_string()))?;
        let n = j.vertices.len();
        if let Some(bad) = j.edges.iter().find(|[a, b]| *a >= n || *b >= n) {
            return Err(ComplexError::Json(format!("edge {bad:?} names a vertex beyond {n}")));
        }
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|&[a, b]| (a, b)).collect();
        Ok(FlagComplex::new(j.vertices, &edges))
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            vertices: &'a [String],
            edges: Vec<[usize; 2]>,
        }
        let edges = self.edges().into_iter().map(|(a, b)| [a, b]).collect();
        serde_json::to_string_pretty(&Out { vertices: &self.labels, edges }).expect("serializable")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Reduced homology vanishes below d, and d ≤ 1 where that already is
    /// (d−1)-connectivity.
    Spherical,
    SphericalPi1Verified,
    HomologySpherical,
    Inconclusive,
    NotSpherical,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Spherical => "spherical",
            Verdict::SphericalPi1Verified => "spherical (π₁ verified)",
            Verdict::HomologySpherical => "homology-spherical",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotSpherical => "not spherical",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SphericityReport {
    pub expected_dim: isize,
    pub dim: isize,
    pub homology: HomologyReport,
    pub dim_ok: bool,
    pub vanishes_below: bool,
    pub connected: bool,
    pub pi1: Option<Pi1Result>,
    pub verdict: Verdict,
}

impl SphericityReport {
    /// Dimension and homology both as expected.
    pub fn passes(&self) -> bool {
        self.dim_ok && self.vanishes_below
    }
}

/// Largest complex (after strong collapse) on which the π₁ check runs.
pub const PI1_VERTEX_LIMIT: usize = 400;

pub fn sphericity_report(c: &FlagComplex, d: isize) -> Result<SphericityReport, ComplexError> {
    let dim = c.dimension();
    let core = c.strong_collapse();
    let top = (d.max(dim).max(0) as usize) + 1;
    let h = homology(&core, top)?;
    let dim_ok = dim == d;
    let vanishes_below = h.vanishes_below(d);
    let connected = c.vertex_count() > 0 && h.reduced_betti(0) == 0;
    let pi1 = if d >= 2 && core.vertex_count() <= PI1_VERTEX_LIMIT {
        Some(fundamental_group_check(&core))
    } else {
        None
    };
    let verdict = if !dim_ok || !vanishes_below {
        Verdict::NotSpherical
    } else if !h.torsion_known {
        Verdict::Inconclusive
    } else if d <= 1 {
        Verdict::Spherical
    } else if matches!(pi1, Some(Pi1Result::Trivial)) {
        Verdict::SphericalPi1Verified
    } else {
        Verdict::HomologySpherical
    };
    Ok(SphericityReport { expected_dim: d, dim, homology: h, dim_ok, vanishes_below, connected, pi1, verdict })
}
