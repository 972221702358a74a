//! Marked roses, the Morse function μ, blowups of ideal trees and ascending links.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complexes::{build_z_rho, homology, ComplexError, FlagComplex, HomologyReport};
use crate::freegroup::{generate_W0, ClassIter, CyclicWord, FreeGroupError, Letter, Marking, Word};
use crate::graphs::{EdgeSet, Graph};
use crate::stars::{DotData, IdealEdge, StarsError, WordList};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("ideal edges {0} and {1} are not compatible")]
    Incompatible(String, String),
    #[error("duplicate ideal edge {0}")]
    Duplicate(String),
    #[error("edge set is not a maximal tree of the blowup")]
    NotMaximalTree,
    #[error("tree contains a blown-up edge")]
    ContainsBlownEdge,
    #[error("μ comparison tied on every coordinate up to word length {0}")]
    TieAtBudget(usize),
    #[error(transparent)]
    FreeGroup(#[from] FreeGroupError),
    #[error(transparent)]
    Stars(#[from] StarsError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedRose {
    marking: Marking,
}

impl MarkedRose {
    pub fn new(marking: Marking) -> Self {
        MarkedRose { marking }
    }

    pub fn identity(n: usize) -> Self {
        MarkedRose { marking: Marking::identity(n) }
    }

    pub fn rank(&self) -> usize {
        self.marking.rank()
    }

    pub fn marking(&self) -> &Marking {
        &self.marking
    }

    /// |ρ|₀: the sum of |ρ|_w over W₀.
    pub fn mu0(&self) -> usize {
        generate_W0(self.rank()).iter().map(|w| mu_norm(self, w)).sum()
    }

    /// (|ρ|₀, |ρ|_{w₁}, …) over all classes up to length `budget`.
    pub fn mu_prefix(&self, budget: usize) -> Vec<usize> {
        let mut v = vec![self.mu0()];
        v.extend(ClassIter::new(self.rank(), budget).map(|w| mu_norm(self, &w)));
        v
    }

    pub fn equivalent(&self, other: &MarkedRose) -> bool {
        self.marking.equivalent(&other.marking)
    }
}

/// Length of the cyclically reduced image of w.
pub fn mu_norm(rho: &MarkedRose, w: &CyclicWord) -> usize {
    rho.marking.apply_cyclic(w).len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MuOrdering {
    Less,
    Greater,
    TieAtBudget,
}

impl MuOrdering {
    fn from(o: Ordering) -> Option<MuOrdering> {
        match o {
            Ordering::Less => Some(MuOrdering::Less),
            Ordering::Greater => Some(MuOrdering::Greater),
            Ordering::Equal => None,
        }
    }
}

/// Lexicographic comparison of μ: |·|₀ first, then classes in shortlex order.
pub fn mu_compare(a: &MarkedRose, b: &MarkedRose, budget: usize) -> MuOrdering {
    if let Some(o) = MuOrdering::from(a.mu0().cmp(&b.mu0())) {
        return o;
    }
    for w in ClassIter::new(a.rank(), budget) {
        if let Some(o) = MuOrdering::from(mu_norm(a, &w).cmp(&mu_norm(b, &w))) {
            return o;
        }
    }
    MuOrdering::TieAtBudget
}

pub fn default_budget(rho: &MarkedRose) -> usize {
    (rho.marking.max_image_len() * 4).max(4)
}

/// Pairwise-compatible ideal edges, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealTree {
    edges: Vec<IdealEdge>,
}

impl IdealTree {
    pub fn new(mut edges: Vec<IdealEdge>) -> Result<IdealTree, MorseError> {
        edges.sort();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(MorseError::Duplicate(w[0].to_string()));
            }
        }
        for (a, b) in edges.iter().tuple_combinations() {
            if !a.compatible(b) {
                return Err(MorseError::Incompatible(a.to_string(), b.to_string()));
            }
        }
        Ok(IdealTree { edges })
    }

    pub fn empty() -> IdealTree {
        IdealTree { edges: Vec::new() }
    }

    pub fn edges(&self) -> &[IdealEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn union_is_tree(&self, other: &IdealTree) -> bool {
        self.edges.iter().all(|a| other.edges.iter().all(|b| a.compatible(b)))
    }
}

/// All nonempty ideal trees of the rank-n rose.
pub fn enumerate_ideal_trees(n: usize) -> Vec<IdealTree> {
    let edges = crate::stars::enumerate_ideal_edges(n);
    let labels = edges.iter().map(|e| e.to_string()).collect();
    let f = FlagComplex::from_relation(labels, |a, b| edges[a].compatible(&edges[b]));
    f.simplices(2 * n - 3)
        .into_iter()
        .flatten()
        .map(|s| IdealTree { edges: s.into_iter().map(|i| edges[i]).collect() })
        .collect()
}

/// The graph obtained by blowing up an ideal tree at the rose's vertex.
/// Edges 0..n are the old petals, edges n.. the new tree edges in the
/// order of the ideal tree.
#[derive(Debug, Clone)]
pub struct Blowup {
    rose: MarkedRose,
    tree: IdealTree,
    graph: Graph,
}

impl Blowup {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn tree(&self) -> &IdealTree {
        &self.tree
    }

    pub fn rose(&self) -> &MarkedRose {
        &self.rose
    }

    fn n(&self) -> usize {
        self.rose.rank()
    }

    /// Path through new edges only, as (edge, forward) steps.
    fn tree_path(&self, from: usize, to: usize) -> Vec<(usize, bool)> {
        let n = self.n();
        let vc = self.graph.vertex_count();
        let mut prev: Vec<Option<(usize, usize, bool)>> = vec![None; vc];
        let mut seen = vec![false; vc];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        while let Some(v) = q.pop_front() {
            if v == to {
                break;
            }
            for e in n..self.graph.edge_count() {
                let (a, b) = self.graph.endpoints(e);
                for (x, y, fwd) in [(a, b, true), (b, a, false)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        prev[y] = Some((v, e, fwd));
                        q.push_back(y);
                    }
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, e, fwd) = prev[cur].expect("new edges span the blowup");
            path.push((e, fwd));
            cur = p;
        }
        path.reverse();
        path
    }

    /// Closed edge path at vertex 0 lifting a word in the old petals.
    pub fn lift(&self, w: &Word) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        let mut cur = 0;
        for &l in w.letters() {
            let p = l.unsigned_abs() as usize - 1;
            let (tail, head) = self.graph.endpoints(p);
            let (s, t) = if l > 0 { (tail, head) } else { (head, tail) };
            out.extend(self.tree_path(cur, s));
            out.push((p, l > 0));
            cur = t;
        }
        out.extend(self.tree_path(cur, 0));
        out
    }

    /// Sets of old petals forming a maximal tree.
    pub fn maximal_old_trees(&self) -> Vec<EdgeSet> {
        let k = self.tree.len();
        (0..self.n())
            .combinations(k)
            .map(EdgeSet::from_edges)
            .filter(|&t| self.graph.is_spanning_tree(t))
            .collect()
    }

    /// Collapse the maximal tree `t` of old petals; the remaining old petals
    /// come first, then the new edges.
    pub fn collapse(&self, t: EdgeSet) -> Result<MarkedRose, MorseError> {
        let n = self.n();
        if t.iter().any(|e| e >= n) {
            return Err(MorseError::ContainsBlownEdge);
        }
        if !self.graph.is_spanning_tree(t) {
            return Err(MorseError::NotMaximalTree);
        }
        let kept: Vec<usize> = (0..self.graph.edge_count()).filter(|&e| !t.contains(e)).collect();
        let index: HashMap<usize, Letter> = kept.iter().enumerate().map(|(i, &e)| (e, i as Letter + 1)).collect();
        let images = self
            .rose
            .marking
            .images()
            .iter()
            .map(|w| {
                let letters: Vec<Letter> = self
                    .lift(w)
                    .into_iter()
                    .filter_map(|(e, fwd)| index.get(&e).map(|&l| if fwd { l } else { -l }))
                    .collect();
                Word::reduce(n, &letters)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MarkedRose::new(Marking::new(images)?))
    }

    /// Collapse the new edges, which gives back the original rose.
    pub fn collapse_new(&self) -> Result<MarkedRose, MorseError> {
        let n = self.n();
        let images = self
            .rose
            .marking
            .images()
            .iter()
            .map(|w| {
                let letters: Vec<Letter> = self
                    .lift(w)
                    .into_iter()
                    .filter(|&(e, _)| e < n)
                    .map(|(e, fwd)| if fwd { e as Letter + 1 } else { -(e as Letter + 1) })
                    .collect();
                Word::reduce(n, &letters)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MarkedRose::new(Marking::new(images)?))
    }
}

/// Iterated single-edge blowups: for each ideal edge find the one vertex where
/// every branch lies on one side, and pull the branches on its side onto a
/// new vertex joined by the new edge.
pub fn blowup(rho: &MarkedRose, t: &IdealTree) -> Result<Blowup, MorseError> {
    let n = rho.rank();
    let t = IdealTree::new(t.edges.clone())?;
    let mut dir_vertex = vec![0usize; 2 * n];
    let mut new_edges: Vec<(usize, usize, u64)> = Vec::new();
    let mut vertices = 1;
    for alpha in &t.edges {
        let a = alpha.side().0;
        let pure = |mask: u64| mask & a == 0 || mask & !a == 0;
        let mut host = None;
        for u in 0..vertices {
            let mut branches: Vec<u64> = (0..2 * n).filter(|&d| dir_vertex[d] == u).map(|d| 1u64 << d).collect();
            let full = (1u64 << (2 * n)) - 1;
            for &(tail, head, side) in &new_edges {
                if tail == u {
                    branches.push(side);
                }
                if head == u {
                    branches.push(full & !side);
                }
            }
            if branches.iter().all(|&b| pure(b)) {
                host = Some(u);
                break;
            }
        }
        let u = host.expect("compatible ideal edges have a host vertex");
        let w = vertices;
        vertices += 1;
        for d in 0..2 * n {
            if dir_vertex[d] == u && a >> d & 1 == 1 {
                dir_vertex[d] = w;
            }
        }
        for e in new_edges.iter_mut() {
            if e.0 == u && e.2 & !a == 0 {
                e.0 = w;
            }
            if e.1 == u && (!e.2 & ((1u64 << (2 * n)) - 1)) & !a == 0 {
                e.1 = w;
            }
        }
        new_edges.push((u, w, a));
    }
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (dir_vertex[2 * i + 1], dir_vertex[2 * i])).collect();
    edges.extend(new_edges.iter().map(|&(u, w, _)| (u, w)));
    let graph = Graph::new(vertices, edges).expect("blowup graph");
    Ok(Blowup { rose: rho.clone(), tree: t, graph })
}

/// ρ^𝒜_T.
pub fn neighbor_rose(rho: &MarkedRose, t: &IdealTree, tree: EdgeSet) -> Result<MarkedRose, MorseError> {
    blowup(rho, t)?.collapse(tree)
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkVertex {
    pub tree: IdealTree,
    pub collapsed: EdgeSet,
    pub rose: MarkedRose,
}

#[derive(Debug, Clone)]
pub struct AscendingLink {
    pub complex: FlagComplex,
    pub vertices: Vec<LinkVertex>,
    /// Neighbours (𝒜, T) checked in total.
    pub candidates: usize,
    /// Pairs of ascending neighbours found to be the same marked rose.
    pub duplicates: usize,
    pub budget: usize,
}

/// The subcomplex of the link of ρ spanned by roses with larger μ.
pub fn ascending_link(rho: &MarkedRose, budget: usize) -> Result<AscendingLink, MorseError> {
    let n = rho.rank();
    let trees = enumerate_ideal_trees(n);
    let found: Vec<Result<Vec<LinkVertex>, MorseError>> = trees
        .par_iter()
        .map(|t| {
            let b = blowup(rho, t)?;
            let mut out = Vec::new();
            for tree in b.maximal_old_trees() {
                let r = b.collapse(tree)?;
                match mu_compare(&r, rho, budget) {
                    MuOrdering::Greater => out.push(LinkVertex { tree: t.clone(), collapsed: tree, rose: r }),
                    MuOrdering::Less => {}
                    MuOrdering::TieAtBudget => return Err(MorseError::TieAtBudget(budget)),
                }
            }
            Ok(out)
        })
        .collect();
    let mut vertices = Vec::new();
    let mut candidates = 0;
    for (t, f) in trees.iter().zip(found) {
        vertices.extend(f?);
        candidates += blowup(rho, t)?.maximal_old_trees().len();
    }
    // same μ on a short prefix is necessary for equivalence
    let mut buckets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut duplicates = 0;
    for (i, v) in vertices.iter().enumerate() {
        let key = v.rose.mu_prefix(2);
        let bucket = buckets.entry(key).or_default();
        if bucket.iter().any(|&j| vertices[j].rose.equivalent(&v.rose)) {
            duplicates += 1;
        }
        bucket.push(i);
    }
    let labels = vertices.iter().map(|v| format!("{:?}/{}", v.tree.edges(), v.collapsed)).collect();
    let complex = FlagComplex::from_relation(labels, |a, b| vertices[a].tree.union_is_tree(&vertices[b].tree));
    Ok(AscendingLink { complex, vertices, candidates, duplicates, budget })
}

/// Raise the budget by two until no μ comparison ties, up to `max_budget`.
pub fn ascending_link_escalating(rho: &MarkedRose, max_budget: usize) -> Result<AscendingLink, MorseError> {
    let mut b = default_budget(rho).min(max_budget);
    loop {
        match ascending_link(rho, b) {
            Err(MorseError::TieAtBudget(_)) if b < max_budget => b = (b + 2).min(max_budget),
            r => return r,
        }
    }
}

/// Largest number of classes fed into a norm table.
pub const MAX_NORM_WORDS: usize = 200_000;

/// Z(ρ) with the word list lengthened until no norm comparison ties.
pub fn z_rho_escalating(rho: &MarkedRose) -> Result<FlagComplex, MorseError> {
    let n = rho.rank();
    let mut len = 2;
    loop {
        let words = WordList::standard(n, len);
        let dots = DotData::from_marking(rho.marking(), &words);
        match build_z_rho(&dots) {
            Ok((z, _)) => return Ok(z),
            Err(ComplexError::Stars(StarsError::InsufficientWords { .. }))
                if ClassIter::new(n, len + 1).count() <= MAX_NORM_WORDS =>
            {
                len += 1
            }
            Err(e) => return Err(e.into()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkComparison {
    pub link_vertices: usize,
    pub z_vertices: usize,
    pub link_homology: HomologyReport,
    pub z_homology: HomologyReport,
    pub equal: bool,
    pub spherical: bool,
    pub duplicates: usize,
    pub budget: usize,
}

/// Homology of the ascending link against Z(ρ) with norms over the same budget.
pub fn compare_link_with_z(rho: &MarkedRose, max_budget: usize) -> Result<LinkComparison, MorseError> {
    let link = ascending_link_escalating(rho, max_budget)?;
    let n = rho.rank();
    let z = z_rho_escalating(rho)?;
    let d = 2 * n as isize - 4;
    let top = (d.max(z.dimension()) as usize) + 1;
    let core = link.complex.strong_collapse();
    let lh = homology(&core, top.max(core.dimension().max(0) as usize + 1))?;
    let zh = homology(&z, top)?;
    let top_all = lh.max_dim.max(zh.max_dim);
    let equal = (-1..=top_all).all(|i| lh.reduced_betti(i) == zh.reduced_betti(i) && lh.torsion_in(i) == zh.torsion_in(i));
    let spherical = lh.concentrated_in(d) && zh.concentrated_in(d);
    Ok(LinkComparison {
        link_vertices: link.complex.vertex_count(),
        z_vertices: z.vertex_count(),
        link_homology: lh,
        z_homology: zh,
        equal,
        spherical,
        duplicates: link.duplicates,
        budget: link.budget,
    })
}

fn nielsen_generators(n: usize) -> Vec<Marking> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for s in [1, -1] {
                for right in [true, false] {
                    let images: Vec<Word> = (0..n)
                        .map(|k| {
                            let x = k as Letter + 1;
                            if k == i {
                                let y = s * (j as Letter + 1);
                                let l = if right { vec![x, y] } else { vec![y, x] };
                                Word::reduce(n, &l).expect("in range")
                            } else {
                                Word::reduce(n, &[x]).expect("in range")
                            }
                        })
                        .collect();
                    out.push(Marking::new(images).expect("Nielsen move"));
                }
            }
        }
    }
    out
}

/// Markings reachable from the identity by at most `radius` elementary
/// Nielsen moves, one representative per marked rose.
pub fn marking_ball(n: usize, radius: usize) -> Vec<MarkedRose> {
    let gens = nielsen_generators(n);
    let mut out = vec![MarkedRose::identity(n)];
    let mut frontier = out.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for r in &frontier {
            for g in &gens {
                let c = MarkedRose::new(r.marking.compose(g));
                if !out.iter().chain(next.iter()).any(|x: &MarkedRose| x.equivalent(&c)) {
                    next.push(c);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Product of `steps` random elementary Nielsen moves.
pub fn random_marking<R: Rng>(n: usize, steps: usize, rng: &mut R) -> MarkedRose {
    let gens = nielsen_generators(n);
    let mut m = Marking::identity(n);
    for _ in 0..steps {
        m = m.compose(&gens[rng.gen_range(0..gens.len())]);
    }
    MarkedRose::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stars::{enumerate_ideal_edges, DirSet};

    fn rose(s: &[&str]) -> MarkedRose {
        MarkedRose::new(Marking::parse(s).unwrap())
    }

    #[test]
    fn mu_norm_examples() {
        let id = MarkedRose::identity(2);
        let cw = |s| CyclicWord::parse(2, s).unwrap();
        assert_eq!(mu_norm(&id, &cw("a")), 1);
        assert_eq!(mu_norm(&id, &cw("aB")), 2);
        let g = rose(&["ab", "b"]);
        assert_eq!(mu_norm(&g, &cw("aB")), 1);
    }

    #[test]
    fn mu_compare_examples() {
        let id = MarkedRose::identity(2);
        assert_eq!(mu_compare(&id, &id, 6), MuOrdering::TieAtBudget);
        let g = rose(&["ab", "b"]);
        // direct sums over W₀ = {a, b, ab, aB, Ab}: identity 1+1+2+2+2, g 2+1+3+1+1;
        // the tie is broken by the class a
        assert_eq!(id.mu0(), 8);
        assert_eq!(g.mu0(), 8);
        assert_eq!(mu_compare(&id, &g, 4), MuOrdering::Less);
        // inverting a petal gives the same marked rose
        let inv = rose(&["A", "b"]);
        assert!(inv.equivalent(&id));
        assert_eq!(mu_compare(&id, &inv, 6), MuOrdering::TieAtBudget);
    }

    #[test]
    fn blowup_rank2_is_theta() {
        let id = MarkedRose::identity(2);
        let alpha = IdealEdge::parse(2, "e1,e2|~e1,~e2").unwrap();
        let b = blowup(&id, &IdealTree::new(vec![alpha]).unwrap()).unwrap();
        let g = b.graph();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!((g.valence(0), g.valence(1)), (3, 3));
        assert!((0..3).all(|e| !g.is_loop(e)));
        assert_eq!(b.maximal_old_trees().len(), 2);
        assert!(b.collapse_new().unwrap().equivalent(&id));
        assert!(blowup(&id, &IdealTree::empty()).unwrap().collapse(EdgeSet::EMPTY).unwrap().equivalent(&id));
    }

    #[test]
    fn incompatible_trees_rejected() {
        let e = enumerate_ideal_edges(2);
        assert!(matches!(IdealTree::new(e.clone()), Err(MorseError::Incompatible(..))));
        let t = IdealTree::new(vec![e[0]]).unwrap();
        let id = MarkedRose::identity(2);
        assert_eq!(neighbor_rose(&id, &t, EdgeSet::single(2)).unwrap_err(), MorseError::ContainsBlownEdge);
        assert_eq!(neighbor_rose(&id, &t, EdgeSet::EMPTY).unwrap_err(), MorseError::NotMaximalTree);
    }

    #[test]
    fn round_trip_all_trees() {
        for n in [2, 3] {
            let rho = random_marking(n, 3, &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(n as u64));
            for t in enumerate_ideal_trees(n) {
                let b = blowup(&rho, &t).unwrap();
                assert_eq!(b.graph().edge_count(), n + t.len());
                assert_eq!(b.graph().rank_h1(b.graph().all()), n);
                assert!(b.collapse_new().unwrap().equivalent(&rho));
            }
        }
    }

    #[test]
    fn neighbor_mu_difference_is_norm_difference() {
        // μ(ρ^α_e) − μ(ρ) = |α| − |e| on every word
        let rho = rose(&["ab", "b"]);
        let words: Vec<CyclicWord> = ClassIter::new(2, 4).collect();
        let dots = DotData::from_rose_words(2, &[], &words.iter().map(|w| rho.marking().apply_cyclic(w)).collect::<Vec<_>>());
        for alpha in enumerate_ideal_edges(2) {
            let t = IdealTree::new(vec![alpha]).unwrap();
            for e in alpha.split_petals() {
                let r = neighbor_rose(&rho, &t, EdgeSet::single(e)).unwrap();
                let na = dots.norm(alpha.side()).unwrap();
                let ne = dots.norm(DirSet::single(2 * e)).unwrap();
                for (c, w) in words.iter().enumerate() {
                    let diff = mu_norm(&r, w) as i64 - mu_norm(&rho, w) as i64;
                    assert_eq!(diff, na.0[c + 1] - ne.0[c + 1]);
                }
            }
        }
    }

    #[test]
    fn rank2_link_has_four_neighbours() {
        let id = MarkedRose::identity(2);
        let l = ascending_link(&id, 8).unwrap();
        assert_eq!(l.candidates, 4);
        assert_eq!(l.duplicates, 0);
        for v in &l.vertices {
            assert_eq!(mu_compare(&v.rose, &id, 8), MuOrdering::Greater);
        }
    }

    #[test]
    fn identity_comparison_rank2() {
        let c = compare_link_with_z(&MarkedRose::identity(2), 16).unwrap();
        assert!(c.equal, "{c:?}");
        assert!(c.spherical);
    }

    #[test]
    fn ball_is_deduplicated() {
        let b = marking_ball(2, 2);
        for (x, y) in b.iter().tuple_combinations() {
            assert!(!x.equivalent(y));
        }
        assert!(b.len() > 4);
    }
}
