//! Finite graphs with half-edges, core subgraphs, forests and collapses.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} has endpoint {vertex} but the graph has {vertices} vertices")]
    BadEndpoint { edge: usize, vertex: usize, vertices: usize },
    #[error("graph has {0} edges; at most {1} are supported here")]
    TooLarge(usize, usize),
    #[error("edge set {0} contains a cycle, so it is not a forest")]
    NotAForest(EdgeSet),
    #[error("edge set {0} is not a core subgraph")]
    NotCore(EdgeSet),
    #[error("malformed graph json: {0}")]
    Json(String),
}

/// Most enumeration helpers walk all subsets of Δ.
pub const MAX_ENUM_EDGES: usize = 20;

/// A set of edges given as a bitmask over Δ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct EdgeSet(pub u32);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn full(m: usize) -> Self {
        if m >= 32 {
            EdgeSet(u32::MAX)
        } else {
            EdgeSet((1u32 << m) - 1)
        }
    }

    pub fn single(e: usize) -> Self {
        EdgeSet(1 << e)
    }

    pub fn from_edges(edges: impl IntoIterator<Item = usize>) -> Self {
        EdgeSet(edges.into_iter().fold(0, |acc, e| acc | (1 << e)))
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | o.0)
    }

    pub fn intersection(self, o: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & o.0)
    }

    pub fn minus(self, o: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !o.0)
    }

    pub fn with(self, e: usize) -> EdgeSet {
        EdgeSet(self.0 | (1 << e))
    }

    pub fn without(self, e: usize) -> EdgeSet {
        EdgeSet(self.0 & !(1 << e))
    }

    pub fn is_subset(self, o: EdgeSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |e| bits >> e & 1 == 1)
    }

    /// Popcount first, then numeric value.
    pub fn canonical_key(self) -> (u32, u32) {
        (self.0.count_ones(), self.0)
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "e{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Half-edge `2e` sits at the first endpoint of edge `e`, `2e + 1` at the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge(pub usize);

impl HalfEdge {
    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn opposite(self) -> HalfEdge {
        HalfEdge(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    half_edge_vertex: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub connected: bool,
    pub separating_edges: Vec<usize>,
    pub low_valence_vertices: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.connected && self.separating_edges.is_empty() && self.low_valence_vertices.is_empty()
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.connected {
            out.push("disconnected".to_string());
        }
        for e in &self.separating_edges {
            out.push(format!("separating edge e{e}"));
        }
        for v in &self.low_valence_vertices {
            out.push(format!("vertex {v} has valence below 3"));
        }
        out
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if edges.len() > 32 {
            return Err(GraphError::TooLarge(edges.len(), 32));
        }
        let mut half_edge_vertex = Vec::with_capacity(2 * edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= vertices {
                    return Err(GraphError::BadEndpoint { edge: i, vertex: x, vertices });
                }
            }
            half_edge_vertex.push(u);
            half_edge_vertex.push(v);
        }
        Ok(Graph { vertices, edges, half_edge_vertex })
    }

    pub fn rose(n: usize) -> Self {
        Graph::new(1, vec![(0, 0); n]).expect("rose")
    }

    pub fn theta() -> Self {
        Graph::new(2, vec![(0, 1); 3]).expect("theta")
    }

    /// Two vertices; a loop at each and two parallel edges between them.
    pub fn looped_digon() -> Self {
        Graph::new(2, vec![(0, 0), (1, 1), (0, 1), (0, 1)]).expect("looped digon")
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        let j: GraphJson = serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
        Graph::new(j.vertices, j.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }

    pub fn to_json(&self) -> String {
        let j = GraphJson { vertices: self.vertices, edges: self.edges.iter().map(|&(u, v)| [u, v]).collect() };
        serde_json::to_string(&j).expect("graph json")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    pub fn all(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> {
        (0..2 * self.edges.len()).map(HalfEdge)
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.half_edge_vertex[h.0]
    }

    /// Half-edges incident to `v`, in index order.
    pub fn star(&self, v: usize) -> Vec<HalfEdge> {
        self.half_edges().filter(|&h| self.vertex_of(h) == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.half_edge_vertex.iter().filter(|&&x| x == v).count()
    }

    /// Vertices touched by the edges of `s`.
    pub fn closure_vertices(&self, s: EdgeSet) -> Vec<usize> {
        let mut seen = vec![false; self.vertices];
        for e in s.iter() {
            let (u, v) = self.edges[e];
            seen[u] = true;
            seen[v] = true;
        }
        (0..self.vertices).filter(|&v| seen[v]).collect()
    }

    /// Components of the graph with vertex set `verts` and edges `s`.
    fn components_on(&self, verts: &[usize], s: EdgeSet) -> usize {
        let mut d = Dsu::new(self.vertices);
        let mut merges = 0;
        for e in s.iter() {
            let (u, v) = self.edges[e];
            if d.union(u, v) {
                merges += 1;
            }
        }
        verts.len() - merges
    }

    pub fn components(&self, s: EdgeSet) -> usize {
        self.components_on(&self.closure_vertices(s), s)
    }

    pub fn rank_h1(&self, s: EdgeSet) -> usize {
        let verts = self.closure_vertices(s);
        s.len() + self.components_on(&verts, s) - verts.len()
    }

    fn separates(&self, s: EdgeSet, e: usize, verts: &[usize], base: usize) -> bool {
        self.components_on(verts, s.without(e)) > base
    }

    pub fn is_core(&self, s: EdgeSet) -> bool {
        let verts = self.closure_vertices(s);
        let base = self.components_on(&verts, s);
        s.iter().all(|e| !self.separates(s, e, &verts, base))
    }

    /// Delete separating edges until none remain.
    pub fn core_of(&self, s: EdgeSet) -> EdgeSet {
        let mut cur = s;
        loop {
            let verts = self.closure_vertices(cur);
            let base = self.components_on(&verts, cur);
            let bad: Vec<usize> = cur.iter().filter(|&e| self.separates(cur, e, &verts, base)).collect();
            if bad.is_empty() {
                return cur;
            }
            for e in bad {
                cur = cur.without(e);
            }
        }
    }

    pub fn is_forest(&self, s: EdgeSet) -> bool {
        self.rank_h1(s) == 0
    }

    pub fn validate(&self) -> ValidationReport {
        let all = self.all();
        let connected = self.vertices > 0 && {
            let mut d = Dsu::new(self.vertices);
            let mut comps = self.vertices;
            for e in all.iter() {
                let (u, v) = self.edges[e];
                if d.union(u, v) {
                    comps -= 1;
                }
            }
            comps == 1
        };
        let verts: Vec<usize> = (0..self.vertices).collect();
        let base = self.components_on(&verts, all);
        let separating_edges = all.iter().filter(|&e| self.separates(all, e, &verts, base)).collect();
        let low_valence_vertices = (0..self.vertices).filter(|&v| self.valence(v) < 3).collect();
        ValidationReport { connected, separating_edges, low_valence_vertices }
    }

    fn check_enum_size(&self) -> Result<(), GraphError> {
        if self.edges.len() > MAX_ENUM_EDGES {
            Err(GraphError::TooLarge(self.edges.len(), MAX_ENUM_EDGES))
        } else {
            Ok(())
        }
    }

    /// All nonempty core subsets including Δ, sorted by popcount then mask.
    pub fn enumerate_cores(&self) -> Result<Vec<EdgeSet>, GraphError> {
        self.check_enum_size()?;
        let mut out: Vec<EdgeSet> =
            (1..=self.all().0).map(EdgeSet).filter(|&s| self.is_core(s)).collect();
        out.sort_by_key(|s| s.canonical_key());
        Ok(out)
    }

    /// All forests (edge sets with empty core), including the empty set.
    pub fn enumerate_forests(&self) -> Result<Vec<EdgeSet>, GraphError> {
        self.check_enum_size()?;
        let mut out: Vec<EdgeSet> =
            (0..=self.all().0).map(EdgeSet).filter(|&s| self.is_forest(s)).collect();
        out.sort_by_key(|s| s.canonical_key());
        Ok(out)
    }

    pub fn spanning_trees(&self) -> Result<Vec<EdgeSet>, GraphError> {
        self.check_enum_size()?;
        let need = self.vertices.saturating_sub(1);
        let mut out: Vec<EdgeSet> = (0..=self.all().0)
            .map(EdgeSet)
            .filter(|s| s.len() == need && self.is_forest(*s) && self.components_on(&(0..self.vertices).collect::<Vec<_>>(), *s) == 1)
            .collect();
        out.sort_by_key(|s| s.canonical_key());
        Ok(out)
    }

    /// Is `s` a maximal tree?
    pub fn is_spanning_tree(&self, s: EdgeSet) -> bool {
        let verts: Vec<usize> = (0..self.vertices).collect();
        s.len() + 1 == self.vertices && self.components_on(&verts, s) == 1
    }

    pub fn collapse(&self, phi: EdgeSet) -> Result<ForestCollapse, GraphError> {
        if !self.is_forest(phi) {
            return Err(GraphError::NotAForest(phi));
        }
        let mut d = Dsu::new(self.vertices);
        for e in phi.iter() {
            let (u, v) = self.edges[e];
            d.union(u, v);
        }
        let mut vmap = vec![usize::MAX; self.vertices];
        let mut next = 0;
        for v in 0..self.vertices {
            let r = d.find(v);
            if vmap[r] == usize::MAX {
                vmap[r] = next;
                next += 1;
            }
            vmap[v] = vmap[r];
        }
        let mut edges = Vec::new();
        let mut relabel = vec![None; self.edges.len()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if !phi.contains(e) {
                relabel[e] = Some(edges.len());
                edges.push((vmap[u], vmap[v]));
            }
        }
        let target = Graph::new(next, edges)?;
        Ok(ForestCollapse { source: self.clone(), forest: phi, target, relabel, vertex_map: vmap })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestCollapse {
    pub source: Graph,
    pub forest: EdgeSet,
    pub target: Graph,
    /// Source edge index to target edge index; `None` for collapsed edges.
    pub relabel: Vec<Option<usize>>,
    pub vertex_map: Vec<usize>,
}

impl ForestCollapse {
    pub fn image(&self, s: EdgeSet) -> EdgeSet {
        EdgeSet::from_edges(s.iter().filter_map(|e| self.relabel[e]))
    }

    pub fn preimage(&self, s: EdgeSet) -> EdgeSet {
        EdgeSet::from_edges(
            (0..self.relabel.len()).filter(|&e| self.relabel[e].is_some_and(|t| s.contains(t))),
        )
    }

    /// core(A′ ∪ Φ) for a core A′ of the target.
    pub fn core_section(&self, a_prime: EdgeSet) -> Result<EdgeSet, GraphError> {
        if a_prime.is_empty() || !self.target.is_core(a_prime) {
            return Err(GraphError::NotCore(a_prime));
        }
        Ok(self.source.core_of(self.preimage(a_prime).union(self.forest)))
    }
}

/// All valid graphs (connected, no separating edge, valence ≥ 3) with between
/// `min_edges` and `max_edges` edges, one per isomorphism class.
pub fn valid_graph_corpus(min_edges: usize, max_edges: usize) -> Vec<Graph> {
    use itertools::Itertools;
    let mut out: Vec<(Vec<(usize, usize)>, Graph)> = Vec::new();
    for m in min_edges.max(1)..=max_edges {
        for v in 1..=(2 * m / 3).max(1) {
            let pairs: Vec<(usize, usize)> =
                (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
            for combo in pairs.iter().copied().combinations_with_replacement(m) {
                let g = match Graph::new(v, combo) {
                    Ok(g) => g,
                    Err(_) => continue,
                };
                if !g.validate().is_valid() {
                    continue;
                }
                let key = canonical_edge_list(&g);
                if !out.iter().any(|(k, _)| *k == key) {
                    out.push((key, g));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.1.edge_count(), a.1.vertex_count(), &a.0).cmp(&(b.1.edge_count(), b.1.vertex_count(), &b.0))
    });
    out.into_iter().map(|(k, g)| Graph::new(g.vertex_count(), k).expect("canonical form")).collect()
}

/// Lexicographically least sorted edge list over all vertex relabelings.
fn canonical_edge_list(g: &Graph) -> Vec<(usize, usize)> {
    use itertools::Itertools;
    let n = g.vertex_count();
    let mut best: Option<Vec<(usize, usize)>> = None;
    for perm in (0..n).permutations(n) {
        let mut l: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        l.sort();
        if best.as_ref().is_none_or(|b| l < *b) {
            best = Some(l);
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> EdgeSet {
        EdgeSet::from_edges(v.iter().copied())
    }

    /// Kirchhoff: number of spanning trees as a reduced-Laplacian determinant.
    fn matrix_tree(g: &Graph) -> i64 {
        let n = g.vertex_count();
        if n == 1 {
            return 1;
        }
        let mut l = vec![vec![0f64; n]; n];
        for &(u, v) in g.edges() {
            if u != v {
                l[u][u] += 1.0;
                l[v][v] += 1.0;
                l[u][v] -= 1.0;
                l[v][u] -= 1.0;
            }
        }
        let m: Vec<Vec<f64>> = l[1..].iter().map(|r| r[1..].to_vec()).collect();
        let k = n - 1;
        let mut a = m;
        let mut det = 1.0;
        for c in 0..k {
            let p = (c..k).max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap()).unwrap();
            if a[p][c].abs() < 1e-12 {
                return 0;
            }
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c];
            for r in c + 1..k {
                let f = a[r][c] / a[c][c];
                for cc in c..k {
                    a[r][cc] -= f * a[c][cc];
                }
            }
        }
        det.round() as i64
    }

    #[test]
    fn validation_examples() {
        assert!(Graph::rose(2).validate().is_valid());
        assert!(Graph::theta().validate().is_valid());
        let bridge = Graph::new(2, vec![(0, 0), (1, 1), (0, 1)]).unwrap();
        let r = bridge.validate();
        assert_eq!(r.separating_edges, vec![2]);
        assert!(!r.is_valid());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Graph::rose(3).rank_h1(Graph::rose(3).all()), 3);
        assert_eq!(Graph::theta().rank_h1(set(&[0])), 0);
        assert_eq!(Graph::looped_digon().rank_h1(set(&[2, 3])), 1);
    }

    #[test]
    fn core_examples() {
        let g = Graph::looped_digon();
        assert!(g.is_core(set(&[0])));
        assert!(!g.is_core(set(&[2])));
        assert!(g.is_core(set(&[2, 3])));
        assert_eq!(g.core_of(set(&[0, 2])), set(&[0]));
        // brute force: the largest core contained in {e0,e2}
        let best = (1..=set(&[0, 2]).0)
            .map(EdgeSet)
            .filter(|s| s.is_subset(set(&[0, 2])) && g.is_core(*s))
            .max_by_key(|s| s.len())
            .unwrap();
        assert_eq!(best, set(&[0]));
        assert!(g.core_of(set(&[2])).is_empty());
    }

    #[test]
    fn looped_digon_cores() {
        let g = Graph::looped_digon();
        let cores = g.enumerate_cores().unwrap();
        let proper: Vec<EdgeSet> = cores.iter().copied().filter(|&c| c != g.all()).collect();
        let mut expect = vec![set(&[0]), set(&[1]), set(&[2, 3]), set(&[0, 1]), set(&[1, 2, 3]), set(&[0, 2, 3])];
        expect.sort_by_key(|s| s.canonical_key());
        assert_eq!(proper, expect);
        assert_eq!(cores.len(), 7);
    }

    #[test]
    fn rose_and_theta_cores() {
        assert_eq!(Graph::rose(4).enumerate_cores().unwrap().len(), 15);
        let t = Graph::theta().enumerate_cores().unwrap();
        assert_eq!(t, vec![set(&[0, 1]), set(&[0, 2]), set(&[1, 2]), set(&[0, 1, 2])]);
    }

    #[test]
    fn spanning_tree_counts() {
        for g in [Graph::theta(), Graph::rose(3), Graph::looped_digon()] {
            assert_eq!(g.spanning_trees().unwrap().len() as i64, matrix_tree(&g));
        }
        assert_eq!(Graph::looped_digon().spanning_trees().unwrap(), vec![set(&[2]), set(&[3])]);
        assert_eq!(Graph::theta().spanning_trees().unwrap().len(), 3);
        assert_eq!(Graph::rose(2).spanning_trees().unwrap(), vec![EdgeSet::EMPTY]);
    }

    #[test]
    fn collapse_examples() {
        let g = Graph::looped_digon();
        let id = g.collapse(EdgeSet::EMPTY).unwrap();
        assert_eq!(id.target, g);
        let c = g.collapse(set(&[2])).unwrap();
        assert_eq!(c.target.vertex_count(), 1);
        assert_eq!(c.target.edge_count(), 3);
        assert_eq!(c.target.rank_h1(c.target.all()), 3);
        assert_eq!(c.relabel, vec![Some(0), Some(1), None, Some(2)]);
        assert!(matches!(g.collapse(set(&[0])), Err(GraphError::NotAForest(_))));
    }

    #[test]
    fn core_section_examples() {
        let g = Graph::looped_digon();
        let id = g.collapse(EdgeSet::EMPTY).unwrap();
        assert_eq!(id.core_section(set(&[2, 3])).unwrap(), set(&[2, 3]));
        let c = g.collapse(set(&[3])).unwrap();
        assert_eq!(c.core_section(c.image(set(&[0]))).unwrap(), set(&[0]));
        let a2 = c.image(set(&[2]));
        let s = c.core_section(a2).unwrap();
        assert_eq!(s, set(&[2, 3]));
        assert_eq!(g.rank_h1(s), c.target.rank_h1(a2));
        assert!(c.core_section(EdgeSet::EMPTY).is_err());
    }

    #[test]
    fn small_corpus() {
        let c = valid_graph_corpus(1, 3);
        // two edges: the rank-2 rose; three edges: the rank-3 rose and theta
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|g| g.validate().is_valid()));
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::looped_digon();
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
        assert!(Graph::from_json("{\"vertices\":1,\"edges\":[[0,3]]}").is_err());
    }
}
