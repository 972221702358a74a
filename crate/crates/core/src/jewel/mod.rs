//! The jewel J(G): the simplex of edge lengths shaved by one half-space per
//! proper core subgraph.

mod chains;
mod lattice;
mod oracle;

pub use chains::{face_chains, FaceChain};
pub use lattice::{affine_dimension, Face, FaceLattice};
pub use oracle::{vertices_oracle, ORACLE_LIMIT};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::graphs::{EdgeSet, ForestCollapse, Graph, GraphError};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JewelError {
    #[error("graph is not valid: {0}")]
    InvalidGraph(String),
    #[error("schedule is not admissible: {0}")]
    BadSchedule(String),
    #[error("vertex for tree {tree} and order {order:?} violates x_{set} >= {constant}")]
    InfeasibleSchedule { tree: EdgeSet, order: Vec<usize>, set: EdgeSet, constant: String },
    #[error("oracle would solve {0} systems, above the limit {1}")]
    TooLarge(u128, u128),
    #[error("schedule has rank {schedule} but the graph has rank {graph}")]
    MismatchedSchedule { schedule: usize, graph: usize },
    #[error("collapsed jewel does not sit as the expected face: {0}")]
    FaceMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Constants c_1 < … < c_n < c_{n+1}; a core of rank r gets c_r.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationSchedule<T> {
    n: usize,
    c: Vec<T>,
}

impl<T: Scalar> TruncationSchedule<T> {
    /// c_r = 3^(r−n−2) for r ≤ n and c_{n+1} = 1/3.
    pub fn standard(n: usize) -> Self {
        let c = (1..=n + 1)
            .map(|r| if r == n + 1 { T::from_ratio(1, 3) } else { T::from_ratio(1, 3i64.pow((n + 2 - r) as u32)) })
            .collect();
        TruncationSchedule { n, c }
    }

    /// Accepts `c_1..c_{n+1}` if it is increasing, at most 1/3, and each
    /// constant more than doubles the previous one.
    pub fn from_constants(n: usize, c: Vec<T>) -> Result<Self, JewelError> {
        if c.len() != n + 1 {
            return Err(JewelError::BadSchedule(format!("expected {} constants, got {}", n + 1, c.len())));
        }
        if c[0] <= T::zero() {
            return Err(JewelError::BadSchedule("c_1 must be positive".into()));
        }
        if c[n] > T::from_ratio(1, 3) {
            return Err(JewelError::BadSchedule("c_{n+1} must be at most 1/3".into()));
        }
        for r in 0..n {
            if c[r + 1] <= T::from_ratio(2, 1) * c[r].clone() {
                return Err(JewelError::BadSchedule(format!("c_{} must exceed twice c_{}", r + 2, r + 1)));
            }
        }
        Ok(TruncationSchedule { n, c })
    }

    /// Geometric schedule with ratio `num/den`, ending at c_{n+1} = 1/3.
    pub fn geometric(n: usize, num: i64, den: i64) -> Result<Self, JewelError> {
        let ratio = T::from_ratio(num, den);
        let mut c = vec![T::from_ratio(1, 3)];
        for _ in 0..n {
            let prev = c.last().expect("nonempty").clone();
            c.push(prev / ratio.clone());
        }
        c.reverse();
        Self::from_constants(n, c)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// c_r for 1 ≤ r ≤ n+1.
    pub fn c(&self, r: usize) -> &T {
        &self.c[r - 1]
    }

    pub fn constants(&self) -> &[T] {
        &self.c
    }
}

pub fn make_schedule(n: usize) -> TruncationSchedule<Rational> {
    TruncationSchedule::standard(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintKind {
    /// x_i ≥ 0 for a non-loop edge i.
    Forest,
    /// x_A ≥ c_rank(A) for a proper core A.
    Core,
}

/// ⟨1_set, x⟩ ≥ constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub set: EdgeSet,
    pub kind: ConstraintKind,
    pub rank: usize,
    pub constant: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JewelVertex<T> {
    pub coords: Vec<T>,
    pub tree: EdgeSet,
    pub petal_order: Vec<usize>,
    /// The maximal chain S_1, …, S_m whose equations cut out this vertex.
    pub chain: Vec<EdgeSet>,
}

#[derive(Debug, Clone)]
pub struct JewelPolytope<T> {
    graph: Graph,
    schedule: TruncationSchedule<T>,
    cores: Vec<EdgeSet>,
    constraints: Vec<Constraint<T>>,
    vertices: Vec<JewelVertex<T>>,
}

pub fn x_of<T: Scalar>(x: &[T], s: EdgeSet) -> T {
    s.iter().fold(T::zero(), |acc, i| acc + x[i].clone())
}

fn check_graph(g: &Graph) -> Result<(), JewelError> {
    let rep = g.validate();
    if !rep.is_valid() {
        return Err(JewelError::InvalidGraph(rep.problems().join(", ")));
    }
    Ok(())
}

/// Inequalities of J(G): non-loop singletons at 0, then proper cores.
pub fn h_representation<T: Scalar>(
    g: &Graph,
    sched: &TruncationSchedule<T>,
) -> Result<JewelPolytope<T>, JewelError> {
    check_graph(g)?;
    let rank = g.rank_h1(g.all());
    if sched.rank() != rank {
        return Err(JewelError::MismatchedSchedule { schedule: sched.rank(), graph: rank });
    }
    let cores = g.enumerate_cores()?;
    let mut constraints = Vec::new();
    for e in 0..g.edge_count() {
        if !g.is_loop(e) {
            constraints.push(Constraint {
                set: EdgeSet::single(e),
                kind: ConstraintKind::Forest,
                rank: 0,
                constant: T::zero(),
            });
        }
    }
    for &a in cores.iter().filter(|&&a| a != g.all()) {
        let r = g.rank_h1(a);
        constraints.push(Constraint { set: a, kind: ConstraintKind::Core, rank: r, constant: sched.c(r).clone() });
    }
    Ok(JewelPolytope { graph: g.clone(), schedule: sched.clone(), cores, constraints, vertices: Vec::new() })
}

/// One vertex per (maximal tree, ordering of the remaining edges), solved
/// one new edge at a time along the nested cores.
pub fn vertices_combinatorial<T: Scalar>(
    g: &Graph,
    sched: &TruncationSchedule<T>,
) -> Result<Vec<JewelVertex<T>>, JewelError> {
    let p = h_representation(g, sched)?;
    p.solve_vertices()
}

impl<T: Scalar> JewelPolytope<T> {
    pub fn build(g: &Graph, sched: &TruncationSchedule<T>) -> Result<Self, JewelError> {
        let mut p = h_representation(g, sched)?;
        p.vertices = p.solve_vertices()?;
        Ok(p)
    }

    fn solve_vertices(&self) -> Result<Vec<JewelVertex<T>>, JewelError> {
        let g = &self.graph;
        let size = g.edge_count();
        let mut out = Vec::new();
        for tree in g.spanning_trees()? {
            let petals: Vec<usize> = g.all().minus(tree).iter().collect();
            for order in petals.iter().copied().permutations(petals.len()) {
                let mut x: Vec<Option<T>> = vec![None; size];
                let mut chain: Vec<EdgeSet> = Vec::with_capacity(size - 1);
                for t in tree.iter() {
                    x[t] = Some(T::zero());
                    chain.push(EdgeSet::single(t));
                }
                let mut u = tree;
                for (i, &p) in order.iter().enumerate() {
                    u = u.with(p);
                    if i + 1 == order.len() {
                        break;
                    }
                    let s = g.core_of(u);
                    debug_assert_eq!(g.rank_h1(s), i + 1);
                    let unknown: Vec<usize> = s.iter().filter(|&e| x[e].is_none()).collect();
                    debug_assert_eq!(unknown, vec![p]);
                    let known = s.iter().filter_map(|e| x[e].clone()).fold(T::zero(), |a, b| a + b);
                    x[p] = Some(self.schedule.c(g.rank_h1(s)).clone() - known);
                    chain.push(s);
                }
                let last = *order.last().expect("a valid graph has rank at least one");
                let sum = x.iter().flatten().fold(T::zero(), |a, b| a + b.clone());
                x[last] = Some(T::one() - sum);
                let coords: Vec<T> = x.into_iter().map(|v| v.expect("all coordinates solved")).collect();
                for c in &self.constraints {
                    if !x_of(&coords, c.set).approx_ge(&c.constant) {
                        return Err(JewelError::InfeasibleSchedule {
                            tree,
                            order: order.clone(),
                            set: c.set,
                            constant: c.constant.to_string(),
                        });
                    }
                }
                out.push(JewelVertex { coords, tree, petal_order: order, chain });
            }
        }
        Ok(out)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn schedule(&self) -> &TruncationSchedule<T> {
        &self.schedule
    }

    /// Dimension m = |Δ| − 1.
    pub fn dim(&self) -> usize {
        self.graph.edge_count() - 1
    }

    /// Nonempty cores including Δ, canonical order.
    pub fn cores(&self) -> &[EdgeSet] {
        &self.cores
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn vertices(&self) -> &[JewelVertex<T>] {
        &self.vertices
    }

    pub fn vertex_coords(&self) -> Vec<Vec<T>> {
        self.vertices.iter().map(|v| v.coords.clone()).collect()
    }

    pub fn constraint_index(&self, s: EdgeSet) -> Option<usize> {
        self.constraints.iter().position(|c| c.set == s)
    }

    /// Indices of constraints tight at `x`.
    pub fn active_constraints(&self, x: &[T]) -> Vec<usize> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| x_of(x, c.set).approx_eq(&c.constant))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.graph.edge_count()
            && x.iter().fold(T::zero(), |a, b| a + b.clone()).approx_eq(&T::one())
            && self.constraints.iter().all(|c| x_of(x, c.set).approx_ge(&c.constant))
    }

    pub fn find_vertex(&self, x: &[T]) -> Option<usize> {
        self.vertices.iter().position(|v| v.coords.iter().zip(x).all(|(a, b)| a.approx_eq(b)))
    }

    pub fn face_lattice(&self) -> FaceLattice {
        FaceLattice::compute(self)
    }

    /// Text lines `a_0 … a_m >= c`, then the affine equation.
    pub fn h_rep_text(&self) -> String {
        let m = self.graph.edge_count();
        let mut s = format!("# H-representation: {} inequalities over {} coordinates\n", self.constraints.len(), m);
        for c in &self.constraints {
            let coeffs: Vec<&str> = (0..m).map(|i| if c.set.contains(i) { "1" } else { "0" }).collect();
            s.push_str(&format!("{} >= {}\n", coeffs.join(" "), c.constant));
        }
        s.push_str(&format!("{} = 1\n", vec!["1"; m].join(" ")));
        s
    }

    /// OFF-style listing: vertices, then each facet as a vertex-index list.
    pub fn v_rep_off(&self, lattice: &FaceLattice) -> String {
        let facets: Vec<&Face> = lattice.faces_of_dim(self.dim().saturating_sub(1));
        let mut s = format!("OFF\n# dim {}\n{} {} 0\n", self.dim(), self.vertices.len(), facets.len());
        for v in &self.vertices {
            let c: Vec<String> = v.coords.iter().map(|x| x.to_string()).collect();
            s.push_str(&c.join(" "));
            s.push('\n');
        }
        for f in facets {
            let idx: Vec<String> = f.vertices.ones().map(|i| i.to_string()).collect();
            s.push_str(&format!("{} {}\n", idx.len(), idx.join(" ")));
        }
        s
    }
}

/// J(G′) sitting inside J(G) as the face x_Φ = 0.
#[derive(Debug, Clone)]
pub struct FaceEmbedding {
    /// Index into J(G)'s vertex list for each vertex of J(G′).
    pub vertex_map: Vec<usize>,
    pub source: JewelPolytope<Rational>,
    pub target: JewelPolytope<Rational>,
}

pub fn face_of_collapse(
    c: &ForestCollapse,
    sched: &TruncationSchedule<Rational>,
) -> Result<FaceEmbedding, JewelError> {
    let rank = c.source.rank_h1(c.source.all());
    if sched.rank() != rank {
        return Err(JewelError::MismatchedSchedule { schedule: sched.rank(), graph: rank });
    }
    let source = JewelPolytope::build(&c.source, sched)?;
    let target = JewelPolytope::build(&c.target, sched)?;
    let mut vertex_map = Vec::with_capacity(target.vertices.len());
    for v in &target.vertices {
        let padded = pad_coords(c, &v.coords);
        let i = source
            .find_vertex(&padded)
            .ok_or_else(|| JewelError::FaceMismatch(format!("{padded:?} is not a vertex of J(G)")))?;
        vertex_map.push(i);
    }
    let mut expected: Vec<usize> = source
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| c.forest.iter().all(|e| v.coords[e] == Rational::from_ratio(0, 1)))
        .map(|(i, _)| i)
        .collect();
    let mut got = vertex_map.clone();
    expected.sort_unstable();
    got.sort_unstable();
    if expected != got {
        return Err(JewelError::FaceMismatch(format!("face x_Φ = 0 has vertices {expected:?}, image is {got:?}")));
    }
    Ok(FaceEmbedding { vertex_map, source, target })
}

/// Coordinates on G′ extended by zero over the collapsed forest.
pub fn pad_coords<T: Scalar>(c: &ForestCollapse, x: &[T]) -> Vec<T> {
    c.relabel.iter().map(|r| r.map_or_else(T::zero, |t| x[t].clone())).collect()
}
