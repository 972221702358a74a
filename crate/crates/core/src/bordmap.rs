//! Maps from a jewel onto its bordification cell: smoothing functions g_r,
//! the coordinate maps π_A and p_A, the product p_𝒞, and numerical checks of
//! their face, chart and commuting behaviour.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graphs::{EdgeSet, ForestCollapse, Graph, GraphError};
use crate::jewel::{
    face_chains, h_representation, pad_coords, x_of, FaceChain, JewelError, JewelPolytope, TruncationSchedule,
};
use num_traits::Zero;

use crate::scalar::{convert, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BordError {
    #[error("g_{r} evaluated at {t}, outside [c_{r}, 1]")]
    OutOfDomain { r: usize, t: f64 },
    #[error("no smoothing function of rank {0}")]
    BadRank(usize),
    #[error("point is not in the jewel: {0}")]
    NotInJewel(String),
    #[error("π_{0} vanishes identically")]
    ZeroVector(EdgeSet),
    #[error("{0} is not a core subgraph")]
    NotCore(EdgeSet),
    #[error("sample lies within {margin:e} of the face boundary")]
    DegenerateSample { margin: f64 },
    #[error(transparent)]
    Jewel(#[from] JewelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// g_r(t) = h((t − c_r)/(c_{r+1} − c_r)) with h(u) = 3u² − 2u³ clamped to [0, 1].
#[derive(Debug, Clone)]
pub struct SmoothingFamily<T> {
    schedule: TruncationSchedule<T>,
}

impl<T: Scalar> SmoothingFamily<T> {
    pub fn new(schedule: TruncationSchedule<T>) -> Self {
        SmoothingFamily { schedule }
    }

    pub fn schedule(&self) -> &TruncationSchedule<T> {
        &self.schedule
    }

    /// Value and derivative of g_r at t.
    pub fn eval(&self, r: usize, t: &T) -> Result<(T, T), BordError> {
        if r == 0 || r > self.schedule.rank() {
            return Err(BordError::BadRank(r));
        }
        let lo = self.schedule.c(r).clone();
        let hi = self.schedule.c(r + 1).clone();
        if !t.approx_ge(&lo) || !T::one().approx_ge(t) {
            return Err(BordError::OutOfDomain { r, t: t.to_f64() });
        }
        if *t <= lo {
            return Ok((T::zero(), T::zero()));
        }
        if *t >= hi {
            return Ok((T::one(), T::zero()));
        }
        let w = hi - lo.clone();
        let u = (t.clone() - lo) / w.clone();
        let three = T::from_ratio(3, 1);
        let two = T::from_ratio(2, 1);
        let six = T::from_ratio(6, 1);
        let val = u.clone() * u.clone() * (three - two * u.clone());
        let der = six * u.clone() * (T::one() - u) / w;
        Ok((val, der))
    }
}

/// A point of the closed simplex on `set`, coordinates in increasing edge order
/// summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectivePoint<T> {
    pub set: EdgeSet,
    pub coords: Vec<T>,
}

impl<T: Scalar> ProjectivePoint<T> {
    /// Normalizes homogeneous coordinates.
    pub fn from_homogeneous(set: EdgeSet, v: Vec<T>) -> Result<Self, BordError> {
        let sum = v.iter().fold(T::zero(), |a, b| a + b.clone());
        if sum.is_zero() {
            return Err(BordError::ZeroVector(set));
        }
        Ok(ProjectivePoint { set, coords: v.into_iter().map(|c| c / sum.clone()).collect() })
    }

    pub fn get(&self, edge: usize) -> Option<&T> {
        self.set.iter().position(|e| e == edge).map(|i| &self.coords[i])
    }

    /// Edges whose coordinate is zero (up to the scalar tolerance).
    pub fn zeros(&self) -> EdgeSet {
        EdgeSet::from_edges(self.set.iter().zip(&self.coords).filter(|(_, c)| c.approx_zero()).map(|(e, _)| e))
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a.clone() - b.clone()).abs().to_f64()).fold(0.0, f64::max)
    }
}

/// For each core A, the edges where p_A vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StratumSignature(pub Vec<(EdgeSet, EdgeSet)>);

/// The maps π_A, p_A and p_𝒞 for one graph and schedule.
#[derive(Debug, Clone)]
pub struct BordMap<T> {
    graph: Graph,
    /// All cores of G, Δ included.
    cores: Vec<EdgeSet>,
    ranks: Vec<usize>,
    jewel: JewelPolytope<T>,
    family: SmoothingFamily<T>,
}

impl<T: Scalar> BordMap<T> {
    pub fn new(g: &Graph, schedule: &TruncationSchedule<T>) -> Result<Self, BordError> {
        let jewel = h_representation(g, schedule)?;
        let cores = jewel.cores().to_vec();
        let ranks = cores.iter().map(|&c| g.rank_h1(c)).collect();
        Ok(BordMap { graph: g.clone(), cores, ranks, jewel, family: SmoothingFamily::new(schedule.clone()) })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cores(&self) -> &[EdgeSet] {
        &self.cores
    }

    pub fn family(&self) -> &SmoothingFamily<T> {
        &self.family
    }

    pub fn check_point(&self, x: &[T]) -> Result<(), BordError> {
        if x.len() != self.graph.edge_count() {
            return Err(BordError::NotInJewel(format!("expected {} coordinates, got {}", self.graph.edge_count(), x.len())));
        }
        let sum = x_of(x, self.graph.all());
        if !sum.approx_eq(&T::one()) {
            return Err(BordError::NotInJewel(format!("coordinates sum to {sum}")));
        }
        if let Some(i) = x.iter().position(|v| !v.approx_ge(&T::zero())) {
            return Err(BordError::NotInJewel(format!("x_{i} = {} is negative", x[i])));
        }
        if !self.jewel.contains(x) {
            return Err(BordError::NotInJewel("violates a core inequality".into()));
        }
        Ok(())
    }

    /// g_S(x_S) for every core S, in the order of `cores()`.
    fn factors(&self, x: &[T]) -> Result<Vec<T>, BordError> {
        self.cores
            .iter()
            .zip(&self.ranks)
            .map(|(&s, &r)| self.family.eval(r, &x_of(x, s)).map(|(v, _)| v))
            .collect()
    }

    fn core_index(&self, a: EdgeSet) -> Result<usize, BordError> {
        self.cores.iter().position(|&c| c == a).ok_or(BordError::NotCore(a))
    }

    fn pi_with(&self, a: EdgeSet, x: &[T], gs: &[T]) -> Vec<T> {
        a.iter()
            .map(|i| {
                self.cores
                    .iter()
                    .zip(gs)
                    .filter(|(s, _)| s.contains(i) && !a.is_subset(**s))
                    .fold(x[i].clone(), |acc, (_, g)| acc * g.clone())
            })
            .collect()
    }

    /// π_A(x)_i = x_i ∏ g_S(x_S) over cores S containing i but not all of A.
    pub fn pi(&self, a: EdgeSet, x: &[T]) -> Result<Vec<T>, BordError> {
        self.core_index(a)?;
        self.check_point(x)?;
        let gs = self.factors(x)?;
        Ok(self.pi_with(a, x, &gs))
    }

    pub fn p(&self, a: EdgeSet, x: &[T]) -> Result<ProjectivePoint<T>, BordError> {
        ProjectivePoint::from_homogeneous(a, self.pi(a, x)?)
    }

    /// p_𝒞(x): one point per core, in the order of `cores()`.
    pub fn p_all(&self, x: &[T]) -> Result<Vec<ProjectivePoint<T>>, BordError> {
        self.check_point(x)?;
        let gs = self.factors(x)?;
        self.cores.iter().map(|&a| ProjectivePoint::from_homogeneous(a, self.pi_with(a, x, &gs))).collect()
    }

    /// The chain of constraints tight at x.
    pub fn classify(&self, x: &[T]) -> Result<FaceChain, BordError> {
        self.check_point(x)?;
        let tight: Vec<EdgeSet> =
            self.jewel.active_constraints(x).into_iter().map(|i| self.jewel.constraints()[i].set).collect();
        Ok(FaceChain::from_sets(&self.graph, &tight))
    }

    pub fn stratum_signature(&self, x: &[T]) -> Result<StratumSignature, BordError> {
        Ok(StratumSignature(self.p_all(x)?.into_iter().map(|p| (p.set, p.zeros())).collect()))
    }
}

/// The zero sets forced on the cores A_ℓ of a face: A_ℓ − V_ℓ.
pub fn predicted_zeros(chain: &FaceChain) -> Vec<(EdgeSet, EdgeSet)> {
    chain.cores.iter().zip(&chain.blocks).map(|(&a, &v)| (a, a.minus(v))).collect()
}

/// Seeded generator for the `index`-th unit of work.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Vertices of J(G) lying on the face cut out by `chain`.
pub fn face_vertices(jewel: &JewelPolytope<Rational>, chain: &FaceChain) -> Vec<Vec<Rational>> {
    let c = |s: EdgeSet| -> Rational {
        if s.len() == 1 && !jewel.graph().is_loop(s.iter().next().unwrap_or(0)) {
            Rational::from_ratio(0, 1)
        } else {
            jewel.schedule().c(jewel.graph().rank_h1(s)).clone()
        }
    };
    jewel
        .vertices()
        .iter()
        .filter(|v| chain.sets.iter().all(|&s| x_of(&v.coords, s) == c(s)))
        .map(|v| v.coords.clone())
        .collect()
}

/// A relative-interior point: every vertex weighted by an integer in 1..=16.
pub fn sample_relint(vertices: &[Vec<Rational>], rng: &mut impl Rng) -> Vec<Rational> {
    let weights: Vec<i64> = vertices.iter().map(|_| rng.gen_range(1..=16)).collect();
    let total: i64 = weights.iter().sum();
    let m = vertices.first().map_or(0, Vec::len);
    (0..m)
        .map(|i| {
            vertices.iter().zip(&weights).fold(Rational::from_ratio(0, 1), |acc, (v, &w)| {
                acc + v[i].clone() * Rational::from_ratio(w, total)
            })
        })
        .collect()
}

fn to_f64(x: &[Rational]) -> Vec<f64> {
    x.iter().map(convert::<Rational, f64>).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct NonzeroReport {
    pub vertices: usize,
    pub evaluations: usize,
    /// Vertices where some π_A vanished, with the offending core.
    pub vanishing: Vec<(Vec<String>, EdgeSet)>,
    /// Vertices whose zero pattern differs from A_ℓ − V_ℓ of their chain.
    pub pattern_mismatches: usize,
    pub pass: bool,
}

/// π_A ≠ 0 for every core A at every vertex, in exact arithmetic, plus the
/// zero pattern of p_{A_ℓ} at each vertex against its maximal chain.
pub fn check_nonzero(jewel: &JewelPolytope<Rational>) -> Result<NonzeroReport, BordError> {
    let bm = BordMap::new(jewel.graph(), jewel.schedule())?;
    let mut report =
        NonzeroReport { vertices: 0, evaluations: 0, vanishing: Vec::new(), pattern_mismatches: 0, pass: true };
    for v in jewel.vertices() {
        report.vertices += 1;
        let gs = bm.factors(&v.coords)?;
        for &a in bm.cores() {
            report.evaluations += 1;
            let z = bm.pi_with(a, &v.coords, &gs);
            if z.iter().all(|c| c.is_zero()) {
                report.vanishing.push((v.coords.iter().map(crate::scalar::rational_to_string).collect(), a));
            }
        }
        if report.vanishing.is_empty() {
            let chain = FaceChain::from_sets(jewel.graph(), &v.chain);
            let sig = bm.stratum_signature(&v.coords)?;
            let got: HashMap<EdgeSet, EdgeSet> = sig.0.into_iter().collect();
            if predicted_zeros(&chain).iter().any(|(a, z)| got.get(a) != Some(z)) {
                report.pattern_mismatches += 1;
            }
        }
    }
    report.pass = report.vanishing.is_empty() && report.pattern_mismatches == 0;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct CommuteReport {
    pub forest: EdgeSet,
    pub samples: usize,
    pub cores_compared: usize,
    pub max_discrepancy: f64,
    pub pass: bool,
}

pub const COMMUTE_TOLERANCE: f64 = 1e-10;

/// Compares p_A on J(G) with p_{A′} on the face J(G′) for A = core(A′ ∪ Φ),
/// at `samples` random points of J(G′).
pub fn check_commute(c: &ForestCollapse, samples: usize, seed: u64) -> Result<CommuteReport, BordError> {
    let n = c.source.rank_h1(c.source.all());
    let sched_q = crate::jewel::make_schedule(n);
    let sched_f: TruncationSchedule<f64> =
        TruncationSchedule::from_constants(n, sched_q.constants().iter().map(convert::<Rational, f64>).collect())?;
    let target = JewelPolytope::<Rational>::build(&c.target, &sched_q)?;
    let verts = target.vertex_coords();
    let big = BordMap::new(&c.source, &sched_f)?;
    let small = BordMap::new(&c.target, &sched_f)?;
    let pairs: Vec<(EdgeSet, EdgeSet)> = small
        .cores()
        .iter()
        .map(|&a2| c.core_section(a2).map(|a| (a, a2)))
        .collect::<Result<_, _>>()?;
    let worst: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|s| -> Result<f64, BordError> {
            let mut rng = sample_rng(seed, s as u64);
            let xq = sample_relint(&verts, &mut rng);
            let x2 = to_f64(&xq);
            let x = to_f64(&pad_coords(c, &xq));
            let mut worst = 0.0f64;
            for &(a, a2) in &pairs {
                let pa = big.p(a, &x)?;
                let pa2 = small.p(a2, &x2)?;
                for (e, v) in a.iter().zip(&pa.coords) {
                    let expect = c.relabel[e].and_then(|t| pa2.get(t).copied()).unwrap_or(0.0);
                    worst = worst.max((v - expect).abs());
                }
            }
            Ok(worst)
        })
        .collect::<Result<_, _>>()?;
    let max_discrepancy = worst.into_iter().fold(0.0, f64::max);
    Ok(CommuteReport {
        forest: c.forest,
        samples,
        cores_compared: pairs.len(),
        max_discrepancy,
        pass: max_discrepancy < COMMUTE_TOLERANCE,
    })
}

/// Chart on the face Q: Z_i = z_i / z_ℓ with z = π_{A_ℓ}(x), one base edge ℓ
/// (the smallest) per block V_ℓ.
#[derive(Debug, Clone)]
pub struct FaceChart {
    pub chain: FaceChain,
    /// (block index, base edge, edge) per chart coordinate.
    pub coords: Vec<(usize, usize, usize)>,
}

impl FaceChart {
    pub fn new(chain: &FaceChain) -> FaceChart {
        let mut coords = Vec::new();
        for (b, v) in chain.blocks.iter().enumerate() {
            let mut it = v.iter();
            if let Some(base) = it.next() {
                coords.extend(it.map(|i| (b, base, i)));
            }
        }
        FaceChart { chain: chain.clone(), coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn eval(&self, bm: &BordMap<f64>, x: &[f64]) -> Result<Vec<f64>, BordError> {
        let gs = bm.factors(x)?;
        let z: Vec<Vec<f64>> = self.chain.cores.iter().map(|&a| bm.pi_with(a, x, &gs)).collect();
        let at = |b: usize, e: usize| {
            let a = self.chain.cores[b];
            z[b][a.iter().position(|i| i == e).expect("block inside its core")]
        };
        Ok(self.coords.iter().map(|&(b, base, i)| at(b, i) / at(b, base)).collect())
    }

    /// Tangent direction e_i − e_ℓ of the j-th coordinate.
    fn direction(&self, j: usize, m: usize) -> Vec<f64> {
        let (_, base, i) = self.coords[j];
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        v[base] = -1.0;
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobianSample {
    pub dim: usize,
    /// Smallest singular value of diag(1/Z)·DZ.
    pub min_singular: f64,
    /// Largest entry of |FD − analytic| relative to the analytic matrix.
    pub fd_error: f64,
    pub step: f64,
}

pub const JACOBIAN_TOLERANCE: f64 = 1e-8;
pub const FD_STEP: f64 = 1e-6;

/// Singular values of the log-scaled chart Jacobian at a relative-interior
/// point of Q, by central differences, with the closed form alongside.
pub fn jacobian_check(bm: &BordMap<f64>, chain: &FaceChain, x: &[f64]) -> Result<JacobianSample, BordError> {
    bm.check_point(x)?;
    let chart = FaceChart::new(chain);
    let d = chart.dim();
    let m = x.len();
    let dead = if chain.t == 0 { EdgeSet::EMPTY } else { chain.unions[chain.t - 1] };
    let live = (0..x.len()).filter(|&i| !dead.contains(i)).map(|i| x[i]).fold(1.0f64, f64::min);
    let h = FD_STEP * live;
    // slack to every constraint that is not part of the chain
    let sched = bm.family().schedule();
    let mut margin = f64::INFINITY;
    for (s, &r) in bm.cores.iter().zip(&bm.ranks) {
        if *s == bm.graph.all() || chain.sets.contains(s) {
            continue;
        }
        let xs = x_of(x, *s);
        margin = margin.min(xs - sched.c(r));
    }
    for i in 0..m {
        if !bm.graph.is_loop(i) && !chain.sets.contains(&EdgeSet::single(i)) {
            margin = margin.min(x[i]);
        }
    }
    if margin <= 4.0 * h {
        return Err(BordError::DegenerateSample { margin });
    }
    if d == 0 {
        return Ok(JacobianSample { dim: 0, min_singular: f64::INFINITY, fd_error: 0.0, step: h });
    }
    let z0 = chart.eval(bm, x)?;
    let mut fd = DMatrix::<f64>::zeros(d, d);
    for j in 0..d {
        let v = chart.direction(j, m);
        let plus: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + h * b).collect();
        let minus: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a - h * b).collect();
        let zp = chart.eval(bm, &plus)?;
        let zm = chart.eval(bm, &minus)?;
        for i in 0..d {
            fd[(i, j)] = (zp[i] - zm[i]) / (2.0 * h) / z0[i];
        }
    }
    let exact = analytic_log_jacobian(bm, &chart, x)?;
    let scale = exact.amax().max(f64::MIN_POSITIVE);
    let fd_error = (&fd - &exact).amax() / scale;
    let min_singular = fd.singular_values().min();
    Ok(JacobianSample { dim: d, min_singular, fd_error, step: h })
}

/// Σ_S (g̃_S′/g̃_S)(x_S) ⟨e_{iℓ}, 1_S⟩⟨e_{jℓ′}, 1_S⟩ over cores and forest
/// singletons, where g̃ is t for a forest edge and t·g for a loop.
pub fn analytic_log_jacobian(bm: &BordMap<f64>, chart: &FaceChart, x: &[f64]) -> Result<DMatrix<f64>, BordError> {
    let d = chart.dim();
    let m = x.len();
    let mut terms: Vec<(EdgeSet, f64)> = Vec::new();
    for (&s, &r) in bm.cores.iter().zip(&bm.ranks) {
        let t = x_of(x, s);
        let (g, dg) = bm.family.eval(r, &t)?;
        if g <= 0.0 {
            continue;
        }
        if s.len() == 1 {
            // loop: g̃ = t·g
            terms.push((s, (g + t * dg) / (t * g)));
        } else {
            terms.push((s, dg / g));
        }
    }
    for i in 0..m {
        if !bm.graph.is_loop(i) && x[i] > 0.0 {
            terms.push((EdgeSet::single(i), 1.0 / x[i]));
        }
    }
    let mut out = DMatrix::<f64>::zeros(d, d);
    for (s, w) in terms {
        let a: Vec<f64> = (0..d).map(|j| chart.direction(j, m).iter().enumerate().filter(|(e, _)| s.contains(*e)).map(|(_, v)| v).sum()).collect();
        if a.iter().all(|v| *v == 0.0) {
            continue;
        }
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += w * a[i] * a[j];
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobianReport {
    pub faces: usize,
    pub samples: usize,
    pub degenerate: usize,
    pub min_singular: f64,
    pub max_fd_error: f64,
    pub worst_face: Option<Vec<EdgeSet>>,
    pub pass: bool,
}

/// All faces of positive dimension, chains of length k for 0 ≤ k < m.
pub fn positive_dim_faces(g: &Graph) -> Vec<FaceChain> {
    let m = g.edge_count() - 1;
    (0..m).flat_map(|k| face_chains(g, k)).collect()
}

pub fn all_faces(g: &Graph) -> Vec<FaceChain> {
    let m = g.edge_count() - 1;
    (0..=m).flat_map(|k| face_chains(g, k)).collect()
}

fn float_schedule(n: usize) -> Result<TruncationSchedule<f64>, BordError> {
    let q = crate::jewel::make_schedule(n);
    Ok(TruncationSchedule::from_constants(n, q.constants().iter().map(convert::<Rational, f64>).collect())?)
}

/// `samples` interior points on every positive-dimensional face of J(G).
pub fn check_jacobians(g: &Graph, samples: usize, seed: u64) -> Result<JacobianReport, BordError> {
    let n = g.rank_h1(g.all());
    let jewel = JewelPolytope::<Rational>::build(g, &crate::jewel::make_schedule(n))?;
    let bm = BordMap::new(g, &float_schedule(n)?)?;
    let faces = positive_dim_faces(g);
    let per_face: Vec<(usize, f64, f64)> = faces
        .par_iter()
        .enumerate()
        .map(|(fi, chain)| -> Result<(usize, f64, f64), BordError> {
            let verts = face_vertices(&jewel, chain);
            let mut rng = sample_rng(seed, fi as u64);
            let (mut degenerate, mut min_s, mut max_e) = (0, f64::INFINITY, 0.0f64);
            for _ in 0..samples {
                let x = to_f64(&sample_relint(&verts, &mut rng));
                match jacobian_check(&bm, chain, &x) {
                    Ok(s) => {
                        min_s = min_s.min(s.min_singular);
                        max_e = max_e.max(s.fd_error);
                    }
                    Err(BordError::DegenerateSample { .. }) => degenerate += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok((degenerate, min_s, max_e))
        })
        .collect::<Result<_, _>>()?;
    let mut report = JacobianReport {
        faces: faces.len(),
        samples: faces.len() * samples,
        degenerate: 0,
        min_singular: f64::INFINITY,
        max_fd_error: 0.0,
        worst_face: None,
        pass: true,
    };
    for (chain, (deg, s, e)) in faces.iter().zip(per_face) {
        report.degenerate += deg;
        report.max_fd_error = report.max_fd_error.max(e);
        if s < report.min_singular {
            report.min_singular = s;
            report.worst_face = Some(chain.sets.clone());
        }
    }
    report.pass = report.min_singular > JACOBIAN_TOLERANCE && report.degenerate == 0;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct StrataReport {
    pub faces: usize,
    pub samples: usize,
    /// Faces whose samples disagreed on their signature.
    pub nonconstant: usize,
    /// Pairs of faces sharing a signature.
    pub collisions: usize,
    /// Faces whose signature is not A_ℓ − V_ℓ on the chain cores.
    pub pattern_mismatches: usize,
    /// Samples whose tight constraints do not name the face they came from.
    pub misclassified: usize,
    pub pass: bool,
}

/// Exact signatures at `samples` relative-interior points of every face.
pub fn check_strata(g: &Graph, samples: usize, seed: u64) -> Result<StrataReport, BordError> {
    let n = g.rank_h1(g.all());
    let sched = crate::jewel::make_schedule(n);
    let jewel = JewelPolytope::<Rational>::build(g, &sched)?;
    let bm = BordMap::new(g, &sched)?;
    let faces = all_faces(g);
    let per_face: Vec<(Option<StratumSignature>, bool, bool, usize)> = faces
        .par_iter()
        .enumerate()
        .map(|(fi, chain)| -> Result<_, BordError> {
            let verts = face_vertices(&jewel, chain);
            let mut rng = sample_rng(seed, fi as u64);
            let mut sigs = Vec::new();
            let mut misclassified = 0;
            for _ in 0..samples.max(1) {
                let x = sample_relint(&verts, &mut rng);
                if bm.classify(&x)?.sets != chain.sets {
                    misclassified += 1;
                }
                sigs.push(bm.stratum_signature(&x)?);
            }
            let constant = sigs.windows(2).all(|w| w[0] == w[1]);
            let sig = sigs.into_iter().next();
            let pattern_ok = sig.as_ref().is_some_and(|s| {
                let got: HashMap<EdgeSet, EdgeSet> = s.0.iter().copied().collect();
                predicted_zeros(chain).iter().all(|(a, z)| got.get(a) == Some(z))
            });
            Ok((sig, constant, pattern_ok, misclassified))
        })
        .collect::<Result<_, _>>()?;
    let mut report = StrataReport {
        faces: faces.len(),
        samples: faces.len() * samples.max(1),
        nonconstant: 0,
        collisions: 0,
        pattern_mismatches: 0,
        misclassified: 0,
        pass: true,
    };
    let mut seen: HashMap<StratumSignature, usize> = HashMap::new();
    for (fi, (sig, constant, pattern_ok, mis)) in per_face.into_iter().enumerate() {
        report.misclassified += mis;
        report.nonconstant += usize::from(!constant);
        report.pattern_mismatches += usize::from(!pattern_ok);
        if let Some(s) = sig {
            if seen.insert(s, fi).is_some() {
                report.collisions += 1;
            }
        }
    }
    report.pass = report.nonconstant == 0 && report.collisions == 0 && report.pattern_mismatches == 0 && report.misclassified == 0;
    Ok(report)
}
