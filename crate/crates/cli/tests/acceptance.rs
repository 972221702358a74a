//! Acceptance run: one PASS/FAIL line per criterion, each under its time limit.
//! Pass criterion numbers as arguments to run a subset.

use std::collections::BTreeMap;
use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jewelbox_core::bordmap::{check_commute, check_jacobians, check_nonzero, check_strata, COMMUTE_TOLERANCE, JACOBIAN_TOLERANCE};
use jewelbox_core::complexes::{build_z, enumerate_v_ideal_edges, sphericity_report, Pi1Result, VDecomposition};
use jewelbox_core::freegroup::{CyclicWord, Letter, Marking};
use jewelbox_core::graphs::{valid_graph_corpus, EdgeSet, Graph};
use jewelbox_core::jewel::{
    face_chains, face_of_collapse, h_representation, make_schedule, vertices_oracle, FaceLattice, JewelPolytope,
};
use jewelbox_core::morse::{compare_link_with_z, marking_ball, random_marking, MarkedRose};
use jewelbox_core::stars::{distinct_norms_witness, key_lemma_residual, norm_objects, DirSet, DotData, WordList};
use jewelbox_core::ExactJewel;

type Check = fn() -> Result<String, String>;

const CRITERIA: [(u32, &str, u64, Check); 9] = [
    (1, "permutohedron counts", 10, permutohedra),
    (2, "looped-digon fixture", 1, looped_digon),
    (3, "face-chain bijection", 300, face_chain_bijection),
    (4, "key lemma", 60, key_lemma),
    (5, "norm injectivity", 120, norm_injectivity),
    (6, "Z(V) sphericity", 600, zv_sphericity),
    (7, "ascending links", 900, ascending_links),
    (8, "bordification maps", 600, bordmap_suite),
    (9, "reproducibility", 600, reproducibility),
];

fn main() {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, run) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let res = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = t.elapsed();
        let limit = Duration::from_secs(limit);
        let (ok, detail) = match res {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {id} ({name}): {detail} [{:.1}s of {}s]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rank(g: &Graph) -> usize {
    g.rank_h1(g.all())
}

fn sorted(mut v: Vec<Vec<jewelbox_core::Rational>>) -> Vec<Vec<jewelbox_core::Rational>> {
    v.sort();
    v
}

fn permutohedra() -> Result<String, String> {
    let mut counts = Vec::new();
    for n in 2..=5usize {
        let g = Graph::rose(n);
        let s = make_schedule(n);
        let j: ExactJewel = JewelPolytope::build(&g, &s).map_err(|e| e.to_string())?;
        let comb = sorted(j.vertices().iter().map(|v| v.coords.clone()).collect());
        let p = h_representation(&g, &s).map_err(|e| e.to_string())?;
        let oracle = sorted(vertices_oracle(p.constraints(), n).map_err(|e| e.to_string())?);
        let fact: usize = (1..=n).product();
        ensure!(comb.len() == fact, "rose({n}) has {} combinatorial vertices", comb.len());
        ensure!(comb == oracle, "rose({n}): oracle found {} vertices, not the same set", oracle.len());
        counts.push(comb.len());
    }
    let j3: ExactJewel = JewelPolytope::build(&Graph::rose(3), &make_schedule(3)).unwrap();
    let f = FaceLattice::compute(&j3).f_vector();
    ensure!(f == vec![6, 6], "rank-3 f-vector {f:?}");
    Ok(format!("vertices {counts:?} by both routes, rank-3 f-vector (6,6)"))
}

fn looped_digon() -> Result<String, String> {
    let g = Graph::looped_digon();
    let es = |v: &[usize]| EdgeSet::from_edges(v.iter().copied());
    let mut want = vec![es(&[0]), es(&[1]), es(&[2, 3]), es(&[0, 1]), es(&[1, 2, 3]), es(&[0, 2, 3])];
    let mut got: Vec<EdgeSet> = g.enumerate_cores().unwrap().into_iter().filter(|&c| c != g.all()).collect();
    want.sort_by_key(|s| s.0);
    got.sort_by_key(|s| s.0);
    ensure!(got == want, "proper cores {got:?}");
    let trees = g.spanning_trees().unwrap();
    ensure!(trees == vec![es(&[2]), es(&[3])], "maximal trees {trees:?}");
    let j: ExactJewel = JewelPolytope::build(&g, &make_schedule(3)).unwrap();
    ensure!(j.vertices().len() == 12, "{} vertices", j.vertices().len());
    let lattice = FaceLattice::compute(&j);
    for t in trees {
        let on_face: Vec<usize> = (0..12).filter(|&i| j.vertices()[i].tree == t).collect();
        ensure!(on_face.len() == 6, "rose face {t} holds {} vertices", on_face.len());
        let hexagon = lattice.faces_of_dim(2).iter().any(|f| f.vertices.ones().collect::<Vec<_>>() == on_face);
        ensure!(hexagon, "rose face {t} is not a 2-face on its six vertices");
        let emb = face_of_collapse(&g.collapse(t).unwrap(), &make_schedule(3)).map_err(|e| e.to_string())?;
        let f = FaceLattice::compute(&emb.target).f_vector();
        ensure!(f == vec![6, 6], "collapsed rose has f-vector {f:?}");
    }
    Ok("six proper cores, 2 maximal trees, 12 vertices, two hexagonal rose faces".into())
}

fn face_chain_bijection() -> Result<String, String> {
    let corpus = valid_graph_corpus(2, 5);
    ensure!(corpus.iter().any(|g| *g == Graph::rose(4)), "corpus misses the rank-4 rose");
    let mut faces = 0;
    for g in &corpus {
        let m = g.edge_count() - 1;
        let j: ExactJewel = JewelPolytope::build(g, &make_schedule(rank(g))).unwrap();
        let lattice = FaceLattice::compute(&j);
        for k in 0..=m {
            let chains = face_chains(g, k).len();
            let lat = lattice.count_codim(k);
            ensure!(chains == lat, "{:?}: {chains} chains of length {k}, lattice has {lat} faces", g.edges());
            faces += lat;
        }
        for v in j.vertices() {
            let active = j.active_constraints(&v.coords).len();
            ensure!(active == m, "{:?}: vertex with {active} tight constraints, expected {m}", g.edges());
        }
    }
    Ok(format!("{} graphs, {faces} faces matched codimension by codimension", corpus.len()))
}

fn dot_sources(n: usize, seed: u64) -> Vec<DotData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<DotData> = (0..5)
        .map(|i| DotData::from_marking(random_marking(n, 2 + i, &mut rng).marking(), &WordList::standard(n, 3)))
        .collect();
    for _ in 0..20 {
        let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
        v.push(DotData::random(n, 4, 9, &w, &mut rng));
    }
    v
}

fn key_lemma() -> Result<String, String> {
    let mut evaluated = 0usize;
    let check = |x, y, z, w, d: &DotData| -> Result<(), String> {
        let r = key_lemma_residual(x, y, z, w, d).map_err(|e| e.to_string())?;
        ensure!(r.is_zero(), "residual {r:?} on {x:?} {y:?} {z:?} {w:?}");
        Ok(())
    };
    for dots in dot_sources(2, 1) {
        for code in 0..4u32.pow(4) {
            let p = partition(2, code as u64);
            check(p[0], p[1], p[2], p[3], &dots)?;
            evaluated += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [3usize, 4] {
        for dots in dot_sources(n, n as u64) {
            for _ in 0..10_000 {
                let p = partition(n, rng.gen());
                check(p[0], p[1], p[2], p[3], &dots)?;
                evaluated += 1;
            }
        }
    }
    Ok(format!("{evaluated} residuals zero: 10⁴ random partitions × 25 sources at ranks 3 and 4, exhaustive at rank 2"))
}

fn partition(n: usize, mut code: u64) -> [DirSet; 4] {
    let mut out = [DirSet::EMPTY; 4];
    for d in 0..2 * n {
        let i = (code % 4) as usize;
        out[i] = out[i].union(DirSet::single(d));
        code /= 4;
    }
    out
}

/// Edges of st(w) crossing `side`, counted from the letters: a_i joins ā_{i+1}.
fn crossings(w: &CyclicWord, side: DirSet) -> u64 {
    let dir = |l: Letter| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0);
    let l = w.letters();
    let k = l.len();
    (0..k).filter(|&i| side.contains(dir(l[i])) != side.contains(dir(l[(i + 1) % k]) ^ 1)).count() as u64
}

fn norm_injectivity() -> Result<String, String> {
    let mut cases: BTreeMap<&str, usize> = BTreeMap::new();
    for n in [2, 3] {
        let objs = norm_objects(n);
        let dots = DotData::distinguishing(&Marking::identity(n));
        for (i, a) in objs.iter().enumerate() {
            for b in &objs[i + 1..] {
                let w = distinct_norms_witness(n, a, b).map_err(|e| format!("{a} vs {b}: {e}"))?;
                let (va, vb) = (crossings(&w.word, a.side()), crossings(&w.word, b.side()));
                ensure!(va != vb, "{a} vs {b}: witness {} does not separate", w.word);
                ensure!((va, vb) == w.values, "{a} vs {b}: claimed {:?}, counted {:?}", w.values, (va, vb));
                let o = dots.compare_norms(a.side(), b.side()).map_err(|e| e.to_string())?;
                ensure!(o != std::cmp::Ordering::Equal, "{a} vs {b}: equal norms on the word list");
                *cases.entry(w.case).or_default() += 1;
            }
        }
    }
    let total: usize = cases.values().sum();
    let by_case: Vec<String> = cases.iter().map(|(c, k)| format!("{c} {k}")).collect();
    Ok(format!("{total} pairs separated at ranks 2 and 3; witnesses {}", by_case.join(", ")))
}

fn zv_sphericity() -> Result<String, String> {
    let mut summary = Vec::new();
    let (mut pi1_run, mut pi1_trivial) = (0, 0);
    for (m, k) in [(1usize, 2usize), (1, 3), (1, 4), (2, 0), (2, 1), (2, 2)] {
        let d = (2 * m + k) as isize - 4;
        let mut rng = ChaCha8Rng::seed_from_u64((10 * m + k) as u64);
        let mut sources: Vec<VDecomposition> = (0..50).map(|_| VDecomposition::random(m, k, 3, &mut rng)).collect();
        let n = m.max((2 * m + k).div_ceil(2)).max(2);
        let mut marked = 0;
        while marked < 20 {
            let rho = random_marking(n, rng.gen_range(0..6), &mut rng);
            if let Some(v) = VDecomposition::sample_from_marking(rho.marking(), m, k, 5, &mut rng).map_err(|e| e.to_string())? {
                sources.push(v);
                marked += 1;
            }
        }
        let (mut spheres, mut contractible) = (0, 0);
        for v in &sources {
            let (z, asc) = build_z(v).map_err(|e| e.to_string())?;
            let total = enumerate_v_ideal_edges(v).len();
            let r = sphericity_report(&z, d).map_err(|e| e.to_string())?;
            ensure!(r.dim_ok, "({m},{k}): dimension {} instead of {d}", r.dim);
            ensure!(r.vanishes_below, "({m},{k}): reduced homology below degree {d}: {:?}", r.homology.betti);
            if let Some(p) = &r.pi1 {
                pi1_run += 1;
                pi1_trivial += usize::from(*p == Pi1Result::Trivial);
            }
            if m == 1 {
                let full = asc.len() == total;
                if full {
                    ensure!(r.homology.concentrated_in(d) && r.homology.reduced_betti(d) == 1, "({m},{k}): no descending edge but not a sphere");
                    spheres += 1;
                } else {
                    ensure!(r.homology.is_acyclic(), "({m},{k}): descending edge but homology {:?}", r.homology.betti);
                    contractible += 1;
                }
            }
        }
        summary.push(if m == 1 {
            format!("({m},{k}) {} sources: {spheres} spheres {contractible} contractible", sources.len())
        } else {
            format!("({m},{k}) {} sources", sources.len())
        });
    }
    Ok(format!("{}; π₁ checked {pi1_run} times, trivial {pi1_trivial}", summary.join(", ")))
}

fn ascending_links() -> Result<String, String> {
    let mut roses: Vec<MarkedRose> = marking_ball(2, 5);
    let ball = roses.len();
    roses.extend((0..10).map(|i| random_marking(3, 2 + i % 6, &mut ChaCha8Rng::seed_from_u64(100 + i as u64))));
    for rho in &roses {
        let c = compare_link_with_z(rho, 24).map_err(|e| format!("{:?}: {e}", rho.marking().to_strings()))?;
        ensure!(c.equal, "{:?}: link homology {:?} vs Z {:?}", rho.marking().to_strings(), c.link_homology.betti, c.z_homology.betti);
        ensure!(c.spherical, "{:?}: not spherical in degree {}", rho.marking().to_strings(), 2 * rho.rank() - 4);
    }
    Ok(format!("{ball} rank-2 roses within 5 Nielsen moves and 10 rank-3 roses agree with Z(ρ)"))
}

fn bordmap_suite() -> Result<String, String> {
    let corpus = valid_graph_corpus(2, 5);
    let (mut verts, mut collapses, mut worst_commute) = (0, 0, 0.0f64);
    let (mut strata_faces, mut jac_samples, mut min_sigma) = (0, 0, f64::INFINITY);
    for g in &corpus {
        let e = |x: jewelbox_core::bordmap::BordError| format!("{:?}: {x}", g.edges());
        let j: ExactJewel = JewelPolytope::build(g, &make_schedule(rank(g))).unwrap();
        let nz = check_nonzero(&j).map_err(e)?;
        ensure!(nz.pass, "(a) {:?}: {} vanishing, {} pattern mismatches", g.edges(), nz.vanishing.len(), nz.pattern_mismatches);
        verts += nz.vertices;
        for f in g.enumerate_forests().unwrap().into_iter().filter(|f| !f.is_empty()) {
            let r = check_commute(&g.collapse(f).unwrap(), 1000, 7).map_err(e)?;
            ensure!(r.max_discrepancy < COMMUTE_TOLERANCE, "(b) {:?} collapsing {f}: {:e}", g.edges(), r.max_discrepancy);
            worst_commute = worst_commute.max(r.max_discrepancy);
            collapses += 1;
        }
        let st = check_strata(g, 3, 7).map_err(e)?;
        ensure!(st.pass, "(c) {:?}: {st:?}", g.edges());
        strata_faces += st.faces;
        let jac = check_jacobians(g, 100, 7).map_err(e)?;
        ensure!(jac.pass && jac.min_singular > JACOBIAN_TOLERANCE, "(d) {:?}: {jac:?}", g.edges());
        jac_samples += jac.samples;
        min_sigma = min_sigma.min(jac.min_singular);
    }
    Ok(format!(
        "(a) {verts} vertices, (b) {collapses} collapses max {worst_commute:.1e}, (c) {strata_faces} faces distinct, (d) {jac_samples} samples min σ {min_sigma:.3}"
    ))
}

const SURFACE: &[&[&str]] = &[
    &["graph", "--graph", "looped-digon"],
    &["jewel", "build", "--graph", "rose:3"],
    &["jewel", "build", "--graph", "looped-digon", "--codim", "1"],
    &["complex", "zv", "--m", "1", "--k", "4", "--source", "dotdata", "--seed", "7", "--samples", "4"],
    &["complex", "zv", "--m", "2", "--k", "1", "--source", "marking", "--seed", "3", "--samples", "3"],
    &["complex", "zrho", "--marking", "[\"ab\",\"b\",\"c\"]"],
    &["morse", "asclink", "--rank", "2", "--marking", "[\"a\",\"b\"]"],
    &["morse", "asclink", "--rank", "3", "--samples", "2", "--seed", "5"],
    &["bordmap", "check", "--what", "nonzero", "--graph", "looped-digon"],
    &["bordmap", "check", "--what", "commute", "--graph", "looped-digon", "--samples", "50", "--seed", "4"],
    &["bordmap", "check", "--what", "jacobian", "--graph", "theta", "--samples", "10", "--seed", "4"],
    &["bordmap", "check", "--what", "strata", "--graph", "looped-digon", "--seed", "4"],
];

fn run_surface(root: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut out = Vec::new();
    for (i, args) in SURFACE.iter().enumerate() {
        let dir = root.join(format!("cmd{i}"));
        let o = Command::new(env!("CARGO_BIN_EXE_jewelbox"))
            .args(*args)
            .arg("--out")
            .arg(&dir)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(o.status.success(), "{args:?} exited with {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
        out.push((format!("{args:?} stdout"), o.stdout));
        let mut files: Vec<PathBuf> = fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
        files.sort();
        for f in files {
            out.push((format!("{args:?} {}", f.file_name().unwrap().to_string_lossy()), fs::read(&f).unwrap()));
        }
    }
    Ok(out)
}

fn reproducibility() -> Result<String, String> {
    let base = std::env::temp_dir().join(format!("jewelbox-acceptance-{}", std::process::id()));
    let a = run_surface(&base.join("a"))?;
    let b = run_surface(&base.join("b"))?;
    let _ = fs::remove_dir_all(&base);
    ensure!(a.len() == b.len(), "runs produced {} and {} artifacts", a.len(), b.len());
    for ((na, ba), (nb, bb)) in a.iter().zip(&b) {
        ensure!(na == nb && ba == bb, "{na} differs between runs");
    }
    Ok(format!("{} commands, {} artifacts byte-identical across two runs", SURFACE.len(), a.len()))
}
