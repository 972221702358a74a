use jewelbox_core::graphs::*;
use jewelbox_core::jewel::*;
use jewelbox_core::{Rational, Scalar};
use proptest::prelude::*;

fn corpus() -> Vec<Graph> {
    valid_graph_corpus(2, 5)
}

/// Graphs small enough for the brute-force vertex oracle.
fn oracle_corpus() -> Vec<Graph> {
    let mut v: Vec<Graph> = corpus().into_iter().filter(|g| g.rank_h1(g.all()) <= 3).collect();
    v.push(Graph::rose(4));
    v
}

fn rank(g: &Graph) -> usize {
    g.rank_h1(g.all())
}

#[test]
fn unions_of_cores_are_cores() {
    for g in corpus() {
        let cores = g.enumerate_cores().unwrap();
        for &a in &cores {
            for &b in &cores {
                assert!(g.is_core(a.union(b)), "{:?}: {a} ∪ {b}", g.edges());
            }
        }
    }
}

#[test]
fn proper_core_inclusions_drop_rank() {
    for g in corpus() {
        let cores = g.enumerate_cores().unwrap();
        for &a in &cores {
            for &b in &cores {
                if a != b && a.is_subset(b) {
                    assert!(g.rank_h1(a) < g.rank_h1(b));
                }
            }
        }
    }
}

#[test]
fn collapses_keep_rank_and_sections_are_sections() {
    for g in corpus() {
        for f in g.enumerate_forests().unwrap() {
            let c = g.collapse(f).unwrap();
            assert_eq!(rank(&c.target), rank(&g));
            for a2 in c.target.enumerate_cores().unwrap() {
                let a = c.core_section(a2).unwrap();
                assert!(g.is_core(a));
                assert_eq!(c.image(a), a2);
                assert_eq!(g.rank_h1(a), c.target.rank_h1(a2));
            }
        }
    }
}

proptest! {
    #[test]
    fn core_of_is_monotone(gi in 0usize..15, s in any::<u32>(), t in any::<u32>()) {
        let cs = corpus();
        let g = &cs[gi % cs.len()];
        let mask = g.all().0;
        let (s, t) = (EdgeSet(s & mask), EdgeSet(t & mask));
        let u = s.union(t);
        prop_assert!(g.core_of(s).is_subset(g.core_of(u)));
        prop_assert!(g.core_of(t).is_subset(g.core_of(u)));
        prop_assert!(g.core_of(s).is_subset(s));
        prop_assert_eq!(g.core_of(g.core_of(s)), g.core_of(s));
    }
}

fn same_set(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

#[test]
fn combinatorial_vertices_match_oracle() {
    for g in oracle_corpus() {
        let s = make_schedule(rank(&g));
        let p = h_representation(&g, &s).unwrap();
        let o = vertices_oracle(p.constraints(), g.edge_count()).unwrap();
        let c: Vec<_> = vertices_combinatorial(&g, &s).unwrap().into_iter().map(|v| v.coords).collect();
        assert!(same_set(&o, &c), "{:?}", g.edges());
    }
}

#[test]
fn vertices_sit_on_rose_faces_with_m_tight_constraints() {
    for g in corpus() {
        let j = JewelPolytope::build(&g, &make_schedule(rank(&g))).unwrap();
        let m = g.edge_count() - 1;
        let trees = g.spanning_trees().unwrap();
        for v in j.vertices() {
            let zeros = EdgeSet::from_edges((0..g.edge_count()).filter(|&i| v.coords[i] == Rational::from_ratio(0, 1)));
            assert!(trees.contains(&zeros), "{:?}", v.coords);
            assert_eq!(j.active_constraints(&v.coords).len(), m);
        }
    }
}

#[test]
fn face_chains_count_lattice_faces() {
    for g in corpus() {
        let j = JewelPolytope::build(&g, &make_schedule(rank(&g))).unwrap();
        let lat = j.face_lattice();
        for k in 0..g.edge_count() {
            assert_eq!(face_chains(&g, k).len(), lat.count_codim(k), "{:?} codim {k}", g.edges());
        }
    }
}

#[test]
fn shaving_depth_does_not_change_the_lattice() {
    for g in corpus() {
        let n = rank(&g);
        let a = JewelPolytope::build(&g, &make_schedule(n)).unwrap();
        let s = TruncationSchedule::<Rational>::geometric(n, 5, 1).unwrap();
        let b = JewelPolytope::build(&g, &s).unwrap();
        assert_eq!(a.face_lattice().f_vector(), b.face_lattice().f_vector());
        let ta: Vec<_> = a.vertices().iter().map(|v| (v.tree, v.petal_order.clone())).collect();
        let tb: Vec<_> = b.vertices().iter().map(|v| (v.tree, v.petal_order.clone())).collect();
        assert_eq!(ta, tb);
    }
}
