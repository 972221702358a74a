//! Faces of J(G) named by chains of tight inequalities: a forest of non-loop
//! singletons followed by a strictly nested run of proper cores.

use serde::Serialize;

use crate::graphs::{EdgeSet, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FaceChain {
    /// S_1, …, S_k: forest singletons first, then nested cores.
    pub sets: Vec<EdgeSet>,
    /// Number of forest singletons.
    pub t: usize,
    /// U_i = S_1 ∪ … ∪ S_i.
    pub unions: Vec<EdgeSet>,
    /// V_0 = Δ − U_k and V_i = U_{k+1−i} − U_{k−i} for 1 ≤ i ≤ k − t.
    pub blocks: Vec<EdgeSet>,
    /// A_0 = Δ and A_i = S_{k+1−i}.
    pub cores: Vec<EdgeSet>,
}

impl FaceChain {
    fn new(all: EdgeSet, forest: &[usize], nested: &[EdgeSet]) -> FaceChain {
        let mut sets: Vec<EdgeSet> = forest.iter().map(|&e| EdgeSet::single(e)).collect();
        sets.extend_from_slice(nested);
        let mut unions = Vec::with_capacity(sets.len());
        let mut u = EdgeSet::EMPTY;
        for s in &sets {
            u = u.union(*s);
            unions.push(u);
        }
        let k = sets.len();
        let t = forest.len();
        let r = k - t;
        let at = |i: usize| if i == 0 { EdgeSet::EMPTY } else { unions[i - 1] };
        let mut blocks = vec![all.minus(at(k))];
        let mut cores = vec![all];
        for i in 1..=r {
            blocks.push(at(k + 1 - i).minus(at(k - i)));
            cores.push(sets[k - i]);
        }
        FaceChain { sets, t, unions, blocks, cores }
    }

    /// Orders tight constraints into a chain: non-loop singletons first, then
    /// cores by size. The face conditions are not checked.
    pub fn from_sets(g: &Graph, sets: &[EdgeSet]) -> FaceChain {
        let is_forest_single = |s: &EdgeSet| s.len() == 1 && s.iter().all(|e| !g.is_loop(e));
        let mut forest: Vec<usize> = sets.iter().filter(|s| is_forest_single(s)).flat_map(|s| s.iter()).collect();
        forest.sort_unstable();
        let mut nested: Vec<EdgeSet> = sets.iter().copied().filter(|s| !is_forest_single(s)).collect();
        nested.sort_by_key(|s| (s.len(), s.canonical_key()));
        FaceChain::new(g.all(), &forest, &nested)
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn r(&self) -> usize {
        self.sets.len() - self.t
    }
}

/// All chains of length `k` meeting the three face conditions.
pub fn face_chains(g: &Graph, k: usize) -> Vec<FaceChain> {
    let all = g.all();
    let cores: Vec<EdgeSet> = g.enumerate_cores().unwrap_or_default().into_iter().filter(|&c| c != all).collect();
    let non_loops: Vec<usize> = (0..g.edge_count()).filter(|&e| !g.is_loop(e)).collect();
    let mut out = Vec::new();
    let mut forest = Vec::new();
    forests(g, &non_loops, 0, k, &mut forest, &mut |f: &[usize]| {
        let fs = EdgeSet::from_edges(f.iter().copied());
        let mut nested = Vec::new();
        extend(g, all, &cores, fs, k - f.len(), &mut nested, &mut |n: &[EdgeSet]| {
            out.push(FaceChain::new(all, f, n));
        });
    });
    out.sort_by(|a, b| {
        let ka: Vec<_> = a.sets.iter().map(|s| s.canonical_key()).collect();
        let kb: Vec<_> = b.sets.iter().map(|s| s.canonical_key()).collect();
        ka.cmp(&kb)
    });
    out
}

fn forests(
    g: &Graph,
    cands: &[usize],
    start: usize,
    k: usize,
    cur: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    f(cur);
    if cur.len() == k {
        return;
    }
    for i in start..cands.len() {
        cur.push(cands[i]);
        if g.is_forest(EdgeSet::from_edges(cur.iter().copied())) {
            forests(g, cands, i + 1, k, cur, f);
        }
        cur.pop();
    }
}

fn extend(
    g: &Graph,
    all: EdgeSet,
    cores: &[EdgeSet],
    forest: EdgeSet,
    remaining: usize,
    cur: &mut Vec<EdgeSet>,
    f: &mut dyn FnMut(&[EdgeSet]),
) {
    if remaining == 0 {
        let u = cur.last().map_or(forest, |c| forest.union(*c));
        if u != all {
            f(cur);
        }
        return;
    }
    for &c in cores {
        if let Some(&prev) = cur.last() {
            if !(prev.is_subset(c) && prev != c) {
                continue;
            }
        }
        let u = forest.union(c);
        if u == all || g.core_of(u) != c {
            continue;
        }
        cur.push(c);
        extend(g, all, cores, forest, remaining - 1, cur, f);
        cur.pop();
    }
}
