//! Block decompositions V = {X_1, X̄_1, …, X_m, X̄_m, Y_1, …, Y_k} of the
//! directions and the complexes Z(V) of ascending V-ideal edges.
//!
//! Block 2i is X_{i+1}, block 2i+1 is X̄_{i+1}, block 2m+j is Y_{j+1}.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{ComplexError, FlagComplex};
use crate::freegroup::Marking;
use crate::stars::{petal_of, DirSet, DotData, NormVector, StarsError, WordList};

/// A set of blocks as a bitmask.
pub type BlockSet = u32;

#[derive(Debug, Clone)]
pub struct VDecomposition {
    m: usize,
    k: usize,
    /// `pair[a][b]` is the dot product of blocks a and b.
    pair: Vec<Vec<NormVector>>,
    /// |e_i| for i < m.
    base: Vec<NormVector>,
    complete: bool,
    labels: Vec<String>,
}

fn block_labels(m: usize, k: usize) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=m {
        v.push(format!("X{i}"));
        v.push(format!("~X{i}"));
    }
    v.extend((1..=k).map(|j| format!("Y{j}")));
    v
}

impl VDecomposition {
    /// Blocks are unions of directions of a rose, with `designated[i]` the
    /// petal whose two directions lie in X_{i+1} and X̄_{i+1}.
    pub fn from_dots(
        dots: &DotData,
        blocks: &[DirSet],
        m: usize,
        k: usize,
        designated: &[usize],
    ) -> Result<VDecomposition, ComplexError> {
        let bad = |s: &str| ComplexError::InvalidDecomposition(s.to_string());
        if m == 0 {
            return Err(bad("m must be at least 1"));
        }
        if blocks.len() != 2 * m + k || designated.len() != m {
            return Err(bad("block count does not match (m, k)"));
        }
        let mut acc = DirSet::EMPTY;
        for b in blocks {
            if b.is_empty() || !acc.is_disjoint(*b) {
                return Err(bad("blocks must be nonempty and disjoint"));
            }
            acc = acc.union(*b);
        }
        if acc != DirSet::all(dots.rank()) {
            return Err(bad("blocks must cover every direction"));
        }
        let mut base = Vec::new();
        for (i, &p) in designated.iter().enumerate() {
            if !blocks[2 * i].contains(2 * p) || !blocks[2 * i + 1].contains(2 * p + 1) {
                return Err(bad("designated petal not in its blocks"));
            }
            let e = dots.norm(DirSet::single(2 * p))?;
            for b in [blocks[2 * i], blocks[2 * i + 1]] {
                if dots.norm(b)? < e {
                    return Err(bad("block norm below its petal norm"));
                }
            }
            base.push(e);
        }
        let nb = blocks.len();
        let mut pair = vec![vec![NormVector::zeros(dots.coords()); nb]; nb];
        for a in 0..nb {
            for b in 0..nb {
                if a != b {
                    pair[a][b] = dots.dot(blocks[a], blocks[b])?;
                }
            }
        }
        Ok(VDecomposition { m, k, pair, base, complete: dots.is_complete(), labels: block_labels(m, k) })
    }

    /// X_i = {e_i}, X̄_i = {ē_i}: the decomposition whose complex is Z(ρ).
    pub fn rose(dots: &DotData) -> VDecomposition {
        let n = dots.rank();
        let blocks: Vec<DirSet> = (0..2 * n).map(DirSet::single).collect();
        let designated: Vec<usize> = (0..n).collect();
        Self::from_dots(dots, &blocks, n, 0, &designated).expect("singleton blocks are valid")
    }

    /// Synthetic source: positive random block dots over `coords`
    /// coordinates, and |e_i| at most min(|X_i|, |X̄_i|).
    pub fn random<R: Rng>(m: usize, k: usize, coords: usize, rng: &mut R) -> VDecomposition {
        assert!(m >= 1 && coords >= 1);
        let nb = 2 * m + k;
        let mut pair = vec![vec![NormVector::zeros(coords); nb]; nb];
        // a few heavy pairs make descending edges common
        let heavy: Vec<(usize, usize)> = (0..rng.gen_range(0..=nb)).map(|_| (rng.gen_range(0..nb), rng.gen_range(0..nb))).collect();
        for a in 0..nb {
            for b in a + 1..nb {
                let mut v: Vec<i64> = (0..coords).map(|_| rng.gen_range(1..=9)).collect();
                if heavy.contains(&(a, b)) || heavy.contains(&(b, a)) {
                    v[0] *= rng.gen_range(3..=12);
                }
                pair[a][b] = NormVector(v.clone());
                pair[b][a] = NormVector(v);
            }
        }
        // pulling a block towards X_i or X̄_i makes their union cheap to cut
        for i in 0..2 * m {
            if rng.gen_bool(0.4) {
                let b = rng.gen_range(0..nb);
                if b / 2 != i / 2 || b >= 2 * m {
                    let f = rng.gen_range(10..=30);
                    pair[i][b].0[0] *= f;
                    pair[b][i].0[0] *= f;
                }
            }
        }
        let mut d = VDecomposition { m, k, pair, base: Vec::new(), complete: true, labels: block_labels(m, k) };
        for i in 0..m {
            let lo = d.norm(1 << (2 * i)).min(d.norm(1 << (2 * i + 1)));
            let mut e = lo.clone();
            if rng.gen_bool(0.3) {
                e.0[0] -= rng.gen_range(0..=lo.0[0] / 4);
                if e < lo {
                    for x in e.0.iter_mut().skip(1) {
                        *x = rng.gen_range(0..=20);
                    }
                }
            }
            d.base.push(e);
        }
        d
    }

    /// Blocks drawn at random from the directions of the rose marked by `g`.
    /// Petals are designated at random; every Y_j gets one more direction and
    /// the rest land in random blocks. The word list is lengthened until no
    /// ascent comparison ties. `None` when a block norm drops below its petal
    /// norm or ties survive words of length `max_len`.
    pub fn sample_from_marking<R: Rng>(
        g: &Marking,
        m: usize,
        k: usize,
        max_len: usize,
        rng: &mut R,
    ) -> Result<Option<VDecomposition>, ComplexError> {
        let n = g.rank();
        if m == 0 || m > n || 2 * m + k > 2 * n {
            return Err(ComplexError::InvalidDecomposition(format!("rank {n} has too few directions for m={m}, k={k}")));
        }
        let mut petals: Vec<usize> = (0..n).collect();
        petals.shuffle(rng);
        let designated = &petals[..m];
        let mut blocks: Vec<DirSet> = designated.iter().flat_map(|&p| [DirSet::single(2 * p), DirSet::single(2 * p + 1)]).collect();
        let mut rest: Vec<usize> = (0..2 * n).filter(|d| !designated.contains(&petal_of(*d))).collect();
        rest.shuffle(rng);
        for (j, &d) in rest.iter().enumerate() {
            if j < k {
                blocks.push(DirSet::single(d));
            } else {
                let b = rng.gen_range(0..blocks.len());
                blocks[b] = blocks[b].union(DirSet::single(d));
            }
        }
        for len in 2..=max_len {
            let dots = DotData::from_marking(g, &WordList::standard(n, len));
            let v = match VDecomposition::from_dots(&dots, &blocks, m, k, designated) {
                Ok(v) => v,
                Err(ComplexError::InvalidDecomposition(_)) => return Ok(None),
                Err(ComplexError::Stars(StarsError::InsufficientWords { .. })) => continue,
                Err(e) => return Err(e),
            };
            if enumerate_v_ideal_edges(&v).iter().all(|e| v.is_ascending(e).is_ok()) {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block_count(&self) -> usize {
        2 * self.m + self.k
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn base(&self, i: usize) -> &NormVector {
        &self.base[i]
    }

    pub fn all(&self) -> BlockSet {
        (1u32 << self.block_count()) - 1
    }

    pub fn dot(&self, a: BlockSet, b: BlockSet) -> NormVector {
        let mut acc = NormVector::zeros(self.pair[0][0].0.len());
        for x in 0..self.block_count() {
            if a >> x & 1 == 0 {
                continue;
            }
            for y in 0..self.block_count() {
                if b >> y & 1 == 1 {
                    acc = &acc + &self.pair[x][y];
                }
            }
        }
        acc
    }

    pub fn norm(&self, a: BlockSet) -> NormVector {
        self.dot(a, self.all() & !a)
    }

    /// Comparison of |a| with |e_i|; a tie on a truncated word list is an error.
    pub fn compare_with_base(&self, a: BlockSet, i: usize) -> Result<Ordering, StarsError> {
        match self.norm(a).cmp(&self.base[i]) {
            Ordering::Equal if !self.complete => Err(StarsError::InsufficientWords { coords: self.base[i].0.len() }),
            o => Ok(o),
        }
    }

    /// Ascending for some designated e_i whose blocks it separates.
    pub fn is_ascending(&self, e: &VIdealEdge) -> Result<bool, StarsError> {
        for i in e.separated(self.m) {
            if self.compare_with_base(e.side, i)? == Ordering::Greater {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn name(&self, s: BlockSet) -> String {
        (0..self.block_count()).filter(|&b| s >> b & 1 == 1).map(|b| self.labels[b].as_str()).collect::<Vec<_>>().join(",")
    }
}

/// A partition of the blocks, stored by the side containing X_1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VIdealEdge {
    pub side: BlockSet,
    pub blocks: usize,
}

impl VIdealEdge {
    pub fn other(&self) -> BlockSet {
        ((1u32 << self.blocks) - 1) & !self.side
    }

    /// Indices i < m with X_{i+1} and X̄_{i+1} on different sides.
    pub fn separated(&self, m: usize) -> Vec<usize> {
        (0..m).filter(|&i| (self.side >> (2 * i) & 1) != (self.side >> (2 * i + 1) & 1)).collect()
    }

    pub fn compatible(&self, o: &VIdealEdge) -> bool {
        [self.side, self.other()].iter().any(|&a| [o.side, o.other()].iter().any(|&b| a & b == 0))
    }
}

impl fmt::Debug for VIdealEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0w$b}", self.side, w = self.blocks)
    }
}

pub fn enumerate_v_ideal_edges(v: &VDecomposition) -> Vec<VIdealEdge> {
    let nb = v.block_count();
    let mut out = Vec::new();
    for rest in 0..1u32 << (nb - 1) {
        let e = VIdealEdge { side: 1 | rest << 1, blocks: nb };
        if e.side.count_ones() >= 2 && e.other().count_ones() >= 2 && !e.separated(v.m).is_empty() {
            out.push(e);
        }
    }
    out
}

/// Flag complex on ascending V-ideal edges, adjacency = compatibility.
pub fn build_z(v: &VDecomposition) -> Result<(FlagComplex, Vec<VIdealEdge>), ComplexError> {
    let mut asc = Vec::new();
    for e in enumerate_v_ideal_edges(v) {
        if v.is_ascending(&e)? {
            asc.push(e);
        }
    }
    let labels = asc.iter().map(|e| format!("{}|{}", v.name(e.side), v.name(e.other()))).collect();
    let c = FlagComplex::from_relation(labels, |a, b| asc[a].compatible(&asc[b]));
    Ok((c, asc))
}

/// Z(ρ) from norms given directly on the rose's directions.
pub fn build_z_rho(dots: &DotData) -> Result<(FlagComplex, Vec<VIdealEdge>), ComplexError> {
    build_z(&VDecomposition::rose(dots))
}
