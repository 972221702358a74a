use std::cmp::Ordering;

use jewelbox_core::freegroup::*;
use jewelbox_core::morse::random_marking;
use jewelbox_core::stars::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every assignment of the 2n directions to `parts` labelled parts.
fn assignments(n: usize, parts: usize) -> impl Iterator<Item = Vec<DirSet>> {
    let d = 2 * n;
    (0..parts.pow(d as u32)).map(move |mut code| {
        let mut out = vec![DirSet::EMPTY; parts];
        for dir in 0..d {
            out[code % parts] = out[code % parts].union(DirSet::single(dir));
            code /= parts;
        }
        out
    })
}

fn sources(n: usize, seed: u64) -> Vec<DotData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<DotData> = (0..5)
        .map(|i| DotData::from_marking(random_marking(n, 2 + i, &mut rng).marking(), &WordList::standard(n, 3)))
        .collect();
    for _ in 0..20 {
        let w: Vec<u64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 1..=5)).collect();
        v.push(DotData::random(n, 4, 9, &w, &mut rng));
    }
    v
}

#[test]
fn dot_is_symmetric_and_additive_rank_two() {
    for dots in sources(2, 1) {
        for p in assignments(2, 4) {
            let (x, y, z) = (p[0], p[1], p[2]);
            assert_eq!(dots.dot(x, y).unwrap(), dots.dot(y, x).unwrap());
            let lhs = dots.dot(x.union(y), z).unwrap();
            assert_eq!(lhs, &dots.dot(x, z).unwrap() + &dots.dot(y, z).unwrap());
        }
    }
}

#[test]
fn key_lemma_exhaustive_rank_two() {
    for dots in sources(2, 2) {
        for p in assignments(2, 4) {
            assert!(key_lemma_residual(p[0], p[1], p[2], p[3], &dots).unwrap().is_zero());
        }
    }
}

#[test]
fn dots_of_disjoint_sets_are_positive() {
    for n in 2..=3 {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for steps in 0..6 {
            let dots = DotData::distinguishing(random_marking(n, steps, &mut rng).marking());
            for p in assignments(n, 3) {
                if !p[0].is_empty() && !p[1].is_empty() {
                    assert!(dots.dot(p[0], p[1]).unwrap().is_positive());
                }
            }
        }
    }
}

fn partition(n: usize, code: u64) -> [DirSet; 4] {
    let mut out = [DirSet::EMPTY; 4];
    let mut c = code;
    for d in 0..2 * n {
        out[(c % 4) as usize] = out[(c % 4) as usize].union(DirSet::single(d));
        c /= 4;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn key_lemma_random_partitions(n in 2usize..=4, seed in any::<u64>(), codes in prop::collection::vec(any::<u64>(), 20)) {
        for dots in sources(n, seed).iter().step_by(3) {
            for &c in &codes {
                let [x, y, z, w] = partition(n, c);
                prop_assert!(key_lemma_residual(x, y, z, w, dots).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn key_lemma_corollary(n in 2usize..=3, seed in any::<u64>(), code in any::<u64>()) {
        let [x, y, z, w] = partition(n, code);
        prop_assume!(!x.is_empty() && !y.is_empty() && !z.is_empty() && !w.is_empty());
        for dots in sources(n, seed).iter().skip(5) {
            prop_assume!(dots.dot(z, w).unwrap().is_positive());
            let lambda = std::cmp::min(dots.norm(x).unwrap(), dots.norm(y).unwrap());
            let a = dots.norm(x.union(z)).unwrap();
            let b = dots.norm(y.union(z)).unwrap();
            prop_assert!(a > lambda || b > lambda);
        }
    }
}

/// Crossings of `side` by st(w), read straight from the letters: an edge
/// joins a_i to ā_{i+1}.
fn crossings(w: &CyclicWord, side: DirSet) -> u64 {
    let dir = |l: Letter| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0);
    let l = w.letters();
    let k = l.len();
    (0..k).filter(|&i| side.contains(dir(l[i])) != side.contains(dir(l[(i + 1) % k]) ^ 1)).count() as u64
}

#[test]
fn norms_separate_petals_and_ideal_edges() {
    for n in 2..=3 {
        let objs = norm_objects(n);
        let dots = DotData::distinguishing(&Marking::identity(n));
        let mut pairs = 0;
        for (i, a) in objs.iter().enumerate() {
            for b in &objs[i + 1..] {
                let wit = distinct_norms_witness(n, a, b).unwrap_or_else(|e| panic!("{e}"));
                assert!(wit.word.len() <= 4);
                let (va, vb) = (crossings(&wit.word, a.side()), crossings(&wit.word, b.side()));
                assert_eq!((va, vb), wit.values);
                assert_ne!(va, vb, "{a} vs {b} on {}", wit.word);
                assert_ne!(dots.compare_norms(a.side(), b.side()).unwrap(), Ordering::Equal);
                pairs += 1;
            }
        }
        assert_eq!(pairs, objs.len() * (objs.len() - 1) / 2);
    }
}

#[test]
fn witnesses_pull_back_through_markings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let objs = norm_objects(2);
    for _ in 0..5 {
        let rho = random_marking(2, 4, &mut rng);
        let g = rho.marking();
        for (i, a) in objs.iter().enumerate() {
            for b in &objs[i + 1..] {
                let wit = distinct_norms_witness(2, a, b).unwrap();
                assert_eq!(g.apply_cyclic(&witness_in_domain(&wit, g)), wit.word);
            }
        }
    }
}
