//! Words in the free group F_n, conjugacy classes, and markings of roses.
//!
//! Letters are signed generator indices: `k` stands for x_k and `-k` for its
//! inverse. The string form writes x_1..x_26 as `a`..`z` and their inverses as
//! `A`..`Z`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("letter {letter} is out of range for rank {rank}")]
    IndexOutOfRange { letter: i32, rank: usize },
    #[error("cannot parse word {0:?}")]
    Parse(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("a marking of rank {expected} needs {expected} images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("images do not form a basis of the free group")]
    NotAutomorphism,
}

pub type Letter = i32;

/// Position of a letter in the alphabet order x1 < x1⁻¹ < x2 < x2⁻¹ < ...
#[inline]
pub fn letter_key(l: Letter) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

#[inline]
pub fn letter_from_key(k: u32) -> Letter {
    let g = (k / 2 + 1) as i32;
    if k.is_multiple_of(2) {
        g
    } else {
        -g
    }
}

fn cmp_letters(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            match letter_key(*x).cmp(&letter_key(*y)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

fn check_letters(rank: usize, letters: &[Letter]) -> Result<(), FreeGroupError> {
    for &l in letters {
        if l == 0 || l.unsigned_abs() as usize > rank {
            return Err(FreeGroupError::IndexOutOfRange { letter: l, rank });
        }
    }
    Ok(())
}

fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// A freely reduced word of F_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, letter: Letter) -> Result<Self, FreeGroupError> {
        check_letters(rank, &[letter])?;
        Ok(Word { rank, letters: vec![letter] })
    }

    /// Freely reduce a raw letter sequence.
    pub fn reduce(rank: usize, letters: &[Letter]) -> Result<Self, FreeGroupError> {
        check_letters(rank, letters)?;
        Ok(Word { rank, letters: free_reduce(letters.iter().copied()) })
    }

    pub fn parse(rank: usize, s: &str) -> Result<Self, FreeGroupError> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let l = match ch {
                'a'..='z' => (ch as i32) - ('a' as i32) + 1,
                'A'..='Z' => -((ch as i32) - ('A' as i32) + 1),
                '1' if s == "1" => continue,
                _ => return Err(FreeGroupError::Parse(s.to_string())),
            };
            letters.push(l);
        }
        Word::reduce(rank, &letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        debug_assert_eq!(self.rank, other.rank);
        Word {
            rank: self.rank,
            letters: free_reduce(self.letters.iter().chain(&other.letters).copied()),
        }
    }

    pub fn pow(&self, k: i32) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Strip inverse pairs from the two ends; returns (conjugator, core)
    /// with `self = conjugator · core · conjugator⁻¹`.
    pub fn cyclic_split(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut i = 0;
        while i < l.len() / 2 && l[i] == -l[l.len() - 1 - i] {
            i += 1;
        }
        (
            Word { rank: self.rank, letters: l[..i].to_vec() },
            Word { rank: self.rank, letters: l[i..l.len() - i].to_vec() },
        )
    }

    pub fn cyclic_len(&self) -> usize {
        self.cyclic_split().1.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        write_letters(f, &self.letters)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    for &l in letters {
        let c = if l > 0 {
            (b'a' + (l - 1) as u8) as char
        } else {
            (b'A' + (-l - 1) as u8) as char
        };
        write!(f, "{c}")?;
    }
    Ok(())
}

pub fn reduce(rank: usize, letters: &[Letter]) -> Result<Word, FreeGroupError> {
    Word::reduce(rank, letters)
}

/// A conjugacy class, stored as its shortlex-least cyclically reduced rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.clone() }
    }

    pub fn parse(rank: usize, s: &str) -> Result<Self, FreeGroupError> {
        Ok(cyclic_canonical(&Word::parse(rank, s)?))
    }

    pub fn from_letters(rank: usize, letters: &[Letter]) -> Result<Self, FreeGroupError> {
        Ok(cyclic_canonical(&Word::reduce(rank, letters)?))
    }

    pub fn inverse(&self) -> CyclicWord {
        cyclic_canonical(&self.to_word().inverse())
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_letters(&self.letters, &other.letters)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        write_letters(f, &self.letters)
    }
}

fn min_rotation(core: &[Letter]) -> Vec<Letter> {
    let k = core.len();
    let mut best = 0;
    for s in 1..k {
        for j in 0..k {
            let a = letter_key(core[(s + j) % k]);
            let b = letter_key(core[(best + j) % k]);
            if a != b {
                if a < b {
                    best = s;
                }
                break;
            }
        }
    }
    (0..k).map(|j| core[(best + j) % k]).collect()
}

pub fn cyclic_canonical(w: &Word) -> CyclicWord {
    let (_, core) = w.cyclic_split();
    CyclicWord { rank: w.rank, letters: min_rotation(&core.letters) }
}

fn is_canonical_cyclic(letters: &[Letter]) -> bool {
    let k = letters.len();
    if k == 0 || letters[0] == -letters[k - 1] {
        return false;
    }
    min_rotation(letters) == letters
}

/// Classes of x_i, x_i x_j and x_i x_j⁻¹ (i ≠ j), deduplicated and sorted.
#[allow(non_snake_case)]
pub fn generate_W0(n: usize) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    for i in 1..=n as i32 {
        out.push(cyclic_canonical(&Word { rank: n, letters: vec![i] }));
        for j in 1..=n as i32 {
            if i != j {
                out.push(cyclic_canonical(&Word { rank: n, letters: vec![i, j] }));
                out.push(cyclic_canonical(&Word { rank: n, letters: vec![i, -j] }));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Streams conjugacy classes in shortlex order of their canonical forms.
#[derive(Debug, Clone)]
pub struct ClassIter {
    rank: usize,
    max_len: usize,
    len: usize,
    keys: Vec<u32>,
    started: bool,
}

impl ClassIter {
    pub fn new(rank: usize, max_len: usize) -> Self {
        ClassIter { rank, max_len, len: 1, keys: vec![0], started: false }
    }

    /// Advance `keys` to the next freely reduced sequence of the current length.
    fn step(&mut self) -> bool {
        let alpha = 2 * self.rank as u32;
        let mut pos = self.keys.len();
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            let mut k = self.keys[pos] + 1;
            if pos > 0 && k < alpha && k == self.keys[pos - 1] ^ 1 {
                k += 1;
            }
            if k < alpha {
                self.keys[pos] = k;
                for q in pos + 1..self.keys.len() {
                    let mut v = 0;
                    if v == self.keys[q - 1] ^ 1 {
                        v += 1;
                    }
                    self.keys[q] = v;
                }
                return true;
            }
        }
    }

    fn first_of_len(&mut self, len: usize) {
        self.keys = vec![0; len];
        for q in 1..len {
            self.keys[q] = u32::from(self.keys[q - 1] == 1);
        }
    }
}

impl Iterator for ClassIter {
    type Item = CyclicWord;

    fn next(&mut self) -> Option<CyclicWord> {
        loop {
            if !self.started {
                self.started = true;
                if self.max_len == 0 {
                    return None;
                }
                self.first_of_len(1);
            } else if !self.step() {
                self.len += 1;
                if self.len > self.max_len {
                    return None;
                }
                self.first_of_len(self.len);
            }
            let letters: Vec<Letter> = self.keys.iter().map(|&k| letter_from_key(k)).collect();
            if is_canonical_cyclic(&letters) {
                return Some(CyclicWord { rank: self.rank, letters });
            }
        }
    }
}

/// All conjugacy classes of cyclic length at most `max_len`, in shortlex order.
pub fn enumerate_classes(n: usize, max_len: usize) -> Vec<CyclicWord> {
    ClassIter::new(n, max_len).collect()
}

/// Images of the generators x_1..x_n, certified to be a basis of F_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marking {
    images: Vec<Word>,
    inverse: Vec<Word>,
}

/// One elementary Nielsen move `u_i ← u_j^s · u_i` (left) or `u_i ← u_i · u_j^s`.
#[derive(Debug, Clone, Copy)]
struct NielsenMove {
    i: usize,
    j: usize,
    s: i32,
    left: bool,
}

fn apply_move(t: &mut [Word], m: NielsenMove) {
    let uj = if m.s > 0 { t[m.j].clone() } else { t[m.j].inverse() };
    t[m.i] = if m.left { uj.mul(&t[m.i]) } else { t[m.i].mul(&uj) };
}

fn total_len(t: &[Word]) -> usize {
    t.iter().map(Word::len).sum()
}

fn best_reducing_move(t: &[Word]) -> Option<NielsenMove> {
    let n = t.len();
    let mut best: Option<(usize, NielsenMove)> = None;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for s in [1, -1] {
                for left in [false, true] {
                    let m = NielsenMove { i, j, s, left };
                    let mut c = t.to_vec();
                    apply_move(&mut c, m);
                    let l = c[i].len();
                    if l < t[i].len() && best.is_none_or(|(b, _)| l < b) {
                        best = Some((l, m));
                    }
                }
            }
        }
    }
    best.map(|(_, m)| m)
}

fn length_preserving_moves(t: &[Word]) -> Vec<NielsenMove> {
    let n = t.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for s in [1, -1] {
                for left in [false, true] {
                    let m = NielsenMove { i, j, s, left };
                    let mut c = t.to_vec();
                    apply_move(&mut c, m);
                    if c[i].len() == t[i].len() && c[i] != t[i] {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

fn is_signed_permutation(t: &[Word]) -> bool {
    let mut seen = vec![false; t.len()];
    for w in t {
        if w.len() != 1 {
            return false;
        }
        let g = w.letters[0].unsigned_abs() as usize - 1;
        if seen[g] {
            return false;
        }
        seen[g] = true;
    }
    true
}

/// Nielsen-reduce `images` to single letters while tracking the composite of
/// the moves; returns the inverse automorphism's images on success.
fn nielsen_inverse(rank: usize, images: &[Word]) -> Option<Vec<Word>> {
    let mut u = images.to_vec();
    let mut h: Vec<Word> = (1..=rank as i32).map(|i| Word { rank, letters: vec![i] }).collect();
    // Bounded breadth for the rare tuples where only length-preserving moves apply.
    const PLATEAU_DEPTH: usize = 3;
    loop {
        if u.iter().any(Word::is_empty) {
            return None;
        }
        if is_signed_permutation(&u) {
            break;
        }
        if let Some(m) = best_reducing_move(&u) {
            apply_move(&mut u, m);
            apply_move(&mut h, m);
            continue;
        }
        // plateau: breadth-first search over length-preserving moves
        let start_len = total_len(&u);
        let mut frontier: Vec<(Vec<Word>, Vec<Word>)> = vec![(u.clone(), h.clone())];
        let mut seen = std::collections::HashSet::new();
        seen.insert(u.clone());
        let mut escaped = None;
        'bfs: for _ in 0..PLATEAU_DEPTH {
            let mut next = Vec::new();
            for (tu, th) in &frontier {
                for m in length_preserving_moves(tu) {
                    let mut nu = tu.clone();
                    let mut nh = th.clone();
                    apply_move(&mut nu, m);
                    apply_move(&mut nh, m);
                    if !seen.insert(nu.clone()) {
                        continue;
                    }
                    if best_reducing_move(&nu).is_some() || is_signed_permutation(&nu) {
                        escaped = Some((nu, nh));
                        break 'bfs;
                    }
                    next.push((nu, nh));
                }
            }
            frontier = next;
        }
        match escaped {
            Some((nu, nh)) => {
                debug_assert_eq!(total_len(&nu), start_len);
                u = nu;
                h = nh;
            }
            None => return None,
        }
    }
    // g∘h = σ with σ(x_i) = u_i; so g⁻¹ = h∘σ⁻¹.
    let mut inv = vec![Word::identity(rank); rank];
    for (i, ui) in u.iter().enumerate() {
        let l = ui.letters[0];
        let target = l.unsigned_abs() as usize - 1;
        // σ(x_i) = y^sign  ⇒ σ⁻¹(y) = x_i^sign
        inv[target] = if l > 0 { h[i].clone() } else { h[i].inverse() };
    }
    Some(inv)
}

impl Marking {
    pub fn identity(rank: usize) -> Self {
        let ims: Vec<Word> = (1..=rank as i32).map(|i| Word { rank, letters: vec![i] }).collect();
        Marking { images: ims.clone(), inverse: ims }
    }

    pub fn new(images: Vec<Word>) -> Result<Self, FreeGroupError> {
        let rank = images.len();
        for w in &images {
            if w.rank != rank {
                return Err(FreeGroupError::RankMismatch(w.rank, rank));
            }
        }
        let inverse = nielsen_inverse(rank, &images).ok_or(FreeGroupError::NotAutomorphism)?;
        Ok(Marking { images, inverse })
    }

    pub fn parse(strings: &[&str]) -> Result<Self, FreeGroupError> {
        let n = strings.len();
        let images = strings.iter().map(|s| Word::parse(n, s)).collect::<Result<Vec<_>, _>>()?;
        Marking::new(images)
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn apply(&self, w: &Word) -> Word {
        apply_images(&self.images, w)
    }

    pub fn apply_cyclic(&self, w: &CyclicWord) -> CyclicWord {
        cyclic_canonical(&self.apply(&w.to_word()))
    }

    pub fn inverse(&self) -> Marking {
        Marking { images: self.inverse.clone(), inverse: self.images.clone() }
    }

    /// `self ∘ other`: x_i ↦ self(other(x_i)).
    pub fn compose(&self, other: &Marking) -> Marking {
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        let inverse = self.inverse.iter().map(|w| other.inverse().apply(w)).collect();
        Marking { images, inverse }
    }

    /// Apply a signed permutation of the target petals: petal `k` becomes
    /// `perm[k-1]` (a signed letter).
    pub fn relabel_petals(&self, perm: &[Letter]) -> Marking {
        let rank = self.rank();
        let sigma: Vec<Word> = perm.iter().map(|&l| Word { rank, letters: vec![l] }).collect();
        let images = self.images.iter().map(|w| apply_images(&sigma, w)).collect();
        Marking::new(images).expect("relabeling by a signed permutation preserves bases")
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.images.iter().map(|w| w.to_string()).collect()
    }

    /// True if `other = σ ∘ c_u ∘ self` for a signed petal permutation σ and
    /// an inner automorphism c_u, i.e. both define the same marked rose.
    pub fn equivalent(&self, other: &Marking) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        let phi = other.compose(&self.inverse());
        is_signed_perm_times_inner(phi.images())
    }
}

fn apply_images(images: &[Word], w: &Word) -> Word {
    let rank = images.first().map_or(w.rank, |x| x.rank);
    let mut out = Vec::new();
    for &l in &w.letters {
        let im = &images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            out.extend_from_slice(&im.letters);
        } else {
            out.extend(im.letters.iter().rev().map(|x| -x));
        }
    }
    Word { rank, letters: free_reduce(out) }
}

/// Does `phi(x_i) = u ℓ_i u⁻¹` for a common `u` and distinct letters ℓ_i?
fn is_signed_perm_times_inner(phi: &[Word]) -> bool {
    let n = phi.len();
    let (u1, l1) = phi[0].cyclic_split();
    if l1.len() != 1 {
        return false;
    }
    let a = l1.letters[0];
    let mut shift: Option<usize> = None;
    let mut shift_sign = 0;
    let mut used = vec![false; n];
    used[a.unsigned_abs() as usize - 1] = true;
    for w in &phi[1..] {
        let psi = u1.inverse().mul(w).mul(&u1);
        let (c, core) = psi.cyclic_split();
        if core.len() != 1 {
            return false;
        }
        let b = core.letters[0];
        if b.unsigned_abs() == a.unsigned_abs() {
            return false;
        }
        // c must be a power of a (possibly empty)
        if !c.letters.iter().all(|&x| x == c.letters.first().copied().unwrap_or(a)) {
            return false;
        }
        if let Some(&x) = c.letters.first() {
            if x.unsigned_abs() != a.unsigned_abs() {
                return false;
            }
        }
        let sgn = c.letters.first().map_or(0, |&x| x.signum());
        match shift {
            None => {
                shift = Some(c.len());
                shift_sign = sgn;
            }
            Some(s) => {
                if s != c.len() || (s > 0 && sgn != shift_sign) {
                    return false;
                }
            }
        }
        let g = b.unsigned_abs() as usize - 1;
        if used[g] {
            return false;
        }
        used[g] = true;
    }
    true
}

/// Independent basis test: fold the wedge of image loops (Stallings) and ask
/// whether the result is the rose with one loop per generator.
pub fn generates_free_group(rank: usize, images: &[Word]) -> bool {
    if images.len() != rank || images.iter().any(Word::is_empty) {
        return false;
    }
    // vertices; edges labelled by positive generator, stored as (from, label, to)
    let mut nverts = 1usize;
    let mut edges: Vec<(usize, i32, usize)> = Vec::new();
    for w in images {
        let mut cur = 0usize;
        let k = w.len();
        for (p, &l) in w.letters.iter().enumerate() {
            let next = if p + 1 == k {
                0
            } else {
                nverts += 1;
                nverts - 1
            };
            if l > 0 {
                edges.push((cur, l, next));
            } else {
                edges.push((next, -l, cur));
            }
            cur = next;
        }
    }
    let mut parent: Vec<usize> = (0..nverts).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    fn union(p: &mut [usize], x: usize, y: usize) -> bool {
        let (x, y) = (find(p, x), find(p, y));
        if x != y {
            p[x] = y;
        }
        x != y
    }
    loop {
        let mut changed = false;
        let mut out_map: std::collections::HashMap<(usize, i32), usize> = Default::default();
        let mut in_map: std::collections::HashMap<(usize, i32), usize> = Default::default();
        for &(a, l, b) in &edges {
            let (a, b) = (find(&mut parent, a), find(&mut parent, b));
            if let Some(&t) = out_map.get(&(a, l)) {
                changed |= union(&mut parent, t, b);
            } else {
                out_map.insert((a, l), b);
            }
            if let Some(&s) = in_map.get(&(b, l)) {
                changed |= union(&mut parent, s, a);
            } else {
                in_map.insert((b, l), a);
            }
        }
        if !changed {
            break;
        }
    }
    let mut loops = std::collections::BTreeSet::new();
    let mut distinct_edges = std::collections::BTreeSet::new();
    for &(a, l, b) in &edges {
        let (a, b) = (find(&mut parent, a), find(&mut parent, b));
        if a != b {
            return false;
        }
        loops.insert(l);
        distinct_edges.insert((a, l, b));
    }
    loops.len() == rank && distinct_edges.len() == rank
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for Marking {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Marking {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        Marking::parse(&refs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, l: &[i32]) -> Word {
        Word::reduce(n, l).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w(2, &[1, -1]).is_empty());
        assert_eq!(w(2, &[1, 2, -2, -1, 1]).letters(), &[1]);
        assert_eq!(w(2, &[1, 2, 1]).letters(), &[1, 2, 1]);
        assert_eq!(
            Word::reduce(2, &[3]),
            Err(FreeGroupError::IndexOutOfRange { letter: 3, rank: 2 })
        );
        assert!(Word::reduce(2, &[0]).is_err());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(cyclic_canonical(&w(2, &[1, 2, -1])).letters(), &[2]);
        assert_eq!(cyclic_canonical(&w(2, &[2, 1])).letters(), &[1, 2]);
        let a = cyclic_canonical(&w(2, &[1, -2]));
        let b = cyclic_canonical(&w(2, &[2, -1]));
        assert_ne!(a, b);
        // independent check: no rotation of one equals the other
        let rots = |v: &[i32]| (0..v.len()).map(|s| [&v[s..], &v[..s]].concat()).collect::<Vec<_>>();
        assert!(rots(&[1, -2]).iter().all(|r| r != &vec![2, -1]));
    }

    #[test]
    fn marking_examples() {
        let id = Marking::identity(2);
        assert_eq!(id.apply(&w(2, &[1, 2])).letters(), &[1, 2]);
        let g = Marking::new(vec![w(2, &[1, 2]), w(2, &[2])]).unwrap();
        assert_eq!(g.apply(&w(2, &[1])).letters(), &[1, 2]);
        assert_eq!(g.apply(&w(2, &[1, -2])).letters(), &[1]);
        assert_eq!(g.inverse().apply(&w(2, &[1])).letters(), &[1, -2]);
    }

    #[test]
    fn non_bases_rejected() {
        assert!(Marking::new(vec![w(2, &[1, 1]), w(2, &[2])]).is_err());
        assert!(Marking::new(vec![w(2, &[1, 2]), w(2, &[2, 1])]).is_err());
        assert!(Marking::new(vec![w(2, &[1]), w(2, &[])]).is_err());
        assert!(!generates_free_group(2, &[w(2, &[1, 1]), w(2, &[2])]));
        assert!(generates_free_group(2, &[w(2, &[1, 2]), w(2, &[2])]));
    }

    #[test]
    fn w0_examples() {
        let w0 = generate_W0(2);
        let strs: Vec<String> = w0.iter().map(|c| c.to_string()).collect();
        assert_eq!(strs, vec!["a", "b", "ab", "aB", "Ab"]);
        // oracle: brute-force dedup of the listed forms with rotations only
        let mut forms: Vec<Vec<i32>> = vec![];
        for i in 1..=3 {
            forms.push(vec![i]);
            for j in 1..=3 {
                if i != j {
                    forms.push(vec![i, j]);
                    forms.push(vec![i, -j]);
                }
            }
        }
        let mut classes: Vec<Vec<Vec<i32>>> = vec![];
        for f in forms {
            let rots: Vec<Vec<i32>> = (0..f.len()).map(|s| [&f[s..], &f[..s]].concat()).collect();
            if !classes.iter().any(|c| c.iter().any(|r| rots.contains(r))) {
                classes.push(rots);
            }
        }
        let w03 = generate_W0(3);
        assert_eq!(w03.len(), classes.len());
        assert!(w03.contains(&CyclicWord::parse(3, "aC").unwrap()));
        assert!(w03.contains(&CyclicWord::parse(3, "cA").unwrap()));
        assert_ne!(CyclicWord::parse(3, "aC").unwrap(), CyclicWord::parse(3, "cA").unwrap());
    }

    #[test]
    fn class_enumeration_examples() {
        let c1: Vec<String> = enumerate_classes(2, 1).iter().map(|c| c.to_string()).collect();
        assert_eq!(c1, vec!["a", "A", "b", "B"]);
        let c2 = enumerate_classes(2, 2);
        assert!(c2.contains(&CyclicWord::parse(2, "aB").unwrap()));
        // brute force: all words of length ≤ 2 over 4 letters, canonicalize, dedupe
        let letters = [1, -1, 2, -2];
        let mut set = std::collections::BTreeSet::new();
        for &a in &letters {
            set.insert(cyclic_canonical(&w(2, &[a])));
            for &b in &letters {
                let c = cyclic_canonical(&w(2, &[a, b]));
                if c.len() == 2 {
                    set.insert(c);
                }
            }
        }
        assert_eq!(c2.len(), set.len());
        assert_eq!(c2.len(), 12);
        assert!(c2.windows(2).all(|p| p[0] < p[1]));
    }
}
