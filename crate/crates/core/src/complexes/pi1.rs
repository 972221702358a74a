//! Edge-path group presentation with a bounded Tietze simplification.

use std::collections::VecDeque;

use serde::Serialize;

use super::FlagComplex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Pi1Result {
    Trivial,
    /// Generators left after simplification; the group may still be trivial.
    Inconclusive { generators: usize, relators: usize },
    Disconnected,
}

const MAX_ROUNDS: usize = 10_000;

fn free_reduce(w: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &x in w.iter() {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    while out.len() >= 2 && out[0] == -out[out.len() - 1] {
        out.pop();
        out.remove(0);
    }
    *w = out;
}

fn substitute(w: &[i32], g: i32, by: &[i32]) -> Vec<i32> {
    let mut out = Vec::with_capacity(w.len());
    for &x in w {
        if x == g {
            out.extend_from_slice(by);
        } else if x == -g {
            out.extend(by.iter().rev().map(|y| -y));
        } else {
            out.push(x);
        }
    }
    out
}

pub fn fundamental_group_check(c: &FlagComplex) -> Pi1Result {
    let n = c.vertex_count();
    if n == 0 {
        return Pi1Result::Disconnected;
    }
    // BFS spanning tree
    let mut parent = vec![usize::MAX; n];
    parent[0] = 0;
    let mut q = VecDeque::from([0usize]);
    while let Some(v) = q.pop_front() {
        for w in 0..n {
            if c.is_edge(v, w) && parent[w] == usize::MAX {
                parent[w] = v;
                q.push_back(w);
            }
        }
    }
    if parent.contains(&usize::MAX) {
        return Pi1Result::Disconnected;
    }
    let is_tree = |a: usize, b: usize| (parent[a] == b && a != 0) || (parent[b] == a && b != 0);
    let mut gen_of = std::collections::HashMap::new();
    for (a, b) in c.edges() {
        if !is_tree(a, b) {
            let id = gen_of.len() as i32 + 1;
            gen_of.insert((a, b), id);
        }
    }
    let letter = |a: usize, b: usize| -> Option<i32> {
        if a < b {
            gen_of.get(&(a, b)).copied()
        } else {
            gen_of.get(&(b, a)).map(|g| -g)
        }
    };
    let mut relators: Vec<Vec<i32>> = Vec::new();
    for tri in c.simplices(3).get(2).cloned().unwrap_or_default() {
        let (a, b, d) = (tri[0], tri[1], tri[2]);
        let mut w: Vec<i32> = [letter(a, b), letter(b, d), letter(d, a)].into_iter().flatten().collect();
        free_reduce(&mut w);
        if !w.is_empty() {
            relators.push(w);
        }
    }
    let mut live: Vec<i32> = (1..=gen_of.len() as i32).collect();
    for _ in 0..MAX_ROUNDS {
        if live.is_empty() {
            return Pi1Result::Trivial;
        }
        let pick = relators.iter().find_map(|r| {
            if r.len() == 1 {
                Some((r[0].abs(), Vec::new()))
            } else if r.len() == 2 && r[0].abs() != r[1].abs() {
                // x^ε y^δ = 1 ⇒ y = x^{−εδ}
                let (x, y) = (r[0], r[1]);
                Some((y.abs(), vec![-x * y.signum()]))
            } else {
                // a generator occurring exactly once can be solved for
                let mut counts = std::collections::HashMap::new();
                for &x in r {
                    *counts.entry(x.abs()).or_insert(0) += 1;
                }
                let (pos, &g) = r.iter().enumerate().find(|(_, x)| counts[&x.abs()] == 1)?;
                // r = u g^s v ⇒ g^s = u⁻¹ v⁻¹
                let mut rot: Vec<i32> = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
                rot.reverse();
                for x in rot.iter_mut() {
                    *x = -*x;
                }
                let by = if g > 0 { rot } else { rot.iter().rev().map(|x| -x).collect() };
                Some((g.abs(), by))
            }
        });
        let Some((g, by)) = pick else {
            return Pi1Result::Inconclusive { generators: live.len(), relators: relators.len() };
        };
        live.retain(|&x| x != g);
        for r in relators.iter_mut() {
            *r = substitute(r, g, &by);
            free_reduce(r);
        }
        relators.retain(|r| !r.is_empty());
    }
    Pi1Result::Inconclusive { generators: live.len(), relators: relators.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn circle_is_not_certified() {
        let e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let r = fundamental_group_check(&FlagComplex::new(labels(5), &e));
        assert_eq!(r, Pi1Result::Inconclusive { generators: 1, relators: 0 });
    }

    #[test]
    fn spheres_and_disks_are_trivial() {
        let oct = FlagComplex::from_relation(labels(6), |a, b| a / 2 != b / 2);
        assert_eq!(fundamental_group_check(&oct), Pi1Result::Trivial);
        let mut e: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        e.extend((0..6).map(|i| (i, 6)));
        assert_eq!(fundamental_group_check(&FlagComplex::new(labels(7), &e)), Pi1Result::Trivial);
    }

    #[test]
    fn disconnected() {
        assert_eq!(fundamental_group_check(&FlagComplex::new(labels(2), &[])), Pi1Result::Disconnected);
    }
}
