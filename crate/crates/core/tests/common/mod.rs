//! Test-side reference implementations. Everything here is written from the
//! definitions with plain loops and exact comparisons, and shares no logic
//! with the deciders under test.

#![allow(dead_code)]

use qmconvex::generators::WeightedTree;
use qmconvex::{ExtValue, PairMatrix, QuadraticInstance};
use rand::seq::SliceRandom;
use rand::Rng;

pub const INF: ExtValue = ExtValue::INFINITY;

pub fn v(x: f64) -> ExtValue {
    ExtValue::from(x)
}

/// Connected components of the infinity graph by repeated merging, each
/// sorted, ordered by smallest member. Singletons included.
pub fn infinity_components(inst: &QuadraticInstance) -> Vec<Vec<usize>> {
    let n = inst.n();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in i + 1..n {
                if inst.a(i, j).is_infinite() && label[i] != label[j] {
                    let (keep, drop) = (label[i].min(label[j]), label[i].max(label[j]));
                    for l in label.iter_mut() {
                        if *l == drop {
                            *l = keep;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        let c: Vec<usize> = (0..n).filter(|&x| label[x] == root).collect();
        if !c.is_empty() {
            comps.push(c);
        }
    }
    comps
}

pub fn condition_b(inst: &QuadraticInstance) -> bool {
    infinity_components(inst).iter().all(|c| {
        c.iter()
            .all(|&i| c.iter().all(|&j| i == j || inst.a(i, j).is_infinite()))
    })
}

/// Condition (4) over every ordered choice of four distinct indices.
pub fn scan_type1(inst: &QuadraticInstance) -> bool {
    let n = inst.n();
    let a = |i, j| inst.a(i, j);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let distinct = i != j && i != k && i != l && j != k && j != l && k != l;
                    if distinct && a(i, j) + a(k, l) < (a(i, k) + a(j, l)).min(a(i, l) + a(j, k)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn cross_equalities(inst: &QuadraticInstance, rows: &[usize], cols: &[usize]) -> bool {
    for &i in rows {
        for &k in rows {
            for &j in cols {
                for &l in cols {
                    if i != k
                        && j != l
                        && inst.a(i, j) + inst.a(k, l) != inst.a(i, l) + inst.a(j, k)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Condition (5): every big component against everything outside it.
pub fn scan_type2(inst: &QuadraticInstance) -> bool {
    let n = inst.n();
    infinity_components(inst)
        .iter()
        .filter(|c| c.len() >= 2)
        .all(|c| {
            let outside: Vec<usize> = (0..n).filter(|x| !c.contains(x)).collect();
            cross_equalities(inst, c, &outside)
        })
}

/// Condition (6): every ordered pair of distinct big components.
pub fn scan_type3(inst: &QuadraticInstance) -> bool {
    let big: Vec<Vec<usize>> = infinity_components(inst)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .collect();
    big.iter().enumerate().all(|(p, a)| {
        big.iter()
            .enumerate()
            .all(|(q, b)| p == q || cross_equalities(inst, a, b))
    })
}

/// Random partition of `0..n` into exactly `blocks` non-empty blocks.
pub fn random_partition(rng: &mut impl Rng, n: usize, blocks: usize) -> Vec<Vec<usize>> {
    assert!(1 <= blocks && blocks <= n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parts: Vec<Vec<usize>> = order[..blocks].iter().map(|&x| vec![x]).collect();
    for &x in &order[blocks..] {
        let b = rng.gen_range(0..blocks);
        parts[b].push(x);
    }
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    parts
}

pub fn block_index(n: usize, blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut of = vec![0; n];
    for (b, members) in blocks.iter().enumerate() {
        for &x in members {
            of[x] = b;
        }
    }
    of
}

fn ints(rng: &mut impl Rng, n: usize, lo: i32, hi: i32) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.gen_range(lo..=hi))).collect()
}

/// Instance with `+∞` exactly inside the given blocks (so Condition B
/// holds) and integer cross values from one of three families: uniform
/// noise, linear plus sparse noise, and block tree metrics plus a potential
/// plus sparse noise. The latter two give a healthy share of YES cases.
pub fn random_blocked_instance(
    rng: &mut impl Rng,
    r: usize,
    blocks: &[Vec<usize>],
) -> QuadraticInstance {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let of = block_index(n, blocks);
    let linear = ints(rng, n, -3, 3);
    let noise_rate = [0.0, 0.05, 0.2][rng.gen_range(0..3)];
    let mode = rng.gen_range(0..3);
    let cross: Box<dyn Fn(usize, usize) -> f64> = match mode {
        0 => {
            let table = ints(rng, n * n, 0, 2);
            Box::new(move |i, j| table[i * n + j])
        }
        1 => {
            let q = ints(rng, n, -3, 3);
            Box::new(move |i, j| q[i] + q[j])
        }
        _ => {
            let tree = WeightedTree::random(blocks.len(), rng);
            let d = tree.distances();
            let p = ints(rng, n, -3, 3);
            let of = of.clone();
            Box::new(move |i, j| p[i] + p[j] - d[of[i]][of[j]])
        }
    };
    let mut quad = PairMatrix::from_fn(n, |i, j| if of[i] == of[j] { INF } else { v(cross(i, j)) });
    for i in 0..n {
        for j in i + 1..n {
            if of[i] != of[j] && rng.gen_bool(noise_rate) {
                let x = quad.get(i, j);
                quad.set(i, j, x.shift(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }));
            }
        }
    }
    QuadraticInstance::new(r, linear, quad).unwrap()
}

/// Set exchange property on explicit supports, by definition.
pub fn set_exchange_holds(supports: &[Vec<usize>]) -> bool {
    use std::collections::BTreeSet;
    let family: BTreeSet<Vec<usize>> = supports.iter().cloned().collect();
    for x in &family {
        for y in &family {
            for &i in x.iter().filter(|i| !y.contains(i)) {
                let swap = |s: &Vec<usize>, out: usize, inn: usize| {
                    let mut z: Vec<usize> = s.iter().copied().filter(|&e| e != out).collect();
                    z.push(inn);
                    z.sort_unstable();
                    z
                };
                let ok = y
                    .iter()
                    .filter(|j| !x.contains(j))
                    .any(|&j| family.contains(&swap(x, i, j)) && family.contains(&swap(y, j, i)));
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// Maximum stable set size of a graph given by adjacency bitmasks.
pub fn max_stable_set(adj: &[u64]) -> usize {
    let n = adj.len();
    (0u64..1 << n)
        .filter(|&s| (0..n).all(|v| s & (1 << v) == 0 || adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
