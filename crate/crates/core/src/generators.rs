//! Instance generators: tree-metric Type I instances, linear Type II/III
//! instances, perturbations, and the stable-set reduction with its padding
//! construction.
//!
//! Every random generator is a pure function of its seed.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{apply_potential, InstanceError, PairMatrix, QuadraticInstance};
use crate::oracle::binomial;
use crate::value::ExtValue;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("need n >= 4 and 2 <= r <= n - 2, got n = {n}, r = {r}")]
    Shape { n: usize, r: usize },
    #[error("{blocks} blocks fit neither r + 1 = {} (type II) nor r = {r} (type III)", r + 1)]
    BlockCount { blocks: usize, r: usize },
    #[error("block sizes must be positive")]
    EmptyBlock,
    #[error("pair ({i}, {j}) is infinite")]
    InfinitePair { i: usize, j: usize },
    #[error("edge ({0}, {1}) is invalid")]
    BadEdge(usize, usize),
    #[error("padding size must be at least 1")]
    ZeroPadding,
    #[error("graph has no stable set of size {0}")]
    NoStableSet(usize),
    #[error("C({n},{r}) exceeds the enumeration budget {budget}")]
    Budget { n: usize, r: usize, budget: u64 },
    #[error("malformed edge list: {0}")]
    EdgeList(String),
    #[error("no cross pair can be perturbed into a violation")]
    NothingToPerturb,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Undirected graph on `0..n`, no loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    /// Duplicate edges collapse; loops and out-of-range endpoints are errors.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GenError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(GenError::BadEdge(u, v));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(SimpleGraph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// `G(n, p)` with the given seed.
    pub fn random(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = rng(seed);
        let mut edges = BTreeSet::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.insert((u, v));
                }
            }
        }
        SimpleGraph { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        SimpleGraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle on n >= 3")
    }

    /// Edge-list text: first line `n m`, then `m` lines `u v`, 1-based.
    pub fn parse_edge_list(text: &str) -> Result<Self, GenError> {
        let mut nums = text.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|e| GenError::EdgeList(format!("{t:?}: {e}")))
        });
        let mut next = |what: &str| {
            nums.next()
                .unwrap_or_else(|| Err(GenError::EdgeList(format!("missing {what}"))))
        };
        let n = next("vertex count")?;
        let m = next("edge count")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let u = next("edge endpoint")?;
            let v = next("edge endpoint")?;
            if u == 0 || v == 0 {
                return Err(GenError::BadEdge(u, v));
            }
            edges.push((u - 1, v - 1));
        }
        if next("end of input").is_ok() {
            return Err(GenError::EdgeList("more edges than declared".into()));
        }
        SimpleGraph::new(n, edges)
    }

    fn adjacency_masks(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }
}

/// Tree with positive integer edge weights and `n` labelled nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree {
    node_count: usize,
    edges: Vec<(usize, usize, f64)>,
    /// `labels[i]` is the node carrying index `i`.
    labels: Vec<usize>,
}

impl WeightedTree {
    pub fn new(node_count: usize, edges: Vec<(usize, usize, f64)>, labels: Vec<usize>) -> Self {
        assert_eq!(
            edges.len() + 1,
            node_count,
            "a tree has node_count - 1 edges"
        );
        assert!(
            edges.iter().all(|&(_, _, w)| w > 0.0),
            "weights must be positive"
        );
        WeightedTree {
            node_count,
            edges,
            labels,
        }
    }

    /// Star with `n` labelled leaves around an unlabelled centre.
    pub fn star(n: usize, weight: f64) -> Self {
        let edges = (1..=n).map(|leaf| (0, leaf, weight)).collect();
        WeightedTree::new(n + 1, edges, (1..=n).collect())
    }

    /// Uniform recursive attachment on `2n − 2` nodes (node `t` hangs off a
    /// uniform earlier node), weights uniform in `1..=10`, labels on `n`
    /// distinct uniformly chosen nodes.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let node_count = (2 * n).saturating_sub(2).max(n);
        let edges = (1..node_count)
            .map(|t| (rng.gen_range(0..t), t, f64::from(rng.gen_range(1..=10u32))))
            .collect();
        let mut nodes: Vec<usize> = (0..node_count).collect();
        nodes.shuffle(rng);
        nodes.truncate(n);
        WeightedTree::new(node_count, edges, nodes)
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    /// Path-length metric between labelled nodes.
    pub fn distances(&self) -> Vec<Vec<f64>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut dist_from = vec![0.0; self.node_count];
        let mut seen = vec![usize::MAX; self.node_count];
        let mut stack = Vec::new();
        let mut out = Vec::with_capacity(self.labels.len());
        for (src_label, &src) in self.labels.iter().enumerate() {
            seen[src] = src_label;
            dist_from[src] = 0.0;
            stack.push(src);
            while let Some(u) = stack.pop() {
                for &(v, w) in &adj[u] {
                    if seen[v] != src_label {
                        seen[v] = src_label;
                        dist_from[v] = dist_from[u] + w;
                        stack.push(v);
                    }
                }
            }
            out.push(self.labels.iter().map(|&t| dist_from[t]).collect());
        }
        out
    }
}

/// `a_ij = offset − d_T(i, j)`, zero linear part.
pub fn tree_metric_instance(
    tree: &WeightedTree,
    r: usize,
    offset: f64,
) -> Result<QuadraticInstance, GenError> {
    let d = tree.distances();
    let quad = PairMatrix::from_fn(tree.leaf_count(), |i, j| ExtValue::from(offset - d[i][j]));
    Ok(QuadraticInstance::from_quad(r, quad)?)
}

fn check_shape(n: usize, r: usize) -> Result<(), GenError> {
    if n < 4 || r < 2 || r > n - 2 {
        return Err(GenError::Shape { n, r });
    }
    Ok(())
}

fn random_integers(rng: &mut impl Rng, n: usize, lo: i32, hi: i32) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.gen_range(lo..=hi))).collect()
}

/// All-finite (Type I) instance from a random tree metric, with random
/// integer linear terms and, for odd draws, a random integer potential.
/// M-convex by construction.
pub fn gen_tree_metric_type1(n: usize, r: usize, seed: u64) -> Result<QuadraticInstance, GenError> {
    check_shape(n, r)?;
    let mut rng = rng(seed);
    let tree = WeightedTree::random(n, &mut rng);
    let mut inst = tree_metric_instance(&tree, r, 0.0)?;
    if rng.gen_bool(0.5) {
        let p = random_integers(&mut rng, n, -5, 5);
        inst = apply_potential(&inst, &p)?;
    }
    let linear = random_integers(&mut rng, n, -5, 5);
    Ok(inst.with_linear(linear)?)
}

/// `a_ij = +∞` inside each block of size ≥ 2 and `q_i + q_j` elsewhere.
pub fn linear_typed_instance(
    blocks: &[Vec<usize>],
    r: usize,
    q: &[f64],
    linear: Vec<f64>,
) -> Result<QuadraticInstance, GenError> {
    let n = q.len();
    let mut block_of = vec![usize::MAX; n];
    for (b, members) in blocks.iter().enumerate() {
        for &v in members {
            block_of[v] = b;
        }
    }
    let quad = PairMatrix::from_fn(n, |i, j| {
        if block_of[i] == block_of[j] {
            ExtValue::INFINITY
        } else {
            ExtValue::from(q[i] + q[j])
        }
    });
    Ok(QuadraticInstance::new(r, linear, quad)?)
}

fn random_blocks(
    sizes: &[usize],
    r: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Vec<usize>>, GenError> {
    if sizes.contains(&0) {
        return Err(GenError::EmptyBlock);
    }
    if sizes.len() != r + 1 && sizes.len() != r {
        return Err(GenError::BlockCount {
            blocks: sizes.len(),
            r,
        });
    }
    let n: usize = sizes.iter().sum();
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut blocks = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &s in sizes {
        let mut b = labels[at..at + s].to_vec();
        b.sort_unstable();
        blocks.push(b);
        at += s;
    }
    Ok(blocks)
}

/// Type II (`sizes.len() = r + 1`) or Type III (`sizes.len() = r`) instance
/// that is linear across blocks, hence M-convex. Block membership is a
/// random relabelling; `q_i` and `a_i` are integers in `[−5, 5]`.
pub fn gen_linear_typed(
    sizes: &[usize],
    r: usize,
    seed: u64,
) -> Result<QuadraticInstance, GenError> {
    let mut rng = rng(seed);
    let blocks = random_blocks(sizes, r, &mut rng)?;
    let n: usize = sizes.iter().sum();
    let q = random_integers(&mut rng, n, -5, 5);
    let linear = random_integers(&mut rng, n, -5, 5);
    linear_typed_instance(&blocks, r, &q, linear)
}

/// `a_ij += delta` on a finite pair.
pub fn perturb(
    instance: &QuadraticInstance,
    pair: (usize, usize),
    delta: f64,
) -> Result<QuadraticInstance, GenError> {
    let (i, j) = pair;
    let n = instance.n();
    if i == j || i >= n || j >= n {
        return Err(GenError::BadEdge(i, j));
    }
    let v = instance.a(i, j);
    if v.is_infinite() {
        return Err(GenError::InfinitePair { i, j });
    }
    let mut quad = instance.quad().clone();
    quad.set(i, j, v.shift(delta));
    Ok(QuadraticInstance::new(
        instance.r(),
        instance.linear().to_vec(),
        quad,
    )?)
}

/// A [`gen_linear_typed`] instance with one constrained cross pair moved by
/// `+1`, which breaks one of the cross equalities. Needs a big block, and
/// for Type III two of them.
pub fn gen_perturbed_linear(
    sizes: &[usize],
    r: usize,
    seed: u64,
) -> Result<QuadraticInstance, GenError> {
    let mut rng = rng(seed);
    let blocks = random_blocks(sizes, r, &mut rng)?;
    let n: usize = sizes.iter().sum();
    let q = random_integers(&mut rng, n, -5, 5);
    let linear = random_integers(&mut rng, n, -5, 5);
    let inst = linear_typed_instance(&blocks, r, &q, linear)?;
    let big: Vec<&Vec<usize>> = blocks.iter().filter(|b| b.len() >= 2).collect();
    let type3 = sizes.len() == r;
    let row_block = big.choose(&mut rng).ok_or(GenError::NothingToPerturb)?;
    let i = *row_block.choose(&mut rng).expect("non-empty block");
    let columns: Vec<usize> = if type3 {
        big.iter()
            .filter(|b| *b != row_block)
            .flat_map(|b| b.iter().copied())
            .collect()
    } else {
        (0..n).filter(|v| !row_block.contains(v)).collect()
    };
    let j = *columns.choose(&mut rng).ok_or(GenError::NothingToPerturb)?;
    perturb(&inst, (i, j), 1.0)
}

/// `f_G`: `a_ij = +∞` on edges, `0` elsewhere, no linear part. Its domain
/// is the family of stable `r`-sets of `G`.
pub fn build_f_graph(graph: &SimpleGraph, r: usize) -> Result<QuadraticInstance, GenError> {
    let quad = PairMatrix::from_fn(graph.n(), |i, j| {
        if graph.has_edge(i, j) {
            ExtValue::INFINITY
        } else {
            ExtValue::ZERO
        }
    });
    Ok(QuadraticInstance::from_quad(r, quad)?)
}

/// `G_m`: adds `m` new vertices, each adjacent to every original vertex and
/// to none of the new ones.
pub fn pad_graph(graph: &SimpleGraph, m: usize) -> Result<SimpleGraph, GenError> {
    if m == 0 {
        return Err(GenError::ZeroPadding);
    }
    let n = graph.n();
    let extra = (0..n).flat_map(|u| (n..n + m).map(move |v| (u, v)));
    SimpleGraph::new(n + m, graph.edges().chain(extra))
}

/// Problem (P) by enumeration: with `T` the union of all stable `r`-sets,
/// is every component of `G[T]` a clique?
pub fn solve_problem_p(graph: &SimpleGraph, r: usize, budget: u64) -> Result<bool, GenError> {
    let n = graph.n();
    if n > 64 || binomial(n, r) > budget as u128 {
        return Err(GenError::Budget { n, r, budget });
    }
    let adj = graph.adjacency_masks();
    let mut union = 0u64;
    let mut found = false;
    let mut comb: Vec<usize> = (0..r).collect();
    if r <= n {
        loop {
            let mask = comb.iter().fold(0u64, |m, &v| m | 1 << v);
            if comb.iter().all(|&v| adj[v] & mask == 0) {
                union |= mask;
                found = true;
            }
            let mut t = r;
            while t > 0 && comb[t - 1] == n - r + t - 1 {
                t -= 1;
            }
            if t == 0 {
                break;
            }
            comb[t - 1] += 1;
            for u in t..r {
                comb[u] = comb[u - 1] + 1;
            }
        }
    }
    if !found {
        return Err(GenError::NoStableSet(r));
    }
    // components of G[T] are cliques iff no induced path u - v - w with u, w apart
    for v in 0..n {
        if union & (1 << v) == 0 {
            continue;
        }
        let nb = adj[v] & union;
        let mut rest = nb;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // every other neighbour of v in T must be adjacent to u
            if (nb & !(1u64 << u)) & !adj[u] != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
