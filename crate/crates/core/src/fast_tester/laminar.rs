use crate::instance::PairMatrix;
use crate::value::{ExtValue, Tolerance};

use super::NormalizedMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct LaminarNode {
    /// Sorted members of the set `U`.
    pub members: Vec<usize>,
    /// Plateau value `c_U`.
    pub value: ExtValue,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Rooted tree of nested subsets of `0..n` with plateau values. Node 0 is
/// the root `[n]`; a child's value is strictly larger than its parent's.
#[derive(Debug, Clone, PartialEq)]
pub struct LaminarFamily {
    n: usize,
    nodes: Vec<LaminarNode>,
}

impl LaminarFamily {
    /// Family `{[n]}` with root value `alpha`.
    pub fn root(n: usize, alpha: ExtValue) -> Self {
        LaminarFamily {
            n,
            nodes: vec![LaminarNode {
                members: (0..n).collect(),
                value: alpha,
                parent: None,
                children: Vec::new(),
            }],
        }
    }

    /// Adds `members` (sorted) under `parent` and returns its id. Callers
    /// keep the family laminar; [`LaminarFamily::is_valid`] checks it.
    pub fn insert(&mut self, parent: usize, members: Vec<usize>, value: ExtValue) -> usize {
        let id = self.nodes.len();
        self.nodes.push(LaminarNode {
            members,
            value,
            parent: Some(parent),
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[LaminarNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Root is `[n]`, children are disjoint proper subsets of their parent,
    /// and values strictly increase from parent to child.
    pub fn is_valid(&self) -> bool {
        let root = &self.nodes[0];
        if root.parent.is_some() || root.members != (0..self.n).collect::<Vec<_>>() {
            return false;
        }
        let mut seen = vec![usize::MAX; self.n];
        for (id, node) in self.nodes.iter().enumerate() {
            if !node.members.windows(2).all(|w| w[0] < w[1]) {
                return false;
            }
            for &c in &node.children {
                let child = &self.nodes[c];
                if child.parent != Some(id)
                    || child.value <= node.value
                    || child.members.len() >= node.members.len()
                {
                    return false;
                }
                for &v in &child.members {
                    if node.members.binary_search(&v).is_err() || seen[v] == id {
                        return false;
                    }
                    seen[v] = id;
                }
            }
        }
        true
    }
}

/// Builds the plateau family of `ahat`, starting from `{[n]}` at level
/// `alpha`.
///
/// For a set `U` at inherited level `w`: pivot on the smallest member `i`,
/// take `e = min_{j∈U∖i} â_ij` and its argmin set `X`; if `e > w` record `U`
/// at level `e`. Then recurse on `X` and `U∖X`. Work is `O(n²)`.
pub fn decompose(ahat: &NormalizedMatrix, tol: Tolerance) -> LaminarFamily {
    let n = ahat.n();
    let alpha = ExtValue::from(ahat.alpha);
    let mut family = LaminarFamily::root(n, alpha);
    let m = &ahat.ahat;
    let mut stack: Vec<(Vec<usize>, ExtValue, usize)> = vec![((0..n).collect(), alpha, 0)];
    while let Some((set, w, mut parent)) = stack.pop() {
        if set.len() <= 1 || w.is_infinite() {
            continue;
        }
        let pivot = set[0];
        let e = set[1..]
            .iter()
            .map(|&j| m.get(pivot, j))
            .min()
            .expect("set has at least two members");
        let (near, far): (Vec<usize>, Vec<usize>) = set
            .iter()
            .partition(|&&j| j != pivot && tol.eq(m.get(pivot, j), e));
        let mut level = w;
        if tol.gt(e, w) {
            parent = if parent == 0 && set.len() == n {
                // the root already stands for [n]
                family.nodes[0].value = e;
                0
            } else {
                family.insert(parent, set, e)
            };
            level = e;
        }
        stack.push((far, level, parent));
        stack.push((near, level, parent));
    }
    family
}

/// Calls `assign(i, j, c_U)` once for every pair `i < j`, where `U` is the
/// smallest member of the family containing both.
///
/// Children are handled before parents: inside each `U` the pairs left to
/// assign are those split between two different parts, a part being either
/// a child set or a single member not covered by any child.
pub fn for_each_assignment(family: &LaminarFamily, mut assign: impl FnMut(usize, usize, ExtValue)) {
    let n = family.n;
    let mut part_of = vec![usize::MAX; n];
    // reverse insertion order visits every child before its parent
    for id in (0..family.nodes.len()).rev() {
        let node = &family.nodes[id];
        for &v in &node.members {
            part_of[v] = usize::MAX;
        }
        for (p, &c) in node.children.iter().enumerate() {
            for &v in &family.nodes[c].members {
                part_of[v] = p;
            }
        }
        let mut singleton = node.children.len();
        for &v in &node.members {
            if part_of[v] == usize::MAX {
                part_of[v] = singleton;
                singleton += 1;
            }
        }
        for (t, &i) in node.members.iter().enumerate() {
            for &j in &node.members[t + 1..] {
                if part_of[i] != part_of[j] {
                    assign(i, j, node.value);
                }
            }
        }
    }
}

/// Matrix `a'_ij = c_{U(i,j)}` carried by the family.
pub fn reconstruct(family: &LaminarFamily) -> PairMatrix {
    let mut out = PairMatrix::filled(family.n, ExtValue::INFINITY);
    for_each_assignment(family, |i, j, v| out.set(i, j, v));
    out
}

/// True iff `â` is anti-ultrametric, decided as
/// `reconstruct(decompose(â)) == â` (finite entries within tolerance,
/// infinities exactly).
pub fn check_anti_ultrametric(ahat: &NormalizedMatrix, tol: Tolerance) -> bool {
    let family = decompose(ahat, tol);
    let rebuilt = reconstruct(&family);
    rebuilt
        .values()
        .iter()
        .zip(ahat.ahat.values())
        .all(|(&a, &b)| tol.eq(a, b))
}
