//! The infinity graph `G_f`, its components and the Type I/II/III split.

use serde::Serialize;

use crate::instance::QuadraticInstance;
use crate::verdict::Witness;

/// Graph on `0..n` with an edge wherever `a_ij = +∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinityGraph {
    adjacency: Vec<Vec<usize>>,
}

impl InfinityGraph {
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }
}

pub fn build_infinity_graph(instance: &QuadraticInstance) -> InfinityGraph {
    let n = instance.n();
    let mut adjacency = vec![Vec::new(); n];
    for (i, j, v) in instance.quad().pairs() {
        if v.is_infinite() {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }
    // pairs() is lexicographic, so each list is already sorted
    InfinityGraph { adjacency }
}

/// Partition of `0..n` into the components of `G_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    n: usize,
    /// `A_1..A_m`: components with at least two vertices, ordered by smallest
    /// member, each sorted ascending.
    big: Vec<Vec<usize>>,
    /// `A_0`, sorted.
    isolated: Vec<usize>,
    /// For each vertex, the index into `big`, or `None` if isolated.
    big_of: Vec<Option<usize>>,
}

impl ComponentDecomposition {
    pub fn big(&self) -> &[Vec<usize>] {
        &self.big
    }

    pub fn isolated(&self) -> &[usize] {
        &self.isolated
    }

    /// Number of big components `m`.
    pub fn m(&self) -> usize {
        self.big.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|A_0| + m`: the number of blocks a domain point can draw from.
    pub fn block_count(&self) -> usize {
        self.isolated.len() + self.big.len()
    }

    pub fn big_component_of(&self, v: usize) -> Option<usize> {
        self.big_of[v]
    }

    /// Every component, singletons included, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = self.big.clone();
        all.extend(self.isolated.iter().map(|&v| vec![v]));
        all.sort_by_key(|c| c[0]);
        all
    }
}

pub fn decompose_components(graph: &InfinityGraph) -> ComponentDecomposition {
    let n = graph.n();
    let mut label = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut comp = vec![s];
        label[s] = id;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in graph.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = id;
                    comp.push(v);
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    // scanning s in increasing order already orders components by smallest member
    let mut big = Vec::new();
    let mut isolated = Vec::new();
    let mut big_of = vec![None; n];
    for comp in comps {
        if comp.len() == 1 {
            isolated.push(comp[0]);
        } else {
            for &v in &comp {
                big_of[v] = Some(big.len());
            }
            big.push(comp);
        }
    }
    ComponentDecomposition {
        n,
        big,
        isolated,
        big_of,
    }
}

/// Condition B: every component of `G_f` is a clique.
///
/// On failure returns `(i, j, k)` with `{i,j}`, `{j,k}` edges and `{i,k}` a
/// non-edge, found from the smallest vertex that misses a member of its
/// component.
pub fn check_condition_b(
    graph: &InfinityGraph,
    decomposition: &ComponentDecomposition,
) -> Result<(), Witness> {
    for comp in decomposition.big() {
        for &v in comp {
            if graph.neighbors(v).len() == comp.len() - 1 {
                continue;
            }
            // some member sits at distance exactly 2 from v
            for &j in graph.neighbors(v) {
                for &k in graph.neighbors(j) {
                    if k != v && !graph.has_edge(v, k) {
                        return Err(Witness::DomainViolation { i: v, j, k });
                    }
                }
            }
            unreachable!("connected non-clique component has a vertex at distance 2");
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TypeClass {
    #[serde(rename = "I")]
    TypeI,
    #[serde(rename = "II")]
    TypeII,
    #[serde(rename = "III")]
    TypeIII,
    #[serde(rename = "dom_empty")]
    DomEmpty,
}

impl TypeClass {
    pub fn label(self) -> &'static str {
        match self {
            TypeClass::TypeI => "I",
            TypeClass::TypeII => "II",
            TypeClass::TypeIII => "III",
            TypeClass::DomEmpty => "dom_empty",
        }
    }
}

/// Classification by `|A_0| + m` against `r`. Meaningful under Condition B.
pub fn classify(decomposition: &ComponentDecomposition, r: usize) -> TypeClass {
    let blocks = decomposition.block_count();
    if blocks >= r + 2 {
        TypeClass::TypeI
    } else if blocks == r + 1 {
        TypeClass::TypeII
    } else if blocks == r {
        TypeClass::TypeIII
    } else {
        TypeClass::DomEmpty
    }
}

/// Under Condition B the domain is the base family of a partition matroid
/// (at most one element per block), so every index lies in some domain point
/// exactly when there are at least `r` blocks.
pub fn check_condition_a_under_b(decomposition: &ComponentDecomposition, r: usize) -> bool {
    decomposition.block_count() >= r
}

/// Structural summary of an instance.
#[derive(Debug, Clone)]
pub struct Structure {
    pub graph: InfinityGraph,
    pub decomposition: ComponentDecomposition,
    pub condition_b: Result<(), Witness>,
}

impl Structure {
    pub fn of(instance: &QuadraticInstance) -> Self {
        let graph = build_infinity_graph(instance);
        let decomposition = decompose_components(&graph);
        let condition_b = check_condition_b(&graph, &decomposition);
        Structure {
            graph,
            decomposition,
            condition_b,
        }
    }

    /// `None` when Condition B fails.
    pub fn type_class(&self, r: usize) -> Option<TypeClass> {
        self.condition_b
            .is_ok()
            .then(|| classify(&self.decomposition, r))
    }
}
