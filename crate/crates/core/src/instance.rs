//! Instance model: the quadratic function
//! `f(x) = Σ a_i x_i + Σ_{i<j} a_ij x_i x_j` on `{x ∈ {0,1}^n : Σ x_i = r}`.
//!
//! Indices are 0-based everywhere in the library and 1-based in files and
//! witnesses.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::value::ExtValue;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("malformed instance document: {0}")]
    Malformed(String),
    #[error("n must be at least 2, got {0}")]
    TooFewVariables(usize),
    #[error("r = {r} is outside [1, {max}]")]
    CardinalityOutOfRange { r: usize, max: usize },
    #[error("expected {expected} linear coefficients, got {got}")]
    LinearLength { expected: usize, got: usize },
    #[error("linear coefficient a_{index} must be finite")]
    InfiniteLinear { index: usize },
    #[error("index {index} out of range [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("diagonal entry ({0}, {0}) is not part of the model")]
    DiagonalEntry(usize),
    #[error("asymmetric entry: ({i}, {j}) given as both {first} and {second}")]
    AsymmetricEntry {
        i: usize,
        j: usize,
        first: ExtValue,
        second: ExtValue,
    },
    #[error("not a permutation of [{0}]")]
    NotAPermutation(usize),
    #[error("expected {expected} potentials, got {got}")]
    PotentialLength { expected: usize, got: usize },
}

/// Symmetric `n × n` matrix of extended values with no diagonal, stored as
/// the packed strict upper triangle.
#[derive(Clone, PartialEq)]
pub struct PairMatrix {
    n: usize,
    data: Vec<ExtValue>,
}

impl PairMatrix {
    pub fn filled(n: usize, value: ExtValue) -> Self {
        PairMatrix {
            n,
            data: vec![value; n * n.saturating_sub(1) / 2],
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::filled(n, ExtValue::ZERO)
    }

    /// Builds from a closure evaluated once per pair `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ExtValue) -> Self {
        let mut data = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                data.push(f(i, j));
            }
        }
        PairMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(
            i != j && j < self.n,
            "pair ({i}, {j}) invalid for n = {}",
            self.n
        );
        // rows 0..i contribute (n-1) + (n-2) + ... + (n-i) entries
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// Entry `a_ij`; order of `i`, `j` is irrelevant. Panics when `i == j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ExtValue {
        assert!(i != j, "diagonal entries are not defined");
        self.data[self.offset(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: ExtValue) {
        assert!(i != j, "diagonal entries are not defined");
        let k = self.offset(i, j);
        self.data[k] = v;
    }

    /// Pairs `(i, j, a_ij)` with `i < j` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, ExtValue)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.data.iter().copied())
            .map(|((i, j), v)| (i, j, v))
    }

    pub fn values(&self) -> &[ExtValue] {
        &self.data
    }
}

impl std::fmt::Debug for PairMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (i, j, v) in self.pairs() {
            m.entry(&(i + 1, j + 1), &v);
        }
        m.finish()
    }
}

/// `(n, r, a_i, a_ij)`. Symmetric by construction since only one triangle is
/// stored; validated on every constructor.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticInstance {
    r: usize,
    linear: Vec<f64>,
    quad: PairMatrix,
}

impl QuadraticInstance {
    pub fn new(r: usize, linear: Vec<f64>, quad: PairMatrix) -> Result<Self, InstanceError> {
        let n = quad.n();
        if n < 2 {
            return Err(InstanceError::TooFewVariables(n));
        }
        if r < 1 || r > n - 1 {
            return Err(InstanceError::CardinalityOutOfRange { r, max: n - 1 });
        }
        if linear.len() != n {
            return Err(InstanceError::LinearLength {
                expected: n,
                got: linear.len(),
            });
        }
        if let Some(index) = linear.iter().position(|v| !v.is_finite()) {
            return Err(InstanceError::InfiniteLinear { index: index + 1 });
        }
        Ok(QuadraticInstance { r, linear, quad })
    }

    /// Zero linear part.
    pub fn from_quad(r: usize, quad: PairMatrix) -> Result<Self, InstanceError> {
        let n = quad.n();
        Self::new(r, vec![0.0; n], quad)
    }

    /// Builds from 1-based `(i, j, value)` triples; unlisted pairs are 0.
    pub fn from_entries(
        n: usize,
        r: usize,
        entries: &[(usize, usize, ExtValue)],
    ) -> Result<Self, InstanceError> {
        let mut quad = PairMatrix::zeros(n);
        let mut seen: Vec<Option<ExtValue>> = vec![None; n * n.saturating_sub(1) / 2];
        for &(i, j, v) in entries {
            for idx in [i, j] {
                if idx < 1 || idx > n {
                    return Err(InstanceError::IndexOutOfRange { index: idx, n });
                }
            }
            if i == j {
                return Err(InstanceError::DiagonalEntry(i));
            }
            let (i0, j0) = (i - 1, j - 1);
            let k = quad.offset(i0, j0);
            match seen[k] {
                Some(prev) if prev.to_f64().to_bits() != v.to_f64().to_bits() => {
                    return Err(InstanceError::AsymmetricEntry {
                        i: i.min(j),
                        j: i.max(j),
                        first: prev,
                        second: v,
                    });
                }
                _ => {}
            }
            seen[k] = Some(v);
            quad.set(i0, j0, v);
        }
        Self::from_quad(r, quad)
    }

    pub fn n(&self) -> usize {
        self.quad.n()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn quad(&self) -> &PairMatrix {
        &self.quad
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> ExtValue {
        self.quad.get(i, j)
    }

    pub fn with_linear(&self, linear: Vec<f64>) -> Result<Self, InstanceError> {
        Self::new(self.r, linear, self.quad.clone())
    }

    pub fn with_r(&self, r: usize) -> Result<Self, InstanceError> {
        Self::new(r, self.linear.clone(), self.quad.clone())
    }

    pub(crate) fn with_quad_unchecked(&self, quad: PairMatrix) -> Self {
        debug_assert_eq!(quad.n(), self.n());
        QuadraticInstance {
            r: self.r,
            linear: self.linear.clone(),
            quad,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Document {
    n: usize,
    r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    linear: Option<Vec<f64>>,
    #[serde(default)]
    quad: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    i: usize,
    j: usize,
    v: ExtValue,
}

/// Parses the JSON instance format.
pub fn parse_instance(text: &str) -> Result<QuadraticInstance, InstanceError> {
    let doc: Document =
        serde_json::from_str(text).map_err(|e| InstanceError::Malformed(e.to_string()))?;
    if doc.n < 2 {
        return Err(InstanceError::TooFewVariables(doc.n));
    }
    let entries: Vec<_> = doc.quad.iter().map(|e| (e.i, e.j, e.v)).collect();
    let inst = QuadraticInstance::from_entries(doc.n, doc.r, &entries)?;
    match doc.linear {
        Some(linear) => inst.with_linear(linear),
        None => Ok(inst),
    }
}

/// Writes the JSON instance format: keys in fixed order, entries sorted by
/// `(i, j)`, positive zeros omitted.
pub fn serialize_instance(instance: &QuadraticInstance) -> String {
    let quad = instance
        .quad
        .pairs()
        .filter(|(_, _, v)| v.to_f64().to_bits() != 0)
        .map(|(i, j, v)| Entry {
            i: i + 1,
            j: j + 1,
            v,
        })
        .collect();
    let doc = Document {
        n: instance.n(),
        r: instance.r,
        linear: Some(instance.linear.clone()),
        quad,
    };
    serde_json::to_string(&doc).expect("instance serialization cannot fail")
}

/// `a'_ij = a_ij + p_i + p_j`; infinities and linear terms unchanged.
pub fn apply_potential(
    instance: &QuadraticInstance,
    p: &[f64],
) -> Result<QuadraticInstance, InstanceError> {
    let n = instance.n();
    if p.len() != n {
        return Err(InstanceError::PotentialLength {
            expected: n,
            got: p.len(),
        });
    }
    if let Some(index) = p.iter().position(|v| !v.is_finite()) {
        return Err(InstanceError::InfiniteLinear { index: index + 1 });
    }
    let quad = PairMatrix::from_fn(n, |i, j| instance.a(i, j).shift(p[i] + p[j]));
    Ok(instance.with_quad_unchecked(quad))
}

/// A bijection on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self, InstanceError> {
        let n = map.len();
        let mut hit = vec![false; n];
        for &k in &map {
            if k >= n || hit[k] {
                return Err(InstanceError::NotAPermutation(n));
            }
            hit[k] = true;
        }
        Ok(Permutation(map))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &k) in self.0.iter().enumerate() {
            inv[k] = i;
        }
        Permutation(inv)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// `a'_{π(i)π(j)} = a_ij`, `a'_{π(i)} = a_i`.
pub fn relabel(
    instance: &QuadraticInstance,
    perm: &Permutation,
) -> Result<QuadraticInstance, InstanceError> {
    let n = instance.n();
    if perm.len() != n {
        return Err(InstanceError::NotAPermutation(n));
    }
    let mut quad = PairMatrix::zeros(n);
    for (i, j, v) in instance.quad.pairs() {
        quad.set(perm.apply(i), perm.apply(j), v);
    }
    let mut linear = vec![0.0; n];
    for (i, &v) in instance.linear.iter().enumerate() {
        linear[perm.apply(i)] = v;
    }
    QuadraticInstance::new(instance.r, linear, quad)
}
