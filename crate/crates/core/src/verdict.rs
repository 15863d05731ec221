//! Decision results and the witnesses that back a negative answer.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::instance::QuadraticInstance;
use crate::oracle::evaluate;
use crate::structure::TypeClass;
use crate::value::{ExtValue, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    MConvex,
    NotMConvex,
    Undecided,
    InvalidInstance,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::MConvex => "m_convex",
            Status::NotMConvex => "not_m_convex",
            Status::Undecided => "undecided",
            Status::InvalidInstance => "invalid_instance",
        }
    }

    /// Process exit code for the `test` family of commands.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::MConvex => 0,
            Status::NotMConvex => 1,
            Status::Undecided => 2,
            Status::InvalidInstance => 3,
        }
    }
}

/// Which procedure produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    /// `r ∈ {1, n−1}`: only the domain matters.
    #[serde(rename = "short-circuit")]
    ShortCircuit,
    #[serde(rename = "condition-b")]
    ConditionB,
    #[serde(rename = "algorithm-I")]
    AlgorithmI,
    #[serde(rename = "algorithm-II")]
    AlgorithmII,
    #[serde(rename = "algorithm-III")]
    AlgorithmIII,
    #[serde(rename = "domain-empty")]
    DomainEmpty,
    #[serde(rename = "oracle-exchange")]
    OracleExchange,
    #[serde(rename = "oracle-local")]
    OracleLocal,
    /// Condition B fails and the instance is too large for brute force.
    #[serde(rename = "budget-exhausted")]
    BudgetExhausted,
}

/// Which quadruple inequality a [`Witness::QuadrupleViolation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadrupleCondition {
    /// `a_ij + a_kl ≥ min(a_ik + a_jl, a_il + a_jk)` over all orderings of a
    /// 4-set; broken iff one of the three pair sums is strictly the smallest.
    /// Indices are sorted and `sums` lists `[a_ij+a_kl, a_ik+a_jl, a_il+a_jk]`.
    AntiTreeMetric,
    /// `a_ij + a_kl = a_il + a_kj` with `i, k` in one block and `j, l` outside
    /// it. `sums` lists `[a_ij+a_kl, a_il+a_kj]`.
    CrossEquality,
}

/// A machine-checkable reason for `not_m_convex`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// No `j ∈ y∖x` satisfies the exchange inequality for `i ∈ x∖y`.
    ExchangeViolation {
        x: Vec<usize>,
        y: Vec<usize>,
        i: usize,
    },
    QuadrupleViolation {
        condition: QuadrupleCondition,
        indices: [usize; 4],
        sums: Vec<ExtValue>,
    },
    /// `{i,j}` and `{j,k}` are infinite, `{i,k}` is finite.
    DomainViolation { i: usize, j: usize, k: usize },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::ExchangeViolation { .. } => "exchange_violation",
            Witness::QuadrupleViolation { .. } => "quadruple_violation",
            Witness::DomainViolation { .. } => "domain_violation",
        }
    }

    /// Re-evaluates the violated inequality directly on `instance`.
    pub fn verify(&self, instance: &QuadraticInstance, tol: Tolerance) -> bool {
        let n = instance.n();
        match self {
            Witness::DomainViolation { i, j, k } => {
                let (i, j, k) = (*i, *j, *k);
                i < n
                    && j < n
                    && k < n
                    && i != j
                    && j != k
                    && i != k
                    && instance.a(i, j).is_infinite()
                    && instance.a(j, k).is_infinite()
                    && instance.a(i, k).is_finite()
            }
            Witness::QuadrupleViolation {
                condition, indices, ..
            } => {
                let [i, j, k, l] = *indices;
                let distinct = [i, j, k, l].iter().all(|&v| v < n)
                    && i != j
                    && i != k
                    && i != l
                    && j != k
                    && j != l
                    && k != l;
                if !distinct {
                    return false;
                }
                let a = |p: usize, q: usize| instance.a(p, q);
                match condition {
                    QuadrupleCondition::AntiTreeMetric => {
                        let s = [a(i, j) + a(k, l), a(i, k) + a(j, l), a(i, l) + a(j, k)];
                        (0..3).any(|t| {
                            let others = (0..3).filter(|&u| u != t).map(|u| s[u]).min().unwrap();
                            tol.gt(others, s[t])
                        })
                    }
                    QuadrupleCondition::CrossEquality => {
                        let lhs = a(i, j) + a(k, l);
                        let rhs = a(i, l) + a(k, j);
                        lhs.is_finite() && rhs.is_finite() && !tol.eq(lhs, rhs)
                    }
                }
            }
            Witness::ExchangeViolation { x, y, i } => {
                let fx = evaluate(instance, x);
                let fy = evaluate(instance, y);
                if fx.is_infinite() || fy.is_infinite() {
                    return false;
                }
                if !x.contains(i) || y.contains(i) {
                    return false;
                }
                let total = fx + fy;
                y.iter().filter(|j| !x.contains(j)).all(|&j| {
                    let x2: Vec<usize> = x.iter().map(|&v| if v == *i { j } else { v }).collect();
                    let y2: Vec<usize> = y.iter().map(|&v| if v == j { *i } else { v }).collect();
                    !tol.ge(total, evaluate(instance, &x2) + evaluate(instance, &y2))
                })
            }
        }
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|&k| k + 1).collect()
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Witness::ExchangeViolation { x, y, i } => {
                let mut st = s.serialize_struct("Witness", 4)?;
                st.serialize_field("kind", self.kind())?;
                st.serialize_field("x", &one_based(x))?;
                st.serialize_field("y", &one_based(y))?;
                st.serialize_field("i", &(i + 1))?;
                st.end()
            }
            Witness::QuadrupleViolation {
                condition,
                indices,
                sums,
            } => {
                let mut st = s.serialize_struct("Witness", 4)?;
                st.serialize_field("kind", self.kind())?;
                st.serialize_field("condition", condition)?;
                st.serialize_field("indices", &one_based(indices))?;
                st.serialize_field("sums", sums)?;
                st.end()
            }
            Witness::DomainViolation { i, j, k } => {
                let mut st = s.serialize_struct("Witness", 2)?;
                st.serialize_field("kind", self.kind())?;
                st.serialize_field("triple", &[i + 1, j + 1, k + 1])?;
                st.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub method: Method,
    pub type_class: Option<TypeClass>,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn new(status: Status, method: Method) -> Self {
        Verdict {
            status,
            method,
            type_class: None,
            witness: None,
        }
    }

    pub fn with_type(mut self, t: TypeClass) -> Self {
        self.type_class = Some(t);
        self
    }

    pub fn with_witness(mut self, w: Option<Witness>) -> Self {
        self.witness = w;
        self
    }

    pub fn is_m_convex(&self) -> bool {
        self.status == Status::MConvex
    }

    /// The JSON report: `status`, `method`, `type`, `witness`, `epsilon`.
    pub fn report(&self, epsilon: f64) -> VerdictReport<'_> {
        VerdictReport {
            status: self.status,
            method: self.method,
            r#type: self
                .type_class
                .filter(|t| *t != TypeClass::DomEmpty)
                .map(TypeClass::label),
            witness: self.witness.as_ref(),
            epsilon,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerdictReport<'a> {
    pub status: Status,
    pub method: Method,
    #[serde(rename = "type")]
    pub r#type: Option<&'static str>,
    pub witness: Option<&'a Witness>,
    pub epsilon: f64,
}
