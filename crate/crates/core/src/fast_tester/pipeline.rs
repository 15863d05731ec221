use crate::instance::QuadraticInstance;
use crate::oracle::{binomial, is_mconvex_set, DomainSet, Oracle, DEFAULT_DOMAIN_BUDGET};
use crate::structure::{Structure, TypeClass};
use crate::value::Tolerance;
use crate::verdict::{Method, Status, Verdict};

use super::{find_violation_quadruple, test_type1, test_type2, test_type3};

/// How `test_mconvexity` treats the hard regime and what it reports.
#[derive(Debug, Clone, Copy)]
pub struct Policy {
    /// Trust that every index lies in some domain point. Makes a Condition B
    /// failure conclusive.
    pub assume_condition_a: bool,
    /// Largest `C(n, r)` the brute-force fallback may enumerate.
    pub brute_force_budget: u64,
    /// Attach an `O(n⁴)` quadruple witness to negative fast-path verdicts.
    pub explain: bool,
    pub tol: Tolerance,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            assume_condition_a: false,
            brute_force_budget: DEFAULT_DOMAIN_BUDGET,
            explain: false,
            tol: Tolerance::default(),
        }
    }
}

/// Decides M-convexity.
///
/// 1. `r ∈ {1, n−1}`: `f` is linear on the slice and any two points differ
///    by one swap, so only the emptiness of the domain matters.
/// 2. Condition B fails: conclusive under `assume_condition_a`, otherwise
///    brute force within budget, otherwise `undecided`.
/// 3. Condition B holds: dispatch on the type, or `invalid_instance` when the
///    domain is empty.
pub fn test_mconvexity(instance: &QuadraticInstance, policy: &Policy) -> Verdict {
    let (n, r) = (instance.n(), instance.r());
    if r == 1 || r == n - 1 {
        return short_circuit(instance);
    }

    let s = Structure::of(instance);
    if let Err(witness) = s.condition_b {
        if policy.assume_condition_a {
            return Verdict::new(Status::NotMConvex, Method::ConditionB)
                .with_witness(Some(witness));
        }
        if n <= 64 && binomial(n, r) <= policy.brute_force_budget as u128 {
            let oracle = Oracle::new(policy.tol).with_domain_budget(policy.brute_force_budget);
            if let Ok(v) = oracle.exchange_axiom_holds(instance) {
                return v;
            }
        }
        return Verdict::new(Status::Undecided, Method::BudgetExhausted);
    }

    let t = crate::structure::classify(&s.decomposition, r);
    let verdict = match t {
        TypeClass::DomEmpty => {
            return Verdict::new(Status::InvalidInstance, Method::DomainEmpty).with_type(t)
        }
        TypeClass::TypeI => test_type1(instance, policy.tol),
        TypeClass::TypeII => test_type2(instance, &s.decomposition, policy.tol),
        TypeClass::TypeIII => test_type3(instance, &s.decomposition, policy.tol),
    }
    .expect("Condition B and the type guarantee the fast-path preconditions");

    if policy.explain && verdict.status == Status::NotMConvex {
        let w = find_violation_quadruple(instance, &s.decomposition, t, policy.tol);
        debug_assert!(
            w.is_some(),
            "fast path rejected but the full scan found nothing"
        );
        return verdict.with_witness(w);
    }
    verdict
}

fn short_circuit(instance: &QuadraticInstance) -> Verdict {
    let (n, r) = (instance.n(), instance.r());
    let supports: Vec<Vec<usize>> = if r == 1 {
        (0..n).map(|i| vec![i]).collect()
    } else {
        // [n]∖{k} is finite iff every infinite pair contains k
        let mut removable: Option<Vec<usize>> = None;
        for (i, j, v) in instance.quad().pairs() {
            if v.is_infinite() {
                match removable.as_mut() {
                    None => removable = Some(vec![i, j]),
                    Some(c) => c.retain(|&k| k == i || k == j),
                }
            }
        }
        removable
            .unwrap_or_else(|| (0..n).collect())
            .into_iter()
            .map(|k| (0..n).filter(|&v| v != k).collect())
            .collect()
    };
    if supports.is_empty() {
        return Verdict::new(Status::InvalidInstance, Method::ShortCircuit);
    }
    if n <= 64 {
        if let Err(w) = is_mconvex_set(&DomainSet::new(n, r, supports)) {
            return Verdict::new(Status::NotMConvex, Method::ShortCircuit).with_witness(Some(w));
        }
    }
    Verdict::new(Status::MConvex, Method::ShortCircuit)
}
