//! Full-range scans of the quadruple conditions, used for explain mode and
//! as references for the fast deciders.

use crate::instance::QuadraticInstance;
use crate::structure::{ComponentDecomposition, TypeClass};
use crate::value::{ExtValue, Tolerance};
use crate::verdict::{QuadrupleCondition, Witness};

/// First violated quadruple of the condition belonging to `type_class`,
/// in lexicographic order of `(i, j, k, l)`.
///
/// * Type I: sorted 4-sets `i<j<k<l` whose three pair sums have a strict
///   unique minimum.
/// * Type II: `i<k` in one big component, `j<l` outside it, with
///   `a_ij + a_kl ≠ a_il + a_kj`.
/// * Type III: as Type II with `j<l` inside a different big component.
///
/// `O(n⁴)`.
pub fn find_violation_quadruple(
    instance: &QuadraticInstance,
    decomposition: &ComponentDecomposition,
    type_class: TypeClass,
    tol: Tolerance,
) -> Option<Witness> {
    match type_class {
        TypeClass::TypeI => anti_tree_metric_violation(instance, tol),
        TypeClass::TypeII => {
            cross_equality_violation(instance, decomposition, tol, Columns::Outside)
        }
        TypeClass::TypeIII => {
            cross_equality_violation(instance, decomposition, tol, Columns::OtherBig)
        }
        TypeClass::DomEmpty => None,
    }
}

/// True iff the type's quadruple condition holds everywhere.
pub fn condition_holds(
    instance: &QuadraticInstance,
    decomposition: &ComponentDecomposition,
    type_class: TypeClass,
    tol: Tolerance,
) -> bool {
    find_violation_quadruple(instance, decomposition, type_class, tol).is_none()
}

fn anti_tree_metric_violation(instance: &QuadraticInstance, tol: Tolerance) -> Option<Witness> {
    let n = instance.n();
    let a = |p: usize, q: usize| instance.a(p, q);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let sums = [a(i, j) + a(k, l), a(i, k) + a(j, l), a(i, l) + a(j, k)];
                    if unique_strict_minimum(&sums, tol) {
                        return Some(Witness::QuadrupleViolation {
                            condition: QuadrupleCondition::AntiTreeMetric,
                            indices: [i, j, k, l],
                            sums: sums.to_vec(),
                        });
                    }
                }
            }
        }
    }
    None
}

fn unique_strict_minimum(s: &[ExtValue; 3], tol: Tolerance) -> bool {
    (0..3).any(|t| {
        let others = s
            .iter()
            .enumerate()
            .filter(|&(u, _)| u != t)
            .map(|(_, &v)| v)
            .min()
            .unwrap();
        tol.gt(others, s[t])
    })
}

#[derive(Clone, Copy)]
enum Columns {
    /// Any `j, l` outside the rows' component.
    Outside,
    /// `j, l` inside one other big component.
    OtherBig,
}

fn cross_equality_violation(
    instance: &QuadraticInstance,
    decomposition: &ComponentDecomposition,
    tol: Tolerance,
    columns: Columns,
) -> Option<Witness> {
    let n = instance.n();
    let comp = |v: usize| decomposition.big_component_of(v);
    for i in 0..n {
        let Some(p) = comp(i) else { continue };
        let admissible = |j: usize, l: usize| match columns {
            Columns::Outside => comp(j) != Some(p) && comp(l) != Some(p),
            Columns::OtherBig => comp(j).is_some() && comp(j) != Some(p) && comp(l) == comp(j),
        };
        for j in 0..n {
            if !admissible(j, j) {
                continue;
            }
            for k in (i + 1..n).filter(|&k| comp(k) == Some(p)) {
                for l in (j + 1..n).filter(|&l| admissible(j, l)) {
                    let lhs = instance.a(i, j) + instance.a(k, l);
                    let rhs = instance.a(i, l) + instance.a(k, j);
                    if !tol.eq(lhs, rhs) {
                        return Some(Witness::QuadrupleViolation {
                            condition: QuadrupleCondition::CrossEquality,
                            indices: [i, j, k, l],
                            sums: vec![lhs, rhs],
                        });
                    }
                }
            }
        }
    }
    None
}
