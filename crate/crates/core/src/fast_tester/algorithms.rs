use crate::instance::QuadraticInstance;
use crate::structure::{ComponentDecomposition, TypeClass};
use crate::value::Tolerance;
use crate::verdict::{Method, Status, Verdict};

use super::{check_anti_ultrametric, normalize_type1, TesterError};

fn verdict(ok: bool, method: Method, t: TypeClass) -> Verdict {
    let status = if ok {
        Status::MConvex
    } else {
        Status::NotMConvex
    };
    Verdict::new(status, method).with_type(t)
}

/// Algorithm I: normalise, then test the anti-ultrametric property.
pub fn test_type1(instance: &QuadraticInstance, tol: Tolerance) -> Result<Verdict, TesterError> {
    let norm = normalize_type1(instance)?;
    let ok = check_anti_ultrametric(&norm, tol);
    Ok(verdict(ok, Method::AlgorithmI, TypeClass::TypeI))
}

/// `a[r_t][c_s] + a[r_{t+1}][c_{s+1}] = a[r_{t+1}][c_s] + a[r_t][c_{s+1}]`
/// for all adjacent row and column positions of the block `rows × cols`.
fn adjacent_block_equalities(
    instance: &QuadraticInstance,
    rows: &[usize],
    cols: &[usize],
    tol: Tolerance,
) -> Result<bool, TesterError> {
    let value = |i: usize, j: usize| {
        instance
            .a(i, j)
            .finite_value()
            .ok_or(TesterError::InfiniteCrossPair {
                i: i.min(j),
                j: i.max(j),
            })
    };
    for r in rows.windows(2) {
        let (top, bottom) = (r[0], r[1]);
        let mut left_top = value(top, cols[0])?;
        let mut left_bottom = value(bottom, cols[0])?;
        for &c in &cols[1..] {
            let right_top = value(top, c)?;
            let right_bottom = value(bottom, c)?;
            if !tol.eq_f64(left_top + right_bottom, left_bottom + right_top) {
                return Ok(false);
            }
            left_top = right_top;
            left_bottom = right_bottom;
        }
    }
    Ok(true)
}

/// Algorithm II: for each big component `A_p`, rows `A_p` against columns
/// `[n]∖A_p`, both in ascending order.
pub fn test_type2(
    instance: &QuadraticInstance,
    decomposition: &ComponentDecomposition,
    tol: Tolerance,
) -> Result<Verdict, TesterError> {
    let n = instance.n();
    for (p, rows) in decomposition.big().iter().enumerate() {
        let cols: Vec<usize> = (0..n)
            .filter(|&v| decomposition.big_component_of(v) != Some(p))
            .collect();
        if !adjacent_block_equalities(instance, rows, &cols, tol)? {
            return Ok(verdict(false, Method::AlgorithmII, TypeClass::TypeII));
        }
    }
    Ok(verdict(true, Method::AlgorithmII, TypeClass::TypeII))
}

/// Algorithm III: every pair of distinct big components `A_p × A_q`. The
/// `A_q × A_p` block is the transpose and gives the same equalities.
pub fn test_type3(
    instance: &QuadraticInstance,
    decomposition: &ComponentDecomposition,
    tol: Tolerance,
) -> Result<Verdict, TesterError> {
    let big = decomposition.big();
    for (p, rows) in big.iter().enumerate() {
        for cols in &big[p + 1..] {
            if !adjacent_block_equalities(instance, rows, cols, tol)? {
                return Ok(verdict(false, Method::AlgorithmIII, TypeClass::TypeIII));
            }
        }
    }
    Ok(verdict(true, Method::AlgorithmIII, TypeClass::TypeIII))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{e3, r5};
    use crate::instance::PairMatrix;
    use crate::structure::Structure;
    use crate::value::ExtValue;

    const INF: ExtValue = ExtValue::INFINITY;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn r5_fails_algorithm_one() {
        assert_eq!(test_type1(&r5(), tol()).unwrap().status, Status::NotMConvex);
    }

    #[test]
    fn linear_function_passes_algorithm_one() {
        let inst = QuadraticInstance::from_quad(3, PairMatrix::zeros(6)).unwrap();
        assert_eq!(test_type1(&inst, tol()).unwrap().status, Status::MConvex);
    }

    #[test]
    fn e3_passes_algorithm_two() {
        let inst = e3();
        let s = Structure::of(&inst);
        assert_eq!(
            test_type2(&inst, &s.decomposition, tol()).unwrap().status,
            Status::MConvex
        );
    }

    #[test]
    fn e3_with_a45_raised_fails_algorithm_two() {
        let inst = e3();
        let mut quad = inst.quad().clone();
        quad.set(3, 4, ExtValue::from(3.0));
        let bad = QuadraticInstance::from_quad(3, quad).unwrap();
        let s = Structure::of(&bad);
        assert_eq!(
            test_type2(&bad, &s.decomposition, tol()).unwrap().status,
            Status::NotMConvex
        );
    }

    fn two_pairs(a13: f64) -> QuadraticInstance {
        QuadraticInstance::from_entries(
            4,
            2,
            &[(1, 2, INF), (3, 4, INF), (1, 3, ExtValue::from(a13))],
        )
        .unwrap()
    }

    #[test]
    fn algorithm_three_on_two_pairs() {
        let ok = two_pairs(0.0);
        let s = Structure::of(&ok);
        assert_eq!(
            test_type3(&ok, &s.decomposition, tol()).unwrap().status,
            Status::MConvex
        );
        let bad = two_pairs(1.0);
        let s = Structure::of(&bad);
        assert_eq!(
            test_type3(&bad, &s.decomposition, tol()).unwrap().status,
            Status::NotMConvex
        );
    }

    #[test]
    fn infinite_cross_pair_is_an_error() {
        // decomposition of E3 ({1,5} big) paired with a matrix where a_12 = ∞
        let s = Structure::of(&e3());
        let other = QuadraticInstance::from_entries(5, 3, &[(1, 5, INF), (1, 2, INF)]).unwrap();
        assert_eq!(
            test_type2(&other, &s.decomposition, tol()),
            Err(TesterError::InfiniteCrossPair { i: 0, j: 1 })
        );
    }
}
