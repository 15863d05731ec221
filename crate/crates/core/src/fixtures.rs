//! Small named instances used throughout tests, docs and the CLI.

use crate::instance::QuadraticInstance;
use crate::value::ExtValue;

const INF: ExtValue = ExtValue::INFINITY;

/// `x1x3 + 2x1x4 + ∞·x1x5 + x3x5 + 2x4x5` on the `r = 3` slice of `{0,1}^5`.
///
/// M-convex (Type II) although the four-point inequality fails on
/// `{1,2,3,4}`.
pub fn e3() -> QuadraticInstance {
    let v = ExtValue::from;
    QuadraticInstance::from_entries(
        5,
        3,
        &[
            (1, 3, v(1.0)),
            (1, 4, v(2.0)),
            (1, 5, INF),
            (3, 5, v(1.0)),
            (4, 5, v(2.0)),
        ],
    )
    .expect("valid fixture")
}

/// Type I instance on `n = 5`, `r = 2`, with `a_15 = ∞`, `a_12 = a_34 = 2`,
/// `a_13 = a_24 = a_45 = 1` and the remaining pairs 0. It violates the
/// four-point inequality on `{1,2,3,4}`, so it is not M-convex.
///
/// The shortcut `a_ij − a_in − a_jn` used for all-finite matrices would
/// accept it, which is why the normalisation in `fast_tester` is used instead.
pub fn r5() -> QuadraticInstance {
    let v = ExtValue::from;
    QuadraticInstance::from_entries(
        5,
        2,
        &[
            (1, 5, INF),
            (1, 2, v(2.0)),
            (3, 4, v(2.0)),
            (1, 3, v(1.0)),
            (2, 4, v(1.0)),
            (4, 5, v(1.0)),
            (1, 4, v(0.0)),
            (2, 3, v(0.0)),
            (2, 5, v(0.0)),
            (3, 5, v(0.0)),
        ],
    )
    .expect("valid fixture")
}
