use crate::instance::{PairMatrix, QuadraticInstance};
use crate::value::ExtValue;

use super::TesterError;

/// Output of the Type I normalisation.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix {
    /// Global minimum `α` of the original coefficients.
    pub alpha: f64,
    /// `b_i = min_j a_ij − α ≥ 0`.
    pub b: Vec<f64>,
    /// `â_ij = a_ij − b_i − b_j`, with `+∞` kept.
    pub ahat: PairMatrix,
}

impl NormalizedMatrix {
    /// Wraps an arbitrary matrix with root level `alpha` and zero shifts.
    pub fn from_matrix(alpha: f64, ahat: PairMatrix) -> Self {
        let n = ahat.n();
        NormalizedMatrix {
            alpha,
            b: vec![0.0; n],
            ahat,
        }
    }

    pub fn n(&self) -> usize {
        self.ahat.n()
    }
}

pub fn normalize_type1(instance: &QuadraticInstance) -> Result<NormalizedMatrix, TesterError> {
    let n = instance.n();
    let mut row_min = vec![ExtValue::INFINITY; n];
    for (i, j, v) in instance.quad().pairs() {
        if v < row_min[i] {
            row_min[i] = v;
        }
        if v < row_min[j] {
            row_min[j] = v;
        }
    }
    let mut mins = Vec::with_capacity(n);
    for (i, m) in row_min.iter().enumerate() {
        mins.push(m.finite_value().ok_or(TesterError::InfiniteRow(i))?);
    }
    let alpha = mins.iter().copied().fold(f64::INFINITY, f64::min);
    let b: Vec<f64> = mins.iter().map(|m| m - alpha).collect();
    let ahat = PairMatrix::from_fn(n, |i, j| instance.a(i, j).shift(-(b[i] + b[j])));
    Ok(NormalizedMatrix { alpha, b, ahat })
}
