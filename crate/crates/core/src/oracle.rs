//! Brute-force ground truth: domain enumeration, the set and function
//! exchange axioms, the local exchange criterion, and the linear fit.
//!
//! Everything here works straight from the definitions over the enumerated
//! domain, so it shares no code with `fast_tester`. Supports are `u64`
//! bitmasks internally, which caps the oracle at 64 variables.

use std::collections::HashMap;
use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::instance::QuadraticInstance;
use crate::value::{ExtValue, Tolerance};
use crate::verdict::{Method, Status, Verdict, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("domain has C({n},{r}) = {candidates} candidates, budget is {budget}")]
    DomainBudget {
        n: usize,
        r: usize,
        candidates: u128,
        budget: u64,
    },
    #[error("more than {0} exchange inequality checks required")]
    CheckBudget(u64),
    #[error("brute force supports at most 64 variables, got {0}")]
    TooManyVariables(usize),
    #[error("effective domain is empty")]
    EmptyDomain,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        // acc * (n - t) / (t + 1) stays integral at every step
        acc = match acc.checked_mul((n - t) as u128) {
            Some(v) => v / (t as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `f(support)`: `+∞` unless `|support| = r` and every internal pair is finite.
pub fn evaluate(instance: &QuadraticInstance, support: &[usize]) -> ExtValue {
    if support.len() != instance.r() {
        return ExtValue::INFINITY;
    }
    let mut total = ExtValue::ZERO;
    for (t, &i) in support.iter().enumerate() {
        total = total.shift(instance.linear()[i]);
        for &j in &support[t + 1..] {
            let a = instance.a(i, j);
            if a.is_infinite() {
                return ExtValue::INFINITY;
            }
            total = total + a;
        }
    }
    total
}

fn indices_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

fn mask_of(support: &[usize]) -> u64 {
    support.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

/// `dom f` as a lexicographically sorted list of supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSet {
    n: usize,
    r: usize,
    supports: Vec<Vec<usize>>,
}

impl DomainSet {
    /// Supports must be distinct sorted `r`-subsets of `0..n`, `n ≤ 64`.
    pub fn new(n: usize, r: usize, mut supports: Vec<Vec<usize>>) -> Self {
        assert!(n <= 64, "domain sets are limited to 64 indices");
        for s in &supports {
            assert_eq!(s.len(), r, "support of wrong cardinality");
            assert!(s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&i| i < n));
        }
        supports.sort();
        supports.dedup();
        DomainSet { n, r, supports }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn supports(&self) -> &[Vec<usize>] {
        &self.supports
    }

    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    /// Indices lying in at least one support.
    pub fn active_indices(&self) -> Vec<usize> {
        let mask = self.supports.iter().fold(0u64, |m, s| m | mask_of(s));
        indices_of(mask)
    }

    /// Condition A by enumeration.
    pub fn covers_all_indices(&self) -> bool {
        self.active_indices().len() == self.n
    }

    pub fn contains(&self, support: &[usize]) -> bool {
        self.supports
            .binary_search_by(|s| s.as_slice().cmp(support))
            .is_ok()
    }
}

/// Set exchange axiom: for `x, y ∈ X` and `i ∈ x∖y` some `j ∈ y∖x` has both
/// `x − i + j` and `y + i − j` in `X`. Returns the first failing `(x, y, i)`.
pub fn is_mconvex_set(domain: &DomainSet) -> Result<(), Witness> {
    let masks: Vec<u64> = domain.supports.iter().map(|s| mask_of(s)).collect();
    let members: HashSet<u64> = masks.iter().copied().collect();
    for &x in &masks {
        for &y in &masks {
            if x == y {
                continue;
            }
            for i in indices_of(x & !y) {
                let ok = indices_of(y & !x).into_iter().any(|j| {
                    let bi = 1u64 << i;
                    let bj = 1u64 << j;
                    members.contains(&((x & !bi) | bj)) && members.contains(&((y & !bj) | bi))
                });
                if !ok {
                    return Err(Witness::ExchangeViolation {
                        x: indices_of(x),
                        y: indices_of(y),
                        i,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Brute-force checker with explicit work limits.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub tol: Tolerance,
    /// Largest admissible `C(n, r)`.
    pub domain_budget: u64,
    /// Largest number of exchange inequalities evaluated per call.
    pub check_budget: u64,
}

pub const DEFAULT_DOMAIN_BUDGET: u64 = 20_000;
pub const DEFAULT_CHECK_BUDGET: u64 = 100_000_000;

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            tol: Tolerance::default(),
            domain_budget: DEFAULT_DOMAIN_BUDGET,
            check_budget: DEFAULT_CHECK_BUDGET,
        }
    }
}

/// `f` tabulated on its effective domain.
struct Table {
    masks: Vec<u64>,
    values: HashMap<u64, ExtValue>,
}

impl Table {
    #[inline]
    fn f(&self, mask: u64) -> ExtValue {
        self.values
            .get(&mask)
            .copied()
            .unwrap_or(ExtValue::INFINITY)
    }
}

impl Oracle {
    pub fn new(tol: Tolerance) -> Self {
        Oracle {
            tol,
            ..Oracle::default()
        }
    }

    pub fn with_domain_budget(mut self, budget: u64) -> Self {
        self.domain_budget = budget;
        self
    }

    fn check_size(&self, instance: &QuadraticInstance) -> Result<(), OracleError> {
        let (n, r) = (instance.n(), instance.r());
        if n > 64 {
            return Err(OracleError::TooManyVariables(n));
        }
        let candidates = binomial(n, r);
        if candidates > self.domain_budget as u128 {
            return Err(OracleError::DomainBudget {
                n,
                r,
                candidates,
                budget: self.domain_budget,
            });
        }
        Ok(())
    }

    /// All `r`-subsets with finite value, in lexicographic order.
    pub fn enumerate_domain(&self, instance: &QuadraticInstance) -> Result<DomainSet, OracleError> {
        Ok(DomainSet {
            n: instance.n(),
            r: instance.r(),
            supports: self
                .tabulate(instance)?
                .masks
                .into_iter()
                .map(indices_of)
                .collect(),
        })
    }

    fn tabulate(&self, instance: &QuadraticInstance) -> Result<Table, OracleError> {
        self.check_size(instance)?;
        let (n, r) = (instance.n(), instance.r());
        let mut masks = Vec::new();
        let mut values = HashMap::new();
        // lexicographic r-combinations of 0..n
        let mut comb: Vec<usize> = (0..r).collect();
        loop {
            let v = evaluate(instance, &comb);
            if v.is_finite() {
                let m = mask_of(&comb);
                masks.push(m);
                values.insert(m, v);
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
        Ok(Table { masks, values })
    }

    /// The quantitative exchange axiom over every `x, y ∈ dom f` and
    /// `i ∈ x∖y`. Witness is the first failing `(x, y, i)` in enumeration
    /// order.
    pub fn exchange_axiom_holds(
        &self,
        instance: &QuadraticInstance,
    ) -> Result<Verdict, OracleError> {
        let table = self.tabulate(instance)?;
        if table.masks.is_empty() {
            return Ok(Verdict::new(
                Status::InvalidInstance,
                Method::OracleExchange,
            ));
        }
        let mut checks: u64 = 0;
        for &x in &table.masks {
            let fx = table.f(x);
            for &y in &table.masks {
                if x == y {
                    continue;
                }
                let total = fx + table.f(y);
                for i in indices_of(x & !y) {
                    let bi = 1u64 << i;
                    let mut found = false;
                    for j in indices_of(y & !x) {
                        checks += 1;
                        if checks > self.check_budget {
                            return Err(OracleError::CheckBudget(self.check_budget));
                        }
                        let bj = 1u64 << j;
                        let swapped = table.f((x & !bi) | bj) + table.f((y & !bj) | bi);
                        if self.tol.ge(total, swapped) {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        let w = Witness::ExchangeViolation {
                            x: indices_of(x),
                            y: indices_of(y),
                            i,
                        };
                        return Ok(Verdict::new(Status::NotMConvex, Method::OracleExchange)
                            .with_witness(Some(w)));
                    }
                }
            }
        }
        Ok(Verdict::new(Status::MConvex, Method::OracleExchange))
    }

    /// Local criterion: `dom f` is an M-convex set and, for every pair of
    /// supports `z+i+j`, `z+k+l` at symmetric difference 4,
    /// `f(z+i+j) + f(z+k+l) ≥ min(f(z+i+k) + f(z+j+l), f(z+i+l) + f(z+j+k))`.
    pub fn local_exchange_holds(
        &self,
        instance: &QuadraticInstance,
    ) -> Result<Verdict, OracleError> {
        let table = self.tabulate(instance)?;
        if table.masks.is_empty() {
            return Ok(Verdict::new(Status::InvalidInstance, Method::OracleLocal));
        }
        let domain = DomainSet {
            n: instance.n(),
            r: instance.r(),
            supports: table.masks.iter().map(|&m| indices_of(m)).collect(),
        };
        if let Err(w) = is_mconvex_set(&domain) {
            return Ok(Verdict::new(Status::NotMConvex, Method::OracleLocal).with_witness(Some(w)));
        }
        let mut checks: u64 = 0;
        for &s in &table.masks {
            for &t in &table.masks {
                let only_s = s & !t;
                if only_s.count_ones() != 2 {
                    continue;
                }
                checks += 1;
                if checks > self.check_budget {
                    return Err(OracleError::CheckBudget(self.check_budget));
                }
                let z = s & t;
                let [i, j] = <[usize; 2]>::try_from(indices_of(only_s)).unwrap();
                let [k, l] = <[usize; 2]>::try_from(indices_of(t & !s)).unwrap();
                let b = |p: usize, q: usize| z | (1u64 << p) | (1u64 << q);
                let lhs = table.f(s) + table.f(t);
                let first = table.f(b(i, k)) + table.f(b(j, l));
                let second = table.f(b(i, l)) + table.f(b(j, k));
                if !self.tol.ge(lhs, first.min(second)) {
                    // both swaps for i fail, so (s, t, i) breaks the full axiom too
                    let w = Witness::ExchangeViolation {
                        x: indices_of(s),
                        y: indices_of(t),
                        i,
                    };
                    return Ok(
                        Verdict::new(Status::NotMConvex, Method::OracleLocal).with_witness(Some(w))
                    );
                }
            }
        }
        Ok(Verdict::new(Status::MConvex, Method::OracleLocal))
    }

    /// Least-squares fit of `f(x) ≈ α* + Σ p*_i x_i` over `dom f`, with the
    /// gauge fixed by `p*_n = 0`.
    pub fn linear_fit(&self, instance: &QuadraticInstance) -> Result<LinearFit, OracleError> {
        let table = self.tabulate(instance)?;
        if table.masks.is_empty() {
            return Err(OracleError::EmptyDomain);
        }
        let n = instance.n();
        let rows = table.masks.len();
        // columns: constant, then x_1 .. x_{n-1}
        let design = DMatrix::from_fn(rows, n, |row, col| {
            if col == 0 || table.masks[row] & (1u64 << (col - 1)) != 0 {
                1.0
            } else {
                0.0
            }
        });
        let target = DVector::from_iterator(rows, table.masks.iter().map(|&m| table.f(m).to_f64()));
        let svd = design.clone().svd(true, true);
        let coeffs = svd
            .solve(&target, 1e-10)
            .expect("SVD computed with both U and V^T");
        let fitted = &design * &coeffs;
        let max_residual = fitted
            .iter()
            .zip(target.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let mut p: Vec<f64> = coeffs.iter().skip(1).copied().collect();
        p.push(0.0);
        Ok(LinearFit {
            alpha: coeffs[0],
            p,
            max_residual,
        })
    }

    /// `Some` iff `f` is affine on `dom f` up to a residual below `1e-9`.
    pub fn linear_certificate(
        &self,
        instance: &QuadraticInstance,
    ) -> Result<Option<LinearFit>, OracleError> {
        let fit = self.linear_fit(instance)?;
        Ok((fit.max_residual < LINEAR_RESIDUAL).then_some(fit))
    }
}

pub const LINEAR_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub alpha: f64,
    /// One entry per index, last one pinned to 0.
    pub p: Vec<f64>,
    pub max_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{e3, r5};
    use crate::instance::PairMatrix;

    fn oracle() -> Oracle {
        Oracle::default()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(200, 100), u128::MAX);
    }

    #[test]
    fn evaluate_e3() {
        let f = e3();
        assert_eq!(evaluate(&f, &[1, 2, 3]), ExtValue::from(0.0));
        assert!(evaluate(&f, &[0, 2, 4]).is_infinite());
        assert_eq!(evaluate(&f, &[0, 2, 3]), ExtValue::from(3.0));
        assert!(evaluate(&f, &[0, 2]).is_infinite());
    }

    #[test]
    fn e3_domain_has_seven_points() {
        let d = oracle().enumerate_domain(&e3()).unwrap();
        assert_eq!(d.len(), 7);
        for s in [[0, 1, 4], [0, 2, 4], [0, 3, 4]] {
            assert!(!d.contains(&s));
        }
        assert!(d.covers_all_indices());
        assert!(is_mconvex_set(&d).is_ok());
    }

    #[test]
    fn uniform_and_disconnected_domains() {
        let zero = QuadraticInstance::from_quad(2, PairMatrix::zeros(4)).unwrap();
        let d = oracle().enumerate_domain(&zero).unwrap();
        assert_eq!(d.len(), 6);
        assert!(is_mconvex_set(&d).is_ok());

        let d = DomainSet::new(4, 2, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(
            is_mconvex_set(&d),
            Err(Witness::ExchangeViolation {
                x: vec![0, 1],
                y: vec![2, 3],
                i: 0
            })
        );
    }

    #[test]
    fn e3_is_m_convex_by_both_criteria() {
        let o = oracle();
        assert_eq!(
            o.exchange_axiom_holds(&e3()).unwrap().status,
            Status::MConvex
        );
        assert_eq!(
            o.local_exchange_holds(&e3()).unwrap().status,
            Status::MConvex
        );
    }

    #[test]
    fn r5_is_not_m_convex_and_witnesses_verify() {
        let o = oracle();
        for v in [
            o.exchange_axiom_holds(&r5()).unwrap(),
            o.local_exchange_holds(&r5()).unwrap(),
        ] {
            assert_eq!(v.status, Status::NotMConvex);
            assert!(v.witness.unwrap().verify(&r5(), o.tol));
        }
    }

    #[test]
    fn single_point_domain_is_vacuously_m_convex() {
        // n = 4, r = 2: only {3,4} avoids the infinite pairs
        let inf = ExtValue::INFINITY;
        let inst = QuadraticInstance::from_entries(
            4,
            2,
            &[
                (1, 2, inf),
                (1, 3, inf),
                (1, 4, inf),
                (2, 3, inf),
                (2, 4, inf),
            ],
        )
        .unwrap();
        assert_eq!(oracle().enumerate_domain(&inst).unwrap().len(), 1);
        assert_eq!(
            oracle().exchange_axiom_holds(&inst).unwrap().status,
            Status::MConvex
        );
    }

    #[test]
    fn empty_domain_is_invalid() {
        let inst =
            QuadraticInstance::from_quad(2, PairMatrix::filled(4, ExtValue::INFINITY)).unwrap();
        assert_eq!(
            oracle().exchange_axiom_holds(&inst).unwrap().status,
            Status::InvalidInstance
        );
        assert_eq!(oracle().linear_fit(&inst), Err(OracleError::EmptyDomain));
    }

    #[test]
    fn budgets_are_enforced() {
        let inst = QuadraticInstance::from_quad(10, PairMatrix::zeros(20)).unwrap();
        assert!(matches!(
            oracle().exchange_axiom_holds(&inst),
            Err(OracleError::DomainBudget { .. })
        ));
        let small = Oracle {
            check_budget: 10,
            ..Oracle::default()
        };
        assert_eq!(
            small.exchange_axiom_holds(&e3()),
            Err(OracleError::CheckBudget(10))
        );
    }

    #[test]
    fn linear_part_does_not_change_exchange_verdict() {
        let o = oracle();
        let shifted = r5().with_linear(vec![3.0, -1.5, 0.25, 7.0, -2.0]).unwrap();
        assert_eq!(
            o.exchange_axiom_holds(&shifted).unwrap().status,
            Status::NotMConvex
        );
    }

    #[test]
    fn linear_certificates() {
        let o = oracle();
        let cert = o
            .linear_certificate(&e3())
            .unwrap()
            .expect("E3 is linear on its domain");
        assert!(cert.max_residual < 1e-9);
        assert_eq!(cert.p[4], 0.0);

        let zero = QuadraticInstance::from_quad(2, PairMatrix::zeros(4)).unwrap();
        let cert = o.linear_certificate(&zero).unwrap().unwrap();
        assert!(cert.alpha.abs() < 1e-9 && cert.p.iter().all(|v| v.abs() < 1e-9));
    }
}
