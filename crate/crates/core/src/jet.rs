//! Solution jets: the derivative data of a smooth solution at `t = 0`.

use crate::coefficient::{Coefficient, FieldTag};
use crate::numeric::falling_in;
use crate::series::TaylorPoly;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("equation order n must be at least 1")]
    ZeroEquationOrder,
    #[error("vanishing order m = {m} is below the equation order n = {n}; the construction requires m >= n")]
    OrderBelowEquation { m: usize, n: usize },
    #[error("a jet needs at least the leading coefficient")]
    Empty,
    #[error("the leading coefficient a = u^(m)(0)/m! scale must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("jet coefficients mix exact and float values")]
    MixedFields,
}

/// `(n, m, a_m, a_{m+1}, ..., a_{m+K})`: the solution vanishes to order `m`,
/// solves an equation of order `n <= m`, and `u(t) = sum a_{m+k} t^{m+k} + O(t^{m+K+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionJet {
    n: usize,
    m: usize,
    coeffs: Vec<Coefficient>,
}

impl SolutionJet {
    pub fn new(n: usize, m: usize, coeffs: Vec<Coefficient>) -> Result<Self, JetError> {
        if n == 0 {
            return Err(JetError::ZeroEquationOrder);
        }
        if m < n {
            return Err(JetError::OrderBelowEquation { m, n });
        }
        if coeffs.is_empty() {
            return Err(JetError::Empty);
        }
        if coeffs[0].is_zero() {
            return Err(JetError::ZeroLeadingCoefficient);
        }
        let tag = coeffs[0].tag();
        if coeffs.iter().any(|c| c.tag() != tag) {
            return Err(JetError::MixedFields);
        }
        Ok(SolutionJet { n, m, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The leading coefficient `a = a_m`.
    pub fn a(&self) -> &Coefficient {
        &self.coeffs[0]
    }

    /// `a_{m+k}` for `k = 0 ..= top_offset()`.
    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    /// Largest `k` with a stored `a_{m+k}`.
    pub fn top_offset(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tag(&self) -> FieldTag {
        self.coeffs[0].tag()
    }

    pub fn to_float(&self) -> SolutionJet {
        SolutionJet {
            n: self.n,
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c.to_float()).collect(),
        }
    }

    /// The jet of `-u`, which solves the reflected equation with leading
    /// coefficient `-a`.
    pub fn reflected(&self) -> SolutionJet {
        SolutionJet {
            n: self.n,
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `u(t)` as a truncated series: `sum a_{m+k} t^{m+k} + O(t^{m+K+1})`.
    pub fn series(&self) -> TaylorPoly {
        let tag = self.tag();
        let mut c = vec![Coefficient::zero(tag); self.m + self.coeffs.len()];
        for (k, a) in self.coeffs.iter().enumerate() {
            c[self.m + k] = a.clone();
        }
        TaylorPoly::new(c).expect("jet coefficients are tag-uniform")
    }

    /// `u^(order)(t)` as a truncated series, for `order <= m`:
    /// `sum a_{m+k} (m+k)(m+k-1)...(m+k-order+1) t^{m-order+k}`.
    pub fn derivative_series(&self, order: usize) -> TaylorPoly {
        assert!(order <= self.m, "derivative order exceeds vanishing order");
        let tag = self.tag();
        let base = self.m - order;
        let mut c = vec![Coefficient::zero(tag); base + self.coeffs.len()];
        for (k, a) in self.coeffs.iter().enumerate() {
            let fall = falling_in(tag, (self.m + k) as i64, order);
            c[base + k] = a * &fall;
        }
        TaylorPoly::new(c).expect("jet coefficients are tag-uniform")
    }

    /// `u^(n)(t)` for the jet's own equation order, truncated at
    /// `min(m - n + K, cap)`.
    pub fn nth_derivative_series(&self, cap: usize) -> TaylorPoly {
        self.derivative_series(self.n).truncated(cap)
    }
}
