//! Finite fractional-power expansions of the right-hand side `f` in the
//! scaled variable `y = (u/a)^{1/m}`.
//!
//! A term `(j, q_j)` stands for `q_j * (u/a)^{(m-n+j)/m}`. Coefficients are
//! stored relative to `u/a` so the exact field survives even when `a^{1/m}`
//! is irrational; the scale only enters at float evaluation time.

use crate::coefficient::{Coefficient, FieldTag};
use crate::recovery::FunctionHandle;
use num::{BigInt, BigRational};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PuiseuxError {
    #[error("need 1 <= n <= m, got n = {n}, m = {m}")]
    BadOrders { n: usize, m: usize },
    #[error("the scale coefficient a must be nonzero")]
    ZeroScale,
    #[error("term indices must be strictly increasing and at most {max}")]
    BadTermIndex { max: usize },
    #[error("series mixes exact and float coefficients")]
    MixedFields,
    #[error("all coefficients vanish; no leading exponent")]
    AllZero,
    #[error("evaluation outside the domain: u/a = {ratio} is negative")]
    NegativeArgument { ratio: f64 },
}

/// `sum_j q_j (u/a)^{(m-n+j)/m} + O((u/a)^{(m-n+J+1)/m})`, stored densely for
/// `j = 0 ..= J`.
#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxSeries {
    n: usize,
    m: usize,
    a: Coefficient,
    terms: Vec<Coefficient>,
}

impl PuiseuxSeries {
    /// Builds from sparse `(j, q_j)` pairs; gaps are zero. `trunc_j` is the
    /// last index `J` the series is trusted through.
    pub fn new(
        n: usize,
        m: usize,
        a: Coefficient,
        sparse: Vec<(usize, Coefficient)>,
        trunc_j: usize,
    ) -> Result<Self, PuiseuxError> {
        let mut dense = vec![Coefficient::zero(a.tag()); trunc_j + 1];
        let mut last: Option<usize> = None;
        for (j, q) in sparse {
            if j > trunc_j || last.is_some_and(|l| j <= l) {
                return Err(PuiseuxError::BadTermIndex { max: trunc_j });
            }
            last = Some(j);
            dense[j] = q;
        }
        Self::new_dense(n, m, a, dense)
    }

    /// Builds from a dense coefficient list `q_0 ..= q_J`.
    pub fn new_dense(
        n: usize,
        m: usize,
        a: Coefficient,
        terms: Vec<Coefficient>,
    ) -> Result<Self, PuiseuxError> {
        if n == 0 || m < n {
            return Err(PuiseuxError::BadOrders { n, m });
        }
        if a.is_zero() {
            return Err(PuiseuxError::ZeroScale);
        }
        if terms.is_empty() {
            return Err(PuiseuxError::BadTermIndex { max: 0 });
        }
        let tag = a.tag();
        if terms.iter().any(|q| q.tag() != tag) {
            return Err(PuiseuxError::MixedFields);
        }
        Ok(PuiseuxSeries { n, m, a, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &Coefficient {
        &self.a
    }

    pub fn tag(&self) -> FieldTag {
        self.a.tag()
    }

    /// Last trusted term index `J`.
    pub fn trunc_j(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, j: usize) -> &Coefficient {
        &self.terms[j]
    }

    pub fn terms(&self) -> &[Coefficient] {
        &self.terms
    }

    /// Exponent `(m - n + j)/m` of the `j`-th term.
    pub fn exponent_of(&self, j: usize) -> BigRational {
        BigRational::new(
            BigInt::from((self.m - self.n + j) as i64),
            BigInt::from(self.m as i64),
        )
    }

    /// `(m - n + j0)/m` for the first nonzero term.
    pub fn leading_exponent(&self) -> Result<BigRational, PuiseuxError> {
        let j0 = self
            .terms
            .iter()
            .position(|q| !q.is_zero())
            .ok_or(PuiseuxError::AllZero)?;
        Ok(self.exponent_of(j0))
    }

    pub fn to_float(&self) -> PuiseuxSeries {
        PuiseuxSeries {
            n: self.n,
            m: self.m,
            a: self.a.to_float(),
            terms: self.terms.iter().map(|q| q.to_float()).collect(),
        }
    }

    /// Float evaluation via `y = (u/a)^{1/m}` and Horner in `y`. At `u = 0`
    /// this is the continuous extension: `q_0` when `m = n`, else `0`.
    pub fn evaluate(&self, u: f64) -> Result<f64, PuiseuxError> {
        let ratio = u / self.a.to_f64();
        if ratio < 0.0 || ratio.is_nan() {
            return Err(PuiseuxError::NegativeArgument { ratio });
        }
        let y = ratio.powf(1.0 / self.m as f64);
        let mut inner = 0.0;
        for q in self.terms.iter().rev() {
            inner = inner * y + q.to_f64();
        }
        let lead = self.m - self.n;
        if lead == 0 {
            Ok(inner)
        } else {
            Ok(inner * y.powi(lead as i32))
        }
    }

    /// Wraps [`evaluate`](Self::evaluate) as a deterministic black box for the
    /// recovery and analysis paths. Out-of-domain arguments surface as NaN.
    pub fn to_callable(&self) -> FunctionHandle {
        let ps = self.clone();
        FunctionHandle::new(1.0, move |u| ps.evaluate(u).unwrap_or(f64::NAN))
    }

    /// Per-term comparison. Exact-vs-exact demands equality (the tolerance is
    /// ignored); any float operand switches to numeric deltas against `tol`.
    /// A differing `(n, m)` header is a structural mismatch, reported rather
    /// than raised.
    pub fn compare(&self, other: &PuiseuxSeries, tol: f64) -> DiffReport {
        if self.n != other.n || self.m != other.m {
            return DiffReport {
                structural: Some(format!(
                    "(n, m) = ({}, {}) vs ({}, {})",
                    self.n, other.n, self.m, other.m
                )),
                a_delta: f64::NAN,
                deltas: Vec::new(),
                max_delta: f64::INFINITY,
                pass: false,
            };
        }
        let both_exact = self.tag() == FieldTag::Exact && other.tag() == FieldTag::Exact;
        let upto = self.trunc_j().min(other.trunc_j());
        let mut deltas = Vec::with_capacity(upto + 1);
        let mut max_delta = 0.0f64;
        let mut exact_equal = true;
        for j in 0..=upto {
            let d = if both_exact {
                let diff = self.term(j) - other.term(j);
                if !diff.is_zero() {
                    exact_equal = false;
                }
                diff.to_f64()
            } else {
                self.term(j).to_f64() - other.term(j).to_f64()
            };
            max_delta = max_delta.max(d.abs());
            deltas.push((j, d));
        }
        let a_delta = self.a.to_f64() - other.a.to_f64();
        let pass = if both_exact { exact_equal } else { max_delta <= tol };
        DiffReport {
            structural: None,
            a_delta,
            deltas,
            max_delta,
            pass,
        }
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, q) in self.terms.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            write!(f, "({})*(u/a)^({}/{})", q, self.m - self.n + j, self.m)?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(
            f,
            " + O((u/a)^({}/{}))",
            self.m - self.n + self.trunc_j() + 1,
            self.m
        )
    }
}

/// Outcome of [`PuiseuxSeries::compare`].
#[derive(Debug, Clone)]
pub struct DiffReport {
    /// `Some(description)` when the `(n, m)` headers differ.
    pub structural: Option<String>,
    pub a_delta: f64,
    pub deltas: Vec<(usize, f64)>,
    pub max_delta: f64,
    pub pass: bool,
}
