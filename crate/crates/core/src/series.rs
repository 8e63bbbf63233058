//! Truncated power series in one variable with explicit order tracking.
//!
//! A [`TaylorPoly`] stores the coefficients of `t^0 ... t^K` together with the
//! promise that everything beyond is `O(t^{K+1})`. Every operation computes
//! the order that provably survives from its inputs' orders and valuations;
//! nothing is ever padded with silent zeros. The payoff is that the big-O
//! bookkeeping that is usually done by hand stays machine-checked through
//! long pipelines (m-th roots, reversion, power sums).

use crate::coefficient::{Coefficient, FieldTag};
use num::{BigInt, BigRational, One};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("mixed exact/float series operands")]
    MixedFields,
    #[error("a series needs at least one coefficient")]
    Empty,
    #[error("cannot differentiate a series truncated at order 0")]
    ZeroOrder,
    #[error("composition requires the inner series to vanish at 0")]
    InnerConstantTerm,
    #[error("expected valuation {expected}, found {found}")]
    ValuationMismatch { expected: usize, found: usize },
    #[error("leading coefficient must be exactly 1")]
    LeadingNotUnit,
}

/// Truncated power series: `coeffs[j]` is the coefficient of `t^j`, and the
/// series is `sum coeffs[j] t^j + O(t^{trunc+1})` with `trunc = coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPoly {
    coeffs: Vec<Coefficient>,
}

impl TaylorPoly {
    /// Builds a series from coefficients for `t^0 ..= t^K`. All coefficients
    /// must come from the same field.
    pub fn new(coeffs: Vec<Coefficient>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        let tag = coeffs[0].tag();
        if coeffs.iter().any(|c| c.tag() != tag) {
            return Err(SeriesError::MixedFields);
        }
        Ok(TaylorPoly { coeffs })
    }

    fn from_raw(coeffs: Vec<Coefficient>) -> Self {
        debug_assert!(!coeffs.is_empty());
        TaylorPoly { coeffs }
    }

    pub fn zero(tag: FieldTag, trunc: usize) -> Self {
        TaylorPoly::from_raw(vec![Coefficient::zero(tag); trunc + 1])
    }

    pub fn one(tag: FieldTag, trunc: usize) -> Self {
        let mut c = vec![Coefficient::zero(tag); trunc + 1];
        c[0] = Coefficient::one(tag);
        TaylorPoly::from_raw(c)
    }

    /// `t^j + O(t^{trunc+1})`; requires `j <= trunc`.
    pub fn monomial(tag: FieldTag, j: usize, trunc: usize) -> Self {
        assert!(j <= trunc, "monomial degree beyond truncation");
        let mut c = vec![Coefficient::zero(tag); trunc + 1];
        c[j] = Coefficient::one(tag);
        TaylorPoly::from_raw(c)
    }

    /// The identity series `t`.
    pub fn identity(tag: FieldTag, trunc: usize) -> Self {
        Self::monomial(tag, 1, trunc)
    }

    /// Truncation order `K`: coefficients are known through `t^K`.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tag(&self) -> FieldTag {
        self.coeffs[0].tag()
    }

    pub fn coeff(&self, j: usize) -> &Coefficient {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    /// Smallest `j` with a nonzero coefficient; `K + 1` for the zero series,
    /// which keeps the product truncation rule total.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Drops information above `t^k` (never extends).
    pub fn truncated(&self, k: usize) -> TaylorPoly {
        let keep = k.min(self.trunc());
        TaylorPoly::from_raw(self.coeffs[..=keep].to_vec())
    }

    /// The same series with every coefficient converted to binary64.
    pub fn to_float(&self) -> TaylorPoly {
        TaylorPoly::from_raw(self.coeffs.iter().map(|c| c.to_float()).collect())
    }

    pub fn scale(&self, c: &Coefficient) -> Result<TaylorPoly, SeriesError> {
        if c.tag() != self.tag() {
            return Err(SeriesError::MixedFields);
        }
        Ok(TaylorPoly::from_raw(
            self.coeffs.iter().map(|x| x * c).collect(),
        ))
    }

    pub fn neg(&self) -> TaylorPoly {
        TaylorPoly::from_raw(self.coeffs.iter().map(|x| -x).collect())
    }

    /// Multiplies by `t^j` (shifts coefficients up); the truncation order
    /// grows by `j` since the factor is exact.
    pub(crate) fn shifted_up(&self, j: usize) -> TaylorPoly {
        let mut c = vec![Coefficient::zero(self.tag()); j];
        c.extend(self.coeffs.iter().cloned());
        TaylorPoly::from_raw(c)
    }

    /// Coefficient-wise sum; the result is trusted to `min(K_p, K_q)`.
    pub fn add(&self, rhs: &TaylorPoly) -> Result<TaylorPoly, SeriesError> {
        if self.tag() != rhs.tag() {
            return Err(SeriesError::MixedFields);
        }
        let k = self.trunc().min(rhs.trunc());
        let c = (0..=k).map(|j| &self.coeffs[j] + &rhs.coeffs[j]).collect();
        Ok(TaylorPoly::from_raw(c))
    }

    pub fn sub(&self, rhs: &TaylorPoly) -> Result<TaylorPoly, SeriesError> {
        self.add(&rhs.neg())
    }

    /// Cauchy product. The surviving order is
    /// `min(K_p + val(q), K_q + val(p))` capped at `K_p + K_q`: each factor's
    /// own error term enters multiplied by the other factor's valuation.
    pub fn mul(&self, rhs: &TaylorPoly) -> Result<TaylorPoly, SeriesError> {
        if self.tag() != rhs.tag() {
            return Err(SeriesError::MixedFields);
        }
        let cap = (self.trunc() + rhs.valuation())
            .min(rhs.trunc() + self.valuation())
            .min(self.trunc() + rhs.trunc());
        Ok(TaylorPoly::from_raw(raw_mul(
            &self.coeffs,
            &rhs.coeffs,
            cap,
        )))
    }

    /// Term-wise derivative. Exactly one order of information is lost:
    /// `O(t^{K+1})` differentiates to `O(t^K)`.
    pub fn differentiate(&self) -> Result<TaylorPoly, SeriesError> {
        if self.trunc() == 0 {
            return Err(SeriesError::ZeroOrder);
        }
        let c = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale_int(i as i64 + 1))
            .collect();
        Ok(TaylorPoly::from_raw(c))
    }

    /// `self(inner)` for an inner series vanishing at 0, evaluated by Horner
    /// over the series ring. Trusted to `min(K_outer * val(inner), K_inner)`.
    pub fn compose(&self, inner: &TaylorPoly) -> Result<TaylorPoly, SeriesError> {
        if self.tag() != inner.tag() {
            return Err(SeriesError::MixedFields);
        }
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::InnerConstantTerm);
        }
        let cap = (self.trunc() * inner.valuation()).min(inner.trunc());
        Ok(TaylorPoly::from_raw(compose_raw(
            &self.coeffs,
            &inner.coeffs,
            cap,
        )))
    }

    /// Horner evaluation of the polynomial part; the `O`-term is dropped and
    /// exact coefficients are converted to binary64 on the fly.
    pub fn evaluate(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.to_f64();
        }
        acc
    }

    /// Compositional inverse of a series `t + ...` with unit linear
    /// coefficient, by triangular coefficient matching on `self(q) = t`.
    pub fn revert(&self) -> Result<TaylorPoly, SeriesError> {
        let val = self.valuation();
        if val != 1 {
            return Err(SeriesError::ValuationMismatch {
                expected: 1,
                found: val,
            });
        }
        if !self.coeffs[1].is_one() {
            return Err(SeriesError::LeadingNotUnit);
        }
        let tag = self.tag();
        let k = self.trunc();
        let mut q = vec![Coefficient::zero(tag); k + 1];
        q[1] = Coefficient::one(tag);
        for j in 2..=k {
            // With q_j still zero, [t^j] self(q) is everything except the
            // q_j contribution, which enters as 1 * q_j.
            let comp = compose_raw(&self.coeffs, &q[..=j], j);
            q[j] = -&comp[j];
        }
        Ok(TaylorPoly::from_raw(q))
    }

    /// For `p = t^m (1 + s(t))` with unit leading coefficient, returns the
    /// branch of `p^{1/m}` that looks like `t + ...`, i.e.
    /// `t * (1 + s(t))^{1/m}` via the binomial series.
    pub fn mth_root_normalized(&self, m: usize) -> Result<TaylorPoly, SeriesError> {
        assert!(m >= 1, "root index must be positive");
        let val = self.valuation();
        if val != m {
            return Err(SeriesError::ValuationMismatch {
                expected: m,
                found: val,
            });
        }
        if !self.coeffs[m].is_one() {
            return Err(SeriesError::LeadingNotUnit);
        }
        // s(t) = p / t^m - 1 has zero constant term and order K - m.
        let mut s: Vec<Coefficient> = self.coeffs[m..].to_vec();
        s[0] = Coefficient::zero(self.tag());
        let s = TaylorPoly::from_raw(s);
        let alpha = BigRational::new(BigInt::one(), BigInt::from(m as i64));
        let mut binom = binomial_series(&alpha, s.trunc());
        if self.tag() == FieldTag::Float {
            binom = binom.to_float();
        }
        let root = binom.compose(&s)?;
        Ok(root.shifted_up(1))
    }
}

impl fmt::Display for TaylorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match j {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*t", c)?,
                _ => write!(f, "({})*t^{}", c, j)?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.trunc() + 1)
    }
}

/// Binomial series `sum_{j<=K} C(alpha, j) s^j` with
/// `C(alpha, j) = alpha (alpha-1) ... (alpha-j+1) / j!`, exact.
pub fn binomial_series(alpha: &BigRational, k: usize) -> TaylorPoly {
    let mut coeffs = Vec::with_capacity(k + 1);
    let mut c = BigRational::one();
    coeffs.push(Coefficient::Exact(c.clone()));
    for j in 0..k {
        let jr = BigRational::from_integer(BigInt::from(j as i64));
        let succ = BigRational::from_integer(BigInt::from(j as i64 + 1));
        c = c * (alpha - jr) / succ;
        coeffs.push(Coefficient::Exact(c.clone()));
    }
    TaylorPoly::from_raw(coeffs)
}

/// Plain convolution through `t^cap`.
fn raw_mul(a: &[Coefficient], b: &[Coefficient], cap: usize) -> Vec<Coefficient> {
    let tag = a[0].tag();
    let mut out = vec![Coefficient::zero(tag); cap + 1];
    for (i, ai) in a.iter().enumerate() {
        if i > cap || ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > cap {
                break;
            }
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

/// Horner composition through `t^cap`; assumes `inner[0] = 0`.
fn compose_raw(outer: &[Coefficient], inner: &[Coefficient], cap: usize) -> Vec<Coefficient> {
    let tag = outer[0].tag();
    let mut acc = vec![Coefficient::zero(tag); cap + 1];
    for c in outer.iter().rev() {
        acc = raw_mul(&acc, inner, cap);
        acc[0] = &acc[0] + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(p: i64, q: i64) -> Coefficient {
        Coefficient::from_ratio(p, q)
    }

    fn int(n: i64) -> Coefficient {
        Coefficient::from_int(n)
    }

    fn poly(vals: &[(i64, i64)]) -> TaylorPoly {
        TaylorPoly::new(vals.iter().map(|&(p, q)| ex(p, q)).collect()).unwrap()
    }

    #[test]
    fn add_examples() {
        // (1 + t, order 3) + (t^2, order 3) = 1 + t + t^2, order 3
        let p = poly(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        let q = poly(&[(0, 1), (0, 1), (1, 1), (0, 1)]);
        let r = p.add(&q).unwrap();
        assert_eq!(r, poly(&[(1, 1), (1, 1), (1, 1), (0, 1)]));

        // p + zero(order 5) truncates to min
        let z = TaylorPoly::zero(FieldTag::Exact, 5);
        assert_eq!(p.add(&z).unwrap(), p);

        // (t, order 2) + (-t, order 4) = zero, order 2
        let a = poly(&[(0, 1), (1, 1), (0, 1)]);
        let b = poly(&[(0, 1), (-1, 1), (0, 1), (0, 1), (0, 1)]);
        let s = a.add(&b).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.trunc(), 2);
    }

    #[test]
    fn mul_examples() {
        // (1 + t)(1 - t), orders 4 -> 1 - t^2, order 4
        let p = poly(&[(1, 1), (1, 1), (0, 1), (0, 1), (0, 1)]);
        let q = poly(&[(1, 1), (-1, 1), (0, 1), (0, 1), (0, 1)]);
        let r = p.mul(&q).unwrap();
        assert_eq!(r.trunc(), 4);
        assert_eq!(r, poly(&[(1, 1), (0, 1), (-1, 1), (0, 1), (0, 1)]));

        // t * t, orders 3 -> t^2, order 4
        let t = TaylorPoly::monomial(FieldTag::Exact, 1, 3);
        let tt = t.mul(&t).unwrap();
        assert_eq!(tt.trunc(), 4);
        assert_eq!(tt.valuation(), 2);
        assert!(tt.coeff(2).is_one());

        // p * 1 keeps p and its order
        let one = TaylorPoly::one(FieldTag::Exact, 4);
        assert_eq!(p.mul(&one).unwrap(), p);
    }

    #[test]
    fn mixed_fields_rejected() {
        let p = TaylorPoly::one(FieldTag::Exact, 2);
        let q = TaylorPoly::one(FieldTag::Float, 2);
        assert_eq!(p.add(&q), Err(SeriesError::MixedFields));
        assert_eq!(p.mul(&q), Err(SeriesError::MixedFields));
    }

    #[test]
    fn differentiate_examples() {
        // t^3 + O(t^5) -> 3 t^2 + O(t^4)
        let p = TaylorPoly::monomial(FieldTag::Exact, 3, 4);
        let d = p.differentiate().unwrap();
        assert_eq!(d.trunc(), 3);
        assert_eq!(d.coeff(2), &int(3));

        // constant, order 1 -> 0, order 0
        let c = TaylorPoly::one(FieldTag::Exact, 1);
        let dc = c.differentiate().unwrap();
        assert!(dc.is_zero());
        assert_eq!(dc.trunc(), 0);

        // order 0 has nothing left to differentiate
        let k0 = TaylorPoly::one(FieldTag::Exact, 0);
        assert_eq!(k0.differentiate(), Err(SeriesError::ZeroOrder));
    }

    #[test]
    fn compose_examples() {
        // identity outer
        let id = TaylorPoly::identity(FieldTag::Exact, 4);
        let q = poly(&[(0, 1), (1, 1), (1, 1), (0, 1), (0, 1)]);
        assert_eq!(id.compose(&q).unwrap(), q);

        // outer = t^2, inner = t + t^2 (orders 4) -> t^2 + 2t^3 + t^4, order 4
        let t2 = TaylorPoly::monomial(FieldTag::Exact, 2, 4);
        let r = t2.compose(&q).unwrap();
        assert_eq!(r, poly(&[(0, 1), (0, 1), (1, 1), (2, 1), (1, 1)]));

        // binomial outer (1+s)^{1/2}, inner = t (order 3)
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let b = binomial_series(&half, 3);
        let t = TaylorPoly::identity(FieldTag::Exact, 3);
        let r = b.compose(&t).unwrap();
        assert_eq!(r, poly(&[(1, 1), (1, 2), (-1, 8), (1, 16)]));

        // nonzero inner constant term is an error
        let bad = TaylorPoly::one(FieldTag::Exact, 3);
        assert_eq!(t2.compose(&bad), Err(SeriesError::InnerConstantTerm));
    }

    #[test]
    fn binomial_examples() {
        let one = BigRational::one();
        assert_eq!(binomial_series(&one, 3), poly(&[(1, 1), (1, 1), (0, 1), (0, 1)]));

        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(binomial_series(&third, 2), poly(&[(1, 1), (1, 3), (-1, 9)]));

        let neg = -BigRational::one();
        assert_eq!(
            binomial_series(&neg, 3),
            poly(&[(1, 1), (-1, 1), (1, 1), (-1, 1)])
        );
    }

    #[test]
    fn mth_root_examples() {
        // p = t^3 + t^4, K = 5, m = 3 -> t + t^2/3 - t^3/9
        let p = poly(&[(0, 1), (0, 1), (0, 1), (1, 1), (1, 1), (0, 1)]);
        let r = p.mth_root_normalized(3).unwrap();
        assert_eq!(r.trunc(), 3);
        assert_eq!(r, poly(&[(0, 1), (1, 1), (1, 3), (-1, 9)]));

        // p = t^m exactly -> t
        let tm = TaylorPoly::monomial(FieldTag::Exact, 4, 4);
        let r = tm.mth_root_normalized(4).unwrap();
        assert_eq!(r, poly(&[(0, 1), (1, 1)]));

        // p = t^m + beta t^{m+1} -> t + (beta/m) t^2 + O(t^3)
        let mut c = vec![int(0); 6];
        c[3] = int(1);
        c[4] = ex(5, 7);
        let p = TaylorPoly::new(c).unwrap();
        let r = p.mth_root_normalized(3).unwrap();
        assert_eq!(r.coeff(1), &int(1));
        assert_eq!(r.coeff(2), &ex(5, 21));

        // wrong valuation
        let t2 = TaylorPoly::monomial(FieldTag::Exact, 2, 5);
        assert!(matches!(
            t2.mth_root_normalized(3),
            Err(SeriesError::ValuationMismatch { .. })
        ));
    }

    #[test]
    fn revert_examples() {
        // t + b t^2 + O(t^3) -> t - b t^2 + O(t^3)
        let p = poly(&[(0, 1), (1, 1), (4, 3)]);
        let q = p.revert().unwrap();
        assert_eq!(q, poly(&[(0, 1), (1, 1), (-4, 3)]));

        // t + b t^2 + c t^3 -> t - b t^2 + (2b^2 - c) t^3
        let b = ex(2, 1);
        let c = ex(1, 2);
        let p = TaylorPoly::new(vec![int(0), int(1), b.clone(), c.clone()]).unwrap();
        let q = p.revert().unwrap();
        let expect3 = &(&(&b * &b).scale_int(2) - &c);
        assert_eq!(q.coeff(2), &-&b);
        assert_eq!(q.coeff(3), expect3);

        // identity reverts to itself
        let id = TaylorPoly::identity(FieldTag::Exact, 5);
        assert_eq!(id.revert().unwrap(), id);

        // valuation != 1 is rejected
        let t2 = TaylorPoly::monomial(FieldTag::Exact, 2, 3);
        assert!(matches!(
            t2.revert(),
            Err(SeriesError::ValuationMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let p = TaylorPoly::monomial(FieldTag::Exact, 3, 3);
        assert_eq!(p.evaluate(0.5), 0.125);

        let q = poly(&[(1, 1), (1, 1)]);
        assert_eq!(q.evaluate(0.0), 1.0);

        let r = poly(&[(0, 1), (1, 1), (1, 3)]);
        assert!((r.evaluate(0.1) - (0.1 + 0.01 / 3.0)).abs() < 1e-15);
    }

    // ---- independent brute-force oracles -------------------------------

    /// Full polynomial product (as if carried at twice the order), then cut.
    fn oracle_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::from_integer(0.into()); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let t = x * y;
                out[i + j] = &out[i + j] + t;
            }
        }
        out
    }

    /// Full polynomial composition, no truncation.
    fn oracle_compose(outer: &[BigRational], inner: &[BigRational]) -> Vec<BigRational> {
        let mut acc = vec![BigRational::from_integer(0.into())];
        for c in outer.iter().rev() {
            acc = oracle_mul(&acc, inner);
            acc[0] = &acc[0] + c;
        }
        acc
    }

    fn rationals(p: &TaylorPoly) -> Vec<BigRational> {
        p.coeffs().iter().map(|c| c.as_exact().unwrap().clone()).collect()
    }

    fn coeff_strategy() -> impl Strategy<Value = Coefficient> {
        (-12i64..=12, 1i64..=4).prop_map(|(p, q)| Coefficient::from_ratio(p, q))
    }

    fn poly_strategy(max_len: usize) -> impl Strategy<Value = TaylorPoly> {
        prop::collection::vec(coeff_strategy(), 1..=max_len)
            .prop_map(|c| TaylorPoly::new(c).unwrap())
    }

    proptest! {
        #[test]
        fn mul_matches_double_precision_oracle(p in poly_strategy(7), q in poly_strategy(7)) {
            let r = p.mul(&q).unwrap();
            let full = oracle_mul(&rationals(&p), &rationals(&q));
            for j in 0..=r.trunc() {
                let want = full.get(j).cloned().unwrap_or_else(|| BigRational::from_integer(0.into()));
                prop_assert_eq!(r.coeff(j).as_exact().unwrap(), &want);
            }
        }

        #[test]
        fn compose_matches_double_precision_oracle(outer in poly_strategy(6), mut inner in poly_strategy(6)) {
            // force inner to vanish at 0
            let mut cs = inner.coeffs().to_vec();
            cs[0] = Coefficient::from_int(0);
            inner = TaylorPoly::new(cs).unwrap();
            let r = outer.compose(&inner).unwrap();
            let full = oracle_compose(&rationals(&outer), &rationals(&inner));
            for j in 0..=r.trunc() {
                let want = full.get(j).cloned().unwrap_or_else(|| BigRational::from_integer(0.into()));
                prop_assert_eq!(r.coeff(j).as_exact().unwrap(), &want);
            }
        }

        #[test]
        fn revert_composes_to_identity(mut p in poly_strategy(8)) {
            let mut cs = p.coeffs().to_vec();
            cs[0] = Coefficient::from_int(0);
            if cs.len() == 1 {
                cs.push(Coefficient::from_int(1));
            } else {
                cs[1] = Coefficient::from_int(1);
            }
            p = TaylorPoly::new(cs).unwrap();

            let q = p.revert().unwrap();
            let both = p.compose(&q).unwrap();
            let id = TaylorPoly::identity(FieldTag::Exact, both.trunc());
            prop_assert_eq!(&both, &id);
            let other = q.compose(&p).unwrap();
            let id = TaylorPoly::identity(FieldTag::Exact, other.trunc());
            prop_assert_eq!(&other, &id);
        }

        #[test]
        fn mth_root_power_reproduces_input(tail in prop::collection::vec(coeff_strategy(), 0..5), m in 1usize..5) {
            let mut cs = vec![Coefficient::from_int(0); m];
            cs.push(Coefficient::from_int(1));
            cs.extend(tail);
            let p = TaylorPoly::new(cs).unwrap();
            let root = p.mth_root_normalized(m).unwrap();
            let mut pow = root.clone();
            for _ in 1..m {
                pow = pow.mul(&root).unwrap();
            }
            // pow is trusted through order K_p; compare against p there
            let k = pow.trunc().min(p.trunc());
            prop_assert_eq!(pow.truncated(k), p.truncated(k));
        }

        #[test]
        fn differentiate_is_termwise(p in poly_strategy(8)) {
            prop_assume!(p.trunc() >= 1);
            let d = p.differentiate().unwrap();
            for j in 1..=p.trunc() {
                let want = p.coeff(j).scale_int(j as i64);
                prop_assert_eq!(d.coeff(j - 1), &want);
            }
        }

        #[test]
        fn binomial_recurrence_holds(num in -9i64..=9, den in 1i64..=9, k in 1usize..10) {
            let alpha = BigRational::new(BigInt::from(num), BigInt::from(den));
            let b = binomial_series(&alpha, k);
            for j in 0..k {
                let cj = b.coeff(j).as_exact().unwrap();
                let expect = cj * (&alpha - BigRational::from_integer(BigInt::from(j as i64)))
                    / BigRational::from_integer(BigInt::from(j as i64 + 1));
                prop_assert_eq!(b.coeff(j + 1).as_exact().unwrap(), &expect);
            }
        }
    }
}
