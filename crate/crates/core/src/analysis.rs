//! Numeric verification of the analytic claims: Hölder continuity of the
//! right-hand side, the flatness differential inequality, the gap estimates
//! behind the uniqueness proof, and the `C^1` regularity of the Taylor
//! remainder factor.

use crate::jet::SolutionJet;
use crate::numeric::richardson_geometric;
use crate::recovery::FunctionHandle;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("alpha must lie in (0, 1]")]
    BadAlpha,
    #[error("delta must be positive and finite")]
    BadDelta,
    #[error("need at least 2 sample pairs")]
    TooFewSamples,
    #[error("handle evaluation failed at u = {u}")]
    HandleEvaluation { u: f64 },
    #[error("grid must be nonempty with points in ({lo}, {hi}]")]
    BadGrid { lo: f64, hi: f64 },
    #[error("jets disagree structurally: {0}")]
    Structural(String),
    #[error("solution is nonpositive at t = {t}, outside the estimate's regime")]
    NonpositiveSolution { t: f64 },
    #[error("remainder grid must approach a = {a} from above through distinct points")]
    GridNotApproaching { a: f64 },
    #[error("derivative bundle supplies orders up to {max} only")]
    OrderOutOfRange { max: usize },
}

// ---------------------------------------------------------------------------
// derivative bundles
// ---------------------------------------------------------------------------

/// Supplies `g, g', ..., g^(k)` at a point: analytically for built-ins,
/// symbolically (polynomial differentiation) for jets.
///
/// A bundle may carry a second, scale-free evaluator returning the same
/// derivatives up to one common positive factor. Ratio-type checks use it
/// where the true values underflow (`e^{-1/t}` at tiny `t`); the flatness
/// ratio is invariant under a common factor, so nothing is lost.
#[derive(Clone)]
pub struct DerivativeBundle {
    eval: Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>,
    scaled: Option<Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>>,
    max_order: Option<usize>,
}

impl DerivativeBundle {
    pub fn new(f: impl Fn(usize, f64) -> f64 + Send + Sync + 'static) -> Self {
        DerivativeBundle {
            eval: Arc::new(f),
            scaled: None,
            max_order: None,
        }
    }

    /// `g^(order)(x)`.
    pub fn eval(&self, order: usize, x: f64) -> f64 {
        (self.eval)(order, x)
    }

    /// Derivatives up to a common positive factor (defaults to `eval`).
    pub fn eval_scaled(&self, order: usize, x: f64) -> f64 {
        match &self.scaled {
            Some(g) => g(order, x),
            None => (self.eval)(order, x),
        }
    }

    pub fn max_order(&self) -> Option<usize> {
        self.max_order
    }

    fn check_order(&self, needed: usize) -> Result<(), AnalysisError> {
        match self.max_order {
            Some(max) if needed > max => Err(AnalysisError::OrderOutOfRange { max }),
            _ => Ok(()),
        }
    }

    /// `e^x` (its own derivative of every order).
    pub fn exp() -> Self {
        Self::new(|_, x| x.exp())
    }

    /// `sin x`, cycling through the four derivatives.
    pub fn sin() -> Self {
        Self::new(|k, x| match k % 4 {
            0 => x.sin(),
            1 => x.cos(),
            2 => -x.sin(),
            _ => -x.cos(),
        })
    }

    /// A plain polynomial `sum coeffs[j] x^j`, differentiated symbolically.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let rows = derivative_rows(coeffs.to_vec());
        Self::new(move |k, x| rows.get(k).map_or(0.0, |r| horner(r, x)))
    }

    /// The jet's truncated solution treated as the polynomial it is.
    pub fn from_jet(jet: &SolutionJet) -> Self {
        Self::polynomial(&jet_poly(jet))
    }

    /// The difference `u - v` of two jet polynomials.
    pub fn from_jet_difference(u: &SolutionJet, v: &SolutionJet) -> Self {
        let a = jet_poly(u);
        let b = jet_poly(v);
        let len = a.len().max(b.len());
        let coeffs: Vec<f64> = (0..len)
            .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
            .collect();
        Self::polynomial(&coeffs)
    }

    /// `e^{-1/t}` on `t > 0` with `g^(k)(t) = P_k(1/t) e^{-1/t}`,
    /// `P_{k+1}(s) = s^2 (P_k(s) - P_k'(s))`. The scale-free evaluator drops
    /// the exponential factor, which underflows long before the polynomial
    /// part loses meaning.
    pub fn exp_flat(max_order: usize) -> Self {
        let mut polys: Vec<Vec<f64>> = vec![vec![1.0]];
        for _ in 0..max_order {
            let prev = polys.last().unwrap();
            let d = diff_row(prev);
            let mut next = vec![0.0; prev.len() + 2];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 2] += c;
            }
            for (i, &c) in d.iter().enumerate() {
                next[i + 2] -= c;
            }
            polys.push(next);
        }
        let table = Arc::new(polys);
        let t1 = Arc::clone(&table);
        let eval = move |k: usize, t: f64| horner(&t1[k], 1.0 / t) * (-1.0 / t).exp();
        let t2 = Arc::clone(&table);
        let scaled = move |k: usize, t: f64| horner(&t2[k], 1.0 / t);
        DerivativeBundle {
            eval: Arc::new(eval),
            scaled: Some(Arc::new(scaled)),
            max_order: Some(max_order),
        }
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn diff_row(row: &[f64]) -> Vec<f64> {
    row.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as f64 * c)
        .collect()
}

fn derivative_rows(mut row: Vec<f64>) -> Vec<Vec<f64>> {
    let mut rows = vec![row.clone()];
    while row.len() > 1 {
        row = diff_row(&row);
        rows.push(row.clone());
    }
    rows
}

fn jet_poly(jet: &SolutionJet) -> Vec<f64> {
    jet.series().coeffs().iter().map(|c| c.to_f64()).collect()
}

// ---------------------------------------------------------------------------
// Hölder estimation
// ---------------------------------------------------------------------------

/// Empirical Hölder data: the largest sampled quotient
/// `|f(u1) - f(u2)| / |u1 - u2|^alpha` over `[0, delta]^2`.
#[derive(Debug, Clone)]
pub struct HolderEstimate {
    pub alpha: BigRational,
    pub delta: f64,
    pub sample_pairs: usize,
    pub max_quotient: f64,
    pub argmax: (f64, f64),
    /// Empirical Hölder constant (the max quotient itself).
    pub constant: f64,
}

/// Stratified deterministic sampling: the pair `(delta, 0)` always goes in,
/// half of the rest is uniform over the square, half is anchored at
/// `u2 in {0, delta/4^i}` where power-law suprema live.
pub fn holder_estimate(
    f: &FunctionHandle,
    alpha: &BigRational,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<HolderEstimate, AnalysisError> {
    if !(alpha > &BigRational::zero() && alpha <= &BigRational::one()) {
        return Err(AnalysisError::BadAlpha);
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(AnalysisError::BadDelta);
    }
    if samples < 2 {
        return Err(AnalysisError::TooFewSamples);
    }
    let alpha_f = alpha.to_f64().ok_or(AnalysisError::BadAlpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anchors: Vec<f64> = {
        let mut v = vec![0.0, 0.0];
        v.extend((0..8).map(|i| delta * 0.25f64.powi(i)));
        v
    };

    let mut max_quotient = 0.0f64;
    let mut argmax = (0.0, 0.0);
    let evaluate = |u: f64| -> Result<f64, AnalysisError> {
        let v = f.eval(u);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(AnalysisError::HandleEvaluation { u })
        }
    };
    for idx in 0..samples {
        let (u1, u2) = if idx == 0 {
            (delta, 0.0)
        } else if idx % 2 == 0 {
            (rng.gen::<f64>() * delta, rng.gen::<f64>() * delta)
        } else {
            (rng.gen::<f64>() * delta, anchors[(idx / 2) % anchors.len()])
        };
        if u1 == u2 {
            continue;
        }
        let q = (evaluate(u1)? - evaluate(u2)?).abs() / (u1 - u2).abs().powf(alpha_f);
        if q > max_quotient {
            max_quotient = q;
            argmax = (u1, u2);
        }
    }
    Ok(HolderEstimate {
        alpha: alpha.clone(),
        delta,
        sample_pairs: samples,
        max_quotient,
        argmax,
        constant: max_quotient,
    })
}

/// The exponent the expansion's structure guarantees: the leading term is
/// Hölder-`(m-n)/m` (at least `1/m` whenever `m > n`, constant when `m = n`)
/// and the remainder factor is `C^1` in `(u/a)^{1/m}`, hence Hölder-`1/m`.
/// The guaranteed exponent is therefore `1/m`.
pub fn holder_exponent_for_jet(jet: &SolutionJet) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(jet.m() as i64))
}

/// Default Hölder window for a jet: walk `t* = 2^-i` down until the leading
/// term dominates twice the sum of the higher terms, then use
/// `min(1, u(t*))`. Stays inside the expansion's regime of validity.
pub fn default_holder_delta(jet: &SolutionJet) -> f64 {
    let coeffs: Vec<f64> = jet.coeffs().iter().map(|c| c.to_f64().abs()).collect();
    let m = jet.m() as i32;
    for i in 0..=60 {
        let t = 0.5f64.powi(i);
        let lead = coeffs[0] * t.powi(m);
        let rest: f64 = coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c * t.powi(m + 1 + k as i32))
            .sum();
        if lead >= 2.0 * rest {
            let u = jet.series().evaluate(t);
            return u.abs().min(1.0);
        }
    }
    f64::MIN_POSITIVE
}

// ---------------------------------------------------------------------------
// flatness inequality
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct FlatnessConfig {
    /// Bound the sup ratio is tested against.
    pub c_max: f64,
}

impl Default for FlatnessConfig {
    fn default() -> Self {
        FlatnessConfig { c_max: 1e3 }
    }
}

/// Profile of `|g^(n)(x)| / sum_{k<n} |g^(k)(x)| / x^{n-k}` over a grid.
#[derive(Debug, Clone)]
pub struct FlatnessCheck {
    pub n: usize,
    pub grid: Vec<f64>,
    pub ratios: Vec<f64>,
    pub sup_ratio: f64,
    pub bounded: bool,
    /// Points where numerator and denominator both vanished (ratio recorded
    /// as 0: the inequality is vacuous there).
    pub zero_over_zero: usize,
}

/// Evaluates the differential-inequality ratio on the grid. The ratio is
/// invariant under a common positive factor on all derivatives, so the
/// bundle's scale-free evaluator is used when present.
pub fn flatness_inequality_check(
    g: &DerivativeBundle,
    n: usize,
    grid: &[f64],
    cfg: &FlatnessConfig,
) -> Result<FlatnessCheck, AnalysisError> {
    assert!(n >= 1, "the inequality needs n >= 1");
    g.check_order(n)?;
    if grid.is_empty() || grid.iter().any(|x| !(0.0 < *x && *x <= 1.0)) {
        return Err(AnalysisError::BadGrid { lo: 0.0, hi: 1.0 });
    }
    let mut ratios = Vec::with_capacity(grid.len());
    let mut zero_over_zero = 0;
    let mut sup = 0.0f64;
    for &x in grid {
        let num = g.eval_scaled(n, x).abs();
        let den: f64 = (0..n)
            .map(|k| g.eval_scaled(k, x).abs() / x.powi((n - k) as i32))
            .sum();
        let ratio = if den == 0.0 {
            if num == 0.0 {
                zero_over_zero += 1;
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            num / den
        };
        sup = sup.max(ratio);
        ratios.push(ratio);
    }
    Ok(FlatnessCheck {
        n,
        grid: grid.to_vec(),
        ratios,
        sup_ratio: sup,
        bounded: sup <= cfg.c_max,
        zero_over_zero,
    })
}

// ---------------------------------------------------------------------------
// gap estimates
// ---------------------------------------------------------------------------

/// One grid point of [`gap_bound_check`].
#[derive(Debug, Clone, Copy)]
pub struct GapPoint {
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub w_n: f64,
    /// MVT witness bracket `[min(u, v), max(u, v)]`.
    pub bracket: (f64, f64),
    pub mvt_lhs: f64,
    pub mvt_rhs: f64,
    pub mvt_ok: bool,
    /// `|w^(n)(t)| t^n / |w(t)|`.
    pub ratio: f64,
}

/// Grid data for the two proof estimates: the fractional-power MVT bound and
/// the assembled bound `|w^(n)| <= C |w| / t^n`.
#[derive(Debug, Clone)]
pub struct GapProbe {
    pub points: Vec<GapPoint>,
    /// Minimal `C` that satisfies the assembled bound on this grid.
    pub fitted_c: f64,
    pub mvt_all_ok: bool,
}

pub fn gap_bound_check(
    u: &SolutionJet,
    v: &SolutionJet,
    grid: &[f64],
) -> Result<GapProbe, AnalysisError> {
    if u.m() != v.m() || u.n() != v.n() {
        return Err(AnalysisError::Structural(format!(
            "(n, m) = ({}, {}) vs ({}, {})",
            u.n(),
            u.m(),
            v.n(),
            v.m()
        )));
    }
    if grid.is_empty() || grid.iter().any(|t| !(0.0 < *t && *t < 1.0)) {
        return Err(AnalysisError::BadGrid { lo: 0.0, hi: 1.0 });
    }
    let (m, n) = (u.m(), u.n());
    let p = (m - n) as f64 / m as f64;
    let us = u.series().to_float();
    let vs = v.series().to_float();
    let un = u.nth_derivative_series(usize::MAX).to_float();
    let vn = v.nth_derivative_series(usize::MAX).to_float();

    let mut points = Vec::with_capacity(grid.len());
    let mut fitted_c = 0.0f64;
    let mut mvt_all_ok = true;
    for &t in grid {
        let uu = us.evaluate(t);
        let vv = vs.evaluate(t);
        if uu <= 0.0 || vv <= 0.0 {
            return Err(AnalysisError::NonpositiveSolution { t });
        }
        let w = uu - vv;
        let w_n = un.evaluate(t) - vn.evaluate(t);
        let zeta = uu.min(vv);
        // |u^p - v^p| <= p zeta^{p-1} |u - v| with the conservative witness
        // zeta = min(u, v) (the exponent p - 1 = -n/m is negative)
        let mvt_lhs = (uu.powf(p) - vv.powf(p)).abs();
        let mvt_rhs = p * zeta.powf(-(n as f64) / m as f64) * w.abs();
        let mvt_ok = mvt_lhs <= mvt_rhs * (1.0 + 1e-9) + f64::MIN_POSITIVE;
        mvt_all_ok &= mvt_ok;
        let ratio = if w == 0.0 {
            if w_n == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            w_n.abs() * t.powi(n as i32) / w.abs()
        };
        fitted_c = fitted_c.max(ratio);
        points.push(GapPoint {
            t,
            u: uu,
            v: vv,
            w,
            w_n,
            bracket: (uu.min(vv), uu.max(vv)),
            mvt_lhs,
            mvt_rhs,
            mvt_ok,
            ratio,
        });
    }
    Ok(GapProbe {
        points,
        fitted_c,
        mvt_all_ok,
    })
}

// ---------------------------------------------------------------------------
// Taylor remainder regularity
// ---------------------------------------------------------------------------

pub const DEFAULT_REMAINDER_TOL: f64 = 1e-6;

/// Checks that `h(x) = (g(x) - P_k(x)) / (x - a)^k` vanishes linearly and
/// that both the difference quotient of `h` at `a` and the limit of the
/// analytic `h'(x)` recover `g^(k+1)(a) / (k+1)!`.
#[derive(Debug, Clone)]
pub struct RemainderReport {
    /// Usable `(x, h(x))` pairs, coarse to fine.
    pub h_values: Vec<(f64, f64)>,
    /// Grid points discarded because `g(x) - P(x)` fell below the float
    /// cancellation floor.
    pub discarded: usize,
    /// Max of `|h(x)| / (x - a)` over usable points.
    pub h_linear_bound: f64,
    pub dq_estimate: f64,
    pub dq_err: f64,
    pub hprime_estimate: f64,
    pub hprime_err: f64,
    /// `g^(k+1)(a) / (k+1)!`.
    pub target: f64,
    pub pass: bool,
}

fn extrapolate_sequence(xs: &[f64], vals: &[f64]) -> f64 {
    if vals.is_empty() {
        return 0.0;
    }
    if vals.len() == 1 {
        return vals[0];
    }
    // use Richardson when the offsets are geometric, else take the deepest
    let ratios: Vec<f64> = xs.windows(2).map(|w| w[1] / w[0]).collect();
    let r0 = ratios[0];
    let geometric = ratios.iter().all(|r| (r / r0 - 1.0).abs() < 0.02);
    if geometric && r0 > 0.0 && r0 < 1.0 {
        richardson_geometric(vals, r0, 5).map_or(vals[vals.len() - 1], |e| e.value)
    } else {
        vals[vals.len() - 1]
    }
}

pub fn taylor_remainder_check(
    g: &DerivativeBundle,
    a: f64,
    k: usize,
    grid: &[f64],
) -> Result<RemainderReport, AnalysisError> {
    g.check_order(k + 1)?;
    let mut xs: Vec<f64> = grid.to_vec();
    xs.sort_by(|p, q| q.partial_cmp(p).unwrap());
    xs.dedup();
    if xs.is_empty() || xs.iter().any(|x| *x <= a) {
        return Err(AnalysisError::GridNotApproaching { a });
    }

    let derivs: Vec<f64> = (0..=k + 1).map(|j| g.eval(j, a)).collect();
    let target = derivs[k + 1] / factorial(k + 1);
    let p_eval = |x: f64| -> f64 {
        let mut acc = 0.0;
        let dx = x - a;
        for j in (0..=k).rev() {
            acc = acc * dx + derivs[j] / factorial(j);
        }
        acc
    };
    // P'(x) as the Taylor polynomial of g' to degree k - 1
    let p_prime_eval = |x: f64| -> f64 {
        let mut acc = 0.0;
        let dx = x - a;
        for j in (1..=k).rev() {
            acc = acc * dx + derivs[j] / factorial(j - 1);
        }
        acc
    };

    let eps = f64::EPSILON;
    let mut offs = Vec::new();
    let mut h_values = Vec::new();
    let mut dq_values = Vec::new();
    let mut hp_offs = Vec::new();
    let mut hp_values = Vec::new();
    let mut discarded = 0usize;
    let mut h_linear_bound = 0.0f64;
    for &x in &xs {
        let dx = x - a;
        let gx = g.eval(0, x);
        let px = p_eval(x);
        let num = gx - px;
        // below this floor the subtraction is pure rounding noise
        if num.abs() <= 64.0 * eps * (gx.abs() + px.abs()) {
            discarded += 1;
            continue;
        }
        let h = num / dx.powi(k as i32);
        offs.push(dx);
        h_values.push((x, h));
        h_linear_bound = h_linear_bound.max(h.abs() / dx);
        dq_values.push(h / dx);

        let g1 = g.eval(1, x);
        let p1 = p_prime_eval(x);
        let num1 = g1 - p1;
        if num1.abs() > 64.0 * eps * (g1.abs() + p1.abs()) {
            hp_offs.push(dx);
            hp_values.push(num1 / dx.powi(k as i32) - k as f64 * num / dx.powi(k as i32 + 1));
        }
    }

    let dq_estimate = extrapolate_sequence(&offs, &dq_values);
    let hprime_estimate = extrapolate_sequence(&hp_offs, &hp_values);
    let dq_err = (dq_estimate - target).abs();
    let hprime_err = (hprime_estimate - target).abs();
    let tol = DEFAULT_REMAINDER_TOL * target.abs().max(1.0);
    Ok(RemainderReport {
        h_values,
        discarded,
        h_linear_bound,
        dq_estimate,
        dq_err,
        hprime_estimate,
        hprime_err,
        target,
        pass: dq_err <= tol && hprime_err <= tol,
    })
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `A/B/count` log-spaced grid, `A` down to `B` geometric, inclusive.
pub fn log_grid(from: f64, to: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1);
    if count == 1 {
        return vec![from];
    }
    let step = (to / from).powf(1.0 / (count - 1) as f64);
    (0..count).map(|i| from * step.powi(i as i32)).collect()
}
