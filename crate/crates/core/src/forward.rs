//! From a solution jet to the fractional-power expansion of the right-hand
//! side, by composing series primitives:
//!
//! 1. normalize `u/a` and take the branch `x = (u/a)^{1/m}` with `x = t + ...`,
//! 2. revert to get `t` as a series in `x`,
//! 3. raise to the powers `t^{m-n+r}` appearing in `u^(n)`,
//! 4. assemble `u^(n)` as a series in `x` and reinterpret `x^j` as `(u/a)^{j/m}`.
//!
//! The intermediate constants (root coefficients, reversion coefficients,
//! power-expansion coefficients, assembled coefficients) are exposed in a
//! [`CompositionLedger`] so the construction's low-order identities can be
//! tested directly.

use crate::coefficient::Coefficient;
use crate::jet::SolutionJet;
use crate::numeric::{falling_in, fit_loglog_slope};
use crate::puiseux::{PuiseuxError, PuiseuxSeries};
use crate::series::{SeriesError, TaylorPoly};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForwardError {
    #[error("jet carries {available} coefficients beyond a but {requested} terms were requested")]
    JetTooShort { available: usize, requested: usize },
    #[error("leading coefficient must be positive; reduce a < 0 by the reflection u -> -u first")]
    NonPositiveLeading,
    #[error("residual grid must be nonempty, strictly ascending, and inside (0, 1)")]
    BadGrid,
    #[error("jet and series disagree structurally: {0}")]
    Structure(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
}

/// Bookkeeping constants of the forward construction, for a requested order
/// `J`. Indices follow the construction: `lambda[i]` and `b[i]` are the
/// coefficients of `x(t)` and of the reverted `t(x)` at power `i + 2`, the
/// row `c[r]` holds the coefficients of `t^{m-n+r}` at offsets `1 ..= J`
/// above its leading power, and `p[r - 1]` is the assembled coefficient of
/// `x^{m-n+r}` in `u^(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionLedger {
    pub lambda: Vec<Coefficient>,
    pub b: Vec<Coefficient>,
    pub c: Vec<Vec<Coefficient>>,
    pub p: Vec<Coefficient>,
    /// `Q` in `b_{J+1} = -a_{m+J}/(m a) + Q`; `None` when `J = 0`.
    pub q_const: Option<Coefficient>,
}

impl CompositionLedger {
    /// The first reversion coefficient `b_2`, when `J >= 1`.
    pub fn b2(&self) -> Option<&Coefficient> {
        self.b.first()
    }
}

fn pipeline(
    jet: &SolutionJet,
    j_terms: usize,
) -> Result<(PuiseuxSeries, CompositionLedger), ForwardError> {
    let k_jet = jet.top_offset();
    if j_terms > k_jet {
        return Err(ForwardError::JetTooShort {
            available: k_jet,
            requested: j_terms,
        });
    }
    if !jet.a().is_positive() {
        return Err(ForwardError::NonPositiveLeading);
    }
    let tag = jet.tag();
    let (m, n) = (jet.m(), jet.n());

    let inv_a = Coefficient::one(tag).div(jet.a());
    let u_over_a = jet.series().scale(&inv_a)?;
    let x_tilde = u_over_a.mth_root_normalized(m)?; // trunc k_jet + 1
    let t_of_x = x_tilde.revert()?; // trunc k_jet + 1

    // Powers t^{m-n+r} as series in x, r = 0 ..= J. Building them by
    // repeated multiplication keeps the full provable order
    // k_jet + m - n + r, which a generic composition rule would lose.
    let mut powers: Vec<TaylorPoly> = Vec::with_capacity(j_terms + 1);
    let mut cur = TaylorPoly::one(tag, k_jet);
    for _ in 0..(m - n) {
        cur = cur.mul(&t_of_x)?;
    }
    powers.push(cur.clone());
    for _ in 1..=j_terms {
        cur = cur.mul(&t_of_x)?;
        powers.push(cur.clone());
    }

    // u^(n) assembled in x: sum over a_{m+k} (m+k)(m+k-1)...(m+k-n+1) t^{m-n+k}.
    let mut assembled: Option<TaylorPoly> = None;
    for k in 0..=j_terms {
        let coef = jet.coeffs()[k].clone();
        let fall = falling_in(tag, (m + k) as i64, n);
        let addend = powers[k].scale(&(&coef * &fall))?;
        assembled = Some(match assembled {
            None => addend,
            Some(acc) => acc.add(&addend)?,
        });
    }
    let assembled = assembled.expect("at least the leading term");

    let q: Vec<Coefficient> = (0..=j_terms)
        .map(|j| assembled.coeff(m - n + j).clone())
        .collect();
    let series = PuiseuxSeries::new_dense(n, m, jet.a().clone(), q)?;

    let lambda: Vec<Coefficient> = (2..=j_terms + 1)
        .map(|i| x_tilde.coeff(i).clone())
        .collect();
    let b: Vec<Coefficient> = (2..=j_terms + 1)
        .map(|i| t_of_x.coeff(i).clone())
        .collect();
    let c: Vec<Vec<Coefficient>> = (0..=j_terms)
        .map(|r| {
            let base = m - n + r;
            (1..=j_terms)
                .map(|i| powers[r].coeff(base + i).clone())
                .collect()
        })
        .collect();
    let p: Vec<Coefficient> = (1..=j_terms)
        .map(|r| assembled.coeff(m - n + r).clone())
        .collect();
    let q_const = if j_terms >= 1 {
        // b_{J+1} = -a_{m+J}/(m a) + Q
        let ma = &Coefficient::int_in(tag, m as i64) * jet.a();
        Some(t_of_x.coeff(j_terms + 1) + &jet.coeffs()[j_terms].div(&ma))
    } else {
        None
    };

    Ok((
        series,
        CompositionLedger {
            lambda,
            b,
            c,
            p,
            q_const,
        },
    ))
}

/// The unique Puiseux series with `f(u(t)) = u^(n)(t)` through
/// `O(t^{m-n+J+1})`, exact in exact mode.
pub fn forward_map(jet: &SolutionJet, j_terms: usize) -> Result<PuiseuxSeries, ForwardError> {
    pipeline(jet, j_terms).map(|r| r.0)
}

/// The intermediate constants of the forward construction at order `J`.
pub fn ledger(jet: &SolutionJet, j_terms: usize) -> Result<CompositionLedger, ForwardError> {
    pipeline(jet, j_terms).map(|r| r.1)
}

/// Configuration for the residual slope fit.
#[derive(Debug, Clone, Copy)]
pub struct ResidualConfig {
    /// Slack subtracted from the expected residual order before the pass
    /// check; absorbs log-log regression noise on a decade of `t`.
    pub eps_slope: f64,
}

impl Default for ResidualConfig {
    fn default() -> Self {
        ResidualConfig { eps_slope: 0.3 }
    }
}

/// Per-point residuals of the defining identity and their fitted decay order.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// `(t, |u^(n)(t) - f(u(t))|)` per grid point.
    pub points: Vec<(f64, f64)>,
    /// Fitted log-log slope; `+inf` when the residual vanishes to rounding.
    pub slope: f64,
    pub required_order: f64,
    /// True when every residual sat below the rounding floor.
    pub exact_within_rounding: bool,
    pub pass: bool,
}

/// Evaluates `|u^(n)(t) - f_J(u(t))|` on the grid and fits the decay order;
/// passes when the fitted slope reaches `m - n + J + 1 - eps_slope`.
pub fn residual_check(
    jet: &SolutionJet,
    ps: &PuiseuxSeries,
    t_grid: &[f64],
    cfg: &ResidualConfig,
) -> Result<ResidualReport, ForwardError> {
    if ps.m() != jet.m() || ps.n() != jet.n() {
        return Err(ForwardError::Structure(format!(
            "jet has (n, m) = ({}, {}), series has ({}, {})",
            jet.n(),
            jet.m(),
            ps.n(),
            ps.m()
        )));
    }
    if t_grid.is_empty()
        || t_grid.iter().any(|t| !(0.0 < *t && *t < 1.0))
        || t_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(ForwardError::BadGrid);
    }
    let u_series = jet.series().to_float();
    let un_series = jet.nth_derivative_series(usize::MAX).to_float();

    let mut points = Vec::with_capacity(t_grid.len());
    let mut scale = 1.0f64;
    for &t in t_grid {
        let u = u_series.evaluate(t);
        let un = un_series.evaluate(t);
        let r = (un - ps.evaluate(u)?).abs();
        scale = scale.max(un.abs());
        points.push((t, r));
    }
    let floor = 1e-13 * scale;
    let usable: Vec<(f64, f64)> = points.iter().copied().filter(|(_, r)| *r > floor).collect();
    let required_order = (ps.m() - ps.n() + ps.trunc_j() + 1) as f64 - cfg.eps_slope;
    let (slope, exact) = match fit_loglog_slope(&usable) {
        Some(s) if usable.len() >= 2 => (s, false),
        _ => (f64::INFINITY, true),
    };
    Ok(ResidualReport {
        points,
        slope,
        required_order,
        exact_within_rounding: exact,
        pass: slope >= required_order,
    })
}

/// Default residual grid `0.1 * 2^{-i}`, `i = 0 ..= 6`, ascending.
pub fn default_residual_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=6).map(|i| 0.1 * 0.5f64.powi(i)).collect();
    g.reverse();
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Coefficient {
        Coefficient::from_int(n)
    }

    fn ex(p: i64, q: i64) -> Coefficient {
        Coefficient::from_ratio(p, q)
    }

    fn jet(n: usize, m: usize, coeffs: &[Coefficient]) -> SolutionJet {
        SolutionJet::new(n, m, coeffs.to_vec()).unwrap()
    }

    #[test]
    fn example1_single_term() {
        let j = jet(2, 3, &[int(1), int(0), int(0), int(0), int(0)]);
        let ps = forward_map(&j, 4).unwrap();
        assert_eq!(ps.term(0), &int(6));
        for k in 1..=4 {
            assert!(ps.term(k).is_zero(), "term {} should vanish", k);
        }
    }

    #[test]
    fn quadratic_jet_matches_hand_expansion() {
        // u = t^2 + t^3, n = 2: f = 2 + 6y - 3y^2 + 15/4 y^3, y = u^{1/2}
        let j = jet(2, 2, &[int(1), int(1), int(0), int(0)]);
        let ps = forward_map(&j, 3).unwrap();
        assert_eq!(ps.term(0), &int(2));
        assert_eq!(ps.term(1), &int(6));
        assert_eq!(ps.term(2), &int(-3));
        assert_eq!(ps.term(3), &ex(15, 4));
    }

    #[test]
    fn n_equals_m_leading_term() {
        let j = jet(3, 3, &[ex(5, 2)]);
        let ps = forward_map(&j, 0).unwrap();
        assert_eq!(ps.term(0), &ex(15, 1)); // a * m! = 5/2 * 6
    }

    #[test]
    fn first_order_jet_hand_values() {
        // u = t^3 + t^4, n = 1: u' = 3x^2 + 2x^3 + ...
        let j = jet(1, 3, &[int(1), int(1)]);
        let ps = forward_map(&j, 1).unwrap();
        assert_eq!(ps.term(0), &int(3));
        assert_eq!(ps.term(1), &int(2));
    }

    #[test]
    fn errors_for_short_jets_and_negative_leading() {
        let j = jet(2, 3, &[int(1)]);
        assert!(matches!(
            forward_map(&j, 2),
            Err(ForwardError::JetTooShort { available: 0, requested: 2 })
        ));
        let neg = jet(2, 3, &[int(-1)]);
        assert!(matches!(forward_map(&neg, 0), Err(ForwardError::NonPositiveLeading)));
        // the reflected jet goes through
        assert!(forward_map(&neg.reflected(), 0).is_ok());
    }

    #[test]
    fn determinism_in_shared_prefix() {
        // jets equal through a_{m+1} give series equal through term 1
        let j1 = jet(2, 3, &[int(1), int(2), int(0)]);
        let j2 = jet(2, 3, &[int(1), int(2), int(5)]);
        let p1 = forward_map(&j1, 2).unwrap();
        let p2 = forward_map(&j2, 2).unwrap();
        assert_eq!(p1.term(0), p2.term(0));
        assert_eq!(p1.term(1), p2.term(1));
        assert_ne!(p1.term(2), p2.term(2));
    }

    #[test]
    fn ledger_b2_and_lambda2() {
        // b2 = -a_{m+1}/(m a)
        let j = jet(2, 3, &[int(2), ex(7, 3)]);
        let led = ledger(&j, 1).unwrap();
        assert_eq!(led.b2().unwrap(), &ex(-7, 18));

        // lambda_2 = 1/3 for u/a = t^3 + t^4
        let j = jet(2, 3, &[int(1), int(1)]);
        let led = ledger(&j, 1).unwrap();
        assert_eq!(led.lambda[0], ex(1, 3));

        // a_{m+1} = 0 gives b2 = 0
        let j = jet(2, 3, &[int(5), int(0)]);
        let led = ledger(&j, 1).unwrap();
        assert!(led.b2().unwrap().is_zero());

        // at J = 1 the correction constant Q is exactly zero
        let j = jet(2, 4, &[ex(3, 2), ex(-5, 7)]);
        let led = ledger(&j, 1).unwrap();
        assert!(led.q_const.unwrap().is_zero());
    }

    #[test]
    fn ledger_lengths_consistent() {
        let j = jet(2, 3, &[int(1), int(1), int(2), ex(-1, 2)]);
        let led = ledger(&j, 3).unwrap();
        assert_eq!(led.lambda.len(), 3);
        assert_eq!(led.b.len(), 3);
        assert_eq!(led.p.len(), 3);
        assert_eq!(led.c.len(), 4);
        assert!(led.c.iter().all(|row| row.len() == 3));
        assert!(led.q_const.is_some());
    }

    #[test]
    fn residual_exact_series_vanishes() {
        let j = jet(2, 3, &[int(1), int(0), int(0)]);
        let ps = forward_map(&j, 2).unwrap();
        let rep = residual_check(&j, &ps, &default_residual_grid(), &ResidualConfig::default())
            .unwrap();
        assert!(rep.exact_within_rounding);
        assert!(rep.pass);
    }

    #[test]
    fn residual_order_matches_next_term() {
        // u = t^2 + t^3 with J = 3: the first omitted term is y^4
        let j = jet(2, 2, &[int(1), int(1), int(0), int(0)]);
        let ps = forward_map(&j, 3).unwrap();
        let rep = residual_check(&j, &ps, &default_residual_grid(), &ResidualConfig::default())
            .unwrap();
        assert!(!rep.exact_within_rounding);
        assert!((rep.slope - 4.0).abs() <= 0.3, "slope {}", rep.slope);
        assert!(rep.pass);
    }

    #[test]
    fn residual_detects_leading_mismatch() {
        let j = jet(2, 2, &[int(1), int(1), int(0), int(0)]);
        let good = forward_map(&j, 3).unwrap();
        let mut terms = good.terms().to_vec();
        terms[0] = &terms[0] + &ex(1, 10);
        let bad = PuiseuxSeries::new_dense(2, 2, int(1), terms).unwrap();
        let rep = residual_check(&j, &bad, &default_residual_grid(), &ResidualConfig::default())
            .unwrap();
        // leading-order mismatch: residual is O(t^{m-n}) = O(1)
        assert!(rep.slope < 1.0, "slope {}", rep.slope);
        assert!(!rep.pass);
    }

    #[test]
    fn scaling_covariance() {
        let j = jet(2, 3, &[int(1), int(2), ex(-1, 3)]);
        let scaled = SolutionJet::new(
            2,
            3,
            j.coeffs().iter().map(|c| c.scale_int(3)).collect(),
        )
        .unwrap();
        let ps = forward_map(&j, 2).unwrap();
        let ps_scaled = forward_map(&scaled, 2).unwrap();
        // representation level: every q_j scales by the same factor
        for jj in 0..=2 {
            assert_eq!(ps_scaled.term(jj), &ps.term(jj).scale_int(3));
        }
        // evaluation level: f_c(c u) = c f(u)
        for &u in &[1e-6, 1e-3, 0.05, 0.4] {
            let lhs = ps_scaled.evaluate(3.0 * u).unwrap();
            let rhs = 3.0 * ps.evaluate(u).unwrap();
            assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1.0));
        }
    }
}
