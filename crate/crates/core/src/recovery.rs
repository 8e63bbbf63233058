//! The construction read backward: from the right-hand side `f` (symbolic
//! series or positive-axis black box) to the vanishing order `m`, the leading
//! coefficient `a`, and the full jet.
//!
//! Both directions hinge on the same linear relation: the coefficient of the
//! `(k+1)`-th Puiseux term responds to `a_{m+k+1}` through the nonvanishing
//! divisor `D_k = (m+k+1)(m+k)...(m+k-n+2) - (m-1)(m-2)...(m-n)`, so each
//! stage reads one jet coefficient off one coefficient gap.

use crate::coefficient::{Coefficient, FieldTag};
use crate::forward::{
    default_residual_grid, forward_map, residual_check, ForwardError, ResidualConfig,
};
use crate::jet::{JetError, SolutionJet};
use crate::numeric::{falling_big, falling_f64, falling_in, richardson_geometric, rk4_integrate};
use crate::puiseux::{PuiseuxError, PuiseuxSeries};
use crate::series::SeriesError;
use num::{BigInt, ToPrimitive};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecoveryError {
    #[error("no admissible vanishing order m <= {m_max}: {reason}")]
    NoAdmissibleOrder { m_max: usize, reason: String },
    #[error("estimated order {m_est} is not within {m_tol} of an integer")]
    NonIntegerOrder { m_est: f64, m_tol: f64 },
    #[error("leading limit {limit} is not positive; set the reflection flag to recover from -f")]
    NegativeLimit { limit: f64 },
    #[error("function vanishes on every probe sample")]
    VanishingSamples,
    #[error("series leading term {q0} conflicts with its header (expected a*m(m-1)...(m-n+1) = {expected})")]
    HeaderMismatch { q0: String, expected: String },
    #[error("requested {requested} coefficients but the series carries only {available} terms")]
    TooFewTerms { requested: usize, available: usize },
    #[error("integration left the domain u >= 0 near t = {t}")]
    DomainExit { t: f64 },
    #[error("need 0 < t0 <= t1 < 1, got [{t0}, {t1}]")]
    BadInterval { t0: f64, t1: f64 },
    #[error(transparent)]
    Forward(#[from] ForwardError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Deterministic black-box view of `f` on the positive axis.
#[derive(Clone)]
pub struct FunctionHandle {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    delta_max: f64,
}

impl FunctionHandle {
    pub fn new(delta_max: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        FunctionHandle {
            eval: Arc::new(f),
            delta_max,
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.eval)(u)
    }

    /// Hint for the largest `u` the handle is meant to be probed at.
    pub fn delta_max(&self) -> f64 {
        self.delta_max
    }
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("delta_max", &self.delta_max)
            .finish_non_exhaustive()
    }
}

/// Probe mesh and acceptance knobs for the numeric paths.
#[derive(Debug, Clone)]
pub struct ProbeConfig {
    /// Coarsest sample; defaults to `1e-2 * delta_max`.
    pub u0: Option<f64>,
    /// Geometric mesh ratio.
    pub rho: f64,
    /// Number of samples `u0 * rho^i`.
    pub depth: usize,
    /// Largest vanishing order the search admits.
    pub m_max: usize,
    /// Integer-snap tolerance for the estimated order.
    pub m_tol: f64,
    /// Largest acceptable extrapolation error per stage limit.
    pub limit_tol: f64,
    /// Interpret the handle as the reflected right-hand side when the
    /// leading limit comes out negative.
    pub reflect: bool,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            u0: None,
            rho: 0.5,
            depth: 20,
            m_max: 32,
            m_tol: 0.05,
            limit_tol: 1e-6,
            reflect: false,
        }
    }
}

/// Outcome of [`detect_order`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrderDetection {
    pub m: usize,
    pub a: f64,
    /// Extrapolated log-log slope of `f` at `0+`.
    pub p_hat: f64,
    /// Richardson limit of `f(u)/u^{(m-n)/m}` and its error estimate.
    pub limit: f64,
    pub limit_err: f64,
    pub samples: usize,
    pub reflected: bool,
}

/// `D_k = (m+k+1)(m+k)...(m+k-n+2) - (m-1)(m-2)...(m-n)`, exact.
pub fn d_k(m: usize, n: usize, k: usize) -> BigInt {
    falling_big((m + k + 1) as i64, n) - falling_big(m as i64 - 1, n)
}

fn d_k_in(tag: FieldTag, m: usize, n: usize, k: usize) -> Coefficient {
    match tag {
        FieldTag::Exact => Coefficient::Exact(num::BigRational::from_integer(d_k(m, n, k))),
        FieldTag::Float => Coefficient::Float(d_k(m, n, k).to_f64().unwrap_or(f64::NAN)),
    }
}

/// Reads the vanishing order `m` and the leading coefficient `a` off a black
/// box: snap `m = n/(1 - p_hat)` from the extrapolated log-log slope, then
/// extrapolate `f(u)/u^{(m-n)/m}` on the same mesh.
pub fn detect_order(
    f: &FunctionHandle,
    n: usize,
    cfg: &ProbeConfig,
) -> Result<OrderDetection, RecoveryError> {
    assert!(n >= 1, "equation order must be positive");
    let no_order = |reason: &str| RecoveryError::NoAdmissibleOrder {
        m_max: cfg.m_max,
        reason: reason.to_string(),
    };
    let u0 = cfg.u0.unwrap_or(1e-2 * f.delta_max());
    let us: Vec<f64> = (0..cfg.depth).map(|i| u0 * cfg.rho.powi(i as i32)).collect();
    let fs: Vec<f64> = us.iter().map(|&u| f.eval(u)).collect();
    if fs.iter().all(|v| *v == 0.0) {
        return Err(RecoveryError::VanishingSamples);
    }

    // longest usable suffix: finite, nonzero, consistent sign
    let mut start = fs.len();
    let mut sign = 0.0f64;
    for i in (0..fs.len()).rev() {
        let v = fs[i];
        if !v.is_finite() || v == 0.0 {
            break;
        }
        if sign == 0.0 {
            sign = v.signum();
        } else if v.signum() != sign {
            break;
        }
        start = i;
    }
    if fs.len() - start < 6 {
        return Err(no_order("fewer than 6 usable probe samples"));
    }
    let tail_u = &us[start..];
    let tail_f = &fs[start..];

    let ln_rho = cfg.rho.ln();
    let ph: Vec<f64> = tail_f
        .windows(2)
        .map(|w| (w[1] / w[0]).abs().ln() / ln_rho)
        .collect();

    // The slope sequence for a genuine fractional power law converges with
    // geometric error in rho^{1/m}; iterate the candidate order used as the
    // extrapolation rate until it reproduces itself.
    let p_raw = *ph.last().unwrap();
    let threshold = 1.0 - n as f64 / (n + cfg.m_max) as f64;
    let mut cand: i64 = if p_raw >= threshold {
        cfg.m_max as i64
    } else {
        (n as f64 / (1.0 - p_raw)).round() as i64
    };
    cand = cand.clamp(n as i64, cfg.m_max as i64);
    let mut chosen = None;
    for _ in 0..5 {
        let q = cfg.rho.powf(1.0 / cand as f64);
        let rich = richardson_geometric(&ph, q, 5).expect("nonempty slope sequence");
        let p_hat = rich.value;
        if p_hat >= threshold {
            return Err(no_order(&format!(
                "extrapolated slope {:.4} admits no m <= {}",
                p_hat, cfg.m_max
            )));
        }
        let m_est = n as f64 / (1.0 - p_hat);
        let m_round = m_est.round() as i64;
        if m_round < n as i64 {
            return Err(no_order(&format!(
                "estimated order {:.4} is below the equation order {}",
                m_est, n
            )));
        }
        if m_round > cfg.m_max as i64 {
            return Err(no_order(&format!("estimated order {:.4} exceeds m_max", m_est)));
        }
        if m_round == cand {
            chosen = Some((p_hat, m_est, rich.err));
            break;
        }
        cand = m_round;
    }
    let Some((p_hat, m_est, p_err)) = chosen else {
        return Err(no_order("order estimate did not stabilize"));
    };
    // slope uncertainty mapped through dm/dp = m^2/n; a drifting slope (the
    // flat regime) shows up here
    let sigma_m = m_est * m_est / n as f64 * p_err;
    if !(sigma_m <= cfg.m_tol) {
        return Err(no_order(&format!(
            "slope drifts: order uncertainty {:.4} exceeds {}",
            sigma_m, cfg.m_tol
        )));
    }
    let m = m_est.round() as usize;
    if (m_est - m as f64).abs() > cfg.m_tol {
        return Err(RecoveryError::NonIntegerOrder {
            m_est,
            m_tol: cfg.m_tol,
        });
    }

    // leading limit L = lim f(u)/u^{(m-n)/m} = a^{n/m} m(m-1)...(m-n+1)
    let p_lead = (m - n) as f64 / m as f64;
    let s: Vec<f64> = tail_u
        .iter()
        .zip(tail_f)
        .map(|(&u, &v)| v / u.powf(p_lead))
        .collect();
    let rich = richardson_geometric(&s, cfg.rho.powf(1.0 / m as f64), 6)
        .expect("nonempty limit sequence");
    let (limit, limit_err) = (rich.value, rich.err);
    let reflected = if limit <= 0.0 {
        if !cfg.reflect {
            return Err(RecoveryError::NegativeLimit { limit });
        }
        true
    } else {
        false
    };
    let a = (limit.abs() / falling_f64(m as f64, n)).powf(m as f64 / n as f64);
    Ok(OrderDetection {
        m,
        a,
        p_hat,
        limit,
        limit_err,
        samples: tail_f.len(),
        reflected,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryMode {
    Symbolic,
    Numeric,
}

/// One recovered coefficient: which stage produced it, the limit read, the
/// extrapolation error estimate, and how many samples went in.
#[derive(Debug, Clone, PartialEq)]
pub struct StageDiagnostic {
    pub stage: usize,
    pub limit: f64,
    pub err: f64,
    pub samples: usize,
}

/// Numeric recovery stopped early: the stage whose limit failed and its error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageAbort {
    pub stage: usize,
    pub err: f64,
}

#[derive(Debug, Clone)]
pub struct RecoveryReport {
    pub mode: RecoveryMode,
    pub m: usize,
    pub a: Coefficient,
    pub jet: SolutionJet,
    pub stages: Vec<StageDiagnostic>,
    pub reflected: bool,
    /// Set when numeric recovery truncated at a noisy stage.
    pub aborted: Option<StageAbort>,
}

/// Recovers the jet from symbolic Puiseux data: stage `k` forwards the
/// partial jet with `a_{m+k+1} = 0` and divides the coefficient gap at term
/// `k + 1` by `D_k`. Exact in exact mode.
pub fn recover_jet_symbolic(
    f: &PuiseuxSeries,
    k_count: usize,
) -> Result<RecoveryReport, RecoveryError> {
    if k_count > f.trunc_j() {
        return Err(RecoveryError::TooFewTerms {
            requested: k_count,
            available: f.trunc_j(),
        });
    }
    let (n, m) = (f.n(), f.m());
    let a = f.a().clone();
    let tag = a.tag();

    let expected = &a * &falling_in(tag, m as i64, n);
    let q0 = f.term(0);
    let consistent = if tag == FieldTag::Exact {
        q0 == &expected
    } else {
        (q0.to_f64() - expected.to_f64()).abs() <= 1e-9 * expected.to_f64().abs().max(1.0)
    };
    if !consistent {
        return Err(RecoveryError::HeaderMismatch {
            q0: q0.to_string(),
            expected: expected.to_string(),
        });
    }

    let mut coeffs = vec![a.clone()];
    let mut stages = vec![StageDiagnostic {
        stage: 0,
        limit: q0.to_f64(),
        err: 0.0,
        samples: 0,
    }];
    for k in 0..k_count {
        let mut partial = coeffs.clone();
        partial.push(Coefficient::zero(tag));
        let pj = SolutionJet::new(n, m, partial)?;
        let ps = forward_map(&pj, k + 1)?;
        let gap = f.term(k + 1) - ps.term(k + 1);
        let next = gap.div(&d_k_in(tag, m, n, k));
        stages.push(StageDiagnostic {
            stage: k + 1,
            limit: gap.to_f64(),
            err: 0.0,
            samples: 0,
        });
        coeffs.push(next);
    }
    let jet = SolutionJet::new(n, m, coeffs)?;
    Ok(RecoveryReport {
        mode: RecoveryMode::Symbolic,
        m,
        a,
        jet,
        stages,
        reflected: false,
        aborted: None,
    })
}

/// Recovers the jet from a black box: after order detection, stage `k`
/// Richardson-extrapolates
/// `(f(u) - sum_{j<=k} q_j (u/a)^{(m-n+j)/m}) / (u/a)^{(m-n+k+1)/m}`
/// on the geometric mesh and converts the limit through the same `D_k`
/// relation as the symbolic path. A stage whose extrapolation error exceeds
/// `limit_tol` truncates the report instead of emitting noise.
pub fn recover_jet_numeric(
    f: &FunctionHandle,
    n: usize,
    k_count: usize,
    cfg: &ProbeConfig,
) -> Result<RecoveryReport, RecoveryError> {
    let det = detect_order(f, n, cfg)?;
    let sign = if det.reflected { -1.0 } else { 1.0 };
    let (m, a) = (det.m, det.a);
    let u0 = cfg.u0.unwrap_or(1e-2 * f.delta_max());
    let q_step = cfg.rho.powf(1.0 / m as f64);

    let mut coeffs = vec![Coefficient::Float(a)];
    let mut stages = vec![StageDiagnostic {
        stage: 0,
        limit: det.limit,
        err: det.limit_err,
        samples: det.samples,
    }];
    let mut aborted = None;
    for k in 0..k_count {
        let mut partial = coeffs.clone();
        partial.push(Coefficient::Float(0.0));
        let pj = SolutionJet::new(n, m, partial)?;
        let ps = forward_map(&pj, k + 1)?;
        let q_partial = ps.term(k + 1).to_f64();
        // partial sum through term k, evaluated exactly like the series path
        let head = PuiseuxSeries::new_dense(n, m, Coefficient::Float(a), ps.terms()[..=k].to_vec())?;

        let exponent = (m - n + k + 1) as f64 / m as f64;
        let mut samples = Vec::with_capacity(cfg.depth);
        for i in 0..cfg.depth {
            let u = u0 * cfg.rho.powi(i as i32);
            let ratio = u / a;
            if ratio <= 0.0 {
                break;
            }
            let s = (sign * f.eval(u) - head.evaluate(u)?) / ratio.powf(exponent);
            samples.push(s);
        }
        let rich = richardson_geometric(&samples, q_step, 6);
        let ok = rich.map_or(false, |r| r.value.is_finite() && r.err <= cfg.limit_tol);
        if !ok {
            aborted = Some(StageAbort {
                stage: k + 1,
                err: rich.map_or(f64::INFINITY, |r| r.err),
            });
            break;
        }
        let rich = rich.expect("checked above");
        let next = (rich.value - q_partial) / d_k(m, n, k).to_f64().unwrap_or(f64::NAN);
        stages.push(StageDiagnostic {
            stage: k + 1,
            limit: rich.value,
            err: rich.err,
            samples: samples.len(),
        });
        coeffs.push(Coefficient::Float(next));
    }
    let jet = SolutionJet::new(n, m, coeffs)?;
    Ok(RecoveryReport {
        mode: RecoveryMode::Numeric,
        m,
        a: Coefficient::Float(a),
        jet,
        stages,
        reflected: det.reflected,
        aborted,
    })
}

pub const DEFAULT_ENDPOINT_RTOL: f64 = 1e-6;

/// Aggregate verdict of [`crosscheck_uniqueness`].
#[derive(Debug, Clone)]
pub struct Verdict {
    /// Residual-check outcome per jet (structural mismatch counts as fail).
    pub residual_pass: Vec<bool>,
    /// Pairs of residual-passing jets that disagree coefficient-wise.
    pub pair_disagreements: Vec<(usize, usize)>,
    /// Relative endpoint error of the RK4 continuation per jet.
    pub endpoint_rel: Vec<f64>,
    pub endpoint_rtol: f64,
    /// `t0 = t1`: integration skipped, trivially consistent.
    pub trivial_interval: bool,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.residual_pass.iter().all(|b| *b)
            && self.pair_disagreements.is_empty()
            && self.endpoint_rel.iter().all(|r| *r <= self.endpoint_rtol)
    }
}

fn jets_agree(a: &SolutionJet, b: &SolutionJet) -> bool {
    if a.m() != b.m() || a.n() != b.n() {
        return false;
    }
    let upto = a.coeffs().len().min(b.coeffs().len());
    let exact = a.tag() == FieldTag::Exact && b.tag() == FieldTag::Exact;
    a.coeffs()[..upto]
        .iter()
        .zip(&b.coeffs()[..upto])
        .all(|(x, y)| {
            if exact {
                x == y
            } else {
                (x.to_f64() - y.to_f64()).abs() <= 1e-9 * x.to_f64().abs().max(1.0)
            }
        })
}

/// Operational uniqueness check: (i) any two jets that both satisfy the
/// defining identity against the same `f` must agree coefficient-wise;
/// (ii) RK4 continuation from `t0` must land on the jet's own value at `t1`.
pub fn crosscheck_uniqueness(
    f: &PuiseuxSeries,
    jets: &[SolutionJet],
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Verdict, RecoveryError> {
    if !(0.0 < t0 && t0 <= t1 && t1 < 1.0) {
        return Err(RecoveryError::BadInterval { t0, t1 });
    }
    let trivial = t0 == t1;
    let grid = default_residual_grid();
    let rcfg = ResidualConfig::default();

    let mut residual_pass = Vec::with_capacity(jets.len());
    for jet in jets {
        let pass = match residual_check(jet, f, &grid, &rcfg) {
            Ok(rep) => rep.pass,
            Err(ForwardError::Structure(_)) => false,
            Err(e) => return Err(e.into()),
        };
        residual_pass.push(pass);
    }

    let mut pair_disagreements = Vec::new();
    for i in 0..jets.len() {
        for j in i + 1..jets.len() {
            if residual_pass[i] && residual_pass[j] && !jets_agree(&jets[i], &jets[j]) {
                pair_disagreements.push((i, j));
            }
        }
    }

    let mut endpoint_rel = Vec::with_capacity(jets.len());
    if !trivial {
        for jet in jets {
            let n = jet.n();
            let y0: Vec<f64> = (0..n)
                .map(|i| jet.derivative_series(i).evaluate(t0))
                .collect();
            let fh = f.clone();
            let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| -> bool {
                if y[0] < 0.0 {
                    return false;
                }
                let Ok(v) = fh.evaluate(y[0]) else { return false };
                if !v.is_finite() {
                    return false;
                }
                for i in 0..dy.len() - 1 {
                    dy[i] = y[i + 1];
                }
                dy[dy.len() - 1] = v;
                true
            };
            let yend = rk4_integrate(rhs, t0, t1, steps.max(1), &y0)
                .map_err(|t| RecoveryError::DomainExit { t })?;
            let expected = jet.series().evaluate(t1);
            let rel = (yend[0] - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
            endpoint_rel.push(rel);
        }
    }

    Ok(Verdict {
        residual_pass,
        pair_disagreements,
        endpoint_rel,
        endpoint_rtol: DEFAULT_ENDPOINT_RTOL,
        trivial_interval: trivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Coefficient {
        Coefficient::from_int(v)
    }

    fn ex(p: i64, q: i64) -> Coefficient {
        Coefficient::from_ratio(p, q)
    }

    #[test]
    fn d_k_hand_values() {
        // n = 2, m = 3, k = 0: 4*3 - 2*1 = 10
        assert_eq!(d_k(3, 2, 0), BigInt::from(10));
        // n = m = 2, k = 0: 3*2 - 1*0 = 6
        assert_eq!(d_k(2, 2, 0), BigInt::from(6));
        // n = 1: (m+k+1) - (m-1) = k + 2
        assert_eq!(d_k(5, 1, 3), BigInt::from(5));
    }

    #[test]
    fn symbolic_recovery_example1() {
        let f = PuiseuxSeries::new(2, 3, int(1), vec![(0, int(6))], 4).unwrap();
        let rep = recover_jet_symbolic(&f, 4).unwrap();
        assert_eq!(rep.m, 3);
        assert_eq!(rep.a, int(1));
        assert_eq!(rep.jet.coeffs()[0], int(1));
        for k in 1..=4 {
            assert!(rep.jet.coeffs()[k].is_zero());
        }
        assert_eq!(rep.stages.len(), 5);
    }

    #[test]
    fn symbolic_recovery_round_trip() {
        let jet = SolutionJet::new(2, 2, vec![int(1), int(1), int(0), int(0)]).unwrap();
        let f = forward_map(&jet, 3).unwrap();
        let rep = recover_jet_symbolic(&f, 2).unwrap();
        assert_eq!(rep.jet.coeffs()[1], int(1));
        assert!(rep.jet.coeffs()[2].is_zero());
    }

    #[test]
    fn symbolic_stage_is_linear_in_the_gap() {
        // perturbing q_1 by eps shifts a_{m+1} by exactly eps / D_0
        let jet = SolutionJet::new(2, 3, vec![int(2), ex(1, 3)]).unwrap();
        let f = forward_map(&jet, 1).unwrap();
        let eps = ex(1, 7);
        let mut terms = f.terms().to_vec();
        terms[1] = &terms[1] + &eps;
        let perturbed = PuiseuxSeries::new_dense(2, 3, int(2), terms).unwrap();
        let base = recover_jet_symbolic(&f, 1).unwrap();
        let shifted = recover_jet_symbolic(&perturbed, 1).unwrap();
        let delta = &shifted.jet.coeffs()[1] - &base.jet.coeffs()[1];
        assert_eq!(delta, eps.div(&Coefficient::Exact(num::BigRational::from_integer(d_k(3, 2, 0)))));
    }

    #[test]
    fn symbolic_header_mismatch_rejected() {
        // q0 must equal a * m(m-1)...(m-n+1) = 6
        let f = PuiseuxSeries::new(2, 3, int(1), vec![(0, int(5))], 2).unwrap();
        assert!(matches!(
            recover_jet_symbolic(&f, 1),
            Err(RecoveryError::HeaderMismatch { .. })
        ));
    }

    #[test]
    fn symbolic_too_few_terms() {
        let f = PuiseuxSeries::new(2, 3, int(1), vec![(0, int(6))], 1).unwrap();
        assert!(matches!(
            recover_jet_symbolic(&f, 3),
            Err(RecoveryError::TooFewTerms { requested: 3, available: 1 })
        ));
    }

    #[test]
    fn detect_order_power_laws() {
        let ex1 = FunctionHandle::new(1.0, |u| 6.0 * u.powf(1.0 / 3.0));
        let det = detect_order(&ex1, 2, &ProbeConfig::default()).unwrap();
        assert_eq!(det.m, 3);
        assert!((det.a - 1.0).abs() < 1e-10, "a = {}", det.a);

        let ex4 = FunctionHandle::new(1.0, |u| 12.0 * u.sqrt());
        let det = detect_order(&ex4, 2, &ProbeConfig::default()).unwrap();
        assert_eq!(det.m, 4);
        assert!((det.a - 1.0).abs() < 1e-10);
    }

    #[test]
    fn detect_order_rejects_linear() {
        // f = u with n = 1: slope 1, (m-n)/m < 1 for every finite m
        let f = FunctionHandle::new(1.0, |u| u);
        assert!(matches!(
            detect_order(&f, 1, &ProbeConfig::default()),
            Err(RecoveryError::NoAdmissibleOrder { .. })
        ));
    }

    #[test]
    fn detect_order_rejects_flat_rhs() {
        // s (ln s)^2: the slope drifts toward 1, never stabilizing on an m
        let f = FunctionHandle::new(1.0, |s| if s > 0.0 { s * s.ln() * s.ln() } else { 0.0 });
        assert!(matches!(
            detect_order(&f, 1, &ProbeConfig::default()),
            Err(RecoveryError::NoAdmissibleOrder { .. })
        ));
    }

    #[test]
    fn detect_order_vanishing_samples() {
        let f = FunctionHandle::new(1.0, |_| 0.0);
        assert!(matches!(
            detect_order(&f, 1, &ProbeConfig::default()),
            Err(RecoveryError::VanishingSamples)
        ));
    }

    #[test]
    fn numeric_recovery_example1() {
        let f = FunctionHandle::new(1.0, |u| 6.0 * u.powf(1.0 / 3.0));
        let rep = recover_jet_numeric(&f, 2, 3, &ProbeConfig::default()).unwrap();
        assert_eq!(rep.m, 3);
        assert!(rep.aborted.is_none());
        assert!((rep.a.to_f64() - 1.0).abs() < 1e-10);
        for k in 1..=3 {
            assert!(rep.jet.coeffs()[k].to_f64().abs() < 1e-8);
        }
        for st in &rep.stages {
            assert!(st.err <= 1e-8, "stage {} err {}", st.stage, st.err);
        }
    }

    #[test]
    fn crosscheck_trivial_interval() {
        let f = PuiseuxSeries::new(2, 3, int(1), vec![(0, int(6))], 2).unwrap();
        let jet = SolutionJet::new(2, 3, vec![int(1), int(0), int(0)]).unwrap();
        let v = crosscheck_uniqueness(&f, &[jet], 0.3, 0.3, 100).unwrap();
        assert!(v.trivial_interval);
        assert!(v.pass());
    }

    #[test]
    fn crosscheck_flags_tampered_jet() {
        let f = PuiseuxSeries::new(2, 3, int(1), vec![(0, int(6))], 2).unwrap();
        let good = SolutionJet::new(2, 3, vec![int(1), int(0), int(0)]).unwrap();
        let bad = SolutionJet::new(2, 3, vec![int(1), ex(1, 1000), int(0)]).unwrap();
        let v = crosscheck_uniqueness(&f, &[good, bad], 0.1, 0.5, 2000).unwrap();
        assert!(v.residual_pass[0]);
        assert!(!v.residual_pass[1], "tampered jet must fail the residual");
        assert!(!v.pass());
    }

    #[test]
    fn crosscheck_example1_rk4() {
        let f = PuiseuxSeries::new(2, 3, int(1), vec![(0, int(6))], 2).unwrap();
        let jet = SolutionJet::new(2, 3, vec![int(1), int(0), int(0)]).unwrap();
        let v = crosscheck_uniqueness(&f, &[jet], 0.1, 0.5, 10_000).unwrap();
        assert!(v.pass());
        assert!(v.endpoint_rel[0] <= 1e-6, "endpoint error {}", v.endpoint_rel[0]);
    }

    #[test]
    fn order_exponent_strictly_increasing() {
        for n in 1usize..=8 {
            let mut prev = -1.0;
            for m in n..=32 {
                let e = (m - n) as f64 / m as f64;
                assert!(e > prev, "exponent not increasing at n={}, m={}", n, m);
                prev = e;
            }
        }
    }
}
