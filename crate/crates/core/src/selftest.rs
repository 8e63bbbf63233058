//! The acceptance suite. Each criterion is a standalone function returning a
//! [`CriterionOutcome`]; the `acceptance` integration test target asserts
//! them one by one and the CLI `selftest` command prints the table.

use crate::analysis::{
    default_holder_delta, flatness_inequality_check, holder_estimate, holder_exponent_for_jet,
    log_grid, taylor_remainder_check, DerivativeBundle, FlatnessConfig,
};
use crate::coefficient::Coefficient;
use crate::corpus::{corpus_jets, handle_ex1, handle_ex4, handle_flat};
use crate::forward::{default_residual_grid, forward_map, ledger, residual_check, ResidualConfig};
use crate::jet::SolutionJet;
use crate::puiseux::PuiseuxSeries;
use crate::recovery::{
    crosscheck_uniqueness, d_k, detect_order, recover_jet_numeric, recover_jet_symbolic,
    ProbeConfig, RecoveryError,
};
use crate::series::TaylorPoly;
use num::{BigInt, BigRational, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

const SUITE_SEED: u64 = 0x4a45_5452_4543; // "JETREC"

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    fn finish(name: &'static str, start: Instant, pass: bool, detail: String) -> Self {
        CriterionOutcome {
            name,
            pass,
            detail,
            elapsed: start.elapsed(),
        }
    }
}

fn int(v: i64) -> Coefficient {
    Coefficient::from_int(v)
}

fn rational_in_range(rng: &mut ChaCha8Rng) -> Coefficient {
    let q = rng.gen_range(1i64..=4);
    let p = rng.gen_range(-5 * q..=5 * q);
    Coefficient::from_ratio(p, q)
}

fn positive_rational(rng: &mut ChaCha8Rng) -> Coefficient {
    let q = rng.gen_range(1i64..=4);
    let p = rng.gen_range(1i64..=5 * q);
    Coefficient::from_ratio(p, q)
}

fn random_jet(rng: &mut ChaCha8Rng, m_max: usize, k_max: usize) -> SolutionJet {
    let m = rng.gen_range(1..=m_max);
    let n = rng.gen_range(1..=m);
    let k = rng.gen_range(0..=k_max);
    let mut coeffs = vec![positive_rational(rng)];
    for _ in 0..k {
        coeffs.push(rational_in_range(rng));
    }
    SolutionJet::new(n, m, coeffs).expect("generated jet is valid")
}

fn example1_series(j: usize) -> PuiseuxSeries {
    PuiseuxSeries::new(2, 3, int(1), vec![(0, int(6))], j).unwrap()
}

/// 1. Example 1 forward: the single term `6 (u/a)^{1/3}`, exactly.
pub fn criterion_01_example1_forward() -> CriterionOutcome {
    let start = Instant::now();
    let jet = SolutionJet::new(2, 3, vec![int(1), int(0), int(0), int(0), int(0)]).unwrap();
    let ps = match forward_map(&jet, 4) {
        Ok(ps) => ps,
        Err(e) => {
            return CriterionOutcome::finish("example1-forward", start, false, e.to_string())
        }
    };
    let mut pass = ps.term(0) == &int(6);
    for k in 1..=4 {
        pass &= ps.term(k).is_zero();
    }
    let elapsed_ok = start.elapsed() < Duration::from_secs(1);
    CriterionOutcome::finish(
        "example1-forward",
        start,
        pass && elapsed_ok,
        format!("terms = [{}, ...], runtime ok = {}", ps.term(0), elapsed_ok),
    )
}

/// 2. Example 1 recovery, symbolic (exact) and numeric (within tolerance).
pub fn criterion_02_example1_recovery() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();

    let sym = recover_jet_symbolic(&example1_series(3), 3);
    match sym {
        Ok(rep) => {
            pass &= rep.m == 3 && rep.a == int(1);
            pass &= rep.jet.coeffs()[1..].iter().all(|c| c.is_zero());
        }
        Err(e) => {
            pass = false;
            detail.push_str(&format!("symbolic: {}; ", e));
        }
    }

    match recover_jet_numeric(&handle_ex1(), 2, 3, &ProbeConfig::default()) {
        Ok(rep) => {
            pass &= rep.m == 3;
            pass &= (rep.a.to_f64() - 1.0).abs() <= 1e-8;
            pass &= rep.jet.coeffs()[1..]
                .iter()
                .all(|c| c.to_f64().abs() <= 1e-6);
            pass &= rep.aborted.is_none();
            let max_err = rep.stages.iter().map(|s| s.err).fold(0.0, f64::max);
            detail.push_str(&format!("numeric max stage err = {:.3e}", max_err));
            pass &= max_err <= 1e-8;
        }
        Err(e) => {
            pass = false;
            detail.push_str(&format!("numeric: {}", e));
        }
    }
    let elapsed_ok = start.elapsed() < Duration::from_secs(5);
    CriterionOutcome::finish("example1-recovery", start, pass && elapsed_ok, detail)
}

/// 3. 200 random exact jets: symbolic recovery inverts the forward map exactly.
pub fn criterion_03_round_trip() -> CriterionOutcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut failures = 0usize;
    for _ in 0..200 {
        let jet = random_jet(&mut rng, 6, 5);
        let k = jet.top_offset();
        let ps = forward_map(&jet, k).expect("forward map on a valid jet");
        let rep = recover_jet_symbolic(&ps, k).expect("symbolic recovery");
        if rep.jet != jet {
            failures += 1;
        }
    }
    let elapsed_ok = start.elapsed() < Duration::from_secs(60);
    CriterionOutcome::finish(
        "round-trip-exact",
        start,
        failures == 0 && elapsed_ok,
        format!("failures = {}/200, runtime ok = {}", failures, elapsed_ok),
    )
}

/// 4. The first reversion coefficient: `b_2 = -a_{m+1} / (m a)`, exactly.
pub fn criterion_04_b2_identity() -> CriterionOutcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 0xb2);
    let mut failures = 0usize;
    for _ in 0..100 {
        let mut jet = random_jet(&mut rng, 6, 5);
        if jet.top_offset() == 0 {
            let mut coeffs = jet.coeffs().to_vec();
            coeffs.push(rational_in_range(&mut rng));
            jet = SolutionJet::new(jet.n(), jet.m(), coeffs).unwrap();
        }
        let led = ledger(&jet, 1).expect("ledger");
        let ma = &Coefficient::from_int(jet.m() as i64) * jet.a();
        let expect = -&jet.coeffs()[1].div(&ma);
        if led.b2() != Some(&expect) {
            failures += 1;
        }
    }
    CriterionOutcome::finish(
        "b2-identity",
        start,
        failures == 0,
        format!("failures = {}/100", failures),
    )
}

/// 5. The recovery divisor never vanishes on `1 <= n <= m <= 20`, `k <= 20`.
pub fn criterion_05_dk_nonvanishing() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    for m in 1..=20usize {
        for n in 1..=m {
            for k in 0..=20usize {
                if d_k(m, n, k).is_zero() {
                    pass = false;
                }
            }
        }
    }
    CriterionOutcome::finish(
        "dk-nonvanishing",
        start,
        pass,
        "all D_k over 1 <= n <= m <= 20, k <= 20".to_string(),
    )
}

/// 6. Reversion against the composition oracle, 100 random exact series.
pub fn criterion_06_reversion_oracle() -> CriterionOutcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 0x6e);
    let mut failures = 0usize;
    for _ in 0..100 {
        let len = rng.gen_range(2usize..=9);
        let mut coeffs = vec![int(0), int(1)];
        for _ in 2..len {
            coeffs.push(rational_in_range(&mut rng));
        }
        let p = TaylorPoly::new(coeffs).unwrap();
        let q = p.revert().expect("revert");
        let comp = p.compose(&q).expect("compose");
        let id = TaylorPoly::identity(crate::FieldTag::Exact, comp.trunc());
        if comp != id {
            failures += 1;
        }
    }
    CriterionOutcome::finish(
        "reversion-oracle",
        start,
        failures == 0,
        format!("failures = {}/100", failures),
    )
}

/// 7. Order detection uniqueness: the exponent map is strictly increasing in
/// `m`, and numeric detection returns the constructing order on the corpus.
pub fn criterion_07_order_detection() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=8usize {
        let mut prev: Option<BigRational> = None;
        for m in n..=32 {
            let e = BigRational::new(BigInt::from((m - n) as i64), BigInt::from(m as i64));
            if let Some(p) = prev {
                if e <= p {
                    pass = false;
                }
            }
            prev = Some(e);
        }
    }

    let cfg = ProbeConfig::default();
    let mut checks: Vec<(String, usize, crate::FunctionHandle, usize)> = vec![
        ("builtin ex1".into(), 2, handle_ex1(), 3),
        ("builtin ex4".into(), 2, handle_ex4(), 4),
    ];
    for (name, jet) in corpus_jets() {
        let ps = forward_map(&jet, jet.top_offset()).expect("forward");
        checks.push((format!("series {}", name), jet.n(), ps.to_callable(), jet.m()));
    }
    for (name, n, handle, want_m) in checks {
        match detect_order(&handle, n, &cfg) {
            Ok(det) if det.m == want_m => {}
            Ok(det) => {
                pass = false;
                detail.push_str(&format!("{}: detected m = {} (want {}); ", name, det.m, want_m));
            }
            Err(e) => {
                pass = false;
                detail.push_str(&format!("{}: {}; ", name, e));
            }
        }
    }
    CriterionOutcome::finish("order-detection", start, pass, detail)
}

/// 8. Residual decay order on 50 random jets.
pub fn criterion_08_residual_order() -> CriterionOutcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 0x8);
    let grid = default_residual_grid();
    let cfg = ResidualConfig::default();
    let mut failures = Vec::new();
    for case in 0..50 {
        let jet = random_jet(&mut rng, 4, 4);
        let j = jet.top_offset();
        let ps = forward_map(&jet, j).expect("forward");
        let rep = residual_check(&jet, &ps, &grid, &cfg).expect("residual");
        if !rep.pass {
            failures.push(format!(
                "case {}: slope {:.3} < {:.3}",
                case, rep.slope, rep.required_order
            ));
        }
    }
    CriterionOutcome::finish(
        "residual-order",
        start,
        failures.is_empty(),
        if failures.is_empty() {
            "all 50 within eps_slope".to_string()
        } else {
            failures.join("; ")
        },
    )
}

/// 9. RK4 continuation of Example 1 from 0.1 to 0.5.
pub fn criterion_09_rk4_crosscheck() -> CriterionOutcome {
    let start = Instant::now();
    let jet = SolutionJet::new(2, 3, vec![int(1), int(0), int(0)]).unwrap();
    let verdict = match crosscheck_uniqueness(&example1_series(2), &[jet], 0.1, 0.5, 10_000) {
        Ok(v) => v,
        Err(e) => return CriterionOutcome::finish("rk4-crosscheck", start, false, e.to_string()),
    };
    let rel = verdict.endpoint_rel[0];
    CriterionOutcome::finish(
        "rk4-crosscheck",
        start,
        verdict.pass() && rel <= 1e-6,
        format!("endpoint relative error = {:.3e}", rel),
    )
}

/// 10. Hölder boundedness at the guaranteed exponent across the corpus, and
/// the Example 1 constant.
pub fn criterion_10_holder_boundedness() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for (name, jet) in corpus_jets() {
        let ps = forward_map(&jet, jet.top_offset()).expect("forward");
        let handle = ps.to_callable();
        let alpha = holder_exponent_for_jet(&jet);
        let delta = default_holder_delta(&jet);
        let c4 = holder_estimate(&handle, &alpha, delta, 10_000, 7).expect("estimate");
        let c5 = holder_estimate(&handle, &alpha, delta, 100_000, 7).expect("estimate");
        if c5.max_quotient > c4.max_quotient * 1.05 {
            pass = false;
            detail.push_str(&format!(
                "{}: max grew {:.4} -> {:.4}; ",
                name, c4.max_quotient, c5.max_quotient
            ));
        }
    }
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let ex1 = holder_estimate(&handle_ex1(), &third, 1.0, 10_000, 7).expect("estimate");
    if !(ex1.max_quotient >= 5.9 && ex1.max_quotient <= 6.0001) {
        pass = false;
    }
    detail.push_str(&format!("example1 max quotient = {:.6}", ex1.max_quotient));
    CriterionOutcome::finish("holder-boundedness", start, pass, detail)
}

/// 11. Flatness sharpness: `e^{-1/t}` realizes the `1/t` growth exactly,
/// polynomial jet differences stay grid-stably bounded.
pub fn criterion_11_flatness_sharpness() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    let cfg = FlatnessConfig::default();

    let expflat = DerivativeBundle::exp_flat(2);
    let grid: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
    match flatness_inequality_check(&expflat, 1, &grid, &cfg) {
        Ok(chk) => {
            for (t, r) in grid.iter().zip(&chk.ratios) {
                let expect = 1.0 / t;
                if (r - expect).abs() > 0.01 * expect {
                    pass = false;
                    detail.push_str(&format!("t = {:e}: ratio {:.4e}; ", t, r));
                }
            }
            if chk.bounded || chk.sup_ratio < 1e5 {
                pass = false;
                detail.push_str("expflat not flagged unbounded; ");
            }
        }
        Err(e) => {
            pass = false;
            detail.push_str(&format!("expflat: {}; ", e));
        }
    }

    let probes: Vec<(SolutionJet, SolutionJet)> = vec![
        (
            SolutionJet::new(2, 3, vec![int(1), int(0), int(0)]).unwrap(),
            SolutionJet::new(2, 3, vec![int(1), int(1), int(0)]).unwrap(),
        ),
        (
            SolutionJet::new(2, 2, vec![int(1), int(1), int(0)]).unwrap(),
            SolutionJet::new(2, 2, vec![int(1), int(0), int(0)]).unwrap(),
        ),
        (
            SolutionJet::new(2, 4, vec![int(1), Coefficient::from_ratio(1, 2), int(1)]).unwrap(),
            SolutionJet::new(2, 4, vec![int(1), int(0), int(0)]).unwrap(),
        ),
        (
            SolutionJet::new(2, 3, vec![int(1), int(2)]).unwrap(),
            SolutionJet::new(2, 3, vec![int(1), int(2)]).unwrap(),
        ),
    ];
    let fine = log_grid(1e-1, 1e-6, 11);
    let coarse: Vec<f64> = fine[..5].to_vec();
    for (i, (u, v)) in probes.iter().enumerate() {
        let g = DerivativeBundle::from_jet_difference(u, v);
        let n = u.n();
        let c = flatness_inequality_check(&g, n, &coarse, &cfg).expect("coarse");
        let f = flatness_inequality_check(&g, n, &fine, &cfg).expect("fine");
        if !(c.bounded && f.bounded && f.sup_ratio <= c.sup_ratio * 1.05 + 1e-9) {
            pass = false;
            detail.push_str(&format!(
                "probe {}: sup {:.4} -> {:.4}; ",
                i, c.sup_ratio, f.sup_ratio
            ));
        }
    }
    CriterionOutcome::finish("flatness-sharpness", start, pass, detail)
}

/// 12. Appendix-style remainder regularity for exp at 0, degree 2.
pub fn criterion_12_taylor_remainder() -> CriterionOutcome {
    let start = Instant::now();
    let grid = log_grid(1e-1, 1e-6, 6);
    match taylor_remainder_check(&DerivativeBundle::exp(), 0.0, 2, &grid) {
        Ok(rep) => CriterionOutcome::finish(
            "taylor-remainder",
            start,
            rep.dq_err <= 1e-6 && rep.hprime_err <= 1e-6,
            format!(
                "h'(0) estimate = {:.9} (target 1/6), dq err = {:.3e}, h' err = {:.3e}",
                rep.dq_estimate, rep.dq_err, rep.hprime_err
            ),
        ),
        Err(e) => CriterionOutcome::finish("taylor-remainder", start, false, e.to_string()),
    }
}

/// 13. Negative control: the flat right-hand side admits no order.
pub fn criterion_13_flat_negative_control() -> CriterionOutcome {
    let start = Instant::now();
    match recover_jet_numeric(&handle_flat(), 1, 2, &ProbeConfig::default()) {
        Err(RecoveryError::NoAdmissibleOrder { reason, .. }) => CriterionOutcome::finish(
            "flat-negative-control",
            start,
            true,
            format!("rejected: {}", reason),
        ),
        Err(e) => CriterionOutcome::finish(
            "flat-negative-control",
            start,
            false,
            format!("wrong error: {}", e),
        ),
        Ok(rep) => CriterionOutcome::finish(
            "flat-negative-control",
            start,
            false,
            format!("unexpectedly recovered m = {}", rep.m),
        ),
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_01_example1_forward(),
        criterion_02_example1_recovery(),
        criterion_03_round_trip(),
        criterion_04_b2_identity(),
        criterion_05_dk_nonvanishing(),
        criterion_06_reversion_oracle(),
        criterion_07_order_detection(),
        criterion_08_residual_order(),
        criterion_09_rk4_crosscheck(),
        criterion_10_holder_boundedness(),
        criterion_11_flatness_sharpness(),
        criterion_12_taylor_remainder(),
        criterion_13_flat_negative_control(),
    ]
}

/// One `name: PASS/FAIL (detail)` line per criterion.
pub fn format_outcome(o: &CriterionOutcome) -> String {
    format!(
        "{}: {} ({:.2}s{}{})",
        o.name,
        if o.pass { "PASS" } else { "FAIL" },
        o.elapsed.as_secs_f64(),
        if o.detail.is_empty() { "" } else { "; " },
        o.detail
    )
}

