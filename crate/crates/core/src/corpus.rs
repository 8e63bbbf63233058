//! Built-in example corpus shared by the test suites and the CLI: the three
//! canonical right-hand sides (`6 u^{1/3}`, the autonomous reduction
//! `12 u^{1/2}`, and the flat `s (ln s)^2`), the jets that generate the first
//! two, and the `e^{-1/t}` derivative bundle.

use crate::analysis::DerivativeBundle;
use crate::coefficient::Coefficient;
use crate::jet::SolutionJet;
use crate::recovery::FunctionHandle;

/// `6 u^{1/3}` — the right-hand side of `u = t^3`, `n = 2`.
pub fn handle_ex1() -> FunctionHandle {
    FunctionHandle::new(1.0, |u| 6.0 * u.powf(1.0 / 3.0))
}

/// `12 u^{1/2}` — the autonomous reduction of `u = t^4`, `n = 2`.
pub fn handle_ex4() -> FunctionHandle {
    FunctionHandle::new(1.0, |u| 12.0 * u.sqrt())
}

/// `s (ln s)^2` extended by 0 — the right-hand side whose solution vanishes
/// to infinite order; order detection is expected to fail on it.
pub fn handle_flat() -> FunctionHandle {
    FunctionHandle::new(1.0, |s| if s > 0.0 { s * s.ln() * s.ln() } else { 0.0 })
}

pub fn builtin_handle(name: &str) -> Option<FunctionHandle> {
    match name {
        "ex1" => Some(handle_ex1()),
        "ex4" => Some(handle_ex4()),
        "flat" => Some(handle_flat()),
        _ => None,
    }
}

/// The equation order each builtin right-hand side belongs to.
pub fn builtin_equation_order(name: &str) -> Option<usize> {
    match name {
        "ex1" | "ex4" => Some(2),
        "flat" => Some(1),
        _ => None,
    }
}

pub fn builtin_bundle(name: &str, max_order: usize) -> Option<DerivativeBundle> {
    match name {
        "expflat" => Some(DerivativeBundle::exp_flat(max_order)),
        "exp" => Some(DerivativeBundle::exp()),
        "sin" => Some(DerivativeBundle::sin()),
        "cubic" => Some(DerivativeBundle::polynomial(&[0.0, 0.0, 0.0, 1.0])),
        _ => None,
    }
}

fn int(v: i64) -> Coefficient {
    Coefficient::from_int(v)
}

/// Named test jets, all with enough zero padding for four forward terms.
pub fn corpus_jets() -> Vec<(&'static str, SolutionJet)> {
    vec![
        (
            "ex1",
            SolutionJet::new(2, 3, vec![int(1), int(0), int(0), int(0), int(0)]).unwrap(),
        ),
        (
            "ex4",
            SolutionJet::new(2, 4, vec![int(1), int(0), int(0), int(0), int(0)]).unwrap(),
        ),
        (
            "quadratic",
            SolutionJet::new(2, 2, vec![int(1), int(1), int(0), int(0), int(0)]).unwrap(),
        ),
        (
            "cubic-n1",
            SolutionJet::new(1, 3, vec![int(1), int(1), int(0), int(0), int(0)]).unwrap(),
        ),
    ]
}
