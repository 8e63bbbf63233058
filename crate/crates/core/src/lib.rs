//! Symbolic-numeric toolkit for degenerate autonomous initial value problems
//! `u^(n) = f(u)` whose solutions vanish to finite order `m >= n` at `t = 0`.
//!
//! Given the solution's Taylor jet, [`forward::forward_map`] produces the
//! unique fractional-power (Puiseux) expansion of `f` near `0`; given `f`
//! (symbolically or as a black box), [`recovery`] detects the vanishing order
//! and recovers the jet. The [`analysis`] module checks the companion
//! analytic claims numerically: Hölder continuity of `f`, the flatness
//! differential inequality, the gap estimates of the uniqueness argument,
//! and the regularity of Taylor remainders.
//!
//! Exact rational arithmetic is the default whenever the inputs are
//! rational; a binary64 mode covers black-box numeric work. The two never
//! mix silently.

pub mod analysis;
pub mod coefficient;
pub mod corpus;
pub mod forward;
pub mod jet;
pub mod numeric;
pub mod puiseux;
pub mod recovery;
pub mod selftest;
pub mod series;

pub use coefficient::{Coefficient, FieldTag};
pub use forward::{forward_map, ledger, residual_check, CompositionLedger};
pub use jet::SolutionJet;
pub use puiseux::PuiseuxSeries;
pub use recovery::{
    crosscheck_uniqueness, detect_order, recover_jet_numeric, recover_jet_symbolic,
    FunctionHandle, ProbeConfig, RecoveryReport,
};
pub use series::TaylorPoly;
