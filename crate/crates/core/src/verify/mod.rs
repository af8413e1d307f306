//! Checkers for the closed forms: determinant formulas against a modular
//! elimination oracle, Gauss-period identities, the coprimality audit, and
//! the lemma and twin-prime sweeps built on them.

pub mod audit;
pub mod det;
pub mod gauss;
pub mod lemmas;
pub mod twin;

pub use audit::{coprimality_audit, gcd_divisibility, DivisibilityCheck, FactorAudit};
pub use det::{
    circulant_det_mod, det_formula, det_formula_dh1, det_formula_dh2, exact_circulant_det,
    verify_det, verify_det_with, DetFactorization, DetReport, DetVerdict,
};
pub use gauss::{
    eta_product_exact, eta_product_expr, expected_eta_product, gauss_periods_numeric,
    CharacterSumExpr, GaussPeriods,
};
pub use lemmas::{verify_lemmas, LemmaOutcome, LemmaSuiteReport};
pub use twin::{sweep_row, twin_sweep, SweepRow};
