//! Coprimality of the closed-form determinant with `2^N - 1`.
//!
//! Any prime `r | 2^N - 1` has `R = ord_r(2)` in `{p, q, pq}` and
//! `r = kR + 1`. The audit takes `gcd(base, 2^N - 1)` for every factor base
//! of the determinant, and for each prime `r` it finds records `(r, R, k)`.
//! For twin primes every gcd must be 1, which forces
//! `gcd(S(2), 2^N - 1) = 1` and a maximal 2-adic complexity.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntcore::{gcd, multiplicative_order, pow_mod, prime_factors, PeriodParams};
use crate::sequences::{BinarySequence, SequenceClass};
use crate::verify::det::det_formula;

/// Gcds above this bound are reported without prime witnesses.
const WITNESS_FACTOR_LIMIT: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    pub r: u64,
    /// `ord_r(2)`, a divisor of `N` other than 1.
    pub order: u64,
    /// `(r - 1) / order`.
    pub k: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorGcd {
    pub base: String,
    pub exponent: u64,
    pub gcd: u64,
    pub witnesses: Vec<PrimeWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorAudit {
    pub period: u64,
    pub twin: bool,
    pub factors: Vec<FactorGcd>,
    /// `gcd(det, 2^N - 1)` from the multiplied-out determinant.
    pub overall: String,
    pub coprime: bool,
}

/// `gcd(b, 2^n - 1)` through `2^n mod b`.
fn gcd_with_mersenne(b: u64, n: u64) -> u64 {
    if b == 0 {
        return 0;
    }
    if b == 1 {
        return 1;
    }
    let t = (pow_mod(2, n, b) + b - 1) % b;
    gcd(b, t)
}

pub fn mersenne(n: u64) -> BigUint {
    (BigUint::one() << n) - 1u32
}

impl FactorAudit {
    pub fn compute(params: &PeriodParams, class: SequenceClass) -> Result<FactorAudit> {
        let n = params.n();
        let formula = det_formula(params, class)?;
        let factors: Vec<FactorGcd> = formula
            .factors
            .iter()
            .map(|f| {
                let base = f
                    .base
                    .magnitude()
                    .to_u64()
                    .expect("determinant bases fit in 64 bits");
                let g = gcd_with_mersenne(base, n);
                let witnesses = if g > 1 && g < WITNESS_FACTOR_LIMIT {
                    prime_factors(g)
                        .into_iter()
                        .map(|r| {
                            let order = multiplicative_order(2, r);
                            PrimeWitness {
                                r,
                                order,
                                k: (r - 1) / order,
                            }
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                FactorGcd {
                    base: f.base.to_string(),
                    exponent: f.exponent,
                    gcd: g,
                    witnesses,
                }
            })
            .collect();

        let det = formula.value();
        let overall = BigInt::from(mersenne(n)).gcd(&det);
        let per_factor: BigUint = factors
            .iter()
            .map(|f| BigUint::from(f.gcd).pow(f.exponent as u32))
            .product();
        debug_assert!((per_factor % overall.magnitude()) == BigUint::ZERO);
        Ok(FactorAudit {
            period: n,
            twin: params.is_twin(),
            coprime: overall.is_one() && factors.iter().all(|f| f.gcd == 1),
            overall: overall.to_string(),
            factors,
        })
    }

    /// Fails when a twin pair's determinant shares a factor with `2^N - 1`.
    pub fn ensure(&self, class: SequenceClass) -> Result<()> {
        if self.twin && !self.coprime {
            let theorem = if class == SequenceClass::Dh2 { 4 } else { 2 };
            return Err(Error::TheoremViolation {
                theorem,
                detail: format!(
                    "gcd(det, 2^{} - 1) = {} for a twin pair",
                    self.period, self.overall
                ),
            });
        }
        Ok(())
    }
}

/// Audit plus the twin-prime check; informational for non-twin pairs.
pub fn coprimality_audit(params: &PeriodParams, class: SequenceClass) -> Result<FactorAudit> {
    let audit = FactorAudit::compute(params, class)?;
    audit.ensure(class)?;
    Ok(audit)
}

/// `gcd(S(2), 2^N - 1)` divides `gcd(det, 2^N - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityCheck {
    pub gcd_s2: String,
    pub gcd_det: String,
    pub divides: bool,
}

pub fn gcd_divisibility(params: &PeriodParams, seq: &BinarySequence) -> Result<DivisibilityCheck> {
    let modulus = mersenne(params.n());
    let s2 = seq.s_eval_two();
    let gcd_s2 = if s2 == BigUint::ZERO {
        modulus.clone()
    } else {
        s2.gcd(&modulus)
    };
    let det = det_formula(params, seq.class())?.value();
    let gcd_det = modulus.gcd(det.magnitude());
    Ok(DivisibilityCheck {
        divides: (&gcd_det % &gcd_s2) == BigUint::ZERO,
        gcd_s2: gcd_s2.to_string(),
        gcd_det: gcd_det.to_string(),
    })
}
