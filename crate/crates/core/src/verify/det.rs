//! Closed-form circulant determinants and the modular elimination oracle.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclotomy::Partition;
use crate::error::{Error, Result};
use crate::ntcore::{inv_mod, pow_mod, trial_primes, Montgomery, PeriodParams, PrimeSampler};
use crate::par::Execution;
use crate::sequences::{BinarySequence, SequenceClass};
use crate::verify::audit::FactorAudit;

/// Exact reconstruction is attempted only up to this period.
pub const EXACT_DET_MAX_PERIOD: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetFactor {
    pub base: BigInt,
    pub exponent: u64,
}

/// `det(A)` kept as an unmultiplied product of `base^exponent` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetFactorization {
    pub factors: Vec<DetFactor>,
}

impl DetFactorization {
    fn from_pairs(pairs: &[(i128, u64)]) -> Self {
        DetFactorization {
            factors: pairs
                .iter()
                .map(|&(b, e)| DetFactor {
                    base: BigInt::from(b),
                    exponent: e,
                })
                .collect(),
        }
    }

    pub fn value(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, f| acc * f.base.pow(f.exponent as u32))
    }

    pub fn residue(&self, r: u64) -> u64 {
        self.factors.iter().fold(1u64 % r, |acc, f| {
            let b = (&f.base % BigInt::from(r) + BigInt::from(r)) % BigInt::from(r);
            let b = b.to_u64().unwrap();
            crate::ntcore::mul_mod(acc, pow_mod(b, f.exponent, r), r)
        })
    }

    pub fn render(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("{}^{}", f.base, f.exponent))
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

/// Determinant of the circulant of the first class (support `D1 ∪ P`).
pub fn det_formula_dh1(params: &PeriodParams) -> DetFactorization {
    let (p, q) = (params.p() as i128, params.q() as i128);
    let e = params.e();
    let half = (params.q() - 1) / 2;
    let pairs = if params.q_mod4() == 1 {
        [
            (p + 1, 1),
            ((q - 1) / 2, params.p()),
            ((p - 1) * (p - 1) * (q - 1) / 4 - p, half),
            ((q - 1) / 4, e),
        ]
    } else {
        [
            (p + 1, 1),
            ((q - 1) / 2, params.p()),
            ((p - 1) * (p - 1) * (q + 1) / 4 + p, half),
            ((q + 1) / 4, e),
        ]
    };
    DetFactorization::from_pairs(&pairs)
}

/// Determinant of the circulant of the second class (support `D1 ∪ Q`).
pub fn det_formula_dh2(params: &PeriodParams) -> DetFactorization {
    let (p, q) = (params.p() as i128, params.q() as i128);
    let last = params.p() * (params.q() - 1) / 2;
    let tail = if params.q_mod4() == 1 {
        (q - 1) / 4
    } else {
        (q + 1) / 4
    };
    DetFactorization::from_pairs(&[(p - 1, params.q()), ((q + 1) / 2, params.p()), (tail, last)])
}

pub fn det_formula(params: &PeriodParams, class: SequenceClass) -> Result<DetFactorization> {
    match class {
        SequenceClass::Dh1 => Ok(det_formula_dh1(params)),
        SequenceClass::Dh2 => Ok(det_formula_dh2(params)),
        SequenceClass::External => Err(Error::InvalidInput(
            "no closed form for external sequences".into(),
        )),
    }
}

/// Identifier of the determinant closed form for a class (1 or 3).
pub fn det_theorem(class: SequenceClass) -> u8 {
    if class == SequenceClass::Dh2 {
        3
    } else {
        1
    }
}

/// `det(A) mod r` for the circulant `a_ij = s_((i - j) mod N)`, by Gaussian
/// elimination over `GF(r)`. `r` must be prime.
pub fn circulant_det_mod(seq: &BinarySequence, r: u64) -> u64 {
    assert!(r >= 2, "modulus must be prime");
    if r == 2 {
        return circulant_det_gf2(seq.bits());
    }
    let n = seq.period();
    let mg = Montgomery::new(r);
    let one = mg.to_mont(1);
    let bits = seq.bits();
    let mut a: Vec<u64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if bits[(i + n - j) % n] == 1 {
                one
            } else {
                0
            }
        })
        .collect();

    let mut det = one;
    let mut negate = false;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&row| a[row * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for k in col..n {
                a.swap(piv * n + k, col * n + k);
            }
            negate = !negate;
        }
        let pivot = a[col * n + col];
        det = mg.mul(det, pivot);
        let inv = mg.inv(pivot);
        let (head, tail) = a.split_at_mut((col + 1) * n);
        let pivot_row = &head[col * n..];
        for row in tail.chunks_exact_mut(n) {
            let lead = row[col];
            if lead == 0 {
                continue;
            }
            let factor = mg.mul(lead, inv);
            for k in col..n {
                row[k] = mg.sub(row[k], mg.mul(factor, pivot_row[k]));
            }
        }
    }
    let det = mg.from_mont(det);
    if negate && det != 0 {
        r - det
    } else {
        det
    }
}

fn circulant_det_gf2(bits: &[u8]) -> u64 {
    let n = bits.len();
    let mut rows: Vec<Vec<u8>> = (0..n)
        .map(|i| (0..n).map(|j| bits[(i + n - j) % n]).collect())
        .collect();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| rows[r][col] == 1) else {
            return 0;
        };
        rows.swap(col, piv);
        let pivot = rows[col].clone();
        for row in rows.iter_mut().skip(col + 1) {
            if row[col] == 1 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
    }
    1
}

/// Hadamard bound on `|det A|` squared: every row has the sequence weight
/// `w` ones, so `det^2 <= w^N`.
pub fn hadamard_bound_squared(seq: &BinarySequence) -> BigUint {
    BigUint::from(seq.weight()).pow(seq.period() as u32)
}

/// Exact `det(A)` by CRT over seeded 60-bit primes, enough to exceed twice
/// the Hadamard bound. Returns the determinant and the primes used.
pub fn exact_circulant_det(seq: &BinarySequence, seed: u64) -> (BigInt, Vec<u64>) {
    let bound_sq = hadamard_bound_squared(seq);
    let mut modulus = BigUint::one();
    let mut value = BigUint::zero();
    let mut used = Vec::new();
    // need modulus > 2 * bound, i.e. modulus^2 > 4 * bound^2
    let target = bound_sq * 4u32;
    for r in PrimeSampler::new(seed ^ 0x5eed_c0de, 60) {
        if &modulus * &modulus > target {
            break;
        }
        let residue = circulant_det_mod(seq, r);
        // Garner step: value + modulus * t = residue (mod r)
        let v_mod = (&value % r).to_u64().unwrap();
        let m_mod = (&modulus % r).to_u64().unwrap();
        let diff = (residue + r - v_mod) % r;
        let t = crate::ntcore::mul_mod(diff, inv_mod(m_mod, r).unwrap(), r);
        value += &modulus * t;
        modulus *= r;
        used.push(r);
    }
    let half = &modulus >> 1;
    let det = if value > half {
        BigInt::from(value) - BigInt::from(modulus)
    } else {
        BigInt::from(value)
    };
    (det, used)
}

/// `prod_t S(xi_N^t)` in double precision.
pub fn eigenvalue_product(seq: &BinarySequence) -> Complex64 {
    let n = seq.period();
    let support = seq.support();
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, t| {
        let s: Complex64 = support
            .iter()
            .map(|&i| {
                let angle = std::f64::consts::TAU * ((t as u64 * i) % n as u64) as f64 / n as f64;
                Complex64::from_polar(1.0, angle)
            })
            .sum();
        acc * s
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeCheck {
    pub r: u64,
    pub formula_mod: u64,
    pub oracle_mod: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactCheck {
    /// Oracle determinant (decimal).
    pub det: String,
    /// Closed-form value (decimal).
    pub formula: String,
    pub ok: bool,
    /// Oracle equals the negated closed form.
    pub sign_flip: bool,
    /// Relative error of `prod S(xi^t)` against the exact determinant.
    pub eigen_relative_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DetVerdict {
    Agree,
    AgreeUpToSign,
    Mismatch,
}

/// Output of [`verify_det`].
#[derive(Clone, Debug, Serialize)]
pub struct DetReport {
    pub theorem: u8,
    pub p: u64,
    pub q: u64,
    pub class: SequenceClass,
    pub factorization: String,
    pub primes: Vec<PrimeCheck>,
    pub exact: Option<ExactCheck>,
    pub verdict: DetVerdict,
    pub audit: FactorAudit,
}

impl DetReport {
    pub fn passed(&self) -> bool {
        self.verdict != DetVerdict::Mismatch
    }

    pub fn ensure(&self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let bad: Vec<String> = self
            .primes
            .iter()
            .filter(|c| !c.ok)
            .map(|c| {
                format!(
                    "r={} formula={} oracle={}",
                    c.r, c.formula_mod, c.oracle_mod
                )
            })
            .collect();
        Err(Error::TheoremViolation {
            theorem: self.theorem,
            detail: format!(
                "determinant mismatch at (p, q) = ({}, {}): {}",
                self.p,
                self.q,
                bad.join(", ")
            ),
        })
    }
}

/// Compares the closed form against the elimination oracle at `primes`
/// seeded 60-bit primes, plus an exact CRT reconstruction for
/// `N <= 40`.
pub fn verify_det(
    params: &PeriodParams,
    class: SequenceClass,
    primes: usize,
    seed: u64,
) -> Result<DetReport> {
    verify_det_with(params, class, primes, seed, Execution::default())
}

pub fn verify_det_with(
    params: &PeriodParams,
    class: SequenceClass,
    primes: usize,
    seed: u64,
    exec: Execution,
) -> Result<DetReport> {
    if primes == 0 {
        return Err(Error::InvalidInput(
            "at least one trial prime is required".into(),
        ));
    }
    let part = Partition::build(params)?;
    let seq = BinarySequence::generate(&part, class)?;
    let formula = det_formula(params, class)?;

    let rs = trial_primes(primes, seed);
    let checks = exec.map(&rs, |&r| {
        let formula_mod = formula.residue(r);
        let oracle_mod = circulant_det_mod(&seq, r);
        PrimeCheck {
            r,
            formula_mod,
            oracle_mod,
            ok: formula_mod == oracle_mod,
        }
    });
    let negated_everywhere = checks
        .iter()
        .all(|c| (c.r - c.formula_mod) % c.r == c.oracle_mod);

    let exact = (seq.period() <= EXACT_DET_MAX_PERIOD).then(|| {
        let (det, _) = exact_circulant_det(&seq, seed);
        let value = formula.value();
        let eigen = eigenvalue_product(&seq);
        let scale = det.abs().to_f64().unwrap().max(1.0);
        let det_f = det.to_f64().unwrap();
        ExactCheck {
            det: det.to_string(),
            formula: value.to_string(),
            ok: det == value,
            sign_flip: det == -&value && !value.is_zero(),
            eigen_relative_error: ((eigen.re - det_f).abs() + eigen.im.abs()) / scale,
        }
    });

    let all_ok = checks.iter().all(|c| c.ok) && exact.as_ref().is_none_or(|e| e.ok);
    let flipped = negated_everywhere && exact.as_ref().is_none_or(|e| e.sign_flip);
    let verdict = if all_ok {
        DetVerdict::Agree
    } else if flipped {
        DetVerdict::AgreeUpToSign
    } else {
        DetVerdict::Mismatch
    };

    Ok(DetReport {
        theorem: det_theorem(class),
        p: params.p(),
        q: params.q(),
        class,
        factorization: formula.render(),
        primes: checks,
        exact,
        verdict,
        audit: FactorAudit::compute(params, class)?,
    })
}
