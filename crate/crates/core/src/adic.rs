//! 2-adic complexity, the rational approximation algorithm (FCSR
//! synthesis) and FCSR expansion.
//!
//! A period-`N` sequence with `S(2) = sum s_i 2^i` is the 2-adic number
//! `S(2) / (1 - 2^N) = -m/n`, where `m/n` is `S(2)/(2^N - 1)` in lowest
//! terms. Its 2-adic complexity is `floor(log2 n)`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sequences::BinarySequence;

fn decimal<S: Serializer, T: ToString>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Exact 2-adic complexity data of one period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub period: usize,
    #[serde(serialize_with = "decimal")]
    pub s2: BigUint,
    /// `2^N - 1`.
    #[serde(serialize_with = "decimal")]
    pub modulus: BigUint,
    /// `gcd(S(2), 2^N - 1)`, with `gcd(0, M) = M`.
    #[serde(serialize_with = "decimal")]
    pub gcd: BigUint,
    #[serde(serialize_with = "decimal")]
    pub m: BigUint,
    #[serde(serialize_with = "decimal")]
    pub n: BigUint,
    pub phi2: u64,
}

impl ComplexityReport {
    pub fn from_s2(s2: BigUint, period: usize) -> ComplexityReport {
        let modulus = (BigUint::one() << period) - 1u32;
        let gcd = if s2.is_zero() {
            modulus.clone()
        } else {
            s2.gcd(&modulus)
        };
        let m = &s2 / &gcd;
        let n = &modulus / &gcd;
        // floor(log2 n) for n >= 1
        let phi2 = n.bits() - 1;
        ComplexityReport {
            period,
            s2,
            modulus,
            gcd,
            m,
            n,
            phi2,
        }
    }

    /// `phi2 = N - 1`, the largest value a period-`N` sequence can have.
    pub fn is_maximal(&self) -> bool {
        self.phi2 + 1 == self.period as u64
    }

    /// Resistance to rational approximation: `phi2 >= N/2`.
    pub fn resists_raa(&self) -> bool {
        2 * self.phi2 >= self.period as u64
    }
}

pub fn two_adic_complexity(seq: &BinarySequence) -> ComplexityReport {
    ComplexityReport::from_s2(seq.s_eval_two(), seq.period())
}

/// Reduced rational `num/den` with odd positive denominator, i.e. an
/// element of the 2-adic integers representable by an FCSR.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    num: BigInt,
    den: BigInt,
}

impl DyadicRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<DyadicRational> {
        let (num, den) = (num.into(), den.into());
        if den.is_even() {
            return Err(Error::InvalidInput(format!("denominator {den} is not odd")));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(mut num: BigInt, mut den: BigInt) -> DyadicRational {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_zero() && !g.is_one() {
            num /= &g;
            den /= &g;
        }
        DyadicRational { num, den }
    }

    pub fn zero() -> DyadicRational {
        DyadicRational {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// `floor(log2 max(|num|, den))`, the size of the FCSR.
    pub fn complexity(&self) -> u64 {
        let size = self.num.magnitude().max(self.den.magnitude());
        size.bits().saturating_sub(1)
    }
}

impl std::fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// First `count` coefficients of the 2-adic expansion of `r`, by FCSR-style
/// long division: `b = a mod 2`, `a <- (a - b*den) / 2`.
pub fn fcsr_expand(r: &DyadicRational, count: usize) -> Vec<u8> {
    let mut a = r.num.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let bit = a.is_odd();
        if bit {
            a -= &r.den;
        }
        a >>= 1;
        out.push(u8::from(bit));
    }
    out
}

fn phi(x: &BigInt, y: &BigInt) -> BigUint {
    x.magnitude().max(y.magnitude()).clone()
}

/// Odd `d` minimizing `max(|x + d u|, |y + d v|)`.
///
/// The objective is convex and piecewise linear in `d`, so the optimum over
/// odd integers sits next to one of its breakpoints.
fn best_odd_multiplier(x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) -> BigInt {
    let mut anchors: Vec<BigInt> = Vec::with_capacity(4);
    let mut push_ratio = |num: BigInt, den: BigInt| {
        if !den.is_zero() {
            anchors.push(num.div_floor(&den));
        }
    };
    push_ratio(-x, u.clone());
    push_ratio(-y, v.clone());
    push_ratio(y - x, u - v);
    push_ratio(-(x + y), u + v);

    let mut best: Option<(BigUint, BigInt)> = None;
    let mut consider = |d: BigInt| {
        let cost = phi(&(x + &d * u), &(y + &d * v));
        let better = match &best {
            None => true,
            Some((c, bd)) => match cost.cmp(c) {
                Ordering::Less => true,
                Ordering::Equal => {
                    d.magnitude() < bd.magnitude() || (d.magnitude() == bd.magnitude() && d > *bd)
                }
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((cost, d));
        }
    };
    consider(BigInt::one());
    consider(-BigInt::one());
    for a in anchors {
        for off in -1i32..=2 {
            let d = &a + off;
            if d.is_odd() {
                consider(d);
            }
        }
    }
    best.unwrap().1
}

/// Klapper-Goresky rational approximation: the smallest FCSR (`num/den`,
/// `den` odd) whose output agrees with `bits`.
///
/// Two lattice vectors are carried bit by bit: `(h, l)` with
/// `alpha*l = h (mod 2^i)`, and `(f, g)` satisfying the same congruence but
/// off by exactly `2^i` at the next bit. When `(h, l)` fails on a new bit,
/// an odd combination of the two restores it while keeping
/// `max(|num|, |den|)` small. Given at least `2*log2(max(|f|, g)) + 2`
/// bits of a rational `f/g`, the result is `f/g`.
pub fn raa_synthesize(bits: &[u8]) -> DyadicRational {
    let Some(first) = bits.iter().position(|&b| b == 1) else {
        return DyadicRational::zero();
    };
    let mut alpha = BigInt::one() << first;
    let (mut f, mut g) = (BigInt::zero(), BigInt::from(2));
    let (mut h, mut l) = (alpha.clone(), BigInt::one());

    for (i, &bit) in bits.iter().enumerate().skip(first + 1) {
        if bit == 1 {
            alpha.set_bit(i as u64, true);
        }
        // alpha*l - h is divisible by 2^i; test bit i only.
        let residual = &alpha * &l - &h;
        let agrees = !residual.bit(i as u64);
        if agrees {
            f <<= 1;
            g <<= 1;
        } else if phi(&h, &l) < phi(&f, &g) {
            let d = best_odd_multiplier(&f, &g, &h, &l);
            let nh = &f + &d * &h;
            let nl = &g + &d * &l;
            f = h << 1;
            g = l << 1;
            h = nh;
            l = nl;
        } else {
            let d = best_odd_multiplier(&h, &l, &f, &g);
            h += &d * &f;
            l += &d * &g;
            f <<= 1;
            g <<= 1;
        }
    }
    debug_assert!(l.is_odd());
    DyadicRational::reduced(h, l)
}

/// The rational a period-`N` sequence represents: `-S(2)/(2^N - 1)`.
pub fn periodic_rational(report: &ComplexityReport) -> DyadicRational {
    DyadicRational::reduced(
        BigInt::from_biguint(Sign::Minus, report.s2.clone()),
        BigInt::from(report.modulus.clone()),
    )
}
