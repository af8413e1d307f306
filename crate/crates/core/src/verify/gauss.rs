//! Gauss periods of order 2 over `Z_q` and `Z_N`, numerically and as exact
//! character-sum reductions.

use num_complex::Complex64;
use serde::Serialize;

use crate::cyclotomy::{
    quadratic_class_members, quadratic_classes, ModulusTag, Partition, ResidueClass,
};
use crate::error::{Error, Result};
use crate::par::Execution;

fn character_sum(set: &[u64], modulus: u64) -> Complex64 {
    set.iter()
        .map(|&x| {
            let angle = std::f64::consts::TAU * (x % modulus) as f64 / modulus as f64;
            Complex64::from_polar(1.0, angle)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub identity: &'static str,
    pub value: f64,
}

/// Numeric Gauss periods and their residuals against the character-sum
/// identities (`η0 + η1 = 1` over `Z_N`, `-1` over `Z_q`, and the `P`/`Q`
/// sums equal to `-1`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussPeriods {
    pub tag: ModulusTag,
    pub modulus: u64,
    pub eta0: (f64, f64),
    pub eta1: (f64, f64),
    pub residuals: Vec<Residual>,
}

impl GaussPeriods {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.value).fold(0.0, f64::max)
    }

    pub fn eta_product(&self) -> Complex64 {
        Complex64::new(self.eta0.0, self.eta0.1) * Complex64::new(self.eta1.0, self.eta1.1)
    }
}

pub fn gauss_periods_numeric(tag: ModulusTag, part: &Partition) -> GaussPeriods {
    let one = Complex64::new(1.0, 0.0);
    match tag {
        ModulusTag::N => {
            let n = part.n();
            let eta0 = character_sum(part.d0(), n);
            let eta1 = character_sum(part.d1(), n);
            let sum_p = character_sum(part.pset(), n);
            let sum_q = character_sum(part.qset(), n);
            GaussPeriods {
                tag,
                modulus: n,
                eta0: (eta0.re, eta0.im),
                eta1: (eta1.re, eta1.im),
                residuals: vec![
                    Residual {
                        identity: "eta0 + eta1 = 1",
                        value: (eta0 + eta1 - one).norm(),
                    },
                    Residual {
                        identity: "sum over P = -1",
                        value: (sum_p + one).norm(),
                    },
                    Residual {
                        identity: "sum over Q = -1",
                        value: (sum_q + one).norm(),
                    },
                ],
            }
        }
        ModulusTag::Q => {
            let q = part.params().q();
            let eta0 = character_sum(&quadratic_class_members(q, 0), q);
            let eta1 = character_sum(&quadratic_class_members(q, 1), q);
            GaussPeriods {
                tag,
                modulus: q,
                eta0: (eta0.re, eta0.im),
                eta1: (eta1.re, eta1.im),
                residuals: vec![Residual {
                    identity: "eta0 + eta1 = -1",
                    value: (eta0 + eta1 + one).norm(),
                }],
            }
        }
    }
}

/// `sum_t c_t χ(t)` with `c_t` constant on each class. Over `Z_q` the classes
/// are `R = {0}`, `D0` = residues, `D1` = non-residues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSumExpr {
    pub tag: ModulusTag,
    pub coefficients: Vec<(ResidueClass, i64)>,
}

impl CharacterSumExpr {
    pub fn coefficient(&self, class: ResidueClass) -> Option<i64> {
        self.coefficients
            .iter()
            .find(|(c, _)| *c == class)
            .map(|&(_, v)| v)
    }

    /// Collapses to an integer with `χ(R) = 1`, `sum_P = sum_Q = -1` and
    /// `η0 + η1 = 1` (over `Z_N`) or `-1` (over `Z_q`). Needs equal `D0`
    /// and `D1` coefficients.
    pub fn reduce(&self) -> Result<i64> {
        let c0 = self.coefficient(ResidueClass::D0).unwrap_or(0);
        let c1 = self.coefficient(ResidueClass::D1).unwrap_or(0);
        if c0 != c1 {
            return Err(Error::NotReducible(format!(
                "D0 coefficient {c0} differs from D1 coefficient {c1}"
            )));
        }
        let units = match self.tag {
            ModulusTag::N => c0,
            ModulusTag::Q => -c0,
        };
        let r = self.coefficient(ResidueClass::R).unwrap_or(0);
        let p = self.coefficient(ResidueClass::P).unwrap_or(0);
        let q = self.coefficient(ResidueClass::Q).unwrap_or(0);
        Ok(r - p - q + units)
    }
}

fn collect_class_constant(
    tag: ModulusTag,
    coeffs: &[u64],
    class_of: impl Fn(usize) -> ResidueClass,
    order: &[ResidueClass],
) -> Result<CharacterSumExpr> {
    let mut seen: Vec<(ResidueClass, i64)> = Vec::new();
    for (t, &c) in coeffs.iter().enumerate() {
        let class = class_of(t);
        match seen.iter().find(|(k, _)| *k == class) {
            Some(&(_, v)) if v != c as i64 => {
                return Err(Error::NotReducible(format!(
                    "coefficient of χ({t}) is {c}, other members of {class} have {v}"
                )))
            }
            Some(_) => {}
            None => seen.push((class, c as i64)),
        }
    }
    let coefficients = order
        .iter()
        .map(|k| (*k, seen.iter().find(|(c, _)| c == k).map_or(0, |&(_, v)| v)))
        .collect();
    Ok(CharacterSumExpr { tag, coefficients })
}

/// `η0 η1 = sum_t c_t χ(t)` where `c_t = #{(x, y) in D0 x D1 : x + y = t}`.
pub fn eta_product_expr(
    tag: ModulusTag,
    part: &Partition,
    exec: Execution,
) -> Result<CharacterSumExpr> {
    match tag {
        ModulusTag::Q => {
            let q = part.params().q();
            let classes = quadratic_classes(q);
            let residues = quadratic_class_members(q, 0);
            let coeffs = exec.map_range(0..q as usize, |t| {
                residues
                    .iter()
                    .filter(|&&x| classes[((t as u64 + q - x) % q) as usize] == Some(1))
                    .count() as u64
            });
            let class_of = |t: usize| match classes[t] {
                None => ResidueClass::R,
                Some(0) => ResidueClass::D0,
                Some(_) => ResidueClass::D1,
            };
            collect_class_constant(
                tag,
                &coeffs,
                class_of,
                &[ResidueClass::R, ResidueClass::D0, ResidueClass::D1],
            )
        }
        ModulusTag::N => {
            let n = part.n();
            let d0 = part.d0();
            let coeffs = exec.map_range(0..n as usize, |t| {
                d0.iter()
                    .filter(|&&x| part.classify((t as u64 + n - x) % n) == ResidueClass::D1)
                    .count() as u64
            });
            collect_class_constant(
                tag,
                &coeffs,
                |t| part.classify(t as u64),
                &[
                    ResidueClass::R,
                    ResidueClass::P,
                    ResidueClass::Q,
                    ResidueClass::D0,
                    ResidueClass::D1,
                ],
            )
        }
    }
}

/// Exact `η0 η1` as an integer.
pub fn eta_product_exact(tag: ModulusTag, part: &Partition) -> Result<i64> {
    eta_product_expr(tag, part, Execution::default())?.reduce()
}

/// `-(q-1)/4` for `q = 1 (mod 4)`, `(q+1)/4` for `q = 3 (mod 4)`.
pub fn expected_eta_product(q: u64) -> i64 {
    let q = q as i64;
    if q % 4 == 1 {
        -(q - 1) / 4
    } else {
        (q + 1) / 4
    }
}
