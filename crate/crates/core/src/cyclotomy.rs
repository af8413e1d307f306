//! Order-2 generalized cyclotomic partition of `Z_N` and cyclotomic numbers.
//!
//! `D0 = { g^(2t) x^i : 0 <= t < e/2, i in {0, 1} }`, `D1 = g D0`,
//! `P = {p, 2p, .., (q-1)p}`, `Q = {q, 2q, .., (p-1)q}` and `R = {0}`.
//! Every counting function here has a brute-force form and a closed form;
//! the two are compared by the lemma sweeps in [`crate::verify`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntcore::{legendre, pow_mod, PeriodParams};

/// Cap on `N` for materialized partitions (membership table of `N` bytes).
pub const MAX_PARTITION_PERIOD: u64 = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ResidueClass {
    D0,
    D1,
    P,
    Q,
    R,
}

impl ResidueClass {
    /// Cyclotomic index for the unit classes.
    pub fn unit_index(self) -> Option<usize> {
        match self {
            ResidueClass::D0 => Some(0),
            ResidueClass::D1 => Some(1),
            _ => None,
        }
    }

    pub fn unit(i: usize) -> ResidueClass {
        if i.is_multiple_of(2) {
            ResidueClass::D0
        } else {
            ResidueClass::D1
        }
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which ring a table or Gauss period lives over: `Z_q` or `Z_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModulusTag {
    Q,
    N,
}

/// The five-way split of `Z_N`. Class lists are sorted; `labels[i]` is the
/// class of residue `i`.
#[derive(Clone, Debug)]
pub struct Partition {
    params: PeriodParams,
    d0: Vec<u64>,
    d1: Vec<u64>,
    pset: Vec<u64>,
    qset: Vec<u64>,
    labels: Vec<ResidueClass>,
}

impl Partition {
    pub fn build(params: &PeriodParams) -> Result<Partition> {
        let (p, q, n, g, x) = (params.p(), params.q(), params.n(), params.g(), params.x());
        if n > MAX_PARTITION_PERIOD {
            return Err(Error::PeriodTooLarge { p, q });
        }
        let mut labels = vec![ResidueClass::R; n as usize];
        let mut assigned = vec![false; n as usize];
        assigned[0] = true;

        let g2 = pow_mod(g, 2, n);
        let mut d0 = Vec::with_capacity(params.e() as usize);
        let mut power = 1u64;
        for _ in 0..params.e() / 2 {
            for v in [power, power * x % n] {
                if assigned[v as usize] {
                    return Err(Error::PartitionCollision { value: v, g, x });
                }
                assigned[v as usize] = true;
                labels[v as usize] = ResidueClass::D0;
                d0.push(v);
            }
            power = power * g2 % n;
        }
        let mut d1 = Vec::with_capacity(d0.len());
        for &v in &d0 {
            let w = v * g % n;
            if assigned[w as usize] {
                return Err(Error::PartitionCollision { value: w, g, x });
            }
            assigned[w as usize] = true;
            labels[w as usize] = ResidueClass::D1;
            d1.push(w);
        }
        let pset: Vec<u64> = (1..q).map(|k| k * p).collect();
        let qset: Vec<u64> = (1..p).map(|k| k * q).collect();
        for &v in &pset {
            labels[v as usize] = ResidueClass::P;
        }
        for &v in &qset {
            labels[v as usize] = ResidueClass::Q;
        }
        d0.sort_unstable();
        d1.sort_unstable();
        Ok(Partition {
            params: *params,
            d0,
            d1,
            pset,
            qset,
            labels,
        })
    }

    pub fn params(&self) -> &PeriodParams {
        &self.params
    }

    pub fn n(&self) -> u64 {
        self.params.n()
    }

    pub fn d0(&self) -> &[u64] {
        &self.d0
    }

    pub fn d1(&self) -> &[u64] {
        &self.d1
    }

    /// `D0` for `i = 0`, `D1` for `i = 1`.
    pub fn unit_class(&self, i: usize) -> &[u64] {
        if i.is_multiple_of(2) {
            &self.d0
        } else {
            &self.d1
        }
    }

    pub fn pset(&self) -> &[u64] {
        &self.pset
    }

    pub fn qset(&self) -> &[u64] {
        &self.qset
    }

    pub fn members(&self, class: ResidueClass) -> &[u64] {
        const ZERO: &[u64] = &[0];
        match class {
            ResidueClass::D0 => &self.d0,
            ResidueClass::D1 => &self.d1,
            ResidueClass::P => &self.pset,
            ResidueClass::Q => &self.qset,
            ResidueClass::R => ZERO,
        }
    }

    #[inline]
    pub fn classify(&self, i: u64) -> ResidueClass {
        self.labels[(i % self.n()) as usize]
    }

    pub fn labels(&self) -> &[ResidueClass] {
        &self.labels
    }

    /// Class of `-1 = N - 1`, checked against the expected one: `D0` when
    /// `q = 1 (mod 4)`, `D1` when `q = 3 (mod 4)`.
    pub fn minus_one_class(&self) -> Result<ResidueClass> {
        let found = self.classify(self.n() - 1);
        let expected = if self.params.q_mod4() == 1 {
            ResidueClass::D0
        } else {
            ResidueClass::D1
        };
        if found != expected {
            return Err(Error::LemmaViolation {
                lemma: 2,
                detail: format!(
                    "-1 lies in {found}, expected {expected} for q = {}",
                    self.params.q()
                ),
            });
        }
        Ok(found)
    }

    pub fn export(&self) -> PartitionExport {
        PartitionExport {
            p: self.params.p(),
            q: self.params.q(),
            g: self.params.g(),
            x: self.params.x(),
            classes: ClassLists {
                d0: self.d0.clone(),
                d1: self.d1.clone(),
                p: self.pset.clone(),
                q: self.qset.clone(),
            },
        }
    }
}

/// Same as [`Partition::build`].
pub fn build_partition(params: &PeriodParams) -> Result<Partition> {
    Partition::build(params)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionExport {
    pub p: u64,
    pub q: u64,
    pub g: u64,
    pub x: u64,
    pub classes: ClassLists,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassLists {
    #[serde(rename = "D0")]
    pub d0: Vec<u64>,
    #[serde(rename = "D1")]
    pub d1: Vec<u64>,
    #[serde(rename = "P")]
    pub p: Vec<u64>,
    #[serde(rename = "Q")]
    pub q: Vec<u64>,
}

// ---------------------------------------------------------------------------
// Multiplicative action of a residue on the classes.

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
}

/// Outcome of [`coset_action_check`] for one multiplier `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetReport {
    pub a: u64,
    pub class: ResidueClass,
    pub clauses: Vec<Clause>,
    /// For `a` in `P` (resp. `Q`): whether `a * D_i` hits every element of
    /// `P` exactly `(p-1)/2` times (resp. `Q`, `(q-1)/2` times). This
    /// uniform-cover reading holds on `Q` but fails on `P`, where `a * D_i`
    /// covers half of `P`, each element `p - 1` times. It is recorded, not
    /// counted in [`CosetReport::passed`].
    pub uniform_half_cover: Option<bool>,
}

impl CosetReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.holds)
    }
}

fn scaled(set: &[u64], a: u64, n: u64) -> Vec<u64> {
    set.iter()
        .map(|&b| (a as u128 * b as u128 % n as u128) as u64)
        .collect()
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

fn multiplicities(values: &[u64], n: u64) -> Vec<u32> {
    let mut counts = vec![0u32; n as usize];
    for &v in values {
        counts[v as usize] += 1;
    }
    counts
}

/// Checks how multiplication by `a` moves each class.
///
/// * `a` in `D_i`: `a D_j = D_(i+j)`, `aP = P`, `aQ = Q` as sets.
/// * `a` in `P`: `aP = P`, `aQ = {0}`, and for each `i` the multiset
///   `a D_i` has `(q-1)/2` distinct values in `P`, each hit `p-1` times,
///   with `a D_0` and `a D_1` complementary in `P` (so `a Z_N^*` covers `P`
///   exactly `p - 1` times). Symmetric for `a` in `Q`.
/// * `a = 0`: no clause applies.
pub fn coset_action_check(part: &Partition, a: u64) -> CosetReport {
    let n = part.n();
    let a = a % n;
    let class = part.classify(a);
    let mut clauses = Vec::new();
    let mut push = |name: String, holds: bool| clauses.push(Clause { name, holds });
    let mut uniform_half_cover = None;

    match class {
        ResidueClass::D0 | ResidueClass::D1 => {
            let i = class.unit_index().unwrap();
            for j in 0..2 {
                let image = sorted(scaled(part.unit_class(j), a, n));
                let target = part.unit_class(i + j);
                push(format!("a*D{j} = D{}", (i + j) % 2), image == target);
            }
            push(
                "a*P = P".into(),
                sorted(scaled(part.pset(), a, n)) == part.pset(),
            );
            push(
                "a*Q = Q".into(),
                sorted(scaled(part.qset(), a, n)) == part.qset(),
            );
        }
        ResidueClass::P | ResidueClass::Q => {
            let (own, other, own_name, other_name, hits) = if class == ResidueClass::P {
                (part.pset(), part.qset(), "P", "Q", part.params().p() - 1)
            } else {
                (part.qset(), part.pset(), "Q", "P", part.params().q() - 1)
            };
            let mut union_counts = vec![0u32; n as usize];
            let mut literal = true;
            for i in 0..2 {
                let image = scaled(part.unit_class(i), a, n);
                let counts = multiplicities(&image, n);
                let inside = image.iter().all(|v| own.binary_search(v).is_ok());
                let full = own.iter().all(|&v| counts[v as usize] as u64 * 2 == hits);
                if class == ResidueClass::P {
                    // a*u depends on u mod q only, and D_i is one quadratic class mod q
                    let support: Vec<u64> = own
                        .iter()
                        .copied()
                        .filter(|&v| counts[v as usize] > 0)
                        .collect();
                    let half = support.len() == own.len() / 2
                        && support.iter().all(|&v| counts[v as usize] as u64 == hits);
                    push(
                        format!("a*D{i} covers half of {own_name}, each element {hits} times"),
                        inside && half,
                    );
                } else {
                    push(
                        format!("a*D{i} covers {own_name}, each element {} times", hits / 2),
                        inside && full,
                    );
                }
                literal &= full;
                for (u, c) in union_counts.iter_mut().zip(&counts) {
                    *u += c;
                }
            }
            push(
                format!("a*(D0 u D1) covers {own_name} exactly {hits} times"),
                own.iter().all(|&v| union_counts[v as usize] as u64 == hits),
            );
            push(
                format!("a*{own_name} = {own_name}"),
                sorted(scaled(own, a, n)) == own,
            );
            push(
                format!("a*{other_name} = R"),
                scaled(other, a, n).iter().all(|&v| v == 0),
            );
            uniform_half_cover = Some(literal);
        }
        ResidueClass::R => {}
    }

    CosetReport {
        a,
        class,
        clauses,
        uniform_half_cover,
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic numbers.

/// `counts[i][j] = |(D_i + 1) ∩ D_j|` over `Z_q` or `Z_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicTable {
    pub modulus_tag: ModulusTag,
    pub modulus: u64,
    pub counts: [[u64; 2]; 2],
}

impl CyclotomicTable {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i % 2][j % 2]
    }
}

/// Quadratic class of each residue mod `q`: `Some(0)` for residues,
/// `Some(1)` for non-residues, `None` for zero.
pub fn quadratic_classes(q: u64) -> Vec<Option<usize>> {
    let mut classes = vec![Some(1); q as usize];
    classes[0] = None;
    for y in 1..=q / 2 {
        classes[(y * y % q) as usize] = Some(0);
    }
    classes
}

/// Quadratic residues (`i = 0`) or non-residues (`i = 1`) mod `q`, sorted.
pub fn quadratic_class_members(q: u64, i: usize) -> Vec<u64> {
    quadratic_classes(q)
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == Some(i))
        .map(|(v, _)| v as u64)
        .collect()
}

pub fn cyclotomic_q_bruteforce(q: u64) -> CyclotomicTable {
    let classes = quadratic_classes(q);
    let mut counts = [[0u64; 2]; 2];
    for d in 1..q {
        let (Some(i), Some(j)) = (classes[d as usize], classes[((d + 1) % q) as usize]) else {
            continue;
        };
        counts[i][j] += 1;
    }
    CyclotomicTable {
        modulus_tag: ModulusTag::Q,
        modulus: q,
        counts,
    }
}

/// Closed form with `q = 2f + 1`.
pub fn cyclotomic_q_closed(q: u64) -> CyclotomicTable {
    let f = (q - 1) / 2;
    let counts = if f.is_multiple_of(2) {
        let h = f / 2;
        [[h - 1, h], [h, h]]
    } else {
        let lo = (f - 1) / 2;
        [[lo, lo + 1], [lo, lo]]
    };
    CyclotomicTable {
        modulus_tag: ModulusTag::Q,
        modulus: q,
        counts,
    }
}

pub fn cyclotomic_n_bruteforce(part: &Partition) -> CyclotomicTable {
    let n = part.n();
    let mut counts = [[0u64; 2]; 2];
    for (i, row) in counts.iter_mut().enumerate() {
        for &d in part.unit_class(i) {
            if let Some(j) = part.classify((d + 1) % n).unit_index() {
                row[j] += 1;
            }
        }
    }
    CyclotomicTable {
        modulus_tag: ModulusTag::N,
        modulus: n,
        counts,
    }
}

/// Closed form, branching on `q mod 4`.
pub fn cyclotomic_n_closed(params: &PeriodParams) -> CyclotomicTable {
    let (p, q) = (params.p(), params.q());
    let counts = if params.q_mod4() == 1 {
        let common = (p - 2) * (q - 1) / 4;
        [[(p - 2) * (q - 5) / 4, common], [common, common]]
    } else {
        let common = (p - 2) * (q - 3) / 4;
        [[common, (p - 2) * (q + 1) / 4], [common, common]]
    };
    CyclotomicTable {
        modulus_tag: ModulusTag::N,
        modulus: params.n(),
        counts,
    }
}

/// `|(D_i + w) ∩ D_j|` by enumeration.
pub fn shifted_intersection_count(part: &Partition, i: usize, j: usize, w: u64) -> u64 {
    let n = part.n();
    let target = ResidueClass::unit(j);
    part.unit_class(i)
        .iter()
        .filter(|&&d| part.classify((d + w) % n) == target)
        .count() as u64
}

/// Closed form for `w` in `P ∪ Q`. For `w` in `P` the sign is the
/// Legendre symbol of `w mod q` with respect to `q`.
pub fn shifted_intersection_closed(part: &Partition, i: usize, j: usize, w: u64) -> Result<u64> {
    let params = part.params();
    let (p, q) = (params.p(), params.q());
    match part.classify(w) {
        ResidueClass::P => {
            let table = cyclotomic_q_closed(q);
            let (ii, jj) = if legendre(w, q) == 1 {
                (i, j)
            } else {
                (i + 1, j + 1)
            };
            Ok((p - 1) * table.get(ii, jj))
        }
        ResidueClass::Q => Ok(if i % 2 == j % 2 {
            (q - 1) * (p - 2) / 2
        } else {
            0
        }),
        other => Err(Error::InvalidInput(format!(
            "shift {w} lies in {other}; the closed form needs a shift in P or Q"
        ))),
    }
}

/// Enumerated `|(D_i + w) ∩ D_j|`, failing with `LemmaViolation(5)` when it
/// disagrees with the closed form.
pub fn shifted_intersection(part: &Partition, i: usize, j: usize, w: u64) -> Result<u64> {
    let closed = shifted_intersection_closed(part, i, j, w)?;
    let count = shifted_intersection_count(part, i, j, w);
    if count != closed {
        return Err(Error::LemmaViolation {
            lemma: 5,
            detail: format!(
                "|(D{i}+{w}) ∩ D{j}| = {count}, closed form gives {closed} at N = {}",
                part.n()
            ),
        });
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntcore::make_params;

    fn part(p: u64, q: u64) -> Partition {
        Partition::build(&make_params(p, q, None).unwrap()).unwrap()
    }

    #[test]
    fn partition_3_5() {
        let pt = part(3, 5);
        assert_eq!(pt.d0(), &[1, 4, 11, 14]);
        assert_eq!(pt.d1(), &[2, 7, 8, 13]);
        assert_eq!(pt.pset(), &[3, 6, 9, 12]);
        assert_eq!(pt.qset(), &[5, 10]);
        assert_eq!(pt.classify(0), ResidueClass::R);
        assert_eq!(pt.classify(14), ResidueClass::D0);
        assert_eq!(pt.classify(6), ResidueClass::P);
    }

    #[test]
    fn partition_sizes() {
        let pt = part(5, 7);
        assert_eq!(
            (
                pt.d0().len(),
                pt.d1().len(),
                pt.pset().len(),
                pt.qset().len()
            ),
            (12, 12, 6, 4)
        );
    }

    #[test]
    fn minus_one_follows_q_mod_4() {
        assert_eq!(part(3, 5).minus_one_class().unwrap(), ResidueClass::D0);
        assert_eq!(part(5, 7).minus_one_class().unwrap(), ResidueClass::D1);
        assert_eq!(part(11, 13).minus_one_class().unwrap(), ResidueClass::D0);
    }

    #[test]
    fn coset_action_examples() {
        let pt = part(3, 5);
        let r = coset_action_check(&pt, 2);
        assert_eq!(r.class, ResidueClass::D1);
        assert!(r.passed(), "{r:?}");
        let r = coset_action_check(&pt, 3);
        assert_eq!(r.class, ResidueClass::P);
        assert!(r.passed(), "{r:?}");
        // 3*D0 = {3, 12, 3, 12}: half of P, each twice, so the uniform
        // (p-1)/2 = 1 reading fails.
        assert_eq!(sorted(scaled(pt.d0(), 3, 15)), vec![3, 3, 12, 12]);
        assert_eq!(r.uniform_half_cover, Some(false));
        let r = coset_action_check(&pt, 5);
        assert_eq!(r.class, ResidueClass::Q);
        assert!(r.passed(), "{r:?}");
        assert!(r.clauses.iter().any(|c| c.name == "a*P = R" && c.holds));
        assert_eq!(r.uniform_half_cover, Some(true));
        let r = coset_action_check(&pt, 0);
        assert!(r.clauses.is_empty() && r.passed());
    }

    #[test]
    fn cyclotomic_q_examples() {
        for (q, expect) in [
            (5, [[0, 1], [1, 1]]),
            (7, [[1, 2], [1, 1]]),
            (13, [[2, 3], [3, 3]]),
        ] {
            assert_eq!(cyclotomic_q_bruteforce(q).counts, expect, "q = {q}");
            assert_eq!(cyclotomic_q_closed(q).counts, expect, "q = {q}");
        }
    }

    #[test]
    fn cyclotomic_n_examples() {
        for ((p, q), expect) in [
            ((3, 5), [[0, 1], [1, 1]]),
            ((5, 7), [[3, 6], [3, 3]]),
            ((3, 7), [[1, 2], [1, 1]]),
        ] {
            let pt = part(p, q);
            assert_eq!(cyclotomic_n_bruteforce(&pt).counts, expect, "({p}, {q})");
            assert_eq!(
                cyclotomic_n_closed(pt.params()).counts,
                expect,
                "({p}, {q})"
            );
        }
    }

    #[test]
    fn shifted_intersection_examples() {
        let pt = part(3, 5);
        assert_eq!(shifted_intersection(&pt, 0, 0, 5), Ok(2));
        assert_eq!(shifted_intersection(&pt, 0, 1, 5), Ok(0));
        // w = 6: 6 mod 5 = 1 is a residue, so (p-1)(0,1)_q = 2
        assert_eq!(legendre(6, 5), 1);
        assert_eq!(shifted_intersection(&pt, 0, 1, 6), Ok(2));
        assert!(matches!(
            shifted_intersection(&pt, 0, 1, 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn export_is_sorted_json() {
        let json = serde_json::to_string(&part(3, 5).export()).unwrap();
        assert_eq!(
            json,
            r#"{"p":3,"q":5,"g":2,"x":11,"classes":{"D0":[1,4,11,14],"D1":[2,7,8,13],"P":[3,6,9,12],"Q":[5,10]}}"#
        );
    }

    #[test]
    fn unit_classes_do_not_depend_on_generator() {
        // every valid common primitive root gives the same D0/D1 split
        for (p, q) in [(3u64, 5u64), (5, 7), (3, 7), (7, 11)] {
            let base = part(p, q);
            for g in 2..p * q {
                let Ok(params) = make_params(p, q, Some(g)) else {
                    continue;
                };
                let other = Partition::build(&params).unwrap();
                assert_eq!(other.d0(), base.d0(), "({p}, {q}) g = {g}");
                assert_eq!(other.d1(), base.d1());
            }
        }
    }
}
