//! The two Ding-Helleseth sequence classes, `S(2)`, and GF(2) linear
//! complexity.
//!
//! Bits are stored index-0 first; bit `i` is the coefficient of `2^i` in
//! `S(2)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::cyclotomy::{Partition, ResidueClass};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SequenceClass {
    /// Support `D1 ∪ P`.
    #[serde(rename = "DH1")]
    Dh1,
    /// Support `D1 ∪ Q`.
    #[serde(rename = "DH2")]
    Dh2,
    #[serde(rename = "external")]
    External,
}

impl SequenceClass {
    pub fn from_number(class: u8) -> Result<SequenceClass> {
        match class {
            1 => Ok(SequenceClass::Dh1),
            2 => Ok(SequenceClass::Dh2),
            other => Err(Error::InvalidInput(format!(
                "sequence class must be 1 or 2, got {other}"
            ))),
        }
    }

    pub fn number(self) -> Option<u8> {
        match self {
            SequenceClass::Dh1 => Some(1),
            SequenceClass::Dh2 => Some(2),
            SequenceClass::External => None,
        }
    }
}

impl fmt::Display for SequenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceClass::Dh1 => "DH1",
            SequenceClass::Dh2 => "DH2",
            SequenceClass::External => "external",
        })
    }
}

/// One period of a binary sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinarySequence {
    bits: Vec<u8>,
    class: SequenceClass,
}

impl BinarySequence {
    /// An external period; every entry must be 0 or 1 and the period
    /// non-empty.
    pub fn new(bits: Vec<u8>) -> Result<BinarySequence> {
        if bits.is_empty() {
            return Err(Error::InvalidInput("empty sequence".into()));
        }
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidInput(format!(
                "bit {pos} is {}, not 0/1",
                bits[pos]
            )));
        }
        Ok(BinarySequence {
            bits,
            class: SequenceClass::External,
        })
    }

    pub fn from_support(period: usize, support: &[u64], class: SequenceClass) -> BinarySequence {
        let mut bits = vec![0u8; period];
        for &i in support {
            bits[i as usize % period] = 1;
        }
        BinarySequence { bits, class }
    }

    pub fn zeros(period: usize) -> BinarySequence {
        BinarySequence::from_support(period, &[], SequenceClass::External)
    }

    pub fn ones(period: usize) -> BinarySequence {
        BinarySequence {
            bits: vec![1; period],
            class: SequenceClass::External,
        }
    }

    pub fn generate(part: &Partition, class: SequenceClass) -> Result<BinarySequence> {
        let extra = match class {
            SequenceClass::Dh1 => ResidueClass::P,
            SequenceClass::Dh2 => ResidueClass::Q,
            SequenceClass::External => {
                return Err(Error::InvalidInput(
                    "external sequences are not generated".into(),
                ))
            }
        };
        let bits = part
            .labels()
            .iter()
            .map(|&c| u8::from(c == ResidueClass::D1 || c == extra))
            .collect();
        Ok(BinarySequence { bits, class })
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn class(&self) -> SequenceClass {
        self.class
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn support(&self) -> Vec<u64> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i as u64)
            .collect()
    }

    /// The first `count` bits of the periodic extension.
    pub fn periodized(&self, count: usize) -> Vec<u8> {
        self.bits.iter().copied().cycle().take(count).collect()
    }

    /// `S(2) = sum s_i 2^i`.
    pub fn s_eval_two(&self) -> BigUint {
        let mut bytes = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            bytes[i / 8] |= b << (i % 8);
        }
        BigUint::from_bytes_le(&bytes)
    }

    /// `'0'`/`'1'` characters, index 0 first, no newline.
    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect()
    }

    /// `S(2)` in lowercase hex, zero-padded to `ceil(N/4)` digits.
    pub fn to_hex(&self) -> String {
        let width = self.bits.len().div_ceil(4);
        format!("{:0>width$}", self.s_eval_two().to_str_radix(16))
    }

    pub fn from_hex(hex: &str, period: usize) -> Result<BinarySequence> {
        let hex = hex.trim();
        let value = BigUint::parse_bytes(hex.as_bytes(), 16)
            .ok_or_else(|| Error::InvalidInput(format!("not a hex string: {hex:?}")))?;
        if value.bits() > period as u64 {
            return Err(Error::InvalidInput(format!(
                "hex value exceeds {period} bits"
            )));
        }
        let bits = (0..period as u64).map(|i| u8::from(value.bit(i))).collect();
        BinarySequence::new(bits)
    }

    pub fn export(&self, part: Option<&Partition>) -> SequenceExport {
        SequenceExport {
            p: part.map(|pt| pt.params().p()),
            q: part.map(|pt| pt.params().q()),
            g: part.map(|pt| pt.params().g()),
            class: self.class,
            period: self.period(),
            support: self.support(),
        }
    }
}

impl FromStr for BinarySequence {
    type Err = Error;

    /// Parses the sequence file format: one line of `'0'`/`'1'`.
    fn from_str(s: &str) -> Result<BinarySequence> {
        let line = s.trim_end_matches(['\n', '\r']);
        let bits = line
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidInput(format!(
                    "character {other:?} at position {i}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BinarySequence::new(bits)
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceExport {
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub g: Option<u64>,
    pub class: SequenceClass,
    pub period: usize,
    pub support: Vec<u64>,
}

pub fn generate_dh1(part: &Partition) -> BinarySequence {
    BinarySequence::generate(part, SequenceClass::Dh1).unwrap()
}

pub fn generate_dh2(part: &Partition) -> BinarySequence {
    BinarySequence::generate(part, SequenceClass::Dh2).unwrap()
}

/// Berlekamp-Massey over GF(2): length of the shortest LFSR generating
/// `bits`.
pub fn berlekamp_massey(bits: &[u8]) -> usize {
    let n = bits.len();
    let mut c = vec![0u8; n + 1];
    let mut b = vec![0u8; n + 1];
    c[0] = 1;
    b[0] = 1;
    let mut len = 0usize;
    let mut m: isize = -1;
    for i in 0..n {
        let mut d = bits[i];
        for k in 1..=len {
            d ^= c[k] & bits[i - k];
        }
        if d == 1 {
            let t = c.clone();
            let shift = (i as isize - m) as usize;
            for k in 0..=n - shift {
                c[k + shift] ^= b[k];
            }
            if 2 * len <= i {
                len = i + 1 - len;
                m = i as isize;
                b = t;
            }
        }
    }
    len
}

/// Linear complexity of the periodic sequence, from `2N` bits of its
/// periodic extension.
pub fn linear_complexity(seq: &BinarySequence) -> usize {
    berlekamp_massey(&seq.periodized(2 * seq.period()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntcore::make_params;

    fn part(p: u64, q: u64) -> Partition {
        Partition::build(&make_params(p, q, None).unwrap()).unwrap()
    }

    #[test]
    fn dh1_examples() {
        let s = generate_dh1(&part(3, 5));
        assert_eq!(s.support(), vec![2, 3, 6, 7, 8, 9, 12, 13]);
        assert_eq!(s.weight(), 8);
        assert_eq!(s.to_bit_string(), "001100111100110");
        assert_eq!(generate_dh1(&part(5, 7)).weight(), 18);
    }

    #[test]
    fn dh2_examples() {
        let s = generate_dh2(&part(3, 5));
        assert_eq!(s.support(), vec![2, 5, 7, 8, 10, 13]);
        assert_eq!(s.weight(), 6);
        assert_eq!(s.to_bit_string(), "001001011010010");
        assert_eq!(generate_dh2(&part(11, 13)).weight(), 70);
    }

    #[test]
    fn supports_differ_exactly_on_p_and_q() {
        for (p, q) in [(3, 5), (5, 7), (11, 13), (7, 11)] {
            let pt = part(p, q);
            let (a, b) = (generate_dh1(&pt), generate_dh2(&pt));
            let diff: Vec<u64> = (0..pt.n())
                .filter(|&i| a.bits()[i as usize] != b.bits()[i as usize])
                .collect();
            let mut expect: Vec<u64> = pt.pset().iter().chain(pt.qset()).copied().collect();
            expect.sort_unstable();
            assert_eq!(diff, expect);
            assert_eq!(a.weight() as u64, (p + 1) * (q - 1) / 2);
            assert_eq!(b.weight() as u64, (p - 1) * (q + 1) / 2);
        }
    }

    #[test]
    fn s_eval_two_examples() {
        assert_eq!(BinarySequence::zeros(15).s_eval_two(), BigUint::from(0u32));
        let support = [2u32, 3, 6, 7, 8, 9, 12, 13];
        let direct: u64 = support.iter().map(|&i| 1u64 << i).sum();
        assert_eq!(direct, 13260);
        assert_eq!(
            generate_dh1(&part(3, 5)).s_eval_two(),
            BigUint::from(13260u32)
        );
        let one = BinarySequence::from_support(15, &[0], SequenceClass::External);
        assert_eq!(one.s_eval_two(), BigUint::from(1u32));
    }

    #[test]
    fn text_formats_round_trip() {
        let s = generate_dh1(&part(5, 7));
        let parsed: BinarySequence = format!("{s}\n").parse().unwrap();
        assert_eq!(parsed.bits(), s.bits());
        assert_eq!(generate_dh1(&part(3, 5)).to_hex(), "33cc");
        let back = BinarySequence::from_hex(&s.to_hex(), s.period()).unwrap();
        assert_eq!(back.bits(), s.bits());
        assert!("0102".parse::<BinarySequence>().is_err());
        assert!("".parse::<BinarySequence>().is_err());
    }

    #[test]
    fn linear_complexity_examples() {
        assert_eq!(linear_complexity(&BinarySequence::zeros(15)), 0);
        let impulse = BinarySequence::from_support(15, &[0], SequenceClass::External);
        assert_eq!(linear_complexity(&impulse), 15);
        assert_eq!(linear_complexity(&BinarySequence::ones(15)), 1);
        // x^3 + x + 1 m-sequence has complexity 3
        assert_eq!(
            berlekamp_massey(&[1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1, 1]),
            3
        );
    }

    /// Oracle: rank over GF(2) of the N x N circulant equals the linear
    /// complexity of the periodic sequence.
    fn circulant_rank_gf2(bits: &[u8]) -> usize {
        let n = bits.len();
        let mut rows: Vec<Vec<u8>> = (0..n)
            .map(|i| (0..n).map(|j| bits[(i + n - j) % n]).collect())
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| rows[r][col] == 1) else {
                continue;
            };
            rows.swap(rank, piv);
            for r in 0..n {
                if r != rank && rows[r][col] == 1 {
                    let pivot = rows[rank].clone();
                    for (x, y) in rows[r].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn linear_complexity_matches_circulant_rank() {
        for (p, q) in [(3, 5), (5, 7), (3, 7), (7, 11), (11, 13)] {
            let pt = part(p, q);
            for s in [generate_dh1(&pt), generate_dh2(&pt)] {
                assert_eq!(
                    linear_complexity(&s),
                    circulant_rank_gf2(s.bits()),
                    "({p}, {q}) {}",
                    s.class()
                );
            }
        }
    }
}
