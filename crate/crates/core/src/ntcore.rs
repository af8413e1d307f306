//! Word-size number theory: primality, primitive roots, CRT, Montgomery
//! arithmetic and the [`PeriodParams`] frame every construction consumes.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest prime accepted for `p` or `q`, so that `N = pq` fits in a `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin; the first twelve prime bases are a proven
/// witness set for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `a` modulo the prime `p`; 0 when `p | a`.
pub fn multiplicative_order(a: u64, p: u64) -> u64 {
    if a.is_multiple_of(p) {
        return 0;
    }
    let mut order = p - 1;
    for f in prime_factors(p - 1) {
        while order.is_multiple_of(f) && pow_mod(a, order / f, p) == 1 {
            order /= f;
        }
    }
    order
}

pub fn is_primitive_root(g: u64, p: u64) -> bool {
    p > 1 && multiplicative_order(g, p) == p - 1
}

/// Smallest `g >= 2` that is a primitive root modulo both `p` and `q`.
///
/// Existence follows from CRT, so the search never passes `pq`.
pub fn common_primitive_root(p: u64, q: u64) -> u64 {
    let fp = prime_factors(p - 1);
    let fq = prime_factors(q - 1);
    let is_root = |g: u64, m: u64, fs: &[u64]| {
        !g.is_multiple_of(m) && fs.iter().all(|f| pow_mod(g, (m - 1) / f, m) != 1)
    };
    let bound = p * q;
    let mut g = 2;
    while !(is_root(g, p, &fp) && is_root(g, q, &fq)) {
        g += 1;
        assert!(
            g < bound,
            "no common primitive root of {p} and {q} below {bound}"
        );
    }
    g
}

/// The unique `y` in `[0, pq)` with `y = a (mod p)` and `y = b (mod q)`.
pub fn crt_lift(p: u64, q: u64, a: u64, b: u64) -> u64 {
    debug_assert!(a < p && b < q);
    let n = p * q;
    let p_inv = inv_mod(p % q, q).expect("moduli must be coprime");
    // y = a + p * ((b - a) * p^-1 mod q)
    let diff = (b + q - a % q) % q;
    let t = mul_mod(diff, p_inv, q);
    (a + p * t) % n
}

/// Legendre symbol `(a / p)` for an odd prime `p`: 0, 1 or -1.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Primes up to and including `limit` (sieve of Eratosthenes).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Twin prime pairs `(p, p + 2)` with `p <= max_p`.
pub fn twin_pairs(max_p: u64) -> Vec<(u64, u64)> {
    primes_up_to(max_p)
        .into_iter()
        .filter(|&p| p >= 3 && is_prime(p + 2))
        .map(|p| (p, p + 2))
        .collect()
}

/// Arithmetic frame of the construction: `p < q` odd primes with
/// `gcd(p-1, q-1) = 2`, `N = pq`, `e = (p-1)(q-1)/2`, a common primitive
/// root `g` and the CRT witness `x = g (mod p)`, `x = 1 (mod q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PeriodParams {
    p: u64,
    q: u64,
    #[serde(rename = "N")]
    n: u64,
    e: u64,
    g: u64,
    x: u64,
}

impl PeriodParams {
    /// Validates `(p, q)` and picks the smallest common primitive root
    /// unless `g_override` names another valid one.
    pub fn new(p: u64, q: u64, g_override: Option<u64>) -> Result<Self> {
        if p < 3 || p >= q {
            return Err(Error::BadOrder { p, q });
        }
        if q > MAX_PRIME {
            return Err(Error::PeriodTooLarge { p, q });
        }
        for v in [p, q] {
            if !is_prime(v) {
                return Err(Error::NotPrime(v));
            }
        }
        let d = gcd(p - 1, q - 1);
        if d != 2 {
            return Err(Error::GcdNotTwo { p, q, gcd: d });
        }
        let n = p * q;
        let g = match g_override {
            Some(g) => {
                let g = g % n;
                if !(is_primitive_root(g % p, p) && is_primitive_root(g % q, q)) {
                    return Err(Error::InvalidGenerator { g, p, q });
                }
                g
            }
            None => common_primitive_root(p, q),
        };
        let x = crt_lift(p, q, g % p, 1);
        Ok(PeriodParams {
            p,
            q,
            n,
            e: (p - 1) * (q - 1) / 2,
            g,
            x,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// The period `N = pq`.
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn e(&self) -> u64 {
        self.e
    }
    pub fn g(&self) -> u64 {
        self.g
    }
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn is_twin(&self) -> bool {
        self.q == self.p + 2
    }

    /// `q mod 4`, which selects the branch of every closed form.
    pub fn q_mod4(&self) -> u64 {
        self.q % 4
    }
}

/// Same as [`PeriodParams::new`].
pub fn make_params(p: u64, q: u64, g_override: Option<u64>) -> Result<PeriodParams> {
    PeriodParams::new(p, q, g_override)
}

/// Montgomery arithmetic modulo an odd `m < 2^63`.
#[derive(Clone, Copy, Debug)]
pub struct Montgomery {
    m: u64,
    neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub fn new(m: u64) -> Self {
        assert!(
            m % 2 == 1 && m < 1 << 63,
            "Montgomery modulus must be odd and < 2^63"
        );
        // Newton iteration for m^-1 mod 2^64.
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % m as u128) as u64;
        let r2 = mul_mod(r, r, m);
        Montgomery {
            m,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let k = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + k as u128 * self.m as u128) >> 64) as u64;
        if u >= self.m {
            u - self.m
        } else {
            u
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.reduce((a % self.m) as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.to_mont(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a Montgomery-form value for a prime modulus.
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.m - 2)
    }
}

/// Seeded stream of distinct primes with exactly `bits` bits.
#[derive(Debug)]
pub struct PrimeSampler {
    rng: ChaCha8Rng,
    bits: u32,
    seen: HashSet<u64>,
}

impl PrimeSampler {
    pub fn new(seed: u64, bits: u32) -> Self {
        assert!((3..=63).contains(&bits));
        PrimeSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bits,
            seen: HashSet::new(),
        }
    }
}

impl Iterator for PrimeSampler {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let lo = 1u64 << (self.bits - 1);
        let hi = 1u64 << self.bits;
        loop {
            let c = self.rng.random_range(lo..hi) | 1;
            if is_prime(c) && self.seen.insert(c) {
                return Some(c);
            }
        }
    }
}

/// `count` distinct seeded 60-bit primes.
pub fn trial_primes(count: usize, seed: u64) -> Vec<u64> {
    PrimeSampler::new(seed, 60).take(count).collect()
}
