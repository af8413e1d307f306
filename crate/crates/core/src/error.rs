use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("expected odd primes p < q, got p = {p}, q = {q}")]
    BadOrder { p: u64, q: u64 },

    #[error("gcd(p-1, q-1) = {gcd} for p = {p}, q = {q}; order-2 generalized cyclotomy needs 2")]
    GcdNotTwo { p: u64, q: u64, gcd: u64 },

    #[error("period p*q = {p}*{q} does not fit the supported range")]
    PeriodTooLarge { p: u64, q: u64 },

    #[error("{g} is not a common primitive root of {p} and {q}")]
    InvalidGenerator { g: u64, p: u64, q: u64 },

    #[error("class D0 enumeration collided at {value} (g = {g}, x = {x})")]
    PartitionCollision { value: u64, g: u64, x: u64 },

    #[error("lemma {lemma} violated: {detail}")]
    LemmaViolation { lemma: u8, detail: String },

    #[error("theorem {theorem} violated: {detail}")]
    TheoremViolation { theorem: u8, detail: String },

    #[error("character sum is not reducible: {0}")]
    NotReducible(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
