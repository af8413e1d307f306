//! Ding-Helleseth generalized cyclotomic sequences of period `N = pq` and
//! their 2-adic complexity.
//!
//! The crate builds the order-2 generalized cyclotomic partition of `Z_N`,
//! generates the two sequence classes defined on it, computes the exact
//! 2-adic complexity of any period, and ships checkers that compare every
//! closed form used in the complexity argument against brute-force
//! enumeration or an independent modular oracle:
//!
//! * [`ntcore`]: primality, primitive roots, CRT and the [`PeriodParams`] frame.
//! * [`cyclotomy`]: the five-way [`Partition`] and cyclotomic numbers.
//! * [`sequences`]: [`BinarySequence`], `S(2)` and Berlekamp-Massey.
//! * [`adic`]: 2-adic complexity, rational approximation, FCSR expansion.
//! * [`verify`]: determinant closed forms, circulant oracle, Gauss periods,
//!   coprimality audits and the lemma/twin sweeps.
//! * [`cli`]: the `cyclodyne` command-line surface.
//!
//! Data-parallel loops go through [`par::Execution`]; with the `parallel`
//! feature disabled every strategy runs sequentially.

pub mod adic;
pub mod cli;
pub mod cyclotomy;
pub mod error;
pub mod ntcore;
pub mod par;
pub mod sequences;
pub mod verify;

pub use adic::{ComplexityReport, DyadicRational};
pub use cyclotomy::{CyclotomicTable, Partition, ResidueClass};
pub use error::{Error, Result};
pub use ntcore::PeriodParams;
pub use par::Execution;
pub use sequences::{BinarySequence, SequenceClass};
