//! Execution strategy for the data-parallel loops (sweeps, per-prime
//! determinant runs, convolution counts).
//!
//! Results are always returned in input order, so the strategy never
//! changes output bytes.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Rayon work-stealing; identical to `Sequential` without the
    /// `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Sum of `f(i)` over `range`.
    pub fn sum_range<F>(self, range: Range<usize>, f: F) -> u64
    where
        F: Fn(usize) -> u64 + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return range.into_par_iter().map(f).sum();
        }
        range.map(f).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = Execution::Sequential.map(&items, |x| x * x + 1);
        let par = Execution::Parallel.map(&items, |x| x * x + 1);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 101);
        assert_eq!(
            Execution::Sequential.sum_range(0..100, |i| i as u64),
            Execution::Parallel.sum_range(0..100, |i| i as u64)
        );
        assert_eq!(
            Execution::Parallel.map_range(0..5, |i| i * 2),
            vec![0, 2, 4, 6, 8]
        );
    }
}
