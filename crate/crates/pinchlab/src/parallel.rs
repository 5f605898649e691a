//! Data-parallel driver for the randomized suites.
//!
//! With the `parallel` feature (default) the indexed map-reduce shards over
//! the rayon pool; without it the same entry point runs sequentially. Every
//! reduction used in this crate is order-insensitive (max, counts, list
//! merges that are sorted afterwards), so both modes produce identical
//! results for identical seeds.

/// Execution mode selector, mostly for benchmarks that compare both paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Shard over the rayon pool; silently identical to `Sequential` when the
    /// `parallel` feature is disabled.
    Parallel,
}

impl ExecMode {
    /// The default mode for this build.
    pub fn auto() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Maps `0..count` and folds the results with `reduce`.
pub fn map_reduce<T, M, R>(mode: ExecMode, count: usize, identity: T, map: M, reduce: R) -> T
where
    T: Send + Sync + Clone,
    M: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..count).map(map).fold(identity, reduce),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..count)
                    .into_par_iter()
                    .map(map)
                    .reduce(|| identity.clone(), reduce)
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..count).map(map).fold(identity, reduce)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| (i as f64).sin().abs();
        let seq = map_reduce(ExecMode::Sequential, 1000, 0.0_f64, f, f64::max);
        let par = map_reduce(ExecMode::Parallel, 1000, 0.0_f64, f, f64::max);
        assert_eq!(seq, par);
    }
}
