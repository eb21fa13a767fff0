//! Execution policy for the data-parallel kernels.
//!
//! With the `parallel` feature the kernels split independent output entries
//! (or independent inputs of a batch) across the rayon pool. Each output
//! entry is still accumulated sequentially in a fixed order, so both policies
//! produce bit-identical results, including for `f64`.

/// How a kernel distributes independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecPolicy {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled; otherwise runs
    /// sequentially.
    Parallel,
}

impl Default for ExecPolicy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecPolicy::Parallel
        } else {
            ExecPolicy::Sequential
        }
    }
}

/// Below this many work items the parallel path is not worth the split.
pub(crate) const MIN_PARALLEL_ITEMS: usize = 1 << 10;

impl ExecPolicy {
    pub(crate) fn parallel_for(self, items: usize) -> bool {
        cfg!(feature = "parallel") && self == ExecPolicy::Parallel && items >= MIN_PARALLEL_ITEMS
    }
}

/// Maps `f` over `0..len` and collects the results in order, failing on the
/// first error in index order.
pub(crate) fn map_indices<T, E, F>(policy: ExecPolicy, len: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy.parallel_for(len) {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = policy;
    (0..len).map(f).collect()
}

/// Like [`map_indices`] but always splits when the policy allows, for batches
/// of coarse-grained items (whole tensors, whole partitions).
pub(crate) fn map_items<I, T, E, F>(policy: ExecPolicy, items: &[I], f: F) -> Result<Vec<T>, E>
where
    I: Sync,
    T: Send,
    E: Send,
    F: Fn(&I) -> Result<T, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy == ExecPolicy::Parallel && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = policy;
    items.iter().map(f).collect()
}
