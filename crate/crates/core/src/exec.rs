//! Execution mode for the data-parallel inner loops.
//!
//! With the `parallel` feature disabled every mode runs sequentially. Results
//! are identical in both modes: work items are computed independently and
//! collected in index order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// Whether this mode actually fans out on the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// `(0..n).map(f).collect()`, fanned out across the rayon pool when enabled.
pub(crate) fn map_indexed<T, F>(mode: ExecMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Slots per parallel work item in [`fill_chunks`].
pub(crate) const FILL_CHUNK: usize = 2048;

/// Calls `f(start, chunk)` on consecutive chunks of `out`, where `start` is
/// the index of `chunk[0]`.
pub(crate) fn fill_chunks<T, F>(mode: ExecMode, out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        out.par_chunks_mut(FILL_CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| f(c * FILL_CHUNK, chunk));
        return;
    }
    let _ = mode;
    for (c, chunk) in out.chunks_mut(FILL_CHUNK).enumerate() {
        f(c * FILL_CHUNK, chunk);
    }
}
