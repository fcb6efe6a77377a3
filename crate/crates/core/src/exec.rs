//! Execution-mode plumbing: run the heavy searches sequentially or on a rayon
//! pool. Parallel runs keep the observable result identical to the sequential
//! one (searches return the first witness in canonical order; collections keep
//! canonical order), so the mode only affects wall-clock time.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Fan work out over rayon. Without the `parallel` feature this behaves
    /// like [`ExecMode::Sequential`].
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// First `Some` produced by `f`, scanning `items` left to right.
pub(crate) fn find_map_first<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        return items.par_iter().find_map_first(f);
    }
    let _ = mode;
    items.iter().find_map(f)
}

/// Map every item, keeping input order.
pub(crate) fn map_collect<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}
