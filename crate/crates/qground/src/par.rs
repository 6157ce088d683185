//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) `Strategy::Parallel` runs on
//! the rayon pool; without it every strategy runs sequentially. Results are
//! always ordered by input position, never by completion order.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
impl Strategy {
    fn parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

pub fn map<T, R, F>(s: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if s.parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = s;
    items.iter().map(f).collect()
}

pub fn map_range<R, F>(s: Strategy, range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if s.parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = s;
    range.map(f).collect()
}

/// The lowest index in `range` for which `f` returns `Some`.
pub fn find_first<T, F>(s: Strategy, range: Range<u64>, f: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if s.parallel() {
        return range.into_par_iter().find_map_first(|i| f(i).map(|t| (i, t)));
    }
    let _ = s;
    range.into_iter().find_map(|i| f(i).map(|t| (i, t)))
}
