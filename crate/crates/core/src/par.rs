//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! the rayon pool unless sequential execution was requested at runtime;
//! without it everything runs on the calling thread. Results are always
//! returned in input order, so callers get identical answers either way.

use std::ops::Range;
use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Sequential,
}

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Sets the process-wide execution mode.
pub fn set_execution(mode: Execution) {
    FORCE_SEQUENTIAL.store(mode == Execution::Sequential, Ordering::Relaxed);
}

pub fn execution() -> Execution {
    if cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::Relaxed) {
        Execution::Parallel
    } else {
        Execution::Sequential
    }
}

// Below this many work units the rayon overhead is not worth it.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 64;

#[cfg(feature = "parallel")]
fn go_parallel(len: usize) -> bool {
    len >= MIN_PARALLEL_LEN && execution() == Execution::Parallel
}

pub fn map_range<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if go_parallel((range.end - range.start) as usize) {
        return range.into_par_iter().map(f).collect();
    }
    range.map(f).collect()
}

pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if go_parallel(items.len()) {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Like [`map_slice`] for work units that are each expensive (a frontier or
/// an envelope evaluation), so even short inputs are split.
pub fn map_slice_heavy<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if items.len() >= 2 && execution() == Execution::Parallel {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Lowest index in `range` whose result is `Some`, with that result.
pub fn find_first<T, F>(range: Range<u64>, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if go_parallel((range.end - range.start) as usize) {
        return range.into_par_iter().find_map_first(f);
    }
    range.into_iter().find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = map_range(0..1000, |x| x * 2);
        assert_eq!(v, (0..1000).map(|x| x * 2).collect::<Vec<_>>());
        assert_eq!(find_first(0..1000, |x| (x % 97 == 96).then_some(x)), Some(96));
    }
}
