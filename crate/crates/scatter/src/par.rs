//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers run on the rayon pool; without it
//! they are plain iterator chains. Results are always in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Map over `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// The least index in `0..n` for which `f` returns `Some`, with its value.
pub fn find_first<R, F>(n: usize, f: F) -> Option<(usize, R)>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(|i| f(i).map(|r| (i, r)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(|i| f(i).map(|r| (i, r)))
    }
}

/// Sequential reference versions, always available for comparison benches.
pub mod seq {
    pub fn map<T, R, F: Fn(&T) -> R>(items: &[T], f: F) -> Vec<R> {
        items.iter().map(f).collect()
    }

    pub fn find_first<R, F: Fn(usize) -> Option<R>>(n: usize, f: F) -> Option<(usize, R)> {
        (0..n).find_map(|i| f(i).map(|r| (i, r)))
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
