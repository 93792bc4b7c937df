//! Thin switch between rayon and plain iterators.
//!
//! With the default `parallel` feature the helpers fan work out over the
//! rayon pool; without it they run the same closures sequentially. Results
//! are collected in input order either way, so output is identical in both
//! modes.

#[cfg(feature = "parallel")]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn all_range<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().all(f)
}

#[cfg(not(feature = "parallel"))]
pub fn all_range<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool,
{
    (0..n).all(f)
}

#[cfg(feature = "parallel")]
pub fn map_slice<'a, T, U, F>(items: &'a [T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&'a T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<'a, T, U, F>(items: &'a [T], f: F) -> Vec<U>
where
    F: Fn(&'a T) -> U,
{
    items.iter().map(f).collect()
}
