//! Data-parallel map helper. With the default `parallel` feature the work is
//! spread over the ambient rayon pool; without it the same call runs
//! sequentially. Output order matches input order in both builds, so results
//! are identical whichever path is compiled in.

#[cfg(feature = "parallel")]
pub(crate) fn ordered_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn ordered_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Name of the compiled execution mode, for bench labels and diagnostics.
pub fn execution_mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}
