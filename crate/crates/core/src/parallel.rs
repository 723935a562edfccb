//! Trial fan-out. Every trial gets its index and derives its own seed, so the
//! collected results are identical whichever runner executes them.

/// Runs `f(0..n)` on the calling thread.
pub fn map_sequential<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Runs `f(0..n)` on the rayon pool, preserving index order in the output.
#[cfg(feature = "parallel")]
pub fn map_parallel<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Parallel when the `parallel` feature is on, sequential otherwise.
pub fn map_trials<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(n, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runners_agree() {
        let f = |i: usize| (i as f64).sqrt() * 3.0;
        assert_eq!(map_sequential(1000, f), map_trials(1000, f));
    }
}
