//! Data-parallel map used by the verification harnesses.
//!
//! With the `parallel` feature the work is spread over a rayon pool. Without
//! it, or when exactly one worker is requested, items are processed in order on
//! the calling thread. Either way results come back in input order, so callers
//! see identical output regardless of scheduling.

/// Whether this build carries the rayon backend.
pub const PARALLEL_ENABLED: bool = cfg!(feature = "parallel");

/// Maps `f` over `items`, returning results in input order.
///
/// `workers == 0` uses the global rayon pool, `workers == 1` is the sequential
/// path, and any other value builds a dedicated pool of that size.
pub fn map_indexed<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers != 1 {
        use rayon::prelude::*;
        let run = || {
            items
                .par_iter()
                .enumerate()
                .map(|(i, t)| f(i, t))
                .collect::<Vec<R>>()
        };
        if workers == 0 {
            return run();
        }
        return match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        };
    }
    let _ = workers;
    sequential_map(items, f)
}

/// The sequential fallback, exposed so benchmarks can compare both paths.
pub fn sequential_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(usize, &T) -> R,
{
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<usize> = (0..257).collect();
        for workers in [0, 1, 3] {
            let out = map_indexed(&items, workers, |i, &x| (i, x * x));
            assert!(out.iter().enumerate().all(|(i, &(j, sq))| i == j && sq == i * i));
        }
    }
}
