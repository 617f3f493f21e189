//! Thread-count control for the internal rayon pool.
//!
//! All parallel kernels in this crate split work into independent lanes and
//! reduce sequentially, so results are bit-identical for any thread count.

/// Environment variable capping internal parallelism.
pub const THREADS_ENV: &str = "KICKLAB_THREADS";

/// Reads [`THREADS_ENV`] and installs a global pool of that size.
///
/// Returns the thread count that was requested, if any. Calling this after
/// the global pool is already built is harmless.
pub fn configure_from_env() -> Option<usize> {
    let n = std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok()?;
    if n == 0 {
        return None;
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Some(n)
}
