/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "KFORGE_THREADS";

/// Sizes the global rayon pool from `KFORGE_THREADS` if it is set to a
/// positive integer. Returns the pool size in effect.
pub fn init_from_env() -> usize {
    if let Some(n) = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        if n > 0 {
            // A second initialisation in the same process keeps the first pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    rayon::current_num_threads()
}
