//! Worker pool sized by `INVARFORMS_THREADS`.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

pub const THREADS_VAR: &str = "INVARFORMS_THREADS";

/// Number of workers requested by the environment, or 0 for the rayon default.
pub fn requested_threads() -> usize {
    std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

/// Shared pool; results never depend on its size.
pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        ThreadPoolBuilder::new()
            .num_threads(requested_threads())
            .thread_name(|i| format!("invarforms-{}", i))
            .build()
            .expect("thread pool")
    })
}

pub fn install<R: Send, F: FnOnce() -> R + Send>(f: F) -> R {
    pool().install(f)
}
