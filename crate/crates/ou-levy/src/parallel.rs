//! Replica fan-out on a rayon pool sized by `OU_LEVY_THREADS`. Results are
//! collected in replica order, so output never depends on scheduling.

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::CliError;

pub const THREADS_ENV: &str = "OU_LEVY_THREADS";

pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "{THREADS_ENV}: expected a positive integer, got `{s}`"
            ))),
        },
    }
}

pub fn pool(threads: Option<usize>) -> Result<ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| CliError::Other(format!("thread pool: {e}")))
}

pub fn map_replicas<T, F>(pool: &ThreadPool, replicas: u64, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(u64) -> Result<T, CliError> + Sync + Send,
{
    pool.install(|| (0..replicas).into_par_iter().map(&f).collect())
}
