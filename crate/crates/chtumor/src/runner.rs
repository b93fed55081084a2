//! Scoped worker pool for sweep members.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use chtumor_core::studies::Runner;
use chtumor_core::Result;

/// Spreads members over `jobs` threads. Results come back in input order, so
/// output never depends on scheduling.
#[derive(Clone, Copy, Debug)]
pub struct Threaded {
    jobs: NonZeroUsize,
}

impl Threaded {
    pub fn new(jobs: usize) -> Self {
        Threaded {
            jobs: NonZeroUsize::new(jobs).unwrap_or(NonZeroUsize::MIN),
        }
    }

    /// One worker per available core.
    pub fn available() -> Self {
        Threaded {
            jobs: std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN),
        }
    }

    pub fn jobs(&self) -> usize {
        self.jobs.get()
    }
}

impl Runner for Threaded {
    fn map<T, F>(&self, values: &[f64], job: F) -> Vec<Result<T>>
    where
        T: Send,
        F: Fn(f64) -> Result<T> + Sync,
    {
        let workers = self.jobs.get().min(values.len());
        if workers <= 1 {
            return values.iter().map(|&v| job(v)).collect();
        }
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<Result<T>>>> = Mutex::new((0..values.len()).map(|_| None).collect());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&v) = values.get(i) else { break };
                    log::debug!("member {v} started");
                    let out = job(v);
                    slots.lock().expect("no worker panicked while holding the lock")[i] = Some(out);
                });
            }
        });
        slots
            .into_inner()
            .expect("workers have finished")
            .into_iter()
            .map(|r| r.expect("every index was claimed"))
            .collect()
    }
}
