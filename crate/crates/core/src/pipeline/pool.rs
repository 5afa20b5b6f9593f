use std::collections::VecDeque;
use std::thread;

use crossbeam_channel::{bounded, unbounded, TrySendError};
use serde::Serialize;

use crate::corpus::Gav;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JobKind {
    SurfaceExtraction,
    ClientAnalysis,
}

impl JobKind {
    pub fn as_str(self) -> &'static str {
        match self {
            JobKind::SurfaceExtraction => "surface_extraction",
            JobKind::ClientAnalysis => "client_analysis",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub kind: JobKind,
    pub subject: Gav,
    /// Executions so far.
    pub attempts: u32,
}

/// Final state of one job.
#[derive(Debug)]
pub enum Outcome<T> {
    Done { job: Job, value: T },
    Failed { job: Job, error: String },
}

pub struct PoolOptions {
    pub workers: usize,
    pub max_retries: u32,
    /// Stop collecting after this many successes.
    pub stop_after: Option<usize>,
}

/// Runs `work` over `jobs` on a bounded queue with `workers` threads. The
/// calling thread feeds the queue, collects results and re-enqueues failed
/// jobs until each has run `1 + max_retries` times. `on_outcome` sees every
/// final outcome in completion order.
///
/// Returns false if stopped early by `stop_after`.
pub fn run_pool<T, W, F>(jobs: Vec<Job>, opts: &PoolOptions, work: W, mut on_outcome: F) -> bool
where
    T: Send,
    W: Fn(&Job) -> Result<T, String> + Sync,
    F: FnMut(Outcome<T>),
{
    let workers = opts.workers.max(1);
    let (job_tx, job_rx) = bounded::<Job>(workers * 2);
    let (result_tx, result_rx) = unbounded::<(Job, Result<T, String>)>();
    let mut pending: VecDeque<Job> = jobs.into();
    let mut outstanding = 0usize;
    let mut successes = 0usize;
    let mut completed = true;

    thread::scope(|s| {
        for _ in 0..workers {
            let rx = job_rx.clone();
            let tx = result_tx.clone();
            let work = &work;
            s.spawn(move || {
                for mut job in rx {
                    job.attempts += 1;
                    let r = work(&job);
                    if tx.send((job, r)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(job_rx);
        drop(result_tx);

        loop {
            while let Some(job) = pending.pop_front() {
                match job_tx.try_send(job) {
                    Ok(()) => outstanding += 1,
                    Err(TrySendError::Full(job)) => {
                        pending.push_front(job);
                        break;
                    }
                    Err(TrySendError::Disconnected(_)) => unreachable!("workers outlive the queue"),
                }
            }
            if outstanding == 0 {
                break;
            }
            let (job, result) = result_rx.recv().expect("a worker holds a result sender");
            outstanding -= 1;
            match result {
                Ok(value) => {
                    on_outcome(Outcome::Done { job, value });
                    successes += 1;
                    if opts.stop_after.is_some_and(|n| successes >= n) {
                        completed = false;
                        break;
                    }
                }
                Err(error) if job.attempts <= opts.max_retries => {
                    log::warn!(
                        "{} {} failed (attempt {}): {error}",
                        job.kind.as_str(),
                        job.subject,
                        job.attempts
                    );
                    pending.push_back(job);
                }
                Err(error) => on_outcome(Outcome::Failed { job, error }),
            }
        }
        drop(job_tx);
    });
    completed
}
