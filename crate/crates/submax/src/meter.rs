//! Adaptivity metering and the batch execution engine.
//!
//! A *round* is one batch of oracle queries whose inputs depend only on the
//! answers of strictly earlier batches. [`Engine::record_batch`] runs one
//! such batch: it bumps the round counter once (empty batches are no-ops),
//! executes the entries (in parallel when a worker pool is configured) and
//! attributes the resulting oracle-call deltas to a named phase.
//!
//! Oracle calls themselves are counted at the leaves: every constructed
//! function or matroid carries a [`CallCounter`] that its primitive queries
//! bump. The engine snapshots the attached counters around each batch, so
//! per-phase call totals are exact no matter how entries are nested or
//! parallelized inside the batch.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

/// Shared call counter; cloned handles all point at the same tally.
#[derive(Clone, Debug, Default)]
pub struct CallCounter(Arc<AtomicU64>);

impl CallCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bump(&self, k: u64) {
        self.0.fetch_add(k, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    fn same_as(&self, other: &CallCounter) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PhaseCounts {
    pub rounds: u64,
    pub f_calls: u64,
    pub matroid_calls: u64,
}

/// Rounds and per-oracle query totals, with a per-phase breakdown.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MeterSnapshot {
    pub rounds: u64,
    pub f_calls: u64,
    pub matroid_calls: u64,
    pub phases: BTreeMap<String, PhaseCounts>,
}

#[derive(Default)]
struct MeterState {
    rounds: u64,
    f_calls: u64,
    matroid_calls: u64,
    phases: BTreeMap<String, PhaseCounts>,
    f_sources: Vec<CallCounter>,
    matroid_sources: Vec<CallCounter>,
}

impl MeterState {
    fn totals(&self) -> (u64, u64) {
        (
            self.f_sources.iter().map(|c| c.get()).sum(),
            self.matroid_sources.iter().map(|c| c.get()).sum(),
        )
    }
}

/// Batch execution engine plus the adaptivity meter it maintains.
pub struct Engine {
    state: Mutex<MeterState>,
    pool: Option<rayon::ThreadPool>,
    in_batch: AtomicBool,
}

impl Engine {
    /// An engine executing batch entries sequentially.
    pub fn new() -> Self {
        Self::with_workers(1)
    }

    /// `workers > 1` builds a dedicated thread pool; entries of a batch are
    /// the unit of parallelism. Results are collected in submission order,
    /// so outputs do not depend on scheduling.
    pub fn with_workers(workers: usize) -> Self {
        let pool = if workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .expect("worker pool"),
            )
        } else {
            None
        };
        Self {
            state: Mutex::new(MeterState::default()),
            pool,
            in_batch: AtomicBool::new(false),
        }
    }

    /// Register the function-oracle counters this meter should track.
    pub fn attach_function_counter(&self, c: CallCounter) {
        let mut st = self.state.lock().unwrap();
        if !st.f_sources.iter().any(|x| x.same_as(&c)) {
            st.f_sources.push(c);
        }
    }

    /// Register the matroid-oracle counters this meter should track.
    pub fn attach_matroid_counter(&self, c: CallCounter) {
        let mut st = self.state.lock().unwrap();
        if !st.matroid_sources.iter().any(|x| x.same_as(&c)) {
            st.matroid_sources.push(c);
        }
    }

    /// Fold oracle calls made outside any batch (view construction,
    /// validation) into an `offline` phase. No round is charged.
    pub fn absorb_offline(&self) {
        let mut st = self.state.lock().unwrap();
        let (tf, tm) = st.totals();
        let df = tf - st.f_calls;
        let dm = tm - st.matroid_calls;
        if df == 0 && dm == 0 {
            return;
        }
        st.f_calls = tf;
        st.matroid_calls = tm;
        let ph = st.phases.entry("offline".to_string()).or_default();
        ph.f_calls += df;
        ph.matroid_calls += dm;
    }

    pub fn snapshot(&self) -> MeterSnapshot {
        let st = self.state.lock().unwrap();
        MeterSnapshot {
            rounds: st.rounds,
            f_calls: st.f_calls,
            matroid_calls: st.matroid_calls,
            phases: st.phases.clone(),
        }
    }

    pub fn rounds(&self) -> u64 {
        self.state.lock().unwrap().rounds
    }

    /// Run one batch of `items` through `job`, metering it as a single round.
    ///
    /// An empty batch records nothing. A batch submitted while another batch
    /// is executing is rejected.
    pub fn record_batch<T, R, F>(&self, phase: &str, items: &[T], job: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> R + Sync,
    {
        self.record_batch_pair(phase, items, job, &[] as &[()], |_, _: &()| ())
            .map(|(a, _)| a)
    }

    /// Run two lanes of queries as one batch (one adaptive round).
    pub fn record_batch_pair<T1, R1, F1, T2, R2, F2>(
        &self,
        phase: &str,
        items1: &[T1],
        job1: F1,
        items2: &[T2],
        job2: F2,
    ) -> Result<(Vec<R1>, Vec<R2>)>
    where
        T1: Sync,
        R1: Send,
        F1: Fn(usize, &T1) -> R1 + Sync,
        T2: Sync,
        R2: Send,
        F2: Fn(usize, &T2) -> R2 + Sync,
    {
        if items1.is_empty() && items2.is_empty() {
            return Ok((Vec::new(), Vec::new()));
        }
        if self.in_batch.swap(true, Ordering::SeqCst) {
            return Err(Error::NestedBatch);
        }
        let guard = BatchGuard {
            flag: &self.in_batch,
        };

        let before = self.state.lock().unwrap().totals();
        let out = match &self.pool {
            Some(pool) => pool.install(|| {
                use rayon::prelude::*;
                let a: Vec<R1> = items1
                    .par_iter()
                    .enumerate()
                    .map(|(i, t)| job1(i, t))
                    .collect();
                let b: Vec<R2> = items2
                    .par_iter()
                    .enumerate()
                    .map(|(i, t)| job2(i, t))
                    .collect();
                (a, b)
            }),
            None => {
                let a = items1.iter().enumerate().map(|(i, t)| job1(i, t)).collect();
                let b = items2.iter().enumerate().map(|(i, t)| job2(i, t)).collect();
                (a, b)
            }
        };
        let mut st = self.state.lock().unwrap();
        let after = (
            st.f_sources.iter().map(|c| c.get()).sum::<u64>(),
            st.matroid_sources.iter().map(|c| c.get()).sum::<u64>(),
        );
        let df = after.0 - before.0;
        let dm = after.1 - before.1;
        st.rounds += 1;
        st.f_calls += df;
        st.matroid_calls += dm;
        let ph = st.phases.entry(phase.to_string()).or_default();
        ph.rounds += 1;
        ph.f_calls += df;
        ph.matroid_calls += dm;
        drop(st);
        drop(guard);
        Ok(out)
    }
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

struct BatchGuard<'a> {
    flag: &'a AtomicBool,
}

impl Drop for BatchGuard<'_> {
    fn drop(&mut self) {
        self.flag.store(false, Ordering::SeqCst);
    }
}
