//! Search for `n`-powerfully unitarily `t`-perfect elements.
//!
//! Work is cut into tasks: norm intervals in elements mode, ranges of first
//! slots in signatures mode. Tasks run on a rayon pool, finished tasks are
//! appended to the checkpoint under one lock, and the final record list is
//! sorted by `(norm, a, b)` so output does not depend on scheduling.

pub mod checkpoint;
pub mod config;
pub mod elements;
pub mod record;
pub mod shape;
pub mod signatures;

use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use checkpoint::{Checkpoint, CheckpointHeader, TaskResult, CHECKPOINT_VERSION};
pub use config::{SearchConfig, SearchMode, DEFAULT_CHUNK, MAX_NORM_CAP};
pub use elements::sector_elements;
pub use record::SearchRecord;
pub use shape::{components_hit, Signature, SlotShape};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub records: Vec<SearchRecord>,
    /// Search nodes (elements or signatures) examined, summed over tasks.
    pub visited: u64,
    pub tasks: usize,
    /// False when `stop_after_tasks` left tasks unfinished.
    pub complete: bool,
}

impl SearchOutcome {
    pub fn hits(&self) -> impl Iterator<Item = &SearchRecord> {
        self.records.iter().filter(|r| r.hit)
    }
}

enum Engine {
    Elements(shape::SpfSieve),
    Signatures(signatures::Plan),
}

impl Engine {
    fn new(cfg: &SearchConfig) -> Self {
        match cfg.mode {
            SearchMode::Elements => Engine::Elements(shape::SpfSieve::new(cfg.max_norm)),
            SearchMode::Signatures => Engine::Signatures(signatures::Plan::new(cfg)),
        }
    }

    fn task_count(&self, cfg: &SearchConfig) -> usize {
        match self {
            Engine::Elements(_) => elements::task_count(cfg),
            Engine::Signatures(plan) => plan.task_count(),
        }
    }

    fn run(&self, cfg: &SearchConfig, k: usize) -> Result<TaskResult> {
        match self {
            Engine::Elements(sieve) => elements::run_task(cfg, k, sieve),
            Engine::Signatures(plan) => signatures::run_task(cfg, plan, k),
        }
    }
}

fn header(cfg: &SearchConfig, total_tasks: usize) -> CheckpointHeader {
    CheckpointHeader {
        checkpoint_version: CHECKPOINT_VERSION,
        mode: cfg.mode.as_str().into(),
        ring: cfg.ring.d(),
        power: cfg.n,
        target: cfg.t.to_string(),
        max_norm: cfg.max_norm,
        chunk: cfg.chunk,
        verbose: cfg.verbose,
        total_tasks,
    }
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let engine = Engine::new(cfg);
    let total = engine.task_count(cfg);
    let head = header(cfg, total);

    let state = match &cfg.checkpoint {
        Some(path) => match Checkpoint::load(path)? {
            Some(ck) if ck.header != head => {
                return Err(Error::CheckpointMismatch(format!(
                    "{} was written for a different search ({})",
                    path.display(),
                    serde_json::to_string(&ck.header).unwrap_or_default()
                )))
            }
            Some(ck) => ck,
            None => Checkpoint::new(head),
        },
        None => Checkpoint::new(head),
    };

    let mut pending: Vec<usize> = (0..total).filter(|k| !state.done.contains_key(k)).collect();
    if let Some(limit) = cfg.stop_after_tasks {
        pending.truncate(limit);
    }
    let state = Mutex::new(state);

    let finish = |k: usize| -> Result<()> {
        let result = engine.run(cfg, k)?;
        let mut ck = state.lock().map_err(|_| Error::Internal("checkpoint lock poisoned".into()))?;
        ck.done.insert(k, result);
        match &cfg.checkpoint {
            Some(path) => ck.save(path),
            None => Ok(()),
        }
    };
    if cfg.jobs == 1 {
        pending.iter().try_for_each(|&k| finish(k))?;
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(|| pending.par_iter().try_for_each(|&k| finish(k)))?;
    }

    let state = state.into_inner().map_err(|_| Error::Internal("checkpoint lock poisoned".into()))?;
    let complete = state.done.len() == total;
    let mut visited = 0;
    let mut records = Vec::new();
    for r in state.done.into_values() {
        visited += r.visited;
        records.extend(r.records);
    }
    records.sort_by(|x, y| x.z.cmp_norm_lex(&y.z));
    Ok(SearchOutcome {
        records,
        visited,
        tasks: total,
        complete,
    })
}
