//! Deduplicated exhaustive exploration.
//!
//! States are partitioned among workers by a hash of their canonical
//! encoding; each worker owns its partition's dedup set and forwards
//! cross-partition successors. Work proceeds in breadth-first rounds with a
//! barrier between producing and consuming, so termination is detected when
//! a whole round generates no new state. The returned graph is renumbered
//! into canonical (state-vector) order, which makes the result identical for
//! every worker count.

use crate::compile::CompiledModel;
use crate::graph::{peak_memory_bytes, ExplorationStats, Label, StateGraph};
use crate::ModelError;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, AtomicU8, AtomicUsize, Ordering};
use std::sync::{Barrier, Mutex};
use std::time::Instant;
use tdve_core::State;
use thiserror::Error;

#[derive(Debug, Clone, Copy)]
pub struct ExploreConfig {
    pub workers: usize,
    /// State budget standing in for a memory budget; exceeding it aborts
    /// with partial statistics.
    pub max_states: Option<usize>,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            workers: 1,
            max_states: None,
        }
    }
}

impl ExploreConfig {
    pub fn with_workers(workers: usize) -> ExploreConfig {
        ExploreConfig {
            workers: workers.max(1),
            max_states: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("state budget exceeded: {} states, {} transitions seen", stats.states, stats.transitions)]
    Budget { stats: ExplorationStats },
}

fn fnv1a(values: &[i32]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

fn owner(s: &State, workers: usize) -> usize {
    (fnv1a(&s.values) % workers as u64) as usize
}

const GID_SHIFT: u32 = 40;

fn gid(worker: usize, idx: u32) -> u64 {
    ((worker as u64) << GID_SHIFT) | u64::from(idx)
}

pub(crate) fn split_gid(g: u64) -> (usize, u32) {
    (
        (g >> GID_SHIFT) as usize,
        (g & ((1 << GID_SHIFT) - 1)) as u32,
    )
}

/// Message sent to the owner of a successor state.
type Msg = (State, u64, Label);

struct Shared<'a> {
    cm: &'a CompiledModel,
    workers: usize,
    barrier: Barrier,
    /// `outboxes[dest][src]`: written by `src`, drained by `dest`.
    outboxes: Vec<Vec<Mutex<Vec<Msg>>>>,
    new_counts: [AtomicU64; 2],
    /// 0 = run, 1 = model error, 2 = budget, 3 = goal reached (safety).
    abort: AtomicU8,
    error: Mutex<Option<ModelError>>,
    total_states: AtomicUsize,
    max_states: usize,
    deadlocks: AtomicU64,
    transitions: AtomicU64,
    /// Bad states found in the current round (safety mode).
    goal_hits: Mutex<Vec<u64>>,
}

impl<'a> Shared<'a> {
    fn new(cm: &'a CompiledModel, workers: usize, max_states: usize) -> Shared<'a> {
        Shared {
            cm,
            workers,
            barrier: Barrier::new(workers),
            outboxes: (0..workers)
                .map(|_| (0..workers).map(|_| Mutex::new(Vec::new())).collect())
                .collect(),
            new_counts: [AtomicU64::new(0), AtomicU64::new(0)],
            abort: AtomicU8::new(0),
            error: Mutex::new(None),
            total_states: AtomicUsize::new(0),
            max_states,
            deadlocks: AtomicU64::new(0),
            transitions: AtomicU64::new(0),
            goal_hits: Mutex::new(Vec::new()),
        }
    }

    fn fail(&self, e: ModelError) {
        let mut slot = self.error.lock().unwrap();
        if slot.is_none() {
            *slot = Some(e);
        }
        self.abort.store(1, Ordering::SeqCst);
    }
}

/// Per-worker result of a run.
struct WorkerOut {
    states: Vec<State>,
    /// Edge list `(src gid, label, dst gid)`; populated in explore mode.
    edges: Vec<(u64, Label, u64)>,
    /// First-discovery parent per state; populated in safety mode.
    parents: Vec<(u64, Label)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Graph,
    /// Stop at the first breadth-first level containing a goal state.
    Goal,
}

type GoalFn<'a> = &'a dyn Fn(&[i32]) -> Result<bool, ModelError>;
type SyncGoalFn<'a> = &'a (dyn Fn(&[i32]) -> Result<bool, ModelError> + Sync);

fn worker_loop(sh: &Shared, w: usize, init: &State, mode: Mode, goal: Option<GoalFn>) -> WorkerOut {
    let mut states: Vec<State> = Vec::new();
    let mut map: HashMap<State, u32> = HashMap::new();
    let mut edges: Vec<(u64, Label, u64)> = Vec::new();
    let mut parents: Vec<(u64, Label)> = Vec::new();
    let mut frontier: Vec<u32> = Vec::new();

    if owner(init, sh.workers) == w {
        states.push(init.clone());
        map.insert(init.clone(), 0);
        if mode == Mode::Goal {
            parents.push((
                u64::MAX,
                Label::Tick {
                    kind: crate::TickKind::Unit,
                    prop: None,
                },
            ));
        }
        frontier.push(0);
        sh.total_states.fetch_add(1, Ordering::Relaxed);
        if let Some(goal) = goal {
            match goal(&init.values) {
                Ok(true) => {
                    sh.goal_hits.lock().unwrap().push(gid(w, 0));
                }
                Ok(false) => {}
                Err(e) => sh.fail(e),
            }
        }
    }

    let mut round: usize = 0;
    loop {
        // Produce successors of the current frontier.
        if sh.abort.load(Ordering::SeqCst) == 0 {
            let mut batches: Vec<Vec<Msg>> = (0..sh.workers).map(|_| Vec::new()).collect();
            'frontier: for &idx in &frontier {
                let s = &states[idx as usize];
                let succ = match sh.cm.successors(s) {
                    Ok(v) => v,
                    Err(e) => {
                        sh.fail(e);
                        break 'frontier;
                    }
                };
                if succ.is_empty() {
                    sh.deadlocks.fetch_add(1, Ordering::Relaxed);
                }
                sh.transitions
                    .fetch_add(succ.len() as u64, Ordering::Relaxed);
                for (label, s2) in succ {
                    let o = owner(&s2, sh.workers);
                    batches[o].push((s2, gid(w, idx), label));
                }
            }
            for (o, batch) in batches.into_iter().enumerate() {
                if !batch.is_empty() {
                    sh.outboxes[o][w].lock().unwrap().extend(batch);
                }
            }
        }
        sh.barrier.wait();

        // Consume: dedup incoming states, record edges/parents.
        sh.new_counts[(round + 1) % 2].store(0, Ordering::SeqCst);
        frontier.clear();
        if sh.abort.load(Ordering::SeqCst) == 0 {
            let mut new_here: u64 = 0;
            for src_w in 0..sh.workers {
                let batch = std::mem::take(&mut *sh.outboxes[w][src_w].lock().unwrap());
                for (s2, src_gid, label) in batch {
                    match map.get(&s2) {
                        Some(&existing) => {
                            if mode == Mode::Graph {
                                edges.push((src_gid, label, gid(w, existing)));
                            }
                        }
                        None => {
                            let idx = states.len() as u32;
                            states.push(s2.clone());
                            map.insert(s2.clone(), idx);
                            if mode == Mode::Graph {
                                edges.push((src_gid, label, gid(w, idx)));
                            } else {
                                parents.push((src_gid, label));
                            }
                            frontier.push(idx);
                            new_here += 1;
                            if let Some(goal) = goal {
                                match goal(&s2.values) {
                                    Ok(true) => sh.goal_hits.lock().unwrap().push(gid(w, idx)),
                                    Ok(false) => {}
                                    Err(e) => sh.fail(e),
                                }
                            }
                        }
                    }
                }
            }
            if new_here > 0 {
                sh.new_counts[round % 2].fetch_add(new_here, Ordering::SeqCst);
                let total = sh
                    .total_states
                    .fetch_add(new_here as usize, Ordering::SeqCst)
                    + new_here as usize;
                if total > sh.max_states {
                    sh.abort.store(2, Ordering::SeqCst);
                }
            }
        }
        sh.barrier.wait();

        let stop = sh.abort.load(Ordering::SeqCst) != 0
            || sh.new_counts[round % 2].load(Ordering::SeqCst) == 0
            || (mode == Mode::Goal && !sh.goal_hits.lock().unwrap().is_empty());
        if stop {
            return WorkerOut {
                states,
                edges,
                parents,
            };
        }
        round += 1;
    }
}

fn run_workers(
    sh: &Shared<'_>,
    init: &State,
    mode: Mode,
    goal: Option<SyncGoalFn>,
) -> Vec<WorkerOut> {
    if sh.workers == 1 {
        return vec![worker_loop(sh, 0, init, mode, goal.map(|g| g as GoalFn))];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..sh.workers)
            .map(|w| {
                let init = init.clone();
                scope.spawn(move || worker_loop(sh, w, &init, mode, goal.map(|g| g as GoalFn)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

pub(crate) struct RawExploration {
    pub outs: Vec<WorkerOutPub>,
    pub stats: ExplorationStats,
    pub goal_hits: Vec<u64>,
}

pub(crate) struct WorkerOutPub {
    pub states: Vec<State>,
    pub edges: Vec<(u64, Label, u64)>,
    pub parents: Vec<(u64, Label)>,
}

pub(crate) fn run(
    cm: &CompiledModel,
    cfg: &ExploreConfig,
    mode_goal: Option<SyncGoalFn>,
) -> Result<RawExploration, ExploreError> {
    let start = Instant::now();
    let workers = cfg.workers.max(1);
    let sh = Shared::new(cm, workers, cfg.max_states.unwrap_or(usize::MAX));
    let init = cm.initial_state();
    let mode = if mode_goal.is_some() {
        Mode::Goal
    } else {
        Mode::Graph
    };
    let outs = run_workers(&sh, &init, mode, mode_goal);

    let stats = ExplorationStats {
        states: sh.total_states.load(Ordering::SeqCst) as u64,
        transitions: sh.transitions.load(Ordering::SeqCst),
        time_ms: start.elapsed().as_millis() as u64,
        mem_bytes: peak_memory_bytes(),
        deadlocks: sh.deadlocks.load(Ordering::SeqCst),
    };
    match sh.abort.load(Ordering::SeqCst) {
        1 => Err(ExploreError::Model(
            sh.error.lock().unwrap().take().unwrap(),
        )),
        2 => Err(ExploreError::Budget { stats }),
        _ => Ok(RawExploration {
            outs: outs
                .into_iter()
                .map(|o| WorkerOutPub {
                    states: o.states,
                    edges: o.edges,
                    parents: o.parents,
                })
                .collect(),
            stats,
            goal_hits: std::mem::take(&mut *sh.goal_hits.lock().unwrap()),
        }),
    }
}

/// Explore the full reachable graph.
pub fn explore(cm: &CompiledModel, cfg: &ExploreConfig) -> Result<StateGraph, ExploreError> {
    let raw = run(cm, cfg, None)?;
    let stats = raw.stats;

    // Canonical renumbering: sort every state by its vector.
    let mut order: Vec<(usize, u32)> = Vec::with_capacity(stats.states as usize);
    for (w, out) in raw.outs.iter().enumerate() {
        for idx in 0..out.states.len() {
            order.push((w, idx as u32));
        }
    }
    order.sort_unstable_by(|a, b| {
        raw.outs[a.0].states[a.1 as usize]
            .values
            .cmp(&raw.outs[b.0].states[b.1 as usize].values)
    });
    let mut rank: Vec<Vec<u32>> = raw
        .outs
        .iter()
        .map(|o| vec![0u32; o.states.len()])
        .collect();
    for (new_idx, &(w, idx)) in order.iter().enumerate() {
        rank[w][idx as usize] = new_idx as u32;
    }
    let remap = |g: u64| -> u32 {
        let (w, idx) = split_gid(g);
        rank[w][idx as usize]
    };

    let mut edges: Vec<(u32, Label, u32)> = Vec::with_capacity(stats.transitions as usize);
    for out in &raw.outs {
        for &(src, label, dst) in &out.edges {
            edges.push((remap(src), label, remap(dst)));
        }
    }
    edges.sort_unstable_by_key(|e| (e.0, e.1, e.2));

    let states: Vec<State> = order
        .iter()
        .map(|&(w, idx)| raw.outs[w].states[idx as usize].clone())
        .collect();
    let accepting: Vec<bool> = states.iter().map(|s| cm.is_accepting(s)).collect();
    let initial = remap(gid(owner(&cm.initial_state(), cfg.workers.max(1)), 0));

    let mut offsets: Vec<u64> = Vec::with_capacity(states.len() + 1);
    let mut targets: Vec<u32> = Vec::with_capacity(edges.len());
    let mut labels: Vec<Label> = Vec::with_capacity(edges.len());
    offsets.push(0);
    let mut e = 0usize;
    for i in 0..states.len() {
        while e < edges.len() && edges[e].0 == i as u32 {
            targets.push(edges[e].2);
            labels.push(edges[e].1);
            e += 1;
        }
        offsets.push(targets.len() as u64);
    }

    Ok(StateGraph {
        states,
        offsets,
        targets,
        labels,
        initial,
        accepting,
        stats,
    })
}
