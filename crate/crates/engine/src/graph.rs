//! Explored state graphs and verdicts.

use crate::compile::CompiledModel;
use tdve_core::State;

/// Tick flavor recorded on edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TickKind {
    /// Unit step of the count-down pair rule.
    Unit,
    /// Leap by the minimum active timer.
    Leap,
    /// Unit step while a signal is raised.
    Step,
}

/// Edge label: which transition(s) produced a successor. `prop` carries the
/// property process transition taken in the same step, when one exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Local {
        process: u16,
        transition: u16,
        prop: Option<u16>,
    },
    Rendezvous {
        sender: (u16, u16),
        receiver: (u16, u16),
        prop: Option<u16>,
    },
    Tick {
        kind: TickKind,
        prop: Option<u16>,
    },
}

impl Label {
    pub fn with_prop(self, pti: u16) -> Label {
        match self {
            Label::Local {
                process,
                transition,
                ..
            } => Label::Local {
                process,
                transition,
                prop: Some(pti),
            },
            Label::Rendezvous {
                sender, receiver, ..
            } => Label::Rendezvous {
                sender,
                receiver,
                prop: Some(pti),
            },
            Label::Tick { kind, .. } => Label::Tick {
                kind,
                prop: Some(pti),
            },
        }
    }

    pub fn prop(&self) -> Option<u16> {
        match self {
            Label::Local { prop, .. }
            | Label::Rendezvous { prop, .. }
            | Label::Tick { prop, .. } => *prop,
        }
    }

    /// Rendering used in trace files: `process.transition`, `s!r` for
    /// rendezvous, `tick.<kind>`; `/claim.k` appends the property move.
    pub fn display(&self, cm: &CompiledModel) -> String {
        let core = match self {
            Label::Local {
                process,
                transition,
                ..
            } => {
                format!("{}.{}", cm.procs[*process as usize].name, transition)
            }
            Label::Rendezvous {
                sender, receiver, ..
            } => format!(
                "{}.{}!{}.{}",
                cm.procs[sender.0 as usize].name,
                sender.1,
                cm.procs[receiver.0 as usize].name,
                receiver.1
            ),
            Label::Tick { kind, .. } => match kind {
                TickKind::Unit => "tick.unit".to_string(),
                TickKind::Leap => "tick.leap".to_string(),
                TickKind::Step => "tick.step".to_string(),
            },
        };
        match (self.prop(), cm.property) {
            (Some(pti), Some(pi)) => format!("{core}/{}.{}", cm.procs[pi].name, pti),
            _ => core,
        }
    }
}

/// Exploration statistics. Memory is best-effort peak resident size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExplorationStats {
    pub states: u64,
    pub transitions: u64,
    pub time_ms: u64,
    pub mem_bytes: u64,
    pub deadlocks: u64,
}

/// Fully explored reachable graph in canonical order: states are sorted by
/// their byte encoding, so the graph is identical whatever the worker count.
pub struct StateGraph {
    pub states: Vec<State>,
    /// CSR adjacency: edges of state `i` are `targets[offsets[i]..offsets[i+1]]`.
    pub offsets: Vec<u64>,
    pub targets: Vec<u32>,
    pub labels: Vec<Label>,
    pub initial: u32,
    /// Per state: property process in an accepting location.
    pub accepting: Vec<bool>,
    pub stats: ExplorationStats,
}

impl StateGraph {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn edges_of(&self, i: u32) -> impl Iterator<Item = (u32, Label)> + '_ {
        let lo = self.offsets[i as usize] as usize;
        let hi = self.offsets[i as usize + 1] as usize;
        self.targets[lo..hi]
            .iter()
            .copied()
            .zip(self.labels[lo..hi].iter().copied())
    }

    pub fn successors_of(&self, i: u32) -> &[u32] {
        let lo = self.offsets[i as usize] as usize;
        let hi = self.offsets[i as usize + 1] as usize;
        &self.targets[lo..hi]
    }
}

/// Counterexample path: states with the labels of the edges between them.
/// `cycle_start` marks the lasso entry point for liveness witnesses.
#[derive(Debug, Clone)]
pub struct Trace {
    pub steps: Vec<(State, Option<Label>)>,
    pub cycle_start: Option<usize>,
}

/// Outcome of a check, with the trace present exactly when violated.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub holds: bool,
    pub trace: Option<Trace>,
    pub stats: ExplorationStats,
}

/// Best-effort peak resident memory of this process, in bytes. Falls back
/// to the current resident size where the kernel does not report a peak.
pub fn peak_memory_bytes() -> u64 {
    let Ok(status) = std::fs::read_to_string("/proc/self/status") else {
        return 0;
    };
    for key in ["VmHWM:", "VmRSS:"] {
        for line in status.lines() {
            if let Some(rest) = line.strip_prefix(key) {
                let kb: u64 = rest
                    .trim()
                    .trim_end_matches("kB")
                    .trim()
                    .parse()
                    .unwrap_or(0);
                if kb > 0 {
                    return kb * 1024;
                }
            }
        }
    }
    0
}
