//! Exploration engine: compiled successor semantics, deduplicated parallel
//! state-space exploration and safety checking.

mod compile;
mod explore;
mod graph;
mod safety;
mod successors;

pub use compile::{ceval, compile_global_expr, CExpr, CompileError, CompiledModel};
pub use explore::{explore, ExploreConfig, ExploreError};
pub use graph::{peak_memory_bytes, ExplorationStats, Label, StateGraph, TickKind, Trace, Verdict};
pub use safety::{check_safety, SafetyError};

use tdve_core::State;
use thiserror::Error;

/// Run-aborting modeling error hit while computing successors: an
/// assignment left its declared range, an array index escaped its bounds,
/// or a modulus was not positive. Wrapped with the offending transition and
/// state when it surfaced during a step.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("index {index} out of range for '{var}' of length {len}")]
    Index { var: String, index: i64, len: usize },
    #[error("assignment of {value} to '{var}' leaves its range [{lo}, {hi}]")]
    Range {
        var: String,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("modulus must be positive, got {0}")]
    Modulus(i64),
    #[error("{source} in {process}, transition {transition}, at state [{state}]")]
    InStep {
        #[source]
        source: Box<ModelError>,
        process: String,
        transition: usize,
        state: String,
    },
}

impl ModelError {
    pub(crate) fn in_transition(
        self,
        cm: &CompiledModel,
        pi: usize,
        ti: usize,
        state: &State,
    ) -> ModelError {
        match self {
            err @ ModelError::InStep { .. } => err,
            err => ModelError::InStep {
                source: Box::new(err),
                process: cm.procs[pi].name.clone(),
                transition: ti,
                state: cm.display_state(state).to_string(),
            },
        }
    }
}
