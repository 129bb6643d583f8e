//! Safety checking: unreachability of a boolean predicate over globals,
//! with shortest-by-construction counterexample traces.

use crate::compile::{ceval, compile_global_expr, CompiledModel};
use crate::explore::{run, split_gid, ExploreConfig, ExploreError};
use crate::graph::{Trace, Verdict};
use crate::{Label, ModelError};
use tdve_core::{typecheck, EvalEnv, Expr, State, Ty};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SafetyError {
    #[error("bad-state predicate: {0}")]
    Predicate(String),
    #[error(transparent)]
    Explore(#[from] ExploreError),
}

pub(crate) fn check_predicate(cm: &CompiledModel, bad: &Expr) -> Result<(), SafetyError> {
    if bad.contains_min_active_timer() {
        return Err(SafetyError::Predicate(
            "MIN_ACTIVE_TIMER is only legal inside the tick rule".into(),
        ));
    }
    let env = EvalEnv::global(&cm.model, &cm.layout);
    match typecheck(bad, &env) {
        Ok(Ty::Bool) => Ok(()),
        Ok(Ty::Int) => Err(SafetyError::Predicate(
            "expected a boolean expression".into(),
        )),
        Err(e) => Err(SafetyError::Predicate(e.to_string())),
    }
}

/// `holds` iff no reachable state satisfies `bad`. A violation carries a
/// breadth-first (hence shortest) trace from the initial state to a bad
/// state; among the bad states of the violating level the one with the
/// least canonical encoding is reported.
pub fn check_safety(
    cm: &CompiledModel,
    bad: &Expr,
    cfg: &ExploreConfig,
) -> Result<Verdict, SafetyError> {
    check_predicate(cm, bad)?;
    let pred = compile_global_expr(cm, bad);
    let goal = move |values: &[i32]| -> Result<bool, ModelError> { Ok(ceval(&pred, values)? != 0) };
    let raw = run(cm, cfg, Some(&goal))?;

    if raw.goal_hits.is_empty() {
        return Ok(Verdict {
            holds: true,
            trace: None,
            stats: raw.stats,
        });
    }

    let state_of = |g: u64| -> &State {
        let (w, idx) = split_gid(g);
        &raw.outs[w].states[idx as usize]
    };
    let &target = raw
        .goal_hits
        .iter()
        .min_by(|&&a, &&b| state_of(a).values.cmp(&state_of(b).values))
        .unwrap();

    // Walk parent pointers back to the initial state. The label stored with
    // a state is the label of the edge that first discovered it.
    let mut rev: Vec<(State, Option<Label>)> = Vec::new();
    let mut cur = target;
    loop {
        let (w, idx) = split_gid(cur);
        let (parent, label) = raw.outs[w].parents[idx as usize];
        let arrived_via = (parent != u64::MAX).then_some(label);
        rev.push((raw.outs[w].states[idx as usize].clone(), arrived_via));
        if parent == u64::MAX {
            break;
        }
        cur = parent;
    }
    rev.reverse();
    // Re-attach labels to the state they leave rather than the one they enter.
    let steps: Vec<(State, Option<Label>)> = (0..rev.len())
        .map(|i| {
            let out_label = rev.get(i + 1).and_then(|(_, l)| *l);
            (rev[i].0.clone(), out_label)
        })
        .collect();
    Ok(Verdict {
        holds: false,
        trace: Some(Trace {
            steps,
            cycle_start: None,
        }),
        stats: raw.stats,
    })
}
