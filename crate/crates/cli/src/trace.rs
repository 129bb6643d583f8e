//! Counterexample trace formatting and replay.
//!
//! One line per step: `#k <canonical state text> --(<label>)-->`, the final
//! state bare. Lasso witnesses close with a comment naming the step the
//! cycle returns to.

use tdve_engine::{CompiledModel, Trace};

pub fn format_trace(cm: &CompiledModel, trace: &Trace) -> String {
    let mut out = String::new();
    for (k, (state, label)) in trace.steps.iter().enumerate() {
        out.push_str(&format!("#{k} {}", cm.display_state(state)));
        if let Some(label) = label {
            out.push_str(&format!(" --({})-->", label.display(cm)));
        }
        out.push('\n');
    }
    if let Some(k) = trace.cycle_start {
        out.push_str(&format!("# closes the cycle at #{k}\n"));
    }
    out
}

/// Check that a trace replays: it starts at the initial state, every step
/// is a labeled successor of its predecessor, and a lasso's last state
/// matches its loop entry.
pub fn replay(cm: &CompiledModel, trace: &Trace) -> Result<(), String> {
    let steps = &trace.steps;
    if steps.is_empty() {
        return Err("empty trace".into());
    }
    if steps[0].0 != cm.initial_state() {
        return Err("trace does not start at the initial state".into());
    }
    for i in 0..steps.len() - 1 {
        let (state, label) = &steps[i];
        let Some(label) = label else {
            return Err(format!("step #{i} lacks a label"));
        };
        let succ = cm
            .successors(state)
            .map_err(|e| format!("step #{i}: {e}"))?;
        match succ.iter().find(|(l, _)| l == label) {
            None => return Err(format!("step #{i}: label not enabled")),
            Some((_, next)) if *next != steps[i + 1].0 => {
                return Err(format!("step #{i}: successor mismatch"))
            }
            Some(_) => {}
        }
    }
    if let Some(k) = trace.cycle_start {
        if steps.last().unwrap().0 != steps[k].0 {
            return Err(format!("lasso does not close at step #{k}"));
        }
    }
    Ok(())
}
