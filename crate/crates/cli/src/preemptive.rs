//! Generator for the pre-emptive scheduling benchmark.
//!
//! Tasks with distinct priorities share one exclusive resource. Execution is
//! modeled unit by unit: a `[1, 1]`-bounded self-loop burns one time unit
//! per remaining work item, so the work already done survives deprivation in
//! the `remaining` counter and a resumed task continues where it stopped
//! rather than restarting.
//!
//! A higher-priority task deprives a lower one by overwriting the owner tag
//! `isROccupied`; the victim acknowledges by moving to its deprived state,
//! clearing the occupancy gate `inExec`, which the claimant needs free
//! before entering execution. The gate is what keeps "two tasks executing"
//! unreachable by construction.

use tdve_core::{Expr, LValue, Model, Process, TimeBound, TimedModel, Transition, VarDecl};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PreemptiveError {
    #[error("need at least 1 task")]
    NoTasks,
    #[error("every task needs at least 1 unit of work")]
    ZeroWork,
}

/// Location indices within each generated task process.
pub mod loc {
    pub const IDLE: usize = 0;
    pub const EXEC: usize = 1;
    pub const DEPRIVED: usize = 2;
    pub const NEXT: usize = 3;
}

/// Transition indices within each generated task process.
pub mod step {
    /// `s_i -> s_Exec`: acquire a free resource.
    pub const ACQUIRE: usize = 0;
    /// `s_Exec -> s_Exec`: burn one unit of work (bounded `[1, 1]`).
    pub const UNIT: usize = 1;
    /// `s_Exec -> s_Next`: all work done, release.
    pub const COMPLETE: usize = 2;
    /// `s_Exec -> s_Deprived`: acknowledge deprivation.
    pub const EVICTED: usize = 3;
    /// `s_Deprived -> s_Exec`: resume with the stored remaining work.
    pub const RESUME: usize = 4;
    /// `s_i -> s_Deprived`: deprive a lower-priority owner (tasks 2..).
    pub const CLAIM: usize = 5;
}

/// `exec_units[k]` is the work of task k+1; task tags double as priorities,
/// higher tag deprives lower.
pub fn gen_preemptive(exec_units: &[u32]) -> Result<TimedModel, PreemptiveError> {
    let n = exec_units.len();
    if n == 0 {
        return Err(PreemptiveError::NoTasks);
    }
    if exec_units.contains(&0) {
        return Err(PreemptiveError::ZeroWork);
    }

    let mut model = Model::empty();
    model
        .globals
        .push(VarDecl::scalar("isROccupied", 0, n as i64, 0));
    model.globals.push(VarDecl::scalar("inExec", 0, 1, 0));

    let mut tm = TimedModel::untimed(model);
    for (idx, &units) in exec_units.iter().enumerate() {
        let tag = Expr::Int(idx as i64 + 1);
        let locations: Vec<String> = ["s_i", "s_Exec", "s_Deprived", "s_Next"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let free = Expr::eq(Expr::var("isROccupied"), Expr::Int(0));
        let mine = Expr::eq(Expr::var("isROccupied"), tag.clone());
        let gate = Expr::eq(Expr::var("inExec"), Expr::Int(0));
        let own_or_free = Expr::or(free.clone(), mine.clone());
        let lower_owner = Expr::and(
            Expr::ne(Expr::var("isROccupied"), Expr::Int(0)),
            Expr::bin(tdve_core::BinOp::Lt, Expr::var("isROccupied"), tag.clone()),
        );

        let mut transitions = vec![
            // step::ACQUIRE
            Transition::new(loc::IDLE, loc::EXEC)
                .with_guard(Expr::and(free.clone(), gate.clone()))
                .with_effect(LValue::scalar("isROccupied"), tag.clone())
                .with_effect(LValue::scalar("inExec"), Expr::Int(1))
                .with_effect(LValue::scalar("remaining"), Expr::Int(i64::from(units))),
            // step::UNIT
            Transition::new(loc::EXEC, loc::EXEC)
                .with_guard(Expr::and(
                    Expr::bin(tdve_core::BinOp::Gt, Expr::var("remaining"), Expr::Int(0)),
                    mine.clone(),
                ))
                .with_effect(
                    LValue::scalar("remaining"),
                    Expr::bin(tdve_core::BinOp::Sub, Expr::var("remaining"), Expr::Int(1)),
                ),
            // step::COMPLETE
            Transition::new(loc::EXEC, loc::NEXT)
                .with_guard(Expr::and(
                    Expr::eq(Expr::var("remaining"), Expr::Int(0)),
                    mine.clone(),
                ))
                .with_effect(LValue::scalar("isROccupied"), Expr::Int(0))
                .with_effect(LValue::scalar("inExec"), Expr::Int(0)),
            // step::EVICTED
            Transition::new(loc::EXEC, loc::DEPRIVED)
                .with_guard(Expr::ne(Expr::var("isROccupied"), tag.clone()))
                .with_effect(LValue::scalar("inExec"), Expr::Int(0)),
            // step::RESUME — remaining is untouched, the stored work drives
            // the rest of the execution
            Transition::new(loc::DEPRIVED, loc::EXEC)
                .with_guard(Expr::and(own_or_free, gate))
                .with_effect(LValue::scalar("isROccupied"), tag.clone())
                .with_effect(LValue::scalar("inExec"), Expr::Int(1)),
        ];
        if idx > 0 {
            // step::CLAIM — only tasks that outrank someone can deprive
            transitions.push(
                Transition::new(loc::IDLE, loc::DEPRIVED)
                    .with_guard(lower_owner.clone())
                    .with_effect(LValue::scalar("isROccupied"), tag.clone()),
            );
            // a deprived claimant may deprive again if a lower task sneaked in
            transitions.push(
                Transition::new(loc::DEPRIVED, loc::DEPRIVED)
                    .with_guard(lower_owner)
                    .with_effect(LValue::scalar("isROccupied"), tag.clone()),
            );
        }

        let pi = tm.base.processes.len();
        tm.base.processes.push(Process {
            name: format!("T{}", idx + 1),
            locals: vec![VarDecl::scalar("remaining", 0, i64::from(units), 0)],
            locations,
            initial: loc::IDLE,
            transitions,
            accepting: Default::default(),
            span: None,
        });
        tm.bounds
            .insert((pi, step::UNIT), TimeBound::new(Some(1), Some(1)));
        tm.observe.insert((pi, step::UNIT));
    }
    Ok(tm)
}
