//! Generator for the timed mutual-exclusion benchmark.
//!
//! Each of `n` identical threads runs the classic loop over a shared lock
//! variable `x` (zero means free, otherwise a thread id) with a counter `c`
//! of threads in the critical section:
//!
//! ```text
//! ncs -> a    observe x == 0          (entering a re-checks x == 0)
//! a   -> b    x := t                  within db_u of the observation
//! b   -> c    (mandatory delay)       between dc_l and dc_u after the write
//! c   -> a    retry when x != t, once x == 0 again
//! c   -> cs   enter when x == t, c := c + 1
//! cs  -> d
//! d   -> ncs  x := 0, c := c - 1
//! ```
//!
//! The blind write in `a -> b` is the algorithm's point: a thread that
//! observed a free lock commits to writing without re-checking. Waiting for
//! `x == 0` guards every transition *into* `a`, which is where the
//! observation lives once the write window is armed on entry.

use tdve_core::{Expr, LValue, Model, Process, TimeBound, TimedModel, Transition, VarDecl};
use thiserror::Error;

/// Thread count and the three timing constants, in time units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FischerParams {
    pub n: u32,
    /// Upper bound on the write after the observation.
    pub db_u: u32,
    /// Lower bound on the check after the write.
    pub dc_l: u32,
    /// Upper bound on the check after the write.
    pub dc_u: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FischerError {
    #[error("need at least 2 threads, got {0}")]
    TooFewThreads(u32),
    #[error("bounds must be at least 1")]
    ZeroBound,
    #[error("dc_l ({0}) must not exceed dc_u ({1})")]
    EmptyWindow(u32, u32),
}

impl FischerParams {
    pub fn new(n: u32, db_u: u32, dc_l: u32, dc_u: u32) -> Result<FischerParams, FischerError> {
        if n < 2 {
            return Err(FischerError::TooFewThreads(n));
        }
        if db_u == 0 || dc_l == 0 || dc_u == 0 {
            return Err(FischerError::ZeroBound);
        }
        if dc_l > dc_u {
            return Err(FischerError::EmptyWindow(dc_l, dc_u));
        }
        Ok(FischerParams {
            n,
            db_u,
            dc_l,
            dc_u,
        })
    }
}

/// Transition indices within each generated thread process.
pub mod step {
    /// `ncs -> a`, the observation.
    pub const ENTER: usize = 0;
    /// `a -> b`, the blind write (upper-bounded).
    pub const WRITE: usize = 1;
    /// `b -> c`, the mandatory delay (both bounds).
    pub const DELAY: usize = 2;
    /// `c -> a`, the retry.
    pub const RETRY: usize = 3;
    /// `c -> cs`, the entry into the critical section.
    pub const ENTER_CS: usize = 4;
    /// `cs -> d`.
    pub const LEAVE_CS: usize = 5;
    /// `d -> ncs`, the reset.
    pub const RESET: usize = 6;
}

pub fn gen_fischer(params: FischerParams) -> TimedModel {
    let FischerParams {
        n,
        db_u,
        dc_l,
        dc_u,
    } = params;
    let mut model = Model::empty();
    model.globals.push(VarDecl::scalar("x", 0, i64::from(n), 0));
    model.globals.push(VarDecl::scalar("c", 0, i64::from(n), 0));

    let mut tm = TimedModel::untimed(model);
    for t in 1..=n {
        let id = Expr::Int(i64::from(t));
        let locations: Vec<String> = ["ncs", "a", "b", "c", "cs", "d"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (ncs, a, b, c, cs, d) = (0, 1, 2, 3, 4, 5);
        let transitions = vec![
            // step::ENTER — wait until the lock is free
            Transition::new(ncs, a).with_guard(Expr::eq(Expr::var("x"), Expr::Int(0))),
            // step::WRITE — blind write of the own id
            Transition::new(a, b).with_effect(LValue::scalar("x"), id.clone()),
            // step::DELAY — no guard, no effect; timing only
            Transition::new(b, c),
            // step::RETRY — back to waiting once the lock is free again
            Transition::new(c, a).with_guard(Expr::and(
                Expr::ne(Expr::var("x"), id.clone()),
                Expr::eq(Expr::var("x"), Expr::Int(0)),
            )),
            // step::ENTER_CS
            Transition::new(c, cs)
                .with_guard(Expr::eq(Expr::var("x"), id.clone()))
                .with_effect(
                    LValue::scalar("c"),
                    Expr::bin(tdve_core::BinOp::Add, Expr::var("c"), Expr::Int(1)),
                ),
            // step::LEAVE_CS
            Transition::new(cs, d),
            // step::RESET
            Transition::new(d, ncs)
                .with_effect(LValue::scalar("x"), Expr::Int(0))
                .with_effect(
                    LValue::scalar("c"),
                    Expr::bin(tdve_core::BinOp::Sub, Expr::var("c"), Expr::Int(1)),
                ),
        ];
        let pi = tm.base.processes.len();
        tm.base.processes.push(Process {
            name: format!("P{t}"),
            locals: vec![],
            locations,
            initial: 0,
            transitions,
            accepting: Default::default(),
            span: None,
        });
        tm.bounds
            .insert((pi, step::WRITE), TimeBound::new(None, Some(db_u)));
        tm.bounds
            .insert((pi, step::DELAY), TimeBound::new(Some(dc_l), Some(dc_u)));
    }
    tm
}

/// `c >= 2`: more than one thread in the critical section.
pub fn mutual_exclusion_bad() -> Expr {
    Expr::bin(tdve_core::BinOp::Ge, Expr::var("c"), Expr::Int(2))
}
