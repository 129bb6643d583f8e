//! Intermediate representation for guarded-command models with discrete-time
//! instrumentation, plus expression evaluation, state layout and validation.
//!
//! A [`Model`] is an untimed system of processes over ranged integer
//! variables. A [`TimedModel`] is a model whose transitions may carry
//! `(lower, upper)` time bounds; it is compiled into an untimed [`Model`]
//! with an explicit tick rule by the lowering crate. [`State`] is a flat
//! vector of variable values with a canonical byte encoding used for
//! deduplication during exploration.

pub mod eval;
pub mod expr;
pub mod model;
pub mod state;
pub mod validate;

pub use eval::{eval, eval_bool, eval_int, typecheck, EvalEnv, EvalError, Ty, Value};
pub use expr::{BinOp, Expr, LValue};
pub use model::{
    Channel, Model, Process, Span, Sync, SyncDir, TickSpec, TimeBound, TimedModel, Transition,
    VarDecl,
};
pub use state::{Layout, SlotRange, State};
pub use validate::{validate, validate_timed, Diagnostic};

/// Default sentinel for "no active bound". Lowering rejects any bound that
/// reaches it.
pub const DEFAULT_INFINITY: i64 = 1_000_000;

/// Default modulus for the `now` counter.
pub const DEFAULT_MAXIMAL: i64 = 1 << 30;
