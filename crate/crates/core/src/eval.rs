//! Reference expression evaluator over a model's state layout.
//!
//! Name resolution follows scope order: process locals shadow globals,
//! globals shadow constants. This evaluator is the semantic reference; the
//! exploration engine compiles expressions to slot-resolved form but must
//! agree with it on every input.

use crate::expr::{BinOp, Expr};
use crate::model::Model;
use crate::state::{Layout, SlotRange, State};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl Value {
    pub fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(v),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Int(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ty {
    Int,
    Bool,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unresolved identifier '{0}'")]
    Unresolved(String),
    #[error("'{0}' is not an array")]
    NotAnArray(String),
    #[error("'{0}' is an array and needs an index")]
    MissingIndex(String),
    #[error("index {index} out of range for '{var}' of length {len}")]
    IndexOutOfRange { var: String, index: i64, len: usize },
    #[error("type error: expected {expected:?}")]
    Type { expected: Ty },
    #[error("modulus must be positive, got {0}")]
    Modulus(i64),
    #[error("MIN_ACTIVE_TIMER outside a tick context")]
    MinActiveTimerContext,
    #[error("MIN_ACTIVE_TIMER with no active timer")]
    NoActiveTimer,
}

/// Resolution scope: a model, its layout and an optional process index for
/// local variables. `timer` is set only when evaluating inside the tick rule
/// of a leaping-mode model.
pub struct EvalEnv<'a> {
    pub model: &'a Model,
    pub layout: &'a Layout,
    pub process: Option<usize>,
    pub timer: Option<(SlotRange, i64)>,
}

impl<'a> EvalEnv<'a> {
    pub fn global(model: &'a Model, layout: &'a Layout) -> EvalEnv<'a> {
        EvalEnv {
            model,
            layout,
            process: None,
            timer: None,
        }
    }

    pub fn in_process(model: &'a Model, layout: &'a Layout, process: usize) -> EvalEnv<'a> {
        EvalEnv {
            model,
            layout,
            process: Some(process),
            timer: None,
        }
    }

    /// Resolve a name to slots, or a constant value.
    pub fn resolve(&self, name: &str) -> Option<Resolved> {
        if let Some(p) = self.process {
            if let Some((range, lo, hi)) = self.layout.local_slots(p, name) {
                let is_array = self.model.processes[p]
                    .locals
                    .iter()
                    .find(|v| v.name == name)
                    .and_then(|v| v.len)
                    .is_some();
                return Some(Resolved::Slots {
                    range,
                    lo,
                    hi,
                    is_array,
                });
            }
        }
        if let Some((range, lo, hi)) = self.layout.global_slots(name) {
            let is_array = self.model.global(name).and_then(|v| v.len).is_some();
            return Some(Resolved::Slots {
                range,
                lo,
                hi,
                is_array,
            });
        }
        self.model.constant(name).map(Resolved::Const)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Resolved {
    Const(i64),
    Slots {
        range: SlotRange,
        lo: i64,
        hi: i64,
        is_array: bool,
    },
}

/// Evaluate an expression against a state. Deterministic; the result depends
/// only on the variables syntactically reachable from the expression.
pub fn eval(expr: &Expr, state: &State, env: &EvalEnv) -> Result<Value, EvalError> {
    match expr {
        Expr::Int(v) => Ok(Value::Int(*v)),
        Expr::Bool(b) => Ok(Value::Bool(*b)),
        Expr::Var(name) => match env.resolve(name) {
            None => Err(EvalError::Unresolved(name.clone())),
            Some(Resolved::Const(v)) => Ok(Value::Int(v)),
            Some(Resolved::Slots {
                range, is_array, ..
            }) => {
                if is_array {
                    Err(EvalError::MissingIndex(name.clone()))
                } else {
                    Ok(Value::Int(state.values[range.start] as i64))
                }
            }
        },
        Expr::Index(name, idx) => {
            let i = eval_int(idx, state, env)?;
            match env.resolve(name) {
                None => Err(EvalError::Unresolved(name.clone())),
                Some(Resolved::Const(_)) => Err(EvalError::NotAnArray(name.clone())),
                Some(Resolved::Slots {
                    range, is_array, ..
                }) => {
                    if !is_array {
                        return Err(EvalError::NotAnArray(name.clone()));
                    }
                    if i < 0 || i as usize >= range.len {
                        return Err(EvalError::IndexOutOfRange {
                            var: name.clone(),
                            index: i,
                            len: range.len,
                        });
                    }
                    Ok(Value::Int(state.values[range.start + i as usize] as i64))
                }
            }
        }
        Expr::Neg(e) => Ok(Value::Int(-eval_int(e, state, env)?)),
        Expr::Not(e) => Ok(Value::Bool(!eval_bool(e, state, env)?)),
        Expr::Bin(op, l, r) => match op {
            BinOp::Add => Ok(Value::Int(
                eval_int(l, state, env)? + eval_int(r, state, env)?,
            )),
            BinOp::Sub => Ok(Value::Int(
                eval_int(l, state, env)? - eval_int(r, state, env)?,
            )),
            BinOp::Mul => Ok(Value::Int(
                eval_int(l, state, env)? * eval_int(r, state, env)?,
            )),
            BinOp::Mod => {
                let a = eval_int(l, state, env)?;
                let m = eval_int(r, state, env)?;
                if m <= 0 {
                    return Err(EvalError::Modulus(m));
                }
                Ok(Value::Int(a.rem_euclid(m)))
            }
            BinOp::Eq => Ok(Value::Bool(
                eval_int(l, state, env)? == eval_int(r, state, env)?,
            )),
            BinOp::Ne => Ok(Value::Bool(
                eval_int(l, state, env)? != eval_int(r, state, env)?,
            )),
            BinOp::Lt => Ok(Value::Bool(
                eval_int(l, state, env)? < eval_int(r, state, env)?,
            )),
            BinOp::Le => Ok(Value::Bool(
                eval_int(l, state, env)? <= eval_int(r, state, env)?,
            )),
            BinOp::Gt => Ok(Value::Bool(
                eval_int(l, state, env)? > eval_int(r, state, env)?,
            )),
            BinOp::Ge => Ok(Value::Bool(
                eval_int(l, state, env)? >= eval_int(r, state, env)?,
            )),
            BinOp::And => Ok(Value::Bool(
                eval_bool(l, state, env)? && eval_bool(r, state, env)?,
            )),
            BinOp::Or => Ok(Value::Bool(
                eval_bool(l, state, env)? || eval_bool(r, state, env)?,
            )),
        },
        Expr::MinActiveTimer => {
            let (range, infinity) = env.timer.ok_or(EvalError::MinActiveTimerContext)?;
            let min = range
                .slots()
                .map(|s| state.values[s] as i64)
                .filter(|&v| v != infinity)
                .min();
            min.map(Value::Int).ok_or(EvalError::NoActiveTimer)
        }
    }
}

pub fn eval_int(expr: &Expr, state: &State, env: &EvalEnv) -> Result<i64, EvalError> {
    eval(expr, state, env)?
        .as_int()
        .ok_or(EvalError::Type { expected: Ty::Int })
}

pub fn eval_bool(expr: &Expr, state: &State, env: &EvalEnv) -> Result<bool, EvalError> {
    eval(expr, state, env)?
        .as_bool()
        .ok_or(EvalError::Type { expected: Ty::Bool })
}

/// Static type of an expression under an environment. Comparisons and
/// arithmetic are integer-only; `&&`, `||`, `!` are boolean-only.
pub fn typecheck(expr: &Expr, env: &EvalEnv) -> Result<Ty, EvalError> {
    match expr {
        Expr::Int(_) => Ok(Ty::Int),
        Expr::Bool(_) => Ok(Ty::Bool),
        Expr::Var(name) => match env.resolve(name) {
            None => Err(EvalError::Unresolved(name.clone())),
            Some(Resolved::Const(_)) => Ok(Ty::Int),
            Some(Resolved::Slots { is_array, .. }) => {
                if is_array {
                    Err(EvalError::MissingIndex(name.clone()))
                } else {
                    Ok(Ty::Int)
                }
            }
        },
        Expr::Index(name, idx) => {
            expect(idx, Ty::Int, env)?;
            match env.resolve(name) {
                None => Err(EvalError::Unresolved(name.clone())),
                Some(Resolved::Const(_)) => Err(EvalError::NotAnArray(name.clone())),
                Some(Resolved::Slots { is_array, .. }) => {
                    if is_array {
                        Ok(Ty::Int)
                    } else {
                        Err(EvalError::NotAnArray(name.clone()))
                    }
                }
            }
        }
        Expr::Neg(e) => {
            expect(e, Ty::Int, env)?;
            Ok(Ty::Int)
        }
        Expr::Not(e) => {
            expect(e, Ty::Bool, env)?;
            Ok(Ty::Bool)
        }
        Expr::Bin(op, l, r) => match op {
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Mod => {
                expect(l, Ty::Int, env)?;
                expect(r, Ty::Int, env)?;
                Ok(Ty::Int)
            }
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                expect(l, Ty::Int, env)?;
                expect(r, Ty::Int, env)?;
                Ok(Ty::Bool)
            }
            BinOp::And | BinOp::Or => {
                expect(l, Ty::Bool, env)?;
                expect(r, Ty::Bool, env)?;
                Ok(Ty::Bool)
            }
        },
        Expr::MinActiveTimer => Ok(Ty::Int),
    }
}

fn expect(expr: &Expr, ty: Ty, env: &EvalEnv) -> Result<(), EvalError> {
    let got = typecheck(expr, env)?;
    if got == ty {
        Ok(())
    } else {
        Err(EvalError::Type { expected: ty })
    }
}
