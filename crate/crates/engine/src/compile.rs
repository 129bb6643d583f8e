//! Slot-resolved form of a model for fast successor computation.
//!
//! `tdve_core::eval` is the semantic reference; this compiler resolves every
//! name to a state-vector slot once so exploration avoids per-step lookups.
//! The two evaluators must agree on every expression; the test suite checks
//! the engine against a naive interpreter built directly on the core
//! evaluator.

use crate::ModelError;
use std::sync::Arc;
use tdve_core::{validate, BinOp, Diagnostic, Expr, LValue, Layout, Model, State, Sync, TickSpec};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("model is invalid:\n{}", .0.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
}

/// Compiled expression over state slots. Booleans are 0/1 at this level;
/// typing was established during validation.
#[derive(Debug, Clone)]
pub enum CExpr {
    Int(i64),
    Slot(u32),
    Indexed {
        base: u32,
        len: u32,
        name: Arc<str>,
        idx: Box<CExpr>,
    },
    Neg(Box<CExpr>),
    Not(Box<CExpr>),
    Bin(BinOp, Box<CExpr>, Box<CExpr>),
}

/// Compiled assignment target with its range for write checking.
#[derive(Debug, Clone)]
pub struct CTarget {
    pub base: u32,
    pub len: u32,
    pub name: Arc<str>,
    pub lo: i64,
    pub hi: i64,
    pub idx: Option<CExpr>,
}

#[derive(Debug, Clone)]
pub struct CEffect {
    pub target: CTarget,
    pub value: CExpr,
}

#[derive(Debug, Clone)]
pub enum CSync {
    Send { chan: u32, payload: Option<CExpr> },
    Recv { chan: u32, target: Option<CTarget> },
}

#[derive(Debug, Clone)]
pub struct CTrans {
    pub src: u16,
    pub dst: u16,
    pub guard: Option<CExpr>,
    pub sync: Option<CSync>,
    pub effects: Vec<CEffect>,
}

#[derive(Debug, Clone)]
pub struct CProc {
    pub name: String,
    pub loc_slot: u32,
    /// Transition indices grouped by source location.
    pub by_src: Vec<Vec<u16>>,
    pub transitions: Vec<CTrans>,
}

/// Native tick rule with resolved slots.
#[derive(Debug, Clone)]
pub enum CTick {
    Ledm {
        ub: u32,
        lb: u32,
        n: u32,
        now: Option<u32>,
        infinity: i64,
        maximal: i64,
    },
    Eedm {
        timer: u32,
        signal: Option<u32>,
        n: u32,
        now: Option<u32>,
        infinity: i64,
        maximal: i64,
    },
}

pub struct CompiledModel {
    pub model: Model,
    pub layout: Layout,
    pub procs: Vec<CProc>,
    pub property: Option<usize>,
    /// Accepting flags by location of the property process.
    pub accepting_locs: Vec<bool>,
    pub tick: Option<CTick>,
    pub channel_arity: Vec<u32>,
}

impl CompiledModel {
    /// Validate and compile. Rejects models with any diagnostic.
    pub fn compile(model: &Model) -> Result<CompiledModel, CompileError> {
        let diags = validate(model);
        if !diags.is_empty() {
            return Err(CompileError::Invalid(diags));
        }
        let layout = Layout::new(model);
        let mut procs = Vec::with_capacity(model.processes.len());
        for (pi, p) in model.processes.iter().enumerate() {
            let mut ctx = Resolver {
                model,
                layout: &layout,
                process: Some(pi),
            };
            let mut transitions = Vec::with_capacity(p.transitions.len());
            for t in &p.transitions {
                transitions.push(CTrans {
                    src: t.src as u16,
                    dst: t.dst as u16,
                    guard: t.guard.as_ref().map(|g| ctx.expr(g)),
                    sync: t.sync.as_ref().map(|s| match s {
                        Sync::Send { channel, payload } => CSync::Send {
                            chan: model.channel_index(channel).unwrap() as u32,
                            payload: payload.as_ref().map(|e| ctx.expr(e)),
                        },
                        Sync::Recv { channel, target } => CSync::Recv {
                            chan: model.channel_index(channel).unwrap() as u32,
                            target: target.as_ref().map(|lv| ctx.target(lv)),
                        },
                    }),
                    effects: t
                        .effects
                        .iter()
                        .map(|(lv, e)| CEffect {
                            target: ctx.target(lv),
                            value: ctx.expr(e),
                        })
                        .collect(),
                });
            }
            let mut by_src = vec![Vec::new(); p.locations.len()];
            for (ti, t) in p.transitions.iter().enumerate() {
                by_src[t.src].push(ti as u16);
            }
            procs.push(CProc {
                name: p.name.clone(),
                loc_slot: layout.location_slot(pi) as u32,
                by_src,
                transitions,
            });
        }
        let accepting_locs = match model.property {
            Some(pi) => {
                let p = &model.processes[pi];
                (0..p.locations.len())
                    .map(|l| p.accepting.contains(&l))
                    .collect()
            }
            None => Vec::new(),
        };
        let tick = model.tick.as_ref().map(|t| match t {
            TickSpec::Ledm {
                ubtimer,
                lbtimer,
                now,
                infinity,
                maximal,
            } => CTick::Ledm {
                ub: layout.global_slots(ubtimer).unwrap().0.start as u32,
                lb: layout.global_slots(lbtimer).unwrap().0.start as u32,
                n: model.processes.len() as u32,
                now: now
                    .as_ref()
                    .map(|n| layout.global_slots(n).unwrap().0.start as u32),
                infinity: *infinity,
                maximal: *maximal,
            },
            TickSpec::Eedm {
                timer,
                signal,
                now,
                infinity,
                maximal,
            } => CTick::Eedm {
                timer: layout.global_slots(timer).unwrap().0.start as u32,
                signal: signal
                    .as_ref()
                    .map(|s| layout.global_slots(s).unwrap().0.start as u32),
                n: model.processes.len() as u32,
                now: now
                    .as_ref()
                    .map(|n| layout.global_slots(n).unwrap().0.start as u32),
                infinity: *infinity,
                maximal: *maximal,
            },
        });
        Ok(CompiledModel {
            model: model.clone(),
            layout,
            procs,
            property: model.property,
            accepting_locs,
            tick,
            channel_arity: model.channels.iter().map(|c| c.arity).collect(),
        })
    }

    pub fn initial_state(&self) -> State {
        self.layout.initial_state(&self.model)
    }

    /// True when the property process (if any) is in an accepting location.
    pub fn is_accepting(&self, s: &State) -> bool {
        match self.property {
            None => false,
            Some(pi) => {
                let loc = s.values[self.procs[pi].loc_slot as usize] as usize;
                self.accepting_locs.get(loc).copied().unwrap_or(false)
            }
        }
    }

    pub fn display_state<'a>(&'a self, s: &'a State) -> tdve_core::state::StateDisplay<'a> {
        self.layout.display(s)
    }
}

/// Compile an expression over globals only (safety predicates, property
/// guards checked against the shared state).
pub fn compile_global_expr(cm: &CompiledModel, e: &Expr) -> CExpr {
    let mut ctx = Resolver {
        model: &cm.model,
        layout: &cm.layout,
        process: None,
    };
    ctx.expr(e)
}

struct Resolver<'a> {
    model: &'a Model,
    layout: &'a Layout,
    process: Option<usize>,
}

impl Resolver<'_> {
    fn lookup(&self, name: &str) -> (tdve_core::SlotRange, i64, i64) {
        if let Some(p) = self.process {
            if let Some(hit) = self.layout.local_slots(p, name) {
                return hit;
            }
        }
        self.layout
            .global_slots(name)
            .unwrap_or_else(|| panic!("validated model resolves '{name}'"))
    }

    fn is_local_or_global(&self, name: &str) -> bool {
        self.process
            .map(|p| self.layout.local_slots(p, name).is_some())
            .unwrap_or(false)
            || self.layout.global_slots(name).is_some()
    }

    fn expr(&mut self, e: &Expr) -> CExpr {
        match e {
            Expr::Int(v) => CExpr::Int(*v),
            Expr::Bool(b) => CExpr::Int(i64::from(*b)),
            Expr::Var(name) => {
                if self.is_local_or_global(name) {
                    let (range, _, _) = self.lookup(name);
                    CExpr::Slot(range.start as u32)
                } else {
                    CExpr::Int(self.model.constant(name).expect("validated constant"))
                }
            }
            Expr::Index(name, idx) => {
                let (range, _, _) = self.lookup(name);
                let idx = self.expr(idx);
                // Constant indices fold to a plain slot read.
                if let CExpr::Int(i) = idx {
                    if i >= 0 && (i as usize) < range.len {
                        return CExpr::Slot((range.start + i as usize) as u32);
                    }
                }
                CExpr::Indexed {
                    base: range.start as u32,
                    len: range.len as u32,
                    name: Arc::from(name.as_str()),
                    idx: Box::new(idx),
                }
            }
            Expr::Neg(e) => CExpr::Neg(Box::new(self.expr(e))),
            Expr::Not(e) => CExpr::Not(Box::new(self.expr(e))),
            Expr::Bin(op, l, r) => CExpr::Bin(*op, Box::new(self.expr(l)), Box::new(self.expr(r))),
            Expr::MinActiveTimer => unreachable!("rejected by validation outside the tick rule"),
        }
    }

    fn target(&mut self, lv: &LValue) -> CTarget {
        let (range, lo, hi) = self.lookup(&lv.var);
        CTarget {
            base: range.start as u32,
            len: range.len as u32,
            name: Arc::from(lv.var.as_str()),
            lo,
            hi,
            idx: lv.index.as_ref().map(|i| self.expr(i)),
        }
    }
}

/// Evaluate a compiled expression. Booleans are 0/1.
pub fn ceval(e: &CExpr, values: &[i32]) -> Result<i64, ModelError> {
    Ok(match e {
        CExpr::Int(v) => *v,
        CExpr::Slot(s) => values[*s as usize] as i64,
        CExpr::Indexed {
            base,
            len,
            name,
            idx,
        } => {
            let i = ceval(idx, values)?;
            if i < 0 || i >= *len as i64 {
                return Err(ModelError::Index {
                    var: name.to_string(),
                    index: i,
                    len: *len as usize,
                });
            }
            values[(*base + i as u32) as usize] as i64
        }
        CExpr::Neg(e) => -ceval(e, values)?,
        CExpr::Not(e) => i64::from(ceval(e, values)? == 0),
        CExpr::Bin(op, l, r) => {
            match op {
                BinOp::And => {
                    return Ok(i64::from(ceval(l, values)? != 0 && ceval(r, values)? != 0))
                }
                BinOp::Or => {
                    return Ok(i64::from(ceval(l, values)? != 0 || ceval(r, values)? != 0))
                }
                _ => {}
            }
            let a = ceval(l, values)?;
            let b = ceval(r, values)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Mod => {
                    if b <= 0 {
                        return Err(ModelError::Modulus(b));
                    }
                    a.rem_euclid(b)
                }
                BinOp::Eq => i64::from(a == b),
                BinOp::Ne => i64::from(a != b),
                BinOp::Lt => i64::from(a < b),
                BinOp::Le => i64::from(a <= b),
                BinOp::Gt => i64::from(a > b),
                BinOp::Ge => i64::from(a >= b),
                BinOp::And | BinOp::Or => unreachable!("short-circuited above"),
            }
        }
    })
}
