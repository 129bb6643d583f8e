//! Compiles timed models into untimed models with an explicit tick rule.
//!
//! Two instrumentations are provided. The count-down pair method keeps one
//! `(ubtimer, lbtimer)` pair per process and advances time one unit per
//! tick. The single-timer method keeps one `timer` per process; its tick
//! leaps by the minimum active timer, falling back to unit steps while any
//! process holds its signal raised (so the execution instant of observed
//! transitions stays addressable).
//!
//! Timer discipline shared by both methods: timers always describe the
//! bound pending at the process's *current* location. Every transition
//! entering a location that sources a bounded transition arms the timers for
//! that bound; every transition leaving such a location without entering
//! another one resets them. The initial location's bound, if any, is armed
//! in the initial state.

mod eedm;
mod ledm;

use tdve_core::{validate_timed, Diagnostic, Model, TimeBound, TimedModel};
use thiserror::Error;

pub use eedm::lower_eedm;
pub use ledm::lower_ledm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ledm,
    Eedm,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ledm" => Ok(Method::Ledm),
            "eedm" => Ok(Method::Eedm),
            other => Err(format!(
                "unknown method '{other}', expected 'ledm' or 'eedm'"
            )),
        }
    }
}

/// Lowering parameters. `include_now` defaults to false unless the model
/// carries observe flags; models whose properties never mention the current
/// time stay smaller without it.
///
/// `signal_at_arming` moves the signal raise of an observed transition with
/// both bounds from the waiting bridge to the transitions arming its timer.
/// The default raises at the bridge, tracking exactly the window between
/// the bounds; arming-raise keeps the signal high for the whole pending
/// period, which pins the tick to unit steps throughout when every bounded
/// transition is observed (the whole-run standard mode the benchmark
/// experiments compare against).
#[derive(Debug, Clone, Copy)]
pub struct LoweringConfig {
    pub method: Method,
    pub include_now: Option<bool>,
    pub infinity: i64,
    pub maximal: i64,
    pub signal_at_arming: bool,
}

impl LoweringConfig {
    pub fn new(method: Method) -> LoweringConfig {
        LoweringConfig {
            method,
            include_now: None,
            infinity: tdve_core::DEFAULT_INFINITY,
            maximal: tdve_core::DEFAULT_MAXIMAL,
            signal_at_arming: false,
        }
    }

    pub fn with_signal_at_arming(mut self, v: bool) -> LoweringConfig {
        self.signal_at_arming = v;
        self
    }

    pub fn with_now(mut self, include: bool) -> LoweringConfig {
        self.include_now = Some(include);
        self
    }

    pub fn with_infinity(mut self, infinity: i64) -> LoweringConfig {
        self.infinity = infinity;
        self
    }

    pub fn with_maximal(mut self, maximal: i64) -> LoweringConfig {
        self.maximal = maximal;
        self
    }

    pub(crate) fn effective_now(&self, tm: &TimedModel) -> bool {
        self.include_now.unwrap_or(!tm.observe.is_empty())
    }
}

#[derive(Debug, Error)]
pub enum LowerError {
    #[error("timed model is invalid:\n{}", format_diags(.0))]
    Invalid(Vec<Diagnostic>),
    #[error(
        "bound {bound} on process {process}, transition {transition} reaches INFINITY ({infinity})"
    )]
    BoundTooLarge {
        process: String,
        transition: usize,
        bound: u32,
        infinity: i64,
    },
    #[error("location '{location}' of process {process} sources two bounded transitions")]
    CompetingBounds { process: String, location: String },
    #[error("MAXIMAL ({maximal}) must exceed INFINITY ({infinity})")]
    BadMaximal { maximal: i64, infinity: i64 },
}

fn format_diags(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Dispatch on the configured method.
pub fn lower(tm: &TimedModel, cfg: &LoweringConfig) -> Result<Model, LowerError> {
    match cfg.method {
        Method::Ledm => lower_ledm(tm, cfg),
        Method::Eedm => lower_eedm(tm, cfg),
    }
}

/// Shared rejection rules. Returns, per process, the bounded transition
/// index sourced at each location (at most one).
pub(crate) fn check_input(
    tm: &TimedModel,
    cfg: &LoweringConfig,
) -> Result<Vec<Vec<Option<usize>>>, LowerError> {
    let diags = validate_timed(tm);
    if !diags.is_empty() {
        return Err(LowerError::Invalid(diags));
    }
    if cfg.maximal <= cfg.infinity {
        return Err(LowerError::BadMaximal {
            maximal: cfg.maximal,
            infinity: cfg.infinity,
        });
    }
    let mut by_src = Vec::with_capacity(tm.base.processes.len());
    for (pi, p) in tm.base.processes.iter().enumerate() {
        let mut sources: Vec<Option<usize>> = vec![None; p.locations.len()];
        for (ti, t) in p.transitions.iter().enumerate() {
            if effective_bound(tm, pi, ti).is_none() {
                continue;
            }
            let b = tm.bound(pi, ti).unwrap();
            for v in [b.lb, b.ub].into_iter().flatten() {
                if i64::from(v) >= cfg.infinity {
                    return Err(LowerError::BoundTooLarge {
                        process: p.name.clone(),
                        transition: ti,
                        bound: v,
                        infinity: cfg.infinity,
                    });
                }
            }
            if sources[t.src].is_some() {
                return Err(LowerError::CompetingBounds {
                    process: p.name.clone(),
                    location: p.locations[t.src].clone(),
                });
            }
            sources[t.src] = Some(ti);
        }
        by_src.push(sources);
    }
    Ok(by_src)
}

/// Pick a global name not colliding with anything declared in the model.
pub(crate) fn fresh_name(model: &Model, preferred: &str) -> String {
    let mut name = preferred.to_string();
    while model.name_taken(&name)
        || model
            .processes
            .iter()
            .any(|p| p.name == name || p.locals.iter().any(|l| l.name == name))
    {
        name.insert(0, '_');
    }
    name
}

/// Normalized view of one bound: a lower bound of zero is the same as no
/// lower bound.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NormBound {
    pub lb: Option<u32>,
    pub ub: Option<u32>,
}

pub(crate) fn normalize(b: TimeBound) -> NormBound {
    NormBound {
        lb: b.lb.filter(|&v| v > 0),
        ub: b.ub,
    }
}

/// The bound the instrumentation actually enforces: `None` when the
/// transition is unbounded or its annotation is vacuous (a zero lower bound
/// with no upper bound constrains nothing).
pub(crate) fn effective_bound(tm: &TimedModel, pi: usize, ti: usize) -> Option<NormBound> {
    let b = normalize(tm.bound(pi, ti)?);
    (b.lb.is_some() || b.ub.is_some()).then_some(b)
}
