//! Structural validation. Produces diagnostics instead of failing, so a
//! front end can report every problem at once.

use crate::eval::{typecheck, EvalEnv, Ty};
use crate::expr::Expr;
use crate::model::{Model, Span, Sync, TimedModel};
use crate::state::Layout;
use std::collections::HashSet;
use std::fmt;

/// One validation finding. `place` names the enclosing declaration;
/// `span` is present when the model came from source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
    pub place: String,
    pub span: Option<Span>,
}

impl Diagnostic {
    fn new(place: impl Into<String>, span: Option<Span>, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            message: message.into(),
            place: place.into(),
            span,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{}:{}: {} ({})", s.line, s.col, self.message, self.place),
            None => write!(f, "{} ({})", self.message, self.place),
        }
    }
}

/// Check every model invariant. The empty list means the model is
/// well-formed. Idempotent and side-effect free.
pub fn validate(model: &Model) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let layout = Layout::new(model);

    // Unique names at model scope.
    let mut seen = HashSet::new();
    for (name, _) in &model.constants {
        if !seen.insert(name.clone()) {
            out.push(Diagnostic::new(
                "model",
                None,
                format!("duplicate name '{name}'"),
            ));
        }
    }
    for g in &model.globals {
        if !seen.insert(g.name.clone()) {
            out.push(Diagnostic::new(
                "model",
                g.span,
                format!("duplicate name '{}'", g.name),
            ));
        }
    }
    for c in &model.channels {
        if !seen.insert(c.name.clone()) {
            out.push(Diagnostic::new(
                "model",
                c.span,
                format!("duplicate name '{}'", c.name),
            ));
        }
        if c.arity > 1 {
            out.push(Diagnostic::new(
                format!("channel {}", c.name),
                c.span,
                "channel arity must be 0 or 1",
            ));
        }
    }
    let mut proc_names = HashSet::new();
    for p in &model.processes {
        if !proc_names.insert(p.name.clone()) || seen.contains(&p.name) {
            out.push(Diagnostic::new(
                "model",
                p.span,
                format!("duplicate name '{}'", p.name),
            ));
        }
    }

    for g in &model.globals {
        check_var(&mut out, "global", g, &mut HashSet::new());
    }

    if let Some(p) = model.property {
        if p >= model.processes.len() {
            out.push(Diagnostic::new(
                "model",
                None,
                "property process index out of range",
            ));
        }
    }

    for (pi, p) in model.processes.iter().enumerate() {
        let place = format!("process {}", p.name);
        let mut local_names = HashSet::new();
        for l in &p.locals {
            check_var(&mut out, &place, l, &mut local_names);
        }
        let mut loc_names = HashSet::new();
        for l in &p.locations {
            if !loc_names.insert(l.clone()) {
                out.push(Diagnostic::new(
                    &place,
                    p.span,
                    format!("duplicate location '{l}'"),
                ));
            }
        }
        if p.initial >= p.locations.len() {
            out.push(Diagnostic::new(
                &place,
                p.span,
                "initial location out of range",
            ));
        }
        for &a in &p.accepting {
            if a >= p.locations.len() {
                out.push(Diagnostic::new(
                    &place,
                    p.span,
                    "accepting location out of range",
                ));
            }
        }
        if !p.accepting.is_empty() && model.property != Some(pi) {
            out.push(Diagnostic::new(
                &place,
                p.span,
                "accepting locations on a non-property process",
            ));
        }

        let is_property = model.property == Some(pi);
        let env = EvalEnv::in_process(model, &layout, pi);
        for (ti, t) in p.transitions.iter().enumerate() {
            let tplace = format!("{place}, transition {ti}");
            if t.src >= p.locations.len() || t.dst >= p.locations.len() {
                out.push(Diagnostic::new(&tplace, t.span, "location out of range"));
                continue;
            }
            if let Some(g) = &t.guard {
                check_expr(&mut out, &tplace, t.span, g, &env, Ty::Bool);
            }
            for (lv, e) in &t.effects {
                check_expr(&mut out, &tplace, t.span, e, &env, Ty::Int);
                check_lvalue(&mut out, &tplace, t.span, lv, &env);
            }
            if let Some(sync) = &t.sync {
                if is_property {
                    out.push(Diagnostic::new(
                        &tplace,
                        t.span,
                        "property process transitions must not synchronize",
                    ));
                }
                match model.channels.iter().find(|c| c.name == sync.channel()) {
                    None => out.push(Diagnostic::new(
                        &tplace,
                        t.span,
                        format!("unresolved channel '{}'", sync.channel()),
                    )),
                    Some(ch) => match sync {
                        Sync::Send { payload, .. } => match (ch.arity, payload) {
                            (0, Some(_)) => out.push(Diagnostic::new(
                                &tplace,
                                t.span,
                                "payload on arity-0 channel",
                            )),
                            (1, None) => out.push(Diagnostic::new(
                                &tplace,
                                t.span,
                                "missing payload on arity-1 channel",
                            )),
                            (_, Some(e)) => check_expr(&mut out, &tplace, t.span, e, &env, Ty::Int),
                            _ => {}
                        },
                        Sync::Recv { target, .. } => match (ch.arity, target) {
                            (0, Some(_)) => out.push(Diagnostic::new(
                                &tplace,
                                t.span,
                                "payload target on arity-0 channel",
                            )),
                            (1, None) => out.push(Diagnostic::new(
                                &tplace,
                                t.span,
                                "missing payload target on arity-1 channel",
                            )),
                            (_, Some(lv)) => check_lvalue(&mut out, &tplace, t.span, lv, &env),
                            _ => {}
                        },
                    },
                }
            }
            if is_property && (!t.effects.is_empty()) {
                out.push(Diagnostic::new(
                    &tplace,
                    t.span,
                    "property process transitions must not have effects",
                ));
            }
        }
    }

    if let Some(tick) = &model.tick {
        let place = "tick";
        if tick.maximal() <= tick.infinity() {
            out.push(Diagnostic::new(place, None, "MAXIMAL must exceed INFINITY"));
        }
        let arrays: Vec<&str> = match tick {
            crate::model::TickSpec::Ledm {
                ubtimer, lbtimer, ..
            } => vec![ubtimer, lbtimer],
            crate::model::TickSpec::Eedm { timer, signal, .. } => {
                let mut v = vec![timer.as_str()];
                if let Some(s) = signal {
                    v.push(s);
                }
                v
            }
        };
        for name in arrays {
            match model.global(name) {
                None => out.push(Diagnostic::new(
                    place,
                    None,
                    format!("tick references undeclared global '{name}'"),
                )),
                Some(v) if v.len.map(|l| l as usize) != Some(model.processes.len()) => {
                    out.push(Diagnostic::new(
                        place,
                        None,
                        format!("'{name}' must be an array of process count"),
                    ))
                }
                _ => {}
            }
        }
        if let Some(now) = tick.now() {
            if model.global(now).is_none() {
                out.push(Diagnostic::new(
                    place,
                    None,
                    format!("tick references undeclared global '{now}'"),
                ));
            }
        }
    }

    out
}

/// Validate a timed model: base invariants plus bound well-formedness.
pub fn validate_timed(tm: &TimedModel) -> Vec<Diagnostic> {
    let mut out = validate(&tm.base);
    if tm.base.tick.is_some() {
        out.push(Diagnostic::new(
            "model",
            None,
            "timed model must not carry a tick rule",
        ));
    }
    for (&(pi, ti), b) in &tm.bounds {
        let place = format!("bound on process {pi}, transition {ti}");
        let Some(p) = tm.base.processes.get(pi) else {
            out.push(Diagnostic::new(&place, None, "process index out of range"));
            continue;
        };
        let Some(t) = p.transitions.get(ti) else {
            out.push(Diagnostic::new(
                &place,
                None,
                "transition index out of range",
            ));
            continue;
        };
        if b.lb.is_none() && b.ub.is_none() {
            out.push(Diagnostic::new(&place, t.span, "empty time bound"));
        }
        if let Some(ub) = b.ub {
            if ub < 1 {
                out.push(Diagnostic::new(
                    &place,
                    t.span,
                    "upper bound must be at least 1",
                ));
            }
            if let Some(lb) = b.lb {
                if lb > ub {
                    out.push(Diagnostic::new(
                        &place,
                        t.span,
                        "lower bound exceeds upper bound",
                    ));
                }
            }
        }
        if t.sync.is_some() {
            out.push(Diagnostic::new(
                &place,
                t.span,
                "a bounded transition must not carry a rendezvous sync",
            ));
        }
        if tm.base.property == Some(pi) {
            out.push(Diagnostic::new(
                &place,
                t.span,
                "bound on a property process",
            ));
        }
    }
    for key in &tm.observe {
        if !tm.bounds.contains_key(key) {
            out.push(Diagnostic::new(
                format!("observe on process {}, transition {}", key.0, key.1),
                None,
                "observe requires a time bound",
            ));
        }
    }
    out
}

fn check_var(
    out: &mut Vec<Diagnostic>,
    place: &str,
    v: &crate::model::VarDecl,
    names: &mut HashSet<String>,
) {
    if !names.insert(v.name.clone()) {
        out.push(Diagnostic::new(
            place,
            v.span,
            format!("duplicate name '{}'", v.name),
        ));
    }
    if v.lo > v.hi {
        out.push(Diagnostic::new(
            place,
            v.span,
            format!("empty range [{}, {}] for '{}'", v.lo, v.hi, v.name),
        ));
    }
    if v.init < v.lo || v.init > v.hi {
        out.push(Diagnostic::new(
            place,
            v.span,
            format!(
                "initial value {} outside [{}, {}] for '{}'",
                v.init, v.lo, v.hi, v.name
            ),
        ));
    }
    if let Some(inits) = &v.elem_init {
        if v.len.map(|l| l as usize) != Some(inits.len()) {
            out.push(Diagnostic::new(
                place,
                v.span,
                format!("initializer list length mismatch for '{}'", v.name),
            ));
        }
        for &i in inits {
            if i < v.lo || i > v.hi {
                out.push(Diagnostic::new(
                    place,
                    v.span,
                    format!(
                        "initial value {} outside [{}, {}] for '{}'",
                        i, v.lo, v.hi, v.name
                    ),
                ));
            }
        }
    }
    if v.len == Some(0) {
        out.push(Diagnostic::new(
            place,
            v.span,
            format!("array '{}' must have positive length", v.name),
        ));
    }
    if v.lo < i32::MIN as i64 || v.hi > i32::MAX as i64 {
        out.push(Diagnostic::new(
            place,
            v.span,
            format!("range of '{}' exceeds the representable domain", v.name),
        ));
    }
}

fn check_expr(
    out: &mut Vec<Diagnostic>,
    place: &str,
    span: Option<Span>,
    e: &Expr,
    env: &EvalEnv,
    want: Ty,
) {
    if e.contains_min_active_timer() {
        out.push(Diagnostic::new(
            place,
            span,
            "MIN_ACTIVE_TIMER is only legal inside the tick rule",
        ));
        return;
    }
    match typecheck(e, env) {
        Err(err) => out.push(Diagnostic::new(place, span, err.to_string())),
        Ok(ty) if ty != want => out.push(Diagnostic::new(
            place,
            span,
            format!("expected {want:?} expression"),
        )),
        Ok(_) => {}
    }
}

fn check_lvalue(
    out: &mut Vec<Diagnostic>,
    place: &str,
    span: Option<Span>,
    lv: &crate::expr::LValue,
    env: &EvalEnv,
) {
    match env.resolve(&lv.var) {
        None => out.push(Diagnostic::new(
            place,
            span,
            format!("unresolved identifier '{}'", lv.var),
        )),
        Some(crate::eval::Resolved::Const(_)) => out.push(Diagnostic::new(
            place,
            span,
            format!("cannot assign to constant '{}'", lv.var),
        )),
        Some(crate::eval::Resolved::Slots { is_array, .. }) => match (&lv.index, is_array) {
            (None, true) => out.push(Diagnostic::new(
                place,
                span,
                format!("'{}' is an array and needs an index", lv.var),
            )),
            (Some(_), false) => out.push(Diagnostic::new(
                place,
                span,
                format!("'{}' is not an array", lv.var),
            )),
            (Some(i), true) => check_expr(out, place, span, i, env, Ty::Int),
            (None, false) => {}
        },
    }
}
