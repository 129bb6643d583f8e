//! Deterministic pretty-printer. `parse(pretty(m))` is structurally equal to
//! `m` for every valid timed model; lowered models print their tick rule as
//! comments and are not round-trippable (the tick is native, see
//! `docs/language.md`).

use std::fmt::Write;
use tdve_core::{Expr, Model, Sync, TickSpec, TimedModel, VarDecl};

pub fn pretty(tm: &TimedModel) -> String {
    let mut out = String::new();
    write_model(&mut out, &tm.base, Some(tm));
    out
}

/// Render a (possibly lowered) untimed model. A model without a tick rule
/// prints exactly like its untimed `TimedModel` counterpart.
pub fn pretty_lowered(model: &Model) -> String {
    let mut out = String::new();
    write_model(&mut out, model, None);
    if let Some(tick) = &model.tick {
        write_tick_comment(&mut out, model, tick);
    }
    out
}

fn write_var(out: &mut String, v: &VarDecl, indent: &str) {
    match (v.len, &v.elem_init) {
        (None, _) => {
            let _ = writeln!(
                out,
                "{indent}var {} : {}..{} = {};",
                v.name, v.lo, v.hi, v.init
            );
        }
        (Some(l), None) => {
            let _ = writeln!(
                out,
                "{indent}var {}[{}] : {}..{} = {};",
                v.name, l, v.lo, v.hi, v.init
            );
        }
        (Some(l), Some(inits)) => {
            let list: Vec<String> = inits.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                out,
                "{indent}var {}[{}] : {}..{} = [{}];",
                v.name,
                l,
                v.lo,
                v.hi,
                list.join(", ")
            );
        }
    }
}

fn write_model(out: &mut String, m: &Model, timed: Option<&TimedModel>) {
    for (name, v) in &m.constants {
        let _ = writeln!(out, "const {name} = {v};");
    }
    for g in &m.globals {
        write_var(out, g, "");
    }
    for c in &m.channels {
        if c.arity == 0 {
            let _ = writeln!(out, "chan {};", c.name);
        } else {
            let _ = writeln!(out, "chan {}({});", c.name, c.arity);
        }
    }
    for (pi, p) in m.processes.iter().enumerate() {
        let _ = writeln!(out, "process {} {{", p.name);
        for l in &p.locals {
            write_var(out, l, "  ");
        }
        let _ = writeln!(out, "  state {};", p.locations.join(", "));
        let _ = writeln!(out, "  init {};", p.locations[p.initial]);
        if !p.accepting.is_empty() {
            let names: Vec<&str> = p
                .accepting
                .iter()
                .map(|&i| p.locations[i].as_str())
                .collect();
            let _ = writeln!(out, "  accept {};", names.join(", "));
        }
        let _ = writeln!(out, "  trans");
        for (ti, t) in p.transitions.iter().enumerate() {
            let mut line = format!("    {} -> {} {{", p.locations[t.src], p.locations[t.dst]);
            if let Some(g) = &t.guard {
                let _ = write!(line, " guard {g};");
            }
            if let Some(s) = &t.sync {
                match s {
                    Sync::Send { channel, payload } => match payload {
                        Some(e) => {
                            let _ = write!(line, " sync {channel} ! {e};");
                        }
                        None => {
                            let _ = write!(line, " sync {channel} !;");
                        }
                    },
                    Sync::Recv { channel, target } => match target {
                        Some(lv) => {
                            let _ = write!(line, " sync {channel} ? {lv};");
                        }
                        None => {
                            let _ = write!(line, " sync {channel} ?;");
                        }
                    },
                }
            }
            if !t.effects.is_empty() {
                let effs: Vec<String> = t
                    .effects
                    .iter()
                    .map(|(lv, e)| format!("{lv} = {e}"))
                    .collect();
                let _ = write!(line, " effect {};", effs.join(", "));
            }
            if let Some(tm) = timed {
                if let Some(b) = tm.bound(pi, ti) {
                    let lb = b.lb.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                    let ub = b.ub.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                    let obs = if tm.observe.contains(&(pi, ti)) {
                        " observe"
                    } else {
                        ""
                    };
                    let _ = write!(line, " time [{lb}, {ub}]{obs};");
                }
            }
            line.push_str(" }");
            if ti + 1 < p.transitions.len() {
                line.push(',');
            } else {
                line.push(';');
            }
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out, "}}");
    }
}

/// The tick rule in the shape of Figs. 2/4/6, rendered as comments: its
/// guards are ordinary expressions, but the conditional decrements are
/// native and have no surface syntax.
fn write_tick_comment(out: &mut String, model: &Model, tick: &TickSpec) {
    let n = model.processes.len();
    let _ = writeln!(out, "// tick rule (native; informational rendering)");
    let _ = writeln!(out, "// process __tick {{");
    let _ = writeln!(out, "//   state tick;");
    let _ = writeln!(out, "//   init tick;");
    let _ = writeln!(out, "//   trans");
    match tick {
        TickSpec::Ledm {
            ubtimer,
            lbtimer,
            now,
            maximal,
            ..
        } => {
            let guard = Expr::conj(
                (0..n)
                    .map(|i| {
                        Expr::bin(
                            tdve_core::BinOp::Gt,
                            Expr::index(ubtimer.clone(), Expr::Int(i as i64)),
                            Expr::Int(0),
                        )
                    })
                    .collect(),
            );
            let now_eff = match now {
                Some(nm) => format!("{nm} = ({nm} + 1) % {maximal}, "),
                None => String::new(),
            };
            let _ = writeln!(
                out,
                "//     tick -> tick {{ guard {guard}; effect {now_eff}<decrement each non-INFINITY {ubtimer}[i] and non-zero {lbtimer}[i] by 1>; }};"
            );
        }
        TickSpec::Eedm {
            timer,
            signal,
            now,
            infinity,
            maximal,
        } => {
            let positive = Expr::conj(
                (0..n)
                    .map(|i| {
                        Expr::bin(
                            tdve_core::BinOp::Gt,
                            Expr::index(timer.clone(), Expr::Int(i as i64)),
                            Expr::Int(0),
                        )
                    })
                    .collect(),
            );
            let some_active = (0..n)
                .map(|i| {
                    Expr::ne(
                        Expr::index(timer.clone(), Expr::Int(i as i64)),
                        Expr::Int(*infinity),
                    )
                })
                .reduce(Expr::or)
                .unwrap_or(Expr::Bool(false));
            let leap_now = match now {
                Some(nm) => format!("{nm} = ({nm} + MIN_ACTIVE_TIMER) % {maximal}, "),
                None => String::new(),
            };
            match signal {
                None => {
                    let _ = writeln!(
                        out,
                        "//     tick -> tick {{ guard ({positive}) && ({some_active}); effect {leap_now}<decrement each non-INFINITY {timer}[i] by MIN_ACTIVE_TIMER>; }};"
                    );
                }
                Some(sig) => {
                    let all_zero = Expr::conj(
                        (0..n)
                            .map(|i| {
                                Expr::eq(
                                    Expr::index(sig.clone(), Expr::Int(i as i64)),
                                    Expr::Int(0),
                                )
                            })
                            .collect(),
                    );
                    let some_set = (0..n)
                        .map(|i| {
                            Expr::eq(Expr::index(sig.clone(), Expr::Int(i as i64)), Expr::Int(1))
                        })
                        .reduce(Expr::or)
                        .unwrap_or(Expr::Bool(false));
                    let step_now = match now {
                        Some(nm) => format!("{nm} = ({nm} + 1) % {maximal}, "),
                        None => String::new(),
                    };
                    let _ = writeln!(
                        out,
                        "//     tick -> tick {{ guard ({positive}) && ({some_active}) && ({all_zero}); effect {leap_now}<decrement each non-INFINITY {timer}[i] by MIN_ACTIVE_TIMER>; }},"
                    );
                    let _ = writeln!(
                        out,
                        "//     tick -> tick {{ guard ({positive}) && ({some_active}) && ({some_set}); effect {step_now}<decrement each non-INFINITY {timer}[i] by 1>; }};"
                    );
                }
            }
        }
    }
    let _ = writeln!(out, "// }}");
}
