//! Count-down pair instrumentation: per-process `ubtimer`/`lbtimer` globals
//! and a unit-step tick rule guarded by "all ubtimers positive".

use crate::{check_input, effective_bound, fresh_name, LowerError, LoweringConfig};
use tdve_core::{Expr, LValue, Model, TickSpec, TimedModel, VarDecl};

pub fn lower_ledm(tm: &TimedModel, cfg: &LoweringConfig) -> Result<Model, LowerError> {
    let bounded_by_src = check_input(tm, cfg)?;
    let include_now = cfg.effective_now(tm);
    let infinity = cfg.infinity;
    let n = tm.base.processes.len();
    if n == 0 {
        return Ok(tm.base.clone());
    }

    let mut model = tm.base.clone();
    let ubtimer = fresh_name(&model, "ubtimer");
    let lbtimer = fresh_name(&model, "lbtimer");
    let now = include_now.then(|| fresh_name(&model, "now"));

    // (ubtimer, lbtimer) arm values for the bound pending at a location.
    let arm_at = |pi: usize, loc: usize| -> Option<(i64, i64)> {
        bounded_by_src[pi][loc].map(|ti| {
            let b = effective_bound(tm, pi, ti).unwrap();
            (
                b.ub.map(i64::from).unwrap_or(infinity),
                b.lb.map(i64::from).unwrap_or(0),
            )
        })
    };

    // Initial arming follows the initial locations.
    let mut ub_init = vec![infinity; n];
    let mut lb_init = vec![0i64; n];
    for (pi, p) in tm.base.processes.iter().enumerate() {
        if let Some((ub, lb)) = arm_at(pi, p.initial) {
            ub_init[pi] = ub;
            lb_init[pi] = lb;
        }
    }

    for (pi, p) in model.processes.iter_mut().enumerate() {
        for (ti, t) in p.transitions.iter_mut().enumerate() {
            // Release guard on the bounded transition itself.
            if effective_bound(tm, pi, ti).is_some() {
                let release = Expr::eq(
                    Expr::index(lbtimer.clone(), Expr::Int(pi as i64)),
                    Expr::Int(0),
                );
                t.guard = Some(match t.guard.take() {
                    Some(g) => Expr::and(g, release),
                    None => release,
                });
            }
            // Arm for the destination's pending bound, or clear a stale pair
            // when leaving a bounded location for an unbounded one.
            match arm_at(pi, t.dst) {
                Some((ub, lb)) => {
                    t.effects.push((
                        LValue::indexed(ubtimer.clone(), Expr::Int(pi as i64)),
                        Expr::Int(ub),
                    ));
                    t.effects.push((
                        LValue::indexed(lbtimer.clone(), Expr::Int(pi as i64)),
                        Expr::Int(lb),
                    ));
                }
                None if bounded_by_src[pi][t.src].is_some() => {
                    t.effects.push((
                        LValue::indexed(ubtimer.clone(), Expr::Int(pi as i64)),
                        Expr::Int(infinity),
                    ));
                    t.effects.push((
                        LValue::indexed(lbtimer.clone(), Expr::Int(pi as i64)),
                        Expr::Int(0),
                    ));
                }
                None => {}
            }
        }
    }

    model.globals.push(VarDecl::array_with_inits(
        ubtimer.clone(),
        0,
        infinity,
        ub_init,
    ));
    model.globals.push(VarDecl::array_with_inits(
        lbtimer.clone(),
        0,
        infinity,
        lb_init,
    ));
    if let Some(now_name) = &now {
        model
            .globals
            .push(VarDecl::scalar(now_name.clone(), 0, cfg.maximal - 1, 0));
    }

    model.tick = Some(TickSpec::Ledm {
        ubtimer,
        lbtimer,
        now,
        infinity,
        maximal: cfg.maximal,
    });
    Ok(model)
}
