//! Single-timer instrumentation with leaping ticks.
//!
//! A transition bounded on both sides has its source location split: entry
//! arms `timer[i] := lb`, a bridging transition guarded `timer[i] == 0`
//! re-arms `timer[i] := ub - lb` (raising the signal when the transition is
//! observed), and the original transition runs from the second half,
//! resetting the timer (and lowering the signal). A lower-only bound sets
//! the timer to INFINITY after the wait instead; an upper-only bound needs
//! no split. Signals for observed upper-only bounds are raised at arming
//! time, the only instant available before execution.

use crate::{check_input, effective_bound, fresh_name, LowerError, LoweringConfig};
use std::collections::BTreeMap;
use tdve_core::{Expr, LValue, Model, Process, TickSpec, TimedModel, Transition, VarDecl};

pub fn lower_eedm(tm: &TimedModel, cfg: &LoweringConfig) -> Result<Model, LowerError> {
    let bounded_by_src = check_input(tm, cfg)?;
    let include_now = cfg.effective_now(tm);
    let infinity = cfg.infinity;
    let n = tm.base.processes.len();
    if n == 0 {
        return Ok(tm.base.clone());
    }
    let any_observe = !tm.observe.is_empty();

    let mut model = tm.base.clone();
    let timer = fresh_name(&model, "timer");
    let signal = any_observe.then(|| fresh_name(&model, "signal"));
    let now = include_now.then(|| fresh_name(&model, "now"));

    // Arm value on entering a location: lb for split bounds, ub for
    // upper-only bounds.
    let arm_at = |pi: usize, loc: usize| -> Option<i64> {
        bounded_by_src[pi][loc].map(|ti| {
            let b = effective_bound(tm, pi, ti).unwrap();
            match (b.lb, b.ub) {
                (Some(lb), _) => i64::from(lb),
                (None, Some(ub)) => i64::from(ub),
                (None, None) => unreachable!("effective bounds have a side"),
            }
        })
    };

    let mut timer_init = vec![infinity; n];
    for (pi, p) in tm.base.processes.iter().enumerate() {
        if let Some(v) = arm_at(pi, p.initial) {
            timer_init[pi] = v;
        }
    }

    for (pi, proc) in model.processes.iter_mut().enumerate() {
        instrument_process(
            pi,
            proc,
            tm,
            &bounded_by_src[pi],
            &arm_at,
            &timer,
            signal.as_deref(),
            infinity,
            cfg.signal_at_arming,
        );
    }

    model.globals.push(VarDecl::array_with_inits(
        timer.clone(),
        0,
        infinity,
        timer_init,
    ));
    if let Some(sig) = &signal {
        model
            .globals
            .push(VarDecl::array(sig.clone(), n as u32, 0, 1, 0));
    }
    if let Some(now_name) = &now {
        model
            .globals
            .push(VarDecl::scalar(now_name.clone(), 0, cfg.maximal - 1, 0));
    }

    model.tick = Some(TickSpec::Eedm {
        timer,
        signal,
        now,
        infinity,
        maximal: cfg.maximal,
    });
    Ok(model)
}

#[allow(clippy::too_many_arguments)]
fn instrument_process(
    pi: usize,
    proc: &mut Process,
    tm: &TimedModel,
    bounded_by_src: &[Option<usize>],
    arm_at: &dyn Fn(usize, usize) -> Option<i64>,
    timer: &str,
    signal: Option<&str>,
    infinity: i64,
    signal_at_arming: bool,
) {
    let set_timer = |v: i64| {
        (
            LValue::indexed(timer.to_string(), Expr::Int(pi as i64)),
            Expr::Int(v),
        )
    };
    let set_signal = |v: i64, sig: &str| {
        (
            LValue::indexed(sig.to_string(), Expr::Int(pi as i64)),
            Expr::Int(v),
        )
    };

    // Locations needing a split: bounded transitions with a lower bound.
    // split_of[loc] = index of the added waiting-done location.
    let mut split_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (loc, bounded) in bounded_by_src.iter().enumerate() {
        let Some(ti) = bounded else { continue };
        let b = effective_bound(tm, pi, *ti).unwrap();
        if b.lb.is_some() {
            let name = format!("{}__w", proc.locations[loc]);
            proc.locations.push(name);
            split_of.insert(loc, proc.locations.len() - 1);
        }
    }

    let observed = |ti: usize| signal.is_some() && tm.observe.contains(&(pi, ti));

    let original_count = proc.transitions.len();
    let mut extra: Vec<Transition> = Vec::new();

    for ti in 0..original_count {
        let bound = effective_bound(tm, pi, ti);
        let src = proc.transitions[ti].src;
        let dst = proc.transitions[ti].dst;

        // Arm-or-clear effects for where this transition lands. A bounded
        // transition's own move is handled below (its destination arming
        // still applies).
        let landing: Vec<(LValue, Expr)> = match arm_at(pi, dst) {
            Some(v) => vec![set_timer(v)],
            None if bounded_by_src[src].is_some() => vec![set_timer(infinity)],
            None => vec![],
        };

        match bound {
            None => {
                let t = &mut proc.transitions[ti];
                t.effects.extend(landing);
                // Leaving an observed bounded complex with the signal
                // possibly raised: lower it so the tick can leap again. A
                // later arming raise (below) overrides this, writes being
                // applied left to right.
                if let Some(sig) = signal {
                    if bounded_by_src[src].map(observed).unwrap_or(false) {
                        t.effects.push(set_signal(0, sig));
                    }
                }
            }
            Some(b) => {
                match (b.lb, b.ub) {
                    (None, Some(_)) => {
                        // Upper-only: no split. The transition resets or
                        // re-arms; observation raises the signal at arming
                        // (done below for every transition entering src) and
                        // lowers it here.
                        let t = &mut proc.transitions[ti];
                        t.effects.extend(landing);
                        if observed(ti) {
                            t.effects.push(set_signal(0, signal.unwrap()));
                        }
                    }
                    (Some(lb), ub) => {
                        // Split: bridge src -> wait, move the bounded
                        // transition to wait -> dst.
                        let wait = split_of[&src];
                        let bridge_value = match ub {
                            Some(ub) => i64::from(ub) - i64::from(lb),
                            None => infinity,
                        };
                        let (blv, be) = set_timer(bridge_value);
                        let mut bridge = Transition::new(src, wait)
                            .with_guard(Expr::eq(
                                Expr::index(timer.to_string(), Expr::Int(pi as i64)),
                                Expr::Int(0),
                            ))
                            .with_effect(blv, be);
                        if observed(ti) && !signal_at_arming {
                            let (lv, e) = set_signal(1, signal.unwrap());
                            bridge = bridge.with_effect(lv, e);
                        }
                        extra.push(bridge);

                        let t = &mut proc.transitions[ti];
                        t.src = wait;
                        t.effects.extend(landing);
                        if observed(ti) {
                            t.effects.push(set_signal(0, signal.unwrap()));
                        }
                    }
                    (None, None) => unreachable!("effective bounds have a side"),
                }
            }
        }
    }

    // Duplicate the unbounded exits of each split location onto its waiting
    // half, so a process can still take an escape route after the lower
    // bound elapsed.
    for (&loc, &wait) in &split_of {
        let bounded_ti = bounded_by_src[loc].unwrap();
        for ti in 0..original_count {
            if ti == bounded_ti {
                continue;
            }
            if proc.transitions[ti].src == loc {
                let mut dup = proc.transitions[ti].clone();
                dup.src = wait;
                extra.push(dup);
            }
        }
    }

    // Observed upper-only bounds raise the signal when armed: on every
    // transition entering the bounded location, and nowhere else. With
    // arming-raise configured, split bounds behave the same way.
    if let Some(sig) = signal {
        let mut raise_into: Vec<usize> = Vec::new();
        for (loc, bounded) in bounded_by_src.iter().enumerate() {
            let Some(ti) = bounded else { continue };
            let b = effective_bound(tm, pi, *ti).unwrap();
            let arming_raise = b.lb.is_none() || signal_at_arming;
            if arming_raise && observed(*ti) {
                raise_into.push(loc);
            }
        }
        if !raise_into.is_empty() {
            for t in proc.transitions.iter_mut().chain(extra.iter_mut()) {
                if raise_into.contains(&t.dst) {
                    t.effects.push(set_signal(1, sig));
                }
            }
        }
    }

    proc.transitions.extend(extra);
}
