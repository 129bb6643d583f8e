#![allow(dead_code)] // shared by several test binaries, each using a subset
//! Naive reference interpreter used as an independent oracle.
//!
//! Successor semantics are re-implemented here directly on the name-based
//! core evaluator, with its own depth-first enumeration; nothing from the
//! engine's compiled path is used. Engine results must agree with this
//! interpreter on every model small enough to enumerate.

use std::collections::{HashMap, HashSet};
use tdve_core::{
    eval, eval_bool, eval_int, EvalEnv, Expr, Layout, Model, State, Sync, TickSpec, Value,
};

/// One successor step: `(process, transition)` pairs for the system part
/// (two pairs for a rendezvous), `tick` flag, property transition index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveStep {
    pub parts: Vec<(usize, usize)>,
    pub tick: bool,
    pub prop: Option<usize>,
}

pub struct Naive<'a> {
    pub model: &'a Model,
    pub layout: Layout,
}

impl<'a> Naive<'a> {
    pub fn new(model: &'a Model) -> Naive<'a> {
        Naive {
            model,
            layout: Layout::new(model),
        }
    }

    pub fn initial(&self) -> State {
        self.layout.initial_state(self.model)
    }

    fn guard_holds(&self, s: &State, pi: usize, ti: usize) -> bool {
        let p = &self.model.processes[pi];
        let t = &p.transitions[ti];
        match &t.guard {
            None => true,
            Some(g) => {
                let env = EvalEnv::in_process(self.model, &self.layout, pi);
                eval_bool(g, s, &env).expect("oracle models evaluate cleanly")
            }
        }
    }

    fn write(&self, s: &mut State, pi: usize, lv: &tdve_core::LValue, v: i64, pre: &State) {
        let env = EvalEnv::in_process(self.model, &self.layout, pi);
        let (range, lo, hi) = self
            .layout
            .local_slots(pi, &lv.var)
            .or_else(|| self.layout.global_slots(&lv.var))
            .expect("resolved");
        let slot = match &lv.index {
            None => range.start,
            Some(i) => {
                let iv = eval_int(i, pre, &env).expect("index evaluates");
                assert!(
                    iv >= 0 && (iv as usize) < range.len,
                    "oracle index in range"
                );
                range.start + iv as usize
            }
        };
        assert!(v >= lo && v <= hi, "oracle writes stay in range");
        s.values[slot] = v as i32;
    }

    fn apply_effects(&self, pre: &State, next: &mut State, pi: usize, ti: usize) {
        let env = EvalEnv::in_process(self.model, &self.layout, pi);
        let t = &self.model.processes[pi].transitions[ti];
        for (lv, e) in &t.effects {
            let v = eval_int(e, pre, &env).expect("effect evaluates");
            self.write(next, pi, lv, v, pre);
        }
    }

    fn set_location(&self, s: &mut State, pi: usize, loc: usize) {
        s.values[self.layout.location_slot(pi)] = loc as i32;
    }

    fn location(&self, s: &State, pi: usize) -> usize {
        s.values[self.layout.location_slot(pi)] as usize
    }

    /// Tick successors computed straight from the tick rule's definition.
    fn tick_successors(&self, s: &State) -> Vec<State> {
        let Some(tick) = &self.model.tick else {
            return Vec::new();
        };
        let n = self.model.processes.len();
        match tick {
            TickSpec::Ledm {
                ubtimer,
                lbtimer,
                now,
                infinity,
                maximal,
            } => {
                let (ub, _, _) = self.layout.global_slots(ubtimer).unwrap();
                let (lb, _, _) = self.layout.global_slots(lbtimer).unwrap();
                for i in 0..n {
                    if s.values[ub.start + i] == 0 {
                        return Vec::new();
                    }
                }
                let mut next = s.clone();
                for i in 0..n {
                    if i64::from(next.values[ub.start + i]) != *infinity {
                        next.values[ub.start + i] -= 1;
                    }
                    if next.values[lb.start + i] != 0 {
                        next.values[lb.start + i] -= 1;
                    }
                }
                if let Some(nm) = now {
                    let (slot, _, _) = self.layout.global_slots(nm).unwrap();
                    next.values[slot.start] =
                        ((i64::from(s.values[slot.start]) + 1) % maximal) as i32;
                }
                vec![next]
            }
            TickSpec::Eedm {
                timer,
                signal,
                now,
                infinity,
                maximal,
            } => {
                let (ts, _, _) = self.layout.global_slots(timer).unwrap();
                if (0..n).any(|i| s.values[ts.start + i] <= 0) {
                    return Vec::new();
                }
                let active: Vec<i64> = (0..n)
                    .map(|i| i64::from(s.values[ts.start + i]))
                    .filter(|&v| v != *infinity)
                    .collect();
                let Some(&min) = active.iter().min() else {
                    return Vec::new();
                };
                let some_signal = signal.as_ref().map(|sig| {
                    let (sg, _, _) = self.layout.global_slots(sig).unwrap();
                    (0..n).any(|i| s.values[sg.start + i] == 1)
                });
                let amount = if some_signal == Some(true) { 1 } else { min };
                let mut next = s.clone();
                for i in 0..n {
                    if i64::from(next.values[ts.start + i]) != *infinity {
                        next.values[ts.start + i] -= amount as i32;
                    }
                }
                if let Some(nm) = now {
                    let (slot, _, _) = self.layout.global_slots(nm).unwrap();
                    next.values[slot.start] =
                        ((i64::from(s.values[slot.start]) + amount) % maximal) as i32;
                }
                vec![next]
            }
        }
    }

    /// All successors, ignoring order.
    pub fn successors(&self, s: &State) -> Vec<(NaiveStep, State)> {
        let mut base: Vec<(NaiveStep, State)> = Vec::new();
        for (pi, p) in self.model.processes.iter().enumerate() {
            if Some(pi) == self.model.property {
                continue;
            }
            let loc = self.location(s, pi);
            for (ti, t) in p.transitions.iter().enumerate() {
                if t.src != loc || t.sync.is_some() || !self.guard_holds(s, pi, ti) {
                    continue;
                }
                let mut next = s.clone();
                self.apply_effects(s, &mut next, pi, ti);
                self.set_location(&mut next, pi, t.dst);
                base.push((
                    NaiveStep {
                        parts: vec![(pi, ti)],
                        tick: false,
                        prop: None,
                    },
                    next,
                ));
            }
        }
        // rendezvous pairs
        for (pi, p) in self.model.processes.iter().enumerate() {
            if Some(pi) == self.model.property {
                continue;
            }
            let loc = self.location(s, pi);
            for (ti, t) in p.transitions.iter().enumerate() {
                let Some(Sync::Send { channel, payload }) = &t.sync else {
                    continue;
                };
                if t.src != loc || !self.guard_holds(s, pi, ti) {
                    continue;
                }
                for (qi, q) in self.model.processes.iter().enumerate() {
                    if qi == pi || Some(qi) == self.model.property {
                        continue;
                    }
                    let qloc = self.location(s, qi);
                    for (ui, u) in q.transitions.iter().enumerate() {
                        let Some(Sync::Recv {
                            channel: rc,
                            target,
                        }) = &u.sync
                        else {
                            continue;
                        };
                        if u.src != qloc || rc != channel || !self.guard_holds(s, qi, ui) {
                            continue;
                        }
                        let mut mid = s.clone();
                        self.apply_effects(s, &mut mid, pi, ti);
                        if let (Some(pe), Some(tg)) = (payload, target) {
                            let env = EvalEnv::in_process(self.model, &self.layout, pi);
                            let v = eval_int(pe, s, &env).expect("payload evaluates");
                            self.write(&mut mid, qi, tg, v, s);
                        }
                        let pre_recv = mid.clone();
                        let env_q = EvalEnv::in_process(self.model, &self.layout, qi);
                        for (lv, e) in &u.effects {
                            let v = eval_int(e, &pre_recv, &env_q).expect("effect evaluates");
                            self.write(&mut mid, qi, lv, v, &pre_recv);
                        }
                        self.set_location(&mut mid, pi, t.dst);
                        self.set_location(&mut mid, qi, u.dst);
                        base.push((
                            NaiveStep {
                                parts: vec![(pi, ti), (qi, ui)],
                                tick: false,
                                prop: None,
                            },
                            mid,
                        ));
                    }
                }
            }
        }
        for next in self.tick_successors(s) {
            base.push((
                NaiveStep {
                    parts: vec![],
                    tick: true,
                    prop: None,
                },
                next,
            ));
        }
        let Some(prop_pi) = self.model.property else {
            return base;
        };
        let p = &self.model.processes[prop_pi];
        let loc = self.location(s, prop_pi);
        let enabled: Vec<usize> = p
            .transitions
            .iter()
            .enumerate()
            .filter(|(ti, t)| t.src == loc && self.guard_holds(s, prop_pi, *ti))
            .map(|(ti, _)| ti)
            .collect();
        let mut out = Vec::new();
        for (step, s2) in base {
            for &pti in &enabled {
                let mut s3 = s2.clone();
                self.set_location(&mut s3, prop_pi, p.transitions[pti].dst);
                out.push((
                    NaiveStep {
                        prop: Some(pti),
                        ..step.clone()
                    },
                    s3,
                ));
            }
        }
        out
    }

    /// Depth-first enumeration of the reachable states; returns the state
    /// set and the number of edges.
    pub fn enumerate(&self) -> (HashSet<State>, usize) {
        let mut seen: HashSet<State> = HashSet::new();
        let mut stack = vec![self.initial()];
        seen.insert(self.initial());
        let mut edges = 0usize;
        while let Some(s) = stack.pop() {
            for (_, next) in self.successors(&s) {
                edges += 1;
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        (seen, edges)
    }

    /// Depth-first safety check: does any reachable state satisfy `bad`?
    pub fn reachable_bad(&self, bad: &Expr) -> bool {
        let env = EvalEnv::global(self.model, &self.layout);
        let is_bad = |s: &State| -> bool { matches!(eval(bad, s, &env), Ok(Value::Bool(true))) };
        let mut seen: HashSet<State> = HashSet::new();
        let init = self.initial();
        if is_bad(&init) {
            return true;
        }
        seen.insert(init.clone());
        let mut stack = vec![init];
        while let Some(s) = stack.pop() {
            for (_, next) in self.successors(&s) {
                if !seen.contains(&next) {
                    if is_bad(&next) {
                        return true;
                    }
                    seen.insert(next.clone());
                    stack.push(next);
                }
            }
        }
        false
    }

    /// Reachable states with duplicate counting removed, as a map to their
    /// successor count (used for deadlock cross-checks).
    pub fn successor_counts(&self) -> HashMap<State, usize> {
        let mut out = HashMap::new();
        let mut stack = vec![self.initial()];
        out.insert(self.initial(), usize::MAX);
        while let Some(s) = stack.pop() {
            let succ = self.successors(&s);
            let n = succ.len();
            for (_, next) in succ {
                if !out.contains_key(&next) {
                    out.insert(next.clone(), usize::MAX);
                    stack.push(next);
                }
            }
            out.insert(s, n);
        }
        out
    }
}
