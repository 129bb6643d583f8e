//! Successor semantics: full interleaving of local steps, rendezvous pairs,
//! the native tick rule, and the synchronous property product.

use crate::compile::{ceval, CEffect, CSync, CTarget, CTick, CompiledModel};
use crate::{Label, ModelError, TickKind};
use tdve_core::State;

impl CompiledModel {
    /// All successors of `s` in deterministic order: local steps by
    /// (process, transition), rendezvous pairs by (sender, receiver), then
    /// tick steps; each multiplied by the enabled property transitions in
    /// declaration order. A step with no enabled property transition is
    /// dropped. The empty list means deadlock.
    pub fn successors(&self, s: &State) -> Result<Vec<(Label, State)>, ModelError> {
        let mut base: Vec<(Label, State)> = Vec::new();

        // Local steps.
        for (pi, proc) in self.procs.iter().enumerate() {
            if Some(pi) == self.property {
                continue;
            }
            let loc = s.values[proc.loc_slot as usize] as usize;
            for &ti in &proc.by_src[loc] {
                let t = &proc.transitions[ti as usize];
                if t.sync.is_some() {
                    continue;
                }
                if let Some(s2) = self.fire_local(s, pi, ti as usize)? {
                    base.push((
                        Label::Local {
                            process: pi as u16,
                            transition: ti,
                            prop: None,
                        },
                        s2,
                    ));
                }
            }
        }

        // Rendezvous pairs, sender-major.
        for (pi, proc) in self.procs.iter().enumerate() {
            if Some(pi) == self.property {
                continue;
            }
            let loc = s.values[proc.loc_slot as usize] as usize;
            for &ti in &proc.by_src[loc] {
                let t = &proc.transitions[ti as usize];
                let Some(CSync::Send { chan, .. }) = &t.sync else {
                    continue;
                };
                if !self.enabled(s, pi, ti as usize)? {
                    continue;
                }
                for (qi, qproc) in self.procs.iter().enumerate() {
                    if qi == pi || Some(qi) == self.property {
                        continue;
                    }
                    let qloc = s.values[qproc.loc_slot as usize] as usize;
                    for &ui in &qproc.by_src[qloc] {
                        let u = &qproc.transitions[ui as usize];
                        let Some(CSync::Recv { chan: rchan, .. }) = &u.sync else {
                            continue;
                        };
                        if rchan != chan || !self.enabled(s, qi, ui as usize)? {
                            continue;
                        }
                        let s2 = self.fire_rendezvous(s, pi, ti as usize, qi, ui as usize)?;
                        base.push((
                            Label::Rendezvous {
                                sender: (pi as u16, ti),
                                receiver: (qi as u16, ui),
                                prop: None,
                            },
                            s2,
                        ));
                    }
                }
            }
        }

        // Tick steps.
        if let Some(tick) = &self.tick {
            for (kind, s2) in self.fire_tick(s, tick) {
                base.push((Label::Tick { kind, prop: None }, s2));
            }
        }

        // Synchronous product with the property process: its guards observe
        // the pre-state.
        let Some(prop_pi) = self.property else {
            return Ok(base);
        };
        let proc = &self.procs[prop_pi];
        let loc = s.values[proc.loc_slot as usize] as usize;
        let mut enabled_props: Vec<u16> = Vec::new();
        for &ti in &proc.by_src[loc] {
            if self.enabled(s, prop_pi, ti as usize)? {
                enabled_props.push(ti);
            }
        }
        let mut out = Vec::with_capacity(base.len() * enabled_props.len());
        for (label, s2) in base {
            for &pti in &enabled_props {
                let mut s3 = s2.clone();
                s3.values[proc.loc_slot as usize] = proc.transitions[pti as usize].dst as i32;
                out.push((label.with_prop(pti), s3));
            }
        }
        Ok(out)
    }

    fn enabled(&self, s: &State, pi: usize, ti: usize) -> Result<bool, ModelError> {
        match &self.procs[pi].transitions[ti].guard {
            None => Ok(true),
            Some(g) => Ok(ceval(g, &s.values).map_err(|e| e.in_transition(self, pi, ti, s))? != 0),
        }
    }

    /// Fire a syncless transition if its guard holds.
    fn fire_local(&self, s: &State, pi: usize, ti: usize) -> Result<Option<State>, ModelError> {
        if !self.enabled(s, pi, ti)? {
            return Ok(None);
        }
        let t = &self.procs[pi].transitions[ti];
        let mut next = s.clone();
        self.apply_effects(s, &mut next, &t.effects, pi, ti)?;
        next.values[self.procs[pi].loc_slot as usize] = t.dst as i32;
        Ok(Some(next))
    }

    /// Rendezvous step: sender effects read the pre-state, the payload is
    /// copied, then receiver effects read the intermediate state.
    fn fire_rendezvous(
        &self,
        s: &State,
        pi: usize,
        ti: usize,
        qi: usize,
        ui: usize,
    ) -> Result<State, ModelError> {
        let t = &self.procs[pi].transitions[ti];
        let u = &self.procs[qi].transitions[ui];
        let mut mid = s.clone();
        self.apply_effects(s, &mut mid, &t.effects, pi, ti)?;
        if let (Some(CSync::Send { payload, .. }), Some(CSync::Recv { target, .. })) =
            (&t.sync, &u.sync)
        {
            if let (Some(pe), Some(tg)) = (payload, target) {
                let v = ceval(pe, &s.values).map_err(|e| e.in_transition(self, pi, ti, s))?;
                let slot = self
                    .target_slot(tg, &s.values)
                    .map_err(|e| e.in_transition(self, qi, ui, s))?;
                self.write(&mut mid, tg, slot, v)
                    .map_err(|e| e.in_transition(self, qi, ui, s))?;
            }
        }
        let pre_recv = mid.clone();
        self.apply_effects(&pre_recv, &mut mid, &u.effects, qi, ui)?;
        mid.values[self.procs[pi].loc_slot as usize] = t.dst as i32;
        mid.values[self.procs[qi].loc_slot as usize] = u.dst as i32;
        Ok(mid)
    }

    /// Simultaneous assignment: reads against `pre`, writes into `next`.
    fn apply_effects(
        &self,
        pre: &State,
        next: &mut State,
        effects: &[CEffect],
        pi: usize,
        ti: usize,
    ) -> Result<(), ModelError> {
        for eff in effects {
            let v =
                ceval(&eff.value, &pre.values).map_err(|e| e.in_transition(self, pi, ti, pre))?;
            let slot = self
                .target_slot(&eff.target, &pre.values)
                .map_err(|e| e.in_transition(self, pi, ti, pre))?;
            self.write(next, &eff.target, slot, v)
                .map_err(|e| e.in_transition(self, pi, ti, pre))?;
        }
        Ok(())
    }

    fn target_slot(&self, t: &CTarget, pre: &[i32]) -> Result<usize, ModelError> {
        match &t.idx {
            None => Ok(t.base as usize),
            Some(idx) => {
                let i = ceval(idx, pre)?;
                if i < 0 || i >= t.len as i64 {
                    return Err(ModelError::Index {
                        var: t.name.to_string(),
                        index: i,
                        len: t.len as usize,
                    });
                }
                Ok((t.base + i as u32) as usize)
            }
        }
    }

    fn write(&self, next: &mut State, t: &CTarget, slot: usize, v: i64) -> Result<(), ModelError> {
        if v < t.lo || v > t.hi {
            return Err(ModelError::Range {
                var: t.name.to_string(),
                value: v,
                lo: t.lo,
                hi: t.hi,
            });
        }
        next.values[slot] = v as i32;
        Ok(())
    }

    /// Native tick steps. Disabled ticks yield nothing.
    fn fire_tick(&self, s: &State, tick: &CTick) -> Vec<(TickKind, State)> {
        match tick {
            CTick::Ledm {
                ub,
                lb,
                n,
                now,
                infinity,
                maximal,
            } => {
                let ubs = *ub as usize;
                let lbs = *lb as usize;
                let n = *n as usize;
                // guard: every ubtimer positive
                if (0..n).any(|i| s.values[ubs + i] == 0) {
                    return Vec::new();
                }
                let mut next = s.clone();
                for i in 0..n {
                    if i64::from(next.values[ubs + i]) != *infinity {
                        next.values[ubs + i] -= 1;
                    }
                    if next.values[lbs + i] > 0 {
                        next.values[lbs + i] -= 1;
                    }
                }
                if let Some(now) = now {
                    let v = i64::from(s.values[*now as usize]);
                    next.values[*now as usize] = ((v + 1) % maximal) as i32;
                }
                vec![(TickKind::Unit, next)]
            }
            CTick::Eedm {
                timer,
                signal,
                n,
                now,
                infinity,
                maximal,
            } => {
                let ts = *timer as usize;
                let n = *n as usize;
                let all_positive = (0..n).all(|i| s.values[ts + i] > 0);
                let min_active = (0..n)
                    .map(|i| i64::from(s.values[ts + i]))
                    .filter(|&v| v != *infinity)
                    .min();
                let (Some(min), true) = (min_active, all_positive) else {
                    return Vec::new();
                };
                let mut out = Vec::new();
                let signals = signal.map(|sig| {
                    let sg = sig as usize;
                    (0..n).any(|i| s.values[sg + i] == 1)
                });
                // Leaping step: no signal raised (or no signals at all).
                if signals != Some(true) {
                    let mut next = s.clone();
                    for i in 0..n {
                        if i64::from(next.values[ts + i]) != *infinity {
                            next.values[ts + i] -= min as i32;
                        }
                    }
                    if let Some(now) = now {
                        let v = i64::from(s.values[*now as usize]);
                        next.values[*now as usize] = ((v + min) % maximal) as i32;
                    }
                    out.push((TickKind::Leap, next));
                }
                // Standard step: some signal raised.
                if signals == Some(true) {
                    let mut next = s.clone();
                    for i in 0..n {
                        if i64::from(next.values[ts + i]) != *infinity {
                            next.values[ts + i] -= 1;
                        }
                    }
                    if let Some(now) = now {
                        let v = i64::from(s.values[*now as usize]);
                        next.values[*now as usize] = ((v + 1) % maximal) as i32;
                    }
                    out.push((TickKind::Step, next));
                }
                out
            }
        }
    }
}
