//! Flat state vectors and their canonical byte encoding.

use crate::model::Model;
use std::fmt;

/// Contiguous slot range inside the state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotRange {
    pub start: usize,
    pub len: usize,
}

impl SlotRange {
    pub fn slots(self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

#[derive(Debug, Clone)]
struct VarSlots {
    name: String,
    range: SlotRange,
    lo: i64,
    hi: i64,
    is_array: bool,
}

/// Mapping from a model's variables and locations to slots of a flat
/// `i32` vector. Layout order: globals in declaration order, then per
/// process one location slot followed by its locals.
#[derive(Debug, Clone)]
pub struct Layout {
    globals: Vec<VarSlots>,
    proc_loc: Vec<usize>,
    proc_locals: Vec<Vec<VarSlots>>,
    proc_names: Vec<String>,
    location_names: Vec<Vec<String>>,
    total: usize,
}

impl Layout {
    pub fn new(model: &Model) -> Layout {
        let mut next = 0usize;
        let mut globals = Vec::with_capacity(model.globals.len());
        for g in &model.globals {
            let len = g.slot_count();
            globals.push(VarSlots {
                name: g.name.clone(),
                range: SlotRange { start: next, len },
                lo: g.lo,
                hi: g.hi,
                is_array: g.len.is_some(),
            });
            next += len;
        }
        let mut proc_loc = Vec::with_capacity(model.processes.len());
        let mut proc_locals = Vec::with_capacity(model.processes.len());
        let mut proc_names = Vec::with_capacity(model.processes.len());
        let mut location_names = Vec::with_capacity(model.processes.len());
        for p in &model.processes {
            proc_loc.push(next);
            next += 1;
            let mut locals = Vec::with_capacity(p.locals.len());
            for l in &p.locals {
                let len = l.slot_count();
                locals.push(VarSlots {
                    name: l.name.clone(),
                    range: SlotRange { start: next, len },
                    lo: l.lo,
                    hi: l.hi,
                    is_array: l.len.is_some(),
                });
                next += len;
            }
            proc_locals.push(locals);
            proc_names.push(p.name.clone());
            location_names.push(p.locations.clone());
        }
        Layout {
            globals,
            proc_loc,
            proc_locals,
            proc_names,
            location_names,
            total: next,
        }
    }

    pub fn slot_count(&self) -> usize {
        self.total
    }

    pub fn process_count(&self) -> usize {
        self.proc_loc.len()
    }

    /// Slot range and declared value range of a global, if declared.
    pub fn global_slots(&self, name: &str) -> Option<(SlotRange, i64, i64)> {
        self.globals
            .iter()
            .find(|v| v.name == name)
            .map(|v| (v.range, v.lo, v.hi))
    }

    /// Slot range of a local of process `p`.
    pub fn local_slots(&self, p: usize, name: &str) -> Option<(SlotRange, i64, i64)> {
        self.proc_locals[p]
            .iter()
            .find(|v| v.name == name)
            .map(|v| (v.range, v.lo, v.hi))
    }

    pub fn location_slot(&self, p: usize) -> usize {
        self.proc_loc[p]
    }

    /// Initial state from the model's declared initial values.
    pub fn initial_state(&self, model: &Model) -> State {
        let mut values = vec![0i32; self.total];
        for (g, slots) in model.globals.iter().zip(&self.globals) {
            for (i, s) in slots.range.slots().enumerate() {
                values[s] = g.init_at(i) as i32;
            }
        }
        for (pi, p) in model.processes.iter().enumerate() {
            values[self.proc_loc[pi]] = p.initial as i32;
            for (l, slots) in p.locals.iter().zip(&self.proc_locals[pi]) {
                for (i, s) in slots.range.slots().enumerate() {
                    values[s] = l.init_at(i) as i32;
                }
            }
        }
        State {
            values: values.into_boxed_slice(),
        }
    }

    /// Deterministic human-readable rendering, used in trace files.
    pub fn display<'a>(&'a self, state: &'a State) -> StateDisplay<'a> {
        StateDisplay {
            layout: self,
            state,
        }
    }
}

/// A full valuation of a model: every global, every process location and
/// every local, flattened into one `i32` vector. Equality and hashing follow
/// the vector, so the canonical encoding is injective by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub values: Box<[i32]>,
}

impl State {
    /// Canonical byte encoding: little-endian 4-byte words in slot order.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.values.len() * 4);
        for v in self.values.iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Option<State> {
        if !bytes.len().is_multiple_of(4) {
            return None;
        }
        let values = bytes
            .chunks_exact(4)
            .map(|c| i32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect::<Vec<_>>();
        Some(State {
            values: values.into_boxed_slice(),
        })
    }
}

pub struct StateDisplay<'a> {
    layout: &'a Layout,
    state: &'a State,
}

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, " ")
            }
        };
        for g in &self.layout.globals {
            sep(f)?;
            if g.is_array {
                write!(f, "{}=[", g.name)?;
                for (i, s) in g.range.slots().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", self.state.values[s])?;
                }
                write!(f, "]")?;
            } else {
                write!(f, "{}={}", g.name, self.state.values[g.range.start])?;
            }
        }
        for (pi, name) in self.layout.proc_names.iter().enumerate() {
            sep(f)?;
            let loc = self.state.values[self.layout.proc_loc[pi]] as usize;
            let loc_name = self.layout.location_names[pi]
                .get(loc)
                .map(|s| s.as_str())
                .unwrap_or("?");
            write!(f, "{name}@{loc_name}")?;
            if !self.layout.proc_locals[pi].is_empty() {
                write!(f, "{{")?;
                for (i, l) in self.layout.proc_locals[pi].iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if l.is_array {
                        write!(f, "{}=[", l.name)?;
                        for (j, s) in l.range.slots().enumerate() {
                            if j > 0 {
                                write!(f, ",")?;
                            }
                            write!(f, "{}", self.state.values[s])?;
                        }
                        write!(f, "]")?;
                    } else {
                        write!(f, "{}={}", l.name, self.state.values[l.range.start])?;
                    }
                }
                write!(f, "}}")?;
            }
        }
        Ok(())
    }
}
