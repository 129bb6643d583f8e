//! Model structure: declarations, processes, transitions, tick rules and
//! timed annotations.

use crate::expr::{Expr, LValue};
use std::collections::{BTreeMap, BTreeSet};

/// Source position (1-based) for diagnostics. Programmatically built models
/// carry `None` spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

/// A ranged integer variable, scalar or fixed-length array. Array elements
/// share the range; they share `init` too unless a per-element initializer
/// list is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
    pub init: i64,
    /// `None` for scalars, `Some(len)` for arrays.
    pub len: Option<u32>,
    /// Per-element initial values, overriding `init` (arrays only).
    pub elem_init: Option<Vec<i64>>,
    pub span: Option<Span>,
}

impl VarDecl {
    pub fn scalar(name: impl Into<String>, lo: i64, hi: i64, init: i64) -> VarDecl {
        VarDecl {
            name: name.into(),
            lo,
            hi,
            init,
            len: None,
            elem_init: None,
            span: None,
        }
    }

    pub fn array(name: impl Into<String>, len: u32, lo: i64, hi: i64, init: i64) -> VarDecl {
        VarDecl {
            name: name.into(),
            lo,
            hi,
            init,
            len: Some(len),
            elem_init: None,
            span: None,
        }
    }

    pub fn array_with_inits(name: impl Into<String>, lo: i64, hi: i64, inits: Vec<i64>) -> VarDecl {
        let uniform = inits.windows(2).all(|w| w[0] == w[1]);
        let first = inits.first().copied().unwrap_or(lo);
        VarDecl {
            name: name.into(),
            lo,
            hi,
            init: first,
            len: Some(inits.len() as u32),
            elem_init: (!uniform).then_some(inits),
            span: None,
        }
    }

    pub fn slot_count(&self) -> usize {
        self.len.map(|l| l as usize).unwrap_or(1)
    }

    /// Initial value of element `i`.
    pub fn init_at(&self, i: usize) -> i64 {
        self.elem_init
            .as_ref()
            .and_then(|v| v.get(i).copied())
            .unwrap_or(self.init)
    }
}

/// Rendezvous channel carrying zero or one integer value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    pub name: String,
    /// 0 (pure synchronization) or 1 (one value copied sender to receiver).
    pub arity: u32,
    pub span: Option<Span>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncDir {
    Send,
    Recv,
}

/// Synchronization half of a transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sync {
    /// `chan ! expr` — payload expression evaluated in the sender's pre-state.
    Send {
        channel: String,
        payload: Option<Expr>,
    },
    /// `chan ? lvalue` — payload stored before the receiver's effects run.
    Recv {
        channel: String,
        target: Option<LValue>,
    },
}

impl Sync {
    pub fn channel(&self) -> &str {
        match self {
            Sync::Send { channel, .. } | Sync::Recv { channel, .. } => channel,
        }
    }

    pub fn dir(&self) -> SyncDir {
        match self {
            Sync::Send { .. } => SyncDir::Send,
            Sync::Recv { .. } => SyncDir::Recv,
        }
    }
}

/// One guarded transition between two locations of a process.
///
/// Effects are simultaneous: every right-hand side and every index is
/// evaluated against the pre-state, then the writes land left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub src: usize,
    pub dst: usize,
    pub guard: Option<Expr>,
    pub sync: Option<Sync>,
    pub effects: Vec<(LValue, Expr)>,
    pub span: Option<Span>,
}

impl Transition {
    pub fn new(src: usize, dst: usize) -> Transition {
        Transition {
            src,
            dst,
            guard: None,
            sync: None,
            effects: Vec::new(),
            span: None,
        }
    }

    pub fn with_guard(mut self, g: Expr) -> Transition {
        self.guard = Some(g);
        self
    }

    pub fn with_effect(mut self, lv: LValue, e: Expr) -> Transition {
        self.effects.push((lv, e));
        self
    }
}

/// A process: locals, named locations, an initial location and transitions.
/// `accepting` is nonempty only for the property process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Process {
    pub name: String,
    pub locals: Vec<VarDecl>,
    pub locations: Vec<String>,
    pub initial: usize,
    pub transitions: Vec<Transition>,
    pub accepting: BTreeSet<usize>,
    pub span: Option<Span>,
}

impl Process {
    pub fn location_index(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|l| l == name)
    }
}

/// Tick rule attached to a lowered model. Created only by lowering, never by
/// the parser. The exploration engine evaluates it natively because its
/// effects (conditional decrements, minimum over active timers) are not
/// expressible as plain assignment lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TickSpec {
    /// Count-down pair per process; time advances by one unit per tick.
    Ledm {
        ubtimer: String,
        lbtimer: String,
        now: Option<String>,
        infinity: i64,
        maximal: i64,
    },
    /// Single timer per process; time leaps by the minimum active timer, or
    /// by one unit while any signal is raised.
    Eedm {
        timer: String,
        signal: Option<String>,
        now: Option<String>,
        infinity: i64,
        maximal: i64,
    },
}

impl TickSpec {
    pub fn infinity(&self) -> i64 {
        match self {
            TickSpec::Ledm { infinity, .. } | TickSpec::Eedm { infinity, .. } => *infinity,
        }
    }

    pub fn maximal(&self) -> i64 {
        match self {
            TickSpec::Ledm { maximal, .. } | TickSpec::Eedm { maximal, .. } => *maximal,
        }
    }

    pub fn now(&self) -> Option<&str> {
        match self {
            TickSpec::Ledm { now, .. } | TickSpec::Eedm { now, .. } => now.as_deref(),
        }
    }
}

/// An untimed guarded-command system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub constants: Vec<(String, i64)>,
    pub globals: Vec<VarDecl>,
    pub channels: Vec<Channel>,
    pub processes: Vec<Process>,
    /// Index of the property process, composed synchronously with the rest.
    pub property: Option<usize>,
    pub tick: Option<TickSpec>,
}

impl Model {
    pub fn empty() -> Model {
        Model {
            constants: Vec::new(),
            globals: Vec::new(),
            channels: Vec::new(),
            processes: Vec::new(),
            property: None,
            tick: None,
        }
    }

    pub fn constant(&self, name: &str) -> Option<i64> {
        self.constants
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn global(&self, name: &str) -> Option<&VarDecl> {
        self.globals.iter().find(|v| v.name == name)
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c.name == name)
    }

    /// True when `name` is taken by a constant, global or channel.
    pub fn name_taken(&self, name: &str) -> bool {
        self.constant(name).is_some()
            || self.global(name).is_some()
            || self.channel_index(name).is_some()
    }

    /// Drop all source spans; used for structural comparison of parsed
    /// against generated models.
    pub fn strip_spans(&self) -> Model {
        let mut m = self.clone();
        for g in &mut m.globals {
            g.span = None;
        }
        for c in &mut m.channels {
            c.span = None;
        }
        for p in &mut m.processes {
            p.span = None;
            for l in &mut p.locals {
                l.span = None;
            }
            for t in &mut p.transitions {
                t.span = None;
            }
        }
        m
    }
}

/// Lower/upper bound annotation on a transition, in whole time units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TimeBound {
    pub lb: Option<u32>,
    pub ub: Option<u32>,
}

impl TimeBound {
    pub fn new(lb: Option<u32>, ub: Option<u32>) -> TimeBound {
        TimeBound { lb, ub }
    }
}

/// A model plus per-transition time bounds and observe flags. The base model
/// carries no tick rule and no timer variables; lowering adds both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedModel {
    pub base: Model,
    /// `(process index, transition index) -> bound`.
    pub bounds: BTreeMap<(usize, usize), TimeBound>,
    /// Transitions whose execution instant must be trackable at unit
    /// granularity (drives standard-mode signals under EEDM).
    pub observe: BTreeSet<(usize, usize)>,
}

impl TimedModel {
    pub fn untimed(base: Model) -> TimedModel {
        TimedModel {
            base,
            bounds: BTreeMap::new(),
            observe: BTreeSet::new(),
        }
    }

    pub fn bound(&self, proc_idx: usize, trans_idx: usize) -> Option<TimeBound> {
        self.bounds.get(&(proc_idx, trans_idx)).copied()
    }

    pub fn max_bound(&self) -> i64 {
        self.bounds
            .values()
            .flat_map(|b| [b.lb, b.ub])
            .flatten()
            .map(i64::from)
            .max()
            .unwrap_or(0)
    }

    pub fn strip_spans(&self) -> TimedModel {
        TimedModel {
            base: self.base.strip_spans(),
            bounds: self.bounds.clone(),
            observe: self.observe.clone(),
        }
    }
}
