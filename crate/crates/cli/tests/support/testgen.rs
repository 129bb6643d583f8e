#![allow(dead_code)] // shared by several test binaries, each using a subset
//! Deterministic random model generator for round-trip testing. Models are
//! valid by construction: every identifier resolves, expressions type-check,
//! bounds are well-formed, and bounded transitions carry no sync.

use std::collections::BTreeSet;
use tdve_core::{
    BinOp, Channel, Expr, LValue, Model, Process, Sync, TimeBound, TimedModel, Transition, VarDecl,
};

pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n.max(1)
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.below(100) < percent
    }
}

fn ident(rng: &mut Lcg, prefix: &str, i: usize) -> String {
    let styles = ["{p}{i}", "{p}_{i}", "my{p}{i}"];
    let s = styles[rng.below(styles.len() as u64) as usize];
    s.replace("{p}", prefix).replace("{i}", &i.to_string())
}

fn var_decl(rng: &mut Lcg, name: String) -> VarDecl {
    let lo = rng.below(5) as i64 - 2;
    let hi = lo + 1 + rng.below(9) as i64;
    let init = lo + rng.below((hi - lo + 1) as u64) as i64;
    if rng.chance(25) {
        let len = 1 + rng.below(4) as u32;
        if rng.chance(40) {
            let inits: Vec<i64> = (0..len)
                .map(|_| lo + rng.below((hi - lo + 1) as u64) as i64)
                .collect();
            let mut v = VarDecl::array_with_inits(name, lo, hi, inits);
            v.hi = hi;
            v.lo = lo;
            v
        } else {
            VarDecl::array(name, len, lo, hi, init)
        }
    } else {
        VarDecl::scalar(name, lo, hi, init)
    }
}

/// An integer expression over the given scalar variables.
fn int_expr(rng: &mut Lcg, vars: &[(String, Option<u32>)], depth: u32) -> Expr {
    if depth == 0 || vars.is_empty() || rng.chance(35) {
        return Expr::Int(rng.below(9) as i64 - 3);
    }
    match rng.below(5) {
        0 => {
            let (name, len) = &vars[rng.below(vars.len() as u64) as usize];
            match len {
                None => Expr::var(name.clone()),
                Some(l) => Expr::index(name.clone(), Expr::Int(rng.below(u64::from(*l)) as i64)),
            }
        }
        1 => Expr::neg(int_expr(rng, vars, depth - 1)),
        2 => Expr::bin(
            BinOp::Add,
            int_expr(rng, vars, depth - 1),
            int_expr(rng, vars, depth - 1),
        ),
        3 => Expr::bin(
            BinOp::Mul,
            int_expr(rng, vars, depth - 1),
            Expr::Int(rng.below(4) as i64),
        ),
        _ => Expr::bin(
            BinOp::Mod,
            int_expr(rng, vars, depth - 1),
            Expr::Int(1 + rng.below(7) as i64),
        ),
    }
}

fn bool_expr(rng: &mut Lcg, vars: &[(String, Option<u32>)], depth: u32) -> Expr {
    if depth == 0 || rng.chance(30) {
        let cmps = [
            BinOp::Eq,
            BinOp::Ne,
            BinOp::Lt,
            BinOp::Le,
            BinOp::Gt,
            BinOp::Ge,
        ];
        let op = cmps[rng.below(6) as usize];
        return Expr::bin(op, int_expr(rng, vars, 1), int_expr(rng, vars, 1));
    }
    match rng.below(4) {
        0 => Expr::not(bool_expr(rng, vars, depth - 1)),
        1 => Expr::and(
            bool_expr(rng, vars, depth - 1),
            bool_expr(rng, vars, depth - 1),
        ),
        2 => Expr::or(
            bool_expr(rng, vars, depth - 1),
            bool_expr(rng, vars, depth - 1),
        ),
        _ => Expr::Bool(rng.chance(50)),
    }
}

/// A random valid timed model.
pub fn random_timed_model(rng: &mut Lcg) -> TimedModel {
    let mut model = Model::empty();
    for i in 0..rng.below(3) {
        model
            .constants
            .push((ident(rng, "K", i as usize), rng.below(20) as i64));
    }
    for i in 0..1 + rng.below(3) {
        let name = ident(rng, "g", i as usize);
        model.globals.push(var_decl(rng, name));
    }
    for i in 0..rng.below(3) {
        model.channels.push(Channel {
            name: ident(rng, "ch", i as usize),
            arity: rng.below(2) as u32,
            span: None,
        });
    }

    let mut bounds = std::collections::BTreeMap::new();
    let mut observe = BTreeSet::new();
    let nprocs = 1 + rng.below(3) as usize;
    for pi in 0..nprocs {
        let mut locals = Vec::new();
        for i in 0..rng.below(3) {
            let name = ident(rng, "l", i as usize);
            locals.push(var_decl(rng, name));
        }
        let nlocs = 1 + rng.below(4) as usize;
        let locations: Vec<String> = (0..nlocs).map(|i| format!("q{i}")).collect();

        // visible scalars and arrays for expressions
        let mut vars: Vec<(String, Option<u32>)> = Vec::new();
        for g in &model.globals {
            vars.push((g.name.clone(), g.len));
        }
        for l in &locals {
            vars.push((l.name.clone(), l.len));
        }

        let ntrans = rng.below(5) as usize;
        let mut transitions = Vec::new();
        let mut bounded_sources = BTreeSet::new();
        for ti in 0..ntrans {
            let src = rng.below(nlocs as u64) as usize;
            let dst = rng.below(nlocs as u64) as usize;
            let mut t = Transition::new(src, dst);
            if rng.chance(60) {
                t.guard = Some(bool_expr(rng, &vars, 2));
            }
            let mut synced = false;
            if !model.channels.is_empty() && rng.chance(25) {
                let ch = &model.channels[rng.below(model.channels.len() as u64) as usize];
                let payload_var = vars.iter().find(|(_, len)| len.is_none());
                t.sync = Some(if rng.chance(50) {
                    Sync::Send {
                        channel: ch.name.clone(),
                        payload: (ch.arity == 1).then(|| int_expr(rng, &vars, 1)),
                    }
                } else {
                    match (ch.arity, payload_var) {
                        (1, Some((name, _))) => Sync::Recv {
                            channel: ch.name.clone(),
                            target: Some(LValue::scalar(name.clone())),
                        },
                        (1, None) => Sync::Send {
                            channel: ch.name.clone(),
                            payload: Some(int_expr(rng, &vars, 1)),
                        },
                        _ => Sync::Recv {
                            channel: ch.name.clone(),
                            target: None,
                        },
                    }
                });
                synced = true;
            }
            for _ in 0..rng.below(3) {
                let (name, len) = &vars[rng.below(vars.len() as u64) as usize];
                let lv = match len {
                    None => LValue::scalar(name.clone()),
                    Some(l) => {
                        LValue::indexed(name.clone(), Expr::Int(rng.below(u64::from(*l)) as i64))
                    }
                };
                t.effects.push((lv, int_expr(rng, &vars, 2)));
            }
            if !synced && rng.chance(40) && !bounded_sources.contains(&src) {
                bounded_sources.insert(src);
                let lb = rng.chance(60).then(|| rng.below(9) as u32);
                let ub = match lb {
                    Some(lb) if rng.chance(70) => Some(lb + rng.below(6) as u32),
                    Some(_) => None,
                    None => Some(1 + rng.below(9) as u32),
                };
                bounds.insert((pi, ti), TimeBound::new(lb, ub));
                if rng.chance(40) {
                    observe.insert((pi, ti));
                }
            }
            transitions.push(t);
        }
        model.processes.push(Process {
            name: ident(rng, "P", pi),
            locals,
            locations,
            initial: rng.below(nlocs as u64) as usize,
            transitions,
            accepting: BTreeSet::new(),
            span: None,
        });
    }
    // occasionally a guard-only claim process
    if rng.chance(30) {
        let vars: Vec<(String, Option<u32>)> = model
            .globals
            .iter()
            .map(|g| (g.name.clone(), g.len))
            .collect();
        let guard = bool_expr(rng, &vars, 1);
        let mut accepting = BTreeSet::new();
        accepting.insert(1);
        model.property = Some(model.processes.len());
        model.processes.push(Process {
            name: "watcher".into(),
            locals: vec![],
            locations: vec!["ok".into(), "bad".into()],
            initial: 0,
            transitions: vec![
                Transition::new(0, 0).with_guard(Expr::Bool(true)),
                Transition::new(0, 1).with_guard(guard),
                Transition::new(1, 1).with_guard(Expr::Bool(true)),
            ],
            accepting,
            span: None,
        });
    }
    TimedModel {
        base: model,
        bounds,
        observe,
    }
}

/// Random bytes skewed toward token-ish text, for fuzzing the parser.
pub fn random_source(rng: &mut Lcg) -> String {
    const PIECES: &[&str] = &[
        "process",
        "state",
        "init",
        "trans",
        "guard",
        "effect",
        "sync",
        "time",
        "observe",
        "var",
        "const",
        "chan",
        "accept",
        "{",
        "}",
        "[",
        "]",
        "(",
        ")",
        ";",
        ",",
        "->",
        "..",
        "==",
        "!=",
        "<=",
        ">=",
        "&&",
        "||",
        "!",
        "?",
        "%",
        "*",
        "+",
        "-",
        "=",
        "x",
        "y",
        "P",
        "0",
        "1",
        "42",
        "9999999999999999999",
        "\n",
        " ",
        "//",
        "\u{0}",
        "\u{41f}",
        ".",
        ":",
    ];
    let n = rng.below(80);
    let mut out = String::new();
    for _ in 0..n {
        out.push_str(PIECES[rng.below(PIECES.len() as u64) as usize]);
        if rng.chance(60) {
            out.push(' ');
        }
    }
    out
}
