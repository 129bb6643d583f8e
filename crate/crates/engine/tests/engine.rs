//! Engine behavior: successor semantics, exploration determinism, safety
//! verdicts, and agreement with the naive reference interpreter.

mod common;

use common::Naive;
use std::collections::HashSet;
use tdve_core::{Expr, LValue, Model, Process, State, TickSpec, Transition, VarDecl};
use tdve_engine::{check_safety, explore, CompiledModel, ExploreConfig, Label, ModelError};

fn two_state_model() -> Model {
    let mut m = Model::empty();
    m.globals.push(VarDecl::scalar("x", 0, 1, 0));
    m.processes.push(Process {
        name: "P".into(),
        locals: vec![],
        locations: vec!["a".into(), "b".into()],
        initial: 0,
        transitions: vec![Transition::new(0, 1).with_effect(LValue::scalar("x"), Expr::Int(1))],
        accepting: Default::default(),
        span: None,
    });
    m
}

#[test]
fn untimed_two_state_model_explores_two_states_one_edge() {
    let cm = CompiledModel::compile(&two_state_model()).unwrap();
    let g = explore(&cm, &ExploreConfig::default()).unwrap();
    assert_eq!(g.state_count(), 2);
    assert_eq!(g.edge_count(), 1);
    assert_eq!(g.stats.deadlocks, 1);
}

#[test]
fn deadlocked_state_has_no_successors() {
    let cm = CompiledModel::compile(&two_state_model()).unwrap();
    let mut s = cm.initial_state();
    s.values[1] = 1; // move P to b, nothing is enabled there
    assert!(cm.successors(&s).unwrap().is_empty());
}

#[test]
fn ledm_tick_disabled_when_some_ubtimer_zero() {
    let mut m = two_state_model();
    m.globals.push(VarDecl::array("ubtimer", 1, 0, 100, 5));
    m.globals.push(VarDecl::array("lbtimer", 1, 0, 100, 0));
    m.tick = Some(TickSpec::Ledm {
        ubtimer: "ubtimer".into(),
        lbtimer: "lbtimer".into(),
        now: None,
        infinity: 100,
        maximal: 200,
    });
    let cm = CompiledModel::compile(&m).unwrap();
    let s0 = cm.initial_state();
    let with_tick = cm.successors(&s0).unwrap();
    assert!(with_tick
        .iter()
        .any(|(l, _)| matches!(l, Label::Tick { .. })));
    let mut s = s0.clone();
    let ub_slot = cm.layout.global_slots("ubtimer").unwrap().0.start;
    s.values[ub_slot] = 0;
    let succ = cm.successors(&s).unwrap();
    assert!(succ.iter().all(|(l, _)| !matches!(l, Label::Tick { .. })));
}

#[test]
fn eedm_leaping_tick_advances_by_min_active_timer() {
    // timers {3, INFINITY, 7} -> {0, INFINITY, 4}, now advanced by 3
    let mut m = Model::empty();
    for name in ["A", "B", "C"] {
        m.processes.push(Process {
            name: name.into(),
            locals: vec![],
            locations: vec!["s".into()],
            initial: 0,
            transitions: vec![],
            accepting: Default::default(),
            span: None,
        });
    }
    m.globals.push(VarDecl::array_with_inits(
        "timer",
        0,
        1000,
        vec![3, 1000, 7],
    ));
    m.globals.push(VarDecl::scalar("now", 0, 2047, 0));
    m.tick = Some(TickSpec::Eedm {
        timer: "timer".into(),
        signal: None,
        now: Some("now".into()),
        infinity: 1000,
        maximal: 2048,
    });
    let cm = CompiledModel::compile(&m).unwrap();
    let s0 = cm.initial_state();
    let succ = cm.successors(&s0).unwrap();
    assert_eq!(succ.len(), 1);
    let (label, next) = &succ[0];
    assert!(matches!(
        label,
        Label::Tick {
            kind: tdve_engine::TickKind::Leap,
            ..
        }
    ));
    let t = cm.layout.global_slots("timer").unwrap().0.start;
    let now = cm.layout.global_slots("now").unwrap().0.start;
    assert_eq!(&next.values[t..t + 3], &[0, 1000, 4]);
    assert_eq!(next.values[now], 3);
}

#[test]
fn eedm_tick_never_fires_with_all_timers_infinite() {
    let mut m = two_state_model();
    m.globals.push(VarDecl::array("timer", 1, 0, 1000, 1000));
    m.tick = Some(TickSpec::Eedm {
        timer: "timer".into(),
        signal: None,
        now: None,
        infinity: 1000,
        maximal: 2048,
    });
    let cm = CompiledModel::compile(&m).unwrap();
    let succ = cm.successors(&cm.initial_state()).unwrap();
    assert!(succ.iter().all(|(l, _)| !matches!(l, Label::Tick { .. })));
}

#[test]
fn range_violation_aborts_with_transition_context() {
    let mut m = two_state_model();
    m.processes[0].transitions[0].effects[0].1 = Expr::Int(7); // x: 0..1
    let cm = CompiledModel::compile(&m).unwrap();
    let err = cm.successors(&cm.initial_state()).unwrap_err();
    match err {
        ModelError::InStep {
            source, process, ..
        } => {
            assert_eq!(process, "P");
            assert!(matches!(*source, ModelError::Range { .. }));
        }
        other => panic!("expected InStep, got {other}"),
    }
}

fn rendezvous_model() -> Model {
    let mut m = Model::empty();
    m.globals.push(VarDecl::scalar("x", 0, 9, 3));
    m.channels.push(tdve_core::Channel {
        name: "ch".into(),
        arity: 1,
        span: None,
    });
    m.processes.push(Process {
        name: "S".into(),
        locals: vec![],
        locations: vec!["s0".into(), "s1".into()],
        initial: 0,
        transitions: vec![{
            let mut t = Transition::new(0, 1);
            t.sync = Some(tdve_core::Sync::Send {
                channel: "ch".into(),
                payload: Some(Expr::bin(
                    tdve_core::BinOp::Add,
                    Expr::var("x"),
                    Expr::Int(1),
                )),
            });
            t.effects.push((LValue::scalar("x"), Expr::Int(0)));
            t
        }],
        accepting: Default::default(),
        span: None,
    });
    m.processes.push(Process {
        name: "R".into(),
        locals: vec![
            VarDecl::scalar("got", 0, 9, 0),
            VarDecl::scalar("seen", 0, 9, 0),
        ],
        locations: vec!["r0".into(), "r1".into()],
        initial: 0,
        transitions: vec![{
            let mut t = Transition::new(0, 1);
            t.sync = Some(tdve_core::Sync::Recv {
                channel: "ch".into(),
                target: Some(LValue::scalar("got")),
            });
            // receiver effects observe the payload (copied before they run)
            t.effects.push((LValue::scalar("seen"), Expr::var("got")));
            t
        }],
        accepting: Default::default(),
        span: None,
    });
    m
}

#[test]
fn rendezvous_copies_payload_before_receiver_effects() {
    let m = rendezvous_model();
    let cm = CompiledModel::compile(&m).unwrap();
    let succ = cm.successors(&cm.initial_state()).unwrap();
    assert_eq!(succ.len(), 1);
    let (label, next) = &succ[0];
    assert!(matches!(label, Label::Rendezvous { .. }));
    let got = cm.layout.local_slots(1, "got").unwrap().0.start;
    let seen = cm.layout.local_slots(1, "seen").unwrap().0.start;
    let x = cm.layout.global_slots("x").unwrap().0.start;
    assert_eq!(next.values[x], 0); // sender effect
    assert_eq!(next.values[got], 4); // payload = x + 1 read from the pre-state
    assert_eq!(next.values[seen], 4); // receiver effect sees the payload
}

/// Ring of processes passing a token through rendezvous, with enough
/// branching to exercise dedup. Used for oracle agreement.
fn ring_model(n: usize) -> Model {
    let mut m = Model::empty();
    m.globals.push(VarDecl::scalar("token", 0, n as i64, 0));
    m.processes.push(Process {
        name: "Mixer".into(),
        locals: vec![],
        locations: vec!["m0".into(), "m1".into()],
        initial: 0,
        transitions: vec![
            Transition::new(0, 1)
                .with_guard(Expr::eq(Expr::var("token"), Expr::Int(0)))
                .with_effect(LValue::scalar("token"), Expr::Int(1)),
            Transition::new(1, 0).with_effect(LValue::scalar("token"), Expr::Int(0)),
        ],
        accepting: Default::default(),
        span: None,
    });
    for i in 0..n {
        m.processes.push(Process {
            name: format!("W{i}"),
            locals: vec![VarDecl::scalar("c", 0, 3, 0)],
            locations: vec!["w0".into(), "w1".into()],
            initial: 0,
            transitions: vec![
                Transition::new(0, 1)
                    .with_guard(Expr::eq(Expr::var("token"), Expr::Int(1)))
                    .with_effect(
                        LValue::scalar("c"),
                        Expr::bin(
                            tdve_core::BinOp::Mod,
                            Expr::bin(tdve_core::BinOp::Add, Expr::var("c"), Expr::Int(1)),
                            Expr::Int(4),
                        ),
                    ),
                Transition::new(1, 0),
            ],
            accepting: Default::default(),
            span: None,
        });
    }
    m
}

#[test]
fn explore_agrees_with_naive_dfs_enumeration() {
    for model in [two_state_model(), rendezvous_model(), ring_model(2)] {
        let cm = CompiledModel::compile(&model).unwrap();
        let g = explore(&cm, &ExploreConfig::default()).unwrap();
        let naive = Naive::new(&model);
        let (states, edges) = naive.enumerate();
        assert_eq!(g.state_count(), states.len());
        assert_eq!(g.edge_count(), edges);
        let explored: HashSet<State> = g.states.iter().cloned().collect();
        assert_eq!(explored, states);
    }
}

#[test]
fn worker_count_does_not_change_the_graph() {
    let model = ring_model(3);
    let g1 = explore(
        &CompiledModel::compile(&model).unwrap(),
        &ExploreConfig::with_workers(1),
    )
    .unwrap();
    for workers in [2, 4] {
        let g = explore(
            &CompiledModel::compile(&model).unwrap(),
            &ExploreConfig::with_workers(workers),
        )
        .unwrap();
        assert_eq!(g.state_count(), g1.state_count(), "workers={workers}");
        assert_eq!(g.edge_count(), g1.edge_count(), "workers={workers}");
        assert_eq!(g.states, g1.states, "workers={workers}");
        assert_eq!(g.targets, g1.targets, "workers={workers}");
        assert_eq!(g.labels, g1.labels, "workers={workers}");
        assert_eq!(g.initial, g1.initial, "workers={workers}");
    }
}

#[test]
fn check_safety_false_predicate_holds_without_trace() {
    let cm = CompiledModel::compile(&two_state_model()).unwrap();
    let v = check_safety(&cm, &Expr::Bool(false), &ExploreConfig::default()).unwrap();
    assert!(v.holds);
    assert!(v.trace.is_none());
    assert_eq!(v.stats.states, 2);
}

#[test]
fn check_safety_agrees_with_naive_dfs() {
    let model = ring_model(2);
    let bads = [
        Expr::eq(Expr::var("token"), Expr::Int(1)),
        Expr::eq(Expr::var("token"), Expr::Int(2)),
        Expr::Bool(false),
    ];
    let naive = Naive::new(&model);
    for bad in &bads {
        let cm = CompiledModel::compile(&model).unwrap();
        let v = check_safety(&cm, bad, &ExploreConfig::default()).unwrap();
        assert_eq!(v.holds, !naive.reachable_bad(bad), "bad={bad}");
    }
}

#[test]
fn violation_trace_replays_through_successors() {
    let model = ring_model(2);
    let cm = CompiledModel::compile(&model).unwrap();
    let bad = Expr::eq(Expr::var("token"), Expr::Int(1));
    let v = check_safety(&cm, &bad, &ExploreConfig::with_workers(2)).unwrap();
    assert!(!v.holds);
    let trace = v.trace.unwrap();
    assert_eq!(trace.steps.first().unwrap().0, cm.initial_state());
    for i in 0..trace.steps.len() - 1 {
        let (s, label) = &trace.steps[i];
        let label = label.expect("interior steps are labeled");
        let succ = cm.successors(s).unwrap();
        let hit = succ
            .iter()
            .find(|(l, _)| *l == label)
            .unwrap_or_else(|| panic!("label {label:?} not among successors"));
        assert_eq!(hit.1, trace.steps[i + 1].0);
    }
    // shortest: token==1 is reachable in one step
    assert_eq!(trace.steps.len(), 2);
}

#[test]
fn state_budget_yields_resource_error_with_partial_stats() {
    let model = ring_model(3);
    let cm = CompiledModel::compile(&model).unwrap();
    let cfg = ExploreConfig {
        workers: 1,
        max_states: Some(5),
    };
    match explore(&cm, &cfg) {
        Err(tdve_engine::ExploreError::Budget { stats }) => {
            assert!(stats.states >= 5);
        }
        other => panic!(
            "expected budget error, got {:?}",
            other.map(|g| g.state_count())
        ),
    }
}
