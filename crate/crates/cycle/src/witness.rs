//! Liveness checking: explore the product graph, run a detector, and
//! recover a lasso witness through the component decomposition when the
//! answer is "violated".

use crate::{map as map_detect, oracle_cycle, owcty, scc};
use std::collections::{HashMap, VecDeque};
use tdve_core::Model;
use tdve_engine::{
    explore, CompileError, CompiledModel, ExploreConfig, ExploreError, Label, StateGraph, Trace,
    Verdict,
};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Owcty,
    Map,
    Oracle,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "owcty" => Ok(Algorithm::Owcty),
            "map" => Ok(Algorithm::Map),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(format!("unknown algorithm '{other}'")),
        }
    }
}

#[derive(Debug, Error)]
pub enum LivenessError {
    #[error("model has no property process; compose a claim first")]
    NoProperty,
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Explore(#[from] ExploreError),
}

pub fn detect(algorithm: Algorithm, g: &StateGraph) -> bool {
    match algorithm {
        Algorithm::Owcty => owcty(g),
        Algorithm::Map => map_detect(g),
        Algorithm::Oracle => oracle_cycle(g),
    }
}

/// Check the composed model (system plus property process) for an accepting
/// cycle. Holds when none exists; otherwise the verdict carries a lasso
/// trace whose looping part starts at `trace.cycle_start`.
pub fn check_liveness(
    model: &Model,
    algorithm: Algorithm,
    cfg: &ExploreConfig,
) -> Result<Verdict, LivenessError> {
    if model.property.is_none() {
        return Err(LivenessError::NoProperty);
    }
    let cm = CompiledModel::compile(model)?;
    let g = explore(&cm, cfg)?;
    let stats = g.stats;
    if !detect(algorithm, &g) {
        return Ok(Verdict {
            holds: true,
            trace: None,
            stats,
        });
    }
    let trace = lasso_witness(&g);
    Ok(Verdict {
        holds: false,
        trace: Some(trace),
        stats,
    })
}

/// Shortest-stem lasso: breadth-first path from the initial state to an
/// accepting state lying in a cyclic component, then a cycle within that
/// component back to it.
fn lasso_witness(g: &StateGraph) -> Trace {
    let n = g.state_count();
    let (comp, comp_count) = scc(g);
    let mut size = vec![0u32; comp_count as usize];
    for v in 0..n {
        if comp[v] != u32::MAX {
            size[comp[v] as usize] += 1;
        }
    }
    let cyclic_accepting = |v: u32| -> bool {
        g.accepting[v as usize]
            && comp[v as usize] != u32::MAX
            && (size[comp[v as usize] as usize] >= 2 || g.successors_of(v).contains(&v))
    };

    // Stem.
    let mut parent: Vec<Option<(u32, Label)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[g.initial as usize] = true;
    queue.push_back(g.initial);
    let mut target = cyclic_accepting(g.initial).then_some(g.initial);
    'bfs: while target.is_none() {
        let Some(v) = queue.pop_front() else { break };
        for (w, label) in g.edges_of(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = Some((v, label));
                if cyclic_accepting(w) {
                    target = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
    }
    let target = target.expect("detector answered true, so a witness exists");

    let mut stem: Vec<u32> = vec![target];
    let mut stem_labels: Vec<Label> = Vec::new();
    let mut cur = target;
    while let Some((p, l)) = parent[cur as usize] {
        stem.push(p);
        stem_labels.push(l);
        cur = p;
    }
    stem.reverse();
    stem_labels.reverse();

    let cycle_edges = cycle_through(g, target, &comp);

    // Assemble the steps: stem states, then the cycle's interior states,
    // closing back on the target.
    let mut steps: Vec<(tdve_core::State, Option<Label>)> = Vec::new();
    for (i, &v) in stem.iter().enumerate().take(stem.len() - 1) {
        steps.push((g.states[v as usize].clone(), Some(stem_labels[i])));
    }
    steps.push((g.states[target as usize].clone(), Some(cycle_edges[0].1)));
    for &(from, label, _) in &cycle_edges[1..] {
        steps.push((g.states[from as usize].clone(), Some(label)));
    }
    steps.push((g.states[target as usize].clone(), None));
    Trace {
        steps,
        cycle_start: Some(stem.len() - 1),
    }
}

/// Edge path `target -> ... -> target` of length at least one, staying in
/// the target's component.
fn cycle_through(g: &StateGraph, target: u32, comp: &[u32]) -> Vec<(u32, Label, u32)> {
    for (w, label) in g.edges_of(target) {
        if w == target {
            return vec![(target, label, target)];
        }
    }
    let c = comp[target as usize];
    let mut parent: HashMap<u32, (u32, Label)> = HashMap::new();
    let mut queue = VecDeque::new();
    for (w, label) in g.edges_of(target) {
        if comp[w as usize] == c && !parent.contains_key(&w) {
            parent.insert(w, (target, label));
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for (w, label) in g.edges_of(v) {
            if w == target {
                let mut edges = vec![(v, label, target)];
                let mut cur = v;
                while cur != target {
                    let (p, pl) = parent[&cur];
                    edges.push((p, pl, cur));
                    cur = p;
                }
                edges.reverse();
                return edges;
            }
            if comp[w as usize] == c && !parent.contains_key(&w) {
                parent.insert(w, (v, label));
                queue.push_back(w);
            }
        }
    }
    unreachable!("target lies in a cyclic component")
}
