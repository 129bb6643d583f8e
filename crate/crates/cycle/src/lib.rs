//! Accepting-cycle detection on explored state graphs.
//!
//! Two parallel-friendly detectors are provided. One eliminates states by
//! repeated topological sorting rounds: restrict to states reachable from
//! accepting states' successors, peel zero in-degree states until a
//! fixpoint; a nonempty fixpoint means the sort failed, so a cycle through
//! an accepting state exists. The other propagates, for every state, the
//! maximal accepting state among its proper predecessors; an accepting
//! state that is its own maximal accepting predecessor closes a cycle, and
//! states that served as maximal predecessors without closing one are
//! removed from the accepting set before the next round.
//!
//! Both run on the fully explored graph and answer exactly the question the
//! strongly-connected-component oracle answers: is there a cycle, reachable
//! from the initial state, through an accepting state?

mod property;
mod witness;

pub use property::{build_property, compose_property, PropertyTemplate};
pub use witness::{check_liveness, Algorithm, LivenessError};

use std::collections::VecDeque;
use tdve_engine::StateGraph;

/// States reachable from the initial state. Explored graphs are reachable by
/// construction; synthetic test graphs need not be.
fn reachable(g: &StateGraph) -> Vec<bool> {
    let n = g.state_count();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[g.initial as usize] = true;
    queue.push_back(g.initial);
    while let Some(v) = queue.pop_front() {
        for &w in g.successors_of(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Topological-elimination detector ("one way to catch them young").
pub fn owcty(g: &StateGraph) -> bool {
    let n = g.state_count();
    if n == 0 {
        return false;
    }
    let mut in_set = reachable(g);
    loop {
        let before = count(&in_set);
        if before == 0 {
            return false;
        }

        // Reachability restriction: keep states reachable from an accepting
        // member through at least one edge.
        let mut next = vec![false; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            if in_set[v] && g.accepting[v] {
                for &w in g.successors_of(v as u32) {
                    if in_set[w as usize] && !next[w as usize] {
                        next[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in g.successors_of(v) {
                if in_set[w as usize] && !next[w as usize] {
                    next[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        let mut set = next;

        // Topological elimination: peel zero in-degree states.
        let mut indeg = vec![0u32; n];
        for v in 0..n {
            if set[v] {
                for &w in g.successors_of(v as u32) {
                    if set[w as usize] {
                        indeg[w as usize] += 1;
                    }
                }
            }
        }
        let mut peel: VecDeque<u32> = (0..n)
            .filter(|&v| set[v] && indeg[v] == 0)
            .map(|v| v as u32)
            .collect();
        while let Some(v) = peel.pop_front() {
            set[v as usize] = false;
            for &w in g.successors_of(v) {
                if set[w as usize] {
                    indeg[w as usize] -= 1;
                    if indeg[w as usize] == 0 {
                        peel.push_back(w);
                    }
                }
            }
        }

        let after = count(&set);
        in_set = set;
        if after == before {
            // Fixpoint: the sort failed on a nonempty set.
            return after > 0;
        }
    }
}

fn count(v: &[bool]) -> usize {
    v.iter().filter(|&&b| b).count()
}

/// Maximal-accepting-predecessor detector. The linear order on states is
/// their canonical index order.
pub fn map(g: &StateGraph) -> bool {
    let n = g.state_count();
    if n == 0 {
        return false;
    }
    let alive = reachable(g);
    let mut accepting: Vec<bool> = (0..n).map(|v| alive[v] && g.accepting[v]).collect();
    const NONE: u32 = u32::MAX;
    loop {
        if count(&accepting) == 0 {
            return false;
        }
        // Propagate the maximal accepting proper predecessor to fixpoint.
        let mut best = vec![NONE; n];
        let mut queue: VecDeque<u32> = VecDeque::new();
        let mut queued = vec![false; n];
        for v in 0..n {
            if alive[v] {
                queue.push_back(v as u32);
                queued[v] = true;
            }
        }
        while let Some(v) = queue.pop_front() {
            queued[v as usize] = false;
            let carry = if accepting[v as usize] {
                best_of(best[v as usize], v)
            } else {
                best[v as usize]
            };
            if carry == NONE {
                continue;
            }
            for &w in g.successors_of(v) {
                if !alive[w as usize] {
                    continue;
                }
                let improved = best_of(best[w as usize], carry);
                if improved != best[w as usize] {
                    best[w as usize] = improved;
                    if !queued[w as usize] {
                        queued[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        // An accepting state that is its own maximal accepting predecessor
        // lies on an accepting cycle.
        for v in 0..n {
            if accepting[v] && best[v] == v as u32 {
                return true;
            }
        }
        // Every state that served as someone's maximal accepting
        // predecessor is provably not on an accepting cycle this round.
        let mut mentioned = vec![false; n];
        for v in 0..n {
            if alive[v] && best[v] != NONE {
                mentioned[best[v] as usize] = true;
            }
        }
        let mut deleted = false;
        for v in 0..n {
            if accepting[v] && mentioned[v] {
                accepting[v] = false;
                deleted = true;
            }
        }
        if !deleted {
            // No accepting state is anyone's predecessor: nothing can close
            // a cycle anymore.
            return false;
        }
    }
}

fn best_of(a: u32, b: u32) -> u32 {
    if a == u32::MAX {
        b
    } else if b == u32::MAX {
        a
    } else {
        a.max(b)
    }
}

/// Strongly connected components of the reachable subgraph, iteratively
/// (explored graphs are far too deep for recursion). Returns the component
/// index per state (`u32::MAX` for unreachable states) and the component
/// count.
pub fn scc(g: &StateGraph) -> (Vec<u32>, u32) {
    const UNSET: u32 = u32::MAX;
    let n = g.state_count();
    let alive = reachable(g);
    let mut index = vec![UNSET; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut comp_count = 0u32;

    // Explicit DFS frames: (vertex, next edge offset).
    let mut call: Vec<(u32, usize)> = Vec::new();
    for root in 0..n {
        if !alive[root] || index[root] != UNSET {
            continue;
        }
        call.push((root as u32, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            let succ = g.successors_of(v);
            if *ei < succ.len() {
                let w = succ[*ei];
                *ei += 1;
                if !alive[w as usize] {
                    continue;
                }
                if index[w as usize] == UNSET {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        comp[w as usize] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    (comp, comp_count)
}

/// Ground truth by component decomposition: an accepting cycle exists iff
/// some component holds an accepting state and is cyclic (two or more
/// states, or a single state with a self-loop).
pub fn oracle_cycle(g: &StateGraph) -> bool {
    let n = g.state_count();
    let (comp, comp_count) = scc(g);
    if comp_count == 0 {
        return false;
    }
    let mut size = vec![0u32; comp_count as usize];
    for v in 0..n {
        if comp[v] != u32::MAX {
            size[comp[v] as usize] += 1;
        }
    }
    for v in 0..n {
        if comp[v] == u32::MAX || !g.accepting[v] {
            continue;
        }
        if size[comp[v] as usize] >= 2 {
            return true;
        }
        if g.successors_of(v as u32).contains(&(v as u32)) {
            return true;
        }
    }
    false
}
