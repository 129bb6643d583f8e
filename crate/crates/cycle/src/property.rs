//! Never-claim generation for the three supported property templates.
//!
//! The claim observes the system step by step (its guards read the shared
//! state of the step's source) and accepts exactly the runs violating the
//! template, so an accepting cycle in the product witnesses a violation.

use std::collections::BTreeSet;
use tdve_core::{Expr, Model, Process, Transition};

/// The supported temporal templates over global-state predicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyTemplate {
    /// `G p`: p holds in every state.
    AlwaysP(Expr),
    /// `F p`: p eventually holds.
    EventuallyP(Expr),
    /// `G (p -> F q)`: every p is answered by a later q.
    ResponsePQ(Expr, Expr),
}

/// Build the never-claim process recognizing violations of the template.
pub fn build_property(template: &PropertyTemplate) -> Process {
    let (locations, initial, accepting, transitions): (
        Vec<String>,
        usize,
        Vec<usize>,
        Vec<Transition>,
    ) = match template {
        PropertyTemplate::AlwaysP(p) => (
            vec!["watch".into(), "bad".into()],
            0,
            vec![1],
            vec![
                Transition::new(0, 0).with_guard(Expr::Bool(true)),
                Transition::new(0, 1).with_guard(Expr::not(p.clone())),
                Transition::new(1, 1).with_guard(Expr::Bool(true)),
            ],
        ),
        // Accepts while p never holds: the claim blocks once p is true,
        // pruning runs that satisfied the property.
        PropertyTemplate::EventuallyP(p) => (
            vec!["wait".into()],
            0,
            vec![0],
            vec![Transition::new(0, 0).with_guard(Expr::not(p.clone()))],
        ),
        PropertyTemplate::ResponsePQ(p, q) => (
            vec!["idle".into(), "await".into()],
            0,
            vec![1],
            vec![
                Transition::new(0, 0).with_guard(Expr::Bool(true)),
                Transition::new(0, 1).with_guard(Expr::and(p.clone(), Expr::not(q.clone()))),
                Transition::new(1, 1).with_guard(Expr::not(q.clone())),
            ],
        ),
    };
    Process {
        name: "claim".into(),
        locals: vec![],
        locations,
        initial,
        transitions,
        accepting: accepting.into_iter().collect::<BTreeSet<_>>(),
        span: None,
    }
}

/// Append a never-claim to a model and mark it as the property process. The
/// claim is renamed if its name is taken.
pub fn compose_property(model: &Model, claim: Process) -> Model {
    let mut out = model.clone();
    let mut claim = claim;
    while out.name_taken(&claim.name) || out.processes.iter().any(|p| p.name == claim.name) {
        claim.name.insert(0, '_');
    }
    out.property = Some(out.processes.len());
    out.processes.push(claim);
    out
}
