//! Weight: least upper bound on the length of chains of queued arguments
//! rooted at an endpoint of a given type.
//!
//! The reachable head-normal states form a finite graph. External choices
//! have cost-1 edges to their payloads and cost-0 edges to their
//! continuations; a variable has a cost-0 edge to its bound. The weight is
//! the longest path, or infinite when a positive-cost cycle or `Top` is
//! reachable.

use std::collections::HashMap;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;

use super::canon::CanonKey;
use super::{canon_key, BoundEnv, BudgetExceeded, Polarity, TyVar, Type, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl Weight {
    pub fn is_finite(self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    fn plus(self, k: u64) -> Weight {
        match self {
            Weight::Finite(n) => Weight::Finite(n + k),
            Weight::Infinite => Weight::Infinite,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(n) => write!(f, "{n}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

pub fn weight(delta: &BoundEnv, t: &Type) -> Result<Weight, BudgetExceeded> {
    weight_with(delta, t, DEFAULT_BUDGET)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Node {
    Sink,
    Top,
    Inner,
}

/// Like [`weight`] with an explicit bound on the number of states.
///
/// Variables marked as witnessed in `delta` count as weight 0. A variable
/// missing from `delta` violates the precondition and is treated as `Top`.
pub fn weight_with(delta: &BoundEnv, t: &Type, budget: usize) -> Result<Weight, BudgetExceeded> {
    let mut graph: DiGraph<Node, u64> = DiGraph::new();
    let mut index: HashMap<CanonKey, NodeIndex> = HashMap::new();
    let mut pending: Vec<(NodeIndex, BoundEnv, Type)> = Vec::new();

    let mut intern = |graph: &mut DiGraph<Node, u64>,
                      pending: &mut Vec<(NodeIndex, BoundEnv, Type)>,
                      delta: BoundEnv,
                      t: Type|
     -> Result<NodeIndex, BudgetExceeded> {
        let key = canon_key(&delta, &[&t]);
        if let Some(&n) = index.get(&key) {
            return Ok(n);
        }
        if index.len() >= budget {
            return Err(BudgetExceeded(budget));
        }
        let n = graph.add_node(Node::Inner);
        index.insert(key, n);
        pending.push((n, delta, t));
        Ok(n)
    };

    let root = intern(&mut graph, &mut pending, delta.clone(), t.clone())?;
    let mut sink = None;
    while let Some((n, delta, t)) = pending.pop() {
        match t.unfold_all() {
            Type::End | Type::Base(_) | Type::Choice(Polarity::Internal, _) => graph[n] = Node::Sink,
            Type::Top | Type::Bound(_) => graph[n] = Node::Top,
            Type::Rec(..) => graph[n] = Node::Top,
            Type::Free(v) => match delta.lookup(&v) {
                Some(e) if e.witnessed => graph[n] = Node::Sink,
                Some(e) => {
                    let bound = e.bound.clone();
                    let m = intern(&mut graph, &mut pending, delta, bound)?;
                    graph.add_edge(n, m, 0);
                }
                None => graph[n] = Node::Top,
            },
            Type::Choice(Polarity::External, branches) => {
                for b in branches.iter() {
                    let var = TyVar::fresh(b.var.as_str());
                    let inner = delta.extended(var.clone(), b.bound.clone());
                    let (payload, cont) = b.open_with(&Type::Free(var));
                    let p = match payload {
                        Some(p) => intern(&mut graph, &mut pending, inner.clone(), p)?,
                        None => *sink.get_or_insert_with(|| graph.add_node(Node::Sink)),
                    };
                    graph.add_edge(n, p, 1);
                    let c = intern(&mut graph, &mut pending, inner, cont)?;
                    graph.add_edge(n, c, 0);
                }
            }
        }
    }

    // tarjan_scc yields components in reverse topological order
    let mut value: Vec<Option<Weight>> = vec![None; graph.node_count()];
    for comp in tarjan_scc(&graph) {
        let members: Vec<NodeIndex> = comp.clone();
        let inside = |m: NodeIndex| members.contains(&m);
        let mut w = Weight::Finite(0);
        for &n in &comp {
            if graph[n] == Node::Top {
                w = Weight::Infinite;
            }
            for e in graph.edges(n) {
                if inside(e.target()) {
                    if *e.weight() > 0 {
                        w = Weight::Infinite;
                    }
                } else {
                    let target = value[e.target().index()].expect("successor component already evaluated");
                    w = w.max(target.plus(*e.weight()));
                }
            }
        }
        for &n in &comp {
            value[n.index()] = Some(w);
        }
    }
    Ok(value[root.index()].expect("root evaluated"))
}
