//! Latent projection and separability-based node connectivity.

use crate::error::{Error, Result};
use crate::graph::{Dmg, Edge, NodeId, NodeSet};
use crate::separation::mu_connected;
use crate::walk::Mark;
use rayon::prelude::*;

/// Latent projection of a graph onto a kept node set.
#[derive(Debug, Clone)]
pub struct Projection {
    pub graph: Dmg,
    /// Old node id -> new node id for kept nodes.
    pub index_map: Vec<Option<NodeId>>,
}

/// Non-loop edge traversals incident to `m`, as (other endpoint, mark at the
/// other endpoint, mark at `m`).
fn incidences(g: &Dmg, m: NodeId) -> Vec<(NodeId, Mark, Mark)> {
    let mut out = Vec::new();
    for v in 0..g.n() {
        if v == m {
            continue;
        }
        if g.has_directed(v, m) {
            out.push((v, Mark::Tail, Mark::Head));
        }
        if g.has_directed(m, v) {
            out.push((v, Mark::Head, Mark::Tail));
        }
        if g.has_bidirected(v, m) {
            out.push((v, Mark::Head, Mark::Head));
        }
    }
    out
}

/// Computes the latent projection m(g, o): saturate the graph with the
/// endpoint-identical edge of every noncolliding triroute through a
/// marginalized node, then take the induced subgraph on `o`.
///
/// The saturation repeats a deterministic ascending scan until no edge can
/// be added; additions are monotone, so the result does not depend on the
/// scan order.
pub fn latent_project(g: &Dmg, o: &NodeSet) -> Result<Projection> {
    g.check_set(o)?;
    let n = g.n();
    let marginalized: Vec<NodeId> = (0..n).filter(|v| !o.contains(*v)).collect();
    let mut work = g.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for &m in &marginalized {
            let inc = incidences(&work, m);
            for &(alpha, mark_alpha, mark_m_in) in &inc {
                for &(beta, mark_beta, mark_m_out) in &inc {
                    // noncolliding: at most one head at m
                    if mark_m_in == Mark::Head && mark_m_out == Mark::Head {
                        continue;
                    }
                    let e = match (mark_alpha, mark_beta) {
                        (Mark::Tail, Mark::Head) => Edge::directed(alpha, beta),
                        (Mark::Head, Mark::Tail) => Edge::directed(beta, alpha),
                        (Mark::Head, Mark::Head) => Edge::bidirected(alpha, beta),
                        // a tail at an endpoint forces a head at m, so two
                        // tails would make m a collider
                        (Mark::Tail, Mark::Tail) => unreachable!(
                            "noncolliding triroute cannot have tails at both endpoints"
                        ),
                    };
                    if !work.has_edge(&e)? {
                        work = work.add_edge(&e)?;
                        changed = true;
                    }
                }
            }
        }
    }
    let (graph, index_map) = work.induced_subgraph(o)?;
    Ok(Projection { graph, index_map })
}

const INSEPARABLE_MAX_NODES: usize = 24;

fn check_connectivity_guard(g: &Dmg) -> Result<()> {
    if g.n() > INSEPARABLE_MAX_NODES {
        return Err(Error::GuardExceeded {
            guard: "inseparability search",
            detail: format!(
                "{} nodes exceeds the limit of {INSEPARABLE_MAX_NODES}",
                g.n()
            ),
        });
    }
    Ok(())
}

/// Is `beta` inseparable from `alpha`: mu-connected for every conditioning
/// set avoiding `alpha`? Exhaustive over subsets, ascending by size so small
/// separating sets exit early.
pub fn inseparable(g: &Dmg, alpha: NodeId, beta: NodeId) -> Result<bool> {
    check_connectivity_guard(g)?;
    g.check_set(&NodeSet::from_iter([alpha, beta]))?;
    let candidates: Vec<NodeId> = (0..g.n()).filter(|&v| v != alpha).collect();
    let mut subset = Vec::new();
    for size in 0..=candidates.len() {
        if separating_set_exists(g, alpha, beta, &candidates, size, 0, &mut subset)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn separating_set_exists(
    g: &Dmg,
    alpha: NodeId,
    beta: NodeId,
    candidates: &[NodeId],
    size: usize,
    start: usize,
    subset: &mut Vec<NodeId>,
) -> Result<bool> {
    if subset.len() == size {
        let c = NodeSet::from_iter(subset.iter().copied());
        return Ok(!mu_connected(g, alpha, beta, &c)?);
    }
    for i in start..candidates.len() {
        subset.push(candidates[i]);
        let found = separating_set_exists(g, alpha, beta, candidates, size, i + 1, subset)?;
        subset.pop();
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Separability-based node connectivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Connectivity {
    /// Number of nodes `beta` is inseparable from.
    pub con_in: usize,
    /// Number of nodes inseparable from `beta`.
    pub con_out: usize,
    /// max(con_in, con_out)
    pub con: usize,
}

pub fn connectivity(g: &Dmg, beta: NodeId) -> Result<Connectivity> {
    check_connectivity_guard(g)?;
    g.check_set(&NodeSet::singleton(beta))?;
    let results: Vec<(bool, bool)> = (0..g.n())
        .into_par_iter()
        .map(|alpha| {
            let into = inseparable(g, alpha, beta).expect("guard checked");
            let from = inseparable(g, beta, alpha).expect("guard checked");
            (into, from)
        })
        .collect();
    let con_in = results.iter().filter(|r| r.0).count();
    let con_out = results.iter().filter(|r| r.1).count();
    Ok(Connectivity {
        con_in,
        con_out,
        con: con_in.max(con_out),
    })
}

/// Number of nodes with an edge pointing at `beta` (head at `beta`),
/// counting loops.
pub fn indegree(g: &Dmg, beta: NodeId) -> usize {
    (0..g.n())
        .filter(|&a| g.has_directed(a, beta) || g.has_bidirected(a, beta))
        .count()
}

/// Is every node's connectivity at most `m`?
pub fn is_m_sparse(g: &Dmg, m: usize) -> Result<bool> {
    for beta in 0..g.n() {
        if connectivity(g, beta)?.con > m {
            return Ok(false);
        }
    }
    Ok(true)
}
