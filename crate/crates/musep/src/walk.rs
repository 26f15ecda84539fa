//! Walks in a DMG and collider classification.

use crate::error::{Error, Result};
use crate::graph::{Dmg, Edge, NodeId};
use std::fmt;

/// Edge mark at an endpoint: every edge has a head at each endpoint except
/// the tail end of a directed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Tail,
    Head,
}

/// Traversal direction of an edge within a walk. Needed to disambiguate the
/// two ways of walking a directed loop; for bidirected edges it fixes which
/// stored endpoint the step leaves from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// tail -> head for directed edges, `a` -> `b` for bidirected.
    Forward,
    /// head -> tail for directed edges, `b` -> `a` for bidirected.
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub edge: Edge,
    pub orientation: Orientation,
}

impl Step {
    pub fn new(edge: Edge, orientation: Orientation) -> Self {
        Self { edge, orientation }
    }

    /// (from, to) node of this traversal.
    pub fn nodes(&self) -> (NodeId, NodeId) {
        let (x, y) = self.edge.endpoints();
        match self.orientation {
            Orientation::Forward => (x, y),
            Orientation::Reverse => (y, x),
        }
    }

    /// (mark at the departure instance, mark at the arrival instance).
    pub fn marks(&self) -> (Mark, Mark) {
        match (&self.edge, self.orientation) {
            (Edge::Directed { .. }, Orientation::Forward) => (Mark::Tail, Mark::Head),
            (Edge::Directed { .. }, Orientation::Reverse) => (Mark::Head, Mark::Tail),
            (Edge::Bidirected { .. }, _) => (Mark::Head, Mark::Head),
        }
    }
}

/// A walk: a start node and a chained sequence of edge traversals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub start: NodeId,
    pub steps: Vec<Step>,
}

/// Classification of one node instance on a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Endpoint,
    Collider,
    Noncollider,
}

impl Walk {
    pub fn new(start: NodeId, steps: Vec<Step>) -> Self {
        Self { start, steps }
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> NodeId {
        self.steps.last().map_or(self.start, |s| s.nodes().1)
    }

    /// Node at each instance, `steps.len() + 1` entries.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out = vec![self.start];
        out.extend(self.steps.iter().map(|s| s.nodes().1));
        out
    }

    /// Mark of the final step at the end node, if any.
    pub fn final_mark(&self) -> Option<Mark> {
        self.steps.last().map(|s| s.marks().1)
    }

    /// Collider instances (node, instance index), counted with multiplicity.
    pub fn colliders(&self) -> Vec<(NodeId, usize)> {
        let nodes = self.nodes();
        (1..self.steps.len())
            .filter(|&i| {
                self.steps[i - 1].marks().1 == Mark::Head && self.steps[i].marks().0 == Mark::Head
            })
            .map(|i| (nodes[i], i))
            .collect()
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for s in &self.steps {
            let arrow = match (&s.edge, s.marks()) {
                (Edge::Bidirected { .. }, _) => "<->",
                (_, (Mark::Tail, Mark::Head)) => "->",
                _ => "<-",
            };
            write!(f, " {} {}", arrow, s.nodes().1)?;
        }
        Ok(())
    }
}

/// Checks that the walk's edges exist in `g` and chain correctly, and
/// classifies every node instance. Endpoints are neither colliders nor
/// noncolliders; an interior instance is a collider iff both adjacent
/// traversals put a head on it.
pub fn validate_walk(g: &Dmg, walk: &Walk) -> Result<Vec<Role>> {
    if walk.start >= g.n() {
        return Err(Error::NodeOutOfRange {
            index: walk.start,
            n: g.n(),
        });
    }
    let mut at = walk.start;
    for (i, step) in walk.steps.iter().enumerate() {
        let (from, to) = step.nodes();
        if from != at {
            return Err(Error::InvalidWalk(format!(
                "step {i} leaves {from} but the walk is at {at}"
            )));
        }
        if !g.has_edge(&step.edge)? {
            return Err(Error::InvalidWalk(format!(
                "step {i} uses absent edge {}",
                step.edge
            )));
        }
        at = to;
    }

    let mut roles = vec![Role::Endpoint; walk.steps.len() + 1];
    for (i, pair) in walk.steps.windows(2).enumerate() {
        let arriving = pair[0].marks().1;
        let departing = pair[1].marks().0;
        roles[i + 1] = if arriving == Mark::Head && departing == Mark::Head {
            Role::Collider
        } else {
            Role::Noncollider
        };
    }
    Ok(roles)
}
