//! Directed mixed graphs (DMGs) over dense integer node indices.
//!
//! A DMG has directed edges `a -> b` and bidirected edges `a <-> b`; loops of
//! both kinds are allowed. Edge relations are stored as bit matrices, node
//! sets as word-blocked bitsets, so all core operations are cheap bit work.

use crate::error::{Error, Result};
use std::fmt;

/// Index of a node in `0..n`.
pub type NodeId = usize;

const BITS: usize = 64;

#[inline]
fn block_count(n: usize) -> usize {
    n.div_ceil(BITS)
}

/// A set of node indices backed by 64-bit blocks.
///
/// One block for graphs with up to 64 nodes; larger graphs (the reduction
/// instances) spill into more blocks transparently.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NodeSet {
    blocks: Vec<u64>,
}

impl NodeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: NodeId) -> Self {
        let mut s = Self::new();
        s.insert(v);
        s
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut s = Self::new();
        for v in iter {
            s.insert(v);
        }
        s
    }

    /// Set of all nodes `0..n`.
    pub fn full(n: usize) -> Self {
        Self::from_iter(0..n)
    }

    pub fn insert(&mut self, v: NodeId) {
        let b = v / BITS;
        if b >= self.blocks.len() {
            self.blocks.resize(b + 1, 0);
        }
        self.blocks[b] |= 1 << (v % BITS);
    }

    pub fn remove(&mut self, v: NodeId) {
        let b = v / BITS;
        if b < self.blocks.len() {
            self.blocks[b] &= !(1 << (v % BITS));
        }
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        let b = v / BITS;
        b < self.blocks.len() && self.blocks[b] >> (v % BITS) & 1 == 1
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        if other.blocks.len() > self.blocks.len() {
            self.blocks.resize(other.blocks.len(), 0);
        }
        for (b, o) in self.blocks.iter_mut().zip(&other.blocks) {
            *b |= o;
        }
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        self.blocks
            .iter()
            .enumerate()
            .all(|(i, b)| b & !other.blocks.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &b)| {
            let mut bits = b;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i * BITS + t)
                }
            })
        })
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<NodeId> {
        for (i, &b) in self.blocks.iter().enumerate().rev() {
            if b != 0 {
                return Some(i * BITS + (BITS - 1 - b.leading_zeros() as usize));
            }
        }
        None
    }

    /// Order by (cardinality, ascending element sequence); the canonical
    /// order for conditioning sets.
    pub fn canonical_cmp(&self, other: &NodeSet) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        NodeSet::from_iter(iter)
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Square boolean matrix stored as bit rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    row_blocks: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let row_blocks = block_count(n).max(1);
        Self {
            n,
            row_blocks,
            bits: vec![0; row_blocks * n],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.row_blocks + c / BITS] >> (c % BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.bits[r * self.row_blocks + c / BITS];
        if value {
            *w |= 1 << (c % BITS);
        } else {
            *w &= !(1 << (c % BITS));
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff every set bit of `self` is set in `other`.
    pub fn is_submatrix_of(&self, other: &BitMatrix) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & !b == 0)
    }

    fn bytes_into(&self, out: &mut Vec<u8>) {
        for w in &self.bits {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }
}

/// An edge of a DMG. Bidirected endpoints are stored with the smaller index
/// first, so each bidirected edge has a single canonical value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    Directed { tail: NodeId, head: NodeId },
    Bidirected { a: NodeId, b: NodeId },
}

impl Edge {
    pub fn directed(tail: NodeId, head: NodeId) -> Self {
        Edge::Directed { tail, head }
    }

    pub fn bidirected(x: NodeId, y: NodeId) -> Self {
        Edge::Bidirected {
            a: x.min(y),
            b: x.max(y),
        }
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        match *self {
            Edge::Directed { tail, head } => (tail, head),
            Edge::Bidirected { a, b } => (a, b),
        }
    }

    pub fn is_loop(&self) -> bool {
        let (x, y) = self.endpoints();
        x == y
    }

    pub fn is_directed(&self) -> bool {
        matches!(self, Edge::Directed { .. })
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Edge::Directed { tail, head } => write!(f, "{tail} -> {head}"),
            Edge::Bidirected { a, b } => write!(f, "{a} <-> {b}"),
        }
    }
}

/// A directed mixed graph. Immutable after construction: the edit operations
/// return a new graph and leave the receiver untouched.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dmg {
    n: usize,
    dir: BitMatrix,
    bidir: BitMatrix,
}

impl Dmg {
    /// Edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            dir: BitMatrix::new(n),
            bidir: BitMatrix::new(n),
        }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::new(n);
        for e in edges {
            g.insert_edge(&e)?;
        }
        Ok(g)
    }

    /// Complete DMG: `a -> b`, `a <- b`, and `a <-> b` for all pairs,
    /// loops of both kinds included.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for a in 0..n {
            for b in 0..n {
                g.dir.set(a, b, true);
                g.bidir.set(a, b, true);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { index: v, n: self.n })
        }
    }

    pub(crate) fn check_set(&self, s: &NodeSet) -> Result<()> {
        match s.max() {
            Some(m) if m >= self.n => Err(Error::NodeOutOfRange { index: m, n: self.n }),
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn has_directed(&self, tail: NodeId, head: NodeId) -> bool {
        self.dir.get(tail, head)
    }

    #[inline]
    pub fn has_bidirected(&self, x: NodeId, y: NodeId) -> bool {
        self.bidir.get(x, y)
    }

    pub fn has_edge(&self, e: &Edge) -> Result<bool> {
        let (x, y) = e.endpoints();
        self.check_node(x)?;
        self.check_node(y)?;
        Ok(match *e {
            Edge::Directed { tail, head } => self.has_directed(tail, head),
            Edge::Bidirected { a, b } => self.has_bidirected(a, b),
        })
    }

    fn insert_edge(&mut self, e: &Edge) -> Result<()> {
        let (x, y) = e.endpoints();
        self.check_node(x)?;
        self.check_node(y)?;
        match *e {
            Edge::Directed { tail, head } => self.dir.set(tail, head, true),
            Edge::Bidirected { a, b } => {
                // symmetric storage, including the diagonal
                self.bidir.set(a, b, true);
                self.bidir.set(b, a, true);
            }
        }
        Ok(())
    }

    /// New graph with `e` added.
    pub fn add_edge(&self, e: &Edge) -> Result<Dmg> {
        let mut g = self.clone();
        g.insert_edge(e)?;
        Ok(g)
    }

    /// New graph with `e` removed. Removing an absent edge is a no-op.
    pub fn remove_edge(&self, e: &Edge) -> Result<Dmg> {
        let (x, y) = e.endpoints();
        self.check_node(x)?;
        self.check_node(y)?;
        let mut g = self.clone();
        match *e {
            Edge::Directed { tail, head } => g.dir.set(tail, head, false),
            Edge::Bidirected { a, b } => {
                g.bidir.set(a, b, false);
                g.bidir.set(b, a, false);
            }
        }
        Ok(g)
    }

    /// All edges in canonical order: directed by (tail, head), then
    /// bidirected by (a, b) with a <= b.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for t in 0..self.n {
            for h in 0..self.n {
                if self.has_directed(t, h) {
                    out.push(Edge::directed(t, h));
                }
            }
        }
        for a in 0..self.n {
            for b in a..self.n {
                if self.has_bidirected(a, b) {
                    out.push(Edge::bidirected(a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Nodes adjacent to `v` through a non-loop edge of either kind.
    pub fn nonloop_degree(&self, v: NodeId) -> usize {
        (0..self.n)
            .filter(|&w| {
                w != v
                    && (self.has_directed(v, w)
                        || self.has_directed(w, v)
                        || self.has_bidirected(v, w))
            })
            .count()
    }

    /// True iff every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Dmg) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::NodeCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.dir.is_submatrix_of(&other.dir) && self.bidir.is_submatrix_of(&other.bidir))
    }

    /// Ancestors an(c): all nodes with a directed walk (possibly trivial)
    /// into `c`. Always a superset of `c`.
    pub fn ancestors(&self, c: &NodeSet) -> Result<NodeSet> {
        self.check_set(c)?;
        Ok(self.ancestors_unchecked(c))
    }

    pub(crate) fn ancestors_unchecked(&self, c: &NodeSet) -> NodeSet {
        let mut anc = c.clone();
        let mut stack: Vec<NodeId> = c.iter().collect();
        while let Some(v) = stack.pop() {
            for u in 0..self.n {
                if self.has_directed(u, v) && !anc.contains(u) {
                    anc.insert(u);
                    stack.push(u);
                }
            }
        }
        anc
    }

    /// Induced subgraph on `o`, with nodes re-indexed contiguously.
    /// Returns the graph and the old -> new index map.
    pub fn induced_subgraph(&self, o: &NodeSet) -> Result<(Dmg, Vec<Option<NodeId>>)> {
        self.check_set(o)?;
        let kept: Vec<NodeId> = o.iter().collect();
        let mut map = vec![None; self.n];
        for (new, &old) in kept.iter().enumerate() {
            map[old] = Some(new);
        }
        let mut g = Dmg::new(kept.len());
        for (i, &a) in kept.iter().enumerate() {
            for (j, &b) in kept.iter().enumerate() {
                if self.has_directed(a, b) {
                    g.dir.set(i, j, true);
                }
                if self.has_bidirected(a, b) {
                    g.bidir.set(i, j, true);
                }
            }
        }
        Ok((g, map))
    }

    /// Stable byte serialization of the edge matrices; used as a canonical
    /// key when grouping graphs into equivalence classes.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.dir.bytes_into(&mut out);
        self.bidir.bytes_into(&mut out);
        out
    }
}
