//! Mu-separation queries.
//!
//! A walk is mu-connecting from `alpha` to `beta` given `C` when it is
//! nontrivial, `alpha` is not in `C`, its final edge has a head at `beta`,
//! every collider is in an(C) and no noncollider is in `C`. Connectivity is
//! decided by reachability over states `(node, arrival mark)`: when leaving a
//! state, the current node becomes an interior instance whose role is fixed
//! by the arrival mark and the departing mark, so the walk constraints become
//! per-transition constraints. Walks allow unrestricted node repetition,
//! which is exactly why plain state reachability is sound and complete here.

use crate::error::{Error, Result};
use crate::graph::{Dmg, Edge, NodeId, NodeSet};
use crate::walk::{Mark, Orientation, Step, Walk};

/// One admissible edge traversal out of a node.
#[derive(Debug, Clone, Copy)]
struct Transition {
    to: NodeId,
    depart: Mark,
    arrive: Mark,
    edge: Edge,
    orientation: Orientation,
}

/// Precomputed traversal table for one graph; reusable across conditioning
/// sets and sources. Build it once when issuing many queries against the
/// same graph.
pub struct Reach {
    n: usize,
    out: Vec<Vec<Transition>>,
    parents: Vec<Vec<NodeId>>,
}

impl Reach {
    pub fn new(g: &Dmg) -> Self {
        let n = g.n();
        let mut out = vec![Vec::new(); n];
        let mut parents = vec![Vec::new(); n];
        for (h, row) in parents.iter_mut().enumerate() {
            for t in 0..n {
                if g.has_directed(t, h) {
                    row.push(t);
                }
            }
        }
        for t in 0..n {
            for h in 0..n {
                if g.has_directed(t, h) {
                    let edge = Edge::directed(t, h);
                    out[t].push(Transition {
                        to: h,
                        depart: Mark::Tail,
                        arrive: Mark::Head,
                        edge,
                        orientation: Orientation::Forward,
                    });
                    out[h].push(Transition {
                        to: t,
                        depart: Mark::Head,
                        arrive: Mark::Tail,
                        edge,
                        orientation: Orientation::Reverse,
                    });
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                if g.has_bidirected(a, b) {
                    let edge = Edge::bidirected(a, b);
                    out[a].push(Transition {
                        to: b,
                        depart: Mark::Head,
                        arrive: Mark::Head,
                        edge,
                        orientation: Orientation::Forward,
                    });
                    if a != b {
                        out[b].push(Transition {
                            to: a,
                            depart: Mark::Head,
                            arrive: Mark::Head,
                            edge,
                            orientation: Orientation::Reverse,
                        });
                    }
                }
            }
        }
        Self { n, out, parents }
    }

    /// Ancestor closure of `c` over the cached parent lists.
    pub fn ancestors(&self, c: &NodeSet) -> NodeSet {
        let mut anc = c.clone();
        let mut stack: Vec<NodeId> = c.iter().collect();
        while let Some(v) = stack.pop() {
            for &u in &self.parents[v] {
                if !anc.contains(u) {
                    anc.insert(u);
                    stack.push(u);
                }
            }
        }
        anc
    }

    /// Single mu-connectivity query against the cached tables.
    pub fn mu_connected(&self, alpha: NodeId, beta: NodeId, c: &NodeSet) -> bool {
        if c.contains(alpha) {
            return false;
        }
        let an_c = self.ancestors(c);
        self.head_reach(alpha, c, &an_c).contains(beta)
    }

    #[inline]
    fn state(v: NodeId, m: Mark) -> usize {
        2 * v + (m == Mark::Head) as usize
    }

    /// Leaving node `v` after arriving with `m_in`: the instance is a
    /// collider iff both marks are heads, and the corresponding constraint
    /// must hold.
    #[inline]
    fn may_leave(v: NodeId, m_in: Mark, depart: Mark, c: &NodeSet, an_c: &NodeSet) -> bool {
        if m_in == Mark::Head && depart == Mark::Head {
            an_c.contains(v)
        } else {
            !c.contains(v)
        }
    }

    /// Set of nodes reachable from `alpha` with a head arrival, i.e. the
    /// targets of mu-connecting walks given `C`. Assumes `alpha` not in `C`.
    fn head_reach(&self, alpha: NodeId, c: &NodeSet, an_c: &NodeSet) -> NodeSet {
        let mut seen = vec![false; 2 * self.n];
        let mut stack = Vec::new();
        for t in &self.out[alpha] {
            let s = Self::state(t.to, t.arrive);
            if !seen[s] {
                seen[s] = true;
                stack.push((t.to, t.arrive));
            }
        }
        while let Some((v, m_in)) = stack.pop() {
            for t in &self.out[v] {
                if Self::may_leave(v, m_in, t.depart, c, an_c) {
                    let s = Self::state(t.to, t.arrive);
                    if !seen[s] {
                        seen[s] = true;
                        stack.push((t.to, t.arrive));
                    }
                }
            }
        }
        let mut heads = NodeSet::new();
        for v in 0..self.n {
            if seen[Self::state(v, Mark::Head)] {
                heads.insert(v);
            }
        }
        heads
    }
}

/// Is there a mu-connecting walk from `alpha` to `beta` given `c`?
pub fn mu_connected(g: &Dmg, alpha: NodeId, beta: NodeId, c: &NodeSet) -> Result<bool> {
    g.check_set(c)?;
    if alpha >= g.n() || beta >= g.n() {
        return Err(Error::NodeOutOfRange {
            index: alpha.max(beta),
            n: g.n(),
        });
    }
    Ok(Reach::new(g).mu_connected(alpha, beta, c))
}

/// Is `b` mu-separated from `a` given `c`? True when no mu-connecting walk
/// runs from any node of `a` to any node of `b`; vacuously true for empty
/// `a` or `b`, and forced when `a` is contained in `c`.
pub fn mu_separated_sets(g: &Dmg, a: &NodeSet, b: &NodeSet, c: &NodeSet) -> Result<bool> {
    g.check_set(a)?;
    g.check_set(b)?;
    g.check_set(c)?;
    if a.is_empty() || b.is_empty() {
        return Ok(true);
    }
    let an_c = g.ancestors_unchecked(c);
    let reach = Reach::new(g);
    for alpha in a.iter() {
        if c.contains(alpha) {
            continue;
        }
        let heads = reach.head_reach(alpha, c, &an_c);
        for beta in b.iter() {
            if heads.contains(beta) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All-pairs separation slice for a fixed conditioning set.
/// `separated(from, to)` answers "is `to` mu-separated from `from` given C".
#[derive(Debug, Clone)]
pub struct SeparationMatrix {
    conditioning: NodeSet,
    sep: crate::graph::BitMatrix,
}

/// Common face of per-C separation tables: the graph-backed
/// [`SeparationMatrix`] and oracle-backed tables both implement it, so the
/// potential-edge conditions run against either.
pub trait SepTable {
    fn n(&self) -> usize;
    fn conditioning(&self) -> &NodeSet;
    fn separated(&self, from: NodeId, to: NodeId) -> bool;
}

impl SeparationMatrix {
    pub fn new(g: &Dmg, c: &NodeSet) -> Result<Self> {
        g.check_set(c)?;
        let n = g.n();
        let an_c = g.ancestors_unchecked(c);
        let reach = Reach::new(g);
        let mut sep = crate::graph::BitMatrix::new(n);
        for from in 0..n {
            if c.contains(from) {
                for to in 0..n {
                    sep.set(from, to, true);
                }
                continue;
            }
            let heads = reach.head_reach(from, c, &an_c);
            for to in 0..n {
                sep.set(from, to, !heads.contains(to));
            }
        }
        Ok(Self {
            conditioning: c.clone(),
            sep,
        })
    }
}

impl SepTable for SeparationMatrix {
    fn n(&self) -> usize {
        self.sep.n()
    }

    fn conditioning(&self) -> &NodeSet {
        &self.conditioning
    }

    fn separated(&self, from: NodeId, to: NodeId) -> bool {
        self.sep.get(from, to)
    }
}

/// Shortest directed path `from -> ... -> target in c` whose only node in
/// `c` is the final one. Exists whenever `from` is in an(c).
fn directed_path_into(g: &Dmg, from: NodeId, c: &NodeSet) -> Option<Vec<NodeId>> {
    if c.contains(from) {
        return Some(vec![from]);
    }
    let n = g.n();
    let mut pred = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    pred[from] = from;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        for w in 0..n {
            if g.has_directed(v, w) && pred[w] == usize::MAX {
                pred[w] = v;
                if c.contains(w) {
                    let mut path = vec![w];
                    let mut cur = v;
                    while cur != from {
                        path.push(cur);
                        cur = pred[cur];
                    }
                    path.push(from);
                    path.reverse();
                    return Some(path);
                }
                // do not continue through c: the first node of c found on a
                // branch must terminate it
                queue.push_back(w);
            }
        }
    }
    None
}

/// If connected, produce a mu-connecting walk with at most `|C|` colliders,
/// all of them in `C`. Reachability predecessors give a raw witness; each
/// collider outside `C` is then replaced by a detour down a directed path
/// into `C` and back, and repeated collider nodes are cut out.
pub fn witness_walk(g: &Dmg, alpha: NodeId, beta: NodeId, c: &NodeSet) -> Result<Option<Walk>> {
    g.check_set(c)?;
    if alpha >= g.n() || beta >= g.n() {
        return Err(Error::NodeOutOfRange {
            index: alpha.max(beta),
            n: g.n(),
        });
    }
    if c.contains(alpha) {
        return Ok(None);
    }
    let an_c = g.ancestors_unchecked(c);
    let reach = Reach::new(g);

    // BFS storing the first transition reaching each state.
    let nstates = 2 * g.n();
    let mut pred: Vec<Option<(usize, Transition)>> = vec![None; nstates];
    let mut seen = vec![false; nstates];
    let mut queue = std::collections::VecDeque::new();
    for t in &reach.out[alpha] {
        let s = Reach::state(t.to, t.arrive);
        if !seen[s] {
            seen[s] = true;
            pred[s] = Some((usize::MAX, *t));
            queue.push_back((t.to, t.arrive));
        }
    }
    let goal = Reach::state(beta, Mark::Head);
    'bfs: while let Some((v, m_in)) = queue.pop_front() {
        if Reach::state(v, m_in) == goal {
            break 'bfs;
        }
        for t in &reach.out[v] {
            if Reach::may_leave(v, m_in, t.depart, c, &an_c) {
                let s = Reach::state(t.to, t.arrive);
                if !seen[s] {
                    seen[s] = true;
                    pred[s] = Some((Reach::state(v, m_in), *t));
                    queue.push_back((t.to, t.arrive));
                }
            }
        }
    }
    if !seen[goal] {
        return Ok(None);
    }

    let mut steps = Vec::new();
    let mut state = goal;
    loop {
        let (prev, t) = pred[state].expect("predecessor chain is complete");
        steps.push(Step::new(t.edge, t.orientation));
        if prev == usize::MAX {
            break;
        }
        state = prev;
    }
    steps.reverse();
    let mut walk = Walk::new(alpha, steps);

    // Detour every collider that is in an(C) but not in C.
    loop {
        let offender = walk
            .colliders()
            .into_iter()
            .find(|&(node, _)| !c.contains(node));
        let Some((node, idx)) = offender else { break };
        let path = directed_path_into(g, node, c)
            .expect("collider is an ancestor of the conditioning set");
        let mut detour = Vec::new();
        for w in path.windows(2) {
            detour.push(Step::new(Edge::directed(w[0], w[1]), Orientation::Forward));
        }
        let back: Vec<Step> = detour
            .iter()
            .rev()
            .map(|s| Step::new(s.edge, Orientation::Reverse))
            .collect();
        let mut steps = walk.steps[..idx].to_vec();
        steps.extend_from_slice(&detour);
        steps.extend_from_slice(&back);
        steps.extend_from_slice(&walk.steps[idx..]);
        walk = Walk::new(alpha, steps);
    }

    // Cut subwalks between repeated collider instances of the same node.
    loop {
        let colliders = walk.colliders();
        let mut cut = None;
        'outer: for (i, &(ni, ii)) in colliders.iter().enumerate() {
            for &(nj, ij) in &colliders[i + 1..] {
                if ni == nj {
                    cut = Some((ii, ij));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = cut else { break };
        let mut steps = walk.steps[..i].to_vec();
        steps.extend_from_slice(&walk.steps[j..]);
        walk = Walk::new(alpha, steps);
    }

    debug_assert!(walk.colliders().len() <= c.len());
    Ok(Some(walk))
}

const ROUTE_ORACLE_MAX_NODES: usize = 12;

/// Exhaustive test oracle: enumerates all routes (walks whose final node
/// occurs at most twice and every other node at most once) and reports
/// whether any is mu-connecting. Routes characterize mu-connection, so this
/// agrees with [`mu_connected`] on every input. Exponential; guarded.
pub fn route_oracle_connected(g: &Dmg, alpha: NodeId, beta: NodeId, c: &NodeSet) -> Result<bool> {
    if g.n() > ROUTE_ORACLE_MAX_NODES {
        return Err(Error::GuardExceeded {
            guard: "route oracle",
            detail: format!("{} nodes exceeds the limit of {ROUTE_ORACLE_MAX_NODES}", g.n()),
        });
    }
    g.check_set(c)?;
    if alpha >= g.n() || beta >= g.n() {
        return Err(Error::NodeOutOfRange {
            index: alpha.max(beta),
            n: g.n(),
        });
    }
    if c.contains(alpha) {
        return Ok(false);
    }
    let an_c = g.ancestors_unchecked(c);
    let reach = Reach::new(g);
    let mut counts = vec![0u8; g.n()];
    counts[alpha] = 1;
    Ok(route_dfs(&reach, beta, c, &an_c, alpha, None, &mut counts))
}

fn route_dfs(
    reach: &Reach,
    beta: NodeId,
    c: &NodeSet,
    an_c: &NodeSet,
    at: NodeId,
    arrived: Option<Mark>,
    counts: &mut Vec<u8>,
) -> bool {
    for t in &reach.out[at] {
        if let Some(m_in) = arrived {
            if !Reach::may_leave(at, m_in, t.depart, c, an_c) {
                continue;
            }
        }
        let limit = if t.to == beta { 2 } else { 1 };
        if counts[t.to] + 1 > limit {
            continue;
        }
        if t.to == beta && t.arrive == Mark::Head {
            return true;
        }
        counts[t.to] += 1;
        let found = route_dfs(reach, beta, c, an_c, t.to, Some(t.arrive), counts);
        counts[t.to] -= 1;
        if found {
            return true;
        }
    }
    false
}

/// Is there a mu-connecting walk given `c` with at most `k` colliders?
/// 0/1-BFS over states, collider instances costing one.
pub fn bounded_collider_connected(
    g: &Dmg,
    alpha: NodeId,
    beta: NodeId,
    c: &NodeSet,
    k: usize,
) -> Result<bool> {
    g.check_set(c)?;
    if alpha >= g.n() || beta >= g.n() {
        return Err(Error::NodeOutOfRange {
            index: alpha.max(beta),
            n: g.n(),
        });
    }
    if c.contains(alpha) {
        return Ok(false);
    }
    let an_c = g.ancestors_unchecked(c);
    let reach = Reach::new(g);
    let nstates = 2 * g.n();
    let mut dist = vec![usize::MAX; nstates];
    let mut deque = std::collections::VecDeque::new();
    for t in &reach.out[alpha] {
        let s = Reach::state(t.to, t.arrive);
        if dist[s] != 0 {
            dist[s] = 0;
            deque.push_back((t.to, t.arrive));
        }
    }
    while let Some((v, m_in)) = deque.pop_front() {
        let d = dist[Reach::state(v, m_in)];
        for t in &reach.out[v] {
            if !Reach::may_leave(v, m_in, t.depart, c, &an_c) {
                continue;
            }
            let cost = (m_in == Mark::Head && t.depart == Mark::Head) as usize;
            let nd = d + cost;
            if nd > k {
                continue;
            }
            let s = Reach::state(t.to, t.arrive);
            if nd < dist[s] {
                dist[s] = nd;
                if cost == 0 {
                    deque.push_front((t.to, t.arrive));
                } else {
                    deque.push_back((t.to, t.arrive));
                }
            }
        }
    }
    Ok(dist[Reach::state(beta, Mark::Head)] <= k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{validate_walk, Role};

    /// 1 <-> 2, 2 -> 3, 3 -> 2, loops 1 -> 1, 2 <-> 2, 3 -> 3 (zero-based).
    fn example() -> Dmg {
        Dmg::from_edges(
            3,
            [
                Edge::bidirected(0, 1),
                Edge::directed(1, 2),
                Edge::directed(2, 1),
                Edge::directed(0, 0),
                Edge::bidirected(1, 1),
                Edge::directed(2, 2),
            ],
        )
        .unwrap()
    }

    fn ns(v: &[usize]) -> NodeSet {
        NodeSet::from_iter(v.iter().copied())
    }

    #[test]
    fn example_separations() {
        let g = example();
        // 3 is mu-separated from 1 given {2,3}
        assert!(!mu_connected(&g, 0, 2, &ns(&[1, 2])).unwrap());
        // ... but not given {2}: 1 <-> 2 <- 3 -> 3 is mu-connecting
        assert!(mu_connected(&g, 0, 2, &ns(&[1])).unwrap());
        // 3 -> 2 <-> 1 is mu-connecting from 3 to 1 given {2}
        assert!(mu_connected(&g, 2, 0, &ns(&[1])).unwrap());
        // source inside the conditioning set is never connected
        assert!(!mu_connected(&g, 0, 2, &ns(&[0])).unwrap());
    }

    #[test]
    fn set_separation() {
        let g = example();
        assert!(mu_separated_sets(&g, &ns(&[0]), &ns(&[2]), &ns(&[1, 2])).unwrap());
        // A inside C forces separation
        assert!(mu_separated_sets(&g, &ns(&[0]), &ns(&[2]), &ns(&[0])).unwrap());
        // vacuous cases
        assert!(mu_separated_sets(&g, &ns(&[]), &ns(&[2]), &ns(&[])).unwrap());
        assert!(mu_separated_sets(&g, &ns(&[0]), &ns(&[]), &ns(&[])).unwrap());
    }

    #[test]
    fn separation_matrix_matches_queries() {
        let g = example();
        for c in [ns(&[]), ns(&[1]), ns(&[1, 2]), ns(&[0, 1, 2])] {
            let m = SeparationMatrix::new(&g, &c).unwrap();
            for from in 0..3 {
                for to in 0..3 {
                    assert_eq!(
                        m.separated(from, to),
                        !mu_connected(&g, from, to, &c).unwrap(),
                        "from={from} to={to} c={c}"
                    );
                    if c.contains(from) {
                        assert!(m.separated(from, to));
                    }
                }
            }
        }
    }

    #[test]
    fn witness_is_valid_and_collider_bounded() {
        let g = example();
        let c = ns(&[1]);
        let w = witness_walk(&g, 0, 2, &c).unwrap().expect("connected");
        let roles = validate_walk(&g, &w).unwrap();
        assert_eq!(w.start, 0);
        assert_eq!(w.end(), 2);
        assert_eq!(w.final_mark(), Some(Mark::Head));
        assert!(w.colliders().len() <= c.len());
        for (node, idx) in w.colliders() {
            assert!(c.contains(node));
            assert_eq!(roles[idx], Role::Collider);
        }
        // separated query yields no witness
        assert!(witness_walk(&g, 0, 2, &ns(&[1, 2])).unwrap().is_none());
    }

    #[test]
    fn witness_without_conditioning_is_a_directed_trek() {
        let g = example();
        let w = witness_walk(&g, 1, 2, &NodeSet::new()).unwrap().unwrap();
        assert!(w.colliders().is_empty());
        assert_eq!(w.final_mark(), Some(Mark::Head));
    }

    #[test]
    fn route_oracle_on_example() {
        let g = example();
        assert!(!route_oracle_connected(&g, 0, 2, &ns(&[1, 2])).unwrap());
        assert!(route_oracle_connected(&g, 0, 2, &ns(&[1])).unwrap());
        // single node, no loops: no nontrivial walk
        let lone = Dmg::new(1);
        assert!(!route_oracle_connected(&lone, 0, 0, &NodeSet::new()).unwrap());
    }

    #[test]
    fn route_oracle_guard() {
        let g = Dmg::new(13);
        assert!(matches!(
            route_oracle_connected(&g, 0, 1, &NodeSet::new()),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn collider_budget() {
        let g = example();
        // k = 0 given the empty set accepts exactly the directed treks;
        // 1 <-> 2 -> 3 is one (treks may use bidirected edges)
        assert!(bounded_collider_connected(&g, 1, 2, &NodeSet::new(), 0).unwrap());
        assert!(bounded_collider_connected(&g, 0, 2, &NodeSet::new(), 0).unwrap());
        assert!(!bounded_collider_connected(&Dmg::new(2), 0, 1, &NodeSet::new(), 0).unwrap());
        // the only connecting walks from 1 to 3 given {2} need the collider at 2
        assert!(bounded_collider_connected(&g, 0, 2, &ns(&[1]), 1).unwrap());
        assert!(!bounded_collider_connected(&g, 0, 2, &ns(&[1]), 0).unwrap());
    }

    #[test]
    fn monotone_in_edges() {
        let g = example();
        let bigger = g.add_edge(&Edge::directed(0, 2)).unwrap();
        for c in [ns(&[]), ns(&[1]), ns(&[2]), ns(&[1, 2])] {
            for a in 0..3 {
                for b in 0..3 {
                    if mu_connected(&g, a, b, &c).unwrap() {
                        assert!(mu_connected(&bigger, a, b, &c).unwrap());
                    }
                }
            }
        }
    }
}
