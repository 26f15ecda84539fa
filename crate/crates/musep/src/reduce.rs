//! 3DNF tautology reduction instances.
//!
//! From a 3DNF formula H these builders produce graph triples (G, G1, G2)
//! with G1 = G + eps <-> beta and G2 = G + phi -> eps such that G and G1 are
//! Markov equivalent iff H is a tautology, while G1 and G2 are always Markov
//! equivalent. The dense variant is the direct construction; the sparse
//! variant routes the same gadgets through triangular fan-outs so that
//! non-loop adjacency stays bounded (at most 8) while the distinguishing
//! query keeps working. For a falsifying assignment,
//! [`witness_conditioning_set`] produces the conditioning set at which G
//! separates beta from alpha and G1 does not.

use crate::error::{Error, Result};
use crate::graph::{Dmg, Edge, NodeId, NodeSet};

/// A literal: variable index (zero-based) with optional negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

/// A Boolean formula in 3DNF: a disjunction of conjunctions of at most
/// three literals each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula3Dnf {
    pub n_vars: usize,
    pub conjunctions: Vec<Vec<Literal>>,
}

impl Formula3Dnf {
    pub fn new(n_vars: usize, conjunctions: Vec<Vec<Literal>>) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::Parse {
                position: 0,
                message: "formula needs at least one variable".into(),
            });
        }
        for (i, conj) in conjunctions.iter().enumerate() {
            if conj.is_empty() || conj.len() > 3 {
                return Err(Error::Parse {
                    position: 0,
                    message: format!(
                        "conjunction {} has {} literals, expected 1 to 3",
                        i + 1,
                        conj.len()
                    ),
                });
            }
            for lit in conj {
                if lit.var >= n_vars {
                    return Err(Error::Parse {
                        position: 0,
                        message: format!("variable x{} out of range", lit.var + 1),
                    });
                }
            }
        }
        Ok(Self { n_vars, conjunctions })
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.conjunctions.iter().any(|conj| {
            conj.iter()
                .all(|lit| assignment[lit.var] != lit.negated)
        })
    }
}

/// Parses `x1 & !x2 | x3` style formulas: conjunctions separated by `|`,
/// literals by `&`, negation `!`, variables `x<k>` with 1-based `k`.
pub fn parse_3dnf(text: &str) -> Result<Formula3Dnf> {
    let mut conjunctions = Vec::new();
    let mut max_var = 0usize;
    let mut offset = 0usize;
    for part in text.split('|') {
        let part_offset = offset;
        offset += part.len() + 1;
        let mut literals = Vec::new();
        let mut lit_offset = part_offset;
        for raw in part.split('&') {
            let this_offset = lit_offset;
            lit_offset += raw.len() + 1;
            let token = raw.trim();
            let position = this_offset + raw.len() - raw.trim_start().len();
            if token.is_empty() {
                return Err(Error::Parse {
                    position,
                    message: "empty literal".into(),
                });
            }
            let (negated, name) = match token.strip_prefix('!') {
                Some(rest) => (true, rest.trim_start()),
                None => (false, token),
            };
            let digits = name.strip_prefix('x').ok_or_else(|| Error::Parse {
                position,
                message: format!("expected a variable like x1, found {token:?}"),
            })?;
            let index: usize = digits.parse().map_err(|_| Error::Parse {
                position,
                message: format!("bad variable index in {token:?}"),
            })?;
            if index == 0 {
                return Err(Error::Parse {
                    position,
                    message: "variables are numbered from x1".into(),
                });
            }
            max_var = max_var.max(index);
            literals.push(Literal {
                var: index - 1,
                negated,
            });
        }
        if literals.len() > 3 {
            return Err(Error::Parse {
                position: part_offset,
                message: format!("conjunction has {} literals, 3DNF allows 3", literals.len()),
            });
        }
        conjunctions.push(literals);
    }
    Formula3Dnf::new(max_var, conjunctions)
}

const TAUTOLOGY_MAX_VARS: usize = 24;

/// Brute-force tautology check over all assignments, returning a falsifying
/// assignment when one exists.
pub fn is_tautology_bruteforce(h: &Formula3Dnf) -> Result<(bool, Option<Vec<bool>>)> {
    if h.n_vars > TAUTOLOGY_MAX_VARS {
        return Err(Error::GuardExceeded {
            guard: "tautology brute force",
            detail: format!("{} variables exceeds the limit of {TAUTOLOGY_MAX_VARS}", h.n_vars),
        });
    }
    for bits in 0u64..(1u64 << h.n_vars) {
        let assignment: Vec<bool> = (0..h.n_vars).map(|i| bits >> i & 1 == 1).collect();
        if !h.evaluate(&assignment) {
            return Ok((false, Some(assignment)));
        }
    }
    Ok((true, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionVariant {
    Dense,
    Sparse,
}

/// A generated reduction instance. `g1` adds one bidirected edge to `g`,
/// `g2` one directed edge; `alpha` and `beta` are the distinguished query
/// endpoints.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub variant: ReductionVariant,
    pub formula: Formula3Dnf,
    pub g: Dmg,
    pub g1: Dmg,
    pub g2: Dmg,
    pub alpha: NodeId,
    pub beta: NodeId,
    pub labels: Vec<String>,
    eps: NodeId,
    /// chi node per variable.
    chi: Vec<NodeId>,
    /// lambda node per variable.
    lam: Vec<NodeId>,
    /// Dense: the gamma/delta pair; sparse: the full Gamma and Delta blocks.
    witness_seed: Vec<NodeId>,
    /// Sparse only: nu companions of chi/lambda nodes, per variable.
    nu_of_chi: Vec<Vec<NodeId>>,
    nu_of_lam: Vec<Vec<NodeId>>,
}

impl ReductionInstance {
    pub fn node_count(&self) -> usize {
        self.g.n()
    }

    pub fn edge_count(&self) -> usize {
        self.g.edge_count()
    }

    /// Largest number of distinct non-loop neighbors over all nodes of `g1`
    /// (the densest of the three graphs).
    pub fn max_nonloop_degree(&self) -> usize {
        (0..self.g1.n())
            .map(|v| self.g1.nonloop_degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn label_of(&self, v: NodeId) -> &str {
        &self.labels[v]
    }
}

struct NodeArena {
    labels: Vec<String>,
}

impl NodeArena {
    fn new() -> Self {
        Self { labels: Vec::new() }
    }

    fn add(&mut self, label: String) -> NodeId {
        self.labels.push(label);
        self.labels.len() - 1
    }
}

struct EdgeSink {
    edges: Vec<Edge>,
}

impl EdgeSink {
    fn new() -> Self {
        Self { edges: Vec::new() }
    }

    fn bi(&mut self, a: NodeId, b: NodeId) {
        self.edges.push(Edge::bidirected(a, b));
    }

    fn dir(&mut self, t: NodeId, h: NodeId) {
        self.edges.push(Edge::directed(t, h));
    }

    fn two_cycle(&mut self, a: NodeId, b: NodeId) {
        self.dir(a, b);
        self.dir(b, a);
    }

    /// Directed cycle through the nodes in the given order; a single node
    /// contributes nothing (its loop is added separately).
    fn cycle(&mut self, nodes: &[NodeId]) {
        if nodes.len() < 2 {
            return;
        }
        for w in nodes.windows(2) {
            self.dir(w[0], w[1]);
        }
        self.dir(nodes[nodes.len() - 1], nodes[0]);
    }

    fn all_loops(&mut self, n: usize) {
        for v in 0..n {
            self.dir(v, v);
            self.bi(v, v);
        }
    }
}

/// Dense reduction: one gamma/delta pair anchors bidirected literal chains,
/// a chi/lambda ladder encodes assignments, and every auxiliary node gets a
/// nu-pair wired straight to eps and beta.
pub fn build_dense(h: &Formula3Dnf) -> ReductionInstance {
    let n = h.n_vars;
    let mut arena = NodeArena::new();
    let alpha = arena.add("alpha".into());
    let beta = arena.add("beta".into());
    let eps = arena.add("eps".into());
    let phi = arena.add("phi".into());

    let gamma = arena.add("gamma".into());
    let gamma_b = arena.add("gamma~".into());
    let delta = arena.add("delta".into());
    let delta_b = arena.add("delta~".into());
    // literal nodes, plain and barred, indexed [conjunction][position]
    let lit: Vec<Vec<NodeId>> = h
        .conjunctions
        .iter()
        .enumerate()
        .map(|(k, conj)| {
            (0..conj.len())
                .map(|i| arena.add(format!("phi_{}^{}", i + 1, k + 1)))
                .collect()
        })
        .collect();
    let lit_b: Vec<Vec<NodeId>> = h
        .conjunctions
        .iter()
        .enumerate()
        .map(|(k, conj)| {
            (0..conj.len())
                .map(|i| arena.add(format!("phi~_{}^{}", i + 1, k + 1)))
                .collect()
        })
        .collect();
    let chi: Vec<NodeId> = (0..n).map(|l| arena.add(format!("chi_{}", l + 1))).collect();
    let lam: Vec<NodeId> = (0..n).map(|l| arena.add(format!("lam_{}", l + 1))).collect();

    let core: Vec<NodeId> = std::iter::once(gamma)
        .chain([gamma_b, delta, delta_b])
        .chain(lit.iter().flatten().copied())
        .chain(lit_b.iter().flatten().copied())
        .chain(chi.iter().copied())
        .chain(lam.iter().copied())
        .collect();
    let nu_eps: Vec<NodeId> = core
        .iter()
        .map(|&r| arena.add(format!("nu_eps[{}]", arena_label(&arena, r))))
        .collect();
    let nu_beta: Vec<NodeId> = core
        .iter()
        .map(|&r| arena.add(format!("nu_beta[{}]", arena_label(&arena, r))))
        .collect();

    let mut e = EdgeSink::new();
    e.two_cycle(gamma, gamma_b);
    e.two_cycle(delta, delta_b);
    for (idx, &rho) in core.iter().enumerate() {
        e.two_cycle(rho, nu_eps[idx]);
        e.two_cycle(rho, nu_beta[idx]);
        e.two_cycle(nu_eps[idx], nu_beta[idx]);
        e.bi(eps, nu_eps[idx]);
        e.bi(beta, nu_beta[idx]);
    }
    e.bi(alpha, gamma);
    e.bi(alpha, gamma_b);
    e.bi(eps, delta_b);
    e.bi(beta, delta);
    e.two_cycle(eps, beta);
    e.bi(phi, eps);
    e.bi(phi, beta);
    // bidirected literal chains gamma <-> ... <-> delta and barred twins
    for k in 0..h.conjunctions.len() {
        chain(&mut e, gamma, &lit[k], delta);
        chain(&mut e, gamma_b, &lit_b[k], delta_b);
    }
    // chi/lambda ladder
    e.bi(gamma_b, chi[0]);
    e.bi(gamma_b, lam[0]);
    e.bi(delta_b, chi[n - 1]);
    e.bi(delta_b, lam[n - 1]);
    for i in 0..n.saturating_sub(1) {
        e.bi(chi[i], chi[i + 1]);
        e.bi(chi[i], lam[i + 1]);
        e.bi(lam[i], chi[i + 1]);
        e.bi(lam[i], lam[i + 1]);
    }
    // literal cycles
    for l in 0..n {
        e.cycle(&literal_cycle(h, &lit, &lit_b, chi[l], l, false));
        e.cycle(&literal_cycle(h, &lit, &lit_b, lam[l], l, true));
    }
    e.all_loops(arena.labels.len());

    finish(
        ReductionVariant::Dense,
        h.clone(),
        arena,
        e,
        alpha,
        beta,
        eps,
        phi,
        chi,
        lam,
        vec![gamma, delta],
        Vec::new(),
        Vec::new(),
    )
}

fn arena_label(arena: &NodeArena, v: NodeId) -> String {
    arena.labels[v].clone()
}

fn chain(e: &mut EdgeSink, left: NodeId, middle: &[NodeId], right: NodeId) {
    let mut prev = left;
    for &m in middle {
        e.bi(prev, m);
        prev = m;
    }
    e.bi(prev, right);
}

/// Members of the directed cycle for variable `l`: its chi (or lambda) node
/// followed by every literal node, plain then barred, matching the literal
/// polarity.
fn literal_cycle(
    h: &Formula3Dnf,
    lit: &[Vec<NodeId>],
    lit_b: &[Vec<NodeId>],
    anchor: NodeId,
    l: usize,
    negated: bool,
) -> Vec<NodeId> {
    let mut nodes = vec![anchor];
    for (k, conj) in h.conjunctions.iter().enumerate() {
        for (i, literal) in conj.iter().enumerate() {
            if literal.var == l && literal.negated == negated {
                nodes.push(lit[k][i]);
            }
        }
    }
    for (k, conj) in h.conjunctions.iter().enumerate() {
        for (i, literal) in conj.iter().enumerate() {
            if literal.var == l && literal.negated == negated {
                nodes.push(lit_b[k][i]);
            }
        }
    }
    nodes
}

#[allow(clippy::too_many_arguments)]
fn finish(
    variant: ReductionVariant,
    formula: Formula3Dnf,
    arena: NodeArena,
    e: EdgeSink,
    alpha: NodeId,
    beta: NodeId,
    eps: NodeId,
    phi: NodeId,
    chi: Vec<NodeId>,
    lam: Vec<NodeId>,
    witness_seed: Vec<NodeId>,
    nu_of_chi: Vec<Vec<NodeId>>,
    nu_of_lam: Vec<Vec<NodeId>>,
) -> ReductionInstance {
    let n = arena.labels.len();
    let g = Dmg::from_edges(n, e.edges).expect("construction uses valid indices");
    let g1 = g.add_edge(&Edge::bidirected(eps, beta)).unwrap();
    let g2 = g.add_edge(&Edge::directed(phi, eps)).unwrap();
    ReductionInstance {
        variant,
        formula,
        g,
        g1,
        g2,
        alpha,
        beta,
        labels: arena.labels,
        eps,
        chi,
        lam,
        witness_seed,
        nu_of_chi,
        nu_of_lam,
    }
}

/// Sparse reduction. Gamma/Delta blocks (and barred twins) are binary
/// triangles of bidirected edges, each wide row attaching one literal chain;
/// every non-special node gets nu companions whose bidirected wiring copies
/// the block structure. Vertical segments carry directed cycles ordered so
/// that each node is sandwiched between its own nu companions, which keeps
/// non-loop adjacency at 8 or below.
pub fn build_sparse(h: &Formula3Dnf) -> ReductionInstance {
    let n = h.n_vars;
    let n_conj = h.conjunctions.len();
    // smallest M with 2^(M-1) >= N + 1
    let mut m = 1usize;
    while 1usize << (m - 1) < n_conj + 1 {
        m += 1;
    }

    let mut arena = NodeArena::new();
    let alpha = arena.add("alpha".into());
    let beta = arena.add("beta".into());
    let eps = arena.add("eps".into());
    let phi = arena.add("phi".into());

    let triangle = |arena: &mut NodeArena, name: &str| -> Vec<Vec<NodeId>> {
        (1..=m)
            .map(|i| {
                (1..=1usize << (i - 1))
                    .map(|j| arena.add(format!("{name}_{i}{j}")))
                    .collect()
            })
            .collect()
    };
    let gamma = triangle(&mut arena, "gamma");
    let gamma_b = triangle(&mut arena, "gamma~");
    let delta = triangle(&mut arena, "delta");
    let delta_b = triangle(&mut arena, "delta~");
    let lit: Vec<Vec<NodeId>> = h
        .conjunctions
        .iter()
        .enumerate()
        .map(|(k, conj)| {
            (0..conj.len())
                .map(|i| arena.add(format!("phi_{}^{}", i + 1, k + 1)))
                .collect()
        })
        .collect();
    let lit_b: Vec<Vec<NodeId>> = h
        .conjunctions
        .iter()
        .enumerate()
        .map(|(k, conj)| {
            (0..conj.len())
                .map(|i| arena.add(format!("phi~_{}^{}", i + 1, k + 1)))
                .collect()
        })
        .collect();
    let chi: Vec<NodeId> = (0..n).map(|l| arena.add(format!("chi_{}", l + 1))).collect();
    let lam: Vec<NodeId> = (0..n).map(|l| arena.add(format!("lam_{}", l + 1))).collect();

    // plain side: Gamma, Delta, Phi, X, Lambda; barred side: the twins of
    // the first three (chi and lambda have no barred versions)
    let plain: Vec<NodeId> = gamma
        .iter()
        .flatten()
        .chain(delta.iter().flatten())
        .chain(lit.iter().flatten())
        .chain(chi.iter())
        .chain(lam.iter())
        .copied()
        .collect();
    let barred: Vec<NodeId> = gamma_b
        .iter()
        .flatten()
        .chain(delta_b.iter().flatten())
        .chain(lit_b.iter().flatten())
        .copied()
        .collect();

    let mut nu_eps = std::collections::HashMap::new();
    let mut nu_beta = std::collections::HashMap::new();
    for &r in plain.iter().chain(&barred) {
        let le = format!("nu_eps[{}]", arena.labels[r]);
        let lb = format!("nu_beta[{}]", arena.labels[r]);
        nu_eps.insert(r, arena.add(le));
        nu_beta.insert(r, arena.add(lb));
    }

    let mut e = EdgeSink::new();
    let mut core_bi: Vec<(NodeId, NodeId)> = Vec::new();
    let add_core_bi = |e: &mut EdgeSink, list: &mut Vec<(NodeId, NodeId)>, a: NodeId, b: NodeId| {
        e.bi(a, b);
        list.push((a, b));
    };

    // triangular fans: row i node j couples to row i+1 nodes 2j-1 and 2j
    for block in [&gamma, &gamma_b, &delta, &delta_b] {
        for i in 0..m - 1 {
            for j in 0..block[i].len() {
                add_core_bi(&mut e, &mut core_bi, block[i][j], block[i + 1][2 * j]);
                add_core_bi(&mut e, &mut core_bi, block[i][j], block[i + 1][2 * j + 1]);
            }
        }
    }
    // literal chains hang off the wide rows, one conjunction per column
    for k in 0..n_conj {
        add_core_bi(&mut e, &mut core_bi, gamma[m - 1][k], lit[k][0]);
        add_core_bi(&mut e, &mut core_bi, gamma_b[m - 1][k], lit_b[k][0]);
        let last = lit[k].len() - 1;
        add_core_bi(&mut e, &mut core_bi, delta[m - 1][k], lit[k][last]);
        add_core_bi(&mut e, &mut core_bi, delta_b[m - 1][k], lit_b[k][last]);
        for i in 0..last {
            add_core_bi(&mut e, &mut core_bi, lit[k][i], lit[k][i + 1]);
            add_core_bi(&mut e, &mut core_bi, lit_b[k][i], lit_b[k][i + 1]);
        }
    }
    // chi/lambda ladder between the last barred columns
    let wide = (1usize << (m - 1)) - 1;
    add_core_bi(&mut e, &mut core_bi, gamma_b[m - 1][wide], chi[0]);
    add_core_bi(&mut e, &mut core_bi, gamma_b[m - 1][wide], lam[0]);
    add_core_bi(&mut e, &mut core_bi, delta_b[m - 1][wide], chi[n - 1]);
    add_core_bi(&mut e, &mut core_bi, delta_b[m - 1][wide], lam[n - 1]);
    for i in 0..n.saturating_sub(1) {
        add_core_bi(&mut e, &mut core_bi, chi[i], chi[i + 1]);
        add_core_bi(&mut e, &mut core_bi, chi[i], lam[i + 1]);
        add_core_bi(&mut e, &mut core_bi, lam[i], chi[i + 1]);
        add_core_bi(&mut e, &mut core_bi, lam[i], lam[i + 1]);
    }

    // anchors
    e.bi(alpha, gamma[0][0]);
    e.bi(alpha, gamma_b[0][0]);
    e.bi(eps, delta_b[0][0]);
    e.bi(beta, delta[0][0]);
    e.two_cycle(eps, beta);
    e.bi(phi, eps);
    e.bi(phi, beta);
    e.bi(nu_eps[&delta[0][0]], eps);
    e.bi(nu_beta[&delta[0][0]], beta);
    e.bi(nu_eps[&delta_b[0][0]], eps);
    e.bi(nu_beta[&delta_b[0][0]], beta);

    // nu copies of the core wiring, skipping chain-internal edges (both
    // endpoints literal nodes)
    let lit_nodes: NodeSet = lit.iter().flatten().chain(lit_b.iter().flatten()).copied().collect();
    for &(a, b) in &core_bi {
        if lit_nodes.contains(a) && lit_nodes.contains(b) {
            continue;
        }
        e.bi(nu_eps[&a], nu_eps[&b]);
        e.bi(nu_beta[&a], nu_beta[&b]);
    }
    // bridges: every literal's nu couples to the nu of its column anchors
    for k in 0..n_conj {
        for i in 0..lit[k].len() {
            for (block_top, block_bottom, node) in [
                (gamma[m - 1][k], delta[m - 1][k], lit[k][i]),
                (gamma_b[m - 1][k], delta_b[m - 1][k], lit_b[k][i]),
            ] {
                e.bi(nu_eps[&block_top], nu_eps[&node]);
                e.bi(nu_eps[&node], nu_eps[&block_bottom]);
                e.bi(nu_beta[&block_top], nu_beta[&node]);
                e.bi(nu_beta[&node], nu_beta[&block_bottom]);
            }
        }
    }

    // directed two-cycles inside every (node, nu_eps, nu_beta) family
    for &r in plain.iter().chain(&barred) {
        e.two_cycle(r, nu_eps[&r]);
        e.two_cycle(r, nu_beta[&r]);
        e.two_cycle(nu_eps[&r], nu_beta[&r]);
    }

    // vertical-segment cycles for the triangle rows: row i of Gamma/Gamma~
    // (and of Delta/Delta~) with all their nus, each node sandwiched
    // between its own companions so the cycle reuses existing adjacencies
    for i in 0..m {
        for (left, right) in [(&gamma, &gamma_b), (&delta, &delta_b)] {
            let mut order = Vec::new();
            for &v in left[i].iter().chain(right[i].iter()) {
                order.push(nu_eps[&v]);
                order.push(v);
                order.push(nu_beta[&v]);
            }
            e.cycle(&order);
        }
    }
    // literal cycles as in the dense construction
    for l in 0..n {
        e.cycle(&literal_cycle(h, &lit, &lit_b, chi[l], l, false));
        e.cycle(&literal_cycle(h, &lit, &lit_b, lam[l], l, true));
    }
    e.all_loops(arena.labels.len());

    let witness_seed: Vec<NodeId> = gamma
        .iter()
        .flatten()
        .chain(delta.iter().flatten())
        .copied()
        .collect();
    let nu_of_chi: Vec<Vec<NodeId>> = chi.iter().map(|c| vec![nu_eps[c], nu_beta[c]]).collect();
    let nu_of_lam: Vec<Vec<NodeId>> = lam.iter().map(|c| vec![nu_eps[c], nu_beta[c]]).collect();
    finish(
        ReductionVariant::Sparse,
        h.clone(),
        arena,
        e,
        alpha,
        beta,
        eps,
        phi,
        chi,
        lam,
        witness_seed,
        nu_of_chi,
        nu_of_lam,
    )
}

/// Conditioning set at which `g` separates beta from alpha while `g1`
/// connects them, valid exactly when the assignment falsifies the formula.
/// Seeds the assignment's chi/lambda nodes (with their nu companions in the
/// sparse variant) plus the gamma/delta anchors, closes under ancestry, and
/// adds beta and eps.
pub fn witness_conditioning_set(
    inst: &ReductionInstance,
    assignment: &[bool],
) -> Result<NodeSet> {
    if assignment.len() != inst.formula.n_vars {
        return Err(Error::InvalidDocument(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            inst.formula.n_vars
        )));
    }
    if inst.formula.evaluate(assignment) {
        return Err(Error::NotFalsifying);
    }
    let mut seed = NodeSet::new();
    for (l, &value) in assignment.iter().enumerate() {
        if value {
            seed.insert(inst.chi[l]);
            if let Some(nus) = inst.nu_of_chi.get(l) {
                for &v in nus {
                    seed.insert(v);
                }
            }
        } else {
            seed.insert(inst.lam[l]);
            if let Some(nus) = inst.nu_of_lam.get(l) {
                for &v in nus {
                    seed.insert(v);
                }
            }
        }
    }
    for &v in &inst.witness_seed {
        seed.insert(v);
    }
    match inst.variant {
        ReductionVariant::Dense => {
            seed.insert(inst.eps);
            seed.insert(inst.beta);
            inst.g.ancestors(&seed)
        }
        ReductionVariant::Sparse => {
            // ancestor closure of the seed, then beta and eps on top; the
            // stated form closes only the seed, eps must still block the
            // walk through the barred delta anchor
            let mut c = inst.g.ancestors(&seed)?;
            c.insert(inst.beta);
            c.insert(inst.eps);
            Ok(c)
        }
    }
}
