//! Greatest elements, DMEGs, extremal elements, and the k-weak hierarchy.

use crate::error::{Error, Result};
use crate::graph::{Dmg, Edge};
use crate::independence::{weak_equivalent, ConditioningFamily};
use crate::potential::{c_potential_parent_in, c_potential_sibling_in};
use crate::separation::{SepTable, SeparationMatrix};
use rayon::prelude::*;

/// Per-conditioning-set survival bits for every candidate edge.
pub(crate) struct EdgeSurvival {
    pub dir: Vec<bool>,
    pub bidir: Vec<bool>,
}

/// Evaluates the potential-edge conditions for every candidate edge against
/// one table. Directed candidates indexed `alpha * n + beta`; bidirected by
/// upper-triangle position.
pub(crate) fn survival_for_table<T: SepTable>(table: &T) -> EdgeSurvival {
    let n = table.n();
    let mut dir = vec![false; n * n];
    let mut bidir = Vec::with_capacity(n * (n + 1) / 2);
    for alpha in 0..n {
        for beta in 0..n {
            dir[alpha * n + beta] = c_potential_parent_in(table, alpha, beta);
        }
    }
    for a in 0..n {
        for b in a..n {
            bidir.push(c_potential_sibling_in(table, a, b));
        }
    }
    EdgeSurvival { dir, bidir }
}

pub(crate) fn graph_from_survival(n: usize, acc: &EdgeSurvival) -> Dmg {
    let mut edges = Vec::new();
    for alpha in 0..n {
        for beta in 0..n {
            if acc.dir[alpha * n + beta] {
                edges.push(Edge::directed(alpha, beta));
            }
        }
    }
    let mut i = 0;
    for a in 0..n {
        for b in a..n {
            if acc.bidir[i] {
                edges.push(Edge::bidirected(a, b));
            }
            i += 1;
        }
    }
    Dmg::from_edges(n, edges).expect("indices in range by construction")
}

fn and_survival(mut acc: EdgeSurvival, other: EdgeSurvival) -> EdgeSurvival {
    for (a, b) in acc.dir.iter_mut().zip(other.dir) {
        *a &= b;
    }
    for (a, b) in acc.bidir.iter_mut().zip(other.bidir) {
        *a &= b;
    }
    acc
}

/// The greatest element of the weak equivalence class of `g`: it contains
/// `alpha -> beta` iff alpha is a C-potential parent of beta for every C in
/// the family, and likewise for bidirected edges, loops included. The result
/// is weakly equivalent to `g` and a supergraph of every class member.
pub fn greatest_element(g: &Dmg, fam: &ConditioningFamily) -> Result<Dmg> {
    let n = g.n();
    let sets = fam.sets(n)?;
    let full = || EdgeSurvival {
        dir: vec![true; n * n],
        bidir: vec![true; n * (n + 1) / 2],
    };
    let acc = sets
        .par_iter()
        .map(|c| {
            let table = SeparationMatrix::new(g, c).expect("validated");
            survival_for_table(&table)
        })
        .reduce(full, and_survival);
    Ok(graph_from_survival(n, &acc))
}

/// Is `g` the unique maximal element of its class?
pub fn is_maximal(g: &Dmg, fam: &ConditioningFamily) -> Result<bool> {
    Ok(greatest_element(g, fam)? == *g)
}

/// Is `g` minimal in its class, i.e. empty or with every single-edge
/// deletion leaving the class? `fix_loops` restricts the class to graphs
/// with the same loops, exempting loop edges from the sweep.
pub fn is_minimal(g: &Dmg, fam: &ConditioningFamily, fix_loops: bool) -> Result<bool> {
    for e in g.edges() {
        if fix_loops && e.is_loop() {
            continue;
        }
        let (eq, _) = weak_equivalent(g, &g.remove_edge(&e)?, fam)?;
        if eq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A weak equivalence class, represented by its greatest element with edges
/// split into solid (present in every member) and dashed (present in some
/// members only).
///
/// With `fix_loops` the class is restricted to graphs carrying the same
/// loops as the greatest element: loop edges are exempt from the deletion
/// sweep and reported solid, matching the usual convention of treating all
/// loops as present. Without it, loops participate like any other edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dmeg {
    pub base: Dmg,
    pub dashed: Vec<Edge>,
    pub fix_loops: bool,
}

impl Dmeg {
    pub fn solid(&self) -> Vec<Edge> {
        self.base
            .edges()
            .into_iter()
            .filter(|e| !self.dashed.contains(e))
            .collect()
    }

    pub fn is_dashed(&self, e: &Edge) -> bool {
        self.dashed.contains(e)
    }

    pub fn dashed_nonloop(&self) -> Vec<Edge> {
        self.dashed.iter().copied().filter(|e| !e.is_loop()).collect()
    }
}

/// Computes the DMEG of the class of `g`. An edge of the greatest element
/// is dashed iff deleting it alone stays in the class; this single-deletion
/// test is exact because any member without the edge squeezes the deleted
/// graph's independence model between two copies of the class model.
pub fn dmeg(g: &Dmg, fam: &ConditioningFamily, fix_loops: bool) -> Result<Dmeg> {
    let base = greatest_element(g, fam)?;
    dmeg_of_base(base, fam, fix_loops)
}

fn dmeg_of_base(base: Dmg, fam: &ConditioningFamily, fix_loops: bool) -> Result<Dmeg> {
    let candidates: Vec<Edge> = base
        .edges()
        .into_iter()
        .filter(|e| !(fix_loops && e.is_loop()))
        .collect();
    let dashed: Vec<Edge> = candidates
        .par_iter()
        .filter(|e| {
            let removed = base.remove_edge(e).expect("edge of base");
            weak_equivalent(&base, &removed, fam).expect("validated").0
        })
        .copied()
        .collect();
    Ok(Dmeg {
        base,
        dashed,
        fix_loops,
    })
}

const LEAST_MAX_NONLOOP_EDGES: usize = 20;

/// The least element of the class of `g`, if one exists. A least element
/// must consist of exactly the solid edges of the DMEG, so existence reduces
/// to a single membership check of that graph.
pub fn least_element(g: &Dmg, fam: &ConditioningFamily, fix_loops: bool) -> Result<Option<Dmg>> {
    let base = greatest_element(g, fam)?;
    let nonloop = base.edges().iter().filter(|e| !e.is_loop()).count();
    if nonloop > LEAST_MAX_NONLOOP_EDGES {
        return Err(Error::GuardExceeded {
            guard: "least element",
            detail: format!(
                "greatest element has {nonloop} non-loop edges, limit is {LEAST_MAX_NONLOOP_EDGES}"
            ),
        });
    }
    let d = dmeg_of_base(base, fam, fix_loops)?;
    let mut candidate = d.base.clone();
    for e in &d.dashed {
        candidate = candidate.remove_edge(e)?;
    }
    let (eq, _) = weak_equivalent(&d.base, &candidate, fam)?;
    Ok(if eq { Some(candidate) } else { None })
}

/// One node of the weak equivalence hierarchy: a k-maximal graph at level k.
#[derive(Debug, Clone)]
pub struct HierarchyNode {
    pub graph: Dmg,
    pub level: usize,
    /// Index of the (k-1)-maximal node whose class contains this graph.
    pub down: Option<usize>,
    /// Number of enumerated graphs whose level-`level` class this is.
    pub class_size: u64,
}

/// The k-weak equivalence hierarchy over all DMGs on a fixed node set:
/// levels k = 0..n-1, one node per class keyed by its greatest element,
/// each level-k node linked to the unique level-(k-1) class containing it.
#[derive(Debug, Clone)]
pub struct HierarchyForest {
    pub n: usize,
    pub fix_loops: bool,
    pub nodes: Vec<HierarchyNode>,
}

impl HierarchyForest {
    pub fn level_nodes(&self, level: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].level == level)
            .collect()
    }

    pub fn roots(&self) -> Vec<usize> {
        self.level_nodes(0)
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&j| self.nodes[j].down == Some(i))
            .collect()
    }
}

/// Number of DMGs enumerated by [`hierarchy`] for the given parameters.
pub fn enumeration_size(n: usize, fix_loops: bool) -> u64 {
    let pairs = (n * n.saturating_sub(1) / 2) as u32;
    let pair_combos = 8u64.pow(pairs);
    if fix_loops {
        pair_combos
    } else {
        pair_combos * 4u64.pow(n as u32)
    }
}

fn graph_from_code(n: usize, fix_loops: bool, code: u64) -> Dmg {
    let mut edges = Vec::new();
    let mut c = code;
    for a in 0..n {
        for b in a + 1..n {
            let bits = c & 7;
            c >>= 3;
            if bits & 1 != 0 {
                edges.push(Edge::directed(a, b));
            }
            if bits & 2 != 0 {
                edges.push(Edge::directed(b, a));
            }
            if bits & 4 != 0 {
                edges.push(Edge::bidirected(a, b));
            }
        }
    }
    for v in 0..n {
        let bits = if fix_loops { 3 } else { c & 3 };
        if !fix_loops {
            c >>= 2;
        }
        if bits & 1 != 0 {
            edges.push(Edge::directed(v, v));
        }
        if bits & 2 != 0 {
            edges.push(Edge::bidirected(v, v));
        }
    }
    Dmg::from_edges(n, edges).expect("valid by construction")
}

const HIERARCHY_MAX_NODES: usize = 3;
const HIERARCHY_MAX_NODES_FIXED_LOOPS: usize = 4;

/// Enumerates every DMG on `n` nodes (loops fixed to present when
/// `fix_loops`), groups them by greatest element at every level
/// k = 0..n-1, and assembles the forest.
pub fn hierarchy(n: usize, fix_loops: bool) -> Result<HierarchyForest> {
    let limit = if fix_loops {
        HIERARCHY_MAX_NODES_FIXED_LOOPS
    } else {
        HIERARCHY_MAX_NODES
    };
    if n > limit || n == 0 {
        return Err(Error::GuardExceeded {
            guard: "hierarchy enumeration",
            detail: format!(
                "n = {n} outside 1..={limit} (fix_loops = {fix_loops})"
            ),
        });
    }
    let levels = n; // k = 0..=n-1
    let total = enumeration_size(n, fix_loops);
    let families: Vec<ConditioningFamily> =
        (0..levels).map(ConditioningFamily::SizeBound).collect();

    // Per level: class key (greatest element bytes) -> (graph, count).
    type ClassMap = std::collections::BTreeMap<Vec<u8>, (Dmg, u64)>;
    let maps: Vec<ClassMap> = (0..total)
        .into_par_iter()
        .fold(
            || vec![ClassMap::new(); levels],
            |mut maps, code| {
                let g = graph_from_code(n, fix_loops, code);
                for (k, fam) in families.iter().enumerate() {
                    let top = greatest_element(&g, fam).expect("small n");
                    let entry = maps[k]
                        .entry(top.canonical_bytes())
                        .or_insert_with(|| (top, 0));
                    entry.1 += 1;
                }
                maps
            },
        )
        .reduce(
            || vec![ClassMap::new(); levels],
            |mut left, right| {
                for (l, r) in left.iter_mut().zip(right) {
                    for (key, (g, count)) in r {
                        l.entry(key).or_insert_with(|| (g, 0)).1 += count;
                    }
                }
                left
            },
        );

    let mut nodes = Vec::new();
    let mut index_of: Vec<std::collections::BTreeMap<Vec<u8>, usize>> =
        vec![Default::default(); levels];
    for (k, map) in maps.iter().enumerate() {
        for (key, (g, count)) in map {
            index_of[k].insert(key.clone(), nodes.len());
            nodes.push(HierarchyNode {
                graph: g.clone(),
                level: k,
                down: None,
                class_size: *count,
            });
        }
    }
    for node in &mut nodes {
        let k = node.level;
        if k == 0 {
            continue;
        }
        let parent = greatest_element(&node.graph, &families[k - 1])?;
        let idx = index_of[k - 1]
            .get(&parent.canonical_bytes())
            .copied()
            .expect("parent class was enumerated");
        node.down = Some(idx);
    }
    Ok(HierarchyForest { n, fix_loops, nodes })
}
