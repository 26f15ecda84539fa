//! Shared helpers for the integration suites: fixture loading and seeded
//! random graph generation.
#![allow(dead_code)]

use musep::graph::{Dmg, Edge, NodeSet};
use musep::io::{GraphDocument, Labels};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

pub fn load(name: &str) -> (Dmg, Labels) {
    let text = std::fs::read_to_string(fixture_path(name))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    GraphDocument::parse(&text)
        .and_then(|d| d.to_dmg())
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random DMG: every possible directed/bidirected edge (loops included)
/// present independently with probability `p`.
pub fn random_dmg(r: &mut ChaCha8Rng, n: usize, p: f64) -> Dmg {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if r.gen_bool(p) {
                edges.push(Edge::directed(a, b));
            }
        }
    }
    for a in 0..n {
        for b in a..n {
            if r.gen_bool(p) {
                edges.push(Edge::bidirected(a, b));
            }
        }
    }
    Dmg::from_edges(n, edges).unwrap()
}

/// Random subset of `0..n`, each node with probability `p`.
pub fn random_set(r: &mut ChaCha8Rng, n: usize, p: f64) -> NodeSet {
    NodeSet::from_iter((0..n).filter(|_| r.gen_bool(p)))
}

/// Random supergraph of `g`: adds each absent edge with probability `p`.
pub fn random_supergraph(r: &mut ChaCha8Rng, g: &Dmg, p: f64) -> Dmg {
    let n = g.n();
    let mut out = g.clone();
    for a in 0..n {
        for b in 0..n {
            if !g.has_directed(a, b) && r.gen_bool(p) {
                out = out.add_edge(&Edge::directed(a, b)).unwrap();
            }
        }
    }
    for a in 0..n {
        for b in a..n {
            if !g.has_bidirected(a, b) && r.gen_bool(p) {
                out = out.add_edge(&Edge::bidirected(a, b)).unwrap();
            }
        }
    }
    out
}

pub fn with_all_loops(n: usize, edges: &[Edge]) -> Dmg {
    let mut all: Vec<Edge> = edges.to_vec();
    for v in 0..n {
        all.push(Edge::directed(v, v));
        all.push(Edge::bidirected(v, v));
    }
    Dmg::from_edges(n, all).unwrap()
}

/// Chain graph i -> i+1 and i <-> i+1 with all directed loops; Markov
/// equivalent with the complete DMG.
pub fn chain_graph(n: usize) -> Dmg {
    let mut edges = Vec::new();
    for i in 0..n - 1 {
        edges.push(Edge::directed(i, i + 1));
        edges.push(Edge::bidirected(i, i + 1));
    }
    for v in 0..n {
        edges.push(Edge::directed(v, v));
    }
    Dmg::from_edges(n, edges).unwrap()
}

/// Directed n-cycle with all directed loops.
pub fn cycle_graph(n: usize) -> Dmg {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push(Edge::directed(i, (i + 1) % n));
        edges.push(Edge::directed(i, i));
    }
    Dmg::from_edges(n, edges).unwrap()
}

/// Hub family member: 1 fans out to 2..=n-1 which fan into n, plus the
/// direct 1 -> n edge when `with_direct`; all loops of both kinds.
pub fn hub_graph(n: usize, with_direct: bool) -> Dmg {
    let mut edges = Vec::new();
    for mid in 1..n - 1 {
        edges.push(Edge::directed(0, mid));
        edges.push(Edge::directed(mid, n - 1));
    }
    if with_direct {
        edges.push(Edge::directed(0, n - 1));
    }
    with_all_loops(n, &edges)
}

/// Star family member with 2k+1 nodes (parameter k >= 3): node 0 feeds 1,
/// 1 <-> 2, odd->even pairs, node 2 in directed two-cycles with every even
/// node, all loops of both kinds. Zero-based port of the unbounded
/// connectivity family.
pub fn star_family(k: usize) -> Dmg {
    let n = 2 * k + 1;
    let mut edges = vec![Edge::directed(0, 1), Edge::bidirected(1, 2)];
    for i in 1..k {
        let odd = 2 * i + 1;
        let even = 2 * i + 2;
        edges.push(Edge::directed(odd, even));
        edges.push(Edge::directed(2, even));
        edges.push(Edge::directed(even, 2));
    }
    with_all_loops(n, &edges)
}
