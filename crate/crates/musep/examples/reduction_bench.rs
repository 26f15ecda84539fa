//! Generates tautology-reduction instances of growing size and times
//! separation queries against them.
//!
//!     cargo run --release -p musep --example reduction_bench

use musep::graph::NodeSet;
use musep::reduce::{build_dense, build_sparse, parse_3dnf, ReductionInstance};
use musep::separation::Reach;
use std::time::Instant;

fn time_queries(inst: &ReductionInstance, queries: usize) -> f64 {
    let reach = Reach::new(&inst.g1);
    let n = inst.g1.n();
    // simple deterministic query mix over node pairs and growing sets
    let mut hits = 0usize;
    let start = Instant::now();
    for q in 0..queries {
        let a = (q * 7) % n;
        let b = (q * 13 + 5) % n;
        let c: NodeSet = (0..n).filter(|v| (v * 31 + q) % 11 == 0).collect();
        if reach.mu_connected(a, b, &c) {
            hits += 1;
        }
    }
    let per_query = start.elapsed().as_secs_f64() / queries as f64;
    assert!(hits > 0, "query mix should hit some connections");
    per_query * 1e6
}

fn main() {
    let formulas = [
        "x1",
        "x1 & x2",
        "x1 & x2 & x3 | !x1 & x2",
        "x1 & x2 & x3 | x2 & x3 & x4 | !x1 & !x4 | x3",
    ];
    println!(
        "{:<44} {:>7} {:>7} {:>7} {:>10}",
        "formula", "variant", "nodes", "edges", "us/query"
    );
    for text in formulas {
        let h = parse_3dnf(text).unwrap();
        for (name, inst) in [("dense", build_dense(&h)), ("sparse", build_sparse(&h))] {
            let us = time_queries(&inst, 2000);
            println!(
                "{:<44} {:>7} {:>7} {:>7} {:>10.2}",
                text,
                name,
                inst.node_count(),
                inst.edge_count(),
                us
            );
            if name == "sparse" {
                assert!(inst.max_nonloop_degree() <= 8);
            }
        }
    }
}
