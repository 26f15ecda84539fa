//! Oracle abstraction for local independence and the constraint-based
//! learner of the maximal weakly-equivalent graph.

use crate::error::Result;
use crate::graph::{BitMatrix, Dmg, NodeId, NodeSet};
use crate::independence::ConditioningFamily;
use crate::separation::{mu_separated_sets, SepTable};
use std::collections::HashMap;
use std::sync::Mutex;

/// Answers singleton local-independence queries: `true` means `beta` is
/// independent of `alpha` given `c`. Implementations must be deterministic
/// and safe to query concurrently.
pub trait IndependenceOracle: Sync {
    fn node_count(&self) -> usize;
    fn query(&self, alpha: NodeId, beta: NodeId, c: &NodeSet) -> bool;
}

/// Oracle backed by mu-separation in a graph.
pub struct GraphOracle<'a> {
    g: &'a Dmg,
}

pub fn graph_oracle(g: &Dmg) -> GraphOracle<'_> {
    GraphOracle { g }
}

impl IndependenceOracle for GraphOracle<'_> {
    fn node_count(&self) -> usize {
        self.g.n()
    }

    fn query(&self, alpha: NodeId, beta: NodeId, c: &NodeSet) -> bool {
        mu_separated_sets(
            self.g,
            &NodeSet::singleton(alpha),
            &NodeSet::singleton(beta),
            c,
        )
        .expect("oracle queries use valid indices")
    }
}

/// Caching wrapper that counts distinct queries; each triple reaches the
/// inner oracle at most once.
type QueryKey = (NodeId, NodeId, Vec<NodeId>);

pub struct CountingOracle<O> {
    inner: O,
    cache: Mutex<HashMap<QueryKey, bool>>,
}

impl<O: IndependenceOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Number of distinct (alpha, beta, C) triples issued so far.
    pub fn query_count(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

impl<O: IndependenceOracle> IndependenceOracle for CountingOracle<O> {
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    fn query(&self, alpha: NodeId, beta: NodeId, c: &NodeSet) -> bool {
        let key = (alpha, beta, c.iter().collect::<Vec<_>>());
        if let Some(&hit) = self.cache.lock().unwrap().get(&key) {
            return hit;
        }
        let answer = self.inner.query(alpha, beta, c);
        self.cache.lock().unwrap().insert(key, answer);
        answer
    }
}

/// Oracle answering from an explicit list of separated triples; anything
/// not listed is reported dependent.
pub struct ListOracle {
    n: usize,
    separated: std::collections::HashSet<QueryKey>,
}

impl ListOracle {
    pub fn new(n: usize, separated: impl IntoIterator<Item = (NodeId, NodeId, NodeSet)>) -> Self {
        Self {
            n,
            separated: separated
                .into_iter()
                .map(|(a, b, c)| (a, b, c.iter().collect()))
                .collect(),
        }
    }
}

impl IndependenceOracle for ListOracle {
    fn node_count(&self) -> usize {
        self.n
    }

    fn query(&self, alpha: NodeId, beta: NodeId, c: &NodeSet) -> bool {
        if c.contains(alpha) {
            return true;
        }
        self.separated
            .contains(&(alpha, beta, c.iter().collect::<Vec<_>>()))
    }
}

/// Per-conditioning-set table materialized from oracle answers.
pub struct OracleTable {
    conditioning: NodeSet,
    sep: BitMatrix,
}

impl OracleTable {
    pub fn new<O: IndependenceOracle + ?Sized>(oracle: &O, c: &NodeSet) -> Self {
        let n = oracle.node_count();
        let mut sep = BitMatrix::new(n);
        for alpha in 0..n {
            for beta in 0..n {
                sep.set(alpha, beta, oracle.query(alpha, beta, c));
            }
        }
        Self {
            conditioning: c.clone(),
            sep,
        }
    }
}

impl SepTable for OracleTable {
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

/// Oracle-facing potential-edge checks.
pub fn c_potential_sibling_oracle<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    alpha: NodeId,
    beta: NodeId,
    c: &NodeSet,
) -> bool {
    crate::potential::c_potential_sibling_in(&OracleTable::new(oracle, c), alpha, beta)
}

pub fn c_potential_parent_oracle<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    alpha: NodeId,
    beta: NodeId,
    c: &NodeSet,
) -> bool {
    crate::potential::c_potential_parent_in(&OracleTable::new(oracle, c), alpha, beta)
}

/// Learns the maximal graph of the oracle's weak equivalence class,
/// conceptually starting from the complete DMG and removing every edge whose
/// potential-edge condition fails at some conditioning set of the family.
/// Conditions depend only on the independence model, so removals are
/// order-independent.
pub fn learn_maximal<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    fam: &ConditioningFamily,
) -> Result<Dmg> {
    use rayon::prelude::*;
    let n = oracle.node_count();
    let sets = fam.sets(n)?;
    let full = || crate::equivalence::EdgeSurvival {
        dir: vec![true; n * n],
        bidir: vec![true; n * (n + 1) / 2],
    };
    let acc = sets
        .par_iter()
        .map(|c| crate::equivalence::survival_for_table(&OracleTable::new(oracle, c)))
        .reduce(full, |mut acc, survival| {
            for (a, b) in acc.dir.iter_mut().zip(survival.dir) {
                *a &= b;
            }
            for (a, b) in acc.bidir.iter_mut().zip(survival.bidir) {
                *a &= b;
            }
            acc
        });
    Ok(crate::equivalence::graph_from_survival(n, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::greatest_element;
    use crate::graph::Edge;

    fn ns(v: &[usize]) -> NodeSet {
        NodeSet::from_iter(v.iter().copied())
    }

    fn separation_example() -> Dmg {
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

    #[test]
    fn graph_oracle_answers_separations() {
        let g = separation_example();
        let o = graph_oracle(&g);
        assert!(o.query(0, 2, &ns(&[1, 2])));
        assert!(!o.query(0, 2, &ns(&[1])));
        assert!(o.query(0, 2, &ns(&[0])), "source in C is independent");
    }

    #[test]
    fn counting_oracle_dedups() {
        let g = separation_example();
        let o = CountingOracle::new(graph_oracle(&g));
        let c = ns(&[1]);
        o.query(0, 2, &c);
        o.query(0, 2, &c);
        assert_eq!(o.query_count(), 1);
        o.query(2, 0, &c);
        assert_eq!(o.query_count(), 2);
    }

    fn with_all_loops(n: usize, edges: &[Edge]) -> Dmg {
        let mut all: Vec<Edge> = edges.to_vec();
        for v in 0..n {
            all.push(Edge::directed(v, v));
            all.push(Edge::bidirected(v, v));
        }
        Dmg::from_edges(n, all).unwrap()
    }

    #[test]
    fn learner_recovers_weak_greatest_element() {
        // the four-node example: learning at k = 2 returns the class maximum
        let a = with_all_loops(
            4,
            &[
                Edge::directed(0, 2),
                Edge::directed(1, 2),
                Edge::directed(3, 1),
                Edge::bidirected(1, 2),
            ],
        );
        let fam = ConditioningFamily::SizeBound(2);
        let learned = learn_maximal(&graph_oracle(&a), &fam).unwrap();
        assert_eq!(learned, greatest_element(&a, &fam).unwrap());
        assert_eq!(learned, a.add_edge(&Edge::directed(3, 2)).unwrap());
    }

    #[test]
    fn learner_keeps_complete_graph() {
        let g = Dmg::complete(3);
        let learned = learn_maximal(&graph_oracle(&g), &ConditioningFamily::SizeBound(1)).unwrap();
        assert_eq!(learned, g);
    }

    #[test]
    fn query_count_bound() {
        let g = separation_example();
        let o = CountingOracle::new(graph_oracle(&g));
        learn_maximal(&o, &ConditioningFamily::SizeBound(0)).unwrap();
        assert!(o.query_count() <= 9, "got {}", o.query_count());
        let o = CountingOracle::new(graph_oracle(&g));
        learn_maximal(&o, &ConditioningFamily::SizeBound(2)).unwrap();
        // n^2 * sum of binomials C(3,0..2) = 9 * 7
        assert!(o.query_count() <= 63);
    }

    #[test]
    fn list_oracle_round_trip() {
        let g = separation_example();
        let fam = ConditioningFamily::SizeBound(1);
        let triples = crate::independence::separated_triples(&g, &fam).unwrap();
        let list = ListOracle::new(3, triples);
        assert_eq!(
            learn_maximal(&list, &fam).unwrap(),
            learn_maximal(&graph_oracle(&g), &fam).unwrap()
        );
    }

    #[test]
    fn oracle_potential_checks_match_graph_ones() {
        let g = with_all_loops(
            4,
            &[
                Edge::directed(0, 2),
                Edge::directed(1, 2),
                Edge::directed(3, 1),
                Edge::bidirected(1, 2),
            ],
        );
        let o = graph_oracle(&g);
        for c in ConditioningFamily::SizeBound(2).sets(4).unwrap() {
            for a in 0..4 {
                for b in 0..4 {
                    assert_eq!(
                        c_potential_parent_oracle(&o, a, b, &c),
                        crate::potential::c_potential_parent(&g, a, b, &c).unwrap()
                    );
                    assert_eq!(
                        c_potential_sibling_oracle(&o, a, b, &c),
                        crate::potential::c_potential_sibling(&g, a, b, &c).unwrap()
                    );
                }
            }
        }
    }
}
