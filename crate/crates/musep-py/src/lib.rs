//! Python bindings: the labeled graph type plus the main separation,
//! equivalence-class, projection, learning, and reduction operations.

use musep::equivalence;
use musep::graph::{Dmg, Edge, NodeSet};
use musep::independence::{self, ConditioningFamily};
use musep::io::{GraphDocument, Labels};
use musep::learning::{graph_oracle, learn_maximal};
use musep::projection;
use musep::reduce;
use musep::separation;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

/// Edge rendered for Python: (tail, head, "directed" | "bidirected").
type PyEdge = (String, String, String);
/// Distinguishing triple rendered for Python.
type PyTriple = (String, String, Vec<String>);

fn err(e: musep::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A labeled directed mixed graph.
#[pyclass(name = "Graph")]
#[derive(Clone)]
struct PyGraph {
    inner: Dmg,
    labels: Labels,
}

impl PyGraph {
    fn wrap(inner: Dmg, labels: Labels) -> Self {
        Self { inner, labels }
    }

    fn resolve(&self, label: &str) -> PyResult<usize> {
        self.labels.resolve(label).map_err(err)
    }

    fn resolve_set(&self, labels: Vec<String>) -> PyResult<NodeSet> {
        let mut out = NodeSet::new();
        for l in labels {
            out.insert(self.resolve(&l)?);
        }
        Ok(out)
    }

    fn family(&self, k: usize) -> ConditioningFamily {
        ConditioningFamily::SizeBound(k)
    }

    fn edge(&self, tail: &str, head: &str, bidirected: bool) -> PyResult<Edge> {
        let t = self.resolve(tail)?;
        let h = self.resolve(head)?;
        Ok(if bidirected {
            Edge::bidirected(t, h)
        } else {
            Edge::directed(t, h)
        })
    }
}

#[pymethods]
impl PyGraph {
    /// Graph from node labels and (tail, head) label pairs.
    #[new]
    #[pyo3(signature = (nodes, directed=vec![], bidirected=vec![]))]
    fn new(
        nodes: Vec<String>,
        directed: Vec<(String, String)>,
        bidirected: Vec<(String, String)>,
    ) -> PyResult<Self> {
        let doc = GraphDocument {
            nodes,
            directed: directed.into_iter().map(|(a, b)| [a, b]).collect(),
            bidirected: bidirected.into_iter().map(|(a, b)| [a, b]).collect(),
        };
        let (inner, labels) = doc.to_dmg().map_err(err)?;
        Ok(Self::wrap(inner, labels))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (inner, labels) = GraphDocument::parse(text)
            .and_then(|d| d.to_dmg())
            .map_err(err)?;
        Ok(Self::wrap(inner, labels))
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        Self::wrap(Dmg::complete(n), Labels::numeric(n))
    }

    fn to_json(&self) -> String {
        GraphDocument::from_dmg(&self.inner, &self.labels).to_json()
    }

    fn to_dot(&self) -> String {
        musep::io::graph_to_dot(&self.inner, &self.labels)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.labels.names().to_vec()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[pyo3(signature = (tail, head, bidirected=false))]
    fn has_edge(&self, tail: &str, head: &str, bidirected: bool) -> PyResult<bool> {
        self.inner.has_edge(&self.edge(tail, head, bidirected)?).map_err(err)
    }

    #[pyo3(signature = (tail, head, bidirected=false))]
    fn add_edge(&self, tail: &str, head: &str, bidirected: bool) -> PyResult<Self> {
        let g = self.inner.add_edge(&self.edge(tail, head, bidirected)?).map_err(err)?;
        Ok(Self::wrap(g, self.labels.clone()))
    }

    #[pyo3(signature = (tail, head, bidirected=false))]
    fn remove_edge(&self, tail: &str, head: &str, bidirected: bool) -> PyResult<Self> {
        let g = self.inner.remove_edge(&self.edge(tail, head, bidirected)?).map_err(err)?;
        Ok(Self::wrap(g, self.labels.clone()))
    }

    fn ancestors(&self, seeds: Vec<String>) -> PyResult<Vec<String>> {
        let an = self.inner.ancestors(&self.resolve_set(seeds)?).map_err(err)?;
        Ok(self.labels.set_to_labels(&an))
    }

    /// Is there a mu-connecting walk from `source` to `target` given `given`?
    #[pyo3(signature = (source, target, given=vec![]))]
    fn mu_connected(&self, source: &str, target: &str, given: Vec<String>) -> PyResult<bool> {
        separation::mu_connected(
            &self.inner,
            self.resolve(source)?,
            self.resolve(target)?,
            &self.resolve_set(given)?,
        )
        .map_err(err)
    }

    /// Is `b` mu-separated from `a` given `c`?
    #[pyo3(signature = (a, b, c=vec![]))]
    fn mu_separated(&self, a: Vec<String>, b: Vec<String>, c: Vec<String>) -> PyResult<bool> {
        separation::mu_separated_sets(
            &self.inner,
            &self.resolve_set(a)?,
            &self.resolve_set(b)?,
            &self.resolve_set(c)?,
        )
        .map_err(err)
    }

    /// A mu-connecting walk rendered as text, or None when separated.
    #[pyo3(signature = (source, target, given=vec![]))]
    fn witness_walk(
        &self,
        source: &str,
        target: &str,
        given: Vec<String>,
    ) -> PyResult<Option<String>> {
        let w = separation::witness_walk(
            &self.inner,
            self.resolve(source)?,
            self.resolve(target)?,
            &self.resolve_set(given)?,
        )
        .map_err(err)?;
        Ok(w.map(|w| {
            let mut out = self.labels.name(w.start).to_string();
            for s in &w.steps {
                let arrow = match (&s.edge, s.marks().0) {
                    (Edge::Bidirected { .. }, _) => "<->",
                    (_, musep::walk::Mark::Tail) => "->",
                    _ => "<-",
                };
                out.push_str(&format!(" {} {}", arrow, self.labels.name(s.nodes().1)));
            }
            out
        }))
    }

    /// (equivalent, witness) where witness is (from, to, conditioning).
    fn weak_equivalent(
        &self,
        other: &PyGraph,
        k: usize,
    ) -> PyResult<(bool, Option<PyTriple>)> {
        let (eq, w) =
            independence::weak_equivalent(&self.inner, &other.inner, &self.family(k)).map_err(err)?;
        Ok((
            eq,
            w.map(|w| {
                (
                    self.labels.name(w.from).to_string(),
                    self.labels.name(w.to).to_string(),
                    self.labels.set_to_labels(&w.conditioning),
                )
            }),
        ))
    }

    fn markov_equivalent(&self, other: &PyGraph) -> PyResult<bool> {
        Ok(independence::markov_equivalent(&self.inner, &other.inner)
            .map_err(err)?
            .0)
    }

    fn trek_equivalent(&self, other: &PyGraph) -> PyResult<bool> {
        independence::trek_equivalent(&self.inner, &other.inner).map_err(err)
    }

    fn signature_hex(&self, k: usize) -> PyResult<String> {
        let sig = independence::signature(&self.inner, &self.family(k)).map_err(err)?;
        Ok(sig.to_bytes().iter().map(|b| format!("{b:02x}")).collect())
    }

    fn greatest_element(&self, k: usize) -> PyResult<Self> {
        let g = equivalence::greatest_element(&self.inner, &self.family(k)).map_err(err)?;
        Ok(Self::wrap(g, self.labels.clone()))
    }

    fn is_maximal(&self, k: usize) -> PyResult<bool> {
        equivalence::is_maximal(&self.inner, &self.family(k)).map_err(err)
    }

    /// (solid edges, dashed edges) of the class DMEG, each edge rendered as
    /// (tail, head, kind).
    #[pyo3(signature = (k, fix_loops=true))]
    fn dmeg(
        &self,
        k: usize,
        fix_loops: bool,
    ) -> PyResult<(Vec<PyEdge>, Vec<PyEdge>)> {
        let d = equivalence::dmeg(&self.inner, &self.family(k), fix_loops).map_err(err)?;
        let show = |edges: &[Edge]| {
            edges
                .iter()
                .map(|e| {
                    let (x, y) = e.endpoints();
                    (
                        self.labels.name(x).to_string(),
                        self.labels.name(y).to_string(),
                        if e.is_directed() { "directed" } else { "bidirected" }.to_string(),
                    )
                })
                .collect::<Vec<PyEdge>>()
        };
        let mut dashed = d.dashed.clone();
        dashed.sort();
        Ok((show(&d.solid()), show(&dashed)))
    }

    #[pyo3(signature = (k, fix_loops=true))]
    fn least_element(&self, k: usize, fix_loops: bool) -> PyResult<Option<Self>> {
        let least =
            equivalence::least_element(&self.inner, &self.family(k), fix_loops).map_err(err)?;
        Ok(least.map(|g| Self::wrap(g, self.labels.clone())))
    }

    /// Latent projection onto the given labels.
    fn latent_project(&self, keep: Vec<String>) -> PyResult<Self> {
        let o = self.resolve_set(keep)?;
        let p = projection::latent_project(&self.inner, &o).map_err(err)?;
        let names: Vec<String> = o.iter().map(|v| self.labels.name(v).to_string()).collect();
        Ok(Self::wrap(p.graph, Labels::new(names).map_err(err)?))
    }

    /// (con_in, con_out, con) for one node.
    fn connectivity(&self, node: &str) -> PyResult<(usize, usize, usize)> {
        let c = projection::connectivity(&self.inner, self.resolve(node)?).map_err(err)?;
        Ok((c.con_in, c.con_out, c.con))
    }

    fn is_m_sparse(&self, m: usize) -> PyResult<bool> {
        projection::is_m_sparse(&self.inner, m).map_err(err)
    }

    /// Learn the k-maximal graph treating this graph as the oracle.
    fn learn_maximal(&self, k: usize) -> PyResult<Self> {
        let learned = learn_maximal(&graph_oracle(&self.inner), &self.family(k)).map_err(err)?;
        Ok(Self::wrap(learned, self.labels.clone()))
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.inner == other.inner && self.labels.names() == other.labels.names()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, directed+bidirected edges={})",
            self.inner.n(),
            self.inner.edge_count()
        )
    }
}

/// A 3DNF tautology-reduction instance.
#[pyclass(name = "Reduction")]
struct PyReduction {
    inner: reduce::ReductionInstance,
}

#[pymethods]
impl PyReduction {
    #[getter]
    fn alpha(&self) -> String {
        self.inner.labels[self.inner.alpha].clone()
    }

    #[getter]
    fn beta(&self) -> String {
        self.inner.labels[self.inner.beta].clone()
    }

    #[getter]
    fn g(&self) -> PyResult<PyGraph> {
        let labels = Labels::new(self.inner.labels.clone()).map_err(err)?;
        Ok(PyGraph::wrap(self.inner.g.clone(), labels))
    }

    #[getter]
    fn g1(&self) -> PyResult<PyGraph> {
        let labels = Labels::new(self.inner.labels.clone()).map_err(err)?;
        Ok(PyGraph::wrap(self.inner.g1.clone(), labels))
    }

    #[getter]
    fn g2(&self) -> PyResult<PyGraph> {
        let labels = Labels::new(self.inner.labels.clone()).map_err(err)?;
        Ok(PyGraph::wrap(self.inner.g2.clone(), labels))
    }

    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    fn max_nonloop_degree(&self) -> usize {
        self.inner.max_nonloop_degree()
    }

    /// Witness conditioning set for a falsifying assignment.
    fn witness_for(&self, assignment: Vec<bool>) -> PyResult<Vec<String>> {
        let c = reduce::witness_conditioning_set(&self.inner, &assignment).map_err(err)?;
        Ok(c.iter().map(|v| self.inner.labels[v].clone()).collect())
    }
}

/// (is_tautology, falsifying_assignment) by brute force.
#[pyfunction]
fn is_tautology(formula: &str) -> PyResult<(bool, Option<Vec<bool>>)> {
    let h = reduce::parse_3dnf(formula).map_err(err)?;
    reduce::is_tautology_bruteforce(&h).map_err(err)
}

/// Build a reduction instance; `variant` is "dense" or "sparse".
#[pyfunction]
fn build_reduction(formula: &str, variant: &str) -> PyResult<PyReduction> {
    let h = reduce::parse_3dnf(formula).map_err(err)?;
    let inner = match variant {
        "dense" => reduce::build_dense(&h),
        "sparse" => reduce::build_sparse(&h),
        other => {
            return Err(PyValueError::new_err(format!(
                "variant must be dense or sparse, got {other:?}"
            )))
        }
    };
    Ok(PyReduction { inner })
}

#[pymodule(name = "musep")]
fn musep_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyReduction>()?;
    m.add_function(wrap_pyfunction!(is_tautology, m)?)?;
    m.add_function(wrap_pyfunction!(build_reduction, m)?)?;
    Ok(())
}
