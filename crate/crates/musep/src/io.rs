//! File formats: graph documents, conditioning families, triples, signature
//! dumps, forest documents, and DOT export. All emitters produce
//! deterministic, byte-identical output for identical inputs.

use crate::equivalence::{Dmeg, HierarchyForest};
use crate::error::{Error, Result};
use crate::graph::{Dmg, Edge, NodeId, NodeSet};
use crate::independence::{ConditioningFamily, Signature};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A labeled DMG on disk: node labels plus label pairs per edge kind.
/// Bidirected pairs are order-insensitive on input and emitted sorted.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphDocument {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub directed: Vec<[String; 2]>,
    #[serde(default)]
    pub bidirected: Vec<[String; 2]>,
}

/// Label table of a graph: resolves labels to indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    index: BTreeMap<String, NodeId>,
}

impl Labels {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidDocument(format!("duplicate node label {name:?}")));
            }
        }
        Ok(Self { names, index })
    }

    /// Default labels "1".."n".
    pub fn numeric(n: usize) -> Self {
        Self::new((1..=n).map(|i| i.to_string()).collect()).expect("distinct by construction")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: NodeId) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn resolve(&self, label: &str) -> Result<NodeId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::InvalidDocument(format!("unknown node label {label:?}")))
    }

    /// Resolves a comma-separated list of labels into a node set.
    pub fn resolve_list(&self, list: &str) -> Result<NodeSet> {
        let mut out = NodeSet::new();
        for part in list.split(',') {
            let part = part.trim();
            if !part.is_empty() {
                out.insert(self.resolve(part)?);
            }
        }
        Ok(out)
    }

    pub fn set_to_labels(&self, s: &NodeSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }
}

impl GraphDocument {
    pub fn from_dmg(g: &Dmg, labels: &Labels) -> Self {
        let mut directed = Vec::new();
        let mut bidirected = Vec::new();
        for e in g.edges() {
            let (x, y) = e.endpoints();
            let pair = [labels.name(x).to_string(), labels.name(y).to_string()];
            if e.is_directed() {
                directed.push(pair);
            } else {
                bidirected.push(pair);
            }
        }
        Self {
            nodes: labels.names().to_vec(),
            directed,
            bidirected,
        }
    }

    pub fn to_dmg(&self) -> Result<(Dmg, Labels)> {
        let labels = Labels::new(self.nodes.clone())?;
        let mut edges = Vec::new();
        for [t, h] in &self.directed {
            edges.push(Edge::directed(labels.resolve(t)?, labels.resolve(h)?));
        }
        for [a, b] in &self.bidirected {
            edges.push(Edge::bidirected(labels.resolve(a)?, labels.resolve(b)?));
        }
        Ok((Dmg::from_edges(labels.len(), edges)?, labels))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }
}

/// A conditioning family on disk: either a size bound or explicit label sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyDocument {
    SizeBound { k: usize },
    Explicit { sets: Vec<Vec<String>> },
}

impl FamilyDocument {
    pub fn to_family(&self, labels: &Labels) -> Result<ConditioningFamily> {
        match self {
            FamilyDocument::SizeBound { k } => Ok(ConditioningFamily::SizeBound(*k)),
            FamilyDocument::Explicit { sets } => {
                let mut out = Vec::new();
                for set in sets {
                    let mut ns = NodeSet::new();
                    for label in set {
                        ns.insert(labels.resolve(label)?);
                    }
                    out.push(ns);
                }
                Ok(ConditioningFamily::Explicit(out))
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }
}

/// General triples on disk: a list of {a, b, c} label sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleDocument {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

pub fn parse_triples(text: &str, labels: &Labels) -> Result<Vec<(NodeSet, NodeSet, NodeSet)>> {
    let docs: Vec<TripleDocument> =
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))?;
    let mut out = Vec::new();
    for d in docs {
        let resolve = |list: &[String]| -> Result<NodeSet> {
            let mut s = NodeSet::new();
            for l in list {
                s.insert(labels.resolve(l)?);
            }
            Ok(s)
        };
        out.push((resolve(&d.a)?, resolve(&d.b)?, resolve(&d.c)?));
    }
    Ok(out)
}

/// Separation list for file-backed oracles: triples that are separated;
/// everything else answers dependent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparationsDocument {
    pub nodes: Vec<String>,
    pub separated: Vec<(String, String, Vec<String>)>,
}

impl SeparationsDocument {
    pub fn to_oracle(&self) -> Result<(crate::learning::ListOracle, Labels)> {
        let labels = Labels::new(self.nodes.clone())?;
        let mut triples = Vec::new();
        for (a, b, c) in &self.separated {
            let mut cs = NodeSet::new();
            for l in c {
                cs.insert(labels.resolve(l)?);
            }
            triples.push((labels.resolve(a)?, labels.resolve(b)?, cs));
        }
        Ok((
            crate::learning::ListOracle::new(labels.len(), triples),
            labels,
        ))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }
}

/// Signature dump: node count, family descriptor, and the bit vector as
/// lowercase hex of its little-endian bytes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureDocument {
    pub n: usize,
    pub family: FamilyDocument,
    pub bits_hex: String,
}

fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn from_hex(text: &str) -> Result<Vec<u8>> {
    if !text.len().is_multiple_of(2) {
        return Err(Error::InvalidDocument("odd hex length".into()));
    }
    (0..text.len() / 2)
        .map(|i| {
            u8::from_str_radix(&text[2 * i..2 * i + 2], 16)
                .map_err(|e| Error::InvalidDocument(e.to_string()))
        })
        .collect()
}

impl SignatureDocument {
    pub fn from_signature(sig: &Signature, labels: &Labels) -> Self {
        let family = match &sig.family {
            ConditioningFamily::SizeBound(k) => FamilyDocument::SizeBound { k: *k },
            ConditioningFamily::All => FamilyDocument::SizeBound { k: sig.n },
            ConditioningFamily::Explicit(sets) => FamilyDocument::Explicit {
                sets: sets.iter().map(|s| labels.set_to_labels(s)).collect(),
            },
        };
        Self {
            n: sig.n,
            family,
            bits_hex: to_hex(&sig.to_bytes()),
        }
    }

    pub fn to_signature(&self, labels: &Labels) -> Result<Signature> {
        let family = self.family.to_family(labels)?;
        Signature::from_bytes(self.n, family, &from_hex(&self.bits_hex)?)
    }
}

/// DMEG on disk: the greatest element's edges with the dashed subsets
/// listed separately.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DmegDocument {
    pub nodes: Vec<String>,
    pub directed: Vec<[String; 2]>,
    pub bidirected: Vec<[String; 2]>,
    pub dashed_directed: Vec<[String; 2]>,
    pub dashed_bidirected: Vec<[String; 2]>,
    pub fix_loops: bool,
}

impl DmegDocument {
    pub fn from_dmeg(d: &Dmeg, labels: &Labels) -> Self {
        let base = GraphDocument::from_dmg(&d.base, labels);
        let mut dashed_directed = Vec::new();
        let mut dashed_bidirected = Vec::new();
        let mut dashed = d.dashed.clone();
        dashed.sort();
        for e in &dashed {
            let (x, y) = e.endpoints();
            let pair = [labels.name(x).to_string(), labels.name(y).to_string()];
            if e.is_directed() {
                dashed_directed.push(pair);
            } else {
                dashed_bidirected.push(pair);
            }
        }
        Self {
            nodes: base.nodes,
            directed: base.directed,
            bidirected: base.bidirected,
            dashed_directed,
            dashed_bidirected,
            fix_loops: d.fix_loops,
        }
    }
}

/// Forest document for the k-weak hierarchy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForestDocument {
    pub n: usize,
    pub fix_loops: bool,
    pub nodes: Vec<ForestNodeDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForestNodeDocument {
    pub id: usize,
    pub level: usize,
    pub down: Option<usize>,
    pub class_size: u64,
    pub graph: GraphDocument,
}

impl ForestDocument {
    pub fn from_forest(f: &HierarchyForest) -> Self {
        let labels = Labels::numeric(f.n);
        Self {
            n: f.n,
            fix_loops: f.fix_loops,
            nodes: f
                .nodes
                .iter()
                .enumerate()
                .map(|(id, node)| ForestNodeDocument {
                    id,
                    level: node.level,
                    down: node.down,
                    class_size: node.class_size,
                    graph: GraphDocument::from_dmg(&node.graph, &labels),
                })
                .collect(),
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('"', "\\\"")
}

fn dot_edges(g: &Dmg, labels: &Labels, dashed: Option<&Dmeg>, out: &mut String) {
    for e in g.edges() {
        let (x, y) = e.endpoints();
        let mut attrs: Vec<String> = Vec::new();
        if !e.is_directed() {
            attrs.push("dir=both".into());
        }
        if dashed.is_some_and(|d| d.is_dashed(&e)) {
            attrs.push("style=dashed".into());
        }
        let attr_text = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        out.push_str(&format!(
            "  \"{}\" -> \"{}\"{};\n",
            dot_escape(labels.name(x)),
            dot_escape(labels.name(y)),
            attr_text
        ));
    }
}

/// DOT rendering of a plain graph: directed edges as arrows, bidirected as
/// double-headed arrows.
pub fn graph_to_dot(g: &Dmg, labels: &Labels) -> String {
    let mut out = String::from("digraph dmg {\n");
    for name in labels.names() {
        out.push_str(&format!("  \"{}\";\n", dot_escape(name)));
    }
    dot_edges(g, labels, None, &mut out);
    out.push_str("}\n");
    out
}

/// DOT rendering of a DMEG: dashed class-variable edges get `style=dashed`.
pub fn dmeg_to_dot(d: &Dmeg, labels: &Labels) -> String {
    let mut out = String::from("digraph dmeg {\n");
    for name in labels.names() {
        out.push_str(&format!("  \"{}\";\n", dot_escape(name)));
    }
    dot_edges(&d.base, labels, Some(d), &mut out);
    out.push_str("}\n");
    out
}

/// DOT rendering of a hierarchy forest: one box per class labeled with its
/// level and edge list, child -> parent links downward.
pub fn forest_to_dot(f: &HierarchyForest) -> String {
    let labels = Labels::numeric(f.n);
    let mut out = String::from("digraph hierarchy {\n  rankdir=BT;\n");
    for (i, node) in f.nodes.iter().enumerate() {
        let edges: Vec<String> = node
            .graph
            .edges()
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| {
                let (x, y) = e.endpoints();
                if e.is_directed() {
                    format!("{}->{}", labels.name(x), labels.name(y))
                } else {
                    format!("{}<->{}", labels.name(x), labels.name(y))
                }
            })
            .collect();
        out.push_str(&format!(
            "  n{} [shape=box, label=\"k={}\\n{}\"];\n",
            i,
            node.level,
            dot_escape(&edges.join(" "))
        ));
    }
    for (i, node) in f.nodes.iter().enumerate() {
        if let Some(p) = node.down {
            out.push_str(&format!("  n{i} -> n{p};\n"));
        }
    }
    out.push_str("}\n");
    out
}
