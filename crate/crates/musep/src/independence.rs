//! Independence-model signatures and equivalence of DMGs over conditioning
//! families.
//!
//! A homogeneous weak equivalence compares two graphs on all separation
//! triples `(alpha, beta, C)` with `C` drawn from a fixed collection of
//! conditioning sets. Homogeneous families are singleton stable, so
//! singleton endpoints with `alpha` outside `C` characterize the whole
//! independence model; signatures store exactly those bits.

use crate::error::{Error, Result};
use crate::graph::{Dmg, NodeId, NodeSet};
use crate::separation::{bounded_collider_connected, mu_separated_sets, SepTable, SeparationMatrix};
use rayon::prelude::*;

/// A homogeneous collection of conditioning sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditioningFamily {
    /// All `C` with `|C| <= k`.
    SizeBound(usize),
    /// An explicit list; deduplicated and kept in canonical
    /// (size, lexicographic) order.
    Explicit(Vec<NodeSet>),
    /// Every subset of the node set.
    All,
}

impl ConditioningFamily {
    /// Materialize the family for a graph on `n` nodes, in canonical order.
    /// Bounded to 63 nodes so every set fits one machine word.
    pub fn sets(&self, n: usize) -> Result<Vec<NodeSet>> {
        if n > 63 {
            return Err(Error::FamilyTooLarge { n });
        }
        match self {
            ConditioningFamily::All => ConditioningFamily::SizeBound(n).sets(n),
            ConditioningFamily::SizeBound(k) => {
                let k = (*k).min(n);
                let mut out = Vec::new();
                for size in 0..=k {
                    subsets_of_size(n, size, &mut out);
                }
                Ok(out)
            }
            ConditioningFamily::Explicit(sets) => {
                for s in sets {
                    if let Some(m) = s.max() {
                        if m >= n {
                            return Err(Error::NodeOutOfRange { index: m, n });
                        }
                    }
                }
                let mut out = sets.clone();
                out.sort_by(|a, b| a.canonical_cmp(b));
                out.dedup();
                Ok(out)
            }
        }
    }
}

/// Appends all size-`size` subsets of `0..n` in lexicographic order.
fn subsets_of_size(n: usize, size: usize, out: &mut Vec<NodeSet>) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(NodeSet::from_iter(idx.iter().copied()));
        if size == 0 {
            return;
        }
        // next combination
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The separation bits of one graph over one family: bit set iff the triple
/// is a mu-separation. Triples are enumerated per conditioning set in
/// canonical order, then by ascending `alpha` outside `C`, then ascending
/// `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub n: usize,
    pub family: ConditioningFamily,
    bits: Vec<u64>,
    nbits: usize,
}

impl Signature {
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn bit_len(&self) -> usize {
        self.nbits
    }

    /// Little-endian byte dump of the bit vector.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.nbits.div_ceil(8);
        let mut out = vec![0u8; nbytes];
        for (i, byte) in out.iter_mut().enumerate() {
            *byte = (self.bits[i / 8] >> (8 * (i % 8))) as u8;
        }
        out
    }

    pub fn from_bytes(n: usize, family: ConditioningFamily, bytes: &[u8]) -> Result<Self> {
        let sets = family.sets(n)?;
        let nbits: usize = sets.iter().map(|c| (n - c.len()) * n).sum();
        if bytes.len() != nbits.div_ceil(8) {
            return Err(Error::InvalidDocument(format!(
                "signature byte length {} does not match the {} expected bits",
                bytes.len(),
                nbits
            )));
        }
        let mut bits = vec![0u64; nbits.div_ceil(64)];
        for (i, &b) in bytes.iter().enumerate() {
            bits[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        // trailing padding must be zero
        if !nbits.is_multiple_of(8) && bytes.last().is_some_and(|b| b >> (nbits % 8) != 0) {
            return Err(Error::InvalidDocument("nonzero padding bits".into()));
        }
        Ok(Self { n, family, bits, nbits })
    }

    /// Triple at bit position `i`, inverse of the enumeration order.
    pub fn triple_at(&self, i: usize) -> Option<(NodeId, NodeId, NodeSet)> {
        let sets = self.family.sets(self.n).ok()?;
        let mut base = 0;
        for c in sets {
            let block = (self.n - c.len()) * self.n;
            if i < base + block {
                let off = i - base;
                let alphas: Vec<NodeId> = (0..self.n).filter(|v| !c.contains(*v)).collect();
                let alpha = alphas[off / self.n];
                let beta = off % self.n;
                return Some((alpha, beta, c));
            }
            base += block;
        }
        None
    }
}

/// Computes the signature of `g` over `fam`, one separation matrix per
/// conditioning set, in parallel with a deterministic concatenation.
pub fn signature(g: &Dmg, fam: &ConditioningFamily) -> Result<Signature> {
    let n = g.n();
    let sets = fam.sets(n)?;
    let chunks: Vec<Vec<bool>> = sets
        .par_iter()
        .map(|c| {
            let m = SeparationMatrix::new(g, c).expect("family sets are validated");
            let mut bits = Vec::with_capacity((n - c.len()) * n);
            for alpha in 0..n {
                if c.contains(alpha) {
                    continue;
                }
                for beta in 0..n {
                    bits.push(m.separated(alpha, beta));
                }
            }
            bits
        })
        .collect();
    let nbits: usize = chunks.iter().map(Vec::len).sum();
    let mut bits = vec![0u64; nbits.div_ceil(64).max(1)];
    let mut i = 0;
    for chunk in chunks {
        for b in chunk {
            if b {
                bits[i / 64] |= 1 << (i % 64);
            }
            i += 1;
        }
    }
    Ok(Signature {
        n,
        family: fam.clone(),
        bits,
        nbits,
    })
}

/// All separated singleton triples of the signature, in enumeration order.
pub fn separated_triples(g: &Dmg, fam: &ConditioningFamily) -> Result<Vec<(NodeId, NodeId, NodeSet)>> {
    let n = g.n();
    let sets = fam.sets(n)?;
    let mut out = Vec::new();
    for c in sets {
        let m = SeparationMatrix::new(g, &c)?;
        for alpha in 0..n {
            if c.contains(alpha) {
                continue;
            }
            for beta in 0..n {
                if m.separated(alpha, beta) {
                    out.push((alpha, beta, c.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// A triple on which two graphs disagree: exactly one of them separates
/// `to` from `from` given `conditioning`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishingTriple {
    pub from: NodeId,
    pub to: NodeId,
    pub conditioning: NodeSet,
}

fn require_same_n(g1: &Dmg, g2: &Dmg) -> Result<usize> {
    if g1.n() != g2.n() {
        return Err(Error::NodeCountMismatch {
            left: g1.n(),
            right: g2.n(),
        });
    }
    Ok(g1.n())
}

/// Do `g1` and `g2` induce the same separations over the family? On
/// disagreement, the returned triple is the first differing one in canonical
/// enumeration order.
pub fn weak_equivalent(
    g1: &Dmg,
    g2: &Dmg,
    fam: &ConditioningFamily,
) -> Result<(bool, Option<DistinguishingTriple>)> {
    let n = require_same_n(g1, g2)?;
    let sets = fam.sets(n)?;
    let witness = sets
        .par_iter()
        .find_map_first(|c| {
            let m1 = SeparationMatrix::new(g1, c).expect("validated");
            let m2 = SeparationMatrix::new(g2, c).expect("validated");
            for alpha in 0..n {
                if c.contains(alpha) {
                    continue;
                }
                for beta in 0..n {
                    if m1.separated(alpha, beta) != m2.separated(alpha, beta) {
                        return Some(DistinguishingTriple {
                            from: alpha,
                            to: beta,
                            conditioning: c.clone(),
                        });
                    }
                }
            }
            None
        });
    Ok((witness.is_none(), witness))
}

/// Full Markov equivalence, decided at conditioning sets of size `n - 1`:
/// two graphs are (n-1)-weakly equivalent iff they are n-weakly equivalent.
pub fn markov_equivalent(g1: &Dmg, g2: &Dmg) -> Result<(bool, Option<DistinguishingTriple>)> {
    let n = require_same_n(g1, g2)?;
    weak_equivalent(g1, g2, &ConditioningFamily::SizeBound(n.saturating_sub(1)))
}

/// A set-valued triple on which two graphs disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishingSetTriple {
    pub from: NodeSet,
    pub to: NodeSet,
    pub conditioning: NodeSet,
}

/// Equivalence over an arbitrary (possibly non-homogeneous) collection of
/// set-valued triples, checked one by one.
pub fn general_weak_equivalent(
    g1: &Dmg,
    g2: &Dmg,
    triples: &[(NodeSet, NodeSet, NodeSet)],
) -> Result<(bool, Option<DistinguishingSetTriple>)> {
    require_same_n(g1, g2)?;
    for (a, b, c) in triples {
        let s1 = mu_separated_sets(g1, a, b, c)?;
        let s2 = mu_separated_sets(g2, a, b, c)?;
        if s1 != s2 {
            return Ok((
                false,
                Some(DistinguishingSetTriple {
                    from: a.clone(),
                    to: b.clone(),
                    conditioning: c.clone(),
                }),
            ));
        }
    }
    Ok((true, None))
}

/// Sources of directed treks into `beta`: a walk is mu-connecting given the
/// empty set iff it is a directed trek.
pub fn dtr(g: &Dmg, beta: NodeId) -> Result<NodeSet> {
    let empty = NodeSet::new();
    let mut out = NodeSet::new();
    for alpha in 0..g.n() {
        if bounded_collider_connected(g, alpha, beta, &empty, 0)? {
            out.insert(alpha);
        }
    }
    Ok(out)
}

/// Trek equivalence: equal directed-trek sources at every node. Coincides
/// with 0-weak equivalence.
pub fn trek_equivalent(g1: &Dmg, g2: &Dmg) -> Result<bool> {
    let n = require_same_n(g1, g2)?;
    for beta in 0..n {
        if dtr(g1, beta)? != dtr(g2, beta)? {
            return Ok(false);
        }
    }
    Ok(true)
}


#[cfg(test)]
mod triple_index_tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn triple_at_inverts_the_enumeration() {
        let g = Dmg::from_edges(3, [Edge::directed(0, 1), Edge::bidirected(1, 2)]).unwrap();
        let fam = ConditioningFamily::SizeBound(2);
        let sig = signature(&g, &fam).unwrap();
        let sets = fam.sets(3).unwrap();
        let mut i = 0;
        for c in sets {
            let m = SeparationMatrix::new(&g, &c).unwrap();
            for alpha in 0..3 {
                if c.contains(alpha) {
                    continue;
                }
                for beta in 0..3 {
                    assert_eq!(sig.triple_at(i), Some((alpha, beta, c.clone())));
                    assert_eq!(sig.bit(i), m.separated(alpha, beta));
                    i += 1;
                }
            }
        }
        assert_eq!(i, sig.bit_len());
        assert_eq!(sig.triple_at(i), None);
    }
}
