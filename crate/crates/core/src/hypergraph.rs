//! k-uniform hypergraphs on dense vertex labels `0..n`, their text format,
//! and the per-(k−1)-subset link index the clique kernels run on.
//!
//! File format: a header line `k n m`, then `m` lines of `k` space-separated
//! vertex indices. Lines starting with `#` and blank lines are skipped.
//! Serialization is canonical: edges ascending within a line, lines in
//! lexicographic order, no trailing newline.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;

use crate::combinatorics::{binomial, for_each_combination, for_each_drop_one, BinomialTable};
use crate::error::{Error, Result};
use crate::rng::{self, Domain};
use crate::vertex_set::{words_for, VertexSet};

/// Largest link index the clique kernels will allocate.
pub const LINK_INDEX_BYTE_LIMIT: u64 = 1 << 30;

pub struct KUniformHypergraph {
    n: usize,
    k: usize,
    /// Edges flattened, `k` entries each, in lexicographic order.
    edges: Vec<u32>,
    links: OnceLock<LinkIndex>,
}

/// For every (k−1)-subset `Q`, the bitset of vertices `v` with `Q ∪ {v}` an
/// edge. Keyed by the colex rank of `Q`.
#[derive(Debug, Clone)]
pub struct LinkIndex {
    words: usize,
    ranks: BinomialTable,
    data: Vec<u64>,
}

impl LinkIndex {
    #[inline]
    pub fn link(&self, subset: &[u32]) -> &[u64] {
        let start = self.ranks.colex_rank(subset) as usize * self.words;
        &self.data[start..start + self.words]
    }

    pub fn words(&self) -> usize {
        self.words
    }
}

impl KUniformHypergraph {
    /// Validates and canonicalizes `edges`. Vertices inside an edge may come in
    /// any order.
    pub fn new<E, I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        E: AsRef<[u32]>,
        I: IntoIterator<Item = E>,
    {
        if k < 2 {
            return Err(Error::InvalidParameters(format!("uniformity {k} < 2")));
        }
        let mut list: Vec<Vec<u32>> = Vec::new();
        for edge in edges {
            list.push(normalize_edge(edge.as_ref(), n, k).map_err(|e| match e {
                Error::MalformedEdge { reason, .. } => Error::InvalidParameters(reason),
                other => other,
            })?);
        }
        Self::from_edge_list(n, k, list)
    }

    fn from_edge_list(n: usize, k: usize, mut list: Vec<Vec<u32>>) -> Result<Self> {
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge { edge: w[0].clone() });
        }
        Ok(Self::from_lex_sorted(n, k, list.concat()))
    }

    /// Trusted constructor: `flat` already holds distinct, sorted, valid edges
    /// in lexicographic order.
    pub(crate) fn from_lex_sorted(n: usize, k: usize, flat: Vec<u32>) -> Self {
        debug_assert_eq!(flat.len() % k, 0);
        debug_assert!(flat.chunks_exact(k).all(|e| e.windows(2).all(|w| w[0] < w[1])
            && (e[k - 1] as usize) < n));
        debug_assert!(flat.chunks_exact(k).zip(flat.chunks_exact(k).skip(1)).all(|(a, b)| a < b));
        KUniformHypergraph {
            n,
            k,
            edges: flat,
            links: OnceLock::new(),
        }
    }

    pub fn empty(n: usize, k: usize) -> Self {
        assert!(k >= 2, "uniformity {k} < 2");
        Self::from_lex_sorted(n, k, Vec::new())
    }

    /// `K_n^{(k)}`; empty when `k > n`.
    pub fn complete(n: usize, k: usize) -> Self {
        assert!(k >= 2, "uniformity {k} < 2");
        let mut flat = Vec::new();
        for_each_combination(n, k, |e| flat.extend_from_slice(e));
        Self::from_lex_sorted(n, k, flat)
    }

    /// Builds a hypergraph from an edge predicate on sorted k-subsets.
    pub fn from_predicate(n: usize, k: usize, mut keep: impl FnMut(&[u32]) -> bool) -> Self {
        assert!(k >= 2, "uniformity {k} < 2");
        let mut flat = Vec::new();
        for_each_combination(n, k, |e| {
            if keep(e) {
                flat.extend_from_slice(e);
            }
        });
        Self::from_lex_sorted(n, k, flat)
    }

    /// Each k-subset is kept independently with probability `p`.
    pub fn random(n: usize, k: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if k < 2 {
            return Err(Error::InvalidParameters(format!("uniformity {k} < 2")));
        }
        let mut rng = rng::stream(seed, Domain::RandomHypergraph, 0);
        Ok(Self::from_predicate(n, k, |_| rng.random_bool(p)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.k
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> std::slice::ChunksExact<'_, u32> {
        self.edges.chunks_exact(self.k)
    }

    /// Membership test for a strictly increasing k-subset.
    pub fn has_edge(&self, edge: &[u32]) -> bool {
        if edge.len() != self.k {
            return false;
        }
        let (mut lo, mut hi) = (0, self.edge_count());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let probe = &self.edges[mid * self.k..(mid + 1) * self.k];
            match probe.cmp(edge) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Sub-hypergraph induced by `w`, relabeled order-preservingly onto
    /// `0..|w|`.
    pub fn induced(&self, w: &VertexSet) -> Result<Self> {
        if let Some(v) = w.iter().find(|&v| v as usize >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v as u64,
                n: self.n,
            });
        }
        let mut relabel = vec![u32::MAX; self.n];
        for (new, old) in w.iter().enumerate() {
            relabel[old as usize] = new as u32;
        }
        let mut flat = Vec::new();
        for e in self.edges() {
            if e.iter().all(|&v| relabel[v as usize] != u32::MAX) {
                flat.extend(e.iter().map(|&v| relabel[v as usize]));
            }
        }
        Ok(Self::from_lex_sorted(w.len(), self.k, flat))
    }

    /// Same as [`induced`](Self::induced) for an ascending vertex list.
    pub fn induced_by(&self, vertices: &[u32]) -> Result<Self> {
        if let Some(&v) = vertices.iter().find(|&&v| v as usize >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v as u64,
                n: self.n,
            });
        }
        self.induced(&VertexSet::from_vertices(self.n, vertices.iter().copied()))
    }

    /// Bytes needed for the link index, or `None` on overflow.
    pub fn link_index_bytes(&self) -> Option<u64> {
        binomial(self.n as u64, self.k as u64 - 1)?
            .checked_mul(words_for(self.n) as u64)?
            .checked_mul(8)
    }

    /// The link index, built on first use.
    pub fn link_index(&self) -> Result<&LinkIndex> {
        if let Some(index) = self.links.get() {
            return Ok(index);
        }
        match self.link_index_bytes() {
            Some(bytes) if bytes <= LINK_INDEX_BYTE_LIMIT => {}
            _ => {
                return Err(Error::InfeasibleSize(format!(
                    "link index for n={}, k={} exceeds {} bytes",
                    self.n, self.k, LINK_INDEX_BYTE_LIMIT
                )))
            }
        }
        Ok(self.links.get_or_init(|| self.build_link_index()))
    }

    fn build_link_index(&self) -> LinkIndex {
        let words = words_for(self.n);
        let ranks = BinomialTable::new(self.n, self.k - 1);
        let entries = binomial(self.n as u64, self.k as u64 - 1).unwrap_or(0) as usize;
        let mut data = vec![0u64; entries * words];
        let mut buf = Vec::with_capacity(self.k);
        for e in self.edges() {
            for_each_drop_one(e, &mut buf, |rest, v| {
                let at = ranks.colex_rank(rest) as usize * words + v as usize / 64;
                data[at] |= 1 << (v % 64);
            });
        }
        LinkIndex { words, ranks, data }
    }

    /// Parses the text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::MalformedHeader("missing header line".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parsed: Vec<usize> = fields
            .iter()
            .map(|f| f.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::MalformedHeader(format!("expected `k n m`, got `{header}`")))?;
        let [k, n, m] = parsed[..] else {
            return Err(Error::MalformedHeader(format!(
                "expected 3 fields `k n m`, got {}",
                fields.len()
            )));
        };
        if k < 2 {
            return Err(Error::MalformedHeader(format!("uniformity {k} < 2")));
        }
        if n > u32::MAX as usize {
            return Err(Error::MalformedHeader(format!("vertex count {n} too large")));
        }
        let mut list = Vec::with_capacity(m.min(1 << 20));
        for (line_no, line) in lines {
            let mut edge = Vec::with_capacity(k);
            for token in line.split_whitespace() {
                let v: u64 = token.parse().map_err(|_| Error::MalformedEdge {
                    line: line_no,
                    reason: format!("`{token}` is not a vertex index"),
                })?;
                if v >= n as u64 {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                edge.push(v as u32);
            }
            list.push(normalize_edge(&edge, n, k).map_err(|e| match e {
                Error::MalformedEdge { reason, .. } => Error::MalformedEdge {
                    line: line_no,
                    reason,
                },
                other => other,
            })?);
        }
        if list.len() != m {
            return Err(Error::EdgeCountMismatch {
                declared: m,
                found: list.len(),
            });
        }
        Self::from_edge_list(n, k, list)
    }

    /// Canonical text form; `parse(serialize(g)) == g`.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

fn normalize_edge(edge: &[u32], n: usize, k: usize) -> Result<Vec<u32>> {
    if edge.len() != k {
        return Err(Error::MalformedEdge {
            line: 0,
            reason: format!("edge has {} vertices, expected {k}", edge.len()),
        });
    }
    if let Some(&v) = edge.iter().find(|&&v| v as usize >= n) {
        return Err(Error::VertexOutOfRange { vertex: v as u64, n });
    }
    let mut sorted = edge.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateVertexInEdge { vertex: w[0] });
    }
    Ok(sorted)
}

impl fmt::Display for KUniformHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.k, self.n, self.edge_count())?;
        for e in self.edges() {
            f.write_str("\n")?;
            for (i, v) in e.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for KUniformHypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Serialized as its canonical text form.
impl serde::Serialize for KUniformHypergraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.serialize())
    }
}

impl<'de> serde::Deserialize<'de> for KUniformHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Self::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl Clone for KUniformHypergraph {
    fn clone(&self) -> Self {
        KUniformHypergraph {
            n: self.n,
            k: self.k,
            edges: self.edges.clone(),
            links: self.links.clone(),
        }
    }
}

impl PartialEq for KUniformHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.edges == other.edges
    }
}

impl Eq for KUniformHypergraph {}

impl fmt::Debug for KUniformHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KUniformHypergraph")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle5() -> KUniformHypergraph {
        KUniformHypergraph::new(5, 2, [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]).unwrap()
    }

    #[test]
    fn parses_single_edge() {
        let g: KUniformHypergraph = "3 5 1\n0 1 2".parse().unwrap();
        assert_eq!((g.n(), g.k(), g.edge_count()), (5, 3, 1));
        assert!(g.has_edge(&[0, 1, 2]));
    }

    #[test]
    fn parses_empty_graph() {
        let g = KUniformHypergraph::parse("2 3 0").unwrap();
        assert_eq!(g, KUniformHypergraph::empty(3, 2));
    }

    #[test]
    fn parse_errors() {
        let err = |t: &str| KUniformHypergraph::parse(t).unwrap_err().name();
        assert_eq!(err("3 5 1\n0 0 2"), "DuplicateVertexInEdge");
        assert_eq!(err("3 5"), "MalformedHeader");
        assert_eq!(err("x 5 1"), "MalformedHeader");
        assert_eq!(err(""), "MalformedHeader");
        assert_eq!(err("1 5 0"), "MalformedHeader");
        assert_eq!(err("3 5 1\n0 1 5"), "VertexOutOfRange");
        assert_eq!(err("3 5 2\n0 1 2\n2 1 0"), "DuplicateEdge");
        assert_eq!(err("3 5 2\n0 1 2"), "EdgeCountMismatch");
        assert_eq!(err("3 5 0\n0 1 2"), "EdgeCountMismatch");
        assert_eq!(err("3 5 1\n0 1"), "MalformedEdge");
        assert_eq!(err("3 5 1\n0 1 a"), "MalformedEdge");
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = KUniformHypergraph::parse("# a comment\n2 3 1\n\n# edge\n0 2\n").unwrap();
        assert!(g.has_edge(&[0, 2]));
    }

    #[test]
    fn serializes_canonically() {
        let g = KUniformHypergraph::new(5, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(g.serialize(), "3 5 1\n0 1 2");
        assert_eq!(KUniformHypergraph::empty(3, 2).serialize(), "2 3 0");
        let g = KUniformHypergraph::new(5, 3, [[0, 3, 4], [0, 1, 2]]).unwrap();
        assert_eq!(g.serialize(), "3 5 2\n0 1 2\n0 3 4");
    }

    #[test]
    fn induced_subgraphs() {
        let k4 = KUniformHypergraph::complete(4, 3);
        let sub = k4.induced_by(&[0, 1, 2]).unwrap();
        assert_eq!(sub.serialize(), "3 3 1\n0 1 2");

        let none = k4.induced(&VertexSet::empty(4)).unwrap();
        assert_eq!((none.n(), none.edge_count()), (0, 0));

        let path = cycle5().induced_by(&[0, 1, 2]).unwrap();
        assert_eq!(path.serialize(), "2 3 2\n0 1\n1 2");

        let relabeled = cycle5().induced_by(&[0, 3, 4]).unwrap();
        assert_eq!(relabeled.serialize(), "2 3 2\n0 2\n1 2");

        assert_eq!(
            cycle5().induced_by(&[0, 7]).unwrap_err().name(),
            "VertexOutOfRange"
        );
    }

    #[test]
    fn k_above_n_is_empty() {
        assert_eq!(KUniformHypergraph::complete(2, 3).edge_count(), 0);
        let r = KUniformHypergraph::random(2, 3, 1.0, 0).unwrap();
        assert_eq!(r.edge_count(), 0);
    }

    #[test]
    fn random_extremes_and_determinism() {
        assert_eq!(KUniformHypergraph::random(7, 3, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(
            KUniformHypergraph::random(7, 3, 1.0, 1).unwrap(),
            KUniformHypergraph::complete(7, 3)
        );
        assert_eq!(
            KUniformHypergraph::random(9, 3, 0.4, 5).unwrap(),
            KUniformHypergraph::random(9, 3, 0.4, 5).unwrap()
        );
        for bad in [-0.1, 1.5, f64::NAN] {
            assert_eq!(
                KUniformHypergraph::random(5, 2, bad, 0).unwrap_err().name(),
                "InvalidProbability"
            );
        }
    }

    #[test]
    fn link_index_matches_edges() {
        let g = KUniformHypergraph::random(9, 3, 0.5, 3).unwrap();
        let index = g.link_index().unwrap();
        for_each_combination(9, 2, |pair| {
            for v in 0..9u32 {
                let linked = index.link(pair)[0] >> v & 1 == 1;
                let mut triple = vec![pair[0], pair[1], v];
                triple.sort_unstable();
                let expected = !pair.contains(&v) && g.has_edge(&triple);
                assert_eq!(linked, expected, "{pair:?} + {v}");
            }
        });
    }

    proptest! {
        #[test]
        fn roundtrip_and_induced_laws(n in 0usize..10, k in 2usize..5, p in 0.0f64..=1.0, seed in any::<u64>(), mask in any::<u16>()) {
            let g = KUniformHypergraph::random(n, k, p, seed).unwrap();
            prop_assert_eq!(&KUniformHypergraph::parse(&g.serialize()).unwrap(), &g);
            prop_assert_eq!(&g.induced(&VertexSet::full(n)).unwrap(), &g);
            let w = VertexSet::from_vertices(n, (0..n as u32).filter(|v| mask >> v & 1 == 1));
            let sub = g.induced(&w).unwrap();
            prop_assert!(sub.edge_count() <= g.edge_count());
            prop_assert_eq!(sub.n(), w.len());
        }
    }
}
