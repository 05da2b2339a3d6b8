//! Homogeneous-sequence extraction for 3-graphs.
//!
//! Starting from the lowest vertex, the sequence `A = (v_1, …, v_{m+1})` is
//! grown while a survivor set `V_i` is refined so that for every chosen pair
//! `v_a, v_b` all triples `{v_a, v_b, w}`, `w ∈ V_i`, are edges or all are
//! non-edges. Each refinement keeps the majority side (ties go to edges), so
//! `|V_{i+1}| ≥ (|V_i| − 1) / 2^i` and `n ≥ 2^{m²}` guarantees the sequence
//! reaches length `m + 1`.
//!
//! The pairs whose triples are all edges form the link graph on `v_1..v_m`.
//! Any `K_{s−1}`-free vertex set of the link graph is `K_s^{(3)}`-free in the
//! input, and a `K_{t−1}` in the link graph plus `v_{m+1}` is a `K_t^{(3)}`.

use serde::{Deserialize, Serialize};

use crate::clique::{find_clique, find_clique_within, max_clique_free_subset};
use crate::error::{Error, Result};
use crate::hypergraph::KUniformHypergraph;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairClass {
    InE,
    InComplement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Original vertex labels, ascending.
    pub vertices: Vec<u32>,
    /// Positions in the sequence (0-based), ascending.
    pub positions: Vec<u32>,
    /// Whether the link-graph search proved this size maximum.
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub n: usize,
    /// Largest `m` with `2^{m²} ≤ n`, i.e. `⌊√(log₂ n)⌋`.
    pub m: usize,
    /// `⌊√(ln n)⌋`, reported alongside `m`.
    pub m_natural_log: usize,
    /// `v_1, …, v_{m+1}`.
    pub sequence: Vec<u32>,
    /// `|V_1|, …, |V_m|`.
    pub survivor_sizes: Vec<usize>,
    /// Row `b` holds the classes of pairs `(a, b)` for `a < b < m`
    /// (0-based sequence positions).
    pub pair_class: Vec<Vec<PairClass>>,
    pub link_graph: Option<KUniformHypergraph>,
    pub witness: Option<Witness>,
    /// A `K_t^{(3)}` of the input found through a `K_{t−1}` of the link graph.
    /// Present only when the input was not `K_t`-free.
    pub forbidden_clique: Option<Vec<u32>>,
}

/// Largest `m ≥ 1` with `2^{m²} ≤ n`.
pub fn compute_m(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    let mut m = 1;
    while (m + 1) * (m + 1) < usize::BITS as usize && 1usize << ((m + 1) * (m + 1)) <= n {
        m += 1;
    }
    Ok(m)
}

fn floor_sqrt_ln(n: usize) -> usize {
    let mut r = (n as f64).ln().sqrt().floor() as usize;
    // guard against rounding at perfect squares
    while ((r + 1) as f64).powi(2) <= (n as f64).ln() {
        r += 1;
    }
    while r > 0 && (r as f64).powi(2) > (n as f64).ln() {
        r -= 1;
    }
    r
}

fn check_three_graph(g: &KUniformHypergraph) -> Result<()> {
    if g.k() != 3 {
        return Err(Error::InvalidParameters(format!(
            "extraction needs a 3-graph, got k = {}",
            g.k()
        )));
    }
    if g.n() < 2 {
        return Err(Error::TooFewVertices(g.n()));
    }
    Ok(())
}

fn triple(a: u32, b: u32, c: u32) -> [u32; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

impl ExtractionTrace {
    pub fn class(&self, a: usize, b: usize) -> PairClass {
        assert!(a < b && b < self.m, "pair ({a}, {b}) outside 0..{}", self.m);
        self.pair_class[b][a]
    }

    /// Checks that every triple `{v_a, v_b, v_c}` with `a < b < m`, `b < c ≤ m`
    /// is an edge exactly when the pair `(a, b)` is classed `IN_E`.
    pub fn verify_homogeneity(&self, g: &KUniformHypergraph) -> std::result::Result<(), (usize, usize, usize)> {
        let seq = &self.sequence;
        for b in 0..self.m {
            for a in 0..b {
                let expect = self.class(a, b) == PairClass::InE;
                for c in b + 1..=self.m {
                    if g.has_edge(&triple(seq[a], seq[b], seq[c])) != expect {
                        return Err((a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks `|V_{i+1}| ≥ (|V_i| − 1) / 2^i` at every step.
    pub fn verify_recurrence(&self) -> bool {
        self.survivor_sizes.windows(2).enumerate().all(|(step, w)| {
            let halvings = step as u32 + 1;
            (w[1] as u128) << halvings >= (w[0] as u128).saturating_sub(1)
        })
    }

    pub fn witness_set(&self) -> Option<VertexSet> {
        self.witness
            .as_ref()
            .map(|w| VertexSet::from_vertices(self.n, w.vertices.iter().copied()))
    }
}

/// Builds `A`, the survivor sizes and the pair classes. The next vertex is
/// always the lowest survivor.
pub fn extract_sequence(g: &KUniformHypergraph) -> Result<ExtractionTrace> {
    check_three_graph(g)?;
    let n = g.n();
    let m = compute_m(n)?;
    let index = g.link_index()?;

    let mut sequence = vec![0u32];
    let mut survivors = VertexSet::full(n);
    survivors.remove(0);
    let mut survivor_sizes = vec![survivors.len()];
    let mut pair_class = vec![Vec::new()];

    for chosen in 1..=m {
        let next = survivors
            .first()
            .ok_or_else(|| Error::NotFound(format!("survivor set empty after {chosen} vertices")))?;
        sequence.push(next);
        if chosen == m {
            break;
        }
        survivors.remove(next);
        let mut row = Vec::with_capacity(chosen);
        for &earlier in &sequence[..chosen] {
            let pair = [earlier.min(next), earlier.max(next)];
            let link = VertexSet::from_words(n, index.link(&pair).to_vec());
            let mut in_e = survivors.clone();
            in_e.intersect_with(&link);
            if 2 * in_e.len() >= survivors.len() {
                survivors = in_e;
                row.push(PairClass::InE);
            } else {
                survivors.difference_with(&link);
                row.push(PairClass::InComplement);
            }
        }
        pair_class.push(row);
        survivor_sizes.push(survivors.len());
    }

    Ok(ExtractionTrace {
        n,
        m,
        m_natural_log: floor_sqrt_ln(n),
        sequence,
        survivor_sizes,
        pair_class,
        link_graph: None,
        witness: None,
        forbidden_clique: None,
    })
}

/// Link graph on sequence positions `0..m`, recomputed from `g`: `{a, b}` is an
/// edge iff every `{v_a, v_b, v_c}`, `b < c ≤ m`, is an edge of `g`. Fails with
/// `TraceMismatch` if that disagrees with the recorded pair classes.
pub fn build_link_graph(trace: &ExtractionTrace, g: &KUniformHypergraph) -> Result<KUniformHypergraph> {
    check_three_graph(g)?;
    let seq = &trace.sequence;
    if trace.n != g.n() || seq.len() != trace.m + 1 || trace.pair_class.len() != trace.m {
        return Err(Error::TraceMismatch("trace shape does not fit the hypergraph".into()));
    }
    if seq.iter().any(|&v| v as usize >= g.n()) {
        return Err(Error::TraceMismatch("sequence vertex out of range".into()));
    }
    let mut distinct = seq.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != seq.len() {
        return Err(Error::TraceMismatch("sequence repeats a vertex".into()));
    }
    if trace.pair_class.iter().enumerate().any(|(b, row)| row.len() != b) {
        return Err(Error::TraceMismatch("pair class rows have the wrong length".into()));
    }
    let mut edges = Vec::new();
    for a in 0..trace.m {
        for b in a + 1..trace.m {
            let all_in = (b + 1..=trace.m).all(|c| g.has_edge(&triple(seq[a], seq[b], seq[c])));
            if all_in != (trace.class(a, b) == PairClass::InE) {
                return Err(Error::TraceMismatch(format!(
                    "pair ({a}, {b}) classed {:?} but link membership is {all_in}",
                    trace.class(a, b)
                )));
            }
            if all_in {
                edges.push([a as u32, b as u32]);
            }
        }
    }
    KUniformHypergraph::new(trace.m, 2, edges)
}

/// Full pipeline: sequence, link graph, largest `K_{s−1}`-free set of the
/// link graph, mapped back and re-verified `K_s^{(3)}`-free in `g`.
pub fn extract_witness(g: &KUniformHypergraph, s: usize, t: usize, node_budget: u64) -> Result<ExtractionTrace> {
    if !(3 <= s && s < t) {
        return Err(Error::InvalidParameters(format!("need 3 <= s < t, got s = {s}, t = {t}")));
    }
    let mut trace = extract_sequence(g)?;
    let link = build_link_graph(&trace, g)?;

    let best = max_clique_free_subset(&link, s - 1, node_budget)?;
    let positions = best.witness.to_vec();
    let mut vertices: Vec<u32> = positions.iter().map(|&p| trace.sequence[p as usize]).collect();
    vertices.sort_unstable();
    let witness_set = VertexSet::from_vertices(g.n(), vertices.iter().copied());
    if let Some(clique) = find_clique_within(g, s, &witness_set)? {
        return Err(Error::WitnessVerificationFailed { clique });
    }

    if let Some(link_clique) = find_clique(&link, t - 1)? {
        let mut clique: Vec<u32> = link_clique.iter().map(|&p| trace.sequence[p as usize]).collect();
        clique.push(trace.sequence[trace.m]);
        clique.sort_unstable();
        trace.forbidden_clique = Some(clique);
    }
    trace.link_graph = Some(link);
    trace.witness = Some(Witness {
        vertices,
        positions,
        optimal: best.optimal,
    });
    Ok(trace)
}
