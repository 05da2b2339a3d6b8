//! Clique detection in k-graphs and the search for a largest vertex subset
//! inducing no `K_s^{(k)}`.
//!
//! Detection grows a clique one vertex at a time while keeping a candidate
//! bitset: every candidate completes each (k−1)-subset of the partial clique
//! to an edge. Adding `v` intersects the candidates with the links of
//! `R ∪ {v}` for all (k−2)-subsets `R` already chosen. For graphs this is the
//! usual neighbourhood intersection.

use serde::{Deserialize, Serialize};

use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};
use crate::hypergraph::{KUniformHypergraph, LinkIndex};
use crate::vertex_set::{bits, VertexSet};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueFreeSubsetResult {
    pub witness: VertexSet,
    pub size: usize,
    /// `true` when the search proved the witness maximum.
    pub optimal: bool,
    /// Branch-and-bound nodes visited (0 for the greedy pass).
    pub nodes: u64,
}

struct Descent<'a> {
    k: usize,
    index: &'a LinkIndex,
    buf: Vec<u32>,
}

impl<'a> Descent<'a> {
    fn new(g: &'a KUniformHypergraph) -> Result<Self> {
        Ok(Descent {
            k: g.k(),
            index: g.link_index()?,
            buf: Vec::with_capacity(g.k()),
        })
    }

    /// Restricts `cand` to vertices completing `R ∪ {v}` for every
    /// `(k−2)`-subset `R` of `chosen`.
    fn restrict(&mut self, chosen: &[u32], v: u32, cand: &mut [u64]) {
        let r = self.k - 2;
        if chosen.len() < r {
            return;
        }
        let index = self.index;
        let buf = &mut self.buf;
        for_each_combination(chosen.len(), r, |pos| {
            buf.clear();
            buf.extend(pos.iter().map(|&p| chosen[p as usize]));
            buf.push(v);
            buf.sort_unstable();
            for (c, l) in cand.iter_mut().zip(index.link(buf)) {
                *c &= l;
            }
        });
    }

    fn extend(&mut self, chosen: &mut Vec<u32>, cand: &[u64], target: usize) -> bool {
        if chosen.len() >= target {
            return true;
        }
        let need = target - chosen.len();
        let mut left: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        if left < need {
            return false;
        }
        let mut next = vec![0u64; cand.len()];
        for v in bits(cand) {
            if left < need {
                break;
            }
            left -= 1;
            let word = v as usize / 64;
            // candidates strictly above v
            next[..word].iter_mut().for_each(|w| *w = 0);
            next[word] = cand[word] & ((u64::MAX << (v % 64)) << 1);
            next[word + 1..].copy_from_slice(&cand[word + 1..]);
            self.restrict(chosen, v, &mut next);
            chosen.push(v);
            if self.extend(chosen, &next, target) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

fn check_order(g: &KUniformHypergraph, s: usize) -> Result<()> {
    if s < g.k() {
        return Err(Error::InvalidOrder { s, k: g.k() });
    }
    Ok(())
}

fn mask_within(g: &KUniformHypergraph, within: &VertexSet) -> Result<Vec<u64>> {
    if let Some(v) = within.iter().find(|&v| v as usize >= g.n()) {
        return Err(Error::VertexOutOfRange {
            vertex: v as u64,
            n: g.n(),
        });
    }
    let mut mask = vec![0u64; g.n().div_ceil(64)];
    for (m, w) in mask.iter_mut().zip(within.words()) {
        *m = *w;
    }
    Ok(mask)
}

/// Some `s`-set inducing `K_s^{(k)}`, if one exists (ascending).
pub fn find_clique(g: &KUniformHypergraph, s: usize) -> Result<Option<Vec<u32>>> {
    find_clique_within(g, s, &VertexSet::full(g.n()))
}

pub fn contains_clique(g: &KUniformHypergraph, s: usize) -> Result<bool> {
    Ok(find_clique(g, s)?.is_some())
}

/// A `K_s^{(k)}` with all vertices in `within`.
pub fn find_clique_within(
    g: &KUniformHypergraph,
    s: usize,
    within: &VertexSet,
) -> Result<Option<Vec<u32>>> {
    check_order(g, s)?;
    let cand = mask_within(g, within)?;
    if within.len() < s {
        return Ok(None);
    }
    let mut descent = Descent::new(g)?;
    let mut chosen = Vec::with_capacity(s);
    Ok(descent.extend(&mut chosen, &cand, s).then_some(chosen))
}

/// A `K_s^{(k)}` containing `v` whose other vertices lie in `within`.
pub fn find_clique_through(
    g: &KUniformHypergraph,
    s: usize,
    v: u32,
    within: &VertexSet,
) -> Result<Option<Vec<u32>>> {
    check_order(g, s)?;
    if v as usize >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v as u64,
            n: g.n(),
        });
    }
    let mut descent = Descent::new(g)?;
    let mut cand = mask_within(g, within)?;
    cand[v as usize / 64] &= !(1 << (v % 64));
    through(&mut descent, s, v, cand)
}

fn through(descent: &mut Descent<'_>, s: usize, v: u32, mut cand: Vec<u64>) -> Result<Option<Vec<u32>>> {
    // The (k−1)-subsets of {v} constrain candidates only for graphs.
    if descent.k == 2 {
        for (c, l) in cand.iter_mut().zip(descent.index.link(&[v])) {
            *c &= l;
        }
    }
    let mut chosen = vec![v];
    if descent.extend(&mut chosen, &cand, s) {
        chosen.sort_unstable();
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

/// Adds vertices in index order whenever the set stays `K_s`-free.
pub fn greedy_clique_free_subset(g: &KUniformHypergraph, s: usize) -> Result<CliqueFreeSubsetResult> {
    check_order(g, s)?;
    let mut descent = Descent::new(g)?;
    let mut chosen = VertexSet::empty(g.n());
    for v in 0..g.n() as u32 {
        let cand = chosen.words().to_vec();
        if through(&mut descent, s, v, cand)?.is_none() {
            chosen.insert(v);
        }
    }
    let size = chosen.len();
    Ok(CliqueFreeSubsetResult {
        witness: chosen,
        size,
        optimal: size == g.n(),
        nodes: 0,
    })
}

struct BranchAndBound<'a> {
    descent: Descent<'a>,
    n: usize,
    s: usize,
    budget: u64,
    nodes: u64,
    truncated: bool,
    best: VertexSet,
    best_size: usize,
}

impl BranchAndBound<'_> {
    fn search(&mut self, next: usize, chosen: &mut VertexSet, size: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.truncated = true;
            return;
        }
        if size > self.best_size {
            self.best_size = size;
            self.best = chosen.clone();
        }
        if next == self.n || size + (self.n - next) <= self.best_size {
            return;
        }
        let v = next as u32;
        let blocked = through(&mut self.descent, self.s, v, chosen.words().to_vec())
            .expect("index already built")
            .is_some();
        if !blocked {
            chosen.insert(v);
            self.search(next + 1, chosen, size + 1);
            chosen.remove(v);
            if self.truncated {
                return;
            }
        }
        if size + (self.n - next - 1) > self.best_size {
            self.search(next + 1, chosen, size);
        }
    }
}

/// Largest `W` with `G[W]` free of `K_s^{(k)}`, by include/exclude branching
/// on the lowest undecided vertex. When more than `node_budget` nodes would be
/// needed the best set found so far is returned with `optimal = false`.
pub fn max_clique_free_subset(
    g: &KUniformHypergraph,
    s: usize,
    node_budget: u64,
) -> Result<CliqueFreeSubsetResult> {
    check_order(g, s)?;
    if node_budget == 0 {
        return Err(Error::InvalidParameters("node budget must be positive".into()));
    }
    let seed = greedy_clique_free_subset(g, s)?;
    let mut bb = BranchAndBound {
        descent: Descent::new(g)?,
        n: g.n(),
        s,
        budget: node_budget,
        nodes: 0,
        truncated: false,
        best_size: seed.size,
        best: seed.witness,
    };
    let mut chosen = VertexSet::empty(g.n());
    bb.search(0, &mut chosen, 0);

    if let Some(clique) = find_clique_within(g, s, &bb.best)? {
        return Err(Error::WitnessVerificationFailed { clique });
    }
    Ok(CliqueFreeSubsetResult {
        size: bb.best_size,
        witness: bb.best,
        optimal: !bb.truncated,
        nodes: bb.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle5() -> KUniformHypergraph {
        KUniformHypergraph::new(5, 2, [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]).unwrap()
    }

    #[test]
    fn detection_examples() {
        assert!(contains_clique(&KUniformHypergraph::complete(5, 3), 4).unwrap());
        assert!(!contains_clique(&KUniformHypergraph::empty(6, 3), 3).unwrap());
        assert!(!contains_clique(&cycle5(), 3).unwrap());
        assert_eq!(find_clique(&cycle5(), 2).unwrap(), Some(vec![0, 1]));
        assert_eq!(
            contains_clique(&cycle5(), 1).unwrap_err(),
            Error::InvalidOrder { s: 1, k: 2 }
        );
        assert!(!contains_clique(&KUniformHypergraph::complete(4, 3), 5).unwrap());
    }

    #[test]
    fn detection_across_word_boundary() {
        let g = KUniformHypergraph::new(130, 3, [[62, 64, 129], [63, 64, 129], [62, 63, 64], [62, 63, 129]])
            .unwrap();
        assert_eq!(find_clique(&g, 4).unwrap(), Some(vec![62, 63, 64, 129]));
        let g = KUniformHypergraph::new(70, 2, [[63, 64], [0, 63], [0, 64]]).unwrap();
        assert_eq!(find_clique(&g, 3).unwrap(), Some(vec![0, 63, 64]));
    }

    #[test]
    fn through_respects_forced_vertex() {
        let g = KUniformHypergraph::complete(5, 3);
        let within = VertexSet::from_vertices(5, [0, 1]);
        assert_eq!(find_clique_through(&g, 3, 4, &within).unwrap(), Some(vec![0, 1, 4]));
        let within = VertexSet::from_vertices(5, [0]);
        assert_eq!(find_clique_through(&g, 3, 4, &within).unwrap(), None);
    }

    #[test]
    fn exact_examples() {
        let r = max_clique_free_subset(&KUniformHypergraph::empty(6, 2), 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!((r.size, r.optimal), (6, true));
        let r = max_clique_free_subset(&KUniformHypergraph::complete(6, 2), 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!((r.size, r.optimal), (1, true));
        let r = max_clique_free_subset(&cycle5(), 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!((r.size, r.optimal), (2, true));
        let r = max_clique_free_subset(&KUniformHypergraph::complete(5, 3), 3, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!((r.size, r.optimal), (2, true));
        assert_eq!(r.size, r.witness.len());
    }

    #[test]
    fn greedy_examples() {
        let r = greedy_clique_free_subset(&KUniformHypergraph::empty(4, 2), 2).unwrap();
        assert_eq!((r.size, r.optimal), (4, true));
        let r = greedy_clique_free_subset(&KUniformHypergraph::complete(4, 2), 2).unwrap();
        assert_eq!(r.witness.to_vec(), vec![0]);
        let r = greedy_clique_free_subset(&cycle5(), 2).unwrap();
        assert_eq!(r.witness.to_vec(), vec![0, 2]);
        assert!(!r.optimal);
    }

    #[test]
    fn budget_truncation_still_sound() {
        let g = KUniformHypergraph::random(30, 2, 0.3, 11).unwrap();
        let r = max_clique_free_subset(&g, 3, 5).unwrap();
        assert!(!r.optimal);
        assert!(find_clique_within(&g, 3, &r.witness).unwrap().is_none());
        assert_eq!(max_clique_free_subset(&g, 3, 0).unwrap_err().name(), "InvalidParameters");
    }

    #[test]
    fn order_errors() {
        let g = KUniformHypergraph::complete(5, 3);
        assert_eq!(max_clique_free_subset(&g, 2, 10).unwrap_err().name(), "InvalidOrder");
        assert_eq!(greedy_clique_free_subset(&g, 2).unwrap_err().name(), "InvalidOrder");
    }
}
