//! Partial Steiner packings: families of `s`-subsets of a vertex set `W` in
//! which no (k−1)-subset lies in two members.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, for_each_combination, BinomialTable};
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingCollection {
    pub ground: VertexSet,
    pub s: usize,
    pub k: usize,
    /// Ascending `s`-subsets of `ground`, in the order they were chosen.
    pub members: Vec<Vec<u32>>,
    /// Set when an exhaustive search proved the size maximum.
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PackingViolation {
    NotAnSSubset { member: usize },
    OutsideGround { member: usize, vertex: u32 },
    Overlap { first: usize, second: usize, shared: Vec<u32> },
}

impl PackingCollection {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Checks that members are `s`-subsets of the ground set meeting pairwise
    /// in at most `k − 2` vertices.
    pub fn verify(&self) -> std::result::Result<(), PackingViolation> {
        for (i, m) in self.members.iter().enumerate() {
            if m.len() != self.s || !m.windows(2).all(|w| w[0] < w[1]) {
                return Err(PackingViolation::NotAnSSubset { member: i });
            }
            if let Some(&v) = m.iter().find(|&&v| !self.ground.contains(v)) {
                return Err(PackingViolation::OutsideGround { member: i, vertex: v });
            }
        }
        for (i, a) in self.members.iter().enumerate() {
            for (j, b) in self.members.iter().enumerate().skip(i + 1) {
                let shared: Vec<u32> = a.iter().filter(|v| b.contains(v)).copied().collect();
                if shared.len() + 2 > self.k {
                    return Err(PackingViolation::Overlap {
                        first: i,
                        second: j,
                        shared,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_ok()
    }

    /// True when no (k−1)-subset lies inside two distinct members, i.e. the
    /// clique events of distinct members read disjoint sets of colors.
    pub fn determinants_disjoint(&self) -> bool {
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        for m in &self.members {
            let mut fresh = true;
            for_each_combination(m.len(), self.k - 1, |pos| {
                let subset: Vec<u32> = pos.iter().map(|&p| m[p as usize]).collect();
                fresh &= seen.insert(subset);
            });
            if !fresh {
                return false;
            }
        }
        true
    }

    /// Some `s`-subset of the ground set that could still be added, if any.
    /// Exhaustive over `C(|W|, s)` subsets.
    pub fn addable_subset(&self) -> Option<Vec<u32>> {
        let verts = self.ground.to_vec();
        let mut found = None;
        for_each_combination(verts.len(), self.s, |pos| {
            if found.is_some() {
                return;
            }
            let cand: Vec<u32> = pos.iter().map(|&p| verts[p as usize]).collect();
            let clashes = self.members.iter().any(|m| {
                m.iter().filter(|v| cand.contains(v)).count() + 2 > self.k
            });
            if !clashes {
                found = Some(cand);
            }
        });
        found
    }

    /// `c / (C(|W|, k−1) / C(s, k−1))`, which tends to 1 for near-optimal
    /// packings of large ground sets. Descriptive only.
    pub fn density_ratio(&self) -> f64 {
        let w = self.ground.len() as u64;
        let cover = binomial(w, self.k as u64 - 1).unwrap_or(u64::MAX) as f64;
        let per = binomial(self.s as u64, self.k as u64 - 1).unwrap_or(u64::MAX) as f64;
        if cover == 0.0 {
            return 0.0;
        }
        self.size() as f64 * per / cover
    }
}

/// The (k−1)-subset ranks covered by each candidate `s`-subset of positions
/// `0..w`, candidates in lexicographic order.
struct Candidates {
    positions: Vec<Vec<u32>>,
    covers: Vec<Vec<usize>>,
    universe: usize,
}

impl Candidates {
    fn new(w: usize, s: usize, k: usize) -> Self {
        let ranks = BinomialTable::new(w, k - 1);
        let mut positions = Vec::new();
        let mut covers = Vec::new();
        for_each_combination(w, s, |pos| {
            let mut cover = Vec::new();
            for_each_combination(s, k - 1, |inner| {
                let subset: Vec<u32> = inner.iter().map(|&i| pos[i as usize]).collect();
                cover.push(ranks.colex_rank(&subset) as usize);
            });
            positions.push(pos.to_vec());
            covers.push(cover);
        });
        let universe = binomial(w as u64, k as u64 - 1).unwrap_or(0) as usize;
        Candidates {
            positions,
            covers,
            universe,
        }
    }

    fn fits(&self, i: usize, covered: &[bool]) -> bool {
        self.covers[i].iter().all(|&r| !covered[r])
    }
}

fn check_packing_params(s: usize, k: usize) -> Result<()> {
    if k < 2 || s < k {
        return Err(Error::InvalidParameters(format!(
            "packing needs s >= k >= 2, got s = {s}, k = {k}"
        )));
    }
    Ok(())
}

fn collection(ground: &VertexSet, s: usize, k: usize, cands: &Candidates, chosen: &[usize], optimal: bool) -> PackingCollection {
    let verts = ground.to_vec();
    PackingCollection {
        ground: ground.clone(),
        s,
        k,
        members: chosen
            .iter()
            .map(|&i| cands.positions[i].iter().map(|&p| verts[p as usize]).collect())
            .collect(),
        optimal,
    }
}

fn greedy_indices(cands: &Candidates) -> Vec<usize> {
    let mut covered = vec![false; cands.universe];
    let mut chosen = Vec::new();
    for i in 0..cands.positions.len() {
        if cands.fits(i, &covered) {
            for &r in &cands.covers[i] {
                covered[r] = true;
            }
            chosen.push(i);
        }
    }
    chosen
}

/// Scans the `s`-subsets of `ground` lexicographically, keeping each one whose
/// (k−1)-subsets are all still uncovered. The result is maximal.
pub fn greedy_packing(ground: &VertexSet, s: usize, k: usize) -> Result<PackingCollection> {
    check_packing_params(s, k)?;
    let cands = Candidates::new(ground.len(), s, k);
    let chosen = greedy_indices(&cands);
    let optimal = chosen.len() == cands.positions.len();
    Ok(collection(ground, s, k, &cands, &chosen, optimal))
}

struct ExactSearch<'a> {
    cands: &'a Candidates,
    per_member: usize,
    budget: u64,
    nodes: u64,
    best: Vec<usize>,
}

impl ExactSearch<'_> {
    fn search(&mut self, start: usize, chosen: &mut Vec<usize>, covered: &mut [bool], uncovered: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                what: "exact packing search nodes".into(),
            });
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        for i in start..self.cands.positions.len() {
            let by_cover = uncovered / self.per_member;
            if chosen.len() + by_cover <= self.best.len() {
                return Ok(());
            }
            let open = (i..self.cands.positions.len())
                .filter(|&j| self.cands.fits(j, covered))
                .count();
            if chosen.len() + open <= self.best.len() {
                return Ok(());
            }
            if !self.cands.fits(i, covered) {
                continue;
            }
            for &r in &self.cands.covers[i] {
                covered[r] = true;
            }
            chosen.push(i);
            self.search(i + 1, chosen, covered, uncovered - self.per_member)?;
            chosen.pop();
            for &r in &self.cands.covers[i] {
                covered[r] = false;
            }
        }
        Ok(())
    }
}

/// Maximum packing by exhaustive backtracking, seeded with the greedy one.
/// Fails with `BudgetExceeded` rather than returning a non-optimal answer.
pub fn exact_max_packing(ground: &VertexSet, s: usize, k: usize, node_budget: u64) -> Result<PackingCollection> {
    check_packing_params(s, k)?;
    let count = binomial(ground.len() as u64, s as u64).unwrap_or(u64::MAX);
    if count > node_budget {
        return Err(Error::BudgetExceeded {
            budget: node_budget,
            what: format!("{count} candidate {s}-subsets"),
        });
    }
    let cands = Candidates::new(ground.len(), s, k);
    let per_member = binomial(s as u64, k as u64 - 1).unwrap_or(1) as usize;
    let mut search = ExactSearch {
        cands: &cands,
        per_member,
        budget: node_budget,
        nodes: 0,
        best: greedy_indices(&cands),
    };
    let mut covered = vec![false; cands.universe];
    search.search(0, &mut Vec::new(), &mut covered, cands.universe)?;
    let best = std::mem::take(&mut search.best);
    Ok(collection(ground, s, k, &cands, &best, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground(w: usize) -> VertexSet {
        VertexSet::full(w)
    }

    #[test]
    fn greedy_examples() {
        let p = greedy_packing(&ground(3), 3, 3).unwrap();
        assert_eq!(p.members, vec![vec![0, 1, 2]]);
        assert!(greedy_packing(&ground(2), 3, 3).unwrap().members.is_empty());
        let fano = greedy_packing(&ground(7), 3, 3).unwrap();
        assert_eq!(
            fano.members,
            vec![
                vec![0, 1, 2],
                vec![0, 3, 4],
                vec![0, 5, 6],
                vec![1, 3, 5],
                vec![1, 4, 6],
                vec![2, 3, 6],
                vec![2, 4, 5]
            ]
        );
        assert!(fano.is_valid() && fano.determinants_disjoint());
        assert!((fano.density_ratio() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn greedy_on_sparse_ground_uses_labels() {
        let w = VertexSet::from_vertices(20, [3, 5, 8, 13]);
        let p = greedy_packing(&w, 3, 3).unwrap();
        assert_eq!(p.members, vec![vec![3, 5, 8]]);
        let p = greedy_packing(&w, 2, 2).unwrap();
        assert_eq!(p.members, vec![vec![3, 5], vec![8, 13]]);
    }

    #[test]
    fn verify_examples() {
        let mk = |members: Vec<Vec<u32>>| PackingCollection {
            ground: ground(5),
            s: 3,
            k: 3,
            members,
            optimal: false,
        };
        assert!(mk(vec![vec![0, 1, 2], vec![0, 3, 4]]).is_valid());
        assert_eq!(
            mk(vec![vec![0, 1, 2], vec![0, 1, 3]]).verify(),
            Err(PackingViolation::Overlap {
                first: 0,
                second: 1,
                shared: vec![0, 1]
            })
        );
        assert!(mk(vec![]).is_valid());
        assert!(!mk(vec![vec![0, 1, 7]]).is_valid());
        assert!(!mk(vec![vec![0, 1]]).is_valid());
        assert!(!mk(vec![vec![0, 1, 2], vec![0, 1, 2]]).determinants_disjoint());
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_max_packing(&ground(7), 3, 3, 1_000_000).unwrap().size(), 7);
        assert_eq!(exact_max_packing(&ground(6), 3, 3, 1_000_000).unwrap().size(), 4);
        assert_eq!(exact_max_packing(&ground(4), 4, 3, 10).unwrap().size(), 1);
        assert_eq!(
            exact_max_packing(&ground(12), 3, 3, 10).unwrap_err().name(),
            "BudgetExceeded"
        );
        assert_eq!(greedy_packing(&ground(5), 2, 3).unwrap_err().name(), "InvalidParameters");
    }

    #[test]
    fn greedy_is_maximal() {
        for w in 0..=12 {
            for (s, k) in [(3, 3), (4, 3), (4, 4), (3, 2), (5, 4)] {
                let p = greedy_packing(&ground(w), s, k).unwrap();
                assert!(p.is_valid());
                assert_eq!(p.addable_subset(), None, "w={w} s={s} k={k}");
            }
        }
    }
}
