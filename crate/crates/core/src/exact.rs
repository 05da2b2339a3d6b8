//! Exhaustive evaluation of `f_{s,t}^{(k)}(n)` over all labelled k-graphs on
//! `n` vertices, the Ramsey numbers it determines, and checking of upper-bound
//! witnesses.
//!
//! A k-graph on `n ≤ 9` vertices is a bitmask over the `C(n, k) ≤ 36` k-subsets
//! in lexicographic order. Masks are scanned in increasing order; when a mask
//! contains a `K_t`, every mask agreeing with it from the clique's lowest edge
//! bit upwards contains it too, so that whole block is skipped.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clique::{find_clique, find_clique_within};
use crate::combinatorics::{binomial, for_each_combination};
use crate::error::{Error, Result};
use crate::hypergraph::KUniformHypergraph;
use crate::vertex_set::VertexSet;

pub const MAX_EXACT_EDGES: usize = 36;
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 30;
/// Masks per parallel work unit.
const BLOCK_BITS: u32 = 18;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValueRecord {
    pub k: usize,
    pub s: usize,
    pub t: usize,
    pub n: usize,
    /// `f_{s,t}^{(k)}(n)`.
    pub value: usize,
    /// A `K_t`-free k-graph attaining `value`: the one with the smallest edge
    /// mask.
    pub minimizer: KUniformHypergraph,
    /// Number of `K_t`-free k-graphs evaluated.
    pub graphs_scanned: u64,
}

struct SmallUniverse {
    n: usize,
    k: usize,
    edges: Vec<Vec<u32>>,
    /// Edge mask and lowest edge bit of every t-subset.
    t_sets: Vec<(u64, u32)>,
    /// Edge mask and vertex mask of every s-subset.
    s_sets: Vec<(u64, u16)>,
}

fn subset_masks(n: usize, size: usize, k: usize, edge_bit: &dyn Fn(&[u32]) -> u32) -> Vec<(u64, u16)> {
    let mut out = Vec::new();
    for_each_combination(n, size, |set| {
        let mut edge_mask = 0u64;
        for_each_combination(size, k, |pos| {
            let e: Vec<u32> = pos.iter().map(|&p| set[p as usize]).collect();
            edge_mask |= 1 << edge_bit(&e);
        });
        let vertex_mask = set.iter().fold(0u16, |m, &v| m | 1 << v);
        out.push((edge_mask, vertex_mask));
    });
    out
}

impl SmallUniverse {
    fn new(n: usize, k: usize, s: usize, t: usize) -> Self {
        let mut edges = Vec::new();
        for_each_combination(n, k, |e| edges.push(e.to_vec()));
        let lookup = |e: &[u32]| edges.iter().position(|x| x == e).unwrap() as u32;
        let t_sets = subset_masks(n, t, k, &lookup)
            .into_iter()
            .map(|(edge_mask, _)| (edge_mask, edge_mask.trailing_zeros()))
            .collect();
        let s_sets = subset_masks(n, s, k, &lookup);
        SmallUniverse {
            n,
            k,
            edges,
            t_sets,
            s_sets,
        }
    }

    /// Lowest edge bit of a contained `K_t`, choosing the clique that lets the
    /// scan skip furthest.
    fn clique_skip_bit(&self, mask: u64) -> Option<u32> {
        self.t_sets
            .iter()
            .filter(|&&(cm, _)| mask & cm == cm)
            .map(|&(_, low)| low)
            .max()
    }

    /// Largest `K_s`-free vertex set size, capped at `cap`: the search stops as
    /// soon as a free set of size `cap` is found.
    fn inner_max(&self, mask: u64, cap: usize, present: &mut Vec<u16>) -> usize {
        present.clear();
        present.extend(
            self.s_sets
                .iter()
                .filter(|&&(cm, _)| mask & cm == cm)
                .map(|&(_, vm)| vm),
        );
        let mut best = 0;
        free_search(present, 0, 0, self.n, cap, &mut best);
        best
    }

    fn hypergraph(&self, mask: u64) -> KUniformHypergraph {
        let flat: Vec<u32> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, e)| e.iter().copied())
            .collect();
        KUniformHypergraph::from_lex_sorted(self.n, self.k, flat)
    }
}

fn free_search(present: &[u16], chosen: u16, next: usize, n: usize, cap: usize, best: &mut usize) {
    let size = chosen.count_ones() as usize;
    *best = (*best).max(size);
    if *best >= cap || next == n || size + (n - next) <= *best {
        return;
    }
    let with = chosen | 1 << next;
    if !present.iter().any(|&p| p >> next & 1 == 1 && with & p == p) {
        free_search(present, with, next + 1, n, cap, best);
    }
    free_search(present, chosen, next + 1, n, cap, best);
}

#[derive(Debug, Clone, Copy)]
struct Partial {
    value: usize,
    mask: u64,
    scanned: u64,
}

impl Partial {
    fn merge(self, other: Partial) -> Partial {
        let (value, mask) = (self.value, self.mask).min((other.value, other.mask));
        Partial {
            value,
            mask,
            scanned: self.scanned + other.scanned,
        }
    }
}

/// `f_{s,t}^{(k)}(n)` by exhaustive enumeration of all `2^{C(n,k)}` labelled
/// k-graphs. `s = t` is accepted.
pub fn f_exact(k: usize, s: usize, t: usize, n: usize, budget: u64) -> Result<ExactValueRecord> {
    if k < 2 || s < k || t < s {
        return Err(Error::InvalidParameters(format!(
            "need 2 <= k <= s <= t, got k = {k}, s = {s}, t = {t}"
        )));
    }
    let edge_count = binomial(n as u64, k as u64).unwrap_or(u64::MAX);
    if edge_count > MAX_EXACT_EDGES as u64 {
        return Err(Error::InfeasibleSize(format!(
            "C({n}, {k}) = {edge_count} k-subsets; at most {MAX_EXACT_EDGES} can be enumerated"
        )));
    }
    let total: u64 = 1 << edge_count;
    if total > budget {
        return Err(Error::BudgetExceeded {
            budget,
            what: format!("2^{edge_count} k-graphs on {n} vertices"),
        });
    }
    let universe = SmallUniverse::new(n, k, s, t);
    let blocks = (total >> BLOCK_BITS).max(1);
    let block_len = total / blocks;

    let best = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let start = block * block_len;
            let end = start + block_len;
            let mut local = Partial {
                value: usize::MAX,
                mask: u64::MAX,
                scanned: 0,
            };
            let mut present = Vec::new();
            let mut mask = start;
            while mask < end {
                if let Some(low) = universe.clique_skip_bit(mask) {
                    mask = (mask | ((1u64 << low) - 1)) + 1;
                    continue;
                }
                local.scanned += 1;
                let value = universe.inner_max(mask, local.value, &mut present);
                if value < local.value {
                    local.value = value;
                    local.mask = mask;
                }
                mask += 1;
            }
            local
        })
        .reduce_with(Partial::merge)
        .expect("at least one block");

    if best.scanned == 0 {
        // unreachable: the empty k-graph is K_t-free for t >= k
        return Err(Error::NotFound("no K_t-free k-graph".into()));
    }
    Ok(ExactValueRecord {
        k,
        s,
        t,
        n,
        value: best.value,
        minimizer: universe.hypergraph(best.mask),
        graphs_scanned: best.scanned,
    })
}

#[derive(Serialize)]
struct ExactCsvRow {
    k: usize,
    s: usize,
    t: usize,
    n: usize,
    f: usize,
    graphs_scanned: u64,
}

/// Columns `k,s,t,n,f,graphs_scanned`.
pub fn write_csv<W: std::io::Write>(records: &[ExactValueRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(ExactCsvRow {
            k: r.k,
            s: r.s,
            t: r.t,
            n: r.n,
            f: r.value,
            graphs_scanned: r.graphs_scanned,
        })?;
    }
    w.flush()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyRow {
    pub n: usize,
    pub f: usize,
    pub graphs_scanned: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyResult {
    pub k: usize,
    pub t: usize,
    pub u: usize,
    /// Smallest `n` with `f_{k,t}^{(k)}(n) ≥ u`.
    pub r: usize,
    /// `f_{k,t}^{(k)}(n)` for `n = 0..=r`.
    pub rows: Vec<RamseyRow>,
}

/// `r^{(k)}(t, u) = min { n : f_{k,t}^{(k)}(n) ≥ u }`, searching `n ≤ n_max`.
pub fn ramsey_number(k: usize, t: usize, u: usize, n_max: usize, budget: u64) -> Result<RamseyResult> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let record = f_exact(k, k, t, n, budget)?;
        rows.push(RamseyRow {
            n,
            f: record.value,
            graphs_scanned: record.graphs_scanned,
        });
        if record.value >= u {
            return Ok(RamseyResult { k, t, u, r: n, rows });
        }
    }
    Err(Error::NotFoundWithinRange { n_max })
}

impl RamseyResult {
    /// Columns `k,s,t,n,f,graphs_scanned`, one row per evaluated `n`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(ExactCsvRow {
                k: self.k,
                s: self.k,
                t: self.t,
                n: row.n,
                f: row.f,
                graphs_scanned: row.graphs_scanned,
            })?;
        }
        w.flush()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum UpperWitnessVerdict {
    /// `K_t`-free, and every `u`-subset contains a `K_s` (vacuous when `u > n`).
    Holds,
    ContainsForbiddenClique { clique: Vec<u32> },
    CliqueFreeSubset { subset: Vec<u32> },
}

impl UpperWitnessVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, UpperWitnessVerdict::Holds)
    }
}

/// Checks that `g` certifies `f_{s,t}^{(k)}(n) < u`.
pub fn verify_upper_witness(
    g: &KUniformHypergraph,
    s: usize,
    t: usize,
    u: usize,
    budget: u64,
) -> Result<UpperWitnessVerdict> {
    if s < g.k() || t < g.k() {
        return Err(Error::InvalidOrder { s: s.min(t), k: g.k() });
    }
    if let Some(clique) = find_clique(g, t)? {
        return Ok(UpperWitnessVerdict::ContainsForbiddenClique { clique });
    }
    if u > g.n() {
        return Ok(UpperWitnessVerdict::Holds);
    }
    let count = binomial(g.n() as u64, u as u64).unwrap_or(u64::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded {
            budget,
            what: format!("{count} subsets of size {u}"),
        });
    }
    let mut failure = None;
    let mut error = None;
    for_each_combination(g.n(), u, |subset| {
        if failure.is_some() || error.is_some() {
            return;
        }
        let within = VertexSet::from_vertices(g.n(), subset.iter().copied());
        match find_clique_within(g, s, &within) {
            Ok(None) => failure = Some(subset.to_vec()),
            Ok(Some(_)) => {}
            Err(e) => error = Some(e),
        }
    });
    if let Some(e) = error {
        return Err(e);
    }
    Ok(match failure {
        Some(subset) => UpperWitnessVerdict::CliqueFreeSubset { subset },
        None => UpperWitnessVerdict::Holds,
    })
}
