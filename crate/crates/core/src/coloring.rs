//! Random colorings of (k−1)-subsets and the k-graphs they define.
//!
//! A k-set `u_1 < … < u_k` is an edge of `G(χ)` iff
//! `χ(e ∖ u_k) ≠ χ(e ∖ u_{k−1})`. With `s − k + 2` colors no `K_{s+1}^{(k)}`
//! can appear: the `s − k + 3` sets `{v_1, …, v_{k−2}, v_i}` would all need
//! distinct colors.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clique::find_clique;
use crate::combinatorics::{binomial, for_each_combination, BinomialTable};
use crate::error::{Error, Result};
use crate::hypergraph::KUniformHypergraph;
use crate::rng::{self, Domain};

/// Colors drawn per RNG stream when sampling.
const SAMPLE_CHUNK: usize = 4096;
/// Largest packed coloring that will be allocated.
pub const COLORING_BYTE_LIMIT: u64 = 1 << 31;
/// Exact clique probabilities are enumerated up to this many assignments.
pub const EXACT_ENUMERATION_LIMIT: u64 = 10_000_000;

/// Total map from (k−1)-subsets of `[0, n)` to colors `1..=color_count`,
/// packed densely by colex rank.
#[derive(Clone, PartialEq, Eq)]
pub struct Coloring {
    n: usize,
    k: usize,
    color_count: u8,
    bits: u32,
    entries: u64,
    data: Vec<u64>,
    ranks: BinomialTable,
}

impl std::fmt::Debug for Coloring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Coloring")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("color_count", &self.color_count)
            .finish_non_exhaustive()
    }
}

fn check_construction(n: usize, k: usize, s: usize) -> Result<u8> {
    if k < 3 {
        return Err(Error::InvalidParameters(format!("uniformity {k} < 3")));
    }
    if s < k {
        return Err(Error::InvalidParameters(format!("s = {s} < k = {k}")));
    }
    if n + 1 < k {
        return Err(Error::InvalidParameters(format!("n = {n} < k - 1 = {}", k - 1)));
    }
    u8::try_from(s - k + 2)
        .map_err(|_| Error::InvalidParameters(format!("{} colors exceed 255", s - k + 2)))
}

impl Coloring {
    /// Every (k−1)-subset gets color `color`.
    pub fn constant(n: usize, k: usize, color_count: u8, color: u8) -> Result<Self> {
        if k < 2 || color_count == 0 || !(1..=color_count).contains(&color) {
            return Err(Error::InvalidParameters(format!(
                "color {color} of {color_count} for k = {k}"
            )));
        }
        let bits = match color_count {
            0..=2 => 1,
            3..=4 => 2,
            5..=16 => 4,
            _ => 8,
        };
        let entries = binomial(n as u64, k as u64 - 1)
            .filter(|&e| e.saturating_mul(bits as u64) / 8 <= COLORING_BYTE_LIMIT)
            .ok_or_else(|| {
                Error::InfeasibleSize(format!("coloring of C({n}, {}) subsets", k - 1))
            })?;
        let per_word = 64 / bits as u64;
        let words = entries.div_ceil(per_word) as usize;
        let fill = if color == 1 {
            0
        } else {
            let mut w = 0u64;
            for slot in 0..per_word {
                w |= ((color - 1) as u64) << (slot * bits as u64);
            }
            w
        };
        Ok(Coloring {
            n,
            k,
            color_count,
            bits,
            entries,
            data: vec![fill; words],
            ranks: BinomialTable::new(n, k - 1),
        })
    }

    /// Coloring given by `f` on each sorted (k−1)-subset.
    pub fn from_fn(n: usize, k: usize, color_count: u8, mut f: impl FnMut(&[u32]) -> u8) -> Result<Self> {
        let mut chi = Self::constant(n, k, color_count, 1)?;
        let mut bad = None;
        for_each_combination(n, k - 1, |t| {
            let c = f(t);
            if (1..=color_count).contains(&c) {
                chi.set_color(t, c);
            } else {
                bad.get_or_insert(c);
            }
        });
        match bad {
            Some(c) => Err(Error::InvalidParameters(format!("color {c} out of range"))),
            None => Ok(chi),
        }
    }

    /// Uniform independent colors from `1..=s−k+2`, reproducible per seed.
    /// Colors are drawn in colex-rank order, so the coloring of `[0, n')` is
    /// a prefix of the coloring of `[0, n)` for the same seed.
    pub fn sample(n: usize, k: usize, s: usize, seed: u64) -> Result<Self> {
        let c = check_construction(n, k, s)?;
        let mut chi = Self::constant(n, k, c, 1)?;
        let bits = chi.bits as usize;
        let entries = chi.entries as usize;
        let words_per_chunk = SAMPLE_CHUNK * bits / 64;
        chi.data
            .par_chunks_mut(words_per_chunk)
            .enumerate()
            .for_each(|(chunk, words)| {
                let mut rng = rng::stream(seed, Domain::Coloring, chunk as u64);
                let first = chunk * SAMPLE_CHUNK;
                let count = SAMPLE_CHUNK.min(entries - first);
                for j in 0..count {
                    let color = rng.random_range(0..c) as u64;
                    let slot = j * bits;
                    words[slot / 64] |= color << (slot % 64);
                }
            });
        Ok(chi)
    }

    /// Forces the ascending `clique` (length `s`) to induce `K_s^{(k)}`: a
    /// (k−1)-subset of it whose largest member sits at 1-based position `j`
    /// gets color `j − k + 2`. All other subsets get color 1.
    pub fn canonical_clique(clique: &[u32], k: usize, s: usize, n: usize) -> Result<Self> {
        let c = check_construction(n, k, s)?;
        if clique.len() != s {
            return Err(Error::InvalidParameters(format!(
                "clique has {} vertices, expected {s}",
                clique.len()
            )));
        }
        if !clique.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameters("clique vertices must be strictly increasing".into()));
        }
        if let Some(&v) = clique.iter().find(|&&v| v as usize >= n) {
            return Err(Error::VertexOutOfRange { vertex: v as u64, n });
        }
        let mut chi = Self::constant(n, k, c, 1)?;
        let mut subset = Vec::with_capacity(k - 1);
        for_each_combination(s, k - 1, |positions| {
            subset.clear();
            subset.extend(positions.iter().map(|&p| clique[p as usize]));
            let top = positions[k - 2] as usize + 1;
            chi.set_color(&subset, (top + 2 - k) as u8);
        });
        Ok(chi)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color_count(&self) -> u8 {
        self.color_count
    }

    #[inline]
    fn slot(&self, subset: &[u32]) -> (usize, u32) {
        debug_assert_eq!(subset.len(), self.k - 1);
        let bit = self.ranks.colex_rank(subset) * self.bits as u64;
        ((bit / 64) as usize, (bit % 64) as u32)
    }

    /// Color of an ascending (k−1)-subset.
    #[inline]
    pub fn color(&self, subset: &[u32]) -> u8 {
        let (word, shift) = self.slot(subset);
        let mask = (1u64 << self.bits) - 1;
        ((self.data[word] >> shift) & mask) as u8 + 1
    }

    pub fn set_color(&mut self, subset: &[u32], color: u8) {
        assert!((1..=self.color_count).contains(&color), "color {color} out of range");
        let (word, shift) = self.slot(subset);
        let mask = (1u64 << self.bits) - 1;
        self.data[word] = (self.data[word] & !(mask << shift)) | (((color - 1) as u64) << shift);
    }

    /// The edge rule on an ascending k-set.
    #[inline]
    pub fn is_edge(&self, e: &[u32]) -> bool {
        let k = self.k;
        debug_assert_eq!(e.len(), k);
        let mut alt = [0u32; 16];
        let alt = if k <= 16 {
            &mut alt[..k - 1]
        } else {
            return self.is_edge_slow(e);
        };
        alt[..k - 2].copy_from_slice(&e[..k - 2]);
        alt[k - 2] = e[k - 1];
        self.color(&e[..k - 1]) != self.color(alt)
    }

    fn is_edge_slow(&self, e: &[u32]) -> bool {
        let k = self.k;
        let mut alt = e[..k - 2].to_vec();
        alt.push(e[k - 1]);
        self.color(&e[..k - 1]) != self.color(&alt)
    }

    /// `G(χ)` on `[0, n)`.
    pub fn build_hypergraph(&self) -> KUniformHypergraph {
        KUniformHypergraph::from_predicate(self.n, self.k, |e| self.is_edge(e))
    }

    /// `G(χ)[vertices]` relabeled onto `0..len`, without materializing `G(χ)`.
    /// `vertices` must be ascending.
    pub fn induced_hypergraph(&self, vertices: &[u32]) -> KUniformHypergraph {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let mut original = vec![0u32; self.k];
        KUniformHypergraph::from_predicate(vertices.len(), self.k, |e| {
            for (o, &i) in original.iter_mut().zip(e) {
                *o = vertices[i as usize];
            }
            self.is_edge(&original)
        })
    }

    /// One line `v_1 … v_{k−1} color` per subset, lexicographic order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for_each_combination(self.n, self.k - 1, |t| {
            for v in t {
                let _ = write!(out, "{v} ");
            }
            let _ = writeln!(out, "{}", self.color(t));
        });
        out
    }
}

/// `build_hypergraph(sample(n, k, s, seed))`.
pub fn construct(n: usize, k: usize, s: usize, seed: u64) -> Result<KUniformHypergraph> {
    Ok(Coloring::sample(n, k, s, seed)?.build_hypergraph())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactProbability {
    pub numerator: u64,
    pub denominator: u64,
    pub value: f64,
}

/// Monte Carlo estimate of the probability that a fixed `s`-set induces
/// `K_s^{(k)}` under a uniform coloring, with the exact value attached when
/// enumeration is cheap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueProbabilityEstimate {
    pub k: usize,
    pub s: usize,
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub exact: Option<ExactProbability>,
}

impl CliqueProbabilityEstimate {
    /// Binomial standard deviation of the estimate around the exact value.
    pub fn standard_error(&self) -> Option<f64> {
        self.exact
            .as_ref()
            .map(|e| (e.value * (1.0 - e.value) / self.trials as f64).sqrt())
    }
}

/// Colors of the (k−1)-subsets of `[0, s)` by colex rank; true when all of
/// `[0, s)` is a clique of `G(χ)`.
struct LocalClique {
    /// `(rank of e ∖ u_k, rank of e ∖ u_{k−1})` for every k-subset `e`.
    pairs: Vec<(usize, usize)>,
}

impl LocalClique {
    fn new(k: usize, s: usize) -> Self {
        let ranks = BinomialTable::new(s, k - 1);
        let mut pairs = Vec::new();
        let mut alt = vec![0u32; k - 1];
        for_each_combination(s, k, |e| {
            alt[..k - 2].copy_from_slice(&e[..k - 2]);
            alt[k - 2] = e[k - 1];
            pairs.push((
                ranks.colex_rank(&e[..k - 1]) as usize,
                ranks.colex_rank(&alt) as usize,
            ));
        });
        LocalClique { pairs }
    }

    fn is_clique(&self, colors: &[u8]) -> bool {
        self.pairs.iter().all(|&(a, b)| colors[a] != colors[b])
    }
}

pub fn estimate_clique_probability(
    k: usize,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<CliqueProbabilityEstimate> {
    let c = check_construction(s, k, s)?;
    if trials == 0 {
        return Err(Error::InvalidTrialCount);
    }
    let local = LocalClique::new(k, s);
    let slots = binomial(s as u64, k as u64 - 1).unwrap_or(u64::MAX) as usize;
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0u8; slots],
            |colors, trial| {
                let mut rng = rng::stream(seed, Domain::CliqueProbability, trial);
                for slot in colors.iter_mut() {
                    *slot = rng.random_range(0..c);
                }
                local.is_clique(colors) as u64
            },
        )
        .sum();
    let exact = exact_clique_probability(&local, c, slots);
    Ok(CliqueProbabilityEstimate {
        k,
        s,
        trials,
        successes,
        estimate: successes as f64 / trials as f64,
        exact,
    })
}

fn exact_clique_probability(local: &LocalClique, c: u8, slots: usize) -> Option<ExactProbability> {
    let total = (c as u64).checked_pow(u32::try_from(slots).ok()?)?;
    if total > EXACT_ENUMERATION_LIMIT {
        return None;
    }
    const BLOCK: u64 = 1 << 14;
    let numerator: u64 = (0..total.div_ceil(BLOCK))
        .into_par_iter()
        .map(|block| {
            let start = block * BLOCK;
            let end = (start + BLOCK).min(total);
            let mut colors = vec![0u8; slots];
            let mut rest = start;
            for slot in colors.iter_mut() {
                *slot = (rest % c as u64) as u8;
                rest /= c as u64;
            }
            let mut hits = 0;
            for _ in start..end {
                hits += local.is_clique(&colors) as u64;
                for slot in colors.iter_mut() {
                    *slot += 1;
                    if *slot < c {
                        break;
                    }
                    *slot = 0;
                }
            }
            hits
        })
        .sum();
    Some(ExactProbability {
        numerator,
        denominator: total,
        value: numerator as f64 / total as f64,
    })
}

/// How many sampled `w`-subsets contained `K_s^{(k)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdLevel {
    pub w: usize,
    pub tested: usize,
    pub containing: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub samples: usize,
    /// Smallest `w` at which every sampled `w`-subset contained `K_s^{(k)}`.
    pub w_star: usize,
    pub levels: Vec<ThresholdLevel>,
    /// First sampled `(w*−1)`-subset with no `K_s^{(k)}`, when `w* > s`.
    pub failing_subset: Option<Vec<u32>>,
}

/// Samples `G(χ)` once, then scans `w = s, s+1, …` testing `samples` random
/// `w`-subsets each until all of them contain `K_s^{(k)}`. This is an
/// empirical one-sided estimate, never a proof of coverage.
pub fn covering_threshold_experiment(
    n: usize,
    k: usize,
    s: usize,
    samples: usize,
    seed: u64,
) -> Result<ThresholdResult> {
    if n < s {
        return Err(Error::InvalidParameters(format!("n = {n} < s = {s}")));
    }
    if samples == 0 {
        return Err(Error::InvalidParameters("subset sample count must be positive".into()));
    }
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameters(format!("n = {n} too large")));
    }
    let chi = Coloring::sample(n, k, s, seed)?;
    let mut levels = Vec::new();
    let mut last_failure: Option<Vec<u32>> = None;
    for w in s..=n {
        let outcomes: Vec<(Vec<u32>, bool)> = (0..samples)
            .into_par_iter()
            .map(|j| {
                let mut rng = rng::stream(seed, Domain::SubsetSampling, ((w as u64) << 32) | j as u64);
                let mut subset: Vec<u32> = rand::seq::index::sample(&mut rng, n, w)
                    .into_iter()
                    .map(|v| v as u32)
                    .collect();
                subset.sort_unstable();
                let local = chi.induced_hypergraph(&subset);
                let hit = find_clique(&local, s).map(|c| c.is_some());
                (subset, hit.expect("order checked by the coloring constructor"))
            })
            .collect();
        let containing = outcomes.iter().filter(|(_, hit)| *hit).count();
        levels.push(ThresholdLevel {
            w,
            tested: samples,
            containing,
        });
        if containing == samples {
            return Ok(ThresholdResult {
                n,
                k,
                s,
                samples,
                w_star: w,
                levels,
                failing_subset: last_failure,
            });
        }
        last_failure = outcomes.into_iter().find(|(_, hit)| !hit).map(|(subset, _)| subset);
    }
    Err(Error::NotFound(format!(
        "no w <= {n} had all {samples} sampled subsets containing K_{s}"
    )))
}
