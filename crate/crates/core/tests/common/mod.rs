//! Brute-force reference implementations. They share no code with the library
//! beyond reading edges out of a `KUniformHypergraph`.

#![allow(dead_code)]

use std::collections::HashSet;

use erdos_rogers::KUniformHypergraph;

pub fn combos(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combos(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn range(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

pub fn mask_vertices(mask: u64, n: usize) -> Vec<u32> {
    (0..n as u32).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn edge_set(g: &KUniformHypergraph) -> HashSet<Vec<u32>> {
    g.edges().map(|e| e.to_vec()).collect()
}

pub fn is_clique(edges: &HashSet<Vec<u32>>, k: usize, verts: &[u32]) -> bool {
    combos(verts, k).iter().all(|e| edges.contains(e))
}

pub fn has_clique_within(edges: &HashSet<Vec<u32>>, k: usize, s: usize, verts: &[u32]) -> bool {
    combos(verts, s).iter().any(|c| is_clique(edges, k, c))
}

/// Largest subset of `[0, n)` with no `K_s`, scanning all `2^n` subsets.
pub fn max_clique_free(edges: &HashSet<Vec<u32>>, n: usize, k: usize, s: usize) -> usize {
    (0..1u64 << n)
        .filter(|&m| !has_clique_within(edges, k, s, &mask_vertices(m, n)))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// `f_{s,t}^{(k)}(n)` straight from the definition.
pub fn f_value(k: usize, s: usize, t: usize, n: usize) -> usize {
    let all = combos(&range(n), k);
    let mut best = usize::MAX;
    for mask in 0..1u64 << all.len() {
        let edges: HashSet<Vec<u32>> = all
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone())
            .collect();
        if has_clique_within(&edges, k, t, &range(n)) {
            continue;
        }
        best = best.min(max_clique_free(&edges, n, k, s));
    }
    best
}

/// Maximum packing size by unpruned backtracking over all `s`-subsets of
/// `[0, w)`.
pub fn max_packing(w: usize, s: usize, k: usize) -> usize {
    fn go(cands: &[Vec<u32>], from: usize, chosen: &mut Vec<Vec<u32>>, k: usize) -> usize {
        let mut best = chosen.len();
        for i in from..cands.len() {
            let ok = chosen
                .iter()
                .all(|m| m.iter().filter(|v| cands[i].contains(v)).count() + 2 <= k);
            if ok {
                chosen.push(cands[i].clone());
                best = best.max(go(cands, i + 1, chosen, k));
                chosen.pop();
            }
        }
        best
    }
    go(&combos(&range(w), s), 0, &mut Vec::new(), k)
}

/// Counts the colorings of the pairs of `{0, …, s−1}` with `s − 1` colors
/// under which every triple `a < b < c` has `χ(a,b) ≠ χ(a,c)`.
pub fn clique_colorings_k3(s: usize) -> (u64, u64) {
    let pairs = combos(&range(s), 2);
    let colors = (s - 1) as u64;
    let total = colors.pow(pairs.len() as u32);
    let index = |a: u32, b: u32| pairs.iter().position(|p| p == &[a, b]).unwrap();
    let triples = combos(&range(s), 3);
    let mut good = 0;
    for code in 0..total {
        let chi: Vec<u64> = (0..pairs.len())
            .map(|i| code / colors.pow(i as u32) % colors)
            .collect();
        if triples
            .iter()
            .all(|t| chi[index(t[0], t[1])] != chi[index(t[0], t[2])])
        {
            good += 1;
        }
    }
    (good, total)
}
