mod common;

use erdos_rogers::clique::{contains_clique, find_clique, max_clique_free_subset, DEFAULT_NODE_BUDGET};
use erdos_rogers::coloring::{estimate_clique_probability, Coloring};
use erdos_rogers::exact::{f_exact, DEFAULT_ENUMERATION_BUDGET};
use erdos_rogers::packing::{exact_max_packing, greedy_packing};
use erdos_rogers::{KUniformHypergraph, VertexSet};

#[test]
fn exact_values_match_brute_force() {
    for (k, n_max) in [(2, 5), (3, 5)] {
        for n in 0..=n_max {
            for s in k..=n.max(k) {
                for t in s + 1..=n + 1 {
                    let fast = f_exact(k, s, t, n, DEFAULT_ENUMERATION_BUDGET).unwrap().value;
                    assert_eq!(fast, common::f_value(k, s, t, n), "k={k} s={s} t={t} n={n}");
                }
            }
        }
    }
}

#[test]
fn clique_search_matches_brute_force() {
    for seed in 0..300u64 {
        let (n, k) = if seed % 2 == 0 { (1 + seed as usize % 9, 2) } else { (seed as usize % 8, 3) };
        let p = [0.2, 0.5, 0.8, 0.95][seed as usize % 4];
        let g = KUniformHypergraph::random(n, k, p, seed).unwrap();
        let edges = common::edge_set(&g);
        for s in k..=k + 2 {
            let expected = common::has_clique_within(&edges, k, s, &common::range(n));
            assert_eq!(contains_clique(&g, s).unwrap(), expected, "seed {seed} s {s}");
            if let Some(c) = find_clique(&g, s).unwrap() {
                assert!(common::is_clique(&edges, k, &c));
            }
        }
    }
}

#[test]
fn exact_packings_match_backtracking() {
    for w in 0..=7 {
        for (s, k) in [(3, 3), (3, 2), (4, 3), (4, 4), (2, 2)] {
            let exact = exact_max_packing(&VertexSet::full(w), s, k, 10_000_000).unwrap();
            assert!(exact.is_valid() && exact.determinants_disjoint() && exact.optimal);
            assert_eq!(exact.size(), common::max_packing(w, s, k), "w={w} s={s} k={k}");
            assert!(greedy_packing(&VertexSet::full(w), s, k).unwrap().size() <= exact.size());
        }
    }
}

#[test]
fn clique_probability_matches_enumeration() {
    for s in 3..=5 {
        let est = estimate_clique_probability(3, s, 1000, 1).unwrap();
        let exact = est.exact.expect("small enough to enumerate");
        let (good, total) = common::clique_colorings_k3(s);
        assert_eq!((exact.numerator, exact.denominator), (good, total), "s={s}");
    }
    let (good, total) = common::clique_colorings_k3(3);
    assert_eq!(good * 2, total);
}

#[test]
fn random_edge_count_concentrates() {
    let (n, k, p) = (12usize, 3usize, 0.5);
    let slots = common::combos(&common::range(n), k).len() as f64;
    let runs = 1000;
    let mean = (0..runs)
        .map(|seed| KUniformHypergraph::random(n, k, p, seed).unwrap().edge_count() as f64)
        .sum::<f64>()
        / runs as f64;
    let sd_of_mean = (slots * p * (1.0 - p) / runs as f64).sqrt();
    assert!((mean - p * slots).abs() <= 5.0 * sd_of_mean, "mean {mean}");
}

#[test]
fn sampled_colors_are_uniform() {
    let samples = 10_000;
    let ones = (0..samples)
        .filter(|&seed| Coloring::sample(30, 3, 3, seed).unwrap().color(&[0, 1]) == 1)
        .count();
    let freq = ones as f64 / samples as f64;
    assert!((freq - 0.5).abs() <= 0.02, "frequency {freq}");
}

#[test]
fn sampled_colors_stay_in_range() {
    for (k, s) in [(3, 3), (3, 5), (4, 4), (4, 7)] {
        let chi = Coloring::sample(9, k, s, 3).unwrap();
        let c = (s - k + 2) as u8;
        assert_eq!(chi.color_count(), c);
        for subset in common::combos(&common::range(9), k - 1) {
            assert!((1..=c).contains(&chi.color(&subset)));
        }
    }
}

#[test]
fn built_edges_follow_the_rule() {
    for (k, s) in [(3, 4), (4, 5)] {
        let chi = Coloring::sample(10, k, s, 11).unwrap();
        let g = chi.build_hypergraph();
        let edges = common::edge_set(&g);
        for e in common::combos(&common::range(10), k) {
            let without_last: Vec<u32> = e[..k - 1].to_vec();
            let without_second_last: Vec<u32> = e.iter().enumerate().filter(|&(i, _)| i != k - 2).map(|(_, &v)| v).collect();
            let rule = chi.color(&without_last) != chi.color(&without_second_last);
            assert_eq!(edges.contains(&e), rule, "{e:?}");
        }
    }
}

#[test]
fn clique_free_search_matches_brute_force_on_structured_graphs() {
    let c5 = KUniformHypergraph::new(5, 2, [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]).unwrap();
    let graphs = [
        c5,
        KUniformHypergraph::complete(6, 2),
        KUniformHypergraph::complete(6, 3),
        KUniformHypergraph::empty(7, 3),
        Coloring::sample(7, 3, 3, 0).unwrap().build_hypergraph(),
    ];
    for g in &graphs {
        let edges = common::edge_set(g);
        for s in g.k()..=g.k() + 2 {
            let r = max_clique_free_subset(g, s, DEFAULT_NODE_BUDGET).unwrap();
            assert!(r.optimal);
            assert_eq!(r.size, common::max_clique_free(&edges, g.n(), g.k(), s));
        }
    }
}
