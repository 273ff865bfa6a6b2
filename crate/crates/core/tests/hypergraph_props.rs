use std::collections::BTreeSet;

use greechie::canon::{canonical_form, isomorphic};
use greechie::random::{random_greechie, random_permutation};
use greechie::{parse_diagram, serialize_diagram, DiagramKind, Hypergraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Hypergraph from arbitrary edges: drops duplicates, compresses vertex ids.
fn compress(raw: Vec<BTreeSet<usize>>) -> Option<Hypergraph> {
    let mut edges: Vec<Vec<usize>> = raw
        .into_iter()
        .filter(|e| !e.is_empty())
        .map(|e| e.into_iter().collect())
        .collect();
    edges.sort();
    edges.dedup();
    let used: BTreeSet<usize> = edges.iter().flatten().copied().collect();
    if used.is_empty() {
        return None;
    }
    let ids: Vec<usize> = used.into_iter().collect();
    let edges = edges
        .into_iter()
        .map(|e| {
            e.iter()
                .map(|v| ids.binary_search(v).unwrap() + 1)
                .collect()
        })
        .collect();
    Hypergraph::new(ids.len(), edges).ok()
}

fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
    prop::collection::vec(prop::collection::btree_set(1usize..=8, 1..=4), 1..=7)
        .prop_filter_map("needs a valid hypergraph", compress)
}

fn arb_greechie() -> impl Strategy<Value = Hypergraph> {
    (any::<u64>(), 4usize..=12).prop_filter_map("generator gave up", |(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = n / 2 + (seed as usize % (n / 2 + 1));
        random_greechie(&mut rng, n, m.max(2), &[3, 4], 50)
    })
}

/// Shortest cycle of distinct edges e_1..e_k and distinct vertices v_1..v_k
/// with v_i in e_i and e_{i+1}, by exhaustive search.
fn brute_force_cycle_order(h: &Hypergraph) -> Option<usize> {
    let edges = h.edges();
    let m = edges.len();
    let mut best: Option<usize> = None;

    fn extend(
        edges: &[Vec<usize>],
        path_edges: &mut Vec<usize>,
        path_vertices: &mut Vec<usize>,
        best: &mut Option<usize>,
    ) {
        let k = path_edges.len();
        if best.is_some_and(|b| k >= b) {
            return;
        }
        let first = path_edges[0];
        let last = *path_edges.last().unwrap();
        for &v in &edges[last] {
            if path_vertices.contains(&v) {
                continue;
            }
            if k >= 2 && edges[first].contains(&v) {
                *best = Some(best.map_or(k, |b| b.min(k)));
            }
            for (f, e) in edges.iter().enumerate() {
                if f > first && !path_edges.contains(&f) && e.contains(&v) {
                    path_edges.push(f);
                    path_vertices.push(v);
                    extend(edges, path_edges, path_vertices, best);
                    path_vertices.pop();
                    path_edges.pop();
                }
            }
        }
    }

    for start in 0..m {
        extend(edges, &mut vec![start], &mut Vec::new(), &mut best);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_round_trip(h in arb_hypergraph()) {
        let text = serialize_diagram(&h);
        let back = parse_diagram(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(serialize_diagram(&back), text);
    }

    #[test]
    fn cycle_order_matches_brute_force(h in arb_hypergraph()) {
        prop_assert_eq!(h.min_cycle_order(), brute_force_cycle_order(&h));
    }

    #[test]
    fn short_cycle_iff_intersection_violation(h in arb_hypergraph()) {
        let two_shared = h.edges().iter().enumerate().any(|(i, e)| {
            h.edges()[i + 1..]
                .iter()
                .any(|f| e.iter().filter(|v| f.contains(v)).count() >= 2)
        });
        prop_assert_eq!(h.min_cycle_order() == Some(2), two_shared);
    }

    #[test]
    fn degree_sum_is_total_edge_size(h in arb_hypergraph()) {
        let total: usize = h.edges().iter().map(Vec::len).sum();
        prop_assert_eq!(h.degrees().iter().sum::<usize>(), total);
    }

    #[test]
    fn classification_is_label_invariant(h in arb_hypergraph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = random_permutation(&mut rng, h.vertex_count());
        let g = h.relabel(&perm);
        let (a, b) = (h.classify(), g.classify());
        prop_assert_eq!(a.kind, b.kind);
        prop_assert_eq!(a.min_cycle_order, b.min_cycle_order);
        prop_assert_eq!(a.violations.len(), b.violations.len());
        prop_assert!(isomorphic(&h, &g));
        prop_assert_eq!(canonical_form(&h), canonical_form(&g));
    }

    #[test]
    fn greechie_adjacency_is_twice_degree_for_triples(h in arb_greechie()) {
        if h.is_uniform(3) {
            for v in h.vertices() {
                prop_assert_eq!(h.adjacency(v).unwrap().len(), 2 * h.degree(v).unwrap());
            }
        }
        prop_assert!(h.classify().kind != DiagramKind::NotGreechie);
    }
}

#[test]
fn malformed_inputs_report_lines() {
    let err = parse_diagram("1 2 3\n3 x 5\n").unwrap_err();
    assert!(err.to_string().contains('2'), "{err}");
    assert!(parse_diagram("1 2 3\n0 4 5\n").is_err());
    assert!(parse_diagram("1 2 2\n").is_err());
    assert!(parse_diagram("1 2 3\n3 2 1\n").is_err());
    assert!(parse_diagram("# nothing here\n").is_err());
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let h = parse_diagram("# header\n\n1 2 3\n  3 4 5  \n").unwrap();
    assert_eq!((h.vertex_count(), h.edge_count()), (5, 2));
}
