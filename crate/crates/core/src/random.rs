//! Seeded random Greechie diagrams for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hypergraph::{intersection_size, Hypergraph};

/// Attempts to draw a Greechie diagram on exactly `n` vertices with `m`
/// edges whose sizes are drawn from `sizes`. Each new edge includes an
/// uncovered vertex while one remains. Returns `None` after `attempts`
/// failed tries.
pub fn random_greechie<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    sizes: &[usize],
    attempts: usize,
) -> Option<Hypergraph> {
    assert!(!sizes.is_empty());
    let vertices: Vec<usize> = (1..=n).collect();
    'attempt: for _ in 0..attempts {
        let mut edges: Vec<Vec<usize>> = Vec::with_capacity(m);
        let mut covered = vec![false; n + 1];
        while edges.len() < m {
            let mut placed = false;
            for _ in 0..200 {
                let k = *sizes.choose(rng).expect("nonempty sizes");
                if k > n {
                    continue;
                }
                let uncovered: Vec<usize> = (1..=n).filter(|&v| !covered[v]).collect();
                let mut edge: Vec<usize> = Vec::with_capacity(k);
                if let Some(&seed) = uncovered.choose(rng) {
                    edge.push(seed);
                }
                let rest: Vec<usize> = vertices
                    .choose_multiple(rng, n)
                    .copied()
                    .filter(|v| !edge.contains(v))
                    .take(k - edge.len())
                    .collect();
                edge.extend(rest);
                edge.sort_unstable();
                let ok = edges.iter().all(|f| intersection_size(&edge, f) <= 1);
                if ok {
                    for &v in &edge {
                        covered[v] = true;
                    }
                    edges.push(edge);
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'attempt;
            }
        }
        if (1..=n).all(|v| covered[v]) {
            if let Ok(h) = Hypergraph::new(n, edges) {
                if h.is_greechie().0 {
                    return Some(h);
                }
            }
        }
    }
    None
}

/// A random permutation of `1..=n`, as used by [`Hypergraph::relabel`].
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}
