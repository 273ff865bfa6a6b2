//! Canonical labeling of hypergraphs.
//!
//! Works on the bipartite vertex/edge incidence graph with colour
//! refinement and individualization. Every leaf of the search tree is
//! explored (the diagrams handled here are tiny), and all leaves producing
//! the minimal relabeled edge list are kept: they differ by automorphisms,
//! which gives the edge orbits needed for canonical augmentation.
//!
//! Vertices with identical edge sets (in a linear hypergraph: degree-one
//! vertices of the same edge) are interchangeable, so a cell made only of
//! such twins is never individualized.

use std::collections::BTreeMap;

use crate::hypergraph::Hypergraph;

/// Result of canonical labeling.
#[derive(Debug, Clone)]
pub struct Canon {
    /// Sorted list of sorted edges over canonical vertex labels `0..n`.
    pub form: Vec<Vec<usize>>,
    /// `vertex_map[v] = canonical label` (both 0-based) for one optimal leaf.
    pub vertex_map: Vec<usize>,
    /// For every optimal leaf, `edge_positions[leaf][e]` is the index in
    /// `form` of input edge `e`.
    pub edge_positions: Vec<Vec<usize>>,
    /// Colour of each input edge after refining the unit partition. These
    /// colours are isomorphism invariant.
    pub root_edge_colors: Vec<u32>,
}

impl Canon {
    /// True when some automorphism maps input edge `a` onto input edge `b`.
    pub fn same_edge_orbit(&self, a: usize, b: usize) -> bool {
        let target = self.edge_positions[0][b];
        self.edge_positions.iter().any(|leaf| leaf[a] == target)
    }

    /// The form as a 1-based [`Hypergraph`].
    pub fn to_hypergraph(&self, n: usize) -> Hypergraph {
        let edges = self
            .form
            .iter()
            .map(|e| e.iter().map(|&v| v + 1).collect())
            .collect();
        Hypergraph::new(n, edges).expect("canonical form of a valid hypergraph")
    }
}

struct Graph<'a> {
    n: usize,
    edges: &'a [Vec<usize>],
    /// incidence lists of vertices (edge indices)
    inc: Vec<Vec<usize>>,
}

impl Graph<'_> {
    fn nodes(&self) -> usize {
        self.n + self.edges.len()
    }

    fn neighbors(&self, node: usize) -> Box<dyn Iterator<Item = usize> + '_> {
        if node < self.n {
            Box::new(self.inc[node].iter().map(move |&e| self.n + e))
        } else {
            Box::new(self.edges[node - self.n].iter().copied())
        }
    }

    /// Refines `colors` to the coarsest equitable partition finer than it.
    /// New colours are ranks of (old colour, sorted neighbour colours), so
    /// the result does not depend on node numbering.
    fn refine(&self, colors: &mut [u32]) {
        let total = self.nodes();
        let mut cells = count_cells(colors);
        loop {
            let sigs: Vec<(u32, Vec<u32>)> = (0..total)
                .map(|u| {
                    let mut s: Vec<u32> = self.neighbors(u).map(|w| colors[w]).collect();
                    s.sort_unstable();
                    (colors[u], s)
                })
                .collect();
            let mut keys: Vec<&(u32, Vec<u32>)> = sigs.iter().collect();
            keys.sort();
            keys.dedup();
            let rank: BTreeMap<&(u32, Vec<u32>), u32> = keys
                .iter()
                .enumerate()
                .map(|(i, k)| (*k, i as u32))
                .collect();
            for u in 0..total {
                colors[u] = rank[&sigs[u]];
            }
            let next = keys.len();
            if next == cells {
                break;
            }
            cells = next;
        }
    }

    fn is_twin_cell(&self, members: &[usize]) -> bool {
        members.windows(2).all(|w| self.inc[w[0]] == self.inc[w[1]])
    }
}

fn count_cells(colors: &[u32]) -> usize {
    let mut c: Vec<u32> = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Search<'a> {
    g: Graph<'a>,
    best: Option<Vec<Vec<usize>>>,
    best_vertex_map: Vec<usize>,
    best_edge_positions: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn target_cell(&self, colors: &[u32]) -> Option<Vec<usize>> {
        let mut by_color: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate().take(self.g.n) {
            by_color.entry(c).or_default().push(v);
        }
        by_color
            .into_values()
            .find(|cell| cell.len() > 1 && !self.g.is_twin_cell(cell))
    }

    fn visit(&mut self, colors: Vec<u32>) {
        match self.target_cell(&colors) {
            None => self.leaf(&colors),
            Some(cell) => {
                let c = colors[cell[0]];
                for &v in &cell {
                    let mut next: Vec<u32> = colors
                        .iter()
                        .map(|&x| if x > c { x + 1 } else { x })
                        .collect();
                    for &w in &cell {
                        if w != v {
                            next[w] = c + 1;
                        }
                    }
                    self.g.refine(&mut next);
                    self.visit(next);
                }
            }
        }
    }

    fn leaf(&mut self, colors: &[u32]) {
        let n = self.g.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (colors[v], v));
        let mut vertex_map = vec![0; n];
        for (label, &v) in order.iter().enumerate() {
            vertex_map[v] = label;
        }
        let relabeled: Vec<Vec<usize>> = self
            .g
            .edges
            .iter()
            .map(|e| {
                let mut r: Vec<usize> = e.iter().map(|&v| vertex_map[v]).collect();
                r.sort_unstable();
                r
            })
            .collect();
        let mut form = relabeled.clone();
        form.sort();
        let ord = match &self.best {
            None => std::cmp::Ordering::Less,
            Some(b) => form.cmp(b),
        };
        if ord == std::cmp::Ordering::Greater {
            return;
        }
        let positions: Vec<usize> = relabeled
            .iter()
            .map(|e| form.binary_search(e).expect("edge present in its own form"))
            .collect();
        if ord == std::cmp::Ordering::Less {
            self.best = Some(form);
            self.best_vertex_map = vertex_map;
            self.best_edge_positions.clear();
        }
        self.best_edge_positions.push(positions);
    }
}

/// Canonical labeling of a hypergraph given by 0-based edges over `0..n`.
pub fn canonicalize_edges(n: usize, edges: &[Vec<usize>]) -> Canon {
    let mut inc = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            inc[v].push(i);
        }
    }
    let g = Graph { n, edges, inc };
    let mut colors: Vec<u32> = (0..g.nodes()).map(|u| u32::from(u >= n)).collect();
    g.refine(&mut colors);
    let root_edge_colors = colors[n..].to_vec();
    let mut search = Search {
        g,
        best: None,
        best_vertex_map: Vec::new(),
        best_edge_positions: Vec::new(),
    };
    search.visit(colors);
    Canon {
        form: search.best.expect("search tree has at least one leaf"),
        vertex_map: search.best_vertex_map,
        edge_positions: search.best_edge_positions,
        root_edge_colors,
    }
}

/// Canonical labeling of a 1-based [`Hypergraph`].
pub fn canonicalize(h: &Hypergraph) -> Canon {
    let edges: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| e.iter().map(|&v| v - 1).collect())
        .collect();
    canonicalize_edges(h.vertex_count(), &edges)
}

/// The canonical representative of `h`'s isomorphism class, edges sorted.
pub fn canonical_form(h: &Hypergraph) -> Hypergraph {
    canonicalize(h).to_hypergraph(h.vertex_count())
}

/// True when the two hypergraphs are isomorphic.
pub fn isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonicalize(a).form == canonicalize(b).form
}
