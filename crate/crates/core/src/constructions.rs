//! Concrete diagrams: the projective plane of order 2, the affine plane of
//! order 3, grid merges of two diagrams with optional diagonal edges, and
//! the two measure-free fixtures shipped in `data/`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::canonical_form;
use crate::hypergraph::{
    intersection_size, parse_diagram, parse_edge_lines, Hypergraph, HypergraphError,
};
use crate::measures::{analyze_group_measures, MeasureError};

const OML67: &str = include_str!("../data/oml67.txt");
const OMP21: &str = include_str!("../data/omp21.txt");
const GRID_DIAGONALS: &str = include_str!("../data/grid_diagonals.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("factor {0} is not a Greechie diagram")]
    FactorNotGreechie(&'static str),
    #[error("diagonal {index}: vertex {vertex} outside the grid")]
    OutOfGrid { index: usize, vertex: usize },
    #[error("diagonal {index} has fewer than two vertices")]
    DiagonalTooSmall { index: usize },
    #[error("diagonal {index} uses row {row} twice")]
    RepeatedRow { index: usize, row: usize },
    #[error("diagonal {index} uses column {column} twice")]
    RepeatedColumn { index: usize, column: usize },
    #[error("diagonal {index} meets edge {other} in {shared} vertices")]
    SharedPair {
        index: usize,
        other: usize,
        shared: usize,
    },
    #[error("result is not a Greechie diagram: {0}")]
    NotGreechie(String),
    #[error("diagonal search exhausted its budget after {candidates} candidates")]
    BudgetExhausted { candidates: u64 },
    #[error("diagonal search needs edge size >= 2 and at most min(rows, columns), got {0}")]
    BadEdgeSize(usize),
    #[error(transparent)]
    Diagram(#[from] HypergraphError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

fn plain(edges: &[[usize; 3]]) -> Hypergraph {
    Hypergraph::from_edges(edges.iter().map(|e| e.to_vec()).collect())
        .expect("static diagram is valid")
}

/// The 7-point, 7-line projective plane of order 2, in canonical labeling.
pub fn fano() -> Hypergraph {
    canonical_form(&plain(&[
        [1, 2, 3],
        [1, 4, 5],
        [1, 6, 7],
        [2, 4, 6],
        [2, 5, 7],
        [3, 4, 7],
        [3, 5, 6],
    ]))
}

/// The 9-point, 12-line affine plane of order 3, in canonical labeling.
pub fn ag23() -> Hypergraph {
    let id = |x: usize, y: usize| 3 * (x % 3) + (y % 3) + 1;
    let mut lines = Vec::new();
    // lines y = a x + b for slopes 0, 1, 2 and the verticals x = c
    for slope in 0..3 {
        for b in 0..3 {
            lines.push((0..3).map(|x| id(x, slope * x + b)).collect::<Vec<_>>());
        }
    }
    for c in 0..3 {
        lines.push((0..3).map(|y| id(c, y)).collect());
    }
    canonical_form(&Hypergraph::new(9, lines).expect("affine plane is valid"))
}

/// The 67-atom orthomodular lattice fixture (68 edges, verbatim order).
pub fn oml67() -> Hypergraph {
    parse_diagram(OML67).expect("bundled fixture parses")
}

/// The 21-atom orthomodular poset fixture (22 edges, verbatim order).
pub fn omp21() -> Hypergraph {
    parse_diagram(OMP21).expect("bundled fixture parses")
}

/// Where an edge of a grid merge comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Copy of first-factor edge `edge` (1-based) in column `column`.
    Column { column: usize, edge: usize },
    /// Copy of second-factor edge `edge` in row `row`.
    Row { row: usize, edge: usize },
}

/// The grid built from two diagrams: vertex `(a, b)` has id
/// `(a - 1)·|V_B| + b`; each column (fixed `b`) carries a copy of `A`, each
/// row (fixed `a`) a copy of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMerge {
    pub a: Hypergraph,
    pub b: Hypergraph,
    pub grid: Hypergraph,
    pub provenance: Vec<Provenance>,
}

impl GridMerge {
    pub fn rows(&self) -> usize {
        self.a.vertex_count()
    }

    pub fn columns(&self) -> usize {
        self.b.vertex_count()
    }

    pub fn id(&self, row: usize, column: usize) -> usize {
        (row - 1) * self.columns() + column
    }

    /// `(row, column)` of a grid vertex id.
    pub fn position(&self, id: usize) -> (usize, usize) {
        ((id - 1) / self.columns() + 1, (id - 1) % self.columns() + 1)
    }
}

pub fn merge(a: &Hypergraph, b: &Hypergraph) -> Result<GridMerge, ConstructionError> {
    if !a.is_greechie().0 {
        return Err(ConstructionError::FactorNotGreechie("A"));
    }
    if !b.is_greechie().0 {
        return Err(ConstructionError::FactorNotGreechie("B"));
    }
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    let id = |row: usize, col: usize| (row - 1) * nb + col;
    let mut edges = Vec::new();
    let mut provenance = Vec::new();
    for column in 1..=nb {
        for (k, e) in a.edges().iter().enumerate() {
            edges.push(e.iter().map(|&row| id(row, column)).collect());
            provenance.push(Provenance::Column {
                column,
                edge: k + 1,
            });
        }
    }
    for row in 1..=na {
        for (k, f) in b.edges().iter().enumerate() {
            edges.push(f.iter().map(|&col| id(row, col)).collect());
            provenance.push(Provenance::Row { row, edge: k + 1 });
        }
    }
    let grid = Hypergraph::new(na * nb, edges)?;
    Ok(GridMerge {
        a: a.clone(),
        b: b.clone(),
        grid,
        provenance,
    })
}

fn check_diagonal(
    merge: &GridMerge,
    index: usize,
    diag: &[usize],
) -> Result<(), ConstructionError> {
    if diag.len() < 2 {
        return Err(ConstructionError::DiagonalTooSmall { index });
    }
    let total = merge.grid.vertex_count();
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    for &v in diag {
        if v == 0 || v > total {
            return Err(ConstructionError::OutOfGrid { index, vertex: v });
        }
        let (r, c) = merge.position(v);
        if rows.contains(&r) {
            return Err(ConstructionError::RepeatedRow { index, row: r });
        }
        if cols.contains(&c) {
            return Err(ConstructionError::RepeatedColumn { index, column: c });
        }
        rows.push(r);
        cols.push(c);
    }
    Ok(())
}

/// Adds diagonal edges to a grid merge. Every diagonal must use pairwise
/// distinct rows and columns and meet every other edge in at most one
/// vertex. Diagonal indices in errors are 1-based; `other` counts grid
/// edges first, then earlier diagonals.
pub fn add_diagonal_edges(
    merge: &GridMerge,
    diagonals: &[Vec<usize>],
) -> Result<Hypergraph, ConstructionError> {
    let mut edges: Vec<Vec<usize>> = merge.grid.edges().to_vec();
    for (i, diag) in diagonals.iter().enumerate() {
        let index = i + 1;
        check_diagonal(merge, index, diag)?;
        let mut sorted = diag.clone();
        sorted.sort_unstable();
        for (k, e) in edges.iter().enumerate() {
            let shared = intersection_size(&sorted, e);
            if shared > 1 {
                return Err(ConstructionError::SharedPair {
                    index,
                    other: k + 1,
                    shared,
                });
            }
        }
        edges.push(sorted);
    }
    let h = Hypergraph::new(merge.grid.vertex_count(), edges)?;
    let (ok, violations) = h.is_greechie();
    if !ok {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(ConstructionError::NotGreechie(text.join("; ")));
    }
    Ok(h)
}

/// Limits for [`search_diagonal_edges`]. A zero limit means "none".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_candidates: u64,
    pub max_time: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_candidates: 10_000,
            max_time: Some(Duration::from_secs(600)),
        }
    }
}

/// One window: the fixed cyclic run of rows (or columns) a diagonal spans.
struct Window {
    along_rows: bool,
    start: usize,
}

struct DiagonalSearch<'a> {
    merge: &'a GridMerge,
    size: usize,
    windows: Vec<Window>,
    chosen: Vec<Vec<usize>>,
    budget: SearchBudget,
    started: Instant,
    candidates: u64,
    exhausted: bool,
}

impl DiagonalSearch<'_> {
    fn out_of_budget(&self) -> bool {
        (self.budget.max_candidates > 0 && self.candidates >= self.budget.max_candidates)
            || self
                .budget
                .max_time
                .is_some_and(|t| self.started.elapsed() >= t)
    }

    fn compatible(&self, cells: &[usize]) -> bool {
        let mut sorted = cells.to_vec();
        sorted.sort_unstable();
        self.chosen
            .iter()
            .all(|d| intersection_size(&sorted, d) <= 1)
    }

    /// Depth-first over windows; inside a window, over the free coordinate of
    /// each cell in increasing order.
    fn descend(&mut self, w: usize) -> Result<Option<Vec<Vec<usize>>>, ConstructionError> {
        if self.exhausted {
            return Ok(None);
        }
        if w == self.windows.len() {
            if self.out_of_budget() {
                self.exhausted = true;
                return Ok(None);
            }
            self.candidates += 1;
            let h = add_diagonal_edges(self.merge, &self.chosen)?;
            return Ok(analyze_group_measures(&h)?
                .measure_free()
                .then(|| self.chosen.clone()));
        }
        let mut cells = Vec::with_capacity(self.size);
        let mut used = Vec::with_capacity(self.size);
        self.fill(w, &mut cells, &mut used)
    }

    fn fill(
        &mut self,
        w: usize,
        cells: &mut Vec<usize>,
        used: &mut Vec<usize>,
    ) -> Result<Option<Vec<Vec<usize>>>, ConstructionError> {
        if cells.len() == self.size {
            let mut sorted = cells.clone();
            sorted.sort_unstable();
            self.chosen.push(sorted);
            let found = self.descend(w + 1)?;
            self.chosen.pop();
            return Ok(found);
        }
        let (rows, cols) = (self.merge.rows(), self.merge.columns());
        let along_rows = self.windows[w].along_rows;
        let start = self.windows[w].start;
        let k = cells.len();
        let (fixed_count, free_count) = if along_rows {
            (rows, cols)
        } else {
            (cols, rows)
        };
        let fixed = (start + k) % fixed_count + 1;
        for free in 1..=free_count {
            if used.contains(&free) {
                continue;
            }
            let id = if along_rows {
                self.merge.id(fixed, free)
            } else {
                self.merge.id(free, fixed)
            };
            cells.push(id);
            used.push(free);
            // prune partial diagonals that already share two cells with one
            let ok = self.compatible(cells);
            let found = if ok { self.fill(w, cells, used)? } else { None };
            cells.pop();
            used.pop();
            if found.is_some() || self.exhausted {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Searches for diagonal edges that leave the merged diagram with no
/// nontrivial group-valued measure.
///
/// One diagonal is placed over every cyclic window of `edge_size`
/// consecutive rows, and one over every such window of columns. With a
/// factor whose nonconstant measures live only modulo `p`, another factor
/// forces rows (or columns) to be constant modulo `p`; overlapping windows
/// then force `r_i = r_{i + edge_size}`, which chains all rows together
/// when `edge_size` is coprime to their number. Each complete candidate is
/// checked through the invariant factors, so the heuristic is never
/// trusted. The lexicographically first verified set is returned.
pub fn search_diagonal_edges(
    merge: &GridMerge,
    edge_size: usize,
    budget: SearchBudget,
) -> Result<Vec<Vec<usize>>, ConstructionError> {
    if edge_size < 2 || edge_size > merge.rows().min(merge.columns()) {
        return Err(ConstructionError::BadEdgeSize(edge_size));
    }
    let windows = (0..merge.rows())
        .map(|start| Window {
            along_rows: true,
            start,
        })
        .chain((0..merge.columns()).map(|start| Window {
            along_rows: false,
            start,
        }))
        .collect();
    let mut search = DiagonalSearch {
        merge,
        size: edge_size,
        windows,
        chosen: Vec::new(),
        budget,
        started: Instant::now(),
        candidates: 0,
        exhausted: false,
    };
    if budget.max_time == Some(Duration::ZERO) {
        return Err(ConstructionError::BudgetExhausted { candidates: 0 });
    }
    match search.descend(0)? {
        Some(found) => Ok(found),
        None => Err(ConstructionError::BudgetExhausted {
            candidates: search.candidates,
        }),
    }
}

/// The hand-checked diagonal set for `merge(fano(), ag23())` shipped in
/// `data/grid_diagonals.txt`.
pub fn bundled_grid_diagonals() -> Vec<Vec<usize>> {
    parse_edge_lines(GRID_DIAGONALS)
        .expect("bundled diagonals parse")
        .into_iter()
        .map(|(_, e)| e)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_counts() {
        let f = fano();
        assert_eq!((f.vertex_count(), f.edge_count()), (7, 7));
        assert!(f.is_uniform(3));
    }

    #[test]
    fn ag23_counts() {
        let g = ag23();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn fixture_counts() {
        let l = oml67();
        assert_eq!((l.vertex_count(), l.edge_count()), (67, 68));
        let p = omp21();
        assert_eq!((p.vertex_count(), p.edge_count()), (21, 22));
        assert_eq!(p.edges()[21], vec![18, 19, 20, 21]);
    }

    #[test]
    fn grid_of_two_triangles() {
        let e = Hypergraph::from_edges(vec![vec![1, 2, 3]]).unwrap();
        let m = merge(&e, &e).unwrap();
        assert_eq!(m.grid.vertex_count(), 9);
        assert_eq!(m.grid.edge_count(), 6);
        assert_eq!(m.grid.min_cycle_order(), Some(4));
    }

    #[test]
    fn grid_ids_round_trip() {
        let m = merge(&fano(), &ag23()).unwrap();
        for id in 1..=63 {
            let (r, c) = m.position(id);
            assert_eq!(m.id(r, c), id);
        }
    }

    #[test]
    fn merge_rejects_bad_factor() {
        let bad = Hypergraph::from_edges(vec![vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        assert_eq!(
            merge(&bad, &fano()),
            Err(ConstructionError::FactorNotGreechie("A"))
        );
    }

    #[test]
    fn diagonal_sharing_two_vertices_with_a_row_is_rejected() {
        let m = merge(&fano(), &ag23()).unwrap();
        // cells (1,1) and (1,2) sit in the same row, so this is refused on
        // the row check before any intersection test
        let err = add_diagonal_edges(&m, &[vec![m.id(1, 1), m.id(1, 2), m.id(2, 3)]]);
        assert!(matches!(err, Err(ConstructionError::RepeatedRow { .. })));
        // two diagonals sharing two cells
        let d = vec![m.id(1, 1), m.id(2, 2), m.id(3, 3)];
        let e = vec![m.id(1, 1), m.id(2, 2), m.id(4, 4)];
        assert!(matches!(
            add_diagonal_edges(&m, &[d, e]),
            Err(ConstructionError::SharedPair { index: 2, .. })
        ));
    }

    #[test]
    fn empty_diagonal_list_is_the_bare_merge() {
        let m = merge(&fano(), &ag23()).unwrap();
        assert_eq!(add_diagonal_edges(&m, &[]).unwrap(), m.grid);
    }

    #[test]
    fn bad_edge_size() {
        let m = merge(&fano(), &ag23()).unwrap();
        assert_eq!(
            search_diagonal_edges(&m, 8, SearchBudget::default()),
            Err(ConstructionError::BadEdgeSize(8))
        );
    }
}
