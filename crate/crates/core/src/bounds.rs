//! Upper bounds on the number of edges of a Greechie diagram with `n`
//! vertices, evaluated in exact integer arithmetic.
//!
//! * OA: `m <= n(n-1)/6`
//! * OMP: `m <= n(n+3)/18`
//! * OML: `m <= (2n·sqrt(n - 3/4) + n)/12`, checked as `12m <= n` or
//!   `(12m - n)² <= 4n³ - 3n²`.
//!
//! The OMP and OML bounds are stated for 3-graphs; diagrams with other edge
//! sizes get the OA bound only, and the report says so.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{DiagramKind, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("bounds need n >= 3, got {0}")]
    TooFewVertices(u64),
    #[error("diagram is not a Greechie diagram")]
    NotGreechie,
    #[error("degree audit needs a 3-uniform diagram")]
    NotUniform,
    #[error("degree audit needs minimum cycle order >= 4, got {0}")]
    ShortCycle(usize),
}

fn check_n(n: u64) -> Result<(), BoundsError> {
    if n < 3 {
        Err(BoundsError::TooFewVertices(n))
    } else {
        Ok(())
    }
}

/// `floor(n(n-1)/6)`.
pub fn max_edges_oa(n: u64) -> Result<u64, BoundsError> {
    check_n(n)?;
    Ok(((n as u128 * (n as u128 - 1)) / 6) as u64)
}

/// `floor(n(n+3)/18)`.
pub fn max_edges_omp(n: u64) -> Result<u64, BoundsError> {
    check_n(n)?;
    Ok(((n as u128 * (n as u128 + 3)) / 18) as u64)
}

/// Whether `m` edges on `n` vertices are allowed by the OML bound.
pub fn oml_bound_satisfied(n: u64, m: u64) -> bool {
    let (n, m) = (n as i128, m as i128);
    let lhs = 12 * m - n;
    lhs <= 0 || lhs * lhs <= 4 * n * n * n - 3 * n * n
}

/// Largest `m` allowed by the OML bound (the bound is downward closed in `m`).
pub fn max_edges_oml(n: u64) -> Result<u64, BoundsError> {
    check_n(n)?;
    // the real bound is below n²/6 + n
    let (mut lo, mut hi) = (0u64, n * n / 6 + n + 1);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if oml_bound_satisfied(n, mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "value")]
pub enum BoundValue {
    Edges(u64),
    /// The OML bound is irrational; reports carry the predicate outcome.
    Predicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Applies,
    /// The bound is only proven for 3-uniform diagrams.
    ThreeUniformOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub class: DiagramKind,
    pub n: u64,
    pub m: u64,
    pub bound_value: BoundValue,
    /// Meaningful only when the bound applies.
    pub satisfied: bool,
    pub applicability: Applicability,
    pub applicability_note: String,
}

impl BoundReport {
    fn evaluate(class: DiagramKind, n: u64, m: u64) -> Result<Self, BoundsError> {
        let (bound_value, satisfied) = match class {
            DiagramKind::Oa => {
                let b = max_edges_oa(n)?;
                (BoundValue::Edges(b), m <= b)
            }
            DiagramKind::Omp => {
                let b = max_edges_omp(n)?;
                (BoundValue::Edges(b), m <= b)
            }
            DiagramKind::Oml => {
                check_n(n)?;
                (BoundValue::Predicate, oml_bound_satisfied(n, m))
            }
            DiagramKind::NotGreechie => return Err(BoundsError::NotGreechie),
        };
        Ok(Self {
            class,
            n,
            m,
            bound_value,
            satisfied,
            applicability: Applicability::Applies,
            applicability_note: String::new(),
        })
    }

    fn not_applicable(class: DiagramKind, n: u64, m: u64) -> Result<Self, BoundsError> {
        let mut r = Self::evaluate(class, n, m)?;
        r.applicability = Applicability::ThreeUniformOnly;
        r.applicability_note =
            "3-uniform only: diagram has an edge of size other than 3, bound not checked".into();
        Ok(r)
    }

    pub fn applies(&self) -> bool {
        self.applicability == Applicability::Applies
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = match self.bound_value {
            BoundValue::Edges(b) => format!("m <= {b}"),
            BoundValue::Predicate => "(12m - n)^2 <= 4n^3 - 3n^2".to_string(),
        };
        if self.applies() {
            write!(
                f,
                "{} bound {bound}: n={} m={} {}",
                self.class,
                self.n,
                self.m,
                if self.satisfied {
                    "satisfied"
                } else {
                    "VIOLATED"
                }
            )
        } else {
            write!(
                f,
                "{} bound {bound}: not applicable ({})",
                self.class, self.applicability_note
            )
        }
    }
}

/// Bound reports for a diagram: always the OA bound, plus the OMP and/or
/// OML bound when the classification calls for it.
pub fn check_bounds(h: &Hypergraph) -> Result<Vec<BoundReport>, BoundsError> {
    let kind = h.classify().kind;
    if kind == DiagramKind::NotGreechie {
        return Err(BoundsError::NotGreechie);
    }
    let n = h.vertex_count() as u64;
    let m = h.edge_count() as u64;
    if n < 3 {
        return Err(BoundsError::TooFewVertices(n));
    }
    let uniform = h.is_uniform(3);
    let mut out = vec![BoundReport::evaluate(DiagramKind::Oa, n, m)?];
    let mut extra = Vec::new();
    if kind >= DiagramKind::Omp {
        extra.push(DiagramKind::Omp);
    }
    if kind == DiagramKind::Oml {
        extra.push(DiagramKind::Oml);
    }
    for class in extra {
        out.push(if uniform {
            BoundReport::evaluate(class, n, m)?
        } else {
            BoundReport::not_applicable(class, n, m)?
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDegreeRecord {
    pub edge: Vec<usize>,
    pub degree_sum: u64,
    /// `2 · degree_sum <= n + 3`.
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeAudit {
    pub n: u64,
    pub m: u64,
    pub edges: Vec<EdgeDegreeRecord>,
    pub sum_squared_degrees: u64,
    /// `Σ d(v)² <= m(n+3)/2`, compared as `2 Σ d(v)² <= m(n+3)`.
    pub square_sum_passes: bool,
}

impl DegreeAudit {
    pub fn all_pass(&self) -> bool {
        self.square_sum_passes && self.edges.iter().all(|e| e.passes)
    }

    /// `m(n+3)/2` as a (numerator, 2) pair.
    pub fn square_sum_bound_doubled(&self) -> u64 {
        self.m * (self.n + 3)
    }
}

/// Per-edge degree sums for a 3-uniform diagram without cycles of order
/// below 4. On such diagrams `|adj(v)| = 2 d(v)` and the neighbourhoods of
/// an edge's three vertices overlap only on the edge itself, which forces
/// `2 (d(v1) + d(v2) + d(v3)) <= n + 3`.
pub fn degree_inequality_audit(h: &Hypergraph) -> Result<DegreeAudit, BoundsError> {
    if !h.is_uniform(3) {
        return Err(BoundsError::NotUniform);
    }
    if let Some(k) = h.min_cycle_order() {
        if k < 4 {
            return Err(BoundsError::ShortCycle(k));
        }
    }
    let n = h.vertex_count() as u64;
    let m = h.edge_count() as u64;
    let deg = h.degrees();
    let edges: Vec<EdgeDegreeRecord> = h
        .edges()
        .iter()
        .map(|e| {
            let degree_sum: u64 = e.iter().map(|&v| deg[v - 1] as u64).sum();
            EdgeDegreeRecord {
                edge: e.clone(),
                degree_sum,
                passes: 2 * degree_sum <= n + 3,
            }
        })
        .collect();
    let sum_squared_degrees: u64 = deg.iter().map(|&d| (d * d) as u64).sum();
    Ok(DegreeAudit {
        n,
        m,
        edges,
        sum_squared_degrees,
        square_sum_passes: 2 * sum_squared_degrees <= m * (n + 3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oa_values() {
        assert_eq!(max_edges_oa(7).unwrap(), 7);
        assert_eq!(max_edges_oa(9).unwrap(), 12);
        assert_eq!(max_edges_oa(10).unwrap(), 15);
        assert_eq!(max_edges_oa(2), Err(BoundsError::TooFewVertices(2)));
    }

    #[test]
    fn omp_values() {
        assert_eq!(max_edges_omp(3).unwrap(), 1);
        assert_eq!(max_edges_omp(9).unwrap(), 6);
        assert_eq!(max_edges_omp(21).unwrap(), 28);
    }

    #[test]
    fn oml_predicate_values() {
        // 341² = 116281 = 4·31³ - 3·31²
        assert_eq!(341i64 * 341, 4 * 31i64.pow(3) - 3 * 31 * 31);
        assert!(oml_bound_satisfied(31, 31));
        assert!(!oml_bound_satisfied(31, 32));
        assert!(oml_bound_satisfied(35, 37));
        assert!(!oml_bound_satisfied(35, 38));
        assert!(oml_bound_satisfied(67, 68));
        assert_eq!(max_edges_oml(35).unwrap(), 37);
        assert_eq!(max_edges_oml(31).unwrap(), 31);
    }

    #[test]
    fn single_edge_audit() {
        let h = Hypergraph::from_edges(vec![vec![1, 2, 3]]).unwrap();
        let a = degree_inequality_audit(&h).unwrap();
        assert_eq!(a.edges[0].degree_sum, 3);
        assert!(a.all_pass());
    }

    #[test]
    fn audit_preconditions() {
        let h = Hypergraph::from_edges(vec![vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(degree_inequality_audit(&h), Err(BoundsError::NotUniform));
        let tri =
            Hypergraph::from_edges(vec![vec![1, 2, 3], vec![3, 4, 5], vec![5, 6, 1]]).unwrap();
        assert_eq!(
            degree_inequality_audit(&tri),
            Err(BoundsError::ShortCycle(3))
        );
    }

    #[test]
    fn check_bounds_rejects_non_greechie() {
        let h = Hypergraph::from_edges(vec![vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        assert_eq!(check_bounds(&h), Err(BoundsError::NotGreechie));
    }
}
