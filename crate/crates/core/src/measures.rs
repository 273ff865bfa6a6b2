//! Probability measures (states) and group-valued measures on hypergraphs.
//!
//! A group-valued measure assigns each vertex an element of a commutative
//! group so that every edge sums to the same element `g`. It is a solution
//! of the homogeneous system whose unknowns are the vertex values and `g`.
//! Any nontrivial solution can be pushed into some `Z_p`, so existence is
//! decided by the invariant factors of that system: there is no measure
//! exactly when the system has full column rank and all factors equal 1.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::linalg::{
    determinant, integer_kernel_vector, is_prime, lp_feasible, nullspace_mod_p, residue,
    smallest_prime_factor, smith_normal_form, IntMatrix, LinalgError, SnfResult,
};

/// Trial-division bound used when picking a prime divisor of an invariant
/// factor.
const FACTOR_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("measure has {got} values for {expected} vertices")]
    MissingVertex { expected: usize, got: usize },
    #[error("incidence system is {rows}x{cols}; a square system needs |E| = |V| + 1")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("no prime factor below {limit} found for invariant factor {factor}")]
    UnfactoredInvariantFactor { factor: BigInt, limit: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The integer matrix of the homogeneous measure system: one row per edge,
/// one column per vertex with a 1 where the vertex lies on the edge, and a
/// final column of -1 for the common edge sum `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceSystem {
    pub matrix: IntMatrix,
}

impl IncidenceSystem {
    pub fn build(h: &Hypergraph) -> Self {
        let n = h.vertex_count();
        let mut matrix = IntMatrix::zeros(h.edge_count(), n + 1);
        for (r, e) in h.edges().iter().enumerate() {
            for &v in e {
                matrix.set(r, v - 1, BigInt::one());
            }
            matrix.set(r, n, -BigInt::one());
        }
        Self { matrix }
    }

    pub fn is_square(&self) -> bool {
        self.matrix.is_square()
    }
}

pub fn build_incidence_system(h: &Hypergraph) -> IncidenceSystem {
    IncidenceSystem::build(h)
}

/// A state: nonnegative rational values, each edge summing to 1. Values
/// are indexed by `vertex - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityMeasure {
    pub values: Vec<BigRational>,
}

impl ProbabilityMeasure {
    pub fn uniform(n: usize, value: BigRational) -> Self {
        Self {
            values: vec![value; n],
        }
    }

    /// Values rendered as `p/q` strings (or integers).
    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(|v| v.to_string()).collect()
    }
}

/// Finds some state by exact LP feasibility, or `None` if the hypergraph is
/// stateless. The result is the first feasible basic solution reached, not a
/// canonical state.
pub fn find_probability_measure(h: &Hypergraph) -> Option<ProbabilityMeasure> {
    let n = h.vertex_count();
    let mut a = IntMatrix::zeros(h.edge_count(), n);
    for (r, e) in h.edges().iter().enumerate() {
        for &v in e {
            a.set(r, v - 1, BigInt::one());
        }
    }
    let b = vec![BigInt::one(); h.edge_count()];
    let outcome = lp_feasible(&a, &b, &vec![true; n]).expect("dimensions agree by construction");
    outcome
        .point()
        .map(|x| ProbabilityMeasure { values: x.to_vec() })
}

pub fn verify_probability_measure(
    h: &Hypergraph,
    m: &ProbabilityMeasure,
) -> Result<bool, MeasureError> {
    if m.values.len() != h.vertex_count() {
        return Err(MeasureError::MissingVertex {
            expected: h.vertex_count(),
            got: m.values.len(),
        });
    }
    let one = BigRational::one();
    if m.values.iter().any(|v| v.is_negative() || *v > one) {
        return Ok(false);
    }
    Ok(h.edges()
        .iter()
        .all(|e| e.iter().map(|&v| &m.values[v - 1]).sum::<BigRational>() == one))
}

/// A `Z_p`-valued measure: vertex residues (indexed by `vertex - 1`) and the
/// common edge sum `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMeasureWitness {
    pub p: u64,
    pub values: Vec<u64>,
    pub g: u64,
}

impl GroupMeasureWitness {
    fn from_kernel(p: u64, v: &[u64]) -> Self {
        let (values, g) = v.split_at(v.len() - 1);
        Self {
            p,
            values: values.to_vec(),
            g: g[0],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.g == 0 && self.values.iter().all(|&x| x == 0)
    }
}

/// Invariant factors of the measure system together with a witness, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMeasureAnalysis {
    pub snf: SnfResult,
    pub unknowns: usize,
    pub witness: Option<GroupMeasureWitness>,
}

impl GroupMeasureAnalysis {
    /// True when only the trivial measure exists.
    pub fn measure_free(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn analyze_group_measures(h: &Hypergraph) -> Result<GroupMeasureAnalysis, MeasureError> {
    let system = IncidenceSystem::build(h);
    let snf = smith_normal_form(&system.matrix);
    let unknowns = system.matrix.cols();
    let witness = if snf.rank < unknowns {
        let v = integer_kernel_vector(&system.matrix)
            .expect("rank deficiency implies a rational kernel vector");
        // a primitive vector stays nonzero modulo every prime, so 2 works
        let p = 2;
        let residues: Vec<u64> = v.iter().map(|x| residue(x, p)).collect();
        Some(GroupMeasureWitness::from_kernel(p, &residues))
    } else if snf.is_unimodular() {
        None
    } else {
        let largest = snf.largest_factor().expect("full rank implies factors");
        let p = smallest_prime_factor(largest, FACTOR_LIMIT).ok_or_else(|| {
            MeasureError::UnfactoredInvariantFactor {
                factor: largest.clone(),
                limit: FACTOR_LIMIT,
            }
        })?;
        let basis = nullspace_mod_p(&system.matrix, p)?;
        let v = basis
            .first()
            .expect("p divides an invariant factor, so the kernel mod p is nontrivial");
        Some(GroupMeasureWitness::from_kernel(p, v))
    };
    Ok(GroupMeasureAnalysis {
        snf,
        unknowns,
        witness,
    })
}

/// A nontrivial group-valued measure into the smallest admissible `Z_p`, or
/// `None` if the hypergraph admits only the trivial measure.
pub fn find_group_valued_measure(
    h: &Hypergraph,
) -> Result<Option<GroupMeasureWitness>, MeasureError> {
    Ok(analyze_group_measures(h)?.witness)
}

pub fn verify_group_measure(h: &Hypergraph, w: &GroupMeasureWitness) -> Result<bool, MeasureError> {
    if w.values.len() != h.vertex_count() {
        return Err(MeasureError::MissingVertex {
            expected: h.vertex_count(),
            got: w.values.len(),
        });
    }
    if !is_prime(w.p) || w.g >= w.p || w.values.iter().any(|&x| x >= w.p) || w.is_trivial() {
        return Ok(false);
    }
    let p = w.p as u128;
    Ok(h.edges().iter().all(|e| {
        let s: u128 = e.iter().map(|&v| w.values[v - 1] as u128).sum();
        s % p == w.g as u128
    }))
}

/// For each prime `p`, whether some `Z_p`-valued measure is not constant on
/// the vertices.
pub fn nonconstant_range_profile(
    h: &Hypergraph,
    primes: &[u64],
) -> Result<BTreeMap<u64, bool>, MeasureError> {
    let system = IncidenceSystem::build(h);
    // constant measures (c, ..., c, g) satisfy c·|e| - g = 0 on every edge
    let sizes: Vec<Vec<i64>> = h.edges().iter().map(|e| vec![e.len() as i64, -1]).collect();
    let constants = IntMatrix::from_rows(&sizes);
    let mut out = BTreeMap::new();
    for &p in primes {
        if !is_prime(p) {
            return Err(MeasureError::NotPrime(p));
        }
        let full = nullspace_mod_p(&system.matrix, p)?.len();
        let constant = nullspace_mod_p(&constants, p)?.len();
        out.insert(p, full > constant);
    }
    Ok(out)
}

/// Determinant of the measure system when `|E| = |V| + 1`.
pub fn square_system_determinant(h: &Hypergraph) -> Result<BigInt, MeasureError> {
    let system = IncidenceSystem::build(h);
    if !system.is_square() {
        return Err(MeasureError::NotSquare {
            rows: system.matrix.rows(),
            cols: system.matrix.cols(),
        });
    }
    Ok(determinant(&system.matrix)?)
}

/// Whether a measure exists according to the determinant criterion for a
/// square system: none exactly when `|det| = 1`.
pub fn determinant_admits_measure(det: &BigInt) -> bool {
    !det.abs().is_one()
}
