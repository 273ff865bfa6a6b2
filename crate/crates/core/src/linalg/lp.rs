//! Exact feasibility of `A x = b` with sign constraints, by the first phase
//! of the simplex method over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IntMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<BigRational>),
    Infeasible,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[BigRational]> {
        match self {
            LpOutcome::Feasible(x) => Some(x),
            LpOutcome::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    Dantzig,
    Bland,
}

/// Decides whether `A x = b` has a solution with `x_j >= 0` for every flagged
/// `j`. Free variables are split into a difference of two nonnegative ones.
///
/// Pivoting starts with the largest-coefficient rule and falls back to
/// Bland's rule at the first degenerate pivot, which guarantees termination.
pub fn lp_feasible(a: &IntMatrix, b: &[BigInt], nonneg: &[bool]) -> Result<LpOutcome, LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m || nonneg.len() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "matrix {m}x{n}, rhs {}, sign flags {}",
            b.len(),
            nonneg.len()
        )));
    }

    // structural column k -> (original variable, sign)
    let mut columns: Vec<(usize, bool)> = Vec::with_capacity(2 * n);
    for (j, &nn) in nonneg.iter().enumerate() {
        columns.push((j, true));
        if !nn {
            columns.push((j, false));
        }
    }
    let width = columns.len();
    let rhs = width;

    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row: Vec<BigRational> = columns
                .iter()
                .map(|&(j, pos)| {
                    let v = a.get(i, j);
                    let v = if pos != flip { v.clone() } else { -v };
                    BigRational::from_integer(v)
                })
                .collect();
            row.push(BigRational::from_integer(b[i].abs()));
            row
        })
        .collect();

    // phase-one objective: minimise the sum of artificials
    let mut cost: Vec<BigRational> = (0..=width)
        .map(|k| -t.iter().map(|row| &row[k]).sum::<BigRational>())
        .collect();

    // basis[i] = Some(structural column) or None for the artificial of row i
    let mut basis: Vec<Option<usize>> = vec![None; m];
    let mut rule = Rule::Dantzig;

    loop {
        let entering = match rule {
            Rule::Dantzig => {
                let mut best: Option<usize> = None;
                for k in 0..width {
                    if cost[k].is_negative() && best.is_none_or(|bk| cost[k] < cost[bk]) {
                        best = Some(k);
                    }
                }
                best
            }
            Rule::Bland => (0..width).find(|&k| cost[k].is_negative()),
        };
        let Some(e) = entering else { break };

        // ratio test, ties broken by the smallest basic variable index
        // (artificials rank after structural columns)
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !t[i][e].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs] / &t[i][e];
            let better = match &leave {
                None => true,
                Some((li, lr)) => {
                    ratio < *lr
                        || (ratio == *lr
                            && basis_key(basis[i], i, width) < basis_key(basis[*li], *li, width))
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // the phase-one objective is bounded below by zero
        let (r, ratio) = leave.expect("phase one cannot be unbounded");
        if ratio.is_zero() {
            rule = Rule::Bland;
        }

        let piv = t[r][e].clone();
        for x in t[r].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !cost[e].is_zero() {
            let f = cost[e].clone();
            for (x, p) in cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        basis[r] = Some(e);
    }

    if !cost[rhs].is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, col) in basis.iter().enumerate() {
        if let Some(k) = *col {
            let (j, pos) = columns[k];
            if pos {
                x[j] += &t[i][rhs];
            } else {
                x[j] -= &t[i][rhs];
            }
        }
    }
    Ok(LpOutcome::Feasible(x))
}

fn basis_key(col: Option<usize>, row: usize, width: usize) -> usize {
    col.unwrap_or(width + row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn satisfies(a: &IntMatrix, b: &[BigInt], nonneg: &[bool], x: &[BigRational]) -> bool {
        (0..a.rows()).all(|i| {
            let lhs: BigRational = (0..a.cols())
                .map(|j| BigRational::from_integer(a.get(i, j).clone()) * &x[j])
                .sum();
            lhs == BigRational::from_integer(b[i].clone())
        }) && x.iter().zip(nonneg).all(|(v, &nn)| !nn || !v.is_negative())
    }

    #[test]
    fn simplex_sum_to_one() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1]]);
        let b = ints(&[1]);
        let flags = [true; 3];
        let out = lp_feasible(&a, &b, &flags).unwrap();
        assert!(satisfies(&a, &b, &flags, out.point().unwrap()));
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(satisfies(&a, &b, &flags, &vec![third; 3]));
    }

    #[test]
    fn contradictory_equalities() {
        let a = IntMatrix::from_rows(&[vec![1], vec![1]]);
        let out = lp_feasible(&a, &ints(&[1, 2]), &[true]).unwrap();
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn free_variables_may_go_negative() {
        let a = IntMatrix::from_rows(&[vec![1, 1]]);
        let b = ints(&[-3]);
        assert_eq!(
            lp_feasible(&a, &b, &[true, true]).unwrap(),
            LpOutcome::Infeasible
        );
        let out = lp_feasible(&a, &b, &[true, false]).unwrap();
        assert!(satisfies(&a, &b, &[true, false], out.point().unwrap()));
    }

    #[test]
    fn redundant_rows() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![2, 2, 0], vec![0, 1, 1]]);
        let b = ints(&[1, 2, 1]);
        let out = lp_feasible(&a, &b, &[true; 3]).unwrap();
        assert!(satisfies(&a, &b, &[true; 3], out.point().unwrap()));
    }

    #[test]
    fn dimension_mismatch() {
        let a = IntMatrix::from_rows(&[vec![1, 1]]);
        assert!(matches!(
            lp_feasible(&a, &ints(&[1, 1]), &[true, true]),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }
}
