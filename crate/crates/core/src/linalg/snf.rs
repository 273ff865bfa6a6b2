//! Smith normal form over the integers.
//!
//! Only the invariant factors are tracked; the unimodular transforms are
//! never needed by the callers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub rank: usize,
    /// `d_1 | d_2 | ... | d_rank`, all positive.
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    /// True when every invariant factor equals 1.
    pub fn is_unimodular(&self) -> bool {
        self.invariant_factors.iter().all(One::is_one)
    }

    /// Number of invariant factors not divisible by `p`, i.e. the rank of
    /// the matrix reduced modulo `p`.
    pub fn rank_mod(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.invariant_factors
            .iter()
            .filter(|d| !(*d % &p).is_zero())
            .count()
    }

    pub fn largest_factor(&self) -> Option<&BigInt> {
        self.invariant_factors.last()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

impl Work {
    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn swap_cols(&mut self, c1: usize, c2: usize) {
        if c1 != c2 {
            for row in &mut self.a {
                row.swap(c1, c2);
            }
        }
    }

    /// Clears row `t` and column `t` outside the pivot. Returns false when a
    /// nonzero remainder was left, in which case a smaller entry has been
    /// moved into the pivot position.
    fn clear_cross(&mut self, t: usize) -> bool {
        let pivot = self.a[t][t].clone();
        let mut clean = true;
        for i in t + 1..self.rows {
            if self.a[i][t].is_zero() {
                continue;
            }
            let q = &self.a[i][t] / &pivot;
            if !q.is_zero() {
                let (top, bottom) = self.a.split_at_mut(i);
                let src = &top[t];
                for (dst, s) in bottom[0][t..].iter_mut().zip(&src[t..]) {
                    if !s.is_zero() {
                        *dst -= &q * s;
                    }
                }
            }
            if !self.a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.cols {
            if self.a[t][j].is_zero() {
                continue;
            }
            let q = &self.a[t][j] / &pivot;
            if !q.is_zero() {
                for row in &mut self.a[t..] {
                    if !row[t].is_zero() {
                        let delta = &q * &row[t];
                        row[j] -= delta;
                    }
                }
            }
            if !self.a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            // bring the smallest remainder on the cross into the pivot
            let mut best = (t, t);
            for i in t + 1..self.rows {
                let x = &self.a[i][t];
                if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..self.cols {
                let x = &self.a[t][j];
                if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            self.a.swap(t, best.0);
            self.swap_cols(t, best.1);
        }
        clean
    }

    /// Finds an entry of the trailing block not divisible by the pivot and
    /// adds its row to the pivot row.
    fn fix_divisibility(&mut self, t: usize) -> bool {
        let pivot = self.a[t][t].clone();
        if pivot.abs().is_one() {
            return true;
        }
        for i in t + 1..self.rows {
            if self.a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&pivot)) {
                let (top, bottom) = self.a.split_at_mut(i);
                for (dst, s) in top[t][t..].iter_mut().zip(&bottom[0][t..]) {
                    *dst += s;
                }
                return false;
            }
        }
        true
    }
}

/// Invariant factors under unimodular row and column operations, using
/// smallest-magnitude pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut w = Work {
        a: m.to_rows(),
        rows: m.rows(),
        cols: m.cols(),
    };
    let limit = w.rows.min(w.cols);
    let mut factors = Vec::new();
    for t in 0..limit {
        let Some((pi, pj)) = w.smallest_nonzero(t) else {
            break;
        };
        w.a.swap(t, pi);
        w.swap_cols(t, pj);
        loop {
            if !w.clear_cross(t) {
                continue;
            }
            if w.fix_divisibility(t) {
                break;
            }
        }
        factors.push(w.a[t][t].abs());
    }
    SnfResult {
        rank: factors.len(),
        invariant_factors: factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m)
            .invariant_factors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn identity_has_unit_factors() {
        let s = smith_normal_form(&IntMatrix::identity(4));
        assert_eq!(s.rank, 4);
        assert!(s.is_unimodular());
    }

    #[test]
    fn diag_2_3() {
        assert_eq!(factors(&IntMatrix::diagonal(&[2, 3])), vec![1, 6]);
    }

    #[test]
    fn classic_examples() {
        assert_eq!(factors(&IntMatrix::diagonal(&[4, 6])), vec![2, 12]);
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(factors(&m), vec![2, 6, 12]);
        assert_eq!(factors(&IntMatrix::zeros(3, 2)), Vec::<i64>::new());
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![4, 8], vec![1, 3]]);
        assert_eq!(factors(&m), vec![1, 2]);
    }

    #[test]
    fn rank_mod_counts_coprime_factors() {
        let s = smith_normal_form(&IntMatrix::diagonal(&[2, 3, 0]));
        assert_eq!(s.rank, 2);
        assert_eq!(s.rank_mod(2), 1);
        assert_eq!(s.rank_mod(3), 1);
        assert_eq!(s.rank_mod(5), 2);
    }
}
