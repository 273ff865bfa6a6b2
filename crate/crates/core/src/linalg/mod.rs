//! Exact integer and rational linear algebra.

mod det;
mod lp;
mod matrix;
mod modp;
mod snf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use det::determinant;
pub use lp::{lp_feasible, LpOutcome};
pub use matrix::IntMatrix;
pub use modp::{inv_mod, is_prime, nullspace_mod_p, rank_mod_p, residue};
pub use snf::{smith_normal_form, SnfResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A primitive integer vector in the rational kernel of `m`, or `None` when
/// the columns are linearly independent over the rationals.
///
/// The vector is taken from the first free column of the reduced row echelon
/// form and scaled so that its entries are coprime integers.
pub fn integer_kernel_vector(m: &IntMatrix) -> Option<Vec<BigInt>> {
    let cols = m.cols();
    let mut a: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(sel) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, sel);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[row][free].clone();
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

/// Smallest prime factor of `|d|` for `|d| >= 2`, by trial division. Returns
/// `None` when `|d| < 2` or no factor below `limit` exists and `|d|` is
/// beyond `limit²`.
pub fn smallest_prime_factor(d: &BigInt, limit: u64) -> Option<u64> {
    let d = d.abs();
    if d < BigInt::from(2) {
        return None;
    }
    let mut p = 2u64;
    while p <= limit {
        let bp = BigInt::from(p);
        if &bp * &bp > d {
            // d itself is prime
            return u64::try_from(&d).ok();
        }
        if (&d % &bp).is_zero() {
            return Some(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_vector_is_primitive_and_annihilated() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 6], vec![1, 3, 5]]);
        let v = integer_kernel_vector(&m).unwrap();
        assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert!(g.is_one());
        assert!(integer_kernel_vector(&IntMatrix::identity(3)).is_none());
    }

    #[test]
    fn prime_factors() {
        assert_eq!(smallest_prime_factor(&BigInt::from(91), 1000), Some(7));
        assert_eq!(smallest_prime_factor(&BigInt::from(97), 1000), Some(97));
        assert_eq!(smallest_prime_factor(&BigInt::from(-8), 1000), Some(2));
        assert_eq!(smallest_prime_factor(&BigInt::from(1), 1000), None);
    }
}
