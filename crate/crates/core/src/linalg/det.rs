use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{IntMatrix, LinalgError};

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the input, so the divisions by the
/// previous pivot are exact.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(determinant(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(
            determinant(&IntMatrix::diagonal(&[2, 3])).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            determinant(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            determinant(&IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]])).unwrap(),
            BigInt::zero()
        );
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            determinant(&IntMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
    }
}
