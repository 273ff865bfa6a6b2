use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{IntMatrix, LinalgError};

/// Deterministic trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `a^-1 mod p` for prime `p` and `a != 0`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    result
}

/// Reduces an integer into `0..p`.
pub fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

/// Reduced row echelon form modulo `p`; returns the pivot columns.
fn rref_mod(a: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(sel) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, sel);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : M x ≡ 0 (mod p)}`. An empty basis means the nullspace is
/// trivial.
pub fn nullspace_mod_p(m: &IntMatrix, p: u64) -> Result<Vec<Vec<u64>>, LinalgError> {
    if !is_prime(p) {
        return Err(LinalgError::NotPrime(p));
    }
    let cols = m.cols();
    let mut a: Vec<Vec<u64>> = (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| residue(x, p)).collect())
        .collect();
    let pivots = rref_mod(&mut a, cols, p);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let basis = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][free]) % p;
            }
            v
        })
        .collect();
    Ok(basis)
}

/// Rank of `M` reduced modulo `p`.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize, LinalgError> {
    Ok(m.cols() - nullspace_mod_p(m, p)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn zero_matrix_has_full_nullspace() {
        let basis = nullspace_mod_p(&IntMatrix::zeros(2, 2), 2).unwrap();
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn non_prime_modulus_is_rejected() {
        assert_eq!(
            nullspace_mod_p(&IntMatrix::identity(2), 4),
            Err(LinalgError::NotPrime(4))
        );
    }

    #[test]
    fn basis_vectors_are_in_the_kernel() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3, -1], vec![2, 4, 1, 0]]);
        for p in [2u64, 3, 5, 7] {
            for v in nullspace_mod_p(&m, p).unwrap() {
                let x: Vec<BigInt> = v.iter().map(|&t| BigInt::from(t)).collect();
                for y in m.mul_vec(&x) {
                    assert_eq!(residue(&y, p), 0);
                }
            }
        }
    }

    #[test]
    fn diag_2_3_mod_p() {
        let m = IntMatrix::diagonal(&[2, 3]);
        assert_eq!(rank_mod_p(&m, 2).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, 3).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, 5).unwrap(), 2);
    }
}
