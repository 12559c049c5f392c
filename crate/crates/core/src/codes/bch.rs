//! Cyclic parity-check matrices for the two small binary BCH codes used by
//! the built-in hypergraph-product code.

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Polynomials over GF(2) as coefficient vectors, lowest degree first.
type Poly = Vec<u8>;

fn poly_mul(a: &[u8], b: &[u8]) -> Poly {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] ^= bj;
        }
    }
    out
}

/// Exact division; panics on a nonzero remainder since callers only divide
/// `x^n - 1` by one of its factors.
fn poly_div_exact(num: &[u8], den: &[u8]) -> Poly {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0u8; num.len() - dd];
    for i in (dd..num.len()).rev() {
        if rem[i] == 1 {
            quot[i - dd] = 1;
            for (j, &dj) in den.iter().enumerate() {
                rem[i - dd + j] ^= dj;
            }
        }
    }
    assert!(rem.iter().all(|&b| b == 0), "divisor does not divide");
    quot
}

/// Generator polynomial of the `[n, k]` narrow-sense BCH code.
pub fn generator_poly(n: usize, k: usize) -> Result<Poly> {
    match (n, k) {
        // x^3 + x + 1
        (7, 4) => Ok(vec![1, 1, 0, 1]),
        // (x^4 + x + 1)(x^4 + x^3 + x^2 + x + 1) = x^8 + x^7 + x^6 + x^4 + 1
        (15, 7) => Ok(poly_mul(&[1, 1, 0, 0, 1], &[1, 1, 1, 1, 1])),
        _ => Err(Error::UnsupportedBch { n, k }),
    }
}

/// `(n - k) × n` parity-check matrix whose rows are consecutive shifts of the
/// reciprocal check polynomial `h*(x)`, where `h(x) = (x^n - 1) / g(x)`.
pub fn bch_parity_matrix(n: usize, k: usize) -> Result<BitMatrix> {
    let g = generator_poly(n, k)?;
    let mut xn1 = vec![0u8; n + 1];
    xn1[0] = 1;
    xn1[n] = 1;
    let h = poly_div_exact(&xn1, &g);
    debug_assert_eq!(h.len(), k + 1);
    let mut m = BitMatrix::zeros(n - k, n);
    for row in 0..n - k {
        for (j, &coef) in h.iter().rev().enumerate() {
            if coef == 1 {
                m.set(row, row + j, true);
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{multiply_transpose, rank, BitVec};

    /// Minimum weight over all nonzero codewords `u(x)·g(x)`, by enumeration.
    fn min_distance_by_enumeration(n: usize, k: usize) -> usize {
        let g = generator_poly(n, k).unwrap();
        (1u32..(1 << k))
            .map(|msg| {
                let u: Vec<u8> = (0..k).map(|i| (msg >> i & 1) as u8).collect();
                poly_mul(&u, &g).iter().filter(|&&b| b == 1).count()
            })
            .min()
            .unwrap()
    }

    fn codewords_in_kernel(n: usize, k: usize) -> bool {
        let h = bch_parity_matrix(n, k).unwrap();
        let g = generator_poly(n, k).unwrap();
        (0..k).all(|shift| {
            let mut support = Vec::new();
            for (i, &c) in g.iter().enumerate() {
                if c == 1 {
                    support.push(i + shift);
                }
            }
            h.mul_vec(&BitVec::from_support(n, &support))
                .unwrap()
                .is_zero()
        })
    }

    #[test]
    fn hamming_7_4() {
        let h = bch_parity_matrix(7, 4).unwrap();
        assert_eq!((h.rows(), h.cols()), (3, 7));
        assert_eq!(rank(&h), 3);
        assert!(codewords_in_kernel(7, 4));
        assert_eq!(min_distance_by_enumeration(7, 4), 3);
    }

    #[test]
    fn bch_15_7() {
        let h = bch_parity_matrix(15, 7).unwrap();
        assert_eq!((h.rows(), h.cols()), (8, 15));
        assert_eq!(rank(&h), 8);
        assert!(codewords_in_kernel(15, 7));
        assert_eq!(min_distance_by_enumeration(15, 7), 5);
    }

    #[test]
    fn parity_matrix_annihilates_generator_matrix() {
        for (n, k) in [(7, 4), (15, 7)] {
            let h = bch_parity_matrix(n, k).unwrap();
            let g = generator_poly(n, k).unwrap();
            let mut gm = BitMatrix::zeros(k, n);
            for r in 0..k {
                for (i, &c) in g.iter().enumerate() {
                    if c == 1 {
                        gm.set(r, r + i, true);
                    }
                }
            }
            assert!(multiply_transpose(&h, &gm).unwrap().is_zero());
        }
    }

    #[test]
    fn unsupported_parameters() {
        assert_eq!(
            bch_parity_matrix(31, 21).unwrap_err(),
            Error::UnsupportedBch { n: 31, k: 21 }
        );
    }
}
