//! Fraction-free Gauss-Jordan elimination over the integers.
//!
//! Every intermediate entry is a minor of the input, so the divisions by the
//! previous pivot are exact and coefficient growth stays polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) struct FractionFree {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    /// Common value of every pivot entry after elimination.
    pub denom: BigInt,
    pub swaps: usize,
}

pub(crate) fn fraction_free_gj(
    mut rows: Vec<Vec<BigInt>>,
    cols: usize,
    pivot_cols: usize,
) -> FractionFree {
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..pivot_cols.min(cols) {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if found != r {
            rows.swap(r, found);
            swaps += 1;
        }
        let piv = rows[r][c].clone();
        let pivot_row = rows[r].clone();
        let same = piv == prev;
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let a = row[c].clone();
            if a.is_zero() {
                if same {
                    continue;
                }
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * &piv / &prev;
                    }
                }
                continue;
            }
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                let t = if pv.is_zero() {
                    &*x * &piv
                } else {
                    &*x * &piv - &a * pv
                };
                *x = if prev.is_one() { t } else { t / &prev };
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    FractionFree {
        rows,
        pivots,
        denom: prev,
        swaps,
    }
}

/// Clears denominators row by row; also returns the product of the row
/// multipliers.
pub(crate) fn integer_rows(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let out = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let out = row
                .iter()
                .map(|x| {
                    if x.is_zero() {
                        BigInt::zero()
                    } else {
                        x.numer() * (&l / x.denom())
                    }
                })
                .collect();
            scale *= l;
            out
        })
        .collect();
    (out, scale)
}

/// Canonical nullspace (first nonzero entry 1 in each vector) of a rational
/// matrix with `cols` columns.
pub(crate) fn rational_nullspace(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let (ints, _) = integer_rows(rows);
    let ff = fraction_free_gj(ints, cols, cols);
    let mut is_pivot = vec![false; cols];
    for &c in &ff.pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![BigInt::zero(); cols];
        v[f] = ff.denom.clone();
        for (r, &pc) in ff.pivots.iter().enumerate() {
            v[pc] = -&ff.rows[r][f];
        }
        let lead = v.iter().find(|x| !x.is_zero()).unwrap().clone();
        out.push(
            v.into_iter()
                .map(|x| {
                    if x.is_zero() {
                        BigRational::zero()
                    } else {
                        BigRational::new(x, lead.clone())
                    }
                })
                .collect(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn determinant_from_last_pivot() {
        let ff = fraction_free_gj(z(&[&[2, 1, 1], &[1, 3, 2], &[1, 0, 0]]), 3, 3);
        // det = 2*0 - 1*(0-2) + 1*(0-3) = -1
        assert_eq!(ff.pivots.len(), 3);
        let sign = if ff.swaps % 2 == 0 { 1 } else { -1 };
        assert_eq!(ff.denom * sign, BigInt::from(-1));
        for (r, &c) in ff.pivots.iter().enumerate() {
            assert_eq!(ff.rows[r][c], BigInt::from(-1) * sign);
        }
    }
}
