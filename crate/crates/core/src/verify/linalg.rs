//! Exact rank computations.

use num_traits::Zero;

use crate::scalar::{Rational, Scalar, ScalarError};

pub type Matrix = Vec<Vec<Scalar>>;

/// Rank by fraction-free (Bareiss) elimination over `Frac(ℚ[k])[ħ]`. Every
/// division is exact; a failed division is reported as an error.
pub fn bareiss_rank(m: &Matrix) -> Result<usize, ScalarError> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Scalar::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for i in (rank + 1)..rows {
            let lead = a[i][c].clone();
            for j in (c + 1)..cols {
                let num = &(&a[i][j] * &pivot) - &(&lead * &a[rank][j]);
                a[i][j] = num.checked_div(&prev)?;
            }
            a[i][c] = Scalar::zero();
        }
        prev = pivot;
        rank += 1;
    }
    Ok(rank)
}

/// Rank over `ℚ` by ordinary Gaussian elimination.
pub fn rank_q(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].recip();
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] * &inv;
                for j in c..cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `a·b` for conforming matrices; an empty side gives the zero matrix.
pub fn mat_mul(a: &Matrix, b: &Matrix, b_cols: usize) -> Matrix {
    let mut out = vec![vec![Scalar::zero(); b_cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..b_cols {
                out[i][j] = &out[i][j] + &(x * &b[k][j]);
            }
        }
    }
    out
}

/// Entries specialized at `k = k0`, `ħ = h0`.
pub fn specialize(m: &Matrix, k0: &Rational, h0: &Rational) -> Result<Vec<Vec<Rational>>, ScalarError> {
    m.iter().map(|row| row.iter().map(|x| x.eval(k0, h0)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn symbolic_rank_drops_on_dependent_rows() {
        let k = Scalar::k();
        let h = Scalar::hbar();
        let row = vec![k.clone(), &h * &k, s(1)];
        let twice: Vec<Scalar> = row.iter().map(|x| &(&h + &s(2)) * x).collect();
        let m = vec![row, twice, vec![s(0), s(0), h.clone()]];
        assert_eq!(bareiss_rank(&m).unwrap(), 2);
    }

    proptest! {
        // Bareiss over ℚ ⊂ Frac(ℚ[k])[ħ] agrees with Gaussian elimination
        #[test]
        fn bareiss_matches_gauss(entries in proptest::collection::vec(-3i64..4, 12), rows in 1usize..4) {
            let cols = 12 / 4;
            let m: Vec<Vec<i64>> = entries.chunks(cols).take(rows).map(|c| c.to_vec()).collect();
            let sym: Matrix = m.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect();
            let q: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            prop_assert_eq!(bareiss_rank(&sym).unwrap(), rank_q(&q));
        }
    }
}
