use num_bigint::BigInt;
use num_traits::Zero;

use super::Bipartition;
use crate::error::{structural, Result};
use crate::state::StateVector;

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn matrix_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail {
            let factor = row[col].clone();
            for (c, v) in row.iter_mut().enumerate().skip(col) {
                *v = (&pivot * &*v - &factor * &pivot_row[c]) / &prev;
            }
        }
        prev = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Schmidt rank of `s` across the cut `p`: the rank of its reshaped matrix.
pub fn schmidt_rank(s: &StateVector, p: &Bipartition) -> Result<usize> {
    if s.m() != p.n() {
        return Err(structural("state and bipartition sizes differ"));
    }
    let rows = p
        .reshape(s)
        .into_iter()
        .map(|row| row.into_iter().cloned().collect())
        .collect();
    Ok(matrix_rank(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| v.into()).collect())
            .collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(matrix_rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(matrix_rank(m(&[&[0, 1], &[1, 0]])), 2);
        assert_eq!(matrix_rank(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(matrix_rank(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(matrix_rank(m(&[&[2, 0, 1], &[0, 3, 0], &[4, 6, 2]])), 2);
    }

    #[test]
    fn ghz_and_product_schmidt_ranks() {
        let ghz = StateVector::from_sparse(3, [(0, 1.into()), (7, 1.into())]).unwrap();
        let cut = Bipartition::new(3, vec![2]).unwrap();
        assert_eq!(schmidt_rank(&ghz, &cut).unwrap(), 2);
        assert_eq!(
            schmidt_rank(&StateVector::uniform(3).unwrap(), &cut).unwrap(),
            1
        );
    }
}
