//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::rational::Coeff;

/// Rank of the matrix whose rows are `rows`.
pub fn rank(rows: &[Vec<Coeff>]) -> usize {
    let mut m: Vec<Vec<Coeff>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            let pivot_row = m[rank].clone();
            for (x, y) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * y;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
