//! Exact rank computations.
//!
//! Rank over `Q` uses fraction-free (Bareiss) elimination on integer
//! matrices; rank over `GF(2)` uses elimination on bit-packed rows.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rank over the rationals of an integer matrix given by rows.
pub fn rank_rational(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev_pivot = BigInt::from(1);
    for col in 0..cols {
        if rank == a.len() {
            break;
        }
        // Smallest nonzero pivot keeps intermediate values small.
        let Some(pivot_row) = (rank..a.len())
            .filter(|&r| !a[r][col].is_zero())
            .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()))
        else {
            continue;
        };
        a.swap(rank, pivot_row);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in bottom.iter_mut() {
            // row ← (pivot[col]·row − row[col]·pivot) / prev_pivot, exact.
            let factor = row[col].clone();
            for c in col..cols {
                let v = &pivot[col] * &row[c] - &factor * &pivot[c];
                row[c] = v / &prev_pivot;
            }
        }
        prev_pivot = top[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Rank over `GF(2)` of a 0/1 matrix given by rows of booleans.
pub fn rank_gf2(rows: &[Vec<bool>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let words = cols.div_ceil(64);
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut packed = vec![0u64; words];
            for (c, &bit) in r.iter().enumerate() {
                if bit {
                    packed[c / 64] |= 1 << (c % 64);
                }
            }
            packed
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot_row) = (rank..a.len()).find(|&r| a[r][w] & bit != 0) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let pivot = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}
