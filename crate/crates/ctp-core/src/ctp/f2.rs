//! Tiny F₂ linear algebra on u64-packed rows (dimensions here never
//! exceed the ambient candidate space, far below 64).

/// Rank of the n×n bit matrix.
pub fn rank(rows: &[u64], n: usize) -> usize {
    let mut work: Vec<u64> = rows.to_vec();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..work.len()).find(|&r| work[r] >> col & 1 == 1) else {
            continue;
        };
        work.swap(rank, pivot);
        for r in 0..work.len() {
            if r != rank && work[r] >> col & 1 == 1 {
                work[r] ^= work[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of the kernel {x : M·x = 0} of the n×n bit matrix, as
/// coordinate vectors, in a deterministic order.
pub fn kernel(rows: &[u64], n: usize) -> Vec<Vec<bool>> {
    let mut work: Vec<u64> = rows.to_vec();
    let mut pivot_col: Vec<Option<usize>> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        if let Some(p) = (row..work.len()).find(|&r| work[r] >> col & 1 == 1) {
            work.swap(row, p);
            for r in 0..work.len() {
                if r != row && work[r] >> col & 1 == 1 {
                    work[r] ^= work[row];
                }
            }
            pivot_col.push(Some(col));
            row += 1;
        }
    }
    let pivots: Vec<usize> = pivot_col.into_iter().flatten().collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut x = 1u64 << free;
        for (r, &pc) in pivots.iter().enumerate() {
            if work[r] >> free & 1 == 1 {
                x |= 1 << pc;
            }
        }
        basis.push((0..n).map(|i| x >> i & 1 == 1).collect());
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        // [[0,1],[1,0]]: full rank, trivial kernel.
        assert_eq!(rank(&[0b10, 0b01], 2), 2);
        assert!(kernel(&[0b10, 0b01], 2).is_empty());

        // Zero 3×3: kernel is everything.
        assert_eq!(rank(&[0, 0, 0], 3), 0);
        assert_eq!(kernel(&[0, 0, 0], 3).len(), 3);

        // [[1,1],[1,1]]: rank 1, kernel spanned by (1,1).
        let k = kernel(&[0b11, 0b11], 2);
        assert_eq!(k, vec![vec![true, true]]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let rows = [0b0110u64, 0b1001, 0b1100, 0b0011];
        for x in kernel(&rows, 4) {
            let xv = x
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, b)| acc | ((*b as u64) << i));
            for r in rows {
                assert_eq!((r & xv).count_ones() % 2, 0);
            }
        }
        assert_eq!(rank(&rows, 4) + kernel(&rows, 4).len(), 4);
    }
}
