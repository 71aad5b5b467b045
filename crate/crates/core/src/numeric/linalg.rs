//! Small dense linear-algebra helpers.

use nalgebra::DMatrix;

/// Orthonormal-free basis of the null space of `m`, computed by Gauss-Jordan
/// elimination with full pivoting. Entries below `tol` (relative to the
/// largest entry) are treated as zero. Each basis vector is a column.
pub fn nullspace(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    let thresh = tol * scale;
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (rank, rank, 0.0f64);
        for i in rank..rows {
            for j in rank..cols {
                if a[(i, j)].abs() > best.2 {
                    best = (i, j, a[(i, j)].abs());
                }
            }
        }
        if best.2 <= thresh {
            break;
        }
        a.swap_rows(rank, best.0);
        a.swap_columns(rank, best.1);
        perm.swap(rank, best.1);
        let piv = a[(rank, rank)];
        for j in 0..cols {
            a[(rank, j)] /= piv;
        }
        for i in 0..rows {
            if i != rank {
                let f = a[(i, rank)];
                if f != 0.0 {
                    for j in 0..cols {
                        a[(i, j)] -= f * a[(rank, j)];
                    }
                }
            }
        }
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in rank..cols {
        let mut v = vec![0.0; cols];
        v[perm[free]] = 1.0;
        for r in 0..rank {
            v[perm[r]] = -a[(r, free)];
        }
        basis.push(v);
    }
    basis
}

/// Solves the small dense system `a x = b`, returning `None` when singular.
pub fn solve(a: &DMatrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let rhs = nalgebra::DVector::from_column_slice(b);
    a.clone().lu().solve(&rhs).map(|x| x.iter().copied().collect())
}
