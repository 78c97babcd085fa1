//! Independent oracles shared by the unit tests.

use crate::numeric::DenseMatrix;

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    if n == 1 {
        return a[(0, 0)];
    }
    (0..n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * a[(0, j)] * cofactor_det(&minor(a, 0, j))
        })
        .sum()
}

fn minor(a: &DenseMatrix, row: usize, col: usize) -> DenseMatrix {
    let n = a.rows();
    DenseMatrix::from_fn(n - 1, n - 1, |i, j| {
        a[(if i < row { i } else { i + 1 }, if j < col { j } else { j + 1 })]
    })
}

/// Inverse as adjugate over determinant.
pub fn cofactor_inverse(a: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    let det = cofactor_det(a);
    if n == 1 {
        return DenseMatrix::from_fn(1, 1, |_, _| 1.0 / det);
    }
    DenseMatrix::from_fn(n, n, |i, j| {
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * cofactor_det(&minor(a, j, i)) / det
    })
}

/// Classical closed form of the elevation matrix from degree `low` to `high`
/// (`high - low` elevation steps composed): entry `(i, j)` is
/// `C(low, j) C(high - low, i - j) / C(high, i)`.
pub fn classical_elevation(low: usize, high: usize) -> DenseMatrix {
    let c = |n: usize, k: usize| -> f64 {
        if k > n {
            return 0.0;
        }
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    };
    DenseMatrix::from_fn(high + 1, low + 1, |i, j| {
        if i < j || i - j > high - low {
            0.0
        } else {
            c(low, j) * c(high - low, i - j) / c(high, i)
        }
    })
}
