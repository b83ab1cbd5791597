//! Small numerical helpers shared by the geometry modules.

use nalgebra::SMatrix;

/// `n + 1` equally spaced points covering `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect()
}

/// Finite-difference weights for derivatives `0..=max_order` at `x0` on the
/// given nodes (Fornberg's recursion). `w[m][j]` multiplies `f(nodes[j])`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Finite-difference stencil for node `i` of `grid`: the first node index
/// and the weights `w[k][j]` for derivative order `k` (up to `max_order`).
///
/// The stencil has `width` nodes centred on `i` where the grid allows; near
/// the ends it is shifted inwards and gains one node to keep its order.
pub fn stencil(grid: &[f64], i: usize, width: usize, max_order: usize) -> (usize, Vec<Vec<f64>>) {
    let n = grid.len();
    let half = width / 2;
    let w = if i < half || i + half >= n { width + 1 } else { width }.min(n);
    let start = i.saturating_sub(half).min(n - w);
    (start, fornberg_weights(grid[i], &grid[start..start + w], max_order))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
            .unwrap_or(col);
        if a[(pivot, col)] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap_rows(pivot, col);
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for row in col + 1..N {
            let f = a[(row, col)] / p;
            for k in col..N {
                a[(row, k)] -= f * a[(col, k)];
            }
        }
    }
    det
}

/// Largest principal angle of a rotation matrix, in `[0, pi]`.
///
/// The eigenvalues of `2I - R - R^T` are `2 - 2 cos(theta_k)`.
pub fn max_principal_angle<const N: usize>(r: &SMatrix<f64, N, N>) -> f64 {
    let sym = SMatrix::<f64, N, N>::identity() * 2.0 - r - r.transpose();
    let dynamic = nalgebra::DMatrix::from_column_slice(N, N, sym.as_slice());
    let top = dynamic.symmetric_eigenvalues().max();
    (1.0 - top / 2.0).clamp(-1.0, 1.0).acos()
}

/// Nodes and weights of 5-point Gauss-Legendre quadrature on `[-1, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// 5-point Gauss-Legendre approximation of `int_a^b f`.
pub fn gauss_legendre5(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GL5.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Index `i` with `grid[i] <= t <= grid[i + 1]`, clamped to the valid range.
pub fn locate(grid: &[f64], t: f64) -> usize {
    let i = grid.partition_point(|&x| x <= t);
    i.saturating_sub(1).min(grid.len().saturating_sub(2))
}

/// Angle of the plane vector `v` relative to `u`, in `(-pi, pi]`.
pub fn signed_angle(u: [f64; 2], v: [f64; 2]) -> f64 {
    let cross = u[0] * v[1] - u[1] * v[0];
    let dot = u[0] * v[0] + u[1] * v[1];
    cross.atan2(dot)
}
