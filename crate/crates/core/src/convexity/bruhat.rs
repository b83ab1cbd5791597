use nalgebra::{Matrix4, SMatrix};
use serde::Serialize;

use crate::error::{Error, Result};

/// Entries below this fraction of the largest entry count as zero.
const ELIMINATION_TOL: f64 = 1e-9;

/// A signed permutation matrix: column `j` is `signs[j] * e_{images[j]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SignedPermutation<const N: usize> {
    #[serde(with = "serde_arrays")]
    pub images: [usize; N],
    #[serde(with = "serde_arrays")]
    pub signs: [i8; N],
}

mod serde_arrays {
    use serde::Serializer;

    pub fn serialize<S: Serializer, T: serde::Serialize, const N: usize>(a: &[T; N], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(a.iter())
    }
}

impl<const N: usize> SignedPermutation<N> {
    pub fn identity() -> Self {
        SignedPermutation {
            images: std::array::from_fn(|j| j),
            signs: [1; N],
        }
    }

    /// Reads a signed permutation matrix; `None` if `m` is not one.
    pub fn from_matrix(m: &SMatrix<f64, N, N>) -> Option<Self> {
        let mut images = [0; N];
        let mut signs = [0; N];
        let mut used = [false; N];
        for j in 0..N {
            let nonzero: Vec<usize> = (0..N).filter(|&i| m[(i, j)] != 0.0).collect();
            let &[i] = nonzero.as_slice() else { return None };
            if used[i] || m[(i, j)].abs() != 1.0 {
                return None;
            }
            used[i] = true;
            images[j] = i;
            signs[j] = m[(i, j)].signum() as i8;
        }
        Some(SignedPermutation { images, signs })
    }

    pub fn matrix(&self) -> SMatrix<f64, N, N> {
        let mut m = SMatrix::<f64, N, N>::zeros();
        for j in 0..N {
            m[(self.images[j], j)] = f64::from(self.signs[j]);
        }
        m
    }

    pub fn det(&self) -> i8 {
        let mut sign: i8 = self.signs.iter().product();
        let mut seen = [false; N];
        for start in 0..N {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.images[j];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Every signed permutation of determinant `+1`.
    pub fn all_positive() -> Vec<Self> {
        let mut out = Vec::new();
        for images in permutations::<N>() {
            for mask in 0..(1u32 << N) {
                let signs = std::array::from_fn(|j| if mask >> j & 1 == 1 { -1 } else { 1 });
                let p = SignedPermutation { images, signs };
                if p.det() == 1 {
                    out.push(p);
                }
            }
        }
        out
    }
}

fn permutations<const N: usize>() -> Vec<[usize; N]> {
    fn extend<const N: usize>(prefix: &mut Vec<usize>, out: &mut Vec<[usize; N]>) {
        if prefix.len() == N {
            out.push(std::array::from_fn(|k| prefix[k]));
            return;
        }
        for i in 0..N {
            if !prefix.contains(&i) {
                prefix.push(i);
                extend(prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend::<N>(&mut Vec::with_capacity(N), &mut out);
    out
}

/// The signed permutation `P` with `q = U1 P U2`, `U1`, `U2` upper
/// triangular with positive diagonal.
///
/// Columns are processed left to right. The pivot of each column is its
/// lowest nonzero entry in a row not yet used; the rest of the pivot row is
/// cleared with column operations (left column into right column) and the
/// rest of the column with row operations (lower row into upper row). Both
/// stay inside the upper triangular group. Fails with `CellError` when `q`
/// is numerically singular.
pub fn bruhat_cell_of<const N: usize>(q: &SMatrix<f64, N, N>) -> Result<SignedPermutation<N>> {
    bruhat_cell_with_margin(q).map(|(p, _)| p)
}

/// [`bruhat_cell_of`] together with the smallest pivot relative to the
/// largest entry, a measure of the distance to smaller cells.
pub fn bruhat_cell_with_margin<const N: usize>(q: &SMatrix<f64, N, N>) -> Result<(SignedPermutation<N>, f64)> {
    let mut m = *q;
    let scale = m.amax();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Cell {
            t: f64::NAN,
            reason: "matrix is zero or not finite".into(),
        });
    }
    let mut used = [false; N];
    let mut images = [0; N];
    let mut signs = [0; N];
    let mut margin = f64::INFINITY;
    for j in 0..N {
        let thr = ELIMINATION_TOL * scale;
        let Some(i) = (0..N).rev().find(|&i| !used[i] && m[(i, j)].abs() > thr) else {
            return Err(Error::Cell {
                t: f64::NAN,
                reason: format!("matrix is singular: no pivot in column {}", j + 1),
            });
        };
        let pivot = m[(i, j)];
        for k in j + 1..N {
            let f = m[(i, k)] / pivot;
            if f != 0.0 {
                for r in 0..N {
                    m[(r, k)] -= f * m[(r, j)];
                }
            }
        }
        for r in 0..i {
            let f = m[(r, j)] / pivot;
            if f != 0.0 {
                for c in 0..N {
                    m[(r, c)] -= f * m[(i, c)];
                }
            }
        }
        used[i] = true;
        images[j] = i;
        signs[j] = if pivot > 0.0 { 1 } else { -1 };
        margin = margin.min(pivot.abs() / scale);
    }
    Ok((SignedPermutation { images, signs }, margin))
}

/// The signed permutation whose cell is the open dense cell used for
/// convexity: `e1 -> e4`, `e2 -> -e3`, `e3 -> e2`, `e4 -> -e1`.
pub fn top_permutation() -> SignedPermutation<4> {
    SignedPermutation {
        images: [3, 2, 1, 0],
        signs: [1, -1, 1, -1],
    }
}

/// `q = P L U` with `P` the [`top_permutation`], `L` lower unitriangular
/// and `U` upper triangular with positive diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopCellFactorization {
    pub l: Matrix4<f64>,
    pub u: Matrix4<f64>,
}

/// Pivots of `P^T q` below this (relative to its largest entry) are treated as zero.
const PIVOT_TOL: f64 = 1e-12;

/// Factors `q` as `P L U`; `CellError` if `q` is not in the top cell.
pub fn top_cell_factorize(q: &Matrix4<f64>) -> Result<TopCellFactorization> {
    factorize_at(q, f64::NAN)
}

pub(crate) fn factorize_at(q: &Matrix4<f64>, t: f64) -> Result<TopCellFactorization> {
    let a = top_permutation().matrix().transpose() * q;
    let scale = a.amax();
    let mut l = Matrix4::identity();
    let mut u = Matrix4::zeros();
    for k in 0..4 {
        for j in k..4 {
            u[(k, j)] = a[(k, j)] - (0..k).map(|s| l[(k, s)] * u[(s, j)]).sum::<f64>();
        }
        if !(u[(k, k)] > PIVOT_TOL * scale) {
            return Err(Error::Cell {
                t,
                reason: format!("pivot {} of the top-cell factorisation is {:.3e}", k + 1, u[(k, k)]),
            });
        }
        for i in k + 1..4 {
            l[(i, k)] = (a[(i, k)] - (0..k).map(|s| l[(i, s)] * u[(s, k)]).sum::<f64>()) / u[(k, k)];
        }
    }
    Ok(TopCellFactorization { l, u })
}

/// Leading principal minors of `P^T q`; all positive exactly on the top cell.
pub fn top_cell_minors(q: &Matrix4<f64>) -> [f64; 4] {
    let a = top_permutation().matrix().transpose() * q;
    [
        a[(0, 0)],
        a.fixed_view::<2, 2>(0, 0).determinant(),
        a.fixed_view::<3, 3>(0, 0).determinant(),
        a.determinant(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_upper(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => rng.gen_range(-2.0..2.0),
            std::cmp::Ordering::Equal => rng.gen_range(0.3..3.0),
            std::cmp::Ordering::Greater => 0.0,
        })
    }

    #[test]
    fn group_has_192_elements() {
        let all = SignedPermutation::<4>::all_positive();
        assert_eq!(all.len(), 192);
        assert_eq!(SignedPermutation::<3>::all_positive().len(), 24);
        for p in &all {
            assert!((p.matrix().determinant() - 1.0).abs() < 1e-12);
            assert_eq!(SignedPermutation::from_matrix(&p.matrix()), Some(*p));
        }
    }

    #[test]
    fn top_permutation_matrix() {
        let expected = Matrix4::new(
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, -1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0,
        );
        assert_eq!(top_permutation().matrix(), expected);
        assert_eq!(top_permutation().det(), 1);
        assert_eq!(bruhat_cell_of(&expected).unwrap(), top_permutation());
    }

    #[test]
    fn recovers_every_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in SignedPermutation::<4>::all_positive() {
            for _ in 0..5 {
                let q = random_upper(&mut rng) * p.matrix() * random_upper(&mut rng);
                assert_eq!(bruhat_cell_of(&q).unwrap(), p, "{q}");
            }
        }
    }

    #[test]
    fn identity_and_singular() {
        assert_eq!(
            bruhat_cell_of(&Matrix4::identity()).unwrap(),
            SignedPermutation::identity()
        );
        let mut s = Matrix4::identity();
        s[(2, 2)] = 0.0;
        assert!(matches!(bruhat_cell_of(&s), Err(Error::Cell { .. })));
    }

    #[test]
    fn factorisation_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = top_permutation().matrix();
        for _ in 0..50 {
            let l = random_upper(&mut rng).transpose();
            let l = Matrix4::from_fn(|i, j| if i == j { 1.0 } else { l[(i, j)] });
            let u = random_upper(&mut rng);
            let q = p * l * u;
            let f = top_cell_factorize(&q).unwrap();
            assert!((f.l - l).amax() < 1e-9 && (f.u - u).amax() < 1e-9);
            assert!((p * f.l * f.u - q).amax() < 1e-12);
            assert!(top_cell_minors(&q).iter().all(|&m| m > 0.0));
        }
    }

    #[test]
    fn identity_is_not_in_top_cell() {
        assert!(matches!(
            top_cell_factorize(&Matrix4::identity()),
            Err(Error::Cell { .. })
        ));
        assert!(top_cell_factorize(&-top_permutation().matrix()).is_err());
        assert!(top_cell_factorize(&top_permutation().matrix()).is_ok());
    }
}
