//! Quaternions and the spin double covers `Spin3 = S3 -> SO3` and
//! `Spin4 = S3 x S3 -> SO4`.
//!
//! Conventions: a quaternion `a + b i + c j + d k` is stored as `(a, b, c, d)`
//! with `ij = k`, `jk = i`, `ki = j`. `project_spin3(z)` is the matrix of
//! `h -> z h conj(z)` on the imaginary quaternions in the basis `(i, j, k)`;
//! `project_spin4(zl, zr)` is the matrix of `q -> zl q conj(zr)` on all of H in
//! the basis `(1, i, j, k)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Matrix4, SMatrix, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit-norm tolerance enforced when building a [`UnitQuaternion`].
pub const UNIT_TOL: f64 = 1e-12;
/// Orthogonality tolerance enforced when building a [`Rotation`].
pub const ROTATION_TOL: f64 = 1e-9;
/// Tolerance used when checking that a frame path is covered by a lift.
pub const COVER_TOL: f64 = 1e-6;
/// Largest rotation angle allowed between consecutive frames of a lifted path.
pub const LIFT_MAX_STEP: f64 = FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    /// Purely imaginary quaternion `x i + y j + z k`.
    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Quaternion::new(0.0, x, y, z)
    }

    /// Basis element `e_index` of `(1, i, j, k)`.
    pub fn basis(index: usize) -> Self {
        let mut v = [0.0; 4];
        v[index] = 1.0;
        Self::from_array(v)
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_vector4(v: &Vector4<f64>) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector4(self) -> Vector4<f64> {
        Vector4::new(self.a, self.b, self.c, self.d)
    }

    pub fn imaginary(self) -> Vector3<f64> {
        Vector3::new(self.b, self.c, self.d)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }
}

/// Hamilton product.
pub fn quat_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
        p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
        p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
        p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        quat_mul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: f64) -> Quaternion {
        self.scale(rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.a, self.b, self.c, self.d)
    }
}

/// A point of `S3 = Spin3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Quaternion", into = "Quaternion")]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: UnitQuaternion = UnitQuaternion(Quaternion::ONE);
    pub const I: UnitQuaternion = UnitQuaternion(Quaternion::I);
    pub const J: UnitQuaternion = UnitQuaternion(Quaternion::J);
    pub const K: UnitQuaternion = UnitQuaternion(Quaternion::K);

    pub fn new(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if !q.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::Range {
                what: "quaternion norm",
                value: n,
                expected: "1 within 1e-12",
            });
        }
        Ok(UnitQuaternion(q))
    }

    /// Rescales a nonzero quaternion onto `S3`.
    pub fn new_normalize(q: Quaternion) -> Self {
        UnitQuaternion(q.scale(1.0 / q.norm()))
    }

    pub fn into_inner(self) -> Quaternion {
        self.0
    }

    pub fn quaternion(&self) -> Quaternion {
        self.0
    }

    pub fn conj(self) -> Self {
        UnitQuaternion(self.0.conj())
    }

    pub fn dot(self, other: Self) -> f64 {
        self.0.dot(other.0)
    }

    /// Euclidean distance in `R4`.
    pub fn distance(self, other: Self) -> f64 {
        (self.0 - other.0).norm()
    }

    /// Half the rotation angle of `project_spin3(self)`, in `[0, pi]`.
    pub fn half_angle(self) -> f64 {
        self.0.a.clamp(-1.0, 1.0).acos()
    }
}

impl TryFrom<Quaternion> for UnitQuaternion {
    type Error = Error;
    fn try_from(q: Quaternion) -> Result<Self> {
        UnitQuaternion::new(q)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(z: UnitQuaternion) -> Quaternion {
        z.0
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, rhs: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * rhs.0)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }
}

/// A point `(zl, zr)` of `Spin4 = S3 x S3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinPair {
    pub zl: UnitQuaternion,
    pub zr: UnitQuaternion,
}

impl SpinPair {
    pub const IDENTITY: SpinPair = SpinPair {
        zl: UnitQuaternion::ONE,
        zr: UnitQuaternion::ONE,
    };

    pub fn new(zl: UnitQuaternion, zr: UnitQuaternion) -> Self {
        SpinPair { zl, zr }
    }

    /// Sup of the two factor distances.
    pub fn distance(self, other: SpinPair) -> f64 {
        self.zl.distance(other.zl).max(self.zr.distance(other.zr))
    }
}

impl Mul for SpinPair {
    type Output = SpinPair;
    fn mul(self, rhs: SpinPair) -> SpinPair {
        SpinPair::new(self.zl * rhs.zl, self.zr * rhs.zr)
    }
}

impl Neg for SpinPair {
    type Output = SpinPair;
    fn neg(self) -> SpinPair {
        SpinPair::new(-self.zl, -self.zr)
    }
}

/// An element of `SO_N`, stored as a plain matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<const N: usize>(SMatrix<f64, N, N>);

pub type Rotation3 = Rotation<3>;
pub type Rotation4 = Rotation<4>;

impl<const N: usize> Rotation<N> {
    pub fn identity() -> Self {
        Rotation(SMatrix::identity())
    }

    /// Checks `M^T M = I` and `det M = +1` within [`ROTATION_TOL`].
    pub fn new(m: SMatrix<f64, N, N>) -> Result<Self> {
        let residual = orthogonality_residual(&m);
        if residual > ROTATION_TOL {
            return Err(Error::Cover {
                index: 0,
                residual,
                reason: "matrix is not special orthogonal",
            });
        }
        Ok(Rotation(m))
    }

    pub fn new_unchecked(m: SMatrix<f64, N, N>) -> Self {
        Rotation(m)
    }

    pub fn matrix(&self) -> &SMatrix<f64, N, N> {
        &self.0
    }

    pub fn into_inner(self) -> SMatrix<f64, N, N> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Rotation(self.0.transpose())
    }
}

impl<const N: usize> Mul for Rotation<N> {
    type Output = Rotation<N>;
    fn mul(self, rhs: Self) -> Self {
        Rotation(self.0 * rhs.0)
    }
}

/// `max(|M^T M - I|_max, |det M - 1|)`.
pub fn orthogonality_residual<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    let gram = m.transpose() * m - SMatrix::<f64, N, N>::identity();
    let off = gram.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    off.max((crate::numeric::determinant(m) - 1.0).abs())
}

/// Matrix of `h -> z h conj(z)` on `span(i, j, k)`.
pub fn project_spin3(z: UnitQuaternion) -> Rotation3 {
    let z = z.quaternion();
    let zc = z.conj();
    let mut m = Matrix3::zeros();
    for col in 0..3 {
        let image = z * Quaternion::basis(col + 1) * zc;
        m.set_column(col, &image.imaginary());
    }
    Rotation(m)
}

/// Matrix of `q -> zl q conj(zr)` on H in the basis `(1, i, j, k)`.
pub fn project_spin4(p: SpinPair) -> Rotation4 {
    Rotation(bilinear_image(p.zl.quaternion(), p.zr.quaternion()))
}

fn bilinear_image(zl: Quaternion, zr: Quaternion) -> Matrix4<f64> {
    let zrc = zr.conj();
    let mut m = Matrix4::zeros();
    for col in 0..4 {
        let image = zl * Quaternion::basis(col) * zrc;
        m.set_column(col, &image.to_vector4());
    }
    m
}

/// `cos|w| + sin|w| w/|w|` for an imaginary quaternion `w`.
///
/// The real part of `w` is ignored.
pub fn quat_exp(w: Quaternion) -> UnitQuaternion {
    debug_assert!(w.a.abs() < 1e-9, "quat_exp expects an imaginary quaternion");
    let v = w.imaginary();
    let theta = v.norm();
    if theta == 0.0 {
        return UnitQuaternion::ONE;
    }
    let s = theta.sin() / theta;
    UnitQuaternion::new_normalize(Quaternion::new(theta.cos(), s * v.x, s * v.y, s * v.z))
}

/// One of the two preimages of `m` under [`project_spin3`].
///
/// Uses the largest diagonal pivot of `z z^T` (Shepperd's method).
pub fn spin3_preimage(m: &Rotation3) -> UnitQuaternion {
    let r = m.matrix();
    let tr = r.trace();
    // Diagonal of 4 z z^T.
    let diag = [
        1.0 + tr,
        1.0 + 2.0 * r[(0, 0)] - tr,
        1.0 + 2.0 * r[(1, 1)] - tr,
        1.0 + 2.0 * r[(2, 2)] - tr,
    ];
    let pivot = (0..4).max_by(|&x, &y| diag[x].total_cmp(&diag[y])).unwrap_or(0);
    // Off-diagonal entries of 4 z z^T.
    let ab = r[(2, 1)] - r[(1, 2)];
    let ac = r[(0, 2)] - r[(2, 0)];
    let ad = r[(1, 0)] - r[(0, 1)];
    let bc = r[(0, 1)] + r[(1, 0)];
    let bd = r[(0, 2)] + r[(2, 0)];
    let cd = r[(1, 2)] + r[(2, 1)];
    let row = match pivot {
        0 => [diag[0], ab, ac, ad],
        1 => [ab, diag[1], bc, bd],
        2 => [ac, bc, diag[2], cd],
        _ => [ad, bd, cd, diag[3]],
    };
    UnitQuaternion::new_normalize(Quaternion::from_array(row))
}

/// One of the two preimages of `m` under [`project_spin4`].
///
/// The bilinear map `(zl, zr) -> project_spin4` sends `e_a (x) e_b` to a signed
/// permutation matrix `B_ab`; these sixteen matrices are Frobenius-orthogonal
/// with squared norm 4, so `K_ab = <M, B_ab> / 4` recovers the rank-one matrix
/// `zl zr^T`. The factors are read off the row and column through the
/// largest-magnitude entry of `K`.
pub fn spin4_preimage(m: &Rotation4) -> SpinPair {
    let k = associate_matrix(m.matrix());
    let (mut pa, mut pb) = (0, 0);
    for a in 0..4 {
        for b in 0..4 {
            if k[(a, b)].abs() > k[(pa, pb)].abs() {
                pa = a;
                pb = b;
            }
        }
    }
    let col = k.column(pb).into_owned();
    let row = k.row(pa).transpose();
    let zl = Quaternion::from_vector4(&col).scale(1.0 / col.norm());
    let mut zr = Quaternion::from_vector4(&row).scale(1.0 / row.norm());
    if zl.to_array()[pa] * zr.to_array()[pb] * k[(pa, pb)] < 0.0 {
        zr = -zr;
    }
    SpinPair::new(UnitQuaternion::new_normalize(zl), UnitQuaternion::new_normalize(zr))
}

/// `K = zl zr^T` recovered linearly from `M = project_spin4(zl, zr)`.
pub fn associate_matrix(m: &Matrix4<f64>) -> Matrix4<f64> {
    let mut k = Matrix4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let basis = bilinear_image(Quaternion::basis(a), Quaternion::basis(b));
            k[(a, b)] = m.component_mul(&basis).sum() / 4.0;
        }
    }
    k
}

/// Rotation angle of an element of `SO3`, in `[0, pi]`.
pub fn rotation_angle3(m: &Rotation3) -> f64 {
    ((m.matrix().trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

/// Largest principal rotation angle of an element of `SO4`, in `[0, pi]`.
pub fn rotation_angle4(m: &Rotation4) -> f64 {
    let p = spin4_preimage(m);
    let al = p.zl.half_angle();
    let ar = p.zr.half_angle();
    let sum = al + ar;
    let sum = sum.min(2.0 * std::f64::consts::PI - sum);
    (al - ar).abs().max(sum)
}

fn check_frame<const N: usize>(index: usize, m: &Rotation<N>) -> Result<()> {
    let residual = orthogonality_residual(m.matrix());
    if !residual.is_finite() || residual > COVER_TOL {
        return Err(Error::Cover {
            index,
            residual,
            reason: "frame is not special orthogonal",
        });
    }
    Ok(())
}

fn max_abs_diff<const N: usize>(a: &Rotation<N>, b: &Rotation<N>) -> f64 {
    (a.matrix() - b.matrix()).amax()
}

/// Continuous lift of a sampled `SO3` path starting at `base`.
///
/// Consecutive frames must be less than [`LIFT_MAX_STEP`] apart; each sample's
/// preimage sign is chosen to stay on the same sheet as its predecessor.
pub fn lift_path_spin3(frames: &[Rotation3], base: UnitQuaternion) -> Result<Vec<UnitQuaternion>> {
    let Some(first) = frames.first() else {
        return Ok(Vec::new());
    };
    check_frame(0, first)?;
    let residual = max_abs_diff(&project_spin3(base), first);
    if residual > COVER_TOL {
        return Err(Error::Cover {
            index: 0,
            residual,
            reason: "base does not project onto the first frame",
        });
    }
    let mut lift = Vec::with_capacity(frames.len());
    lift.push(base);
    for (i, pair) in frames.windows(2).enumerate() {
        check_frame(i + 1, &pair[1])?;
        let angle = rotation_angle3(&(pair[0].transpose() * pair[1]));
        if !(angle < LIFT_MAX_STEP) {
            return Err(Error::Density {
                index: i,
                angle,
                limit: LIFT_MAX_STEP,
            });
        }
        let prev = lift[i];
        let mut z = spin3_preimage(&pair[1]);
        if z.dot(prev) < 0.0 {
            z = -z;
        }
        lift.push(z);
    }
    Ok(lift)
}

/// Continuous lift of a sampled `SO4` path starting at `base`.
pub fn lift_path_spin4(frames: &[Rotation4], base: SpinPair) -> Result<Vec<SpinPair>> {
    let Some(first) = frames.first() else {
        return Ok(Vec::new());
    };
    check_frame(0, first)?;
    let residual = max_abs_diff(&project_spin4(base), first);
    if residual > COVER_TOL {
        return Err(Error::Cover {
            index: 0,
            residual,
            reason: "base does not project onto the first frame",
        });
    }
    let mut lift = Vec::with_capacity(frames.len());
    lift.push(base);
    for (i, pair) in frames.windows(2).enumerate() {
        check_frame(i + 1, &pair[1])?;
        let angle = rotation_angle4(&(pair[0].transpose() * pair[1]));
        if !(angle < LIFT_MAX_STEP) {
            return Err(Error::Density {
                index: i,
                angle,
                limit: LIFT_MAX_STEP,
            });
        }
        let prev = lift[i];
        let mut z = spin4_preimage(&pair[1]);
        if z.zl.dot(prev.zl) + z.zr.dot(prev.zr) < 0.0 {
            z = -z;
        }
        lift.push(z);
    }
    Ok(lift)
}

/// Matrix of left multiplication `x -> w x` on H in the basis `(1, i, j, k)`.
pub fn left_mul_matrix(w: Quaternion) -> Matrix4<f64> {
    bilinear_image(w, Quaternion::ONE)
}

/// Matrix of right multiplication `x -> x w` on H in the basis `(1, i, j, k)`.
pub fn right_mul_matrix(w: Quaternion) -> Matrix4<f64> {
    bilinear_image(Quaternion::ONE, w.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d)
    }

    #[test]
    fn product_rules() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, -Quaternion::ONE);
        assert_eq!(i * j * k, -Quaternion::ONE);
        let x = q(0.3, -1.2, 2.0, 0.5);
        assert_eq!(Quaternion::ONE * x, x);
    }

    #[test]
    fn multiplication_table_from_ijk() {
        // i^2 = j^2 = k^2 = ijk = -1 determines the whole table; rebuild the
        // off-diagonal products from it: ij = -ij(kk) = -(ijk)k = k, etc.
        let (one, i, j, k) = (Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K);
        let table = [[one, i, j, k], [i, -one, k, -j], [j, -k, -one, i], [k, j, -i, -one]];
        let basis = [one, i, j, k];
        for (r, x) in basis.iter().enumerate() {
            for (c, y) in basis.iter().enumerate() {
                assert_eq!(*x * *y, table[r][c], "e{r} * e{c}");
            }
        }
    }

    #[test]
    fn spin3_of_k() {
        let m = project_spin3(UnitQuaternion::K);
        assert!((m.matrix() - Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0))).amax() < 1e-15);
        assert_eq!(*project_spin3(UnitQuaternion::ONE).matrix(), Matrix3::identity());
    }

    #[test]
    fn spin4_of_k_k() {
        let m = project_spin4(SpinPair::new(UnitQuaternion::K, UnitQuaternion::K));
        let expected = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, 1.0));
        assert!((m.matrix() - expected).amax() < 1e-15);
        assert_eq!(*project_spin4(SpinPair::IDENTITY).matrix(), Matrix4::identity());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(quat_exp(Quaternion::ZERO), UnitQuaternion::ONE);
        let k = quat_exp(Quaternion::pure(0.0, 0.0, PI / 2.0));
        assert!(k.distance(UnitQuaternion::K) < 1e-15);
        let m1 = quat_exp(Quaternion::pure(PI, 0.0, 0.0));
        assert!(m1.distance(-UnitQuaternion::ONE) < 1e-15);
    }

    #[test]
    fn bilinear_basis_is_orthogonal() {
        for a in 0..16 {
            let ba = bilinear_image(Quaternion::basis(a / 4), Quaternion::basis(a % 4));
            for b in 0..16 {
                let bb = bilinear_image(Quaternion::basis(b / 4), Quaternion::basis(b % 4));
                let ip = ba.component_mul(&bb).sum();
                let expected = if a == b { 4.0 } else { 0.0 };
                assert_eq!(ip, expected, "pair ({a}, {b})");
            }
        }
    }

    #[test]
    fn unit_quaternion_rejects_non_unit() {
        assert!(UnitQuaternion::new(q(1.0, 1e-5, 0.0, 0.0)).is_err());
        assert!(UnitQuaternion::new(q(0.6, 0.8, 0.0, 0.0)).is_ok());
    }

    #[test]
    fn preimages_near_identity_and_half_turns() {
        for z in [
            UnitQuaternion::ONE,
            UnitQuaternion::I,
            UnitQuaternion::J,
            UnitQuaternion::K,
            UnitQuaternion::new_normalize(q(1e-9, 1.0, 1.0, 0.0)),
        ] {
            let w = spin3_preimage(&project_spin3(z));
            assert!(w.dot(z).abs() > 1.0 - 1e-12);
            for zr in [UnitQuaternion::ONE, UnitQuaternion::K, z] {
                let p = SpinPair::new(z, zr);
                let r = spin4_preimage(&project_spin4(p));
                assert!(r.distance(p).min(r.distance(-p)) < 1e-12);
            }
        }
    }

    #[test]
    fn lift_constant_path() {
        let frames = vec![Rotation3::identity(); 10];
        let lift = lift_path_spin3(&frames, UnitQuaternion::ONE).unwrap();
        assert!(lift.iter().all(|z| *z == UnitQuaternion::ONE));
        let frames4 = vec![Rotation4::identity(); 10];
        let lift4 = lift_path_spin4(&frames4, SpinPair::IDENTITY).unwrap();
        assert!(lift4.iter().all(|z| *z == SpinPair::IDENTITY));
    }

    fn rot_e3(theta: f64) -> Rotation3 {
        let (s, c) = theta.sin_cos();
        Rotation3::new_unchecked(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    #[test]
    fn full_turn_lifts_to_minus_one() {
        let frames: Vec<_> = (0..=64).map(|i| rot_e3(2.0 * PI * i as f64 / 64.0)).collect();
        let lift = lift_path_spin3(&frames, UnitQuaternion::ONE).unwrap();
        assert!(lift.last().unwrap().distance(-UnitQuaternion::ONE) < 1e-12);
        for w in lift.windows(2) {
            assert!(w[0].distance(w[1]) < 1.0);
        }
        let twice: Vec<_> = (0..=128).map(|i| rot_e3(4.0 * PI * i as f64 / 128.0)).collect();
        let lift = lift_path_spin3(&twice, UnitQuaternion::ONE).unwrap();
        assert!(lift.last().unwrap().distance(UnitQuaternion::ONE) < 1e-12);
    }

    #[test]
    fn lift_rejects_sparse_and_bad_frames() {
        let frames = vec![rot_e3(0.0), rot_e3(1.7)];
        assert!(matches!(
            lift_path_spin3(&frames, UnitQuaternion::ONE),
            Err(Error::Density { .. })
        ));
        let bad = Rotation3::new_unchecked(Matrix3::identity() * 1.1);
        assert!(matches!(
            lift_path_spin3(&[Rotation3::identity(), bad], UnitQuaternion::ONE),
            Err(Error::Cover { index: 1, .. })
        ));
        assert!(matches!(
            lift_path_spin3(&[rot_e3(0.3)], UnitQuaternion::ONE),
            Err(Error::Cover { index: 0, .. })
        ));
    }

    #[test]
    fn rotation_angles() {
        assert!((rotation_angle3(&rot_e3(0.7)) - 0.7).abs() < 1e-12);
        let zl = quat_exp(Quaternion::pure(0.3, 0.0, 0.0));
        let zr = quat_exp(Quaternion::pure(0.0, 0.1, 0.0));
        let angle = rotation_angle4(&project_spin4(SpinPair::new(zl, zr)));
        assert!((angle - 0.4).abs() < 1e-12);
    }

    #[test]
    fn left_right_multiplication_matrices() {
        let w = q(0.1, 0.2, -0.3, 0.4);
        let x = q(-1.0, 0.5, 2.0, 0.25);
        assert!((left_mul_matrix(w) * x.to_vector4() - (w * x).to_vector4()).amax() < 1e-15);
        assert!((right_mul_matrix(w) * x.to_vector4() - (x * w).to_vector4()).amax() < 1e-15);
    }
}
