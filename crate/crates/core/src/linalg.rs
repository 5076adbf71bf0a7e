//! Fixed-size 4-dimensional vectors and matrices.
//!
//! Points are column vectors in the vertex basis `a_0..a_3`; plane forms are
//! row vectors in the dual basis `b^0..b^3`, so incidence is the plain
//! contraction `x · u`. Matrices are row-major.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec4<T>(pub [T; 4]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4<T>(pub [[T; 4]; 4]);

impl<T: Real> Vec4<T> {
    pub fn zero() -> Self {
        Vec4([T::zero(); 4])
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = T::one();
        v
    }

    pub fn from_f64(x: [f64; 4]) -> Self {
        Vec4(x.map(T::lit))
    }

    /// Plain contraction `Σ x_i y_i` (point against form).
    pub fn dot(&self, other: &Self) -> T {
        (0..4).fold(T::zero(), |acc, i| acc + self.0[i] * other.0[i])
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn scale(&self, s: T) -> Self {
        Vec4(self.0.map(|x| x * s))
    }

    /// Rescales so that the largest-magnitude entry has absolute value one,
    /// keeping the sign pattern (positive-ray identification).
    pub fn max_normalized(&self) -> Self {
        let m = self.max_abs();
        if m == T::zero() {
            *self
        } else {
            self.scale(m.recip())
        }
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.0.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }
}

impl<T: Real> Index<usize> for Vec4<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Real> IndexMut<usize> for Vec4<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Real> Add for Vec4<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl<T: Real> Sub for Vec4<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl<T: Real> Neg for Vec4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec4(self.0.map(|x| -x))
    }
}

impl<T: Real> Mul<T> for Vec4<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// Vector orthogonal (under plain contraction) to the three given vectors:
/// the signed 3×3 minors of the stacked rows.
pub fn cross3<T: Real>(r0: &Vec4<T>, r1: &Vec4<T>, r2: &Vec4<T>) -> Vec4<T> {
    let det3 = |c: [usize; 3]| {
        let m = |r: &Vec4<T>, k: usize| r.0[c[k]];
        m(r0, 0) * (m(r1, 1) * m(r2, 2) - m(r1, 2) * m(r2, 1))
            - m(r0, 1) * (m(r1, 0) * m(r2, 2) - m(r1, 2) * m(r2, 0))
            + m(r0, 2) * (m(r1, 0) * m(r2, 1) - m(r1, 1) * m(r2, 0))
    };
    Vec4([
        det3([1, 2, 3]),
        -det3([0, 2, 3]),
        det3([0, 1, 3]),
        -det3([0, 1, 2]),
    ])
}

impl<T: Real> Mat4<T> {
    pub fn zero() -> Self {
        Mat4([[T::zero(); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: [Vec4<T>; 4]) -> Self {
        Mat4(rows.map(|r| r.0))
    }

    pub fn from_cols(cols: [Vec4<T>; 4]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn row(&self, i: usize) -> Vec4<T> {
        Vec4(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec4<T> {
        Vec4(std::array::from_fn(|i| self.0[i][j]))
    }

    pub fn transpose(&self) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    /// Outer product `x yᵀ`.
    pub fn outer(x: &Vec4<T>, y: &Vec4<T>) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| x.0[i] * y.0[j])))
    }

    pub fn scale(&self, s: T) -> Self {
        Mat4(self.0.map(|r| r.map(|x| x * s)))
    }

    pub fn trace(&self) -> T {
        (0..4).fold(T::zero(), |acc, i| acc + self.0[i][i])
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Position of the largest-magnitude entry (first in row-major order on ties).
    pub fn argmax_abs(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for i in 0..4 {
            for j in 0..4 {
                if self.0[i][j].abs() > self.0[best.0][best.1].abs() {
                    best = (i, j);
                }
            }
        }
        best
    }

    /// Row vector times matrix: `u M`.
    pub fn left_mul(&self, u: &Vec4<T>) -> Vec4<T> {
        Vec4(std::array::from_fn(|j| {
            (0..4).fold(T::zero(), |acc, i| acc + u.0[i] * self.0[i][j])
        }))
    }

    /// Bilinear form `xᵀ M y`.
    pub fn form(&self, x: &Vec4<T>, y: &Vec4<T>) -> T {
        x.dot(&(*self * *y))
    }

    /// LU decomposition with partial pivoting; returns the determinant.
    pub fn det(&self) -> T {
        let mut m = self.0;
        let mut det = T::one();
        for c in 0..4 {
            let p = (c..4)
                .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap())
                .unwrap();
            if m[p][c] == T::zero() {
                return T::zero();
            }
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det = det * m[c][c];
            for r in (c + 1)..4 {
                let f = m[r][c] / m[c][c];
                for k in c..4 {
                    m[r][k] = m[r][k] - f * m[c][k];
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse with partial pivoting; `None` when a pivot vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let mut m = self.0;
        let mut inv = Self::identity().0;
        for c in 0..4 {
            let p = (c..4)
                .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap())
                .unwrap();
            if m[p][c] == T::zero() {
                return None;
            }
            m.swap(p, c);
            inv.swap(p, c);
            let d = m[c][c].recip();
            for k in 0..4 {
                m[c][k] = m[c][k] * d;
                inv[c][k] = inv[c][k] * d;
            }
            for r in 0..4 {
                if r != c {
                    let f = m[r][c];
                    if f != T::zero() {
                        for k in 0..4 {
                            m[r][k] = m[r][k] - f * m[c][k];
                            inv[r][k] = inv[r][k] - f * inv[c][k];
                        }
                    }
                }
            }
        }
        Some(Mat4(inv))
    }

    /// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
    /// Returns eigenvalues and the matrix whose columns are the eigenvectors.
    pub fn symmetric_eigen(&self) -> ([T; 4], Self) {
        let mut a = self.0;
        let mut v = Self::identity().0;
        let eps = T::epsilon();
        for _sweep in 0..64 {
            let off = (0..4)
                .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                .fold(T::zero(), |s, (i, j)| s + a[i][j] * a[i][j]);
            let diag = (0..4).fold(T::zero(), |s, i| s + a[i][i] * a[i][i]);
            if off <= eps * eps * diag.max(T::min_positive_value()) {
                break;
            }
            for p in 0..4 {
                for q in (p + 1)..4 {
                    if a[p][q] == T::zero() {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (T::two() * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = (t * t + T::one()).sqrt().recip();
                    let s = t * c;
                    for k in 0..4 {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..4 {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                    for row in v.iter_mut() {
                        let vkp = row[p];
                        let vkq = row[q];
                        row[p] = c * vkp - s * vkq;
                        row[q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        (std::array::from_fn(|i| a[i][i]), Mat4(v))
    }
}

impl<T: Real> Index<(usize, usize)> for Mat4<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Mat4<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T: Real> Mul for Mat4<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Mat4(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).fold(T::zero(), |acc, k| acc + self.0[i][k] * o.0[k][j]))
        }))
    }
}

impl<T: Real> Mul<Vec4<T>> for Mat4<T> {
    type Output = Vec4<T>;
    fn mul(self, x: Vec4<T>) -> Vec4<T> {
        Vec4(std::array::from_fn(|i| self.row(i).dot(&x)))
    }
}

impl<T: Real> Add for Mat4<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + o.0[i][j])))
    }
}

impl<T: Real> Sub for Mat4<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - o.0[i][j])))
    }
}
