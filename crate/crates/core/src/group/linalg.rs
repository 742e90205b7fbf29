//! Small fixed-size matrices.

use std::ops::Mul;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::{tau, Real};

/// 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2<T>(pub [[Complex<T>; 2]; 2]);

/// 3×3 real matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

/// `e^{2πix}`.
pub fn cis<T: Real>(x: T) -> Complex<T> {
    let t = tau::<T>() * x;
    Complex::new(t.cos(), t.sin())
}

/// `arg(z) / 2π` in `[0, 1)`.
pub fn turns<T: Real>(z: Complex<T>) -> T {
    let t = z.im.atan2(z.re) / tau::<T>();
    if t < T::zero() {
        let u = t + T::one();
        if u >= T::one() {
            T::zero()
        } else {
            u
        }
    } else {
        t
    }
}

impl<T: Real> Mat2<T> {
    pub fn identity() -> Self {
        Self::diag(Complex::new(T::one(), T::zero()), Complex::new(T::one(), T::zero()))
    }

    pub fn diag(x: Complex<T>, y: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Mat2([[x, z], [z, y]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> Complex<T> {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex<T> {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * z, m[0][1] * z], [m[1][0] * z, m[1][1] * z]])
    }

    pub fn coords(&self) -> [T; 8] {
        let m = &self.0;
        [m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re, m[1][1].im]
    }

    pub fn dist(&self, other: &Self) -> T {
        let (a, b) = (self.coords(), other.coords());
        a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc + (*x - *y) * (*x - *y)).sqrt()
    }

    /// `‖U*U - I‖`.
    pub fn unitarity_defect(&self) -> T {
        (self.adjoint() * *self).dist(&Self::identity())
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl<T: Real> Mat3<T> {
    pub fn identity() -> Self {
        Self::diag([T::one(); 3])
    }

    pub fn diag(d: [T; 3]) -> Self {
        let z = T::zero();
        Mat3([[d[0], z, z], [z, d[1], z], [z, z, d[2]]])
    }

    /// Rotation by `2πθ` about the z-axis.
    pub fn rot_z(theta: T) -> Self {
        let w = cis(theta);
        let (z, o) = (T::zero(), T::one());
        Mat3([[w.re, -w.im, z], [w.im, w.re, z], [z, z, o]])
    }

    pub fn from_rows(r: [[T; 3]; 3]) -> Self {
        Mat3(r)
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = m[j][i];
            }
        }
        Mat3(out)
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn apply(&self, v: [T; 3]) -> [T; 3] {
        let m = &self.0;
        [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
    }

    pub fn coords(&self) -> [T; 9] {
        let m = &self.0;
        [m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2]]
    }

    pub fn dist(&self, other: &Self) -> T {
        let (a, b) = (self.coords(), other.coords());
        a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc + (*x - *y) * (*x - *y)).sqrt()
    }

    /// `‖RᵀR - I‖ + |det R - 1|`.
    pub fn orthogonality_defect(&self) -> T {
        (self.transpose() * *self).dist(&Self::identity()) + (self.det() - T::one()).abs()
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Mat3(out)
    }
}

pub(crate) fn cross<T: Real>(u: [T; 3], v: [T; 3]) -> [T; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

pub(crate) fn dot<T: Real>(u: [T; 3], v: [T; 3]) -> T {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub(crate) fn unit<T: Real>(u: [T; 3]) -> [T; 3] {
    let n = dot(u, u).sqrt();
    u.map(|x| x / n)
}
