use std::ops::{Mul, Neg};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::linalg::{Mat2, Mat3};
use crate::scalar::{lit, tau, Real};

/// `a + b·i + c·j + d·k` with the Hamilton product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quaternion<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    /// `cos 2πθ + sin 2πθ·k`.
    pub fn torus(theta: T) -> Self {
        let x = tau::<T>() * theta;
        Self::new(x.cos(), T::zero(), T::zero(), x.sin())
    }

    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> T {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn normalize(self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self::new(self.a / n, self.b / n, self.c / n, self.d / n)
    }

    pub fn coords(self) -> [T; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn vector(self) -> [T; 3] {
        [self.b, self.c, self.d]
    }

    pub fn dist(self, other: Self) -> T {
        (self + -other).norm_sqr().sqrt()
    }

    /// SU(2) matrix `[[a+di, b+ci], [-b+ci, a-di]]`, a homomorphism for the
    /// Hamilton product with `k ↦ diag(i, -i)`.
    pub fn to_su2(self) -> Mat2<T> {
        Mat2([
            [Complex::new(self.a, self.d), Complex::new(self.b, self.c)],
            [Complex::new(-self.b, self.c), Complex::new(self.a, -self.d)],
        ])
    }

    /// Inverse of [`Quaternion::to_su2`], reading the first row.
    pub fn from_su2(m: &Mat2<T>) -> Self {
        let [[p, q], _] = m.0;
        Self::new(p.re, q.re, q.im, p.im)
    }

    /// Rotation `p ↦ r p r⁻¹` of the pure quaternions.
    pub fn rotation(self) -> Mat3<T> {
        let Quaternion { a, b, c, d } = self;
        let two = lit::<T>(2.0);
        Mat3([
            [a * a + b * b - c * c - d * d, two * (b * c - a * d), two * (a * c + b * d)],
            [two * (b * c + a * d), a * a - b * b + c * c - d * d, two * (c * d - a * b)],
            [two * (b * d - a * c), two * (a * b + c * d), a * a - b * b - c * c + d * d],
        ])
    }

    /// Unit quaternion whose rotation sends the unit vector `n` to `e_z`.
    pub fn aligning(n: [T; 3]) -> Self {
        if n[2] >= T::zero() {
            Self::new(T::one() + n[2], n[1], -n[0], T::zero()).normalize()
        } else {
            // First rotate by π about x, which sends n to (n_x, -n_y, -n_z).
            Self::aligning([n[0], -n[1], -n[2]]) * Self::i()
        }
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Quaternion {
            a: self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            b: self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            c: self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            d: self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        }
    }
}

impl<T: Real> std::ops::Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }
}
