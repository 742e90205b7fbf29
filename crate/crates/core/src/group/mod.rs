//! The five groups, their elements, tori and torus reductions.

pub mod linalg;
pub mod quaternion;
pub mod reduce;
pub mod torus;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use linalg::{cis, turns, Mat2, Mat3};
pub use quaternion::Quaternion;
pub use reduce::{reduce_to_torus, weyl_reductions, TorusReduction};
pub use torus::{recognize_angle, rotation_vector, rotation_vector_numeric, torus_element, RotationVector};

use crate::exact::ExactError;
use crate::scalar::{lit, Real};

/// Tolerance for the group axioms in tests.
pub const TOL_AXIOM: f64 = 1e-12;
/// Unitarity / torus-membership tolerance for `f64`.
pub const TOL_GROUP: f64 = 1e-9;
/// Distance within which a numeric angle is read as a rational.
pub const TOL_RECOGNITION: f64 = 1e-11;
/// Denominator cap for rational recognition of reduced angles.
pub const RECOGNITION_CAP: u64 = 10_000;
/// Eigenvalue gap below which the scalar branch is taken.
pub const EIGEN_GAP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupId {
    #[serde(rename = "su2")]
    Su2,
    #[serde(rename = "u2")]
    U2,
    #[serde(rename = "so3")]
    So3,
    #[serde(rename = "so3xs1")]
    So3xS1,
    #[serde(rename = "spinc3")]
    SpinC3,
}

impl GroupId {
    pub const ALL: [GroupId; 5] = [GroupId::Su2, GroupId::U2, GroupId::So3, GroupId::So3xS1, GroupId::SpinC3];

    /// Dimension of the maximal torus.
    pub fn arity(self) -> usize {
        match self {
            GroupId::Su2 | GroupId::So3 => 1,
            _ => 2,
        }
    }

    pub fn wire_name(self) -> &'static str {
        match self {
            GroupId::Su2 => "su2",
            GroupId::U2 => "u2",
            GroupId::So3 => "so3",
            GroupId::So3xS1 => "so3xs1",
            GroupId::SpinC3 => "spinc3",
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupId::Su2 => "SU2",
            GroupId::U2 => "U2",
            GroupId::So3 => "SO3",
            GroupId::So3xS1 => "SO3xS1",
            GroupId::SpinC3 => "SpinC3",
        })
    }
}

impl FromStr for GroupId {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let key: String = s.chars().filter(|c| !matches!(c, '_' | '-' | '(' | ')' | ' ')).collect();
        GroupId::ALL
            .into_iter()
            .find(|g| g.wire_name().eq_ignore_ascii_case(&key))
            .ok_or_else(|| GroupError::UnknownGroup(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("group mismatch: expected {expected}, got {got}")]
    Mismatch { expected: GroupId, got: GroupId },
    #[error("arity mismatch: {group} takes {expected} angle(s), got {got}")]
    Arity { group: GroupId, expected: usize, got: usize },
    #[error("element is not in the maximal torus (defect {0:e})")]
    NotInTorus(f64),
    #[error("element is not in the group (defect {0:e})")]
    NotMember(f64),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// An element of one of the five groups.
///
/// SpinC3 elements are classes `[(q, w)]` of `SU(2) × S¹` modulo `±(1, 1)`,
/// stored with `arg w ∈ [0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "group")]
pub enum GroupElement<T> {
    #[serde(rename = "su2")]
    Su2 { quaternion: Quaternion<T> },
    #[serde(rename = "u2")]
    U2 { matrix: Mat2<T> },
    #[serde(rename = "so3")]
    So3 { matrix: Mat3<T> },
    #[serde(rename = "so3xs1")]
    So3xS1 { matrix: Mat3<T>, phase: Complex<T> },
    #[serde(rename = "spinc3")]
    SpinC3 { quaternion: Quaternion<T>, phase: Complex<T> },
}

fn canonical_spinc<T: Real>(q: Quaternion<T>, w: Complex<T>) -> GroupElement<T> {
    if w.im < T::zero() || (w.im == T::zero() && w.re < T::zero()) {
        GroupElement::SpinC3 { quaternion: -q, phase: -w }
    } else {
        GroupElement::SpinC3 { quaternion: q, phase: w }
    }
}

impl<T: Real> GroupElement<T> {
    pub fn su2(q: Quaternion<T>) -> Self {
        GroupElement::Su2 { quaternion: q }
    }

    pub fn u2(m: Mat2<T>) -> Self {
        GroupElement::U2 { matrix: m }
    }

    pub fn so3(r: Mat3<T>) -> Self {
        GroupElement::So3 { matrix: r }
    }

    pub fn so3xs1(r: Mat3<T>, w: Complex<T>) -> Self {
        GroupElement::So3xS1 { matrix: r, phase: w }
    }

    /// The class `[(q, w)]`.
    pub fn spinc3(q: Quaternion<T>, w: Complex<T>) -> Self {
        canonical_spinc(q, w)
    }

    pub fn group(&self) -> GroupId {
        match self {
            GroupElement::Su2 { .. } => GroupId::Su2,
            GroupElement::U2 { .. } => GroupId::U2,
            GroupElement::So3 { .. } => GroupId::So3,
            GroupElement::So3xS1 { .. } => GroupId::So3xS1,
            GroupElement::SpinC3 { .. } => GroupId::SpinC3,
        }
    }

    pub fn identity(g: GroupId) -> Self {
        let one = Complex::new(T::one(), T::zero());
        match g {
            GroupId::Su2 => Self::su2(Quaternion::one()),
            GroupId::U2 => Self::u2(Mat2::identity()),
            GroupId::So3 => Self::so3(Mat3::identity()),
            GroupId::So3xS1 => Self::so3xs1(Mat3::identity(), one),
            GroupId::SpinC3 => Self::spinc3(Quaternion::one(), one),
        }
    }

    pub fn expect_group(&self, g: GroupId) -> Result<(), GroupError> {
        if self.group() == g {
            Ok(())
        } else {
            Err(GroupError::Mismatch { expected: g, got: self.group() })
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, GroupError> {
        use GroupElement::*;
        Ok(match (self, other) {
            (Su2 { quaternion: a }, Su2 { quaternion: b }) => Self::su2(*a * *b),
            (U2 { matrix: a }, U2 { matrix: b }) => Self::u2(*a * *b),
            (So3 { matrix: a }, So3 { matrix: b }) => Self::so3(*a * *b),
            (So3xS1 { matrix: a, phase: x }, So3xS1 { matrix: b, phase: y }) => Self::so3xs1(*a * *b, x * y),
            (SpinC3 { quaternion: a, phase: x }, SpinC3 { quaternion: b, phase: y }) => Self::spinc3(*a * *b, x * y),
            _ => return Err(GroupError::Mismatch { expected: self.group(), got: other.group() }),
        })
    }

    pub fn inverse(&self) -> Self {
        use GroupElement::*;
        match self {
            Su2 { quaternion } => Self::su2(quaternion.conj()),
            U2 { matrix } => Self::u2(matrix.adjoint()),
            So3 { matrix } => Self::so3(matrix.transpose()),
            So3xS1 { matrix, phase } => Self::so3xs1(matrix.transpose(), phase.conj()),
            SpinC3 { quaternion, phase } => Self::spinc3(quaternion.conj(), phase.conj()),
        }
    }

    /// `gᵏ` by repeated squaring.
    pub fn power(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.group());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base).expect("same group");
            }
            base = base.multiply(&base).expect("same group");
            e >>= 1;
        }
        acc
    }

    /// Real coordinates of a faithful embedding; the metric is Euclidean in
    /// these. SpinC3 uses the `±`-invariant product `w·q ∈ ℂ⁴`.
    pub fn embed(&self) -> Vec<T> {
        use GroupElement::*;
        match self {
            Su2 { quaternion } => quaternion.coords().to_vec(),
            U2 { matrix } => matrix.coords().to_vec(),
            So3 { matrix } => matrix.coords().to_vec(),
            So3xS1 { matrix, phase } => {
                let mut v = matrix.coords().to_vec();
                v.extend([phase.re, phase.im]);
                v
            }
            SpinC3 { quaternion, phase } => quaternion
                .coords()
                .iter()
                .flat_map(|x| {
                    let z = *phase * *x;
                    [z.re, z.im]
                })
                .collect(),
        }
    }

    /// Distance in the embedding of [`GroupElement::embed`].
    pub fn dist(&self, other: &Self) -> Result<T, GroupError> {
        other.expect_group(self.group())?;
        let (a, b) = (self.embed(), other.embed());
        Ok(a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc + (*x - *y) * (*x - *y)).sqrt())
    }

    /// How far the stored data is from satisfying the group's defining equations.
    pub fn membership_defect(&self) -> T {
        use GroupElement::*;
        let circle = |w: &Complex<T>| (w.norm() - T::one()).abs();
        match self {
            Su2 { quaternion } => (quaternion.norm_sqr() - T::one()).abs(),
            U2 { matrix } => matrix.unitarity_defect(),
            So3 { matrix } => matrix.orthogonality_defect(),
            So3xS1 { matrix, phase } => matrix.orthogonality_defect() + circle(phase),
            SpinC3 { quaternion, phase } => (quaternion.norm_sqr() - T::one()).abs() + circle(phase),
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let d = self.membership_defect();
        if d.to_f64().map_or(true, |d| d > T::GROUP_TOL) {
            Err(GroupError::NotMember(d.to_f64().unwrap_or(f64::NAN)))
        } else {
            Ok(())
        }
    }

    /// Convert the scalar type.
    pub fn cast<U: Real>(&self) -> GroupElement<U> {
        let c = |x: T| U::from_f64(x.to_f64().unwrap()).unwrap();
        let cz = |z: Complex<T>| Complex::new(c(z.re), c(z.im));
        let cq = |q: Quaternion<T>| Quaternion::new(c(q.a), c(q.b), c(q.c), c(q.d));
        let cm2 = |m: Mat2<T>| Mat2(m.0.map(|r| r.map(cz)));
        let cm3 = |m: Mat3<T>| Mat3(m.0.map(|r| r.map(c)));
        use GroupElement::*;
        match *self {
            Su2 { quaternion } => GroupElement::su2(cq(quaternion)),
            U2 { matrix } => GroupElement::u2(cm2(matrix)),
            So3 { matrix } => GroupElement::so3(cm3(matrix)),
            So3xS1 { matrix, phase } => GroupElement::so3xs1(cm3(matrix), cz(phase)),
            SpinC3 { quaternion, phase } => GroupElement::spinc3(cq(quaternion), cz(phase)),
        }
    }
}

/// `g·u`.
pub fn left_translate<T: Real>(g: &GroupElement<T>, u: &GroupElement<T>) -> Result<GroupElement<T>, GroupError> {
    g.multiply(u)
}

fn normal_quaternion<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Quaternion<T> {
    loop {
        let v: [f64; 4] = [0; 4].map(|_| StandardNormal.sample(rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return Quaternion::new(lit(v[0] / n), lit(v[1] / n), lit(v[2] / n), lit(v[3] / n));
        }
    }
}

fn uniform_phase<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    cis(lit::<T>(rng.gen::<f64>()))
}

/// A Haar-distributed element.
pub fn sample_haar<T: Real, R: Rng + ?Sized>(g: GroupId, rng: &mut R) -> GroupElement<T> {
    let q = normal_quaternion::<T, R>(rng);
    match g {
        GroupId::Su2 => GroupElement::su2(q),
        GroupId::U2 => GroupElement::u2(q.to_su2().scale(uniform_phase(rng))),
        GroupId::So3 => GroupElement::so3(q.rotation()),
        GroupId::So3xS1 => GroupElement::so3xs1(q.rotation(), uniform_phase(rng)),
        GroupId::SpinC3 => GroupElement::spinc3(q, uniform_phase(rng)),
    }
}
