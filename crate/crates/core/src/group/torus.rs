//! Torus parametrisations and rotation vectors.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupError, GroupId, Mat2, Mat3, Quaternion, RECOGNITION_CAP};
use super::linalg::{cis, turns};
use crate::exact::{contfrac, AngleValue, IrrationalBasis};
use crate::scalar::{lit, Real};

/// Exact torus coordinates of an element, one angle per torus dimension.
///
/// SU2: `θ ↦ diag(z, z̄)`. U2: `(θ, φ) ↦ diag(λz, z̄)`. SO3: rotation by `2πθ`
/// about z. SO3xS1: `(θ, φ) ↦ (Rot_z(2πθ), λ)`. SpinC3: `(θ, φ) ↦ [(t(θ + φ/2),
/// e^{πiφ})]` with `t(x) = diag(e^{2πix}, e^{-2πix})`. Throughout
/// `z = e^{2πiθ}`, `λ = e^{2πiφ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationVector {
    pub group: GroupId,
    pub angles: Vec<AngleValue>,
}

impl RotationVector {
    pub fn new(group: GroupId, angles: Vec<AngleValue>) -> Result<Self, GroupError> {
        if angles.len() != group.arity() {
            return Err(GroupError::Arity { group, expected: group.arity(), got: angles.len() });
        }
        Ok(RotationVector { group, angles })
    }

    pub fn theta(&self) -> &AngleValue {
        &self.angles[0]
    }

    /// Second coordinate; zero for one-parameter groups.
    pub fn phi(&self) -> AngleValue {
        self.angles.get(1).cloned().unwrap_or_default()
    }

    pub fn has_anonymous(&self) -> bool {
        self.angles.iter().any(AngleValue::has_anonymous)
    }

    pub fn to_f64(&self, basis: &IrrationalBasis) -> Result<Vec<f64>, GroupError> {
        Ok(self.angles.iter().map(|a| a.to_f64(basis)).collect::<Result<_, _>>()?)
    }
}

/// Exact angle for a numeric one: a rational with denominator at most
/// [`RECOGNITION_CAP`] within [`super::TOL_RECOGNITION`], otherwise an anonymous symbol.
pub fn recognize_angle(x: f64) -> AngleValue {
    match contfrac::recognize_mod1(x, RECOGNITION_CAP, super::TOL_RECOGNITION) {
        Some((p, q)) => AngleValue::ratio(p, q as i64),
        None => AngleValue::anonymous(x),
    }
}

/// Torus element from numeric coordinates.
pub fn torus_from_numeric<T: Real>(g: GroupId, x: &[T]) -> GroupElement<T> {
    match g {
        GroupId::Su2 => GroupElement::su2(Quaternion::torus(x[0])),
        GroupId::U2 => GroupElement::u2(Mat2::diag(cis(x[0] + x[1]), cis(-x[0]))),
        GroupId::So3 => GroupElement::so3(Mat3::rot_z(x[0])),
        GroupId::So3xS1 => GroupElement::so3xs1(Mat3::rot_z(x[0]), cis(x[1])),
        GroupId::SpinC3 => {
            let half = lit::<T>(0.5);
            let q = Quaternion::torus(x[0] + x[1] * half);
            let w = cis(x[1] * half);
            GroupElement::spinc3(q, w)
        }
    }
}

/// The torus element with rotation vector `rho`.
pub fn torus_element<T: Real>(rho: &RotationVector, basis: &IrrationalBasis) -> Result<GroupElement<T>, GroupError> {
    let x: Vec<T> = rho.to_f64(basis)?.into_iter().map(lit).collect();
    Ok(torus_from_numeric(rho.group, &x))
}

fn torus_check<T: Real>(defect: T) -> Result<(), GroupError> {
    let d = defect.to_f64().unwrap_or(f64::NAN);
    if d.is_nan() || d > T::GROUP_TOL {
        Err(GroupError::NotInTorus(d))
    } else {
        Ok(())
    }
}

/// Numeric torus coordinates in `[0, 1)` of a torus element.
pub fn rotation_vector_numeric<T: Real>(t: &GroupElement<T>) -> Result<Vec<T>, GroupError> {
    use GroupElement::*;
    let circle_angle = |a: T, d: T| turns(Complex::new(a, d));
    Ok(match t {
        Su2 { quaternion: q } => {
            torus_check(q.b.abs() + q.c.abs())?;
            vec![circle_angle(q.a, q.d)]
        }
        U2 { matrix } => {
            let m = &matrix.0;
            torus_check(m[0][1].norm() + m[1][0].norm())?;
            vec![turns(m[1][1].conj()), turns(m[0][0] * m[1][1])]
        }
        So3 { matrix } => {
            torus_check(so3_torus_defect(matrix))?;
            vec![circle_angle(matrix.0[0][0], matrix.0[1][0])]
        }
        So3xS1 { matrix, phase } => {
            torus_check(so3_torus_defect(matrix))?;
            vec![circle_angle(matrix.0[0][0], matrix.0[1][0]), turns(*phase)]
        }
        SpinC3 { quaternion: q, phase } => {
            torus_check(q.b.abs() + q.c.abs())?;
            let th = circle_angle(q.a, q.d);
            let ph = turns(*phase);
            let wrap = |x: T| {
                let y = x - x.floor();
                if y >= T::one() {
                    T::zero()
                } else {
                    y
                }
            };
            vec![wrap(th - ph), wrap(ph + ph)]
        }
    })
}

fn so3_torus_defect<T: Real>(r: &Mat3<T>) -> T {
    let m = &r.0;
    m[0][2].abs() + m[1][2].abs() + m[2][0].abs() + m[2][1].abs() + (m[2][2] - T::one()).abs()
}

/// Rotation vector of a torus element, with rational recognition.
pub fn rotation_vector<T: Real>(t: &GroupElement<T>) -> Result<RotationVector, GroupError> {
    let x = rotation_vector_numeric(t)?;
    RotationVector::new(t.group(), x.into_iter().map(|v| recognize_angle(v.to_f64().unwrap())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::angle::rat;

    fn rv(g: GroupId, a: Vec<AngleValue>) -> RotationVector {
        RotationVector::new(g, a).unwrap()
    }

    #[test]
    fn su2_quarter_turn() {
        let b = IrrationalBasis::default();
        let t: GroupElement<f64> = torus_element(&rv(GroupId::Su2, vec![AngleValue::ratio(1, 4)]), &b).unwrap();
        let GroupElement::Su2 { quaternion } = t else { panic!() };
        let m = quaternion.to_su2();
        let expect = Mat2::diag(Complex::new(0.0, 1.0), Complex::new(0.0, -1.0));
        assert!(m.dist(&expect) < 1e-15);
    }

    #[test]
    fn round_trip_recognises_rationals() {
        let b = IrrationalBasis::default();
        for g in GroupId::ALL {
            let angles: Vec<_> = [AngleValue::ratio(1, 3), AngleValue::ratio(1, 5)][..g.arity()].to_vec();
            let rho = rv(g, angles);
            let t: GroupElement<f64> = torus_element(&rho, &b).unwrap();
            assert_eq!(rotation_vector(&t).unwrap(), rho, "{g}");
        }
    }

    #[test]
    fn symbolic_round_trip_is_numeric() {
        let b = IrrationalBasis::standard();
        let a = AngleValue::symbol("alpha", rat(1, 1));
        let rho = rv(GroupId::SpinC3, vec![&AngleValue::ratio(1, 4) + &a, a.scale_int(3)]);
        let t: GroupElement<f64> = torus_element(&rho, &b).unwrap();
        let x = rotation_vector_numeric(&t).unwrap();
        let want = rho.to_f64(&b).unwrap();
        for (u, v) in x.iter().zip(want.iter()) {
            let d = (u - v).rem_euclid(1.0);
            assert!(d.min(1.0 - d) < 1e-12);
        }
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(
            RotationVector::new(GroupId::U2, vec![AngleValue::zero()]),
            Err(GroupError::Arity { expected: 2, got: 1, .. })
        ));
    }

    #[test]
    fn off_torus_is_rejected() {
        let q = Quaternion::new(0.6, 0.8, 0.0, 0.0);
        assert!(matches!(rotation_vector(&GroupElement::su2(q)), Err(GroupError::NotInTorus(_))));
    }
}
