//! Finite coverings between the groups.
//!
//! The coverings out of U2 are written through the splitting
//! `u ↦ (diag(μ̄, 1)·u, μ)` with `μ = det u`, a homeomorphism `U(2) → SU(2) × S¹`
//! that intertwines left translation by torus elements. They are
//! homomorphisms for the product law transported along it
//! ([`Covering::upstairs_product`]), which agrees with matrix multiplication
//! whenever the left factor is diagonal.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::lattice_multiplier;
use crate::exact::{decide_circle, solve_affine_lattice, AngleValue, ExactError};
use crate::exact::angle::rat;
use crate::group::{cis, sample_haar, turns, GroupElement, GroupError, GroupId, Mat2, Mat3, Quaternion, RotationVector};
use crate::scalar::{lit, Real};
use crate::verdict::Status;
use crate::witness::{apply_witness, Witness, WitnessError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Covering {
    Su2ToSo3,
    U2ToSo3xS1,
    U2ToSpinC3,
    U2SelfCover(u32),
    SpinC3ToSo3xS1,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoveringError {
    #[error("unknown covering `{0}`")]
    Unknown(String),
    #[error("self-cover degree must be at least 2")]
    BadDegree,
    #[error("upstairs map does not preserve the deck group: {0}")]
    DeckNotPreserved(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Witness(#[from] Box<WitnessError>),
}

impl From<WitnessError> for CoveringError {
    fn from(e: WitnessError) -> Self {
        CoveringError::Witness(Box::new(e))
    }
}

impl fmt::Display for Covering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Covering::Su2ToSo3 => f.write_str("SU2_to_SO3"),
            Covering::U2ToSo3xS1 => f.write_str("U2_to_SO3xS1"),
            Covering::U2ToSpinC3 => f.write_str("U2_to_SpinC3"),
            Covering::U2SelfCover(p) => write!(f, "U2_selfcover({p})"),
            Covering::SpinC3ToSo3xS1 => f.write_str("SpinC3_to_SO3xS1"),
        }
    }
}

impl FromStr for Covering {
    type Err = CoveringError;
    fn from_str(s: &str) -> Result<Self, CoveringError> {
        let key: String = s.to_ascii_lowercase().chars().filter(|c| !matches!(c, '_' | '-' | ' ')).collect();
        let fixed = [
            ("su2toso3", Covering::Su2ToSo3),
            ("su2so3", Covering::Su2ToSo3),
            ("u2toso3xs1", Covering::U2ToSo3xS1),
            ("u2so3xs1", Covering::U2ToSo3xS1),
            ("u2tospinc3", Covering::U2ToSpinC3),
            ("u2spinc3", Covering::U2ToSpinC3),
            ("spinc3toso3xs1", Covering::SpinC3ToSo3xS1),
            ("spinc3so3xs1", Covering::SpinC3ToSo3xS1),
        ];
        if let Some((_, c)) = fixed.iter().find(|(k, _)| *k == key) {
            return Ok(*c);
        }
        let rest = key
            .strip_prefix("u2selfcover")
            .ok_or_else(|| CoveringError::Unknown(s.to_string()))?;
        let digits = rest.trim_start_matches(['(', ':', '=']).trim_end_matches(')');
        let p: u32 = digits.parse().map_err(|_| CoveringError::Unknown(s.to_string()))?;
        if p < 2 {
            return Err(CoveringError::BadDegree);
        }
        Ok(Covering::U2SelfCover(p))
    }
}

impl Serialize for Covering {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Covering {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `u ↦ (diag(μ̄, 1)·u, μ)`.
pub fn split<T: Real>(u: &Mat2<T>) -> (Quaternion<T>, Complex<T>) {
    let mu = u.det();
    let mu = mu / mu.norm();
    let one = Complex::new(T::one(), T::zero());
    let v = Mat2::diag(mu.conj(), one) * *u;
    (Quaternion::from_su2(&v).normalize(), mu)
}

/// Inverse of [`split`].
pub fn unsplit<T: Real>(v: Quaternion<T>, mu: Complex<T>) -> Mat2<T> {
    Mat2::diag(mu, Complex::new(T::one(), T::zero())) * v.to_su2()
}

/// Unit quaternion with rotation `r` (one of the two).
pub fn quaternion_from_rotation<T: Real>(r: &Mat3<T>) -> Quaternion<T> {
    let m = &r.0;
    let (one, four) = (T::one(), lit::<T>(4.0));
    let tr = r.trace();
    let q = if tr > T::zero() {
        let s = (tr + one).sqrt() * lit(2.0);
        Quaternion::new(s / four, (m[2][1] - m[1][2]) / s, (m[0][2] - m[2][0]) / s, (m[1][0] - m[0][1]) / s)
    } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
        let s = (one + m[0][0] - m[1][1] - m[2][2]).sqrt() * lit(2.0);
        Quaternion::new((m[2][1] - m[1][2]) / s, s / four, (m[0][1] + m[1][0]) / s, (m[0][2] + m[2][0]) / s)
    } else if m[1][1] > m[2][2] {
        let s = (one + m[1][1] - m[0][0] - m[2][2]).sqrt() * lit(2.0);
        Quaternion::new((m[0][2] - m[2][0]) / s, (m[0][1] + m[1][0]) / s, s / four, (m[1][2] + m[2][1]) / s)
    } else {
        let s = (one + m[2][2] - m[0][0] - m[1][1]).sqrt() * lit(2.0);
        Quaternion::new((m[1][0] - m[0][1]) / s, (m[0][2] + m[2][0]) / s, (m[1][2] + m[2][1]) / s, s / four)
    };
    q.normalize()
}

fn root<T: Real>(w: Complex<T>, p: u32) -> Complex<T> {
    cis(turns(w) / lit::<T>(p as f64))
}

fn as_u2<T: Real>(x: &GroupElement<T>) -> Result<&Mat2<T>, GroupError> {
    match x {
        GroupElement::U2 { matrix } => Ok(matrix),
        other => Err(GroupError::Mismatch { expected: GroupId::U2, got: other.group() }),
    }
}

impl Covering {
    pub const FIXED: [Covering; 4] =
        [Covering::Su2ToSo3, Covering::U2ToSo3xS1, Covering::U2ToSpinC3, Covering::SpinC3ToSo3xS1];

    /// Covering group.
    pub fn cover(self) -> GroupId {
        match self {
            Covering::Su2ToSo3 => GroupId::Su2,
            Covering::U2ToSo3xS1 | Covering::U2ToSpinC3 | Covering::U2SelfCover(_) => GroupId::U2,
            Covering::SpinC3ToSo3xS1 => GroupId::SpinC3,
        }
    }

    /// Covered group.
    pub fn base(self) -> GroupId {
        match self {
            Covering::Su2ToSo3 => GroupId::So3,
            Covering::U2ToSo3xS1 | Covering::SpinC3ToSo3xS1 => GroupId::So3xS1,
            Covering::U2ToSpinC3 => GroupId::SpinC3,
            Covering::U2SelfCover(_) => GroupId::U2,
        }
    }

    pub fn degree(self) -> u32 {
        match self {
            Covering::U2SelfCover(p) => p,
            _ => 2,
        }
    }

    /// Induced map of torus coordinates.
    pub fn torus_matrix(self) -> Vec<Vec<i64>> {
        match self {
            Covering::Su2ToSo3 => vec![vec![2]],
            Covering::U2ToSo3xS1 => vec![vec![2, 0], vec![0, 1]],
            Covering::U2ToSpinC3 => vec![vec![1, -1], vec![0, 2]],
            Covering::U2SelfCover(p) => vec![vec![1, 0], vec![0, p as i64]],
            Covering::SpinC3ToSo3xS1 => vec![vec![2, 1], vec![0, 1]],
        }
    }

    /// Extra multiplier of `n` for upstairs conjugacies that descend.
    pub fn deck_multiplier(self) -> i64 {
        match self {
            Covering::U2ToSpinC3 => 2,
            Covering::U2SelfCover(p) => p as i64,
            _ => 1,
        }
    }

    fn splits(self) -> bool {
        self.cover() == GroupId::U2
    }

    pub fn project<T: Real>(self, x: &GroupElement<T>) -> Result<GroupElement<T>, CoveringError> {
        x.expect_group(self.cover())?;
        Ok(match (self, x) {
            (Covering::Su2ToSo3, GroupElement::Su2 { quaternion }) => GroupElement::so3(quaternion.rotation()),
            (Covering::SpinC3ToSo3xS1, GroupElement::SpinC3 { quaternion, phase }) => {
                GroupElement::so3xs1(quaternion.rotation(), phase * phase)
            }
            (_, GroupElement::U2 { matrix }) => {
                let (v, mu) = split(matrix);
                match self {
                    Covering::U2ToSo3xS1 => GroupElement::so3xs1(v.rotation(), mu),
                    Covering::U2ToSpinC3 => GroupElement::spinc3(v, mu),
                    Covering::U2SelfCover(p) => GroupElement::u2(unsplit(v, mu.powi(p as i32))),
                    _ => unreachable!(),
                }
            }
            _ => unreachable!(),
        })
    }

    /// One preimage of `y`.
    pub fn section<T: Real>(self, y: &GroupElement<T>) -> Result<GroupElement<T>, CoveringError> {
        y.expect_group(self.base())?;
        Ok(match (self, y) {
            (Covering::Su2ToSo3, GroupElement::So3 { matrix }) => GroupElement::su2(quaternion_from_rotation(matrix)),
            (Covering::U2ToSo3xS1, GroupElement::So3xS1 { matrix, phase }) => {
                GroupElement::u2(unsplit(quaternion_from_rotation(matrix), *phase))
            }
            (Covering::SpinC3ToSo3xS1, GroupElement::So3xS1 { matrix, phase }) => {
                GroupElement::spinc3(quaternion_from_rotation(matrix), root(*phase, 2))
            }
            (Covering::U2ToSpinC3, GroupElement::SpinC3 { quaternion, phase }) => {
                GroupElement::u2(unsplit(*quaternion, *phase))
            }
            (Covering::U2SelfCover(p), GroupElement::U2 { matrix }) => {
                let (v, mu) = split(matrix);
                GroupElement::u2(unsplit(v, root(mu, p)))
            }
            _ => unreachable!(),
        })
    }

    /// The deck group, as elements of the covering group acting by left
    /// multiplication.
    pub fn deck_elements<T: Real>(self) -> Vec<GroupElement<T>> {
        let one = Complex::new(T::one(), T::zero());
        match self {
            Covering::Su2ToSo3 => vec![GroupElement::su2(Quaternion::one()), GroupElement::su2(-Quaternion::one())],
            Covering::U2ToSo3xS1 => vec![GroupElement::u2(Mat2::identity()), GroupElement::u2(Mat2::identity().scale(-one))],
            Covering::U2ToSpinC3 => vec![GroupElement::u2(Mat2::identity()), GroupElement::u2(Mat2::diag(one, -one))],
            Covering::U2SelfCover(p) => (0..p)
                .map(|j| GroupElement::u2(Mat2::diag(cis(lit::<T>(j as f64 / p as f64)), one)))
                .collect(),
            Covering::SpinC3ToSo3xS1 => vec![
                GroupElement::spinc3(Quaternion::one(), one),
                GroupElement::spinc3(Quaternion::one(), -one),
            ],
        }
    }

    /// Group law of the covering group for which [`Covering::project`] is a
    /// homomorphism.
    pub fn upstairs_product<T: Real>(self, a: &GroupElement<T>, b: &GroupElement<T>) -> Result<GroupElement<T>, CoveringError> {
        if !self.splits() {
            return Ok(a.multiply(b)?);
        }
        let (va, ma) = split(as_u2(a)?);
        let (vb, mb) = split(as_u2(b)?);
        Ok(GroupElement::u2(unsplit(va * vb, ma * mb)))
    }

    /// Group law on the base matching [`Covering::upstairs_product`]: the
    /// split law when the base is U2.
    pub fn base_product<T: Real>(self, a: &GroupElement<T>, b: &GroupElement<T>) -> Result<GroupElement<T>, CoveringError> {
        if self.base() != GroupId::U2 {
            return Ok(a.multiply(b)?);
        }
        Covering::U2SelfCover(2).upstairs_product(a, b)
    }

    /// All rotation vectors upstairs that map to `rho`.
    pub fn lift_rotation_vectors(self, rho: &RotationVector) -> Result<Vec<RotationVector>, CoveringError> {
        if rho.group != self.base() {
            return Err(GroupError::Mismatch { expected: self.base(), got: rho.group }.into());
        }
        let half = rat(1, 2);
        let (th, ph) = (rho.theta(), rho.phi());
        let up = self.cover();
        let shift = AngleValue::ratio(1, 2);
        let out = match self {
            Covering::Su2ToSo3 => {
                let l = th.scale(&half);
                vec![vec![l.clone()], vec![&l + &shift]]
            }
            Covering::U2ToSo3xS1 => {
                let l = th.scale(&half);
                vec![vec![l.clone(), ph.clone()], vec![&l + &shift, ph]]
            }
            Covering::U2ToSpinC3 => {
                let hp = ph.scale(&half);
                let l = th + &hp;
                vec![vec![l.clone(), hp.clone()], vec![&l + &shift, &hp + &shift]]
            }
            Covering::U2SelfCover(p) => {
                let base = ph.scale(&rat(1, p as i64));
                (0..p as i64).map(|j| vec![th.clone(), &base + &AngleValue::ratio(j, p as i64)]).collect()
            }
            Covering::SpinC3ToSo3xS1 => {
                let l = (th - &ph).scale(&half);
                vec![vec![l.clone(), ph.clone()], vec![&l + &shift, ph]]
            }
        };
        Ok(out.into_iter().map(|angles| RotationVector { group: up, angles }).collect())
    }

    /// Image of upstairs torus coordinates.
    pub fn pushforward(self, rho: &RotationVector) -> Result<RotationVector, CoveringError> {
        rho.expect_group(self.cover())?;
        Ok(pushforward(rho, &self.torus_matrix(), self.base()))
    }

    /// Whether some lift of `rho'` is conjugate upstairs to the first lift of
    /// `rho` through an upstairs conjugacy that descends.
    pub fn check_lift_correspondence(self, rho: &RotationVector, rho_prime: &RotationVector) -> Result<bool, CoveringError> {
        let l = self.lift_rotation_vectors(rho)?.swap_remove(0);
        for lp in self.lift_rotation_vectors(rho_prime)? {
            if upstairs_conjugate(self, &l, &lp)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Descend an upstairs conjugacy to the base, refusing maps that do not
    /// preserve the deck group.
    pub fn descend_map<T: Real>(self, upstairs: &Witness<T>) -> Result<Witness<T>, CoveringError> {
        if upstairs.group() != self.cover() {
            return Err(GroupError::Mismatch { expected: self.cover(), got: upstairs.group() }.into());
        }
        let deck = self.deck_elements::<T>();
        let tol = T::GROUP_TOL;
        for g in &deck {
            let img = apply_witness(upstairs, g)?;
            let hit = deck.iter().any(|d| d.dist(&img).map_or(false, |x| x.to_f64().unwrap() < tol));
            if !hit {
                return Err(CoveringError::DeckNotPreserved(format!("image of a deck element is not a deck element")));
            }
        }
        // Fibres must map to fibres.
        let mut rng = ChaCha8Rng::seed_from_u64(0xDEC4);
        for _ in 0..16 {
            let x: GroupElement<T> = sample_haar(self.cover(), &mut rng);
            let base = self.project(&apply_witness(upstairs, &x)?)?;
            for g in &deck[1..] {
                let y = self.upstairs_product(g, &x)?;
                let other = self.project(&apply_witness(upstairs, &y)?)?;
                if base.dist(&other)?.to_f64().unwrap() > tol {
                    return Err(CoveringError::DeckNotPreserved("fibres are not mapped to fibres".into()));
                }
            }
        }
        Ok(Witness::Descended { covering: self, upstairs: Box::new(upstairs.clone()) })
    }
}

impl RotationVector {
    pub fn expect_group(&self, g: GroupId) -> Result<(), GroupError> {
        if self.group == g {
            Ok(())
        } else {
            Err(GroupError::Mismatch { expected: g, got: self.group })
        }
    }
}

/// `A·rho` for an integer matrix `A`, landing in `target`.
pub fn pushforward(rho: &RotationVector, matrix: &[Vec<i64>], target: GroupId) -> RotationVector {
    let angles = matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(rho.angles.iter())
                .fold(AngleValue::zero(), |acc, (k, a)| &acc + &a.scale_int(*k))
        })
        .collect();
    RotationVector { group: target, angles }
}

/// Upstairs topological conjugacy restricted to conjugacies that commute with
/// the deck group of `c`.
fn upstairs_conjugate(c: Covering, l: &RotationVector, lp: &RotationVector) -> Result<bool, CoveringError> {
    if l.group.arity() == 1 {
        return Ok(decide_circle(l.theta(), lp.theta())?.status == Status::Conjugate);
    }
    let (ph, php) = (l.phi(), lp.phi());
    if php != ph && php != -&ph {
        return Ok(false);
    }
    let m = lattice_multiplier(l.group) * c.deck_multiplier();
    Ok(solve_affine_lattice(l.theta(), &ph, lp.theta(), m)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IrrationalBasis;
    use crate::group::torus_element;

    fn all() -> Vec<Covering> {
        let mut v = Covering::FIXED.to_vec();
        v.extend([Covering::U2SelfCover(2), Covering::U2SelfCover(3)]);
        v
    }

    #[test]
    fn names_round_trip() {
        for c in all() {
            assert_eq!(c.to_string().parse::<Covering>().unwrap(), c);
        }
        assert_eq!("su2-so3".parse::<Covering>().unwrap(), Covering::Su2ToSo3);
        assert!("u2_selfcover(1)".parse::<Covering>().is_err());
    }

    #[test]
    fn quaternion_k_projects_to_half_turn() {
        let x = GroupElement::su2(Quaternion::new(0.0, 0.0, 0.0, 1.0));
        let y = Covering::Su2ToSo3.project(&x).unwrap();
        assert!(y.dist(&GroupElement::so3(Mat3::diag([-1.0, -1.0, 1.0]))).unwrap() < 1e-15);
    }

    #[test]
    fn section_is_a_preimage() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for c in all() {
            for _ in 0..50 {
                let y: GroupElement<f64> = sample_haar(c.base(), &mut rng);
                let x = c.section(&y).unwrap();
                assert!(c.project(&x).unwrap().dist(&y).unwrap() < 1e-12, "{c}");
            }
        }
    }

    #[test]
    fn lifts_of_one_third() {
        let rho = RotationVector::new(GroupId::So3, vec![AngleValue::ratio(1, 3)]).unwrap();
        let lifts = Covering::Su2ToSo3.lift_rotation_vectors(&rho).unwrap();
        assert_eq!(lifts[0].angles, vec![AngleValue::ratio(1, 6)]);
        assert_eq!(lifts[1].angles, vec![AngleValue::ratio(2, 3)]);
    }

    #[test]
    fn lifted_torus_elements_project_back() {
        let b = IrrationalBasis::standard();
        let a = AngleValue::symbol("alpha", rat(1, 1));
        let bb = AngleValue::symbol("beta", rat(1, 3));
        for c in all() {
            let angles = [&AngleValue::ratio(2, 7) + &a, &bb + &AngleValue::ratio(1, 5)][..c.base().arity()].to_vec();
            let rho = RotationVector::new(c.base(), angles).unwrap();
            let want: GroupElement<f64> = torus_element(&rho, &b).unwrap();
            for l in c.lift_rotation_vectors(&rho).unwrap() {
                assert_eq!(c.pushforward(&l).unwrap(), rho, "{c}");
                let up: GroupElement<f64> = torus_element(&l, &b).unwrap();
                assert!(c.project(&up).unwrap().dist(&want).unwrap() < 1e-12, "{c}");
            }
        }
    }

    #[test]
    fn deck_elements_are_the_fibre_of_identity() {
        for c in all() {
            let e = GroupElement::<f64>::identity(c.base());
            for d in c.deck_elements::<f64>() {
                assert!(c.project(&d).unwrap().dist(&e).unwrap() < 1e-14, "{c}");
            }
        }
    }

    #[test]
    fn descent_refuses_generic_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let id = Witness::<f64>::Identity { group: GroupId::U2 };
        for c in [Covering::U2ToSo3xS1, Covering::U2ToSpinC3, Covering::U2SelfCover(3)] {
            let down = c.descend_map(&id).unwrap();
            let y: GroupElement<f64> = sample_haar(c.base(), &mut rng);
            assert!(apply_witness(&down, &y).unwrap().dist(&y).unwrap() < 1e-12, "{c}");
            let g: GroupElement<f64> = sample_haar(GroupId::U2, &mut rng);
            let moved = Witness::LeftTranslated { by: g, inner: Box::new(id.clone()) };
            assert!(matches!(c.descend_map(&moved), Err(CoveringError::DeckNotPreserved(_))), "{c}");
        }
    }
}
