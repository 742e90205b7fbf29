//! Conjugacy decisions for left translations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{decide_circle, solve_affine_lattice, AngleValue, AnonValue, ExactError, LinearForm, Symbol};
use crate::group::{reduce_to_torus, GroupElement, GroupError, GroupId, RotationVector, TorusReduction, TOL_GROUP};
use crate::scalar::Real;
use crate::verdict::{LatticeSolution, Reason, Sign, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugacyMode {
    Topological,
    Smooth,
    Algebraic,
}

impl ConjugacyMode {
    pub const ALL: [ConjugacyMode; 3] = [ConjugacyMode::Topological, ConjugacyMode::Smooth, ConjugacyMode::Algebraic];
}

impl fmt::Display for ConjugacyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjugacyMode::Topological => "topological",
            ConjugacyMode::Smooth => "smooth",
            ConjugacyMode::Algebraic => "algebraic",
        })
    }
}

impl FromStr for ConjugacyMode {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, ClassifyError> {
        match s.to_ascii_lowercase().as_str() {
            "topological" | "top" | "c0" => Ok(ConjugacyMode::Topological),
            "smooth" | "cinf" => Ok(ConjugacyMode::Smooth),
            "algebraic" | "alg" => Ok(ConjugacyMode::Algebraic),
            _ => Err(ClassifyError::UnknownMode(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("rotation vectors belong to {0} and {1}")]
    GroupMismatch(GroupId, GroupId),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Multiplier of `n` in the topological criterion of a two-parameter group.
pub fn lattice_multiplier(g: GroupId) -> i64 {
    match g {
        GroupId::So3xS1 => 2,
        _ => 1,
    }
}

fn phi_sign(phi: &AngleValue, phi_prime: &AngleValue) -> Option<Sign> {
    if phi_prime == phi {
        Some(Sign::Plus)
    } else if *phi_prime == -phi {
        Some(Sign::Minus)
    } else {
        None
    }
}

/// The solution `(s, n, n')` for given `s` and `n`, if `n'` is an integer.
fn solution_for(theta: &AngleValue, phi: &AngleValue, theta_prime: &AngleValue, s: Sign, n: i64) -> Option<LatticeSolution> {
    let rest = &(&theta_prime.lift() - &theta.lift().scale_int(s.as_i64())) - &phi.lift().scale_int(n);
    if !rest.is_integer() {
        return None;
    }
    let n_prime = num_traits::ToPrimitive::to_i64(&rest.constant.to_integer())?;
    Some(LatticeSolution { sign: s, n, n_prime })
}

fn topological(rho: &RotationVector, rho_prime: &RotationVector) -> Result<Verdict, ClassifyError> {
    let g = rho.group;
    if g.arity() == 1 {
        return Ok(decide_circle(rho.theta(), rho_prime.theta())?);
    }
    let (th, ph, thp, php) = (rho.theta(), rho.phi(), rho_prime.theta(), rho_prime.phi());
    let Some(sigma) = phi_sign(&ph, &php) else {
        return Ok(Verdict::not_conjugate(Reason::PhiMismatch));
    };
    let m = lattice_multiplier(g);
    Ok(match solve_affine_lattice(th, &ph, thp, m)? {
        Some(sol) => Verdict::conjugate(sol, Some(sigma)),
        None if m == 2 && solve_affine_lattice(th, &ph, thp, 1)?.is_some() => {
            Verdict::not_conjugate(Reason::OddCoefficient)
        }
        None => Verdict::not_conjugate(Reason::NoLatticeSolution),
    })
}

/// The four images of `(θ, φ)` under `(θ, φ) ↦ (sθ + nφ, σφ)` realised by
/// automorphisms of U(2) (and of SpinC3 in its own coordinates).
const U2_AUTOMORPHISM_IMAGES: [(Sign, i64, Sign); 4] =
    [(Sign::Plus, 0, Sign::Plus), (Sign::Minus, -1, Sign::Plus), (Sign::Minus, 0, Sign::Minus), (Sign::Plus, 1, Sign::Minus)];

fn image_match(rho: &RotationVector, rho_prime: &RotationVector, table: &[(Sign, i64, Sign)]) -> Option<Verdict> {
    let (th, ph, thp, php) = (rho.theta(), rho.phi(), rho_prime.theta(), rho_prime.phi());
    for &(s, n, sigma) in table {
        let phi_img = if sigma == Sign::Plus { ph.clone() } else { -&ph };
        if php != phi_img {
            continue;
        }
        if let Some(sol) = solution_for(th, &ph, thp, s, n) {
            return Some(Verdict::conjugate(sol, Some(sigma)));
        }
    }
    None
}

const SO3XS1_AUTOMORPHISM_IMAGES: [(Sign, i64, Sign); 4] =
    [(Sign::Plus, 0, Sign::Plus), (Sign::Minus, 0, Sign::Plus), (Sign::Plus, 0, Sign::Minus), (Sign::Minus, 0, Sign::Minus)];

/// Projection of SpinC3 torus coordinates to SO3xS1: `(θ, φ) ↦ (2θ + φ, φ)`.
pub fn spinc3_to_so3xs1(rho: &RotationVector) -> RotationVector {
    let th = &rho.theta().scale_int(2) + &rho.phi();
    RotationVector { group: GroupId::So3xS1, angles: vec![th, rho.phi()] }
}

fn algebraic(rho: &RotationVector, rho_prime: &RotationVector) -> Result<Verdict, ClassifyError> {
    Ok(match rho.group {
        GroupId::Su2 | GroupId::So3 => topological(rho, rho_prime)?,
        GroupId::U2 => image_match(rho, rho_prime, &U2_AUTOMORPHISM_IMAGES)
            .unwrap_or_else(|| Verdict::not_conjugate(Reason::EigenvalueMultiset)),
        GroupId::So3xS1 => image_match(rho, rho_prime, &SO3XS1_AUTOMORPHISM_IMAGES)
            .unwrap_or_else(|| Verdict::not_conjugate(Reason::AutomorphismOrbit)),
        GroupId::SpinC3 => match image_match(rho, rho_prime, &U2_AUTOMORPHISM_IMAGES) {
            Some(v) => v,
            None => {
                let (down, down_prime) = (spinc3_to_so3xs1(rho), spinc3_to_so3xs1(rho_prime));
                if image_match(&down, &down_prime, &SO3XS1_AUTOMORPHISM_IMAGES).is_none() {
                    Verdict::not_conjugate(Reason::DescentRefutation)
                } else {
                    Verdict::unknown(Reason::SemiDecisionGap)
                }
            }
        },
    })
}

/// Decide whether the left translations by `torus(rho)` and `torus(rho')`
/// are conjugate in the given mode.
pub fn decide(
    group: GroupId,
    mode: ConjugacyMode,
    rho: &RotationVector,
    rho_prime: &RotationVector,
) -> Result<Verdict, ClassifyError> {
    for r in [rho, rho_prime] {
        if r.group != group {
            return Err(ClassifyError::GroupMismatch(group, r.group));
        }
        if r.angles.len() != group.arity() {
            return Err(GroupError::Arity { group, expected: group.arity(), got: r.angles.len() }.into());
        }
    }
    let verdict = match mode {
        ConjugacyMode::Topological | ConjugacyMode::Smooth => topological(rho, rho_prime)?,
        ConjugacyMode::Algebraic => algebraic(rho, rho_prime)?,
    };
    Ok(verdict.guard_opaque(rho.has_anonymous() || rho_prime.has_anonymous()))
}

fn circular_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Identify anonymous symbols whose values agree, or agree up to sign, within
/// `tol`. Earlier symbols are kept as representatives.
pub fn unify_anonymous(vectors: &mut [&mut RotationVector], tol: f64) {
    let mut reps: Vec<AnonValue> = Vec::new();
    let mut subst: BTreeMap<Symbol, LinearForm> = BTreeMap::new();
    for v in vectors.iter() {
        for a in &v.angles {
            for sym in a.symbols() {
                let Symbol::Anonymous(x) = sym else { continue };
                if subst.contains_key(sym) || reps.contains(x) {
                    continue;
                }
                let hit = reps.iter().find_map(|y| {
                    if circular_gap(x.value(), y.value()) < tol {
                        Some((*y, 1))
                    } else if circular_gap(x.value(), -y.value()) < tol {
                        Some((*y, -1))
                    } else {
                        None
                    }
                });
                match hit {
                    Some((y, sign)) => {
                        let mut f = LinearForm::default();
                        f.coeffs.insert(Symbol::Anonymous(y), num_rational::BigRational::one() * num_bigint::BigInt::from(sign));
                        subst.insert(sym.clone(), f);
                    }
                    None => reps.push(*x),
                }
            }
        }
    }
    for v in vectors.iter_mut() {
        for a in v.angles.iter_mut() {
            for (sym, f) in &subst {
                *a = a.substitute(sym, f);
            }
        }
    }
}

/// Reduce both elements to the torus and decide on the rotation vectors.
pub fn decide_elements<T: Real>(
    g: &GroupElement<T>,
    g_prime: &GroupElement<T>,
    mode: ConjugacyMode,
) -> Result<(Verdict, TorusReduction<T>, TorusReduction<T>), ClassifyError> {
    g_prime.expect_group(g.group())?;
    let mut r = reduce_to_torus(g)?;
    let mut rp = reduce_to_torus(g_prime)?;
    unify_anonymous(&mut [&mut r.rho, &mut rp.rho], TOL_GROUP.max(T::GROUP_TOL));
    let v = decide(g.group(), mode, &r.rho, &rp.rho)?;
    Ok((v, r, rp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::angle::rat;
    use crate::verdict::Status;

    fn alpha() -> AngleValue {
        AngleValue::symbol("alpha", rat(1, 1))
    }

    fn rv(g: GroupId, a: Vec<AngleValue>) -> RotationVector {
        RotationVector::new(g, a).unwrap()
    }

    #[test]
    fn so3xs1_odd_coefficient_and_spinc3_conjugate() {
        let a = alpha();
        let (r, rp) = (vec![AngleValue::zero(), a.clone()], vec![a.clone(), a.clone()]);
        let v = decide(GroupId::So3xS1, ConjugacyMode::Topological, &rv(GroupId::So3xS1, r.clone()), &rv(GroupId::So3xS1, rp.clone())).unwrap();
        assert_eq!((v.status, v.reason), (Status::NotConjugate, Some(Reason::OddCoefficient)));
        let v = decide(GroupId::SpinC3, ConjugacyMode::Topological, &rv(GroupId::SpinC3, r), &rv(GroupId::SpinC3, rp)).unwrap();
        assert_eq!(v.status, Status::Conjugate);
        assert_eq!(v.solution.unwrap(), LatticeSolution { sign: Sign::Plus, n: 1, n_prime: 0 });
    }

    #[test]
    fn u2_mode_split() {
        let g = GroupId::U2;
        let q = AngleValue::ratio(1, 4);
        let rho = rv(g, vec![q.clone(), alpha()]);
        let rhop = rv(g, vec![&q + &alpha().scale_int(2), alpha()]);
        for mode in [ConjugacyMode::Topological, ConjugacyMode::Smooth] {
            let v = decide(g, mode, &rho, &rhop).unwrap();
            assert_eq!(v.status, Status::Conjugate);
            assert_eq!(v.solution.unwrap().n, 2);
        }
        let v = decide(g, ConjugacyMode::Algebraic, &rho, &rhop).unwrap();
        assert_eq!((v.status, v.reason), (Status::NotConjugate, Some(Reason::EigenvalueMultiset)));
    }

    #[test]
    fn phi_mismatch() {
        let g = GroupId::U2;
        let v = decide(g, ConjugacyMode::Topological, &rv(g, vec![AngleValue::zero(), alpha()]), &rv(g, vec![AngleValue::zero(), alpha().scale_int(2)])).unwrap();
        assert_eq!(v.reason, Some(Reason::PhiMismatch));
    }

    #[test]
    fn spinc3_algebraic_descent() {
        let g = GroupId::SpinC3;
        let q = AngleValue::ratio(1, 4);
        let rho = rv(g, vec![q.clone(), alpha()]);
        let rhop = rv(g, vec![&q + &alpha(), alpha()]);
        assert!(decide(g, ConjugacyMode::Topological, &rho, &rhop).unwrap().is_conjugate());
        let v = decide(g, ConjugacyMode::Algebraic, &rho, &rhop).unwrap();
        assert_eq!(v.reason, Some(Reason::DescentRefutation));
        // Same projection, different class: the semi-decision gives up.
        let rhop = rv(g, vec![&q + &AngleValue::ratio(1, 2), alpha()]);
        let v = decide(g, ConjugacyMode::Algebraic, &rho, &rhop).unwrap();
        assert_eq!((v.status, v.reason), (Status::Unknown, Some(Reason::SemiDecisionGap)));
    }

    #[test]
    fn arity_and_group_errors() {
        let r1 = rv(GroupId::Su2, vec![AngleValue::zero()]);
        let r2 = rv(GroupId::U2, vec![AngleValue::zero(), AngleValue::zero()]);
        assert!(matches!(decide(GroupId::Su2, ConjugacyMode::Topological, &r1, &r2), Err(ClassifyError::GroupMismatch(..))));
        let bad = RotationVector { group: GroupId::U2, angles: vec![AngleValue::zero()] };
        assert!(decide(GroupId::U2, ConjugacyMode::Topological, &bad, &r2).is_err());
    }

    #[test]
    fn unify_identifies_negatives() {
        let x = 0.123456789123;
        let mut a = rv(GroupId::Su2, vec![AngleValue::anonymous(x)]);
        let mut b = rv(GroupId::Su2, vec![AngleValue::anonymous(1.0 - x + 1e-13)]);
        unify_anonymous(&mut [&mut a, &mut b], 1e-9);
        assert_eq!(b.angles[0], -&a.angles[0]);
    }
}
