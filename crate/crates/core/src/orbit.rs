//! Orbit closures of `e` under a torus translation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{IrrationalBasis, LinearForm, Symbol};
use crate::group::{torus_element, GroupElement, GroupError, RotationVector};
use crate::scalar::Real;

/// Primitive integer relation `a·θ + b·φ + c = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OrbitClosure {
    FinitePoints { count: u64 },
    Circles { count: u64, relation: Relation },
    Torus2,
}

impl OrbitClosure {
    /// Number of connected components; `1` for the torus.
    pub fn components(&self) -> u64 {
        match self {
            OrbitClosure::FinitePoints { count } | OrbitClosure::Circles { count, .. } => *count,
            OrbitClosure::Torus2 => 1,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            OrbitClosure::FinitePoints { .. } => "FinitePoints",
            OrbitClosure::Circles { .. } => "Circles",
            OrbitClosure::Torus2 => "Torus2",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("exactness required: rotation vector contains an unrecognised numeric angle")]
    Opaque,
    #[error("relation coefficient does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn to_i64(x: &BigInt) -> Result<i64, OrbitError> {
    x.to_i64().ok_or(OrbitError::Overflow)
}

/// Rational `c` with `w = c·v`, or `None` if `w` is not a multiple of `v`.
/// `v` must be nonzero.
fn ratio(v: &LinearForm, w: &LinearForm) -> Option<BigRational> {
    let (sym, pivot) = v.coeffs.iter().find(|(_, c)| !c.is_zero())?;
    let c = w.coeff(sym) / pivot;
    let keys: std::collections::BTreeSet<&Symbol> = v.coeffs.keys().chain(w.coeffs.keys()).collect();
    keys.into_iter().all(|s| w.coeff(s) == &c * v.coeff(s)).then_some(c)
}

fn symbolic(x: &LinearForm) -> LinearForm {
    LinearForm { constant: BigRational::zero(), coeffs: x.coeffs.clone() }
}

/// Exact orbit closure of `e` under translation by the torus element `rho`.
///
/// One-parameter groups are treated as `(θ, 0)`, so an irrational rotation
/// gives one circle with relation `(0, 1, 0)`.
pub fn classify_orbit_closure(rho: &RotationVector) -> Result<OrbitClosure, OrbitError> {
    if rho.has_anonymous() {
        return Err(OrbitError::Opaque);
    }
    let (th, ph) = (rho.theta().lift(), rho.phi().lift());
    if th.is_rational() && ph.is_rational() {
        let den = th.constant.denom().lcm(ph.constant.denom());
        return Ok(OrbitClosure::FinitePoints { count: den.to_u64().ok_or(OrbitError::Overflow)? });
    }
    let (v1, v2) = (symbolic(&th), symbolic(&ph));
    // Primitive (a0, b0) spanning the rational relations a·v1 + b·v2 = 0.
    let (a0, b0) = if v1.is_rational() {
        (BigInt::from(1), BigInt::zero())
    } else if v2.is_rational() {
        (BigInt::zero(), BigInt::from(1))
    } else {
        match ratio(&v1, &v2) {
            Some(c) => (-c.numer().clone(), c.denom().clone()),
            None => return Ok(OrbitClosure::Torus2),
        }
    };
    let u = &th.scale(&BigRational::from_integer(a0.clone())) + &ph.scale(&BigRational::from_integer(b0.clone()));
    debug_assert!(u.is_rational());
    let w = u.constant.denom().clone();
    let c = -(u.constant * BigRational::from_integer(w.clone())).to_integer();
    let (mut a, mut b, mut c) = (&a0 * &w, &b0 * &w, c);
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        (a, b, c) = (-a, -b, -c);
    }
    let count = a.gcd(&b);
    Ok(OrbitClosure::Circles {
        count: count.to_u64().ok_or(OrbitError::Overflow)?,
        relation: Relation { a: to_i64(&a)?, b: to_i64(&b)?, c: to_i64(&c)? },
    })
}

const CHUNK: usize = 1024;

/// `[gᵏ : k = 1..=iterations]` for the torus element `g` of `rho`.
pub fn sample_orbit<T: Real>(
    rho: &RotationVector,
    iterations: usize,
    basis: &IrrationalBasis,
) -> Result<Vec<GroupElement<T>>, OrbitError> {
    let g: GroupElement<T> = torus_element(rho, basis)?;
    let starts: Vec<usize> = (0..iterations).step_by(CHUNK).collect();
    Ok(starts
        .into_par_iter()
        .flat_map_iter(|start| {
            let end = (start + CHUNK).min(iterations);
            let mut x = g.power(start as i64);
            (start..end).map(move |_| {
                x = g.multiply(&x).expect("same group");
                x
            })
        })
        .collect())
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of the graph joining points at distance at most
/// `radius`.
pub fn count_components<T: Real>(points: &[GroupElement<T>], radius: f64) -> usize {
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.embed().iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|&i, &j| coords[i][0].total_cmp(&coords[j][0]));
    let mut parent: Vec<usize> = (0..coords.len()).collect();
    let r2 = radius * radius;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if coords[j][0] - coords[i][0] > radius {
                break;
            }
            let d2: f64 = coords[i].iter().zip(&coords[j]).map(|(x, y)| (x - y) * (x - y)).sum();
            if d2 <= r2 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    (0..coords.len()).filter(|&i| find(&mut parent, i) == i).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{angle::rat, AngleValue};
    use crate::group::GroupId;

    fn alpha() -> AngleValue {
        AngleValue::symbol("alpha", rat(1, 1))
    }

    fn rv(g: GroupId, a: Vec<AngleValue>) -> RotationVector {
        RotationVector::new(g, a).unwrap()
    }

    #[test]
    fn closures() {
        assert_eq!(
            classify_orbit_closure(&rv(GroupId::Su2, vec![AngleValue::ratio(2, 5)])).unwrap(),
            OrbitClosure::FinitePoints { count: 5 }
        );
        assert_eq!(
            classify_orbit_closure(&rv(GroupId::U2, vec![AngleValue::ratio(1, 3), alpha()])).unwrap(),
            OrbitClosure::Circles { count: 3, relation: Relation { a: 3, b: 0, c: -1 } }
        );
        let beta = AngleValue::symbol("beta", rat(1, 1));
        assert_eq!(classify_orbit_closure(&rv(GroupId::U2, vec![alpha(), beta])).unwrap(), OrbitClosure::Torus2);
        let phi = &AngleValue::ratio(1, 3) + &alpha().scale(&rat(-2, 3));
        assert_eq!(
            classify_orbit_closure(&rv(GroupId::U2, vec![alpha(), phi])).unwrap(),
            OrbitClosure::Circles { count: 1, relation: Relation { a: 2, b: 3, c: -1 } }
        );
        assert_eq!(
            classify_orbit_closure(&rv(GroupId::So3, vec![alpha()])).unwrap(),
            OrbitClosure::Circles { count: 1, relation: Relation { a: 0, b: 1, c: 0 } }
        );
        assert_eq!(
            classify_orbit_closure(&rv(GroupId::U2, vec![AngleValue::anonymous(0.123456789), alpha()])),
            Err(OrbitError::Opaque)
        );
    }

    #[test]
    fn sampled_orbits() {
        let b = IrrationalBasis::standard();
        let pts: Vec<GroupElement<f64>> = sample_orbit(&rv(GroupId::Su2, vec![AngleValue::ratio(1, 4)]), 8, &b).unwrap();
        assert!(pts[0].dist(&pts[4]).unwrap() < 1e-12);
        assert_eq!(count_components(&pts, 0.1), 4);
        let pts: Vec<GroupElement<f64>> = sample_orbit(&rv(GroupId::Su2, vec![AngleValue::zero()]), 5, &b).unwrap();
        assert!(pts.iter().all(|p| p.dist(&GroupElement::identity(GroupId::Su2)).unwrap() < 1e-15));
        assert_eq!(count_components(&pts[..1], 0.3), 1);
        let pts: Vec<GroupElement<f64>> =
            sample_orbit(&rv(GroupId::U2, vec![AngleValue::ratio(1, 3), alpha()]), 3000, &b).unwrap();
        assert_eq!(count_components(&pts, 0.05), 3);
    }
}
