//! Explicit conjugating homeomorphisms.
//!
//! A witness `h` for `(g, g')` satisfies `h(g·u) = g'·h(u)` for all `u`.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{decide, decide_elements, ClassifyError, ConjugacyMode};
use crate::covering::{Covering, CoveringError};
use crate::exact::solve_affine_lattice;
use crate::group::{sample_haar, turns, GroupElement, GroupError, GroupId, Mat2, Mat3, Quaternion, RotationVector, TorusReduction};
use crate::scalar::{lit, Real};
use crate::verdict::{Sign, Status, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub enum Witness<T> {
    Identity { group: GroupId },
    /// `u ↦ by·inner(u)`.
    LeftTranslated { by: GroupElement<T>, inner: Box<Witness<T>> },
    /// `u ↦ inner(by·u)`.
    Precomposed { inner: Box<Witness<T>>, by: GroupElement<T> },
    /// `u ↦ inner(u)·by`.
    RightTranslated { inner: Box<Witness<T>>, by: GroupElement<T> },
    /// On U2 in split coordinates `(v, μ)`: `(v, μ) ↦ (t(μ^σ)^{σn}·c_s(v), μ^σ)`,
    /// where `t(λ) = diag(λ, λ̄)` and `c_-` is complex conjugation. Conjugates
    /// the torus translation `(θ, φ)` to `(sθ + nφ, σφ)`.
    U2Twist { s: Sign, n: i64, sigma: Sign },
    /// On SO3xS1: `(R, μ) ↦ (Rot_z(k·arg μ/2π)·R, μ)`. Conjugates `(θ, φ)` to
    /// `(θ + kφ, φ)`.
    CircleTwist { k: i64 },
    /// The map induced on the base of `covering` by an upstairs witness that
    /// preserves the deck group.
    Descended { covering: Covering, upstairs: Box<Witness<T>> },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("not conjugate: {0}")]
    NotConjugate(String),
    #[error("exponent {0} is out of range")]
    Overflow(i64),
    #[error("no lift pairing gives a verified witness")]
    NoLiftPairing,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Covering(Box<CoveringError>),
}

impl From<CoveringError> for WitnessError {
    fn from(e: CoveringError) -> Self {
        WitnessError::Covering(Box::new(e))
    }
}

impl<T: Real> Witness<T> {
    /// Group the witness acts on.
    pub fn group(&self) -> GroupId {
        match self {
            Witness::Identity { group } => *group,
            Witness::LeftTranslated { inner, .. } | Witness::Precomposed { inner, .. } | Witness::RightTranslated { inner, .. } => {
                inner.group()
            }
            Witness::U2Twist { .. } => GroupId::U2,
            Witness::CircleTwist { .. } => GroupId::So3xS1,
            Witness::Descended { covering, .. } => covering.base(),
        }
    }

    /// Depth of nesting, counting this node.
    pub fn depth(&self) -> usize {
        match self {
            Witness::LeftTranslated { inner, .. } | Witness::Precomposed { inner, .. } | Witness::RightTranslated { inner, .. } => {
                1 + inner.depth()
            }
            Witness::Descended { upstairs, .. } => 1 + upstairs.depth(),
            _ => 1,
        }
    }
}

fn exponent(k: i64) -> Result<i32, WitnessError> {
    i32::try_from(k).map_err(|_| WitnessError::Overflow(k))
}

/// Evaluate a witness at `u`.
pub fn apply_witness<T: Real>(w: &Witness<T>, u: &GroupElement<T>) -> Result<GroupElement<T>, WitnessError> {
    u.expect_group(w.group())?;
    Ok(match w {
        Witness::Identity { .. } => *u,
        Witness::LeftTranslated { by, inner } => by.multiply(&apply_witness(inner, u)?)?,
        Witness::Precomposed { inner, by } => apply_witness(inner, &by.multiply(u)?)?,
        Witness::RightTranslated { inner, by } => apply_witness(inner, u)?.multiply(by)?,
        Witness::U2Twist { s, n, sigma } => {
            let GroupElement::U2 { matrix } = u else { unreachable!() };
            let one = Complex::new(T::one(), T::zero());
            let mu = matrix.det();
            let mu = mu / mu.norm();
            let v = Mat2::diag(mu.conj(), one) * *matrix;
            let v = if *s == Sign::Minus { v.conj() } else { v };
            let mu2 = if *sigma == Sign::Minus { mu.conj() } else { mu };
            let k = exponent(sigma.as_i64() * n)?;
            let lam = mu2.powi(k);
            GroupElement::u2(Mat2::diag(mu2, one) * Mat2::diag(lam, lam.conj()) * v)
        }
        Witness::CircleTwist { k } => {
            let GroupElement::So3xS1 { matrix, phase } = u else { unreachable!() };
            let x = turns(*phase) * lit::<T>(*k as f64);
            GroupElement::so3xs1(Mat3::rot_z(x - x.floor()) * *matrix, *phase)
        }
        Witness::Descended { covering, upstairs } => {
            let x = covering.section(u)?;
            covering.project(&apply_witness(upstairs, &x)?)?
        }
    })
}

/// `sup_u d(h(g·u), g'·h(u))` over `samples` Haar samples, split across
/// threads with one ChaCha stream per shard.
pub fn verify_conjugacy<T: Real>(
    w: &Witness<T>,
    g: &GroupElement<T>,
    g_prime: &GroupElement<T>,
    samples: usize,
    seed: u64,
) -> Result<f64, WitnessError> {
    g.expect_group(w.group())?;
    g_prime.expect_group(w.group())?;
    const SHARDS: usize = 8;
    let per = samples.div_ceil(SHARDS);
    let maxima: Vec<f64> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| -> Result<f64, WitnessError> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard as u64);
            let mut worst = 0.0f64;
            let count = per.min(samples.saturating_sub(shard * per));
            for _ in 0..count {
                let u: GroupElement<T> = sample_haar(w.group(), &mut rng);
                let lhs = apply_witness(w, &g.multiply(&u)?)?;
                let rhs = g_prime.multiply(&apply_witness(w, &u)?)?;
                let d = lhs.dist(&rhs)?.to_f64().unwrap_or(f64::NAN);
                worst = if d.is_nan() { f64::NAN } else { worst.max(d) };
            }
            Ok(worst)
        })
        .collect::<Result<_, _>>()?;
    Ok(maxima.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) }))
}

/// Right-translate so that the identity is fixed, unless it already is.
pub fn normalize_witness<T: Real>(w: Witness<T>) -> Result<Witness<T>, WitnessError> {
    let e = GroupElement::identity(w.group());
    let we = apply_witness(&w, &e)?;
    if we.dist(&e)?.to_f64().unwrap() <= T::GROUP_TOL {
        return Ok(w);
    }
    Ok(Witness::RightTranslated { inner: Box::new(w), by: we.inverse() })
}

fn fixed_reflection<T: Real>(g: GroupId) -> GroupElement<T> {
    match g {
        GroupId::Su2 => GroupElement::su2(Quaternion::i()),
        GroupId::So3 => GroupElement::so3(Mat3::diag([T::one(), -T::one(), -T::one()])),
        _ => unreachable!("only circle tori use a fixed reflection"),
    }
}

/// Witness for the torus translations with rotation vectors `rho`, `rho'`,
/// which must be topologically conjugate.
///
/// `t`, `t'` are the torus elements, used to pick a lift pairing through the
/// coverings; pass `None` to accept the first deck-preserving candidate.
pub fn torus_witness<T: Real>(
    rho: &RotationVector,
    rho_prime: &RotationVector,
    elements: Option<(&GroupElement<T>, &GroupElement<T>)>,
) -> Result<Witness<T>, WitnessError> {
    let g = rho.group;
    let v = decide(g, ConjugacyMode::Topological, rho, rho_prime)?;
    let Some(sol) = v.solution.filter(|_| v.status == Status::Conjugate) else {
        return Err(WitnessError::NotConjugate(v.reason.map_or("unknown", |r| r.code()).to_string()));
    };
    Ok(match g {
        GroupId::Su2 | GroupId::So3 => match sol.sign {
            Sign::Plus => Witness::Identity { group: g },
            Sign::Minus => Witness::LeftTranslated { by: fixed_reflection(g), inner: Box::new(Witness::Identity { group: g }) },
        },
        GroupId::U2 => Witness::U2Twist { s: sol.sign, n: sol.n, sigma: v.phi_sign.unwrap_or(Sign::Plus) },
        GroupId::So3xS1 => descended(Covering::U2ToSo3xS1, rho, rho_prime, elements)?,
        GroupId::SpinC3 => descended(Covering::U2ToSpinC3, rho, rho_prime, elements)?,
    })
}

fn descended<T: Real>(
    c: Covering,
    rho: &RotationVector,
    rho_prime: &RotationVector,
    elements: Option<(&GroupElement<T>, &GroupElement<T>)>,
) -> Result<Witness<T>, WitnessError> {
    let l = c.lift_rotation_vectors(rho)?.swap_remove(0);
    let (ph, m) = (l.phi(), c.deck_multiplier());
    for lp in c.lift_rotation_vectors(rho_prime)? {
        let php = lp.phi();
        let sigma = if php == ph {
            Sign::Plus
        } else if php == -&ph {
            Sign::Minus
        } else {
            continue;
        };
        let Some(sol) = solve_affine_lattice(l.theta(), &ph, lp.theta(), m).map_err(ClassifyError::from)? else {
            continue;
        };
        let n = sol.n.checked_mul(m).ok_or(WitnessError::Overflow(sol.n))?;
        let up = Witness::U2Twist { s: sol.sign, n, sigma };
        let Ok(w) = c.descend_map(&up) else { continue };
        match elements {
            None => return Ok(w),
            Some((t, tp)) => {
                if verify_conjugacy(&w, t, tp, 64, 0x11F7)? <= T::GROUP_TOL {
                    return Ok(w);
                }
            }
        }
    }
    Err(WitnessError::NoLiftPairing)
}

/// A witness together with the data it was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct BuiltWitness<T> {
    pub verdict: Verdict,
    pub witness: Witness<T>,
    pub torus_witness: Witness<T>,
    pub reductions: [TorusReduction<T>; 2],
}

/// Build a conjugating homeomorphism from `L_g` to `L_{g'}`.
///
/// The verdict is the one for `mode`; the witness itself is always a
/// homeomorphism, not an automorphism.
pub fn build_witness<T: Real>(
    g: &GroupElement<T>,
    g_prime: &GroupElement<T>,
    mode: ConjugacyMode,
) -> Result<BuiltWitness<T>, WitnessError> {
    let (verdict, r, rp) = decide_elements(g, g_prime, mode)?;
    if verdict.status != Status::Conjugate {
        return Err(WitnessError::NotConjugate(verdict.reason.map_or("unknown", |r| r.code()).to_string()));
    }
    let tw = torus_witness(&r.rho, &rp.rho, Some((&r.torus_rep, &rp.torus_rep)))?;
    let inner = Witness::Precomposed { inner: Box::new(tw.clone()), by: r.conjugator };
    let witness = Witness::LeftTranslated { by: rp.conjugator.inverse(), inner: Box::new(inner) };
    Ok(BuiltWitness { verdict, witness, torus_witness: tw, reductions: [r, rp] })
}
