//! Exact decision procedures over ℝ/ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::angle::{AngleValue, LinearForm};
use super::ExactError;
use crate::verdict::{LatticeSolution, Reason, Sign, Verdict};

/// Default entry bound for [`decide_torus2`].
pub const DEFAULT_TORUS2_BOUND: i64 = 10;

fn to_i64(x: &BigInt) -> Result<i64, ExactError> {
    x.to_i64().ok_or_else(|| ExactError::Overflow(x.to_string()))
}

/// Integer `n` with `delta - n·step ∈ ℤ`, where both are exact forms.
///
/// Returns the forced `n` when `step` has a symbolic part, and the least
/// non-negative one otherwise.
fn solve_linear(delta: &LinearForm, step: &LinearForm) -> Option<BigInt> {
    if step.is_rational() {
        if !delta.is_rational() {
            return None;
        }
        let c = &step.constant;
        if c.is_integer() {
            return delta.constant.is_integer().then(BigInt::zero);
        }
        // n·a/b ≡ d (mod 1) with gcd(a, b) = 1.
        let (a, b) = (c.numer(), c.denom());
        let e = &delta.constant * BigRational::from_integer(b.clone());
        if !e.is_integer() {
            return None;
        }
        let e = e.to_integer().mod_floor(b);
        let inv = mod_inverse(&a.mod_floor(b), b)?;
        return Some((e * inv).mod_floor(b));
    }
    let (sym, c) = step.coeffs.iter().next()?;
    let ratio = delta.coeff(sym) / c;
    if !ratio.is_integer() {
        return None;
    }
    let n = ratio.to_integer();
    let rest = delta - &step.scale(&BigRational::from_integer(n.clone()));
    rest.is_integer().then_some(n)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    (g.gcd.abs() == BigInt::from(1)).then(|| (g.x * g.gcd).mod_floor(m))
}

/// Solve `θ' = s·θ + (M·n)·φ + n'` over `s ∈ {+1, -1}` (tried in that order)
/// and integers `n`, `n'`, where `M` is `n_multiplier`.
///
/// `n` is unique per sign when `φ` has a symbolic part; for rational `φ` the
/// least non-negative solution is returned.
pub fn solve_affine_lattice(
    theta: &AngleValue,
    phi: &AngleValue,
    theta_prime: &AngleValue,
    n_multiplier: i64,
) -> Result<Option<LatticeSolution>, ExactError> {
    for s in Sign::BOTH {
        if let Some(sol) = solve_with_sign(theta, phi, theta_prime, n_multiplier, s)? {
            return Ok(Some(sol));
        }
    }
    Ok(None)
}

/// [`solve_affine_lattice`] restricted to one sign.
pub fn solve_with_sign(
    theta: &AngleValue,
    phi: &AngleValue,
    theta_prime: &AngleValue,
    n_multiplier: i64,
    s: Sign,
) -> Result<Option<LatticeSolution>, ExactError> {
    let (t, f, tp) = (theta.lift(), phi.lift(), theta_prime.lift());
    let delta = &tp - &t.scale_int(s.as_i64());
    let step = f.scale_int(n_multiplier);
    let Some(n) = solve_linear(&delta, &step) else { return Ok(None) };
    let rest = &delta - &step.scale(&BigRational::from_integer(n.clone()));
    debug_assert!(rest.is_integer());
    Ok(Some(LatticeSolution { sign: s, n: to_i64(&n)?, n_prime: to_i64(&rest.constant.to_integer())? }))
}

/// Conjugacy of circle rotations: `θ' ≡ ±θ`.
pub fn decide_circle(rho: &AngleValue, rho_prime: &AngleValue) -> Result<Verdict, ExactError> {
    for s in Sign::BOTH {
        let diff = &rho_prime.lift() - &rho.lift().scale_int(s.as_i64());
        if diff.is_integer() {
            let sol = LatticeSolution { sign: s, n: 0, n_prime: to_i64(&diff.constant.to_integer())? };
            return Ok(Verdict::conjugate(sol, None));
        }
    }
    let reason = match (rho.denominator(), rho_prime.denominator()) {
        (Some(p), Some(q)) if p != q => Reason::OrbitCardinality,
        (Some(_), Some(_)) => Reason::PmExhausted,
        (None, None) => Reason::RotationMismatch,
        _ => Reason::ClosureType,
    };
    let opaque = rho.has_anonymous() || rho_prime.has_anonymous();
    Ok(Verdict::not_conjugate(reason).guard_opaque(opaque))
}

/// Bounded search for `A ∈ GL₂(ℤ)` with entries in `[-bound, bound]` and
/// `ρ' ≡ A·ρ`. Returns `Unknown` when nothing is found.
pub fn decide_torus2(rho: &[AngleValue; 2], rho_prime: &[AngleValue; 2], bound: i64) -> Verdict {
    let rows_for = |target: &AngleValue| -> Vec<[i64; 2]> {
        let mut rows = Vec::new();
        for a in -bound..=bound {
            let ra = rho[0].scale_int(a);
            for b in -bound..=bound {
                if &ra + &rho[1].scale_int(b) == *target {
                    rows.push([a, b]);
                }
            }
        }
        rows
    };
    let top = rows_for(&rho_prime[0]);
    if top.is_empty() {
        return Verdict::unknown(Reason::BeyondBound);
    }
    let bottom = rows_for(&rho_prime[1]);
    for r0 in &top {
        for r1 in &bottom {
            let det = r0[0] * r1[1] - r0[1] * r1[0];
            if det.abs() == 1 {
                let sol = LatticeSolution { sign: if det == 1 { Sign::Plus } else { Sign::Minus }, n: 0, n_prime: 0 };
                let mut v = Verdict::conjugate(sol, None);
                v.torus_matrix = Some([*r0, *r1]);
                return v;
            }
        }
    }
    Verdict::unknown(Reason::BeyondBound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::angle::rat;
    use crate::verdict::Status;

    fn alpha(n: i64, d: i64) -> AngleValue {
        AngleValue::symbol("alpha", rat(n, d))
    }

    #[test]
    fn forced_n_with_symbolic_phi() {
        // θ = 1/4, φ = α, θ' = 1/4 + 2α.
        let theta = AngleValue::ratio(1, 4);
        let tp = &theta + &alpha(2, 1);
        let sol = solve_affine_lattice(&theta, &alpha(1, 1), &tp, 1).unwrap().unwrap();
        assert_eq!(sol, LatticeSolution { sign: Sign::Plus, n: 2, n_prime: 0 });
        let sol = solve_affine_lattice(&theta, &alpha(1, 1), &tp, 2).unwrap().unwrap();
        assert_eq!(sol.n, 1);
    }

    #[test]
    fn odd_coefficient_has_no_even_solution() {
        let sol = solve_affine_lattice(&AngleValue::zero(), &alpha(1, 1), &alpha(1, 1), 2).unwrap();
        assert!(sol.is_none());
    }

    #[test]
    fn negative_sign_and_integer_offset() {
        // θ = 1/3, φ = 1/5, θ' = 2/3 = -1/3 + 1.
        let sol = solve_affine_lattice(&AngleValue::ratio(1, 3), &AngleValue::ratio(1, 5), &AngleValue::ratio(2, 3), 1)
            .unwrap()
            .unwrap();
        assert_eq!(sol.sign, Sign::Minus);
    }

    #[test]
    fn rational_phi_modular_solution() {
        // θ = 0, φ = 2/7: need 2n/7 ≡ 3/7, n = 5.
        let sol = solve_affine_lattice(&AngleValue::zero(), &AngleValue::ratio(2, 7), &AngleValue::ratio(3, 7), 1)
            .unwrap()
            .unwrap();
        assert_eq!((sol.sign, sol.n), (Sign::Plus, 5));
        assert_eq!(sol.n_prime, -1);
    }

    #[test]
    fn no_solution_example() {
        let r = solve_affine_lattice(&AngleValue::ratio(1, 3), &AngleValue::ratio(1, 2), &AngleValue::ratio(1, 4), 1)
            .unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn circle_examples() {
        let v = decide_circle(&AngleValue::ratio(3, 10), &AngleValue::ratio(7, 10)).unwrap();
        assert_eq!(v.status, Status::Conjugate);
        assert_eq!(v.solution.unwrap().sign, Sign::Minus);
        let v = decide_circle(&AngleValue::ratio(1, 3), &AngleValue::ratio(1, 4)).unwrap();
        assert_eq!(v.reason, Some(Reason::OrbitCardinality));
        let v = decide_circle(&AngleValue::ratio(1, 5), &AngleValue::ratio(2, 5)).unwrap();
        assert_eq!(v.reason, Some(Reason::PmExhausted));
        let v = decide_circle(&alpha(1, 1), &AngleValue::ratio(2, 5)).unwrap();
        assert_eq!(v.reason, Some(Reason::ClosureType));
    }

    #[test]
    fn opaque_refutation_is_unknown() {
        let v = decide_circle(&AngleValue::anonymous(0.1234567), &AngleValue::anonymous(0.2345678)).unwrap();
        assert_eq!(v.status, Status::Unknown);
        let x = AngleValue::anonymous(0.1234567);
        let v = decide_circle(&x, &-&x).unwrap();
        assert_eq!(v.status, Status::Conjugate);
    }

    #[test]
    fn torus2_search() {
        let a = alpha(1, 1);
        let b = AngleValue::symbol("beta", rat(1, 1));
        let v = decide_torus2(&[a.clone(), b.clone()], &[a.clone(), b.clone()], DEFAULT_TORUS2_BOUND);
        assert_eq!(v.torus_matrix, Some([[1, 0], [0, 1]]));
        let v = decide_torus2(&[a.clone(), b.clone()], &[&a + &b, b.clone()], DEFAULT_TORUS2_BOUND);
        assert_eq!(v.torus_matrix, Some([[1, 1], [0, 1]]));
        let v = decide_torus2(&[a.clone(), b.clone()], &[a.scale_int(2), b.clone()], DEFAULT_TORUS2_BOUND);
        assert_eq!(v.status, Status::Unknown);
        assert_eq!(v.reason, Some(Reason::BeyondBound));
    }
}
