//! Conjugating an element into the maximal torus.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::linalg::{cross, dot, unit, Mat2, Mat3};
use super::torus::{rotation_vector, rotation_vector_numeric, RotationVector};
use super::{GroupElement, GroupError, GroupId, Quaternion, EIGEN_GAP};
use crate::exact::IrrationalBasis;
use crate::scalar::{lit, Real};

/// `s·g·s⁻¹ = t` with `t` in the maximal torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusReduction<T> {
    pub torus_rep: GroupElement<T>,
    pub conjugator: GroupElement<T>,
    pub rho: RotationVector,
}

/// Which Weyl chamber representative to produce.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Chamber {
    Canonical,
    Alternate,
}

fn su2_reduce<T: Real>(q: Quaternion<T>, chamber: Chamber) -> (Quaternion<T>, Quaternion<T>) {
    let v = q.vector();
    let nv = dot(v, v).sqrt();
    let mut s = if nv.to_f64().unwrap() < EIGEN_GAP { Quaternion::one() } else { Quaternion::aligning(unit(v)) };
    if chamber == Chamber::Alternate {
        s = Quaternion::i() * s;
    }
    let mut t = s * q * s.conj();
    t.b = T::zero();
    t.c = T::zero();
    (t.normalize(), s)
}

/// Unit axis and angle `ω ∈ [0, π]` of a rotation; `None` for the identity.
fn so3_axis_angle<T: Real>(r: &Mat3<T>) -> Option<([T; 3], T)> {
    let m = &r.0;
    let half = lit::<T>(0.5);
    let w = [(m[2][1] - m[1][2]) * half, (m[0][2] - m[2][0]) * half, (m[1][0] - m[0][1]) * half];
    let sin = dot(w, w).sqrt();
    let cos = (r.trace() - T::one()) * half;
    let omega = sin.atan2(cos);
    if omega.to_f64().unwrap() < EIGEN_GAP {
        return None;
    }
    if omega < T::FRAC_PI_2() {
        return Some((unit(w), omega));
    }
    // Near π the skew part is small; read the axis off B = (R + Rᵀ)/2 - cos ω·I = (1 - cos ω)·n nᵀ.
    let b = |i: usize, j: usize| (m[i][j] + m[j][i]) * half - if i == j { cos } else { T::zero() };
    let k = (0..3).max_by(|&i, &j| b(i, i).partial_cmp(&b(j, j)).unwrap()).unwrap();
    let mut n = unit([b(0, k), b(1, k), b(2, k)]);
    let wn = dot(w, n);
    let flip = if wn.abs().to_f64().unwrap() > 1e-300 {
        wn < T::zero()
    } else {
        // Angle exactly π: make the first nonzero coordinate positive.
        n.iter().find(|x| x.abs().to_f64().unwrap() > 1e-12).map_or(false, |x| *x < T::zero())
    };
    if flip {
        n = n.map(|x| -x);
    }
    Some((n, omega))
}

/// Rotation sending the unit vector `n` to `e_z`, with rows `(u₁, u₂, n)`.
fn so3_aligning<T: Real>(n: [T; 3]) -> Mat3<T> {
    let (o, z) = (T::one(), T::zero());
    let e = if n[0].abs() <= n[1].abs() && n[0].abs() <= n[2].abs() {
        [o, z, z]
    } else if n[1].abs() <= n[2].abs() {
        [z, o, z]
    } else {
        [z, z, o]
    };
    let u1 = unit(cross(e, n));
    let u2 = cross(n, u1);
    Mat3::from_rows([u1, u2, n])
}

fn so3_reduce<T: Real>(r: &Mat3<T>, chamber: Chamber) -> (Mat3<T>, Mat3<T>) {
    let (o, z) = (T::one(), T::zero());
    let mut s = match so3_axis_angle(r) {
        None => Mat3::identity(),
        Some((n, _)) => so3_aligning(n),
    };
    if chamber == Chamber::Alternate {
        s = Mat3::diag([o, -o, -o]) * s;
    }
    let t = s * *r * s.transpose();
    let c = t.0[0][0];
    let sn = t.0[1][0];
    let norm = (c * c + sn * sn).sqrt();
    let (c, sn) = (c / norm, sn / norm);
    (Mat3([[c, -sn, z], [sn, c, z], [z, z, o]]), s)
}

fn u2_eigenvector<T: Real>(m: &Mat2<T>, mu: Complex<T>) -> [Complex<T>; 2] {
    let g = &m.0;
    let a = [g[0][1], mu - g[0][0]];
    let b = [mu - g[1][1], g[1][0]];
    let na = a[0].norm_sqr() + a[1].norm_sqr();
    let nb = b[0].norm_sqr() + b[1].norm_sqr();
    let (v, n) = if na >= nb { (a, na) } else { (b, nb) };
    let n = n.sqrt();
    [v[0] / n, v[1] / n]
}

fn u2_reduce<T: Real>(m: &Mat2<T>, chamber: Chamber) -> (Mat2<T>, Mat2<T>) {
    let tr = m.trace();
    let disc = (tr * tr - m.det() * lit::<T>(4.0)).sqrt();
    let half = lit::<T>(0.5);
    let (mu1, mu2) = ((tr + disc) * half, (tr - disc) * half);
    let zero = Complex::new(T::zero(), T::zero());
    let weyl = Mat2([[zero, Complex::new(T::one(), T::zero())], [Complex::new(-T::one(), T::zero()), zero]]);
    if (mu1 - mu2).norm().to_f64().unwrap() < EIGEN_GAP {
        let t = Mat2::diag(m.0[0][0], m.0[1][1]);
        return match chamber {
            Chamber::Canonical => (t, Mat2::identity()),
            Chamber::Alternate => (weyl * t * weyl.adjoint(), weyl),
        };
    }
    // θ for the ordering (a, b) is -arg(b)/2π; the canonical chamber has the smaller θ.
    let theta = |b: Complex<T>| super::linalg::turns(b.conj());
    let canonical_first = theta(mu2) <= theta(mu1);
    let ma = match (chamber, canonical_first) {
        (Chamber::Canonical, true) | (Chamber::Alternate, false) => mu1,
        _ => mu2,
    };
    let x = u2_eigenvector(m, ma);
    let y = [-x[1].conj(), x[0].conj()];
    let v = Mat2([[x[0], y[0]], [x[1], y[1]]]);
    let s = v.adjoint();
    let t = s * *m * v;
    let clean = |z: Complex<T>| z / z.norm();
    (Mat2::diag(clean(t.0[0][0]), clean(t.0[1][1])), s)
}

fn reduce_in<T: Real>(g: &GroupElement<T>, chamber: Chamber) -> Result<(GroupElement<T>, GroupElement<T>), GroupError> {
    let one = Complex::new(T::one(), T::zero());
    Ok(match g {
        GroupElement::Su2 { quaternion } => {
            let (t, s) = su2_reduce(*quaternion, chamber);
            (GroupElement::su2(t), GroupElement::su2(s))
        }
        GroupElement::U2 { matrix } => {
            let (t, s) = u2_reduce(matrix, chamber);
            (GroupElement::u2(t), GroupElement::u2(s))
        }
        GroupElement::So3 { matrix } => {
            let (t, s) = so3_reduce(matrix, chamber);
            (GroupElement::so3(t), GroupElement::so3(s))
        }
        GroupElement::So3xS1 { matrix, phase } => {
            let (t, s) = so3_reduce(matrix, chamber);
            (GroupElement::so3xs1(t, *phase), GroupElement::so3xs1(s, one))
        }
        GroupElement::SpinC3 { quaternion, phase } => {
            let (t, s) = su2_reduce(*quaternion, chamber);
            (GroupElement::spinc3(t, *phase), GroupElement::spinc3(s, one))
        }
    })
}

/// Conjugate `g` into the maximal torus, choosing the Weyl representative with
/// the least first coordinate.
pub fn reduce_to_torus<T: Real>(g: &GroupElement<T>) -> Result<TorusReduction<T>, GroupError> {
    g.validate()?;
    let (t, s) = reduce_in(g, Chamber::Canonical)?;
    let rho = rotation_vector(&t)?;
    Ok(TorusReduction { torus_rep: t, conjugator: s, rho })
}

/// Exact image of `rho` under the nontrivial Weyl reflection.
pub fn weyl_image(rho: &RotationVector) -> RotationVector {
    let th = rho.theta();
    let angles = match rho.group {
        GroupId::Su2 | GroupId::So3 => vec![-th],
        GroupId::So3xS1 => vec![-th, rho.phi()],
        GroupId::U2 | GroupId::SpinC3 => vec![-&(th + &rho.phi()), rho.phi()],
    };
    RotationVector { group: rho.group, angles }
}

/// Both Weyl representatives: the canonical reduction and the one obtained
/// with the other eigenvalue ordering.
///
/// The second is computed independently; its rotation vector is then stated
/// exactly as the Weyl image of the first, after checking that the two agree
/// numerically.
pub fn weyl_reductions<T: Real>(g: &GroupElement<T>) -> Result<[TorusReduction<T>; 2], GroupError> {
    let first = reduce_to_torus(g)?;
    let (t, s) = reduce_in(g, Chamber::Alternate)?;
    let numeric = rotation_vector_numeric(&t)?;
    let image = weyl_image(&first.rho);
    let expected = image.to_f64(&IrrationalBasis::default())?;
    for (x, y) in numeric.iter().zip(expected.iter()) {
        let d = (x.to_f64().unwrap() - y).rem_euclid(1.0);
        if d.min(1.0 - d) > T::GROUP_TOL.max(1e-9) {
            return Err(GroupError::Internal(format!("alternate ordering gives {x}, Weyl image predicts {y}")));
        }
    }
    Ok([first, TorusReduction { torus_rep: t, conjugator: s, rho: image }])
}

/// `‖s·g·s⁻¹ - t‖`.
pub fn reduction_defect<T: Real>(g: &GroupElement<T>, r: &TorusReduction<T>) -> T {
    let lhs = r.conjugator.multiply(g).and_then(|x| x.multiply(&r.conjugator.inverse())).expect("same group");
    lhs.dist(&r.torus_rep).expect("same group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::AngleValue;
    use crate::group::sample_haar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reductions_conjugate_into_torus() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in GroupId::ALL {
            for _ in 0..100 {
                let x: GroupElement<f64> = sample_haar(g, &mut rng);
                for r in weyl_reductions(&x).unwrap() {
                    assert!(reduction_defect(&x, &r) < 1e-12, "{g}");
                }
            }
        }
    }

    #[test]
    fn so3_half_turn_axis_sign() {
        // Rotation by π about (0, -1, 0)/… is the same as about (0, 1, 0).
        let r = Mat3::diag([-1.0, 1.0, -1.0]);
        let (n, w) = so3_axis_angle(&r).unwrap();
        assert!((w - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(n, [0.0, 1.0, 0.0]);
        let red = reduce_to_torus(&GroupElement::so3(r)).unwrap();
        assert_eq!(red.rho.angles, vec![AngleValue::ratio(1, 2)]);
        assert!(reduction_defect(&GroupElement::so3(r), &red) < 1e-15);
    }

    #[test]
    fn so3_near_half_turn() {
        let q = Quaternion::new(1e-9, 0.6, 0.0, 0.8).normalize();
        let x = GroupElement::so3(q.rotation());
        let red = reduce_to_torus(&x).unwrap();
        assert!(reduction_defect(&x, &red) < 1e-12);
    }

    #[test]
    fn scalar_branch() {
        let i = Complex::new(0.0, 1.0);
        let x = GroupElement::u2(Mat2::diag(i, i));
        let red = reduce_to_torus(&x).unwrap();
        assert_eq!(red.conjugator, GroupElement::identity(GroupId::U2));
        // diag(i, i) = diag(λz, z̄) with z̄ = i: θ = 3/4, φ = 1/2.
        assert_eq!(red.rho.angles, vec![AngleValue::ratio(3, 4), AngleValue::ratio(1, 2)]);
    }

    #[test]
    fn u2_diag_i_one() {
        let (i, one) = (Complex::new(0.0, 1.0), Complex::new(1.0, 0.0));
        let x = GroupElement::u2(Mat2::diag(i, one));
        let [a, b] = weyl_reductions(&x).unwrap();
        assert_eq!(a.rho.angles, vec![AngleValue::zero(), AngleValue::ratio(1, 4)]);
        assert_eq!(b.rho.angles, vec![AngleValue::ratio(3, 4), AngleValue::ratio(1, 4)]);
    }
}
