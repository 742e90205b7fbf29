use ltconj::acceptance::{engineered_pair, random_rho, transform};
use ltconj::classify::{decide, decide_elements, ConjugacyMode};
use ltconj::covering::Covering;
use ltconj::exact::AngleValue;
use ltconj::group::{reduce_to_torus, sample_haar, torus_element, GroupElement, GroupId};
use ltconj::group::reduce::reduction_defect;
use ltconj::orbit::classify_orbit_closure;
use ltconj::witness::{apply_witness, torus_witness, verify_conjugacy, Witness};
use ltconj::{IrrationalBasis, Sign, Status};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn group() -> impl Strategy<Value = GroupId> {
    prop::sample::select(GroupId::ALL.to_vec())
}

fn angle() -> impl Strategy<Value = AngleValue> {
    (0i64..24, 1i64..24, -4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(p, q, a, b, d)| {
        let base = AngleValue::ratio(p, q);
        let a = AngleValue::symbol("alpha", BigRational::new(a.into(), d.into()));
        let b = AngleValue::symbol("beta", BigRational::new(b.into(), d.into()));
        &(&base + &a) + &b
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn angle_addition_is_a_group(x in angle(), y in angle(), z in angle()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert!((&x - &x).is_zero());
        prop_assert_eq!(-&(-&x), x);
    }

    #[test]
    fn angle_serde_round_trip(x in angle()) {
        let s = serde_json::to_value(&x).unwrap();
        prop_assert_eq!(AngleValue::from_json(&s).unwrap(), x);
    }

    #[test]
    fn conjugacy_is_symmetric_and_modes_nest(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rho, rp) = if seed % 2 == 0 {
            engineered_pair(g, &mut rng)
        } else {
            let rho = random_rho(g, &mut rng);
            let rp = transform(&rho, Sign::Plus, (seed % 7) as i64 - 3, 0, Sign::Minus);
            (rho, rp)
        };
        for mode in ConjugacyMode::ALL {
            let there = decide(g, mode, &rho, &rp).unwrap().status;
            let back = decide(g, mode, &rp, &rho).unwrap().status;
            prop_assert_eq!(there == Status::Conjugate, back == Status::Conjugate, "{} {}", g, mode);
        }
        let top = decide(g, ConjugacyMode::Topological, &rho, &rp).unwrap();
        let smooth = decide(g, ConjugacyMode::Smooth, &rho, &rp).unwrap();
        let alg = decide(g, ConjugacyMode::Algebraic, &rho, &rp).unwrap();
        prop_assert_eq!(&top, &smooth);
        if alg.is_conjugate() {
            prop_assert!(top.is_conjugate());
        }
    }

    #[test]
    fn engineered_pairs_have_verified_witnesses(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = IrrationalBasis::standard();
        let (rho, rp) = engineered_pair(g, &mut rng);
        let t: GroupElement<f64> = torus_element(&rho, &basis).unwrap();
        let tp: GroupElement<f64> = torus_element(&rp, &basis).unwrap();
        let w = torus_witness(&rho, &rp, Some((&t, &tp))).unwrap();
        prop_assert!(verify_conjugacy(&w, &t, &tp, 64, seed).unwrap() < 1e-9);
    }

    #[test]
    fn reduction_conjugates_into_the_torus(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: GroupElement<f64> = sample_haar(g, &mut rng);
        let r = reduce_to_torus(&x).unwrap();
        prop_assert!(reduction_defect(&x, &r) < 1e-9);
        prop_assert!(r.conjugator.membership_defect() < 1e-9);
    }

    #[test]
    fn inner_conjugates_are_decided_conjugate(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: GroupElement<f64> = sample_haar(g, &mut rng);
        let a: GroupElement<f64> = sample_haar(g, &mut rng);
        let y = a.multiply(&x).unwrap().multiply(&a.inverse()).unwrap();
        for mode in ConjugacyMode::ALL {
            let (v, _, _) = decide_elements(&x, &y, mode).unwrap();
            prop_assert_eq!(v.status, Status::Conjugate, "{} {}", g, mode);
        }
    }

    #[test]
    fn involutive_sign_flip(n in -6i64..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Witness<f64> = Witness::U2Twist { s: Sign::Minus, n, sigma: Sign::Plus };
        let u: GroupElement<f64> = sample_haar(GroupId::U2, &mut rng);
        let back = apply_witness(&w, &apply_witness(&w, &u).unwrap()).unwrap();
        prop_assert!(back.dist(&u).unwrap() < 1e-12);
    }

    #[test]
    fn lifts_push_forward(seed in any::<u64>(), p in 2u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in Covering::FIXED.into_iter().chain([Covering::U2SelfCover(p)]) {
            let rho = random_rho(c.base(), &mut rng);
            let lifts = c.lift_rotation_vectors(&rho).unwrap();
            prop_assert_eq!(lifts.len(), c.degree() as usize);
            for l in lifts {
                prop_assert_eq!(c.pushforward(&l).unwrap(), rho.clone());
            }
        }
    }

    #[test]
    fn orbit_closure_obstructs_conjugacy(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_rho(g, &mut rng);
        let rp = random_rho(g, &mut rng);
        let (a, b) = (classify_orbit_closure(&rho).unwrap(), classify_orbit_closure(&rp).unwrap());
        if a.kind_name() != b.kind_name() || a.components() != b.components() {
            prop_assert_eq!(decide(g, ConjugacyMode::Topological, &rho, &rp).unwrap().status, Status::NotConjugate);
        }
    }

    #[test]
    fn finite_orbits_are_periodic(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = IrrationalBasis::standard();
        let angles = (0..g.arity()).map(|_| {
            let q = rand::Rng::gen_range(&mut rng, 1..=9i64);
            AngleValue::ratio(rand::Rng::gen_range(&mut rng, 0..q), q)
        }).collect();
        let rho = ltconj::RotationVector::new(g, angles).unwrap();
        let p = match classify_orbit_closure(&rho).unwrap() {
            ltconj::OrbitClosure::FinitePoints { count } => count as i64,
            other => return Err(TestCaseError::fail(format!("{other:?}"))),
        };
        let t: GroupElement<f64> = torus_element(&rho, &basis).unwrap();
        let e = GroupElement::identity(g);
        prop_assert!(t.power(p).dist(&e).unwrap() < 1e-10);
        for k in 1..p {
            prop_assert!(t.power(k).dist(&e).unwrap() > 1e-10);
        }
    }
}

#[test]
fn single_precision_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let basis = IrrationalBasis::standard();
    for g in GroupId::ALL {
        let (rho, rp) = engineered_pair(g, &mut rng);
        let t: GroupElement<f32> = torus_element(&rho, &basis).unwrap();
        let tp: GroupElement<f32> = torus_element(&rp, &basis).unwrap();
        let w: Witness<f32> = torus_witness(&rho, &rp, Some((&t, &tp))).unwrap();
        assert!(verify_conjugacy(&w, &t, &tp, 200, 1).unwrap() < 1e-4, "{g}");
    }
}
