//! The acceptance suite, shared by the `acceptance` test target and the
//! `selftest` subcommand.

use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{decide, lattice_multiplier, ConjugacyMode};
use crate::covering::Covering;
use crate::exact::{angle::rat, estimate_rotation_number, AngleValue, IrrationalBasis};
use crate::group::{sample_haar, torus_element, weyl_reductions, GroupElement, GroupId, RotationVector};
use crate::orbit::{classify_orbit_closure, count_components, sample_orbit, OrbitClosure};
use crate::verdict::{Reason, Sign, Status, Verdict};
use crate::witness::{torus_witness, verify_conjugacy, Witness};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

pub const DEFAULT_SEED: u64 = 0x5EED;

/// A random angle: rational, or rational plus a small combination of the
/// basis symbols.
pub fn random_angle<R: Rng>(rng: &mut R) -> AngleValue {
    let q = rng.gen_range(1..=12i64);
    let base = AngleValue::ratio(rng.gen_range(0..q), q);
    if rng.gen_bool(0.3) {
        return base;
    }
    let mut a = base;
    for sym in ["alpha", "beta"] {
        let c = rng.gen_range(-3..=3i64);
        let d = rng.gen_range(1..=2i64);
        if c != 0 {
            a = &a + &AngleValue::symbol(sym, rat(c, d));
        }
    }
    a
}

/// A random rotation vector for `g`.
pub fn random_rho<R: Rng>(g: GroupId, rng: &mut R) -> RotationVector {
    RotationVector::new(g, (0..g.arity()).map(|_| random_angle(rng)).collect()).expect("arity")
}

fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// `(sθ + k·φ + n', σφ)`.
pub fn transform(rho: &RotationVector, s: Sign, k: i64, n_prime: i64, sigma: Sign) -> RotationVector {
    let th = &(&rho.theta().scale_int(s.as_i64()) + &rho.phi().scale_int(k)) + &AngleValue::ratio(n_prime, 1);
    let mut angles = vec![th];
    if rho.group.arity() == 2 {
        angles.push(rho.phi().scale_int(sigma.as_i64()));
    }
    RotationVector { group: rho.group, angles }
}

/// A pair satisfying the topological criterion of its group.
pub fn engineered_pair<R: Rng>(g: GroupId, rng: &mut R) -> (RotationVector, RotationVector) {
    let rho = random_rho(g, rng);
    let (s, sigma) = (random_sign(rng), random_sign(rng));
    let n = rng.gen_range(-5..=5i64);
    let n_prime = rng.gen_range(-3..=3i64);
    let rho_prime = transform(&rho, s, lattice_multiplier(g) * n, n_prime, sigma);
    (rho, rho_prime)
}

/// Conjugate the torus witness by random elements and check it on the
/// resulting non-torus translations.
fn conjugated_check<R: Rng>(
    rho: &RotationVector,
    rho_prime: &RotationVector,
    basis: &IrrationalBasis,
    samples: usize,
    rng: &mut R,
) -> Result<f64, String> {
    let g = rho.group;
    let t: GroupElement<f64> = torus_element(rho, basis).map_err(|e| e.to_string())?;
    let tp: GroupElement<f64> = torus_element(rho_prime, basis).map_err(|e| e.to_string())?;
    let w = torus_witness(rho, rho_prime, Some((&t, &tp))).map_err(|e| e.to_string())?;
    let a: GroupElement<f64> = sample_haar(g, rng);
    let b: GroupElement<f64> = sample_haar(g, rng);
    let x = a.inverse().multiply(&t).and_then(|y| y.multiply(&a)).map_err(|e| e.to_string())?;
    let xp = b.inverse().multiply(&tp).and_then(|y| y.multiply(&b)).map_err(|e| e.to_string())?;
    let h = Witness::LeftTranslated { by: b.inverse(), inner: Box::new(Witness::Precomposed { inner: Box::new(w), by: a }) };
    verify_conjugacy(&h, &x, &xp, samples, rng.gen()).map_err(|e| e.to_string())
}

fn finish(id: u8, name: &'static str, start: Instant, passed: bool, detail: String) -> CriterionResult {
    CriterionResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn criterion_1(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let basis = IrrationalBasis::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for g in GroupId::ALL {
        for i in 0..200 {
            let (rho, rp) = engineered_pair(g, &mut rng);
            let v = decide(g, ConjugacyMode::Topological, &rho, &rp).expect("valid input");
            if v.status != Status::Conjugate {
                failures.push(format!("{g}#{i}: verdict {:?}", v.status));
                continue;
            }
            match conjugated_check(&rho, &rp, &basis, 1000, &mut rng) {
                Ok(e) if e < 1e-9 => worst = worst.max(e),
                Ok(e) => failures.push(format!("{g}#{i}: error {e:.3e}")),
                Err(e) => failures.push(format!("{g}#{i}: {e}")),
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let passed = failures.is_empty() && secs < 60.0;
    let detail = format!("1000 pairs, max witness error {worst:.2e}, {} failures{}", failures.len(), first(&failures));
    finish(1, "theorem soundness loop", start, passed, detail)
}

fn first(failures: &[String]) -> String {
    failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
}

/// Reduced fractions in `[0, 1)` with denominator at most `max_den`.
pub fn farey(max_den: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    for q in 2..=max_den {
        out.extend((1..q).filter(|p| p.gcd(&q) == 1).map(|p| (p, q)));
    }
    out
}

/// Smallest `k ≥ 1` with `tᵏ ≈ e`, by iteration.
fn brute_period(t: &GroupElement<f64>, cap: usize) -> Option<usize> {
    let e = GroupElement::identity(t.group());
    let mut x = *t;
    for k in 1..=cap {
        if x.dist(&e).unwrap() < 1e-9 {
            return Some(k);
        }
        x = x.multiply(t).unwrap();
    }
    None
}

pub fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    let basis = IrrationalBasis::standard();
    let fr = farey(8);
    let mut disagreements = Vec::new();
    let mut pairs = 0;
    for g in [GroupId::Su2, GroupId::So3] {
        for &(p, q) in &fr {
            for &(pp, qq) in &fr {
                pairs += 1;
                let rho = RotationVector::new(g, vec![AngleValue::ratio(p, q)]).unwrap();
                let rp = RotationVector::new(g, vec![AngleValue::ratio(pp, qq)]).unwrap();
                let v = decide(g, ConjugacyMode::Topological, &rho, &rp).unwrap();
                let expect = q == qq && ((p - pp) % q == 0 || (p + pp) % q == 0);
                if v.is_conjugate() != expect {
                    disagreements.push(format!("{g} {p}/{q} vs {pp}/{qq}"));
                    continue;
                }
                if expect {
                    continue;
                }
                let t: GroupElement<f64> = torus_element(&rho, &basis).unwrap();
                let tp: GroupElement<f64> = torus_element(&rp, &basis).unwrap();
                let (k, kp) = (brute_period(&t, 64), brute_period(&tp, 64));
                let ok = match v.reason {
                    Some(Reason::OrbitCardinality) => k != kp,
                    Some(Reason::PmExhausted) => {
                        k == kp && t.dist(&tp).unwrap() > 1e-9 && t.inverse().dist(&tp).unwrap() > 1e-9
                    }
                    _ => false,
                };
                if !ok {
                    disagreements.push(format!("{g} {p}/{q} vs {pp}/{qq}: obstruction {:?} not confirmed", v.reason));
                }
            }
        }
    }
    let detail = format!("{pairs} pairs, {} disagreements{}", disagreements.len(), first(&disagreements));
    finish(2, "necessity at rational scale", start, disagreements.is_empty(), detail)
}

fn alpha() -> AngleValue {
    AngleValue::symbol("alpha", rat(1, 1))
}

fn witness_error(rho: &RotationVector, rp: &RotationVector) -> Result<f64, String> {
    let basis = IrrationalBasis::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    conjugated_check(rho, rp, &basis, 1000, &mut rng)
}

pub fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let mk = |g, a: Vec<AngleValue>| RotationVector::new(g, a).unwrap();
    let (r, rp) = (vec![AngleValue::zero(), alpha()], vec![alpha(), alpha()]);
    let so = decide(GroupId::So3xS1, ConjugacyMode::Topological, &mk(GroupId::So3xS1, r.clone()), &mk(GroupId::So3xS1, rp.clone())).unwrap();
    let (sr, srp) = (mk(GroupId::SpinC3, r), mk(GroupId::SpinC3, rp));
    let sp = decide(GroupId::SpinC3, ConjugacyMode::Topological, &sr, &srp).unwrap();
    let err = witness_error(&sr, &srp);
    let passed = so.status == Status::NotConjugate
        && so.reason == Some(Reason::OddCoefficient)
        && sp.is_conjugate()
        && sp.solution.map(|s| s.n) == Some(1)
        && matches!(err, Ok(e) if e < 1e-9);
    let detail = format!(
        "SO3xS1: {:?}/{}, SpinC3: {:?} n={}, witness error {}",
        so.status,
        so.reason.map_or("-", |r| r.code()),
        sp.status,
        sp.solution.map_or("-".to_string(), |s| s.n.to_string()),
        err.as_ref().map_or_else(|e| e.clone(), |e| format!("{e:.2e}"))
    );
    finish(3, "SO3xS1 vs SpinC3 separation", start, passed, detail)
}

fn modes(g: GroupId, rho: &RotationVector, rp: &RotationVector) -> [Verdict; 3] {
    ConjugacyMode::ALL.map(|m| decide(g, m, rho, rp).unwrap())
}

pub fn criterion_4() -> CriterionResult {
    let start = Instant::now();
    let q = AngleValue::ratio(1, 4);
    let rho = |g| RotationVector::new(g, vec![q.clone(), alpha()]).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, k) in [(GroupId::U2, 2), (GroupId::So3xS1, 2), (GroupId::SpinC3, 1)] {
        let r = rho(g);
        let rp = transform(&r, Sign::Plus, k, 0, Sign::Plus);
        let [top, smooth, alg] = modes(g, &r, &rp);
        let split = top.is_conjugate() && smooth.is_conjugate();
        let alg_ok = match g {
            GroupId::SpinC3 => match alg.status {
                Status::NotConjugate => alg.reason == Some(Reason::DescentRefutation),
                Status::Unknown => alg.reason == Some(Reason::SemiDecisionGap),
                Status::Conjugate => false,
            },
            _ => alg.status == Status::NotConjugate,
        };
        ok &= split && alg_ok;
        parts.push(format!("{g}: {:?}/{:?}/{:?} ({})", top.status, smooth.status, alg.status, alg.reason.map_or("-", |r| r.code())));
    }
    finish(4, "topological/smooth vs algebraic splits", start, ok, parts.join("; "))
}

pub fn criterion_5(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
    let mut mismatches = 0;
    let mut conj = 0;
    for g in GroupId::ALL {
        for _ in 0..500 {
            let (rho, rp) = if rng.gen_bool(0.5) {
                engineered_pair(g, &mut rng)
            } else {
                let rho = random_rho(g, &mut rng);
                let k = rng.gen_range(-5..=5);
                let rp = transform(&rho, random_sign(&mut rng), k, rng.gen_range(-3..=3), random_sign(&mut rng));
                let rp = if rng.gen_bool(0.3) { random_rho(g, &mut rng) } else { rp };
                (rho, rp)
            };
            let top = decide(g, ConjugacyMode::Topological, &rho, &rp).unwrap();
            let smooth = decide(g, ConjugacyMode::Smooth, &rho, &rp).unwrap();
            conj += top.is_conjugate() as usize;
            mismatches += (top != smooth) as usize;
        }
    }
    let detail = format!("2500 pairs ({conj} conjugate), {mismatches} mismatches");
    finish(5, "smooth equals topological", start, mismatches == 0, detail)
}

pub fn criterion_6() -> CriterionResult {
    let start = Instant::now();
    let basis = IrrationalBasis::standard();
    let mut failures = Vec::new();
    let mut cases = 0;
    for (p, q) in farey(7) {
        cases += 1;
        let rho = RotationVector::new(GroupId::U2, vec![AngleValue::ratio(p, q), alpha()]).unwrap();
        let exact = classify_orbit_closure(&rho).unwrap();
        let pts: Vec<GroupElement<f64>> = sample_orbit(&rho, 5000, &basis).unwrap();
        let counted = count_components(&pts, 0.05);
        let is_circles = matches!(exact, OrbitClosure::Circles { count, .. } if count == q as u64);
        if !is_circles || counted != q as usize {
            failures.push(format!("({p}/{q}, alpha): exact {exact:?}, counted {counted}"));
        }
    }
    let fr6 = farey(6);
    for &(a, b) in &fr6 {
        for &(c, d) in &fr6 {
            cases += 1;
            let rho = RotationVector::new(GroupId::U2, vec![AngleValue::ratio(a, b), AngleValue::ratio(c, d)]).unwrap();
            let want = b.lcm(&d) as u64;
            let exact = classify_orbit_closure(&rho).unwrap();
            let pts: Vec<GroupElement<f64>> = sample_orbit(&rho, 5000, &basis).unwrap();
            let counted = count_components(&pts, 0.05) as u64;
            if exact != (OrbitClosure::FinitePoints { count: want }) || counted != want {
                failures.push(format!("({a}/{b}, {c}/{d}): exact {exact:?}, counted {counted}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{cases} vectors, {} failures{}", failures.len(), first(&failures));
    finish(6, "orbit-closure oracle agreement", start, failures.is_empty() && secs < 120.0, detail)
}

/// The coverings exercised by the suite.
pub fn suite_coverings() -> [Covering; 5] {
    [Covering::Su2ToSo3, Covering::U2ToSo3xS1, Covering::U2ToSpinC3, Covering::U2SelfCover(3), Covering::SpinC3ToSo3xS1]
}

pub fn criterion_7(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let basis = IrrationalBasis::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
    let mut failures = Vec::new();
    let mut worst_hom = 0.0f64;
    for c in suite_coverings() {
        for _ in 0..1000 {
            let a: GroupElement<f64> = sample_haar(c.cover(), &mut rng);
            let b: GroupElement<f64> = sample_haar(c.cover(), &mut rng);
            let lhs = c.project(&c.upstairs_product(&a, &b).unwrap()).unwrap();
            let rhs = c.base_product(&c.project(&a).unwrap(), &c.project(&b).unwrap()).unwrap();
            worst_hom = worst_hom.max(lhs.dist(&rhs).unwrap());
        }
        for i in 0..200 {
            let rho = random_rho(c.base(), &mut rng);
            let want: GroupElement<f64> = torus_element(&rho, &basis).unwrap();
            for l in c.lift_rotation_vectors(&rho).unwrap() {
                let up: GroupElement<f64> = torus_element(&l, &basis).unwrap();
                let back = c.project(&up).unwrap();
                if c.pushforward(&l).unwrap() != rho || back.dist(&want).unwrap() > 1e-12 {
                    failures.push(format!("{c}: lift {l:?} does not project to {rho:?}"));
                }
            }
            let g = c.base();
            let rp = if i % 4 == 3 {
                random_rho(g, &mut rng)
            } else {
                transform(&rho, random_sign(&mut rng), rng.gen_range(-5..=5), rng.gen_range(-3..=3), random_sign(&mut rng))
            };
            let up = c.check_lift_correspondence(&rho, &rp).unwrap();
            let down = decide(g, ConjugacyMode::Topological, &rho, &rp).unwrap().is_conjugate();
            if up != down {
                failures.push(format!("{c}: lift correspondence {up} vs downstairs {down}"));
            }
        }
    }
    if worst_hom > 1e-12 {
        failures.push(format!("homomorphism defect {worst_hom:.2e}"));
    }
    let detail = format!("homomorphism defect {worst_hom:.2e}, {} failures{}", failures.len(), first(&failures));
    finish(7, "covering homomorphism and lifts", start, failures.is_empty(), detail)
}

pub fn criterion_8(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 8);
    let mut bad = 0;
    for _ in 0..500 {
        let u: GroupElement<f64> = sample_haar(GroupId::U2, &mut rng);
        let ok = weyl_reductions(&u).ok().is_some_and(|[a, b]| {
            let v = decide(GroupId::U2, ConjugacyMode::Topological, &a.rho, &b.rho).unwrap();
            // The relation itself: θ' = -θ - φ + n', φ' = φ.
            let rel = transform(&a.rho, Sign::Minus, -1, 0, Sign::Plus);
            v.is_conjugate() && rel.angles == b.rho.angles
        });
        bad += (!ok) as usize;
    }
    finish(8, "Weyl ambiguity", start, bad == 0, format!("500 matrices, {bad} failures"))
}

pub fn criterion_9() -> CriterionResult {
    let start = Instant::now();
    let theta = std::f64::consts::SQRT_2 - 1.0;
    let rigid = estimate_rotation_number(|x| x + theta, 100);
    let rigid_err = (rigid - theta).abs();
    let f = |x: f64| x + theta + 0.2 / std::f64::consts::TAU * (std::f64::consts::TAU * x).sin();
    let circ = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(1.0);
        d.min(1.0 - d)
    };
    let reference = estimate_rotation_number(f, 1_000_000);
    let e3 = circ(estimate_rotation_number(f, 1_000), reference);
    let e5 = circ(estimate_rotation_number(f, 100_000), reference);
    let passed = rigid_err < 1e-12 && e5 < e3;
    let detail = format!("rigid error {rigid_err:.1e}; perturbed error {e3:.2e} at 1e3, {e5:.2e} at 1e5");
    finish(9, "rotation-number estimator", start, passed, detail)
}

/// Run every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_1(seed),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(seed),
        criterion_6(),
        criterion_7(seed),
        criterion_8(seed),
        criterion_9(),
    ]
}

/// One line per criterion.
pub fn format_table(results: &[CriterionResult]) -> String {
    results
        .iter()
        .map(|r| {
            format!("[{}] {}. {} ({:.2}s): {}\n", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, r.seconds, r.detail)
        })
        .collect()
}
