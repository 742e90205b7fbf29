//! Rotation numbers of circle homeomorphisms from a lift.

/// `frac(Fⁿ(0)/n)` for a lift `F: ℝ → ℝ` of an orientation-preserving circle
/// homeomorphism.
pub fn estimate_rotation_number(lift: impl Fn(f64) -> f64, n: u64) -> f64 {
    assert!(n > 0, "iteration count must be positive");
    let mut x = 0.0;
    for _ in 0..n {
        x = lift(x);
    }
    (x / n as f64).rem_euclid(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rigid_rotation() {
        let r = estimate_rotation_number(|x| x + 0.3, 100);
        assert!((r - 0.3).abs() < 1e-12);
    }

    #[test]
    fn perturbed_rotation_is_near_base() {
        let f = |x: f64| x + 0.7 + 0.01 * (2.0 * std::f64::consts::PI * x).sin();
        let r = estimate_rotation_number(f, 10_000);
        assert!((r - 0.7).abs() < 0.02);
    }
}
