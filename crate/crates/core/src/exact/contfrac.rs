//! Continued-fraction rational recognition.

/// Convergents and semiconvergents of `x` with denominator at most `max_den`,
/// in order of increasing denominator.
pub fn approximants(x: f64, max_den: u64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    // h/k recurrences: (h_{-1}, k_{-1}) = (1, 0), (h_{-2}, k_{-2}) = (0, 1).
    let (mut h1, mut k1): (i128, i128) = (1, 0);
    let (mut h2, mut k2): (i128, i128) = (0, 1);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        // Semiconvergents (h2 + j·h1)/(k2 + j·k1) for j in ⌈a/2⌉..a.
        let j_cap = if k1 > 0 { (max_den as i128 - k2) / k1 } else { 0 };
        for j in ((a + 1) / 2).max(1)..a.min(j_cap + 1) {
            out.push(((h2 + j * h1) as i64, (k2 + j * k1) as u64));
        }
        let (h, k) = (a * h1 + h2, a * k1 + k2);
        if k as u64 > max_den {
            break;
        }
        out.push((h as i64, k as u64));
        (h2, k2, h1, k1) = (h1, k1, h, k);
        let r = y - a as f64;
        if r.abs() < 1e-300 {
            break;
        }
        y = 1.0 / r;
    }
    out.sort_by_key(|&(_, k)| k);
    out.dedup();
    out
}

/// Smallest-denominator `p/q` with `q ≤ max_den` and `|x - p/q| ≤ tol`.
pub fn recognize(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    approximants(x, max_den)
        .into_iter()
        .find(|&(p, q)| (x - p as f64 / q as f64).abs() <= tol)
}

/// Like [`recognize`] but for a point of ℝ/ℤ: the distance is taken mod 1 and
/// the result is reduced to `0 ≤ p < q`.
pub fn recognize_mod1(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    let y = x.rem_euclid(1.0);
    let (p, q) = recognize(y, max_den, tol).or_else(|| recognize(y - 1.0, max_den, tol))?;
    Some((p.rem_euclid(q as i64), q))
}
