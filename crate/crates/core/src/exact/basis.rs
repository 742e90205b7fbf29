//! Declared irrational symbols and their numeric values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::contfrac;
use super::ExactError;

/// Denominator cap used when checking that a basis value is not rational.
pub const BASIS_RATIONAL_CAP: u64 = 1_000_000;
/// Distance below which a basis value is treated as a rational.
pub const BASIS_RATIONAL_TOL: f64 = 1e-12;

/// Symbols declared rationally independent of each other and of 1.
///
/// Only the value of each symbol is checked here. Mutual independence is a
/// contract of the caller.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BasisWire", into = "BasisWire")]
pub struct IrrationalBasis {
    symbols: Vec<String>,
    numeric: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct BasisWire {
    symbols: Vec<String>,
    numeric: BTreeMap<String, f64>,
}

impl TryFrom<BasisWire> for IrrationalBasis {
    type Error = ExactError;
    fn try_from(w: BasisWire) -> Result<Self, ExactError> {
        let mut pairs = Vec::new();
        for s in &w.symbols {
            let v = w
                .numeric
                .get(s)
                .ok_or_else(|| ExactError::BasisMismatch(format!("no numeric value for `{s}`")))?;
            pairs.push((s.clone(), *v));
        }
        if let Some(extra) = w.numeric.keys().find(|k| !w.symbols.contains(k)) {
            return Err(ExactError::BasisMismatch(format!("value given for undeclared symbol `{extra}`")));
        }
        IrrationalBasis::new(pairs)
    }
}

impl From<IrrationalBasis> for BasisWire {
    fn from(b: IrrationalBasis) -> Self {
        BasisWire { symbols: b.symbols, numeric: b.numeric }
    }
}

impl IrrationalBasis {
    pub fn new(pairs: Vec<(String, f64)>) -> Result<Self, ExactError> {
        let mut basis = IrrationalBasis::default();
        for (s, v) in pairs {
            if s.is_empty() || s.starts_with('~') {
                return Err(ExactError::InvalidBasis(format!("bad symbol name `{s}`")));
            }
            if basis.numeric.contains_key(&s) {
                return Err(ExactError::InvalidBasis(format!("duplicate symbol `{s}`")));
            }
            if !v.is_finite() {
                return Err(ExactError::InvalidBasis(format!("`{s}` is not finite")));
            }
            if let Some((p, q)) = contfrac::recognize(v, BASIS_RATIONAL_CAP, BASIS_RATIONAL_TOL) {
                return Err(ExactError::InvalidBasis(format!("`{s}` = {v} is numerically the rational {p}/{q}")));
            }
            basis.symbols.push(s.clone());
            basis.numeric.insert(s, v);
        }
        Ok(basis)
    }

    /// The two-symbol basis used by tests and the self-test: `alpha = √2 - 1`, `beta = √5 - 2`.
    pub fn standard() -> Self {
        IrrationalBasis::new(vec![
            ("alpha".into(), std::f64::consts::SQRT_2 - 1.0),
            ("beta".into(), 5f64.sqrt() - 2.0),
        ])
        .expect("standard basis is valid")
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn contains(&self, s: &str) -> bool {
        self.numeric.contains_key(s)
    }

    pub fn value(&self, s: &str) -> Result<f64, ExactError> {
        self.numeric
            .get(s)
            .copied()
            .ok_or_else(|| ExactError::BasisMismatch(format!("symbol `{s}` is not in the basis")))
    }

    /// Check that every named symbol of `a` is declared.
    pub fn validate(&self, a: &super::AngleValue) -> Result<(), ExactError> {
        for s in a.symbols() {
            if let super::Symbol::Named(name) = s {
                self.value(name)?;
            }
        }
        Ok(())
    }
}
