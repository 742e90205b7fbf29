//! Exact angles in ℝ/ℤ over a basis of rationally independent symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::basis::IrrationalBasis;
use super::ExactError;

/// A generator of the angle module.
///
/// `Named` symbols are declared rationally independent of each other and of 1.
/// `Anonymous` symbols stand for numeric angles that failed rational
/// recognition; their value is the symbol itself and nothing is known about
/// their independence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Named(String),
    Anonymous(AnonValue),
}

/// Bit pattern of an `f64` in `[0, 1)`, ordered by value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AnonValue(u64);

impl AnonValue {
    pub fn new(x: f64) -> Self {
        let x = x.rem_euclid(1.0);
        let x = if x >= 1.0 { 0.0 } else { x };
        AnonValue((x + 0.0).to_bits())
    }

    pub fn value(self) -> f64 {
        f64::from_bits(self.0)
    }
}

impl PartialOrd for AnonValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AnonValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value().total_cmp(&other.value())
    }
}

impl Symbol {
    pub fn named(s: impl Into<String>) -> Self {
        Symbol::Named(s.into())
    }

    pub fn is_anonymous(&self) -> bool {
        matches!(self, Symbol::Anonymous(_))
    }

    /// Parse the wire form: anonymous symbols are written `~<f64>`.
    pub fn parse(key: &str) -> Result<Self, ExactError> {
        if let Some(rest) = key.strip_prefix('~') {
            let x: f64 = rest
                .parse()
                .map_err(|_| ExactError::Parse(format!("bad anonymous symbol `{key}`")))?;
            if !(0.0..1.0).contains(&x) {
                return Err(ExactError::Parse(format!("anonymous symbol `{key}` outside [0,1)")));
            }
            Ok(Symbol::Anonymous(AnonValue::new(x)))
        } else if key.is_empty() {
            Err(ExactError::Parse("empty symbol name".into()))
        } else {
            Ok(Symbol::Named(key.to_string()))
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Named(s) => f.write_str(s),
            Symbol::Anonymous(a) => write!(f, "~{:?}", a.value()),
        }
    }
}

/// An element `c + Σ aᵢ·symᵢ` of ℚ ⊕ ⊕ᵢ ℚ·symᵢ, not reduced mod ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearForm {
    pub constant: BigRational,
    pub coeffs: BTreeMap<Symbol, BigRational>,
}

impl LinearForm {
    pub fn constant(c: BigRational) -> Self {
        LinearForm { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when the form is an integer, i.e. zero in ℝ/ℤ.
    pub fn is_integer(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_integer()
    }

    pub fn coeff(&self, s: &Symbol) -> BigRational {
        self.coeffs.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, m: &BigRational) -> Self {
        if m.is_zero() {
            return LinearForm::default();
        }
        LinearForm {
            constant: &self.constant * m,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * m)).collect(),
        }
    }

    pub fn scale_int(&self, m: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(m)))
    }

    pub fn reduce(&self) -> AngleValue {
        AngleValue { rational: frac(&self.constant), coeffs: self.coeffs.clone() }
    }

    fn add_coeffs(&mut self, other: &BTreeMap<Symbol, BigRational>, sign: bool) {
        for (k, v) in other {
            let entry = self.coeffs.entry(k.clone()).or_insert_with(BigRational::zero);
            if sign {
                *entry += v;
            } else {
                *entry -= v;
            }
        }
        self.coeffs.retain(|_, v| !v.is_zero());
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        out.add_coeffs(&rhs.coeffs, true);
        out
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.constant -= &rhs.constant;
        out.add_coeffs(&rhs.coeffs, false);
        out
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm {
            constant: -&self.constant,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

/// An angle in ℝ/ℤ: rational part in `[0, 1)` plus sparse symbolic coefficients.
///
/// The representation is canonical, so structural equality is equality mod ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AngleValue {
    rational: BigRational,
    coeffs: BTreeMap<Symbol, BigRational>,
}

pub(crate) fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl AngleValue {
    pub fn zero() -> Self {
        AngleValue::default()
    }

    pub fn new(rational: BigRational, coeffs: BTreeMap<Symbol, BigRational>) -> Self {
        LinearForm { constant: rational, coeffs: coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
            .reduce()
    }

    pub fn from_rational(r: BigRational) -> Self {
        AngleValue { rational: frac(&r), coeffs: BTreeMap::new() }
    }

    /// The rational angle `n/d`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `coeff · sym`.
    pub fn symbol(sym: &str, coeff: BigRational) -> Self {
        Self::new(BigRational::zero(), BTreeMap::from([(Symbol::named(sym), coeff)]))
    }

    pub fn anonymous(x: f64) -> Self {
        Self::new(BigRational::zero(), BTreeMap::from([(Symbol::Anonymous(AnonValue::new(x)), BigRational::one())]))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn coeffs(&self) -> &BTreeMap<Symbol, BigRational> {
        &self.coeffs
    }

    /// The representative with rational part in `[0, 1)`.
    pub fn lift(&self) -> LinearForm {
        LinearForm { constant: self.rational.clone(), coeffs: self.coeffs.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_anonymous(&self) -> bool {
        self.coeffs.keys().any(Symbol::is_anonymous)
    }

    /// `(p, q)` with `self = q/p`, `p ≥ 1`, `0 ≤ q < p`, when rational.
    pub fn as_fraction(&self) -> Option<(BigInt, BigInt)> {
        self.is_rational().then(|| (self.rational.denom().clone(), self.rational.numer().clone()))
    }

    /// Denominator of a rational angle.
    pub fn denominator(&self) -> Option<BigInt> {
        self.as_fraction().map(|(p, _)| p)
    }

    pub fn scale(&self, m: &BigRational) -> Self {
        self.lift().scale(m).reduce()
    }

    pub fn scale_int(&self, m: i64) -> Self {
        self.lift().scale_int(m).reduce()
    }

    /// Value in `[0, 1)` using the basis for named symbols.
    pub fn to_f64(&self, basis: &IrrationalBasis) -> Result<f64, ExactError> {
        let mut acc = self.rational.to_f64().unwrap_or(0.0);
        for (sym, c) in &self.coeffs {
            let x = match sym {
                Symbol::Named(s) => basis.value(s)?,
                Symbol::Anonymous(a) => a.value(),
            };
            // Split the coefficient into integer and fractional parts so that
            // large coefficients keep precision after reduction.
            let whole = c.floor();
            let part = (c - &whole).to_f64().unwrap_or(0.0);
            let w = whole.to_integer();
            let wx = match w.to_i64() {
                Some(k) => (k as f64 * x).rem_euclid(1.0),
                None => (w.to_f64().unwrap_or(0.0) * x).rem_euclid(1.0),
            };
            acc += wx + part * x;
        }
        Ok(acc.rem_euclid(1.0))
    }

    /// Symbols referenced by this angle.
    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.coeffs.keys()
    }

    /// Replace a symbol by a linear form.
    pub fn substitute(&self, sym: &Symbol, with: &LinearForm) -> Self {
        let Some(c) = self.coeffs.get(sym) else { return self.clone() };
        let mut base = self.lift();
        base.coeffs.remove(sym);
        (&base + &with.scale(c)).reduce()
    }
}

impl Add for &AngleValue {
    type Output = AngleValue;
    fn add(self, rhs: &AngleValue) -> AngleValue {
        (&self.lift() + &rhs.lift()).reduce()
    }
}

impl Sub for &AngleValue {
    type Output = AngleValue;
    fn sub(self, rhs: &AngleValue) -> AngleValue {
        (&self.lift() - &rhs.lift()).reduce()
    }
}

impl Neg for &AngleValue {
    type Output = AngleValue;
    fn neg(self) -> AngleValue {
        (-&self.lift()).reduce()
    }
}

/// `a + b` in ℝ/ℤ.
pub fn angle_add(a: &AngleValue, b: &AngleValue) -> AngleValue {
    a + b
}

/// `m·a` in ℝ/ℤ.
pub fn angle_scale(a: &AngleValue, m: &BigRational) -> AngleValue {
    a.scale(m)
}

/// Whether `a` has no symbolic part.
pub fn is_rational(a: &AngleValue) -> bool {
    a.is_rational()
}

/// `(p, q)` with `a = q/p`, `0 ≤ q < p`.
pub fn as_fraction(a: &AngleValue) -> Option<(BigInt, BigInt)> {
    a.as_fraction()
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p/q"`, an integer, or an exact decimal such as `"0.375"`.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(format!("not a rational literal: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ExactError::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, fracpart) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && fracpart.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(fracpart.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{fracpart}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let d = num_traits::pow(BigInt::from(10), fracpart.len());
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

impl fmt::Display for AngleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.rational))?;
        for (s, c) in &self.coeffs {
            if c.is_negative() {
                write!(f, " - {}·{}", fmt_rational(&-c), s)?;
            } else {
                write!(f, " + {}·{}", fmt_rational(c), s)?;
            }
        }
        Ok(())
    }
}

impl Serialize for AngleValue {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let coeffs: BTreeMap<String, String> =
            self.coeffs.iter().map(|(k, v)| (k.to_string(), fmt_rational(v))).collect();
        let mut st = ser.serialize_struct("AngleValue", 2)?;
        st.serialize_field("rational", &fmt_rational(&self.rational))?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for AngleValue {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        AngleValue::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl AngleValue {
    /// Accepts the object form, a rational or decimal string, or a JSON number
    /// (read as the decimal literal it prints as).
    pub fn from_json(v: &serde_json::Value) -> Result<Self, ExactError> {
        use serde_json::Value;
        match v {
            Value::String(s) => Ok(AngleValue::from_rational(parse_rational(s)?)),
            Value::Number(n) => Ok(AngleValue::from_rational(parse_rational(&n.to_string())?)),
            Value::Object(map) => {
                for k in map.keys() {
                    if k != "rational" && k != "coeffs" {
                        return Err(ExactError::Parse(format!("unexpected field `{k}` in angle")));
                    }
                }
                let rational = match map.get("rational") {
                    None => BigRational::zero(),
                    Some(Value::String(s)) => parse_rational(s)?,
                    Some(Value::Number(n)) => parse_rational(&n.to_string())?,
                    Some(other) => return Err(ExactError::Parse(format!("bad rational part {other}"))),
                };
                let mut coeffs = BTreeMap::new();
                match map.get("coeffs") {
                    None | Some(Value::Null) => {}
                    Some(Value::Object(cs)) => {
                        for (k, c) in cs {
                            let c = match c {
                                Value::String(s) => parse_rational(s)?,
                                Value::Number(n) => parse_rational(&n.to_string())?,
                                other => return Err(ExactError::Parse(format!("bad coefficient {other}"))),
                            };
                            coeffs.insert(Symbol::parse(k)?, c);
                        }
                    }
                    Some(other) => return Err(ExactError::Parse(format!("bad coeffs {other}"))),
                }
                Ok(AngleValue::new(rational, coeffs))
            }
            other => Err(ExactError::Parse(format!("not an angle: {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(c: BigRational) -> AngleValue {
        AngleValue::symbol("alpha", c)
    }

    #[test]
    fn rational_addition_wraps() {
        assert_eq!(&AngleValue::ratio(1, 3) + &AngleValue::ratio(2, 3), AngleValue::zero());
        assert_eq!(&AngleValue::ratio(3, 4) + &AngleValue::ratio(1, 2), AngleValue::ratio(1, 4));
    }

    #[test]
    fn symbolic_scale_keeps_coefficient() {
        let a = &AngleValue::ratio(1, 5) + &alpha(rat(1, 1));
        let b = a.scale_int(3);
        assert_eq!(b.rational_part(), &rat(3, 5));
        assert_eq!(b.coeffs()[&Symbol::named("alpha")], rat(3, 1));
    }

    #[test]
    fn fraction_form() {
        let (p, q) = AngleValue::ratio(-1, 3).as_fraction().unwrap();
        assert_eq!((p, q), (BigInt::from(3), BigInt::from(2)));
        assert!(alpha(rat(1, 2)).as_fraction().is_none());
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("-2/6").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn json_forms() {
        let a = &AngleValue::ratio(1, 3) + &alpha(rat(-1, 2));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rational":"1/3","coeffs":{"alpha":"-1/2"}}"#);
        assert_eq!(serde_json::from_str::<AngleValue>(&s).unwrap(), a);
        assert_eq!(serde_json::from_str::<AngleValue>("0.3").unwrap(), AngleValue::ratio(3, 10));
        assert_eq!(serde_json::from_str::<AngleValue>(r#""5/4""#).unwrap(), AngleValue::ratio(1, 4));
        assert!(serde_json::from_str::<AngleValue>(r#"{"rational":"1/3","bogus":1}"#).is_err());
    }

    #[test]
    fn anonymous_symbol_round_trips() {
        let a = AngleValue::anonymous(0.123456789);
        let key = a.symbols().next().unwrap().to_string();
        assert_eq!(Symbol::parse(&key).unwrap(), a.symbols().next().unwrap().clone());
    }

    #[test]
    fn numeric_value_of_large_coefficient() {
        let basis = IrrationalBasis::new(vec![("alpha".into(), std::f64::consts::SQRT_2 - 1.0)]).unwrap();
        let a = alpha(rat(1_000_001, 1));
        let x = a.to_f64(&basis).unwrap();
        let direct = ((std::f64::consts::SQRT_2 - 1.0) * 1_000_001.0).rem_euclid(1.0);
        assert!((x - direct).abs() < 1e-8);
    }
}
