//! Classifier verdicts and lattice solutions.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A sign `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i64() as i8
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be 1 or -1, got {v}")),
        }
    }
}

/// `θ' = s·θ + (M·n)·φ + n'` for the multiplier `M` used by the solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSolution {
    pub sign: Sign,
    pub n: i64,
    pub n_prime: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Conjugate,
    NotConjugate,
    Unknown,
}

/// Structured reason attached to non-conjugate and unknown verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// Rational rotations of different orders.
    OrbitCardinality,
    /// Same order, but `θ' ≢ ±θ`.
    PmExhausted,
    /// One rotation rational, the other not.
    ClosureType,
    /// Irrational rotations with `θ' ≢ ±θ`.
    RotationMismatch,
    /// `φ' ≢ ±φ`.
    PhiMismatch,
    /// A solution exists only with an odd multiple of `φ`.
    OddCoefficient,
    /// No integer `n` solves the `θ` equation.
    NoLatticeSolution,
    /// Eigenvalue multisets differ up to complex conjugation.
    EigenvalueMultiset,
    /// Not related by any automorphism of the torus factors.
    AutomorphismOrbit,
    /// The projection to the quotient already fails.
    DescentRefutation,
    /// Neither the sufficient test nor the descent refutation applies.
    SemiDecisionGap,
    /// Bounded search exhausted.
    BeyondBound,
    /// A refutation would depend on an unrecognised numeric angle.
    OpaqueAngle,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::OrbitCardinality => "orbit-cardinality",
            Reason::PmExhausted => "pm-exhausted",
            Reason::ClosureType => "closure-type",
            Reason::RotationMismatch => "rotation-mismatch",
            Reason::PhiMismatch => "phi-mismatch",
            Reason::OddCoefficient => "odd-coefficient",
            Reason::NoLatticeSolution => "no-lattice-solution",
            Reason::EigenvalueMultiset => "eigenvalue-multiset",
            Reason::AutomorphismOrbit => "automorphism-orbit",
            Reason::DescentRefutation => "descent-refutation",
            Reason::SemiDecisionGap => "semi-decision-gap",
            Reason::BeyondBound => "beyond-bound",
            Reason::OpaqueAngle => "opaque-angle",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solution: Option<LatticeSolution>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phi_sign: Option<Sign>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub torus_matrix: Option<[[i64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<Reason>,
}

impl Verdict {
    pub fn conjugate(solution: LatticeSolution, phi_sign: Option<Sign>) -> Self {
        Verdict { status: Status::Conjugate, solution: Some(solution), phi_sign, torus_matrix: None, reason: None }
    }

    pub fn not_conjugate(reason: Reason) -> Self {
        Verdict { status: Status::NotConjugate, solution: None, phi_sign: None, torus_matrix: None, reason: Some(reason) }
    }

    pub fn unknown(reason: Reason) -> Self {
        Verdict { status: Status::Unknown, solution: None, phi_sign: None, torus_matrix: None, reason: Some(reason) }
    }

    pub fn is_conjugate(&self) -> bool {
        self.status == Status::Conjugate
    }

    /// Downgrade a refutation to `Unknown` when it rests on opaque angles.
    pub(crate) fn guard_opaque(self, opaque: bool) -> Self {
        if opaque && self.status == Status::NotConjugate {
            Verdict::unknown(Reason::OpaqueAngle)
        } else {
            self
        }
    }
}
