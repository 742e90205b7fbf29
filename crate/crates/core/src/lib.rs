//! Conjugacy of left translations on SU(2), U(2), SO(3), SO(3)×S¹ and
//! Spin^ℂ(3).
//!
//! Decisions are made exactly on rotation vectors ([`exact`]); the numeric
//! layer ([`group`], [`witness`], [`covering`], [`orbit`]) is generic over
//! [`scalar::Real`], with `f64` aliases below.

pub mod acceptance;
pub mod classify;
pub mod covering;
pub mod exact;
pub mod group;
pub mod orbit;
pub mod scalar;
pub mod verdict;
pub mod witness;

pub use classify::{decide, decide_elements, ConjugacyMode};
pub use covering::Covering;
pub use exact::{AngleValue, IrrationalBasis};
pub use group::{GroupId, RotationVector};
pub use orbit::OrbitClosure;
pub use verdict::{Reason, Sign, Status, Verdict};

pub type Element = group::GroupElement<f64>;
pub type Element32 = group::GroupElement<f32>;
pub type Witness = witness::Witness<f64>;
pub type Witness32 = witness::Witness<f32>;
pub type Reduction = group::TorusReduction<f64>;
