//! Exact and numerical algebra for linear delay-differential operators with
//! commensurate delays.
//!
//! An operator is an element of the ring `H` of quotients `p(z, σ)/φ(z)`
//! whose characteristic function `p(z, e^z)/φ(z)` is entire; `z` acts as
//! `d/dx` and `σ` as the unit shift `f(x) ↦ f(x + 1)`.

pub mod charzeros;
pub mod config;
pub mod currents;
pub mod division;
pub mod error;
pub mod exppoly;
pub mod hefer;
pub mod json;
pub mod hring;
pub mod matsmith;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod synthesis;

pub use error::{Error, Result};
pub use exppoly::{ExpPoly, RatExpPoly};
pub use hring::{HElement, Unit};
pub use poly::{PolyC, RatFunc};
pub use scalar::GaussianRational;
