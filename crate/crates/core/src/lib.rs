//! Covering relations between Dehn surgeries on torus knots.
//!
//! The crate decides whether one surgery `S³_{p/q}(T(r,s))` covers another
//! using exact arithmetic on Seifert invariants and on covers of 2-orbifolds,
//! and audits hyperbolic knots from ingested cusp and volume data.
//!
//! Layout:
//! - [`slope`], [`seifert`], [`lens`], [`forms`]: exact invariants and canonical forms.
//! - [`moser`]: classification of torus knot surgeries.
//! - [`orbifold`]: orbifold Euler characteristic, partition systems, the
//!   permutation-triple oracle and the closed-form cover tables.
//! - [`sfscover`]: fiberwise and pullback covers and the cover decision.
//! - [`hyperbolic`]: slope lengths, short-slope enumeration and the volume audit.

pub mod error;
pub mod forms;
pub mod hyperbolic;
pub mod lens;
pub mod moser;
pub mod orbifold;
pub mod par;
pub mod seifert;
pub mod sfscover;
pub mod slope;

pub use error::{Error, Result};
pub use lens::LensSpace;
pub use orbifold::Orbifold2;
pub use seifert::{Fiber, SeifertInvariants};
pub use slope::{Slope, TorusKnot};
