//! Computational core for real sextic curves on quadric surfaces and
//! hyperelliptic curves: tracing of real loci, separating morphisms,
//! degree vectors and the semigroups they generate.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, plotting and the
//! command line live in the companion `sepsemi` crate.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod curve;
pub mod error;
pub mod hyper;
pub mod morphism;
pub mod quadric;
pub mod realize;
pub mod semigroup;
pub mod topology;

pub use error::{Error, Result};

/// Serde adapter for bounds that may be +∞ (JSON has no infinity): +∞ is
/// written as null and null reads back as +∞.
pub(crate) mod inf_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_some(x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}
