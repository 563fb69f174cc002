//! Polynomial containers, root solving and the small dense linear algebra
//! the rest of the crate is built on.

pub mod form;
pub mod linalg;
pub mod poly;
pub mod scalar;

pub use form::MultiForm;
pub use poly::{RootPartition, UniPoly};
pub use scalar::{c64, Scalar, C64};
