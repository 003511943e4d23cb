//! Difference-bound-matrix algebra over a fixed clock set, plus federations
//! (finite unions of zones).
//!
//! The matrix entries are generic over the bound scalar; `i64` is used by the
//! rest of the crate (see the aliases at the crate root).

mod bound;
mod dbm;
mod federation;
pub mod grid;

pub use bound::{Bound, BoundValue};
pub use dbm::{Dbm, RayWindow};
pub use federation::Federation;
