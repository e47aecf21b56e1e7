//! Root data of finite type, their Weyl groups with canonical reduced words
//! and Bruhat order, and parabolic coset combinatorics.

mod datum;
mod parabolic;
mod weyl;

pub use datum::{DynkinFamily, DynkinType, LatticeKind, Root, RootDatum};
pub use parabolic::{CosetTable, ParabolicSubset};
pub use weyl::{WeylElement, WeylGroup, DEFAULT_MAX_WEYL};
