//! Exact computations in torus-equivariant oriented cohomology of flag
//! varieties `G/P`, through the algebraic model built from a root datum and a
//! formal group law: the formal group algebra, twisted group algebras with
//! formal Demazure and push-pull elements, and their duals carrying
//! Bott-Samelson classes, invariants, image criteria and the push-forward
//! pairing.
//!
//! All power series are truncated at a fixed total degree and carry their
//! precision; results that depend on exact divisions report the degree up to
//! which they are certified.

pub mod algebra;
pub mod context;
pub mod dual;
pub mod error;
pub mod fgl;
pub mod hecke;
pub mod io;
pub mod lattice;
pub mod ring;
pub mod root_system;
pub mod series;
pub mod verify;

pub use algebra::FormalGroupAlgebra;
pub use context::{Context, ContextBuilder, FglSpec};
pub use dual::{DualElem, Model};
pub use error::{Error, Result};
pub use fgl::{FglKind, FormalGroupLaw};
pub use hecke::{QElem, QWElem};
pub use ring::{Ring, RingElem};
pub use root_system::{CosetTable, LatticeKind, ParabolicSubset, RootDatum, WeylElement, WeylGroup};
pub use series::{Monomial, Series};
