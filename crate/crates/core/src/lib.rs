//! Finite set-theoretic solutions of the braid relation (nondegenerate
//! braided sets) and the machinery around them.
//!
//! The crate is organized by subsystem:
//!
//! - [`braided`]: the table representation `S(x,y) = (g_x(y), f_y(x))`, the
//!   pointwise predicates, the derived solution and twisted braid actions.
//! - [`quotients`]: finite permutation images of the structure group and the
//!   derived structure group, and the rank.
//! - [`injectivity`]: the module-lattice injectivity criterion.
//! - [`cocycle`]: bijective 1-cocycles on explicit finite groups, the word
//!   cocycle into the finite derived quotient, and solutions built from
//!   cocycle data.
//! - [`linear`]: linear and affine solutions on `(Z_m)^k`.
//! - [`enumerate`]: exhaustive census of small solutions up to relabeling.
//!
//! Exhaustive loops run on rayon when the `parallel` feature is enabled
//! (the default) and sequentially otherwise; see [`par::Parallelism`].

pub mod braided;
pub mod caps;
pub mod cocycle;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod injectivity;
pub mod json;
pub mod lattice;
pub mod linear;
pub mod par;
pub mod perm;
pub mod quotients;

pub use braided::{ActionTables, BraidFlags, BraidedMap, PhiTable, TupleMap};
pub use caps::Caps;
pub use error::{Error, Result};
pub use par::Parallelism;
