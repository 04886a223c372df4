//! Classification of one- and two-dimensional abelian locally Nash groups.
//!
//! Exact quadratic-field and lattice arithmetic, Weierstrass-function
//! numerics, residue constants, decision procedures with explicit isomorphism
//! witnesses, algebraic-group labels and projective embeddings, plus seeded
//! verification suites.

#![allow(clippy::needless_range_loop, clippy::large_enum_variant, clippy::neg_cmp_op_on_partial_ord, clippy::suspicious_arithmetic_impl)]

pub mod algmodel;
pub mod classify;
pub mod error;
pub mod exactnum;
pub mod harness;
pub mod lattice;
pub mod painleve;
pub mod residue;
pub mod weier;

pub use classify::{GroupDescriptor, IsoWitness, QVector};
pub use error::{Error, Result};
pub use exactnum::{ExactScalar, Rational};
pub use lattice::{LatticeSpec, Witness};
pub use weier::{EvalContext, NumComplex};
