//! Exact computations with twisted complexes over graded algebras, spherical
//! twists, and dg-modules over the graded dual numbers.

pub mod algebra;
pub mod dual;
pub mod error;
pub mod field;
pub mod formats;
pub mod fuzz;
pub mod graded;
pub mod group;
pub mod linalg;
pub mod poly;
pub mod spherical;
pub mod twisted;
pub mod zigzag;

pub use error::{Error, Result};
pub use field::{Field, Gf, Rational};

/// The default prime field used for fuzzing.
pub type Gf32003 = Gf<32003>;
