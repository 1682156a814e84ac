//! Exact graded commutative algebra over prime fields.

pub mod checks;
pub mod error;
pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod invariants;
mod kernel;
pub mod matrix;
pub mod module;
pub mod monomial;
pub mod ops;
pub mod quotient;
pub mod resolution;
pub mod ring;
pub mod sample;
pub mod vector;

pub use error::{Error, Result};
pub use field::GroundField;
pub use groebner::{buchberger, reduce};
pub use monomial::{Monomial, MonomialOrder};
pub use ring::{AmbientRing, Polynomial};
