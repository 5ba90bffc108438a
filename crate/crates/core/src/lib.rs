//! Exact commutative algebra over finite fields at desk scale: vanishing
//! ideals of point sets with multiplicity, quotient algebras and their
//! initial/top-degree structure, generic initial ideals under the Borel
//! group, multiplication-matrix rank tests for rich hyperplane varieties,
//! exchange-property lattice bounds, and Furstenberg-set quantities.

pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod algebra;
pub mod gin;
pub mod rich;
pub mod lattice;
pub mod bounds;
pub mod sets;
pub mod util;

pub use error::{Error, Result};
