//! Exact matrix factorisation calculus for Landau-Ginzburg models: polynomial arithmetic,
//! Gröbner bases, residues, quantum dimensions, fusion and orbifold algebras.

pub mod error;
pub mod fusion;
pub mod groebner;
pub mod homalg;
pub mod matrix;
pub mod mf;
pub mod models;
pub mod orbifold;
pub mod poly;
pub mod residue;
pub mod scalar;
pub mod text;

pub use error::{Error, Result};
pub use matrix::PolyMatrix;
pub use poly::{Mono, Polynomial, Ring, RingSpec};
pub use scalar::{FieldSpec, Scalar};
