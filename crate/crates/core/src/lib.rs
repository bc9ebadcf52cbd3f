//! Exact models of the irreducible representations of the symmetric group,
//! the Lie algebra generated by transpositions inside them, and truncated
//! power-series checks of braid-group images in the Hecke algebra.
//!
//! Every computation is exact: rationals with arbitrary-precision numerators
//! and denominators, or residues modulo a prime when a closure is run in
//! [`FieldMode::PrimeField`].

pub mod error;
pub mod hecke;
pub mod lie_closure;
pub mod matrix;
pub mod modp;
pub mod partitions;
pub mod perm;
pub mod seminormal;
pub mod series;
pub mod tableaux;

pub use error::{Error, Result};
pub use matrix::{MatrixDump, MatrixQ, Q};
pub use modp::FieldMode;
pub use partitions::{Partition, PartitionClass, Sign};
pub use perm::Permutation;
pub use tableaux::StandardTableau;
