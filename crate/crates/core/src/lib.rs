//! Isomorphism testing for finite groups that split as a coprime cyclic
//! extension of an abelian group, `G = A ⋊ Z_m` with `gcd(|A|, m) = 1`.
//!
//! Groups are black boxes ([`blackbox::GroupHandle`]); structure is computed
//! from product and inverse queries only.

#![allow(clippy::needless_range_loop)]

pub mod abelian;
pub mod arith;
pub mod autring;
pub mod blackbox;
pub mod classes;
pub mod corpus;
pub mod decomp;
pub mod error;
pub mod iso;
pub mod oracle;

pub use error::{Error, Result};
