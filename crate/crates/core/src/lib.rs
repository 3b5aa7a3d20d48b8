//! Exact constructions for the cells of quiver Grassmannians of the
//! preprojective Kronecker representations `M(m)`.
//!
//! Index tuples, the labeled cell matrices `N1(P)` / `N2(P)`, Fibonacci-tree
//! relation polynomials, symbolic determinants and the verification engine.
//! Everything is exact: integer-coefficient polynomials, rationals, and the
//! prime field of order `2^61 - 1`.

#![no_std]

extern crate alloc;

pub mod cluster;
pub mod combinatorics;
pub mod engine;
mod error;
pub mod field;
pub mod linalg;
pub mod matrices;
pub mod poly;
pub mod relations;
pub mod trees;

pub use error::{Error, Result};
