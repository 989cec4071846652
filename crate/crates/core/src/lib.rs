//! Exact computations with vector bundles on the projective line.
//!
//! Every bundle on P¹ splits as a sum of line bundles `⊕ O(aᵢ)`. This crate
//! computes those splitting types exactly (over ℚ or a prime field) for
//! kernels and cokernels of polynomial matrices, for restricted tangent and
//! normal bundles of parametrized rational curves in projective spaces,
//! Grassmannians, flag varieties and weighted projective spaces, and uses
//! them to build very free curves on complete intersections.
//!
//! The crate is `no_std` and only needs `alloc`; IO, file formats and the
//! command line live in the `vfree` crate.
#![no_std]

extern crate alloc;

pub mod ambient;
pub mod bundles;
pub mod ci;
pub mod curves;
pub mod error;
pub mod exact;
pub mod products;

pub use error::{Error, Result};
