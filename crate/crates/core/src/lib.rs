//! Staircase paraproducts and bilinear Fourier multipliers with convex singularities.
//!
//! The crate is `no_std` (with `alloc`). It covers the whole numerical pipeline:
//!
//! * [`curves`]: convex curve families, the dyadic-slope sequences `γ'(a_j) = 2^-j`
//!   and the convex / concave / lacunary sequence classifiers.
//! * [`intervals`]: half-open intervals, negated Minkowski sums and the optimal
//!   disjoint splitting of the (Hyp 1) / (Hyp 2) collections.
//! * [`symbols`]: staircase, boundary-piece, epigraph and exponential paraproduct
//!   symbols, plus smooth adapted bumps.
//! * [`engine`]: periodic band-limited functions, exact discrete bilinear
//!   multipliers, projections, the Carleson–Hunt maximal operator, mixed norms and
//!   operator-norm probing.
//! * [`whitney`]: Whitney squares and cubes, anisotropic rectangle covers of the
//!   polygon triangles, multi-tiles, mollified partitions and the model sum.
#![no_std]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod bump;
pub mod curves;
pub mod engine;
pub mod error;
pub mod fft;
pub mod intervals;
pub mod symbols;
pub mod whitney;

pub use error::{Error, Result};
