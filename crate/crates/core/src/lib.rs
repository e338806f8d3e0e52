//! Computational toolkit for tuples of linear operators on finite-dimensional
//! normed spaces: p-th joint operator norms, joint numerical radii and ranges,
//! and (p,k)-th joint numerical indices of lq^m spaces and their finite
//! lq-direct sums.

pub mod error;
pub mod index;
pub mod jointcalc;
pub mod operators;
pub mod optimize;
pub mod range;
pub mod rng;
pub mod scalar;
pub mod spaces;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
pub use spaces::{Exponent, NormingPair, SpaceDescriptor, SpaceVector};
