//! Exact decision procedure for uniform disconnectedness of diagonal
//! self-affine sponges of Lalley-Gatzouras type, together with brute-force
//! oracles for the quantitative estimates behind it.
//!
//! Every routine is generic over [`Scalar`]. Use the [`Rational`] aliases for
//! exact results; the `f64` aliases are provided for fast, approximate
//! exploration.

pub mod cantor;
pub mod classify;
pub mod components;
pub mod error;
pub mod fixtures;
pub mod ifs;
pub mod scalar;
pub mod tree;
mod union_find;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type Ifs = ifs::SpongeIfs<Rational>;
pub type Map1 = ifs::AffineMap<Rational>;
pub type Map = ifs::DiagonalMap<Rational>;
pub type Cuboid = ifs::Cuboid<Rational>;
pub type Interval = ifs::Interval<Rational>;
pub type Tree = tree::LabeledTree<Rational>;
pub type Vertex = tree::Vertex<Rational>;
pub type Fiber = tree::FiberIfs<Rational>;

pub type IfsF64 = ifs::SpongeIfs<f64>;
pub type CuboidF64 = ifs::Cuboid<f64>;
pub type TreeF64 = tree::LabeledTree<f64>;
