//! Coverage model for multi-table grid locality-sensitive hashing.
//!
//! A query point sits at the origin of a max-metric query cube of side `s`.
//! Each of `m` hash tables places a grid cell of side `b` around it at a
//! uniformly random offset. With `s = b = 1` the expected volume of the query
//! cube covered by at least `ℓ` of the `m` cells has an exact rational closed
//! form ([`model`]). The remaining modules check that closed form against
//! independent routes:
//!
//! * [`mc`] computes the exact covered volume of each random cell sample and
//!   averages it by Monte Carlo, with a rasterizing brute-force oracle.
//! * [`quad`] evaluates the helper integrals by deterministic quadrature and
//!   by box Monte Carlo.
//! * [`grid`] builds a real shifted-grid index over the unit torus and
//!   measures recall of max-metric range queries.
//!
//! Data-parallel loops go through [`exec`]; with the `parallel` feature
//! (default) they run on rayon, otherwise sequentially. Results are
//! bit-identical either way.

pub mod error;
pub mod exec;
pub mod grid;
pub mod mc;
pub mod model;
pub mod quad;
pub mod seed;
pub mod sum;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{ModelQuery, Rational, ScaleParams};
