//! Exact piecewise-linear Lipschitz geometry.
//!
//! The crate builds and checks the constructive pieces around stripe covers
//! of planar null sets:
//!
//! * [`pl`]: continuous piecewise-linear functions with exact envelopes;
//! * [`stripes`]: curve uncrossing, disjointification of stripe covers, cover
//!   checks and transversal intersections;
//! * [`coord_approx`]: 3-Lipschitz functions that approximate a coordinate
//!   while being constant across stripe sections;
//! * [`null1d`]: the one-dimensional analogue built from open covers, plus a
//!   small model of derivations on decomposed measures;
//! * [`extension`]: McShane extensions and pointwise Lipschitz estimates;
//! * [`projections`]: projections of the four-corner Cantor set.
//!
//! All geometry is generic over [`Field`]; the aliases below fix the exact
//! rational instantiation used by the command-line tool and the verification
//! campaigns in [`verify`].

pub mod coord_approx;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod gen;
pub mod io;
pub mod null1d;
pub mod pl;
pub mod projections;
pub mod scalar;
pub mod stripes;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
pub use stripes::Axis;

/// Piecewise-linear function over exact rationals.
pub type PlFunction = pl::PiecewiseLinear<Scalar>;
pub type Curve = stripes::Curve<Scalar>;
pub type Stripe = stripes::Stripe<Scalar>;
pub type Arrangement = stripes::Arrangement<Scalar>;
pub type CoordApproximator = coord_approx::CoordApproximator<Scalar>;
pub type OpenCover1D = null1d::OpenCover1D<Scalar>;
pub type Measure1D = null1d::Measure1D<Scalar>;
pub type StepFunction = null1d::StepFunction<Scalar>;
pub type SquareSet = projections::SquareSet<Scalar>;
pub type Point = [Scalar; 2];
