//! Three-dimensional geospatial analysis: DEM terrain factors, spatial
//! statistics and interpolation over scattered points, and layered network
//! analysis with address matching.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the common double-precision instantiations.

// Negated comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod geodata;
pub mod linalg;
pub mod network;
pub mod scalar;
pub mod stats;
pub mod terrain;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid = geodata::RasterGrid<f64>;
pub type Grid32 = geodata::RasterGrid<f32>;
pub type Points = geodata::PointSet3D<f64>;
pub type Points32 = geodata::PointSet3D<f32>;
pub type Network = geodata::Network3D<f64>;
pub type Addresses = geodata::AddressLibrary<f64>;
pub type TrendModel = stats::TrendSurfaceModel<f64>;
pub type Variogram = stats::VariogramModel<f64>;
pub type SplineModel = stats::SplineSurfaceModel<f64>;
pub type Route = network::RouteResult<f64>;
