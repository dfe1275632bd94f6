//! Statistical analysis of scattered points: correlation, polynomial trend
//! surfaces, IDW and ordinary Kriging interpolation, and NURBS surface
//! fitting.

mod correlation;
mod grid;
mod idw;
mod kriging;
mod nurbs;
mod trend;
mod variogram;

pub use correlation::correlation_matrix;
pub use grid::{interpolate_grid, krige_grid, GridSpec, InterpolationMethod, GRID_NODATA};
pub use idw::{idw_interpolate, IdwParams, Neighbors, EXACT_HIT_DISTANCE};
pub use kriging::{krige, KrigingResult, OrdinaryKriging};
pub use nurbs::{
    basis_functions, clamped_uniform_knots, evaluate_spline, find_span, fit_nurbs_surface,
    SplineSurfaceModel, RIDGE_LAMBDA, SPLINE_DEGREE,
};
pub use trend::{
    coefficient_count, evaluate_trend_surface, fit_trend_surface, monomial_exponents,
    CoordinateFrame, TrendSurfaceModel, MAX_TREND_DEGREE,
};
pub use variogram::{
    empirical_semivariogram, fit_variogram, LagBin, VariogramKind, VariogramModel,
};
