//! Topographic factors of a DEM: slope, aspect, plan and profile curvature.
//!
//! All four are functions of the surface derivatives p = ∂H/∂x, q = ∂H/∂y,
//! r = ∂²H/∂x², s = ∂²H/∂x∂y, t = ∂²H/∂y², estimated with second-order central
//! differences on the 3×3 neighbourhood of each cell. Border cells and cells
//! whose neighbourhood touches a missing value produce nodata.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geodata::RasterGrid;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceDerivatives<T> {
    pub p: T,
    pub q: T,
    pub r: T,
    pub s: T,
    pub t: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerrainOptions<T> {
    /// Aspect reported for flat cells.
    pub aspect_flat_sentinel: T,
    /// Below this value of p² + q² a cell is flat: aspect is the sentinel and
    /// both curvatures are 0.
    pub curvature_flat_epsilon: T,
}

impl<T: Real> Default for TerrainOptions<T> {
    fn default() -> Self {
        TerrainOptions {
            aspect_flat_sentinel: T::lit(-1.0),
            curvature_flat_epsilon: T::lit(1e-12),
        }
    }
}

impl<T: Real> TerrainOptions<T> {
    pub fn new(aspect_flat_sentinel: T, curvature_flat_epsilon: T) -> Result<Self> {
        if !(curvature_flat_epsilon >= T::zero()) {
            return Err(Error::Parameter(format!(
                "curvature_flat_epsilon must be >= 0, got {curvature_flat_epsilon}"
            )));
        }
        Ok(TerrainOptions {
            aspect_flat_sentinel,
            curvature_flat_epsilon,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerrainFactor {
    Slope,
    Aspect,
    PlanCurvature,
    ProfileCurvature,
}

impl<T: Real> SurfaceDerivatives<T> {
    fn gradient_sq(&self) -> T {
        self.p * self.p + self.q * self.q
    }

    fn is_flat(&self, opts: &TerrainOptions<T>) -> bool {
        self.gradient_sq() < opts.curvature_flat_epsilon
    }

    /// β = arctan √(p² + q²), degrees.
    pub fn slope_degrees(&self) -> T {
        self.gradient_sq().sqrt().atan().to_degrees()
    }

    /// α = 270° − atan2(q, p), reduced to [0°, 360°).
    pub fn aspect_degrees(&self, opts: &TerrainOptions<T>) -> T {
        if self.is_flat(opts) {
            return opts.aspect_flat_sentinel;
        }
        let full = T::lit(360.0);
        let a = (T::lit(270.0) - self.q.atan2(self.p).to_degrees()) % full;
        let a = if a < T::zero() { a + full } else { a };
        if a >= full {
            T::zero()
        } else {
            a
        }
    }

    /// C_c = −(q²r − 2pqs + p²t) / (p² + q²)^(3/2).
    pub fn plane_curvature(&self, opts: &TerrainOptions<T>) -> T {
        if self.is_flat(opts) {
            return T::zero();
        }
        let Self { p, q, r, s, t } = *self;
        let two = T::lit(2.0);
        let g = self.gradient_sq();
        -(q * q * r - two * p * q * s + p * p * t) / (g * g.sqrt())
    }

    /// C_p = −(p²r + 2pqs + q²t) / ((p² + q²)(1 + p² + q²)^(3/2)).
    pub fn profile_curvature(&self, opts: &TerrainOptions<T>) -> T {
        if self.is_flat(opts) {
            return T::zero();
        }
        let Self { p, q, r, s, t } = *self;
        let two = T::lit(2.0);
        let g = self.gradient_sq();
        let w = T::one() + g;
        -(p * p * r + two * p * q * s + q * q * t) / (g * w * w.sqrt())
    }

    pub fn factor(&self, factor: TerrainFactor, opts: &TerrainOptions<T>) -> T {
        match factor {
            TerrainFactor::Slope => self.slope_degrees(),
            TerrainFactor::Aspect => self.aspect_degrees(opts),
            TerrainFactor::PlanCurvature => self.plane_curvature(opts),
            TerrainFactor::ProfileCurvature => self.profile_curvature(opts),
        }
    }
}

/// Central-difference derivatives at (`row`, `col`); `Ok(None)` on border
/// cells and when any of the nine stencil cells is missing.
pub fn surface_derivatives<T: Real>(
    grid: &RasterGrid<T>,
    row: usize,
    col: usize,
) -> Result<Option<SurfaceDerivatives<T>>> {
    if row >= grid.nrows() || col >= grid.ncols() {
        return Err(Error::Parameter(format!(
            "cell ({row}, {col}) out of bounds for {}x{} grid",
            grid.nrows(),
            grid.ncols()
        )));
    }
    Ok(derivatives_at(grid, row, col))
}

fn derivatives_at<T: Real>(grid: &RasterGrid<T>, row: usize, col: usize) -> Option<SurfaceDerivatives<T>> {
    // Row index grows southwards.
    let at = |dr: isize, dc: isize| grid.get_offset(row, col, dr, dc);
    let c = at(0, 0)?;
    let (n, s) = (at(-1, 0)?, at(1, 0)?);
    let (w, e) = (at(0, -1)?, at(0, 1)?);
    let (nw, ne) = (at(-1, -1)?, at(-1, 1)?);
    let (sw, se) = (at(1, -1)?, at(1, 1)?);

    let h = grid.cellsize();
    let two = T::lit(2.0);
    let h2 = h * h;
    Some(SurfaceDerivatives {
        p: (e - w) / (two * h),
        q: (n - s) / (two * h),
        r: (e - two * c + w) / h2,
        s: (ne - nw - se + sw) / (T::lit(4.0) * h2),
        t: (n - two * c + s) / h2,
    })
}

/// Evaluates one topographic factor on every cell. The output shares the
/// input's georeferencing and nodata value.
pub fn terrain_factor<T: Real>(
    grid: &RasterGrid<T>,
    factor: TerrainFactor,
    opts: &TerrainOptions<T>,
) -> RasterGrid<T> {
    let ncols = grid.ncols();
    let nodata = grid.nodata();
    let values: Vec<T> = (0..grid.nrows() * ncols)
        .into_par_iter()
        .map(|i| {
            derivatives_at(grid, i / ncols, i % ncols)
                .map_or(nodata, |d| d.factor(factor, opts))
        })
        .collect();
    grid.with_values(values).expect("same shape as input")
}

/// Slope in degrees, [0°, 90°).
pub fn slope<T: Real>(grid: &RasterGrid<T>) -> RasterGrid<T> {
    terrain_factor(grid, TerrainFactor::Slope, &TerrainOptions::default())
}

/// Aspect in degrees, [0°, 360°) or the flat sentinel.
pub fn aspect<T: Real>(grid: &RasterGrid<T>, opts: &TerrainOptions<T>) -> RasterGrid<T> {
    terrain_factor(grid, TerrainFactor::Aspect, opts)
}

pub fn plane_curvature<T: Real>(grid: &RasterGrid<T>, opts: &TerrainOptions<T>) -> RasterGrid<T> {
    terrain_factor(grid, TerrainFactor::PlanCurvature, opts)
}

pub fn profile_curvature<T: Real>(grid: &RasterGrid<T>, opts: &TerrainOptions<T>) -> RasterGrid<T> {
    terrain_factor(grid, TerrainFactor::ProfileCurvature, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(n: usize, x0: f64, y0: f64, h: f64, f: impl Fn(f64, f64) -> f64) -> RasterGrid<f64> {
        RasterGrid::from_fn(n, n, x0, y0, h, -9999.0, f).unwrap()
    }

    fn d(p: f64, q: f64, r: f64, s: f64, t: f64) -> SurfaceDerivatives<f64> {
        SurfaceDerivatives { p, q, r, s, t }
    }

    #[test]
    fn affine_surface_derivatives() {
        let g = sample(5, -2.0, -2.0, 0.5, |x, y| 2.0 * x + 3.0 * y);
        let dv = surface_derivatives(&g, 2, 2).unwrap().unwrap();
        assert_relative_eq!(dv.p, 2.0, max_relative = 1e-12);
        assert_relative_eq!(dv.q, 3.0, max_relative = 1e-12);
        assert!(dv.r.abs() < 1e-12 && dv.s.abs() < 1e-12 && dv.t.abs() < 1e-12);
    }

    #[test]
    fn paraboloid_at_unit_x() {
        let big = sample(5, -1.5, -2.5, 1.0, |x, y| (x * x + y * y) / 2.0);
        assert_eq!(big.cell_center(2, 2), (1.0, 0.0));
        let dv = surface_derivatives(&big, 2, 2).unwrap().unwrap();
        assert_eq!((dv.p, dv.q, dv.r, dv.s, dv.t), (1.0, 0.0, 1.0, 0.0, 1.0));
        let opts = TerrainOptions::default();
        assert_eq!(dv.plane_curvature(&opts), -1.0);
        assert_relative_eq!(dv.profile_curvature(&opts), -1.0 / (2.0 * 2f64.sqrt()), max_relative = 1e-15);
        assert_eq!(surface_derivatives(&big, 0, 1).unwrap(), None);
        assert_eq!(surface_derivatives(&big, 2, 4).unwrap(), None);
    }

    #[test]
    fn out_of_bounds_is_an_error() {
        let g = sample(3, 0.0, 0.0, 1.0, |_, _| 0.0);
        assert!(surface_derivatives(&g, 3, 0).is_err());
    }

    #[test]
    fn slope_examples() {
        let flat = slope(&sample(4, 0.0, 0.0, 1.0, |_, _| 7.0));
        assert_eq!(flat.get(1, 1), Some(0.0));
        assert_eq!(flat.get(0, 0), None);

        let plane = slope(&sample(4, 0.0, 0.0, 1.0, |x, y| 2.0 * x + 3.0 * y));
        assert_relative_eq!(plane.get(1, 2).unwrap(), 74.498_640_433_063, max_relative = 1e-12);
        assert_relative_eq!(plane.get(1, 2).unwrap(), 13f64.sqrt().atan().to_degrees(), max_relative = 1e-12);

        let ramp = slope(&sample(4, 0.0, 0.0, 1.0, |x, _| x));
        assert_relative_eq!(ramp.get(2, 2).unwrap(), 45.0, max_relative = 1e-12);
    }

    #[test]
    fn aspect_examples() {
        let o = TerrainOptions::default();
        assert_eq!(d(1.0, 0.0, 0.0, 0.0, 0.0).aspect_degrees(&o), 270.0);
        assert_eq!(d(1.0, 1.0, 0.0, 0.0, 0.0).aspect_degrees(&o), 225.0);
        assert_eq!(d(0.0, 0.0, 0.0, 0.0, 0.0).aspect_degrees(&o), -1.0);
        // atan2 covers all quadrants; p < 0 lands in the other half-plane.
        assert_eq!(d(-1.0, 0.0, 0.0, 0.0, 0.0).aspect_degrees(&o), 90.0);
        assert_eq!(d(0.0, 1.0, 0.0, 0.0, 0.0).aspect_degrees(&o), 180.0);
        assert_eq!(d(0.0, -1.0, 0.0, 0.0, 0.0).aspect_degrees(&o), 0.0);
    }

    #[test]
    fn flat_cells_have_zero_curvature() {
        let g = sample(5, 0.0, 0.0, 1.0, |_, _| 3.0);
        let o = TerrainOptions::default();
        assert_eq!(plane_curvature(&g, &o).get(2, 2), Some(0.0));
        assert_eq!(profile_curvature(&g, &o).get(2, 2), Some(0.0));
        assert_eq!(aspect(&g, &o).get(2, 2), Some(-1.0));
    }

    #[test]
    fn plane_has_zero_curvature() {
        let g = sample(6, 0.0, 0.0, 1.0, |x, y| -0.7 * x + 4.0 * y + 12.0);
        let o = TerrainOptions::default();
        for out in [plane_curvature(&g, &o), profile_curvature(&g, &o)] {
            for row in 1..5 {
                for col in 1..5 {
                    assert!(out.get(row, col).unwrap().abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn missing_cell_poisons_its_neighbourhood() {
        let mut vals = sample(7, 0.0, 0.0, 1.0, |x, y| x * y).values().to_vec();
        vals[3 * 7 + 3] = -9999.0;
        let g = RasterGrid::new(7, 7, 0.0, 0.0, 1.0, -9999.0, vals).unwrap();
        let s = slope(&g);
        for row in 1..6usize {
            for col in 1..6usize {
                let near = row.abs_diff(3) <= 1 && col.abs_diff(3) <= 1;
                assert_eq!(s.get(row, col).is_none(), near, "({row}, {col})");
            }
        }
    }

    #[test]
    fn negative_flat_epsilon_rejected() {
        assert!(TerrainOptions::new(-1.0, -1e-3).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let g = RasterGrid::<f32>::from_fn(4, 4, 0.0, 0.0, 1.0, -9999.0, |x, _| x).unwrap();
        assert!((slope(&g).get(1, 1).unwrap() - 45.0).abs() < 1e-4);
    }
}
