use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geodata::{PointSet3D, RasterGrid};
use crate::scalar::Real;
use crate::stats::idw::{idw_interpolate, IdwParams};
use crate::stats::kriging::OrdinaryKriging;
use crate::stats::variogram::VariogramModel;

/// Nodata value of interpolated grids.
pub const GRID_NODATA: f64 = -9999.0;

/// Output raster geometry: lower-left corner, cell size and dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x_origin: T,
    pub y_origin: T,
    pub cellsize: T,
    pub ncols: usize,
    pub nrows: usize,
}

impl<T: Real> GridSpec<T> {
    /// Parses `x0,y0,cellsize,ncols,nrows`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parameter(format!(
                "grid spec must be x0,y0,cellsize,ncols,nrows, got '{text}'"
            )));
        }
        let real = |s: &str| -> Result<T> {
            s.parse().map_err(|_| Error::Parameter(format!("grid spec: '{s}' is not a number")))
        };
        let count = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(Error::Parameter(format!("grid spec: '{s}' is not a positive integer"))),
            }
        };
        let spec = GridSpec {
            x_origin: real(parts[0])?,
            y_origin: real(parts[1])?,
            cellsize: real(parts[2])?,
            ncols: count(parts[3])?,
            nrows: count(parts[4])?,
        };
        if !(spec.cellsize > T::zero()) {
            return Err(Error::Parameter("grid spec: cellsize must be > 0".into()));
        }
        Ok(spec)
    }

    fn build(&self, f: impl Fn(T, T) -> T + Sync) -> Result<RasterGrid<T>> {
        let blank = RasterGrid::new(
            self.ncols,
            self.nrows,
            self.x_origin,
            self.y_origin,
            self.cellsize,
            T::lit(GRID_NODATA),
            vec![T::zero(); self.ncols * self.nrows],
        )?;
        let values: Vec<T> = (0..self.ncols * self.nrows)
            .into_par_iter()
            .map(|i| {
                let (x, y) = blank.cell_center(i / self.ncols, i % self.ncols);
                f(x, y)
            })
            .collect();
        blank.with_values(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterpolationMethod<T> {
    Idw(IdwParams<T>),
    Kriging(VariogramModel<T>),
}

/// Interpolates `attr` at every cell centre of `spec`.
pub fn interpolate_grid<T: Real>(
    points: &PointSet3D<T>,
    attr: &str,
    method: &InterpolationMethod<T>,
    spec: &GridSpec<T>,
) -> Result<RasterGrid<T>> {
    match method {
        InterpolationMethod::Idw(params) => {
            params.validate()?;
            // Surface errors (empty set, unknown attribute) before the parallel sweep.
            idw_interpolate(points, attr, (spec.x_origin, spec.y_origin), params)?;
            spec.build(|x, y| idw_interpolate(points, attr, (x, y), params).expect("validated"))
        }
        InterpolationMethod::Kriging(model) => {
            let ok = OrdinaryKriging::new(points, attr, *model)?;
            spec.build(|x, y| ok.predict(x, y).estimate)
        }
    }
}

/// Kriging estimate and variance grids over `spec`.
pub fn krige_grid<T: Real>(
    points: &PointSet3D<T>,
    attr: &str,
    model: &VariogramModel<T>,
    spec: &GridSpec<T>,
) -> Result<(RasterGrid<T>, RasterGrid<T>)> {
    let ok = OrdinaryKriging::new(points, attr, *model)?;
    Ok((
        spec.build(|x, y| ok.predict(x, y).estimate)?,
        spec.build(|x, y| ok.predict(x, y).variance)?,
    ))
}
