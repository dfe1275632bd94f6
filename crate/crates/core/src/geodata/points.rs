use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geodata::io::read_to_string;
use crate::geodata::raster::annotate;
use crate::scalar::Real;

/// Scattered 3D points with named numeric attribute columns.
///
/// `z` is always the first attribute column. Planimetric coordinates are
/// unique across the set.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet3D<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    columns: Vec<(String, Vec<T>)>,
}

impl<T: Real> PointSet3D<T> {
    /// Builds a point set from `(x, y, z)` triples with no extra attributes.
    pub fn from_xyz(points: &[[T; 3]]) -> Result<Self> {
        Self::new(points.to_vec(), Vec::new())
    }

    pub fn new(points: Vec<[T; 3]>, extra: Vec<(String, Vec<T>)>) -> Result<Self> {
        let n = points.len();
        let mut seen = HashSet::with_capacity(n);
        for p in &points {
            // `+ 0.0` folds -0.0 onto 0.0 before comparing bit patterns.
            let key = ((p[0] + T::zero()).as_f64().to_bits(), (p[1] + T::zero()).as_f64().to_bits());
            if !seen.insert(key) {
                return Err(Error::Invalid(format!(
                    "duplicate planimetric coordinate ({}, {})",
                    p[0], p[1]
                )));
            }
        }
        let mut columns = vec![("z".to_string(), points.iter().map(|p| p[2]).collect())];
        for (name, col) in extra {
            if columns.iter().any(|(c, _)| *c == name) || name == "x" || name == "y" {
                return Err(Error::Invalid(format!("duplicate attribute column '{name}'")));
            }
            if col.len() != n {
                return Err(Error::Invalid(format!(
                    "attribute '{name}' has {} values for {n} points",
                    col.len()
                )));
            }
            columns.push((name, col));
        }
        Ok(PointSet3D {
            xs: points.iter().map(|p| p[0]).collect(),
            ys: points.iter().map(|p| p[1]).collect(),
            columns,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn ys(&self) -> &[T] {
        &self.ys
    }

    pub fn zs(&self) -> &[T] {
        &self.columns[0].1
    }

    pub fn point(&self, i: usize) -> [T; 3] {
        [self.xs[i], self.ys[i], self.zs()[i]]
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn attribute(&self, name: &str) -> Result<&[T]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_slice())
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// `(xmin, ymin, xmax, ymax)` of the planimetric coordinates.
    pub fn bounds(&self) -> Option<(T, T, T, T)> {
        if self.is_empty() {
            return None;
        }
        let fold = |v: &[T]| {
            v.iter()
                .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &a| (lo.min(a), hi.max(a)))
        };
        let (x0, x1) = fold(&self.xs);
        let (y0, y1) = fold(&self.ys);
        Some((x0, y0, x1, y1))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Parse(format!("header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Parse(format!("missing required column '{name}'")))
        };
        let (ix, iy, iz) = (col("x")?, col("y")?, col("z")?);
        let extra_idx: Vec<usize> = (0..headers.len()).filter(|i| ![ix, iy, iz].contains(i)).collect();

        let mut points = Vec::new();
        let mut extra: Vec<Vec<T>> = vec![Vec::new(); extra_idx.len()];
        for (rowno, rec) in rdr.records().enumerate() {
            let line = rowno + 2;
            let rec = rec.map_err(|e| match e.kind() {
                csv::ErrorKind::UnequalLengths { .. } => {
                    Error::Parse(format!("line {line}: ragged row"))
                }
                _ => Error::Parse(format!("line {line}: {e}")),
            })?;
            let field = |i: usize| -> Result<T> {
                let tok = &rec[i];
                tok.parse().map_err(|_| {
                    Error::Parse(format!("line {line}: column '{}' is not a number: '{tok}'", headers[i]))
                })
            };
            points.push([field(ix)?, field(iy)?, field(iz)?]);
            for (slot, &i) in extra.iter_mut().zip(&extra_idx) {
                slot.push(field(i)?);
            }
        }
        let extra = extra_idx.iter().map(|&i| headers[i].clone()).zip(extra).collect();
        Self::new(points, extra)
    }
}

pub fn load_points<T: Real>(path: impl AsRef<Path>) -> Result<PointSet3D<T>> {
    let path = path.as_ref();
    PointSet3D::from_csv(&read_to_string(path)?).map_err(|e| annotate(path, e))
}
