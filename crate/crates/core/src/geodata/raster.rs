use std::path::Path;

use crate::error::{Error, Result};
use crate::geodata::io::{atomic_write, format_sig, read_to_string};
use crate::scalar::Real;

const HEADER_KEYS: [&str; 6] = [
    "ncols",
    "nrows",
    "xllcorner",
    "yllcorner",
    "cellsize",
    "NODATA_value",
];

/// Regular value grid georeferenced by its lower-left corner.
///
/// Values are stored row-major with row 0 the northernmost row, the same
/// order as the ASCII grid format. Any cell equal to `nodata` is missing.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid<T> {
    ncols: usize,
    nrows: usize,
    x_origin: T,
    y_origin: T,
    cellsize: T,
    nodata: T,
    values: Vec<T>,
}

impl<T: Real> RasterGrid<T> {
    pub fn new(
        ncols: usize,
        nrows: usize,
        x_origin: T,
        y_origin: T,
        cellsize: T,
        nodata: T,
        values: Vec<T>,
    ) -> Result<Self> {
        if ncols == 0 || nrows == 0 {
            return Err(Error::Invalid("grid dimensions must be positive".into()));
        }
        if !(cellsize > T::zero()) || !cellsize.is_finite() {
            return Err(Error::Invalid(format!("cellsize must be positive, got {cellsize}")));
        }
        if values.len() != ncols * nrows {
            return Err(Error::Invalid(format!(
                "value count mismatch: expected {} ({} x {}), found {}",
                ncols * nrows,
                nrows,
                ncols,
                values.len()
            )));
        }
        Ok(RasterGrid {
            ncols,
            nrows,
            x_origin,
            y_origin,
            cellsize,
            nodata,
            values,
        })
    }

    /// Builds a grid by evaluating `f` at every cell centre.
    pub fn from_fn(
        ncols: usize,
        nrows: usize,
        x_origin: T,
        y_origin: T,
        cellsize: T,
        nodata: T,
        mut f: impl FnMut(T, T) -> T,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(ncols * nrows);
        for row in 0..nrows {
            for col in 0..ncols {
                let (x, y) = cell_center(x_origin, y_origin, cellsize, nrows, row, col);
                values.push(f(x, y));
            }
        }
        Self::new(ncols, nrows, x_origin, y_origin, cellsize, nodata, values)
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn x_origin(&self) -> T {
        self.x_origin
    }

    pub fn y_origin(&self) -> T {
        self.y_origin
    }

    pub fn cellsize(&self) -> T {
        self.cellsize
    }

    pub fn nodata(&self) -> T {
        self.nodata
    }

    /// Raw cell values, missing cells included as `nodata`.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_nodata(&self, v: T) -> bool {
        v == self.nodata || (v.is_nan() && self.nodata.is_nan())
    }

    /// Cell value, `None` when out of bounds or missing.
    pub fn get(&self, row: usize, col: usize) -> Option<T> {
        if row >= self.nrows || col >= self.ncols {
            return None;
        }
        let v = self.values[row * self.ncols + col];
        (!self.is_nodata(v)).then_some(v)
    }

    /// Signed-offset lookup used by stencils; `None` outside the grid.
    pub fn get_offset(&self, row: usize, col: usize, drow: isize, dcol: isize) -> Option<T> {
        let r = row.checked_add_signed(drow)?;
        let c = col.checked_add_signed(dcol)?;
        self.get(r, c)
    }

    /// World coordinates of the centre of cell (`row`, `col`).
    pub fn cell_center(&self, row: usize, col: usize) -> (T, T) {
        cell_center(self.x_origin, self.y_origin, self.cellsize, self.nrows, row, col)
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|&&v| self.is_nodata(v)).count()
    }

    /// `(min, max)` over non-missing cells, or `None` if every cell is missing.
    pub fn value_range(&self) -> Option<(T, T)> {
        self.values
            .iter()
            .copied()
            .filter(|&v| !self.is_nodata(v))
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }

    /// A grid with the same georeferencing and the given values.
    pub fn with_values(&self, values: Vec<T>) -> Result<Self> {
        Self::new(
            self.ncols,
            self.nrows,
            self.x_origin,
            self.y_origin,
            self.cellsize,
            self.nodata,
            values,
        )
    }

    /// Serializes to the ASCII grid format.
    pub fn to_ascii(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 12 + 128);
        out.push_str(&format!("ncols {}\n", self.ncols));
        out.push_str(&format!("nrows {}\n", self.nrows));
        out.push_str(&format!("xllcorner {}\n", format_sig(self.x_origin.as_f64())));
        out.push_str(&format!("yllcorner {}\n", format_sig(self.y_origin.as_f64())));
        out.push_str(&format!("cellsize {}\n", format_sig(self.cellsize.as_f64())));
        let nodata = format_sig(self.nodata.as_f64());
        out.push_str(&format!("NODATA_value {nodata}\n"));
        for row in self.values.chunks(self.ncols) {
            let line: Vec<String> = row
                .iter()
                .map(|&v| {
                    if self.is_nodata(v) {
                        nodata.clone()
                    } else {
                        format_sig(v.as_f64())
                    }
                })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the ASCII grid format.
    pub fn from_ascii(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut header: [Option<String>; 6] = Default::default();
        for (i, expected) in HEADER_KEYS.iter().enumerate() {
            let line = lines.next().ok_or_else(|| {
                Error::Parse(format!("missing header key '{expected}'"))
            })?;
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or("");
            let value = parts.next();
            let slot = HEADER_KEYS.iter().position(|k| k.eq_ignore_ascii_case(key));
            match slot {
                None => {
                    return Err(Error::Parse(format!(
                        "line {}: missing header key '{expected}' (found '{key}')",
                        i + 1
                    )))
                }
                Some(j) if header[j].is_some() => {
                    return Err(Error::Parse(format!("duplicate header key '{}'", HEADER_KEYS[j])))
                }
                // Keys are in fixed order, so a later key here means `expected` is absent.
                Some(j) if j != i => {
                    return Err(Error::Parse(format!(
                        "line {}: missing header key '{expected}' (found '{}')",
                        i + 1,
                        HEADER_KEYS[j]
                    )))
                }
                Some(j) => {
                    let value = value.ok_or_else(|| {
                        Error::Parse(format!("header key '{}' has no value", HEADER_KEYS[j]))
                    })?;
                    if parts.next().is_some() {
                        return Err(Error::Parse(format!(
                            "header key '{}' has trailing tokens",
                            HEADER_KEYS[j]
                        )));
                    }
                    header[j] = Some(value.to_string());
                }
            }
        }
        let h = |i: usize| header[i].as_deref().expect("all header slots filled");
        let ncols = parse_count(h(0), "ncols")?;
        let nrows = parse_count(h(1), "nrows")?;
        let x_origin: T = parse_real(h(2), "xllcorner")?;
        let y_origin: T = parse_real(h(3), "yllcorner")?;
        let cellsize: T = parse_real(h(4), "cellsize")?;
        let nodata: T = parse_real(h(5), "NODATA_value")?;

        let mut values = Vec::with_capacity(ncols * nrows);
        for (lineno, line) in lines.enumerate() {
            for tok in line.split_whitespace() {
                let v: T = tok.parse().map_err(|_| {
                    Error::Parse(format!("line {}: non-numeric cell '{tok}'", lineno + 7))
                })?;
                values.push(v);
            }
        }
        Self::new(ncols, nrows, x_origin, y_origin, cellsize, nodata, values)
    }
}

fn cell_center<T: Real>(
    x_origin: T,
    y_origin: T,
    cellsize: T,
    nrows: usize,
    row: usize,
    col: usize,
) -> (T, T) {
    let half = T::lit(0.5);
    let x = x_origin + (T::from_count(col) + half) * cellsize;
    let y = y_origin + (T::from_count(nrows - row) - half) * cellsize;
    (x, y)
}

fn parse_count(tok: &str, key: &str) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::Parse(format!("{key} must be a positive integer, got '{tok}'"))),
    }
}

fn parse_real<T: Real>(tok: &str, key: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::Parse(format!("{key} is not a number: '{tok}'")))
}

pub fn load_raster<T: Real>(path: impl AsRef<Path>) -> Result<RasterGrid<T>> {
    let path = path.as_ref();
    RasterGrid::from_ascii(&read_to_string(path)?)
        .map_err(|e| annotate(path, e))
}

pub fn save_raster<T: Real>(grid: &RasterGrid<T>, path: impl AsRef<Path>) -> Result<()> {
    atomic_write(path.as_ref(), grid.to_ascii().as_bytes())
}

pub(crate) fn annotate(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::Invalid(m) => Error::Invalid(format!("{}: {m}", path.display())),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_BY_TWO: &str = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1 2\n3 4\n";

    #[test]
    fn parses_two_by_two() {
        let g = RasterGrid::<f64>::from_ascii(TWO_BY_TWO).unwrap();
        assert_eq!((g.ncols(), g.nrows()), (2, 2));
        assert_eq!(g.values(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(g.nodata(), -9999.0);
    }

    #[test]
    fn header_keys_are_case_insensitive() {
        let text = TWO_BY_TWO.replace("NODATA_value", "nodata_VALUE").replace("ncols", "NCOLS");
        assert!(RasterGrid::<f64>::from_ascii(&text).is_ok());
    }

    #[test]
    fn nodata_cell_is_missing() {
        let text = TWO_BY_TWO.replace("3 4", "-9999 4");
        let g = RasterGrid::<f64>::from_ascii(&text).unwrap();
        assert_eq!(g.get(1, 0), None);
        assert_eq!(g.get(1, 1), Some(4.0));
        assert_eq!(g.missing_count(), 1);
    }

    #[test]
    fn value_count_mismatch() {
        let text = "ncols 3\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1 2 3\n4 5 6\n7 8\n";
        let err = RasterGrid::<f64>::from_ascii(text).unwrap_err();
        assert!(err.to_string().contains("value count mismatch"), "{err}");
    }

    #[test]
    fn missing_and_duplicate_header_keys() {
        let missing = TWO_BY_TWO.replace("cellsize 1\n", "");
        let err = RasterGrid::<f64>::from_ascii(&missing).unwrap_err();
        assert!(err.to_string().contains("missing header key"), "{err}");

        let dup = TWO_BY_TWO.replace("yllcorner 0", "xllcorner 0");
        let err = RasterGrid::<f64>::from_ascii(&dup).unwrap_err();
        assert!(err.to_string().contains("duplicate header key"), "{err}");
    }

    #[test]
    fn non_numeric_cell() {
        let text = TWO_BY_TWO.replace("3 4", "3 x4");
        let err = RasterGrid::<f64>::from_ascii(&text).unwrap_err();
        assert!(err.to_string().contains("non-numeric cell"), "{err}");
    }

    #[test]
    fn cell_centres_follow_lower_left_georeferencing() {
        let g = RasterGrid::<f64>::new(3, 2, 10.0, 20.0, 2.0, -9999.0, vec![0.0; 6]).unwrap();
        assert_eq!(g.cell_center(0, 0), (11.0, 23.0));
        assert_eq!(g.cell_center(1, 2), (15.0, 21.0));
    }

    #[test]
    fn missing_cells_written_as_nodata() {
        let g = RasterGrid::<f64>::new(2, 1, 0.0, 0.0, 1.0, -1.0, vec![-1.0, 0.1]).unwrap();
        assert_eq!(g.to_ascii().lines().last().unwrap(), "-1 0.1");
    }

    #[test]
    fn f32_grid_parses() {
        let g = RasterGrid::<f32>::from_ascii(TWO_BY_TWO).unwrap();
        assert_eq!(g.get(0, 1), Some(2.0f32));
    }
}
