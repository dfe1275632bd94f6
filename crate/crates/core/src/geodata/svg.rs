use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geodata::io::atomic_write;
use crate::geodata::raster::RasterGrid;
use crate::scalar::Real;

/// Side length of one cell in SVG user units.
pub const CELL_PX: usize = 10;

/// Linear blue (t = 0) to red (t = 1) ramp.
pub fn ramp_color(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0);
    [(255.0 * t).round() as u8, 0, (255.0 * (1.0 - t)).round() as u8]
}

/// Renders one rectangle per cell, coloured by value. Missing cells get
/// `fill="none"`. A grid whose values are all equal maps to the ramp midpoint.
pub fn heatmap_svg<T: Real>(grid: &RasterGrid<T>) -> Result<String> {
    let (lo, hi) = grid
        .value_range()
        .ok_or(Error::Empty("heatmap grid has no non-missing cells"))?;
    let (lo, hi) = (lo.as_f64(), hi.as_f64());
    let (w, h) = (grid.ncols() * CELL_PX, grid.nrows() * CELL_PX);
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    for row in 0..grid.nrows() {
        for col in 0..grid.ncols() {
            let (x, y) = (col * CELL_PX, row * CELL_PX);
            let fill = match grid.get(row, col) {
                None => "none".to_string(),
                Some(v) => {
                    let t = if hi > lo { (v.as_f64() - lo) / (hi - lo) } else { 0.5 };
                    let [r, g, b] = ramp_color(t);
                    format!("#{r:02x}{g:02x}{b:02x}")
                }
            };
            writeln!(
                svg,
                r#"<rect x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" fill="{fill}"/>"#
            )
            .unwrap();
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_heatmap<T: Real>(grid: &RasterGrid<T>, path: impl AsRef<Path>) -> Result<()> {
    atomic_write(path.as_ref(), heatmap_svg(grid)?.as_bytes())
}
