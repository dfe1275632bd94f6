//! Uniform data access: file formats for grids, point sets, networks and
//! address libraries, plus persistence of analysis results.

mod address;
pub mod io;
mod network;
mod points;
mod raster;
mod report;
mod svg;

pub use address::{load_address_library, normalize_address, AddressLibrary, AddressRecord};
pub use network::{load_network, Edge, EdgeKind, EdgeSpec, Layer, Network3D, Node};
pub(crate) use network::distance3;
pub use points::{load_points, PointSet3D};
pub use raster::{load_raster, save_raster, RasterGrid};
pub use report::{AnalysisKind, AnalysisReport, InputDigest, Provenance};
pub use svg::{heatmap_svg, ramp_color, render_heatmap, CELL_PX};
