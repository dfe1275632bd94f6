//! `geo3d` command line: terrain factors, spatial statistics, network analysis
//! and address matching over files in the geo3d data formats.
//!
//! Exit codes: 0 success, 1 invalid input or failed analysis, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use geo3d::geodata::{
    load_address_library, load_network, load_points, load_raster, render_heatmap, save_raster, AnalysisKind,
    AnalysisReport, Provenance, RasterGrid,
};
use geo3d::network::{
    connectivity, geocode, indoor_outdoor_route, measure_indices, neighbors, route_between_addresses, GeocodeMatch,
    NetworkIndices, RouteResult,
};
use geo3d::stats::{
    correlation_matrix, empirical_semivariogram, fit_nurbs_surface, fit_trend_surface, fit_variogram,
    interpolate_grid, krige_grid, monomial_exponents, GridSpec, IdwParams, InterpolationMethod, Neighbors,
    VariogramKind, VariogramModel, GRID_NODATA, MAX_TREND_DEGREE,
};
use geo3d::terrain::{terrain_factor, TerrainFactor, TerrainOptions};
use geo3d::{Error, Grid, Network, Points, Result};

#[derive(Debug, Parser)]
#[command(name = "geo3d", version, about = "3D geospatial analysis", propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Topographic factors of a DEM.
    #[command(subcommand)]
    Terrain(TerrainCmd),
    /// Statistics and interpolation over scattered points.
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Raster rendering.
    #[command(subcommand)]
    Render(RenderCmd),
    /// Network indices, routing and connectivity.
    #[command(subcommand)]
    Net(NetCmd),
    /// Address matching and address-to-address routing.
    #[command(subcommand)]
    Geo(GeoCmd),
}

#[derive(Debug, Subcommand)]
enum TerrainCmd {
    /// Slope in degrees.
    Slope(TerrainArgs),
    /// Aspect in degrees clockwise from north; flat cells get -1.
    Aspect(TerrainArgs),
    /// Plan (contour) curvature.
    PlanCurv(TerrainArgs),
    /// Profile curvature.
    ProfCurv(TerrainArgs),
}

#[derive(Debug, Args)]
struct TerrainArgs {
    /// Input DEM (ASCII grid).
    #[arg(long)]
    dem: PathBuf,
    /// Output grid.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum StatsCmd {
    /// Pearson correlation matrix of attributes.
    Correlate {
        #[arg(long)]
        points: PathBuf,
        /// Comma-separated attribute names.
        #[arg(long, value_delimiter = ',', required = true)]
        attrs: Vec<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Polynomial trend surface.
    Trend {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value = "z")]
        attr: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=MAX_TREND_DEGREE as i64))]
        degree: u8,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Evaluate the surface on x0,y0,cellsize,ncols,nrows.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid_spec, requires = "out")]
        grid: Option<GridSpec<f64>>,
        #[arg(long, requires = "grid")]
        out: Option<PathBuf>,
    },
    /// Inverse distance weighting onto a grid.
    Idw {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value = "z")]
        attr: String,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        power: f64,
        /// Use only the k nearest samples.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        neighbors: Option<u32>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid_spec)]
        grid: GridSpec<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Also render the grid as an SVG heatmap.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Empirical semivariogram and fitted model.
    Variogram {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value = "z")]
        attr: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        lags: u32,
        #[arg(long, allow_hyphen_values = true)]
        max_lag: f64,
        #[arg(long, default_value = "spherical", value_parser = parse_kind)]
        model: VariogramKind,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Ordinary Kriging onto a grid.
    Krige {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value = "z")]
        attr: String,
        #[arg(long, value_parser = parse_kind)]
        model: VariogramKind,
        #[arg(long, allow_hyphen_values = true)]
        nugget: f64,
        #[arg(long, allow_hyphen_values = true)]
        sill: f64,
        #[arg(long, allow_hyphen_values = true)]
        range: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid_spec)]
        grid: GridSpec<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Kriging variance grid.
        #[arg(long)]
        variance_out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Bicubic NURBS surface fit.
    Nurbs {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value = "z")]
        attr: String,
        /// Control net size, e.g. 8x8.
        #[arg(long, value_parser = parse_control)]
        control: (usize, usize),
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid_spec, requires = "out")]
        grid: Option<GridSpec<f64>>,
        #[arg(long, requires = "grid")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum RenderCmd {
    /// SVG heatmap of an ASCII grid.
    Heatmap {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum NetCmd {
    /// Loop count and alpha, beta, gamma indices.
    Indices {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Shortest route across layers.
    Route {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Connected components.
    Components {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Adjacent nodes.
    Neighbors {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        node: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum GeoCmd {
    /// Best library matches for a free-text address.
    Match {
        #[arg(long)]
        library: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        top: u32,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Route between two addresses.
    Route {
        #[arg(long)]
        library: PathBuf,
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        from_addr: String,
        #[arg(long)]
        to_addr: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn parse_grid_spec(s: &str) -> std::result::Result<GridSpec<f64>, String> {
    GridSpec::parse(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<VariogramKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_control(s: &str) -> std::result::Result<(usize, usize), String> {
    let bad = || format!("control net must look like 8x8, got '{s}'");
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nu: usize = a.trim().parse().map_err(|_| bad())?;
    let nv: usize = b.trim().parse().map_err(|_| bad())?;
    if nu < 4 || nv < 4 {
        return Err(format!("control net needs at least 4x4 for bicubic, got '{s}'"));
    }
    Ok((nu, nv))
}

/// Parses `args` (program name first) and runs the command. Data goes to
/// files or `out`, diagnostics to `err`.
pub fn run<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Terrain(t) => terrain(t),
        Command::Stats(s) => stats(s, out),
        Command::Render(RenderCmd::Heatmap { grid, out: svg }) => {
            let g: Grid = load_raster(&grid)?;
            render_heatmap(&g, &svg)
        }
        Command::Net(n) => net(n, out),
        Command::Geo(g) => geo(g, out),
    }
}

fn terrain(cmd: TerrainCmd) -> Result<()> {
    let (factor, args) = match cmd {
        TerrainCmd::Slope(a) => (TerrainFactor::Slope, a),
        TerrainCmd::Aspect(a) => (TerrainFactor::Aspect, a),
        TerrainCmd::PlanCurv(a) => (TerrainFactor::PlanCurvature, a),
        TerrainCmd::ProfCurv(a) => (TerrainFactor::ProfileCurvature, a),
    };
    let dem: Grid = load_raster(&args.dem)?;
    save_raster(&terrain_factor(&dem, factor, &TerrainOptions::default()), &args.out)
}

fn emit(report: AnalysisReport, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => report.save(p),
        None => out
            .write_all(report.to_json().as_bytes())
            .map_err(|e| Error::Io { path: "<stdout>".into(), source: e }),
    }
}

fn grid_json(spec: &GridSpec<f64>) -> Value {
    json!([spec.x_origin, spec.y_origin, spec.cellsize, spec.ncols, spec.nrows])
}

fn stats(cmd: StatsCmd, out: &mut dyn Write) -> Result<()> {
    match cmd {
        StatsCmd::Correlate { points, attrs, report } => {
            let pts: Points = load_points(&points)?;
            let names: Vec<&str> = attrs.iter().map(String::as_str).collect();
            let matrix = correlation_matrix(&pts, &names)?;
            let r = AnalysisReport::new(
                AnalysisKind::Correlation,
                json!({ "attributes": attrs, "matrix": matrix }),
                Provenance::for_inputs(&[&points])?,
            )
            .with_param("attrs", attrs.join(","));
            emit(r, report.as_deref(), out)
        }
        StatsCmd::Trend { points, attr, degree, report, grid, out: grid_out } => {
            let pts: Points = load_points(&points)?;
            let pts = with_attr_as_z(&pts, &attr)?;
            let model = fit_trend_surface(&pts, degree as usize)?;
            if let (Some(spec), Some(path)) = (&grid, &grid_out) {
                let g = fill_grid(spec, |x, y| Some(model.evaluate(x, y)))?;
                save_raster(&g, path)?;
            }
            let terms: Vec<String> = monomial_exponents(model.degree)
                .iter()
                .map(|&(i, j)| format!("x^{i}*y^{j}"))
                .collect();
            let mut r = AnalysisReport::new(
                AnalysisKind::TrendSurface,
                json!({
                    "degree": model.degree,
                    "terms": terms,
                    "coefficients": model.coefficients,
                    "r_squared": model.r_squared,
                    "residual_rms": model.residual_rms,
                }),
                Provenance::for_inputs(&[&points])?,
            )
            .with_param("attr", attr)
            .with_param("degree", degree);
            if let Some(spec) = &grid {
                r = r.with_param("grid", grid_json(spec));
            }
            emit(r, report.as_deref(), out)
        }
        StatsCmd::Idw { points, attr, power, neighbors, grid, out: grid_out, svg } => {
            let pts: Points = load_points(&points)?;
            let params = IdwParams {
                power,
                neighbors: neighbors.map_or(Neighbors::All, |k| Neighbors::Nearest(k as usize)),
            };
            let g = interpolate_grid(&pts, &attr, &InterpolationMethod::Idw(params), &grid)?;
            save_raster(&g, &grid_out)?;
            if let Some(svg) = svg {
                render_heatmap(&g, &svg)?;
            }
            Ok(())
        }
        StatsCmd::Variogram { points, attr, lags, max_lag, model, report } => {
            let pts: Points = load_points(&points)?;
            let bins = empirical_semivariogram(&pts, &attr, lags as usize, max_lag)?;
            let fitted = fit_variogram(&bins, model, max_lag, sample_variance(pts.attribute(&attr)?))?;
            let bins_json: Vec<Value> = bins
                .iter()
                .map(|b| json!({ "lag_center": b.lag_center, "gamma": b.gamma, "pair_count": b.pair_count }))
                .collect();
            let r = AnalysisReport::new(
                AnalysisKind::Variogram,
                json!({ "bins": bins_json, "model": model_json(&fitted) }),
                Provenance::for_inputs(&[&points])?,
            )
            .with_param("attr", attr)
            .with_param("lags", lags)
            .with_param("max_lag", max_lag)
            .with_param("model", model.to_string());
            emit(r, report.as_deref(), out)
        }
        StatsCmd::Krige { points, attr, model, nugget, sill, range, grid, out: grid_out, variance_out, svg } => {
            let pts: Points = load_points(&points)?;
            let vm = VariogramModel::new(model, nugget, sill, range)?;
            let (est, var) = krige_grid(&pts, &attr, &vm, &grid)?;
            save_raster(&est, &grid_out)?;
            if let Some(p) = variance_out {
                save_raster(&var, &p)?;
            }
            if let Some(svg) = svg {
                render_heatmap(&est, &svg)?;
            }
            Ok(())
        }
        StatsCmd::Nurbs { points, attr, control, report, grid, out: grid_out } => {
            let pts: Points = load_points(&points)?;
            let pts = with_attr_as_z(&pts, &attr)?;
            let model = fit_nurbs_surface(&pts, control.0, control.1)?;
            if let (Some(spec), Some(path)) = (&grid, &grid_out) {
                let g = fill_grid(spec, |x, y| model.evaluate(x, y).ok())?;
                save_raster(&g, path)?;
            }
            let (x0, x1, y0, y1) = model.domain();
            let mut r = AnalysisReport::new(
                AnalysisKind::Nurbs,
                json!({
                    "degree": [model.degree_u, model.degree_v],
                    "control_net": [model.nu, model.nv],
                    "domain": [x0, x1, y0, y1],
                    "knots_u": model.knots_u,
                    "knots_v": model.knots_v,
                    "control": model.control,
                    "weights": model.weights,
                    "residual_rms": model.residual_rms,
                }),
                Provenance::for_inputs(&[&points])?,
            )
            .with_param("attr", attr)
            .with_param("control", format!("{}x{}", control.0, control.1));
            if let Some(spec) = &grid {
                r = r.with_param("grid", grid_json(spec));
            }
            emit(r, report.as_deref(), out)
        }
    }
}

/// Copy of `pts` whose z column is `attr`, for fits that model z.
fn with_attr_as_z(pts: &Points, attr: &str) -> Result<Points> {
    if attr == "z" {
        return Ok(pts.clone());
    }
    let values = pts.attribute(attr)?;
    let xyz: Vec<[f64; 3]> = (0..pts.len()).map(|i| [pts.xs()[i], pts.ys()[i], values[i]]).collect();
    Points::from_xyz(&xyz)
}

fn fill_grid(spec: &GridSpec<f64>, f: impl Fn(f64, f64) -> Option<f64>) -> Result<Grid> {
    let blank = RasterGrid::new(
        spec.ncols,
        spec.nrows,
        spec.x_origin,
        spec.y_origin,
        spec.cellsize,
        GRID_NODATA,
        vec![0.0; spec.ncols * spec.nrows],
    )?;
    let values = (0..spec.ncols * spec.nrows)
        .map(|i| {
            let (x, y) = blank.cell_center(i / spec.ncols, i % spec.ncols);
            f(x, y).unwrap_or(GRID_NODATA)
        })
        .collect();
    blank.with_values(values)
}

fn sample_variance(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (v.len() - 1) as f64
}

fn model_json(m: &VariogramModel<f64>) -> Value {
    json!({ "kind": m.kind, "nugget": m.nugget, "sill": m.sill, "range": m.range })
}

fn route_json(r: &RouteResult<f64>) -> Value {
    json!({
        "node_path": r.node_path,
        "total_length": r.total_length,
        "layer_transitions": r.layer_transitions,
    })
}

fn indices_json(ix: &NetworkIndices) -> Value {
    json!({
        "m": ix.m,
        "n": ix.n,
        "p_subgraphs": ix.p_subgraphs,
        "k_loops": ix.k_loops,
        "beta": ix.beta_f64(),
        "alpha_paper": ix.alpha_paper_f64(),
        "alpha_standard": ix.alpha_standard_f64(),
        "gamma": ix.gamma_f64(),
        "exact": {
            "beta": ix.beta.to_string(),
            "alpha_paper": ix.alpha_paper.to_string(),
            "alpha_standard": ix.alpha_standard.map(|a| a.to_string()),
            "gamma": ix.gamma.to_string(),
        },
    })
}

fn match_json(m: &GeocodeMatch<f64>) -> Value {
    json!({ "record_id": m.record_id, "score": m.score, "location": m.location })
}

fn net(cmd: NetCmd, out: &mut dyn Write) -> Result<()> {
    match cmd {
        NetCmd::Indices { network, report } => {
            let g: Network = load_network(&network)?;
            let ix = measure_indices(&g)?;
            let r = AnalysisReport::new(
                AnalysisKind::NetworkIndices,
                indices_json(&ix),
                Provenance::for_inputs(&[&network])?,
            );
            emit(r, report.as_deref(), out)
        }
        NetCmd::Route { network, from, to, report } => {
            let g: Network = load_network(&network)?;
            let route = indoor_outdoor_route(&g, &from, &to)?;
            let r = AnalysisReport::new(AnalysisKind::Route, route_json(&route), Provenance::for_inputs(&[&network])?)
                .with_param("from", from)
                .with_param("to", to);
            emit(r, report.as_deref(), out)
        }
        NetCmd::Components { network, report } => {
            let g: Network = load_network(&network)?;
            let comps = connectivity(&g);
            let r = AnalysisReport::new(
                AnalysisKind::Components,
                json!({ "count": comps.len(), "components": comps }),
                Provenance::for_inputs(&[&network])?,
            );
            emit(r, report.as_deref(), out)
        }
        NetCmd::Neighbors { network, node, report } => {
            let g: Network = load_network(&network)?;
            let nb = neighbors(&g, &node)?;
            let r = AnalysisReport::new(
                AnalysisKind::Neighbors,
                json!({ "node": node, "neighbors": nb }),
                Provenance::for_inputs(&[&network])?,
            )
            .with_param("node", node);
            emit(r, report.as_deref(), out)
        }
    }
}

fn geo(cmd: GeoCmd, out: &mut dyn Write) -> Result<()> {
    match cmd {
        GeoCmd::Match { library, query, top, report } => {
            let lib = load_address_library(&library)?;
            let matches = geocode::<f64>(&lib, &query, top as usize)?;
            let r = AnalysisReport::new(
                AnalysisKind::Geocode,
                json!({ "matches": matches.iter().map(match_json).collect::<Vec<_>>() }),
                Provenance::for_inputs(&[&library])?,
            )
            .with_param("query", query)
            .with_param("top", top);
            emit(r, report.as_deref(), out)
        }
        GeoCmd::Route { library, network, from_addr, to_addr, report } => {
            let lib = load_address_library(&library)?;
            let g: Network = load_network(&network)?;
            let ar = route_between_addresses(&g, &lib, &from_addr, &to_addr)?;
            let mut outputs = route_json(&ar.route);
            outputs["from"] = match_json(&ar.from);
            outputs["to"] = match_json(&ar.to);
            outputs["from_node"] = json!(ar.from_node);
            outputs["to_node"] = json!(ar.to_node);
            let r = AnalysisReport::new(AnalysisKind::AddressRoute, outputs, Provenance::for_inputs(&[&library, &network])?)
                .with_param("from_addr", from_addr)
                .with_param("to_addr", to_addr);
            emit(r, report.as_deref(), out)
        }
    }
}
