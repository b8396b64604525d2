//! Grid discretization of the input polygon: cells with contributing areas,
//! 4-neighbor topology, and optional raster-derived weights.

use crate::geometry::{clip_polygon_to_rect, signed_area, Point, Polygon};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cell size {0} too large for the polygon bounding box")]
    CellTooLarge(f64),
    #[error("raster does not cover the polygon bounding box")]
    RasterCoverage,
    #[error("raster parse error: {0}")]
    RasterParse(String),
}

/// One grid cell: its center, the area of its intersection with the polygon
/// (contributing area), and a mass used for all accounting (defaults to the
/// contributing area; replaced by raster mass in weighted mode).
#[derive(Debug, Clone)]
pub struct GridCell {
    pub index: usize,
    pub center: Point,
    pub contributing_area: f64,
    pub weight: f64,
    pub row: usize,
    pub col: usize,
}

/// The discretized polygon. Cells are stored in row-major order of their
/// (row, col) position; cells with no intersection with the polygon are
/// excluded.
#[derive(Debug, Clone)]
pub struct Grid {
    cells: Vec<GridCell>,
    cell_size: f64,
    origin: Point,
    rows: usize,
    cols: usize,
    /// (row, col) -> cell index; None for excluded cells.
    lookup: Vec<Option<usize>>,
    /// Per cell, geometric contact with the [down, up, left, right]
    /// index-neighbor: true when the clipped outlines share a boundary
    /// edge. Index-adjacent cells whose shared grid edge lies outside the
    /// polygon are not neighbors.
    contact: Vec<[bool; 4]>,
    polygon: Arc<Polygon>,
}

impl Grid {
    pub fn cells(&self) -> &[GridCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn polygon(&self) -> &Arc<Polygon> {
        &self.polygon
    }

    pub fn cell_at(&self, row: usize, col: usize) -> Option<usize> {
        if row >= self.rows || col >= self.cols {
            return None;
        }
        self.lookup[row * self.cols + col]
    }

    /// Min corner of the (row, col) cell square.
    pub fn cell_min(&self, row: usize, col: usize) -> Point {
        Point::new(
            self.origin.x + col as f64 * self.cell_size,
            self.origin.y + row as f64 * self.cell_size,
        )
    }

    /// Up-to-four orthogonal neighbors of a cell, by index. Only cells in
    /// geometric contact count: the clipped outlines must share part of the
    /// grid edge, so connectivity over neighbors matches the connectivity
    /// of the clipped cell union.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        let cell = &self.cells[index];
        let (r, c) = (cell.row as isize, cell.col as isize);
        [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
            .into_iter()
            .enumerate()
            .filter_map(move |(dir, (nr, nc))| {
                if nr < 0 || nc < 0 || !self.contact[index][dir] {
                    None
                } else {
                    self.cell_at(nr as usize, nc as usize)
                }
            })
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.contributing_area).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.cells.iter().map(|c| c.weight).sum()
    }

    /// The clipped outline of a cell (intersection with the polygon).
    pub fn cell_outline(&self, index: usize) -> Vec<Point> {
        let cell = &self.cells[index];
        clip_polygon_to_rect(
            self.polygon.vertices(),
            self.cell_min(cell.row, cell.col),
            self.cell_size,
            self.cell_size,
        )
    }
}

/// Grid cell size from the area-error tolerance and the smallest weight:
/// s = sqrt(tau * min(weights) * total_area). This bound makes a single
/// cell's area at most the tightest partition's tolerance band.
pub fn compute_cell_size(tau: f64, weights: &[f64], total_area: f64) -> Result<f64, GridError> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(GridError::InvalidArgument(format!(
            "tau must be in (0, 1], got {tau}"
        )));
    }
    if weights.is_empty() || weights.iter().any(|w| *w <= 0.0) {
        return Err(GridError::InvalidArgument(
            "weights must be non-empty and positive".into(),
        ));
    }
    if total_area <= 0.0 {
        return Err(GridError::InvalidArgument(format!(
            "total_area must be positive, got {total_area}"
        )));
    }
    let min_w = weights.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((tau * min_w * total_area).sqrt())
}

/// Covers the polygon bounding box with cells of size `s`, anchored at the
/// bounding-box min corner, keeping only cells that intersect the polygon.
pub fn build_grid(p: &Polygon, s: f64) -> Result<Grid, GridError> {
    if s <= 0.0 {
        return Err(GridError::InvalidArgument(format!(
            "cell size must be positive, got {s}"
        )));
    }
    let (min, max) = p.bounding_box();
    let (w, h) = (max.x - min.x, max.y - min.y);
    if s >= w.min(h) {
        return Err(GridError::CellTooLarge(s));
    }
    let cols = (w / s).ceil() as usize;
    let rows = (h / s).ceil() as usize;
    let poly = Arc::new(p.clone());
    let mut cells = Vec::new();
    let mut lookup = vec![None; rows * cols];
    let mut outlines: Vec<Vec<Point>> = Vec::new();
    let eps = 1e-6 * s;
    for row in 0..rows {
        for col in 0..cols {
            let cell_min = Point::new(min.x + col as f64 * s, min.y + row as f64 * s);
            let clipped = clip_polygon_to_rect(p.vertices(), cell_min, s, s);
            let mut alpha = signed_area(&clipped).abs();
            if alpha < 1e-12 {
                continue;
            }
            alpha = alpha.min(s * s);
            let index = cells.len();
            lookup[row * cols + col] = Some(index);
            outlines.push(clipped);
            cells.push(GridCell {
                index,
                center: Point::new(cell_min.x + 0.5 * s, cell_min.y + 0.5 * s),
                contributing_area: alpha,
                weight: alpha,
                row,
                col,
            });
        }
    }
    // Geometric contact: index-adjacent cells are neighbors only when their
    // clipped outlines overlap along the shared grid line for a positive
    // length. A shared grid edge that lies entirely outside the polygon (a
    // concave pocket passing between two cells) links the cells in index
    // space but not in geometry.
    let touches = |a: usize, b: usize, vertical: bool, coord: f64| -> bool {
        let ca = line_coverage(&outlines[a], vertical, coord, eps);
        let cb = line_coverage(&outlines[b], vertical, coord, eps);
        let mut overlap = 0.0;
        for &(l1, h1) in &ca {
            for &(l2, h2) in &cb {
                overlap += (h1.min(h2) - l1.max(l2)).max(0.0);
            }
        }
        overlap > eps
    };
    let mut contact = vec![[false; 4]; cells.len()];
    for i in 0..cells.len() {
        let (row, col) = (cells[i].row, cells[i].col);
        if row + 1 < rows {
            if let Some(up) = lookup[(row + 1) * cols + col] {
                let t = touches(i, up, false, min.y + (row + 1) as f64 * s);
                contact[i][1] = t;
                contact[up][0] = t;
            }
        }
        if col + 1 < cols {
            if let Some(right) = lookup[row * cols + col + 1] {
                let t = touches(i, right, true, min.x + (col + 1) as f64 * s);
                contact[i][3] = t;
                contact[right][2] = t;
            }
        }
    }
    Ok(Grid {
        cells,
        cell_size: s,
        origin: min,
        rows,
        cols,
        lookup,
        contact,
        polygon: poly,
    })
}

/// Net boundary coverage of a clipped cell outline along one grid line
/// (x = coord when `vertical`, else y = coord), as disjoint intervals of
/// the other coordinate. Anti-parallel overlapping edges (zero-width
/// clipping spikes) cancel, leaving only real boundary.
fn line_coverage(outline: &[Point], vertical: bool, coord: f64, eps: f64) -> Vec<(f64, f64)> {
    let n = outline.len();
    // (lo, hi, direction) per collinear edge.
    let mut ivals: Vec<(f64, f64, f64)> = Vec::new();
    for j in 0..n {
        let a = outline[j];
        let b = outline[(j + 1) % n];
        let (pa, pb, ta, tb) = if vertical {
            (a.x, b.x, a.y, b.y)
        } else {
            (a.y, b.y, a.x, b.x)
        };
        if (pa - coord).abs() <= eps && (pb - coord).abs() <= eps && ta != tb {
            ivals.push((ta.min(tb), ta.max(tb), if tb > ta { 1.0 } else { -1.0 }));
        }
    }
    let mut breaks: Vec<f64> = ivals.iter().flat_map(|&(l, h, _)| [l, h]).collect();
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breaks.dedup();
    let mut out = Vec::new();
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let net: f64 = ivals
            .iter()
            .filter(|&&(l, h, _)| l < mid && mid < h)
            .map(|&(_, _, d)| d)
            .sum();
        if net != 0.0 {
            out.push((w[0], w[1]));
        }
    }
    out
}

/// A row-major raster of density values over a georeferenced frame.
///
/// The exchange format is the minimal ASCII grid: a header of
/// `ncols`, `nrows`, `xllcorner`, `yllcorner`, `cellsize`, followed by
/// `nrows * ncols` values, top row first.
#[derive(Debug, Clone)]
pub struct WeightRaster {
    pub ncols: usize,
    pub nrows: usize,
    pub xllcorner: f64,
    pub yllcorner: f64,
    pub cellsize: f64,
    /// Densities stored bottom row first (matching world y order).
    values: Vec<f64>,
}

impl WeightRaster {
    pub fn new(
        ncols: usize,
        nrows: usize,
        xllcorner: f64,
        yllcorner: f64,
        cellsize: f64,
        values_bottom_first: Vec<f64>,
    ) -> Result<Self, GridError> {
        if values_bottom_first.len() != ncols * nrows {
            return Err(GridError::RasterParse(format!(
                "expected {} values, got {}",
                ncols * nrows,
                values_bottom_first.len()
            )));
        }
        Ok(WeightRaster {
            ncols,
            nrows,
            xllcorner,
            yllcorner,
            cellsize,
            values: values_bottom_first,
        })
    }

    /// Builds a raster by sampling `f` at pixel centers.
    pub fn from_fn(
        ncols: usize,
        nrows: usize,
        xllcorner: f64,
        yllcorner: f64,
        cellsize: f64,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(ncols * nrows);
        for row in 0..nrows {
            for col in 0..ncols {
                let x = xllcorner + (col as f64 + 0.5) * cellsize;
                let y = yllcorner + (row as f64 + 0.5) * cellsize;
                values.push(f(x, y));
            }
        }
        WeightRaster {
            ncols,
            nrows,
            xllcorner,
            yllcorner,
            cellsize,
            values,
        }
    }

    pub fn parse(text: &str) -> Result<Self, GridError> {
        let mut tokens = text.split_whitespace().peekable();
        let mut header = |name: &str| -> Result<f64, GridError> {
            let key = tokens
                .next()
                .ok_or_else(|| GridError::RasterParse(format!("missing {name}")))?;
            if !key.eq_ignore_ascii_case(name) {
                return Err(GridError::RasterParse(format!(
                    "expected header {name}, got {key}"
                )));
            }
            let val = tokens
                .next()
                .ok_or_else(|| GridError::RasterParse(format!("missing value for {name}")))?;
            val.parse::<f64>()
                .map_err(|e| GridError::RasterParse(format!("{name}: {e}")))
        };
        let ncols = header("ncols")? as usize;
        let nrows = header("nrows")? as usize;
        let xllcorner = header("xllcorner")?;
        let yllcorner = header("yllcorner")?;
        let cellsize = header("cellsize")?;
        // Optional header: cells holding the NODATA marker carry no mass.
        let mut nodata = None;
        if tokens
            .peek()
            .is_some_and(|t| t.eq_ignore_ascii_case("nodata_value"))
        {
            tokens.next();
            let val = tokens.next().ok_or_else(|| {
                GridError::RasterParse("missing value for nodata_value".into())
            })?;
            nodata = Some(val.parse::<f64>().map_err(|e| {
                GridError::RasterParse(format!("nodata_value: {e}"))
            })?);
        }
        let mut top_first = Vec::with_capacity(ncols * nrows);
        for tok in tokens {
            let mut v = tok
                .parse::<f64>()
                .map_err(|e| GridError::RasterParse(e.to_string()))?;
            if nodata.is_some_and(|nd| v == nd) {
                v = 0.0;
            }
            top_first.push(v);
        }
        if top_first.len() != ncols * nrows {
            return Err(GridError::RasterParse(format!(
                "expected {} values, got {}",
                ncols * nrows,
                top_first.len()
            )));
        }
        // File order is top row first; store bottom first.
        let mut values = Vec::with_capacity(ncols * nrows);
        for row in (0..nrows).rev() {
            values.extend_from_slice(&top_first[row * ncols..(row + 1) * ncols]);
        }
        Ok(WeightRaster {
            ncols,
            nrows,
            xllcorner,
            yllcorner,
            cellsize,
            values,
        })
    }

    pub fn to_ascii(&self) -> String {
        let mut out = format!(
            "ncols {}\nnrows {}\nxllcorner {}\nyllcorner {}\ncellsize {}\n",
            self.ncols, self.nrows, self.xllcorner, self.yllcorner, self.cellsize
        );
        for row in (0..self.nrows).rev() {
            let line: Vec<String> = (0..self.ncols)
                .map(|c| format!("{}", self.values[row * self.ncols + c]))
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn density(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    fn covers(&self, min: Point, max: Point) -> bool {
        let x1 = self.xllcorner + self.ncols as f64 * self.cellsize;
        let y1 = self.yllcorner + self.nrows as f64 * self.cellsize;
        // Tolerate edge alignment up to half a raster pixel.
        let eps = 0.5 * self.cellsize;
        min.x >= self.xllcorner - eps && min.y >= self.yllcorner - eps && max.x <= x1 + eps && max.y <= y1 + eps
    }
}

/// Replaces every cell's weight with its raster mass: the contributing area
/// times the overlap-area-weighted mean density over the clipped cell.
///
/// A uniform unit-density raster therefore reproduces the contributing
/// areas bitwise, so the weighted pipeline degenerates exactly to area mode.
pub fn attach_weights(g: &Grid, raster: &WeightRaster) -> Result<Grid, GridError> {
    let (min, max) = g.polygon().bounding_box();
    if !raster.covers(min, max) {
        return Err(GridError::RasterCoverage);
    }
    let mut out = g.clone();
    let ps = raster.cellsize;
    for i in 0..out.cells.len() {
        let outline = g.cell_outline(i);
        if outline.len() < 3 {
            out.cells[i].weight = 0.0;
            continue;
        }
        let (cmin, cmax) = bounds(&outline);
        let c0 = (((cmin.x - raster.xllcorner) / ps).floor().max(0.0)) as usize;
        let r0 = (((cmin.y - raster.yllcorner) / ps).floor().max(0.0)) as usize;
        let c1 = ((((cmax.x - raster.xllcorner) / ps).ceil()) as usize).min(raster.ncols);
        let r1 = ((((cmax.y - raster.yllcorner) / ps).ceil()) as usize).min(raster.nrows);
        let mut mass = 0.0;
        let mut covered = 0.0;
        for r in r0..r1 {
            for c in c0..c1 {
                let pmin = Point::new(
                    raster.xllcorner + c as f64 * ps,
                    raster.yllcorner + r as f64 * ps,
                );
                let piece = clip_polygon_to_rect(&outline, pmin, ps, ps);
                let a = signed_area(&piece).abs();
                if a > 0.0 {
                    mass += raster.density(r, c) * a;
                    covered += a;
                }
            }
        }
        out.cells[i].weight = if covered > 0.0 {
            out.cells[i].contributing_area * (mass / covered)
        } else {
            0.0
        };
    }
    Ok(out)
}

fn bounds(pts: &[Point]) -> (Point, Point) {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    (min, max)
}
