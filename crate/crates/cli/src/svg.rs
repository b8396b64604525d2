//! SVG 1.1 rendering of a decomposition: filled sub-polygons, the outer
//! boundary, and optional grid / center overlays. Output is deterministic:
//! colors depend only on the partition id.

use areadecomp::{DecompositionResult, Point, Polygon};
use std::fmt::Write;

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub width: f64,
    pub show_grid: bool,
    pub show_partitions: bool,
    pub show_outline: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 800.0,
            show_grid: false,
            show_partitions: true,
            show_outline: true,
        }
    }
}

/// A fixed qualitative palette; ids wrap around.
pub fn partition_color(id: usize) -> &'static str {
    const PALETTE: [&str; 10] = [
        "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
        "#9c755f", "#bab0ac",
    ];
    PALETTE[id % PALETTE.len()]
}

fn bbox(p: &Polygon) -> (f64, f64, f64, f64) {
    let vs = p.vertices();
    let mut xmin = f64::INFINITY;
    let mut ymin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for v in vs {
        xmin = xmin.min(v.x);
        ymin = ymin.min(v.y);
        xmax = xmax.max(v.x);
        ymax = ymax.max(v.y);
    }
    (xmin, ymin, xmax, ymax)
}

struct Mapper {
    xmin: f64,
    ymax: f64,
    scale: f64,
}

impl Mapper {
    fn map(&self, p: Point) -> (f64, f64) {
        // SVG y grows downward.
        ((p.x - self.xmin) * self.scale, (self.ymax - p.y) * self.scale)
    }
}

fn path_d(poly: &Polygon, m: &Mapper) -> String {
    let mut d = String::new();
    for (i, v) in poly.vertices().iter().enumerate() {
        let (x, y) = m.map(*v);
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd} {x:.3} {y:.3} ");
    }
    d.push('Z');
    d
}

pub fn render(outline: &Polygon, res: &DecompositionResult, opt: &RenderOptions) -> String {
    let (xmin, ymin, xmax, ymax) = bbox(outline);
    let pad = 0.03 * (xmax - xmin).max(ymax - ymin);
    let (xmin, ymin, xmax, ymax) = (xmin - pad, ymin - pad, xmax + pad, ymax + pad);
    let scale = opt.width / (xmax - xmin);
    let height = (ymax - ymin) * scale;
    let m = Mapper { xmin, ymax, scale };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.3} {:.3}\">",
        opt.width, height, opt.width, height
    );

    if opt.show_partitions {
        let _ = writeln!(svg, "  <g id=\"partitions\">");
        for (i, poly) in res.polygons.iter().enumerate() {
            let _ = writeln!(
                svg,
                "    <path d=\"{}\" fill=\"{}\" fill-opacity=\"0.75\" \
                 stroke=\"#333333\" stroke-width=\"1\"/>",
                path_d(poly, &m),
                partition_color(i)
            );
        }
        let _ = writeln!(svg, "  </g>");
    }

    if opt.show_grid {
        let _ = writeln!(svg, "  <g id=\"grid\" stroke=\"#888888\" stroke-width=\"0.5\">");
        let s = res.cell_size;
        for cell in res.partition_set.grid().cells() {
            let half = s / 2.0;
            let (x, y) = m.map(Point::new(cell.center.x - half, cell.center.y + half));
            let _ = writeln!(
                svg,
                "    <rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" \
                 fill=\"none\"/>",
                x,
                y,
                s * scale,
                s * scale
            );
        }
        let _ = writeln!(svg, "  </g>");
    }

    if opt.show_outline {
        let _ = writeln!(
            svg,
            "  <g id=\"outline\"><path d=\"{}\" fill=\"none\" stroke=\"#000000\" \
             stroke-width=\"2\"/></g>",
            path_d(outline, &m)
        );
    }

    svg.push_str("</svg>\n");
    svg
}
