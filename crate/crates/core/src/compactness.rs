//! Compactness scores mapping a polygon to (0, 1], plus their average.
//!
//! All five scores compare the polygon against an ideal shape (a circle, or
//! for the length-to-width score a square) and are invariant under rigid
//! transforms and uniform scaling.

use crate::geometry::{max_inscribed_circle, min_enclosing_circle, rotated_min_bounding_rect, Polygon};
use std::f64::consts::PI;

/// Relative tolerance for the inscribed-circle estimate, as a fraction of
/// the bounding-box diagonal.
pub const INSCRIBED_TOL_FRAC: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompactnessMetric {
    Schwartzberg,
    PolsbyPopper,
    Reock,
    TwoBalls,
    LengthWidth,
}

impl CompactnessMetric {
    pub const ALL: [CompactnessMetric; 5] = [
        CompactnessMetric::Schwartzberg,
        CompactnessMetric::PolsbyPopper,
        CompactnessMetric::Reock,
        CompactnessMetric::TwoBalls,
        CompactnessMetric::LengthWidth,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CompactnessMetric::Schwartzberg => "schwartzberg",
            CompactnessMetric::PolsbyPopper => "polsby_popper",
            CompactnessMetric::Reock => "reock",
            CompactnessMetric::TwoBalls => "two_balls",
            CompactnessMetric::LengthWidth => "length_width",
        }
    }

    pub fn evaluate(&self, p: &Polygon) -> f64 {
        match self {
            CompactnessMetric::Schwartzberg => schwartzberg(p),
            CompactnessMetric::PolsbyPopper => polsby_popper(p),
            CompactnessMetric::Reock => reock(p),
            CompactnessMetric::TwoBalls => two_balls(p),
            CompactnessMetric::LengthWidth => length_width(p),
        }
    }
}

/// Per-metric scores plus their arithmetic mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreReport {
    pub schwartzberg: f64,
    pub polsby_popper: f64,
    pub reock: f64,
    pub two_balls: f64,
    pub length_width: f64,
    pub collective: f64,
}

/// S = 2*sqrt(pi*A) / P: perimeter relative to the circle of equal area.
pub fn schwartzberg(p: &Polygon) -> f64 {
    2.0 * (PI * p.area()).sqrt() / p.perimeter()
}

/// PP = 4*pi*A / P^2. Equals the square of the Schwartzberg score.
pub fn polsby_popper(p: &Polygon) -> f64 {
    let per = p.perimeter();
    4.0 * PI * p.area() / (per * per)
}

/// R = A / area of the minimum enclosing circle.
pub fn reock(p: &Polygon) -> f64 {
    let mbc = min_enclosing_circle(p);
    p.area() / (PI * mbc.radius * mbc.radius)
}

/// TB = circumference ratio of the maximum inscribed circle to the minimum
/// enclosing circle, i.e. the radius ratio.
pub fn two_balls(p: &Polygon) -> f64 {
    let tol = INSCRIBED_TOL_FRAC * p.bounding_diagonal();
    let inner = max_inscribed_circle(p, tol);
    let outer = min_enclosing_circle(p);
    inner.radius / outer.radius
}

/// LW = shorter side over longer side of the rotated minimum bounding
/// rectangle.
pub fn length_width(p: &Polygon) -> f64 {
    let r = rotated_min_bounding_rect(p);
    let (a, b) = r.side_lengths();
    a.min(b) / a.max(b)
}

/// All five scores and their mean.
pub fn score_report(p: &Polygon) -> ScoreReport {
    let s = schwartzberg(p);
    let pp = polsby_popper(p);
    let r = reock(p);
    let tb = two_balls(p);
    let lw = length_width(p);
    ScoreReport {
        schwartzberg: s,
        polsby_popper: pp,
        reock: r,
        two_balls: tb,
        length_width: lw,
        collective: (s + pp + r + tb + lw) / 5.0,
    }
}
