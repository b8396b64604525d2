//! Seeded generation of random simple non-convex polygons, used for
//! benchmarking and tests.

use crate::geometry::{Point, Polygon};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generates one simple non-convex polygon with a vertex count drawn
/// uniformly from `vertex_range`. Vertices are placed on a jittered circle
/// with strong radial noise; outputs that come out convex (or, rarely,
/// tangled) are regenerated.
pub fn generate_polygon(rng: &mut ChaCha8Rng, vertex_range: (usize, usize)) -> Polygon {
    loop {
        let n = rng.gen_range(vertex_range.0..=vertex_range.1);
        let radius = 50.0;
        // Jittered but strictly increasing angles keep the polygon
        // star-shaped around the origin, hence simple; a 2-opt style
        // regeneration handles any numerically degenerate leftovers.
        let mut angles: Vec<f64> = (0..n)
            .map(|k| {
                let base = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                base + rng.gen_range(-0.35..0.35) * 2.0 * std::f64::consts::PI / n as f64
            })
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let verts: Vec<Point> = angles
            .iter()
            .map(|&a| {
                let r = radius * rng.gen_range(0.35..1.0);
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let Ok(poly) = Polygon::new(verts) else {
            continue;
        };
        if !is_convex(&poly) {
            return poly;
        }
    }
}

/// Generates a reproducible corpus of `count` polygons.
pub fn generate_corpus(count: usize, vertex_range: (usize, usize), seed: u64) -> Vec<Polygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| generate_polygon(&mut rng, vertex_range))
        .collect()
}

/// A polygon is convex when no vertex is reflex.
pub fn is_convex(p: &Polygon) -> bool {
    let v = p.vertices();
    let n = v.len();
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let c = v[(i + 2) % n];
        let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if cross < 0.0 {
            return false;
        }
    }
    true
}
