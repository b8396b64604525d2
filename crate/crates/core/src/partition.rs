//! The potential-field partition model: cell assignment, partition-to-polygon
//! extraction, area errors, and the penalized bi-objective.

use crate::compactness::CompactnessMetric;
use crate::geometry::{signed_area, Point, Polygon};
use crate::grid::Grid;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("weights must sum to 1 (got {0})")]
    WeightSum(f64),
    #[error("weights must lie in (0, 1)")]
    WeightRange,
    #[error("at least one partition required")]
    Empty,
    #[error("partition {0} has a disconnected cell set; rebalancing was skipped")]
    Disconnected(usize),
    #[error("partition {0} has no cells")]
    EmptyPartition(usize),
}

/// An attractive potential field and the cells it currently owns.
#[derive(Debug, Clone)]
pub struct Partition {
    pub id: usize,
    pub cells: Vec<usize>,
    pub center: Point,
    pub radius: f64,
    pub target_weight: f64,
}

/// Values of the penalized bi-objective f = f_area - f_shape plus the
/// constraint penalty (pi_c * pi_p)^2.
#[derive(Debug, Clone)]
pub struct ObjectiveValue {
    pub f: f64,
    pub f_area: f64,
    pub f_shape: f64,
    pub penalty: f64,
    pub area_errors: Vec<f64>,
}

impl ObjectiveValue {
    pub fn total(&self) -> f64 {
        self.f + self.penalty
    }
}

/// All partitions plus the grid they divide. The optimizer's state.
#[derive(Debug, Clone)]
pub struct PartitionSet {
    pub partitions: Vec<Partition>,
    grid: Arc<Grid>,
    /// Per grid cell, the owning partition id. Valid after `assign_cells`.
    owner: Vec<usize>,
}

impl PartitionSet {
    pub fn new(
        grid: Arc<Grid>,
        descriptors: Vec<(Point, f64, f64)>, // (center, radius, target weight)
    ) -> Result<Self, PartitionError> {
        if descriptors.is_empty() {
            return Err(PartitionError::Empty);
        }
        let sum: f64 = descriptors.iter().map(|d| d.2).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(PartitionError::WeightSum(sum));
        }
        if descriptors.iter().any(|d| d.2 <= 0.0 || d.2 >= 1.0) {
            // A single partition with weight 1.0 is the degenerate identity
            // case; allow it.
            if !(descriptors.len() == 1 && (descriptors[0].2 - 1.0).abs() <= 1e-9) {
                return Err(PartitionError::WeightRange);
            }
        }
        let ncells = grid.len();
        let partitions = descriptors
            .into_iter()
            .enumerate()
            .map(|(id, (center, radius, target_weight))| Partition {
                id,
                cells: Vec::new(),
                center,
                radius,
                target_weight,
            })
            .collect();
        Ok(PartitionSet {
            partitions,
            grid,
            owner: vec![usize::MAX; ncells],
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.partitions.len()
    }

    /// Owner partition id per cell index. Valid after `assign_cells`.
    pub fn owners(&self) -> &[usize] {
        &self.owner
    }

    /// Total mass of the grid (contributing areas, or raster mass in
    /// weighted mode).
    pub fn total_mass(&self) -> f64 {
        self.grid.total_weight()
    }

    /// Mass currently assigned to partition `i`.
    pub fn mass(&self, i: usize) -> f64 {
        self.partitions[i]
            .cells
            .iter()
            .map(|&c| self.grid.cells()[c].weight)
            .sum()
    }

    /// The potential-field score of cell `k` for partition `i`: distance to
    /// the field center divided by the field radius. Cells join the
    /// partition minimizing this ratio.
    pub fn field_score(&self, i: usize, k: usize) -> f64 {
        let p = &self.partitions[i];
        p.center.dist(self.grid.cells()[k].center) / p.radius
    }

    /// Assigns every grid cell to the partition minimizing d/r; ties go to
    /// the lowest partition id.
    pub fn assign_cells(&mut self) {
        for p in &mut self.partitions {
            p.cells.clear();
        }
        for k in 0..self.grid.len() {
            let mut best = 0usize;
            let mut best_score = f64::INFINITY;
            for i in 0..self.partitions.len() {
                let score = self.field_score(i, k);
                if score < best_score {
                    best_score = score;
                    best = i;
                }
            }
            self.owner[k] = best;
            self.partitions[best].cells.push(k);
        }
    }

    /// Moves cell `k` to partition `to`, keeping `owner` consistent.
    pub(crate) fn move_cell(&mut self, k: usize, to: usize) {
        let from = self.owner[k];
        if from == to {
            return;
        }
        if from != usize::MAX {
            self.partitions[from].cells.retain(|&c| c != k);
        }
        self.partitions[to].cells.push(k);
        self.owner[k] = to;
    }

    /// Signed relative mass error of partition `i`:
    /// (mass - target) / target with target = w_i * total.
    pub fn area_error(&self, i: usize) -> f64 {
        let target = self.partitions[i].target_weight * self.total_mass();
        (self.mass(i) - target) / target
    }

    pub fn area_errors(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.area_error(i)).collect()
    }

    /// The penalized objective. `f_area` is the RMS of the per-partition
    /// relative errors, `f_shape` the mean compactness proxy, and the
    /// penalty quadratic in the amount the worst error exceeds `tau`.
    pub fn objective(&self, pi_c: f64, tau: f64) -> ObjectiveValue {
        self.objective_with_metric(pi_c, tau, CompactnessMetric::Schwartzberg)
    }

    pub fn objective_with_metric(
        &self,
        pi_c: f64,
        tau: f64,
        metric: CompactnessMetric,
    ) -> ObjectiveValue {
        let errors = self.area_errors();
        let n = self.n() as f64;
        let f_area = (errors.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
        let f_shape = (0..self.n())
            .map(|i| self.proxy_compactness(i, metric))
            .sum::<f64>()
            / n;
        let worst = errors.iter().map(|e| e.abs()).fold(0.0, f64::max);
        let pi_p = (worst - tau).max(0.0);
        let penalty = (pi_c * pi_p).powi(2);
        ObjectiveValue {
            f: f_area - f_shape,
            f_area,
            f_shape,
            penalty,
            area_errors: errors,
        }
    }

    /// Cheap per-iteration compactness proxy computed from cell geometry
    /// only; exact polygon-based scores are recomputed for final reporting.
    pub fn proxy_compactness(&self, i: usize, metric: CompactnessMetric) -> f64 {
        let cells = &self.partitions[i].cells;
        if cells.is_empty() {
            return 0.0;
        }
        let area: f64 = cells
            .iter()
            .map(|&c| self.grid.cells()[c].contributing_area)
            .sum();
        match metric {
            CompactnessMetric::Schwartzberg => self.proxy_schwartzberg(i, area),
            CompactnessMetric::PolsbyPopper => {
                let s = self.proxy_schwartzberg(i, area);
                s * s
            }
            CompactnessMetric::Reock => {
                let r = self.proxy_enclosing_radius(i);
                (area / (std::f64::consts::PI * r * r)).min(1.0)
            }
            CompactnessMetric::TwoBalls => {
                let inner = self.proxy_inscribed_radius(i);
                let outer = self.proxy_enclosing_radius(i);
                (inner / outer).min(1.0)
            }
            CompactnessMetric::LengthWidth => self.proxy_length_width(i),
        }
    }

    /// Schwartzberg from cell-sum area and exposed cell-edge perimeter.
    fn proxy_schwartzberg(&self, i: usize, area: f64) -> f64 {
        let s = self.grid.cell_size();
        let mut perim = 0.0;
        for &c in &self.partitions[i].cells {
            let mut in_part = 0usize;
            for nb in self.grid.neighbors(c) {
                if self.owner[nb] == i {
                    in_part += 1;
                }
            }
            perim += s * (4 - in_part) as f64;
        }
        if perim <= 0.0 {
            return 0.0;
        }
        (2.0 * (std::f64::consts::PI * area).sqrt() / perim).min(1.0)
    }

    fn proxy_enclosing_radius(&self, i: usize) -> f64 {
        // Radius of the smallest circle around the cell centers plus the
        // half cell diagonal. A centroid-based bound is close enough for a
        // ranking proxy.
        let cells = &self.partitions[i].cells;
        let half_diag = self.grid.cell_size() * std::f64::consts::FRAC_1_SQRT_2;
        let n = cells.len() as f64;
        let cx = cells.iter().map(|&c| self.grid.cells()[c].center.x).sum::<f64>() / n;
        let cy = cells.iter().map(|&c| self.grid.cells()[c].center.y).sum::<f64>() / n;
        let centroid = Point::new(cx, cy);
        let rmax = cells
            .iter()
            .map(|&c| centroid.dist(self.grid.cells()[c].center))
            .fold(0.0, f64::max);
        rmax + half_diag
    }

    /// Chebyshev-style BFS depth from the partition's exposed cells, scaled
    /// by the cell size.
    fn proxy_inscribed_radius(&self, i: usize) -> f64 {
        let cells = &self.partitions[i].cells;
        let mut depth: HashMap<usize, usize> = HashMap::new();
        let mut frontier: Vec<usize> = Vec::new();
        for &c in cells {
            let exposed = self.grid.neighbors(c).filter(|&nb| self.owner[nb] == i).count() < 4;
            if exposed {
                depth.insert(c, 0);
                frontier.push(c);
            }
        }
        let mut level = 0usize;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &c in &frontier {
                for nb in self.grid.neighbors(c) {
                    if self.owner[nb] == i && !depth.contains_key(&nb) {
                        depth.insert(nb, level);
                        next.push(nb);
                    }
                }
            }
            frontier = next;
        }
        let max_depth = depth.values().copied().max().unwrap_or(0);
        (max_depth as f64 + 0.5) * self.grid.cell_size()
    }

    fn proxy_length_width(&self, i: usize) -> f64 {
        let cells = &self.partitions[i].cells;
        let (mut min_r, mut max_r) = (usize::MAX, 0usize);
        let (mut min_c, mut max_c) = (usize::MAX, 0usize);
        for &c in cells {
            let cell = &self.grid.cells()[c];
            min_r = min_r.min(cell.row);
            max_r = max_r.max(cell.row);
            min_c = min_c.min(cell.col);
            max_c = max_c.max(cell.col);
        }
        let h = (max_r - min_r + 1) as f64;
        let w = (max_c - min_c + 1) as f64;
        w.min(h) / w.max(h)
    }

    /// Extracts one boundary polygon per partition. Interior edges shared by
    /// same-partition cells cancel; boundary cells contribute their clipped
    /// outlines.
    pub fn partitions_to_polygons(&self) -> Result<Vec<Polygon>, PartitionError> {
        (0..self.n()).map(|i| self.partition_polygon(i)).collect()
    }

    fn partition_polygon(&self, i: usize) -> Result<Polygon, PartitionError> {
        let cells = &self.partitions[i].cells;
        if cells.is_empty() {
            return Err(PartitionError::EmptyPartition(i));
        }
        let eps = 1e-6 * self.grid.cell_size();
        let key = |p: Point| -> (i64, i64) {
            ((p.x / eps).round() as i64, (p.y / eps).round() as i64)
        };
        // Collect directed edges of every clipped cell outline (CCW),
        // remembering the source cell.
        let mut raw: Vec<(Point, Point, usize)> = Vec::new();
        for &c in cells {
            let mut outline = self.grid.cell_outline(c);
            if signed_area(&outline) < 0.0 {
                outline.reverse();
            }
            let n = outline.len();
            for j in 0..n {
                let a = outline[j];
                let b = outline[(j + 1) % n];
                if key(a) != key(b) {
                    raw.push((a, b, c));
                }
            }
        }
        // Two cells can cover the same stretch of a shared grid line with
        // differently subdivided collinear edges (clipping may add a vertex
        // on one side only). Split every axis-aligned edge at all endpoint
        // positions seen on its line so overlapping stretches cancel
        // edge-for-edge; anti-parallel overlaps within one outline
        // (zero-width clipping spikes) cancel the same way.
        //
        // Breakpoint pools per line, keyed by the rounded fixed coordinate;
        // each pool maps rounded positions to one representative value so
        // both sides of a line subdivide identically.
        let r = |v: f64| -> i64 { (v / eps).round() as i64 };
        let mut pools: HashMap<(bool, i64), HashMap<i64, f64>> = HashMap::new();
        let classify = |a: Point, b: Point| -> Option<(bool, i64)> {
            if r(a.x) == r(b.x) {
                Some((true, r(a.x)))
            } else if r(a.y) == r(b.y) {
                Some((false, r(a.y)))
            } else {
                None
            }
        };
        for &(a, b, _) in &raw {
            if let Some(line) = classify(a, b) {
                let pool = pools.entry(line).or_default();
                for t in [if line.0 { a.y } else { a.x }, if line.0 { b.y } else { b.x }] {
                    pool.entry(r(t)).or_insert(t);
                }
            }
        }
        // Per undirected edge, the contributions: canonical-direction sign
        // and source cell. Opposite-sign pairs from different cells are
        // interior shared boundaries and cancel. Opposite-sign pairs from
        // one cell are zero-width connectors that keep the weakly connected
        // pieces of a single clipped cell in one ring; they survive as an
        // anti-parallel edge pair.
        type UndirKey = ((i64, i64), (i64, i64));
        let mut contributions: HashMap<UndirKey, Vec<(i8, usize, (Point, Point))>> =
            HashMap::new();
        let mut add_edge = |a: Point, b: Point, c: usize| {
            let (ka, kb) = (key(a), key(b));
            if ka == kb {
                return;
            }
            let (kmin, kmax, sign, rep) =
                if ka < kb { (ka, kb, 1, (a, b)) } else { (kb, ka, -1, (a, b)) };
            contributions
                .entry((kmin, kmax))
                .or_default()
                .push((sign, c, rep));
        };
        for &(a, b, c) in &raw {
            match classify(a, b) {
                Some(line) => {
                    let pool = &pools[&line];
                    let (ta, tb) = if line.0 { (a.y, b.y) } else { (a.x, b.x) };
                    let (lo, hi) = (ta.min(tb), ta.max(tb));
                    let mut ts: Vec<f64> = pool
                        .values()
                        .copied()
                        .filter(|&t| t > lo + eps && t < hi - eps)
                        .collect();
                    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                    if ta > tb {
                        ts.reverse();
                    }
                    let mut prev = a;
                    for t in ts {
                        let mid = if line.0 {
                            Point::new(a.x, t)
                        } else {
                            Point::new(t, a.y)
                        };
                        add_edge(prev, mid, c);
                        prev = mid;
                    }
                    add_edge(prev, b, c);
                }
                None => add_edge(a, b, c),
            }
        }
        let mut edges: HashMap<((i64, i64), (i64, i64)), (Point, Point)> = HashMap::new();
        for ((kmin, kmax), mut contribs) in contributions {
            // Cancel cross-cell opposite-sign pairs first.
            loop {
                let mut cancelled = false;
                'outer: for x in 0..contribs.len() {
                    for y in x + 1..contribs.len() {
                        if contribs[x].0 != contribs[y].0 && contribs[x].1 != contribs[y].1 {
                            contribs.swap_remove(y);
                            contribs.swap_remove(x);
                            cancelled = true;
                            break 'outer;
                        }
                    }
                }
                if !cancelled {
                    break;
                }
            }
            for (sign, _, (a, b)) in contribs {
                if sign > 0 {
                    edges.insert((kmin, kmax), (a, b));
                } else {
                    edges.insert((kmax, kmin), (a, b));
                }
            }
        }
        // Stitch the surviving boundary edges into loops. At a pinch vertex
        // take the sharpest left turn to keep the interior on the left.
        let mut by_start: HashMap<(i64, i64), Vec<((i64, i64), (i64, i64))>> = HashMap::new();
        for k in edges.keys() {
            by_start.entry(k.0).or_default().push(*k);
        }
        let mut loops: Vec<Vec<Point>> = Vec::new();
        while !edges.is_empty() {
            // Deterministic start, then face tracing: at every junction take
            // the sharpest left turn, closing the ring only when that turn
            // is back onto the starting edge. This yields minimal
            // non-crossing cycles; cycles that touch at pinch nodes are
            // spliced into one walk afterwards.
            let start_key = *edges.keys().min().unwrap();
            let start_pts = edges[&start_key];
            let mut ring: Vec<Point> = Vec::new();
            let mut cur = start_key;
            loop {
                let (a, b) = edges.remove(&cur).expect("edge disappeared");
                if let Some(v) = by_start.get_mut(&cur.0) {
                    v.retain(|e| *e != cur);
                }
                ring.push(a);
                let mut candidates = by_start.get(&cur.1).cloned().unwrap_or_default();
                candidates.sort_unstable();
                let din = (b.x - a.x, b.y - a.y);
                if candidates.is_empty() {
                    // Closed ring when back at the start; open chains are
                    // numerically degenerate either way.
                    break;
                }
                let next = *candidates
                    .iter()
                    .max_by(|&&e1, &&e2| {
                        let t1 = turn_angle(din, edges[&e1]);
                        let t2 = turn_angle(din, edges[&e2]);
                        t1.partial_cmp(&t2).unwrap_or(std::cmp::Ordering::Equal)
                    })
                    .unwrap();
                if cur.1 == start_key.0
                    && turn_angle(din, start_pts) >= turn_angle(din, edges[&next])
                {
                    break;
                }
                cur = next;
            }
            // Keep degenerate two-point cycles: a zero-width connector over a
            // notch can come out as its own back-and-forth walk, and it is
            // the only link between the regions on either side. It carries
            // no area but must participate in the splicing below.
            if ring.len() >= 2 {
                loops.push(ring);
            }
        }
        // Cycles that touch at a pinch vertex belong to one weakly simple
        // boundary walk: splice each such cycle into its partner at the
        // shared vertex. Lobes joined at a point merge into a single
        // counter-clockwise ring, and point-attached notches become
        // clockwise excursions of the same walk, so only genuinely detached
        // pieces survive as separate loops below.
        let mut merged: Vec<Vec<Point>> = Vec::new();
        let mut pending: std::collections::VecDeque<Vec<Point>> = loops.into();
        while let Some(mut ring) = pending.pop_front() {
            loop {
                let ring_keys: std::collections::HashSet<(i64, i64)> =
                    ring.iter().map(|&p| key(p)).collect();
                let mut spliced = false;
                for idx in 0..pending.len() {
                    let hit = pending[idx]
                        .iter()
                        .position(|&p| ring_keys.contains(&key(p)));
                    if let Some(j) = hit {
                        let other = pending.remove(idx).unwrap();
                        let kj = key(other[j]);
                        let at = ring.iter().position(|&p| key(p) == kj).unwrap();
                        let tail = ring.split_off(at);
                        ring.extend_from_slice(&other[j..]);
                        ring.extend_from_slice(&other[..j]);
                        ring.extend(tail);
                        spliced = true;
                        break;
                    }
                }
                if !spliced {
                    break;
                }
            }
            if ring.len() >= 3 {
                merged.push(ring);
            }
        }
        let loops = merged;
        // Clipping inconsistencies near polygon vertices can leave stray
        // sub-cell loops: tiny clockwise triangles where neighbor outlines
        // overlap slightly, or detached corner slivers. Anything below a
        // small fraction of one cell is such an artifact and is dropped;
        // larger extra loops are structural.
        let s2 = self.grid.cell_size() * self.grid.cell_size();
        let artifact_tol = 0.05 * s2;
        let mut outer: Vec<(f64, Vec<Point>)> = Vec::new();
        for l in loops {
            let a = signed_area(&l);
            if a < -artifact_tol {
                // A hole: the partition encloses foreign cells and cannot be
                // described by a single simple boundary.
                return Err(PartitionError::Disconnected(i));
            }
            if a > eps * eps {
                outer.push((a, l));
            }
        }
        if outer.is_empty() {
            return Err(PartitionError::EmptyPartition(i));
        }
        outer.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        if outer.len() > 1 && outer[1].0 > artifact_tol {
            return Err(PartitionError::Disconnected(i));
        }
        let ring = dedup_ring(outer.swap_remove(0).1, eps);
        Ok(Polygon::new_unchecked(ring))
    }
}

/// CCW turn angle from incoming direction to candidate edge, in (-pi, pi];
/// larger means a sharper left turn.
fn turn_angle(din: (f64, f64), edge: (Point, Point)) -> f64 {
    let dout = (edge.1.x - edge.0.x, edge.1.y - edge.0.y);
    let cross = din.0 * dout.1 - din.1 * dout.0;
    let dot = din.0 * dout.0 + din.1 * dout.1;
    cross.atan2(dot)
}

fn dedup_ring(ring: Vec<Point>, eps: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(ring.len());
    for p in ring {
        if out.last().map_or(true, |q: &Point| q.dist(p) > eps) {
            out.push(p);
        }
    }
    if out.len() >= 2 && out.first().unwrap().dist(*out.last().unwrap()) <= eps {
        out.pop();
    }
    out
}
