//! Planar primitives: points, disks, segments, strips, and the unit-disk
//! adjacency graph. All predicates treat disks and strips as closed sets and
//! compare distances with an absolute tolerance of [`GEOM_EPS`], so boundary
//! contact counts as intersection.

/// Absolute tolerance on all distance comparisons.
pub const GEOM_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite());
        Point { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// Sensing disk; the sensing radius is 1 everywhere in this crate.
#[derive(Clone, Copy, Debug)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius > 0.0);
        Disk { center, radius }
    }

    /// Closed-disk membership.
    pub fn contains(&self, p: Point) -> bool {
        self.center.dist(p) <= self.radius + GEOM_EPS
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        debug_assert!(a.dist2(b) > 0.0, "degenerate segment");
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn dist_to_point(&self, p: Point) -> f64 {
        dist_point_to_span(p, self.a, self.b)
    }
}

/// Distance from `p` to the (possibly degenerate) segment `a`..`b`.
pub(crate) fn dist_point_to_span(p: Point, a: Point, b: Point) -> f64 {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len2 = abx * abx + aby * aby;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (((p.x - a.x) * abx + (p.y - a.y) * aby) / len2).clamp(0.0, 1.0);
    let q = Point::new(a.x + t * abx, a.y + t * aby);
    p.dist(q)
}

/// Rectangle of the given half-width around a segment, in the segment's own
/// frame; a strip of half-width 0 degenerates to its axis.
#[derive(Clone, Copy, Debug)]
pub struct Strip {
    pub axis: Segment,
    pub half_width: f64,
}

impl Strip {
    pub fn new(axis: Segment, half_width: f64) -> Self {
        debug_assert!(half_width >= 0.0);
        Strip { axis, half_width }
    }

    /// Distance from a point to the strip rectangle (0 inside).
    pub fn dist_to_point(&self, p: Point) -> f64 {
        let a = self.axis.a;
        let b = self.axis.b;
        let len = self.axis.length();
        let ux = (b.x - a.x) / len;
        let uy = (b.y - a.y) / len;
        // local coordinates: along-axis t in [0, len], lateral s in [-w, w]
        let t = (p.x - a.x) * ux + (p.y - a.y) * uy;
        let s = -(p.x - a.x) * uy + (p.y - a.y) * ux;
        let dt = if t < 0.0 {
            -t
        } else if t > len {
            t - len
        } else {
            0.0
        };
        let ds = (s.abs() - self.half_width).max(0.0);
        (dt * dt + ds * ds).sqrt()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.dist_to_point(p) <= GEOM_EPS
    }
}

/// True iff the closed disk meets the closed strip rectangle.
pub fn disk_intersects_strip(d: &Disk, s: &Strip) -> bool {
    s.dist_to_point(d.center) <= d.radius + GEOM_EPS
}

/// True iff the closed disk meets the segment (zero-width strip case).
pub fn disk_intersects_segment(d: &Disk, seg: &Segment) -> bool {
    seg.dist_to_point(d.center) <= d.radius + GEOM_EPS
}

/// True iff some disk in the slice contains `p`.
pub fn point_covered(p: Point, sensors: &[Disk]) -> bool {
    sensors.iter().any(|d| d.contains(p))
}

/// Undirected unit-disk adjacency: an edge joins two sensors whose sensing
/// disks overlap (center distance at most the radius sum).
#[derive(Clone, Debug)]
pub struct AdjacencyGraph {
    adj: Vec<Vec<u32>>,
}

impl AdjacencyGraph {
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Neighbor ids in ascending order.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&(j as u32)).is_ok()
    }
}

pub fn build_adjacency_graph(sensors: &[Disk]) -> AdjacencyGraph {
    let n = sensors.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let reach = sensors[i].radius + sensors[j].radius + GEOM_EPS;
            if sensors[i].center.dist2(sensors[j].center) <= reach * reach {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    AdjacencyGraph { adj }
}

/// Liang-Barsky clip of segment `a`..`b` to the closed box [0, side]^2.
/// The result may be degenerate (a single point) when the segment only
/// touches the box.
pub(crate) fn clip_segment_to_box(a: Point, b: Point, side: f64) -> Option<(Point, Point)> {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-dx, a.x - 0.0),
        (dx, side - a.x),
        (-dy, a.y - 0.0),
        (dy, side - a.y),
    ] {
        if p.abs() <= f64::EPSILON {
            if q < -GEOM_EPS {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                if r > t1 {
                    return None;
                }
                if r > t0 {
                    t0 = r;
                }
            } else {
                if r < t0 {
                    return None;
                }
                if r < t1 {
                    t1 = r;
                }
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let pa = Point::new(a.x + t0 * dx, a.y + t0 * dy);
    let pb = Point::new(a.x + t1 * dx, a.y + t1 * dy);
    Some((pa, pb))
}

/// Clips a segment to the strip rectangle; returns endpoints in world
/// coordinates (possibly coincident when the overlap is a single point).
pub(crate) fn clip_segment_to_strip(a: Point, b: Point, strip: &Strip) -> Option<(Point, Point)> {
    let sa = strip.axis.a;
    let sb = strip.axis.b;
    let len = strip.axis.length();
    let ux = (sb.x - sa.x) / len;
    let uy = (sb.y - sa.y) / len;
    let to_local = |p: Point| {
        Point::new(
            (p.x - sa.x) * ux + (p.y - sa.y) * uy,
            -(p.x - sa.x) * uy + (p.y - sa.y) * ux,
        )
    };
    let la = to_local(a);
    let lb = to_local(b);
    let w = strip.half_width;
    // Liang-Barsky against t in [0, len], s in [-w, w].
    let dx = lb.x - la.x;
    let dy = lb.y - la.y;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-dx, la.x),
        (dx, len - la.x),
        (-dy, la.y + w),
        (dy, w - la.y),
    ] {
        if p.abs() <= f64::EPSILON {
            if q < -GEOM_EPS {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                if r > t1 {
                    return None;
                }
                if r > t0 {
                    t0 = r;
                }
            } else {
                if r < t0 {
                    return None;
                }
                if r < t1 {
                    t1 = r;
                }
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let pa = Point::new(a.x + t0 * (b.x - a.x), a.y + t0 * (b.y - a.y));
    let pb = Point::new(a.x + t1 * (b.x - a.x), a.y + t1 * (b.y - a.y));
    Some((pa, pb))
}
