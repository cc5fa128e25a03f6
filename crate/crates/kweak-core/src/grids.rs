//! Square and hexagonal grid generation via the shifting mechanism, plus
//! total-edge-length measures. A grid is the set of tiling edges clipped to
//! the region; every tile has diameter at most κ (square diagonal = κ,
//! hexagon vertex-to-vertex = κ), so covering all grid segments yields a
//! κ-weak cover.

use std::collections::BTreeMap;

use crate::geometry::{clip_segment_to_box, Point, Segment, GEOM_EPS};

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Square,
    Hexagonal,
}

impl std::fmt::Display for GridKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GridKind::Square => write!(f, "square"),
            GridKind::Hexagonal => write!(f, "hexagonal"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub kind: GridKind,
    pub kappa: f64,
    pub offset: Point,
    pub region_side: f64,
    pub segments: Vec<Segment>,
}

#[derive(Clone, Debug)]
pub struct GridFamily {
    pub grids: Vec<Grid>,
    pub granularity: f64,
}

/// Horizontal and vertical full-length lines with tile side κ/√2, shifted by
/// `offset` and clipped to [0, L]^2; includes every line intersecting the
/// region.
pub fn square_grid(region_side: f64, kappa: f64, offset: Point) -> Grid {
    assert!(kappa > 1.0 && region_side > 0.0);
    let side = kappa / SQRT2;
    let mut segments = Vec::new();
    let positions = |off: f64| -> Vec<f64> {
        let i_lo = ((-off) / side - GEOM_EPS).ceil() as i64;
        let i_hi = ((region_side - off) / side + GEOM_EPS).floor() as i64;
        (i_lo..=i_hi).map(|i| off + i as f64 * side).collect()
    };
    for x in positions(offset.x) {
        segments.push(Segment::new(
            Point::new(x, 0.0),
            Point::new(x, region_side),
        ));
    }
    for y in positions(offset.y) {
        segments.push(Segment::new(
            Point::new(0.0, y),
            Point::new(region_side, y),
        ));
    }
    Grid {
        kind: GridKind::Square,
        kappa,
        offset,
        region_side,
        segments,
    }
}

// Flat-top hexagon geometry: vertices at angles 0,60,..,300 with circumradius
// s = kappa/2; centers on the lattice spanned by (1.5s, s*sqrt(3)/2) and
// (1.5s, -s*sqrt(3)/2).
fn hex_vertices(center: Point, s: f64) -> [Point; 6] {
    let mut v = [Point::new(0.0, 0.0); 6];
    for (k, slot) in v.iter_mut().enumerate() {
        let ang = std::f64::consts::FRAC_PI_3 * k as f64;
        *slot = Point::new(center.x + s * ang.cos(), center.y + s * ang.sin());
    }
    v
}

fn quantize(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

/// Regular hexagonal tiling with hexagon diameter κ (side κ/2), shared edges
/// emitted once, clipped to the region.
pub fn hex_grid(region_side: f64, kappa: f64, offset: Point) -> Grid {
    assert!(kappa > 1.0 && region_side > 0.0);
    let s = kappa / 2.0;
    let h = s * 3f64.sqrt() / 2.0;
    let a1 = (1.5 * s, h);
    let a2 = (1.5 * s, -h);
    let margin = 2.0 * s;
    let range = ((region_side + 2.0 * margin) / (1.5 * s)).ceil() as i64 + 2;
    let mut edges: BTreeMap<(i64, i64, i64, i64), (Point, Point)> = BTreeMap::new();
    for i in -range..=range {
        for j in -range..=range {
            let c = Point::new(
                offset.x + i as f64 * a1.0 + j as f64 * a2.0,
                offset.y + i as f64 * a1.1 + j as f64 * a2.1,
            );
            if c.x < -margin
                || c.x > region_side + margin
                || c.y < -margin
                || c.y > region_side + margin
            {
                continue;
            }
            let v = hex_vertices(c, s);
            for k in 0..6 {
                let (p, q) = (v[k], v[(k + 1) % 6]);
                let kp = (quantize(p.x), quantize(p.y));
                let kq = (quantize(q.x), quantize(q.y));
                let key = if kp <= kq {
                    (kp.0, kp.1, kq.0, kq.1)
                } else {
                    (kq.0, kq.1, kp.0, kp.1)
                };
                edges.entry(key).or_insert((p, q));
            }
        }
    }
    let mut segments = Vec::new();
    for (p, q) in edges.values() {
        if let Some((a, b)) = clip_segment_to_box(*p, *q, region_side) {
            if a.dist(b) > 1e-9 {
                segments.push(Segment::new(a, b));
            }
        }
    }
    Grid {
        kind: GridKind::Hexagonal,
        kappa,
        offset,
        region_side,
        segments,
    }
}

fn hex_contains(p: Point, s: f64, slack: f64) -> bool {
    // closed flat-top hexagon centered at the origin; edge normals at
    // 30, 90, 150 degrees, apothem s*sqrt(3)/2
    let apothem = s * 3f64.sqrt() / 2.0;
    for k in 0..3 {
        let ang = std::f64::consts::FRAC_PI_6 + std::f64::consts::FRAC_PI_3 * k as f64;
        let proj = p.x * ang.cos() + p.y * ang.sin();
        if proj.abs() > apothem + slack {
            return false;
        }
    }
    true
}

/// Generates the grid family of the shifting mechanism.
///
/// Square: offsets (t, t) along the tile diagonal for t = 0, g_eff, 2·g_eff,
/// … < κ/√2. Hexagonal: offsets at triangular-lattice points (basis (g, 0)
/// and (g/2, g·√3/2)) inside one fundamental hexagon, deduplicated modulo the
/// hexagon center lattice.
pub fn shift_family(kind: GridKind, region_side: f64, kappa: f64, g_eff: f64) -> GridFamily {
    assert!(g_eff > 0.0);
    let grids = match kind {
        GridKind::Square => {
            let period = kappa / SQRT2;
            let mut grids = Vec::new();
            let mut t = 0.0;
            while t < period - GEOM_EPS {
                grids.push(square_grid(region_side, kappa, Point::new(t, t)));
                t += g_eff;
            }
            grids
        }
        GridKind::Hexagonal => {
            let s = kappa / 2.0;
            let h_lat = s * 3f64.sqrt() / 2.0;
            let a1 = (1.5 * s, h_lat);
            let a2 = (1.5 * s, -h_lat);
            // reduce a point modulo the center lattice to the representative
            // nearest the origin (ties by quantized lexicographic order)
            let canonical = |p: Point| -> (i64, i64) {
                let u = p.x / (1.5 * s);
                let v = p.y / h_lat;
                let alpha = (u + v) / 2.0;
                let beta = (u - v) / 2.0;
                let mut best: Option<((i64, i64), f64)> = None;
                for dk in -1..=1 {
                    for dl in -1..=1 {
                        let k = alpha.round() as i64 + dk;
                        let l = beta.round() as i64 + dl;
                        let q = Point::new(
                            p.x - k as f64 * a1.0 - l as f64 * a2.0,
                            p.y - k as f64 * a1.1 - l as f64 * a2.1,
                        );
                        let d2 = q.x * q.x + q.y * q.y;
                        let key = (quantize(q.x), quantize(q.y));
                        match &mut best {
                            None => best = Some((key, d2)),
                            Some((bk, bd)) => {
                                if d2 < *bd - 1e-9 || (d2 < *bd + 1e-9 && key < *bk) {
                                    *bk = key;
                                    *bd = d2;
                                }
                            }
                        }
                    }
                }
                best.unwrap().0
            };
            let range = (2.0 * s / g_eff).ceil() as i64 + 2;
            let mut seen: BTreeMap<(i64, i64), Point> = BTreeMap::new();
            for i in -range..=range {
                for j in -range..=range {
                    let p = Point::new(
                        i as f64 * g_eff + j as f64 * g_eff / 2.0,
                        j as f64 * g_eff * 3f64.sqrt() / 2.0,
                    );
                    if !hex_contains(p, s, GEOM_EPS) {
                        continue;
                    }
                    seen.entry(canonical(p)).or_insert(p);
                }
            }
            seen.values()
                .map(|&off| hex_grid(region_side, kappa, off))
                .collect()
        }
    };
    GridFamily {
        grids,
        granularity: g_eff,
    }
}

/// Sum of clipped segment lengths, each segment counted once.
pub fn total_edge_length(grid: &Grid) -> f64 {
    grid.segments.iter().map(|s| s.length()).sum()
}

/// Total tile-boundary length over the clipped tiling: every interior edge
/// borders two tiles and counts twice, an edge lying on the region boundary
/// borders one tile and counts once.
pub fn tile_boundary_length(grid: &Grid) -> f64 {
    let l = grid.region_side;
    let on_boundary = |seg: &Segment| {
        let on = |va: f64, vb: f64, target: f64| {
            (va - target).abs() <= GEOM_EPS && (vb - target).abs() <= GEOM_EPS
        };
        on(seg.a.x, seg.b.x, 0.0)
            || on(seg.a.x, seg.b.x, l)
            || on(seg.a.y, seg.b.y, 0.0)
            || on(seg.a.y, seg.b.y, l)
    };
    grid.segments
        .iter()
        .map(|s| {
            if on_boundary(s) {
                s.length()
            } else {
                2.0 * s.length()
            }
        })
        .sum()
}
