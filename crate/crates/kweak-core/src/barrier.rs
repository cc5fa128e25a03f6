//! Per-line barrier construction and the two grid cover finders: the Min-Max
//! removal heuristic and the binary-search BFS algorithm.
//!
//! A barrier for a grid segment is a chain of pairwise-overlapping disks that
//! lies inside the segment's strip and anchors at both endpoints: interior
//! endpoints must be covered outright, endpoints on the region boundary only
//! require some chain disk to touch the boundary portion inside the strip.

use std::collections::BTreeSet;

use crate::field::{SensorField, DEPLETED_EPS};
use crate::geometry::{
    build_adjacency_graph, clip_segment_to_strip, dist_point_to_span, AdjacencyGraph, Disk, Point,
    Segment, Strip, GEOM_EPS,
};
use crate::grids::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverAlgorithm {
    MinMax,
    Bfs,
    Lp,
    RandomSeeds,
}

impl std::fmt::Display for CoverAlgorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverAlgorithm::MinMax => write!(f, "minmax"),
            CoverAlgorithm::Bfs => write!(f, "bfs"),
            CoverAlgorithm::Lp => write!(f, "lp"),
            CoverAlgorithm::RandomSeeds => write!(f, "seeds"),
        }
    }
}

/// A sensor subset asserted to be a (1+ε)κ-weak cover, with provenance.
#[derive(Clone, Debug)]
pub struct Cover {
    pub sensor_ids: BTreeSet<usize>,
    /// Index of the grid within its family, if found through one.
    pub grid_ref: Option<usize>,
    pub epsilon: f64,
    pub algorithm: CoverAlgorithm,
}

/// Ordered chain of sensors barricading one grid segment.
#[derive(Clone, Debug)]
pub struct LineBarrier {
    pub line: Segment,
    pub sensor_ids: Vec<usize>,
}

/// Geometric state for one grid segment, reused across battery thresholds.
struct LineContext {
    member_mask: Vec<bool>,
    source_candidates: Vec<u32>,
    sink_candidates: Vec<u32>,
}

/// Geometric state for a whole grid; batteries are applied per search so one
/// context serves an entire scheduling run.
pub struct GridContext {
    pub strip_half_width: f64,
    pub epsilon: f64,
    lines: Vec<LineContext>,
    /// sensor id -> indices of lines whose strip it intersects
    lines_of_sensor: Vec<Vec<u32>>,
}

/// Boundary portions of Γ_R inside the strip that are connected to the
/// endpoint `p` (through corners if necessary).
fn boundary_portions_near(strip: &Strip, region_side: f64, p: Point) -> Vec<(Point, Point)> {
    let l = region_side;
    let corners = [
        Point::new(0.0, 0.0),
        Point::new(l, 0.0),
        Point::new(l, l),
        Point::new(0.0, l),
    ];
    let mut portions = Vec::new();
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        if let Some(seg) = clip_segment_to_strip(a, b, strip) {
            portions.push(seg);
        }
    }
    // keep the connected group of portions containing p
    let touches = |seg: &(Point, Point), q: Point| dist_point_to_span(q, seg.0, seg.1) <= 1e-7;
    let mut in_group = vec![false; portions.len()];
    for (i, seg) in portions.iter().enumerate() {
        if touches(seg, p) {
            in_group[i] = true;
        }
    }
    loop {
        let mut changed = false;
        for i in 0..portions.len() {
            if in_group[i] {
                continue;
            }
            for j in 0..portions.len() {
                if in_group[j]
                    && (touches(&portions[i], portions[j].0)
                        || touches(&portions[i], portions[j].1))
                {
                    in_group[i] = true;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    portions
        .into_iter()
        .zip(in_group)
        .filter_map(|(seg, keep)| keep.then_some(seg))
        .collect()
}

fn endpoint_candidates(
    disks: &[Disk],
    members: &[u32],
    strip: &Strip,
    region_side: f64,
    p: Point,
) -> Vec<u32> {
    let l = region_side;
    let on_boundary =
        p.x <= GEOM_EPS || p.x >= l - GEOM_EPS || p.y <= GEOM_EPS || p.y >= l - GEOM_EPS;
    if !on_boundary {
        members
            .iter()
            .copied()
            .filter(|&id| disks[id as usize].contains(p))
            .collect()
    } else {
        let portions = boundary_portions_near(strip, region_side, p);
        members
            .iter()
            .copied()
            .filter(|&id| {
                let d = &disks[id as usize];
                portions
                    .iter()
                    .any(|&(a, b)| dist_point_to_span(d.center, a, b) <= d.radius + GEOM_EPS)
            })
            .collect()
    }
}

impl GridContext {
    pub fn new(field: &SensorField, grid: &Grid, strip_half_width: f64) -> Self {
        let disks = field.disks();
        let n = field.len();
        let mut lines = Vec::with_capacity(grid.segments.len());
        let mut lines_of_sensor = vec![Vec::new(); n];
        for (li, seg) in grid.segments.iter().enumerate() {
            let strip = Strip::new(*seg, strip_half_width);
            let mut members = Vec::new();
            let mut member_mask = vec![false; n];
            for (id, d) in disks.iter().enumerate() {
                if strip.dist_to_point(d.center) <= d.radius + GEOM_EPS {
                    members.push(id as u32);
                    member_mask[id] = true;
                    lines_of_sensor[id].push(li as u32);
                }
            }
            let source_candidates =
                endpoint_candidates(&disks, &members, &strip, field.region_side, seg.a);
            let sink_candidates =
                endpoint_candidates(&disks, &members, &strip, field.region_side, seg.b);
            lines.push(LineContext {
                member_mask,
                source_candidates,
                sink_candidates,
            });
        }
        GridContext {
            strip_half_width,
            epsilon: 2.0 * strip_half_width / grid.kappa,
            lines,
            lines_of_sensor,
        }
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn lines_of_sensor(&self, id: usize) -> &[u32] {
        &self.lines_of_sensor[id]
    }
}

/// Fewest-hop chain between the endpoint candidate sets of one line, over
/// sensors passing `eligible`. Ties resolved toward the smallest sensor id.
fn line_path<F: Fn(u32) -> bool>(
    ctx: &LineContext,
    adj: &AdjacencyGraph,
    eligible: F,
) -> Option<Vec<usize>> {
    let n = ctx.member_mask.len();
    let ok = |id: u32| ctx.member_mask[id as usize] && eligible(id);
    let mut is_sink = vec![false; n];
    let mut have_sink = false;
    for &v in &ctx.sink_candidates {
        if ok(v) {
            is_sink[v as usize] = true;
            have_sink = true;
        }
    }
    if !have_sink {
        return None;
    }
    const UNSEEN: u32 = u32::MAX;
    let mut dist = vec![UNSEEN; n];
    let mut frontier: Vec<u32> = ctx
        .source_candidates
        .iter()
        .copied()
        .filter(|&v| ok(v))
        .collect();
    if frontier.is_empty() {
        return None;
    }
    frontier.sort_unstable();
    frontier.dedup();
    for &v in &frontier {
        dist[v as usize] = 0;
    }
    let mut level = 0u32;
    let reached = 'search: loop {
        // smallest-id sink on the current level, if any
        let mut hit: Option<u32> = None;
        for &v in &frontier {
            if is_sink[v as usize] && hit.map_or(true, |h| v < h) {
                hit = Some(v);
            }
        }
        if let Some(v) = hit {
            break 'search v;
        }
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in adj.neighbors(u as usize) {
                if dist[v as usize] == UNSEEN && ok(v) {
                    dist[v as usize] = level + 1;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        next.sort_unstable();
        frontier = next;
        level += 1;
    };
    // backtrack picking the smallest-id predecessor on each previous level
    let mut path = vec![reached as usize];
    let mut cur = reached;
    let mut d = dist[cur as usize];
    while d > 0 {
        let prev = adj
            .neighbors(cur as usize)
            .iter()
            .copied()
            .filter(|&u| ok(u) && dist[u as usize] == d - 1)
            .min()
            .expect("BFS predecessor must exist");
        path.push(prev as usize);
        cur = prev;
        d -= 1;
    }
    path.reverse();
    Some(path)
}

fn line_feasible<F: Fn(u32) -> bool>(ctx: &LineContext, adj: &AdjacencyGraph, eligible: F) -> bool {
    line_path(ctx, adj, eligible).is_some()
}

/// Finds the fewest-hop barrier for one segment among sensors with battery at
/// least `b_min` whose disks meet the strip, or `None` when unreachable.
pub fn line_barrier(
    field: &SensorField,
    line: &Segment,
    strip_half_width: f64,
    b_min: f64,
) -> Option<LineBarrier> {
    let grid = Grid {
        kind: crate::grids::GridKind::Square,
        kappa: 2.0f64.max(strip_half_width * 4.0),
        offset: Point::new(0.0, 0.0),
        region_side: field.region_side,
        segments: vec![*line],
    };
    let ctx = GridContext::new(field, &grid, strip_half_width);
    let adj = build_adjacency_graph(&field.disks());
    let batteries: Vec<f64> = field.sensors.iter().map(|s| s.battery).collect();
    line_path(&ctx.lines[0], &adj, |id| {
        batteries[id as usize] >= b_min - 1e-12
    })
    .map(|sensor_ids| LineBarrier {
        line: *line,
        sensor_ids,
    })
}

/// Distinct positive battery values, ascending.
pub fn battery_levels(field: &SensorField) -> Vec<f64> {
    let mut levels: Vec<f64> = field
        .sensors
        .iter()
        .map(|s| s.battery)
        .filter(|&b| b > DEPLETED_EPS)
        .collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    levels
}

/// True iff every grid segment has a barrier at the given battery threshold.
pub fn grid_feasible_at(
    ctx: &GridContext,
    adj: &AdjacencyGraph,
    batteries: &[f64],
    threshold: f64,
) -> bool {
    ctx.lines
        .iter()
        .all(|line| line_feasible(line, adj, |id| batteries[id as usize] >= threshold - 1e-12))
}

/// Binary search over the battery value set for the largest threshold at
/// which every grid segment has a barrier; returns the union cover and the
/// achieved threshold.
pub fn bfs_cover(field: &SensorField, grid: &Grid, strip_half_width: f64) -> Option<(Cover, f64)> {
    let ctx = GridContext::new(field, grid, strip_half_width);
    let adj = build_adjacency_graph(&field.disks());
    bfs_cover_with(&ctx, &adj, field)
}

pub fn bfs_cover_with(
    ctx: &GridContext,
    adj: &AdjacencyGraph,
    field: &SensorField,
) -> Option<(Cover, f64)> {
    if ctx.lines.is_empty() {
        return None;
    }
    let batteries: Vec<f64> = field.sensors.iter().map(|s| s.battery).collect();
    let levels = battery_levels(field);
    if levels.is_empty() || !grid_feasible_at(ctx, adj, &batteries, levels[0]) {
        return None;
    }
    let mut lo = 0usize;
    let mut hi = levels.len() - 1;
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if grid_feasible_at(ctx, adj, &batteries, levels[mid]) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let b_max = levels[lo];
    let mut sensor_ids = BTreeSet::new();
    for line in &ctx.lines {
        let path = line_path(line, adj, |id| batteries[id as usize] >= b_max - 1e-12)
            .expect("feasible threshold must yield a path");
        sensor_ids.extend(path);
    }
    Some((
        Cover {
            sensor_ids,
            grid_ref: None,
            epsilon: ctx.epsilon,
            algorithm: CoverAlgorithm::Bfs,
        },
        b_max,
    ))
}

/// Min-Max heuristic: start from every strip-intersecting sensor above the
/// battery floor, visit sensors in decreasing battery order (ties by
/// ascending id), and drop each one whose removal keeps all of its lines
/// barricaded. The result is a minimal cover.
pub fn minmax_cover(field: &SensorField, grid: &Grid, strip_half_width: f64) -> Option<Cover> {
    let ctx = GridContext::new(field, grid, strip_half_width);
    let adj = build_adjacency_graph(&field.disks());
    minmax_cover_with(&ctx, &adj, field, DEPLETED_EPS)
}

pub fn minmax_cover_with(
    ctx: &GridContext,
    adj: &AdjacencyGraph,
    field: &SensorField,
    b_min: f64,
) -> Option<Cover> {
    if ctx.lines.is_empty() {
        return None;
    }
    let batteries: Vec<f64> = field.sensors.iter().map(|s| s.battery).collect();
    let n = field.len();
    let mut active = vec![false; n];
    let mut candidates: Vec<u32> = Vec::new();
    for id in 0..n as u32 {
        if !ctx.lines_of_sensor(id as usize).is_empty() && batteries[id as usize] >= b_min - 1e-12
        {
            active[id as usize] = true;
            candidates.push(id);
        }
    }
    let feasible_all = |active: &[bool]| {
        ctx.lines
            .iter()
            .all(|line| line_feasible(line, adj, |id| active[id as usize]))
    };
    if !feasible_all(&active) {
        return None;
    }
    candidates.sort_by(|&a, &b| {
        batteries[b as usize]
            .partial_cmp(&batteries[a as usize])
            .unwrap()
            .then(a.cmp(&b))
    });
    for &s in &candidates {
        active[s as usize] = false;
        let still_covered = ctx
            .lines_of_sensor(s as usize)
            .iter()
            .all(|&li| line_feasible(&ctx.lines[li as usize], adj, |id| active[id as usize]));
        if !still_covered {
            active[s as usize] = true;
        }
    }
    let sensor_ids: BTreeSet<usize> = (0..n).filter(|&i| active[i]).collect();
    debug_assert!(!sensor_ids.is_empty());
    Some(Cover {
        sensor_ids,
        grid_ref: None,
        epsilon: ctx.epsilon,
        algorithm: CoverAlgorithm::MinMax,
    })
}

/// True iff removing any single sensor breaks some line barrier. Membership
/// is set-semantic: current battery levels are not consulted.
pub fn is_minimal(cover: &Cover, field: &SensorField, grid: &Grid, strip_half_width: f64) -> bool {
    let ctx = GridContext::new(field, grid, strip_half_width);
    let adj = build_adjacency_graph(&field.disks());
    is_minimal_with(cover, &ctx, &adj, field.len())
}

pub fn is_minimal_with(
    cover: &Cover,
    ctx: &GridContext,
    adj: &AdjacencyGraph,
    sensor_count: usize,
) -> bool {
    let mut active = vec![false; sensor_count];
    for &id in &cover.sensor_ids {
        active[id] = true;
    }
    for &id in &cover.sensor_ids {
        active[id] = false;
        let broke = ctx
            .lines_of_sensor(id)
            .iter()
            .any(|&li| !line_feasible(&ctx.lines[li as usize], adj, |v| active[v as usize]));
        active[id] = true;
        if !broke {
            return false;
        }
    }
    true
}

/// True iff every line of the grid has a barrier among exactly the cover's
/// sensors (set-semantic, like [`is_minimal`]).
pub fn is_grid_cover(
    cover: &Cover,
    ctx: &GridContext,
    adj: &AdjacencyGraph,
    sensor_count: usize,
) -> bool {
    let mut active = vec![false; sensor_count];
    for &id in &cover.sensor_ids {
        active[id] = true;
    }
    ctx.lines
        .iter()
        .all(|line| line_feasible(line, adj, |v| active[v as usize]))
}
