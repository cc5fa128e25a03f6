//! Max-flow formulation for square grids: every sensor is split into an
//! in/out vertex pair whose internal arc carries the battery capacity, grid
//! lines are chained serpentine-fashion through boundary sensors, and a
//! converter vertex µ turns horizontal flow into vertical flow. One unit of
//! s→d flow must barricade every horizontal line and then every vertical
//! line, so each decomposed flow path is a cover and its flow is the cover's
//! activation time.

mod lp;
mod oracle;

pub use lp::{feasibility_residual, solve_lp, to_standard_lp, Commodity, LpProblem, LpSolution, LpStatus};
pub use oracle::max_flow_oracle;

use std::collections::BTreeMap;

use crate::barrier::{Cover, CoverAlgorithm};
use crate::field::{SensorField, DEPLETED_EPS, SENSING_RADIUS};
use crate::geometry::{dist_point_to_span, Point, Segment, Strip, GEOM_EPS};
use crate::grids::{Grid, GridKind};

pub type NodeId = u32;

#[derive(Clone, Copy, Debug)]
pub struct FlowArc {
    pub from: NodeId,
    pub to: NodeId,
    /// `None` marks a structurally unbounded arc, realized as `big_m`.
    pub capacity: Option<f64>,
    pub horizontal: bool,
    pub vertical: bool,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub arcs: Vec<FlowArc>,
    /// compact sensor index -> field sensor id
    pub sensor_ids: Vec<usize>,
    pub big_m: f64,
    pub epsilon: f64,
}

impl FlowNetwork {
    pub const SOURCE: NodeId = 0;
    pub const SINK: NodeId = 1;
    pub const CONVERTER: NodeId = 2;

    pub fn in_node(idx: usize) -> NodeId {
        3 + 2 * idx as NodeId
    }

    pub fn out_node(idx: usize) -> NodeId {
        4 + 2 * idx as NodeId
    }

    pub fn node_count(&self) -> usize {
        3 + 2 * self.sensor_ids.len()
    }

    /// Field sensor id behind a split node, if any.
    pub fn sensor_of_node(&self, node: NodeId) -> Option<usize> {
        if node < 3 {
            None
        } else {
            Some(self.sensor_ids[(node as usize - 3) / 2])
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FlowBuildError {
    #[error("the flow formulation is defined for square grids only")]
    NonSquareGrid,
}

/// Classifies grid segments into verticals (ascending x) and horizontals
/// (ascending y).
fn split_lines(grid: &Grid) -> (Vec<Segment>, Vec<Segment>) {
    let mut verticals = Vec::new();
    let mut horizontals = Vec::new();
    for s in &grid.segments {
        if (s.a.x - s.b.x).abs() <= GEOM_EPS {
            verticals.push(*s);
        } else {
            horizontals.push(*s);
        }
    }
    verticals.sort_by(|a, b| a.a.x.partial_cmp(&b.a.x).unwrap());
    horizontals.sort_by(|a, b| a.a.y.partial_cmp(&b.a.y).unwrap());
    (verticals, horizontals)
}

/// Builds the vertex-split serpentine flow network for a square grid.
///
/// Horizontal lines are ordered bottom to top; flow enters at the left of the
/// first line, right-boundary sensors of line i feed line i+1 for odd i
/// (1-based) and left-boundary sensors for even i, and the final line's exit
/// side feeds µ. Vertical lines are chained identically left to right from µ
/// to the sink, entering at the bottom.
pub fn build_flow_network(
    field: &SensorField,
    grid: &Grid,
    strip_half_width: f64,
) -> Result<FlowNetwork, FlowBuildError> {
    if grid.kind != GridKind::Square {
        return Err(FlowBuildError::NonSquareGrid);
    }
    let l = field.region_side;
    let (verticals, horizontals) = split_lines(grid);
    let disks = field.disks();

    // membership per line, split by orientation
    let members_of = |seg: &Segment| -> Vec<usize> {
        let strip = Strip::new(*seg, strip_half_width);
        (0..field.len())
            .filter(|&i| {
                field.sensors[i].battery > DEPLETED_EPS
                    && strip.dist_to_point(disks[i].center) <= disks[i].radius + GEOM_EPS
            })
            .collect()
    };
    let h_members: Vec<Vec<usize>> = horizontals.iter().map(&members_of).collect();
    let v_members: Vec<Vec<usize>> = verticals.iter().map(&members_of).collect();

    let mut in_h = vec![false; field.len()];
    let mut in_v = vec![false; field.len()];
    for line in &h_members {
        for &i in line {
            in_h[i] = true;
        }
    }
    for line in &v_members {
        for &i in line {
            in_v[i] = true;
        }
    }
    // non-grid sensors excluded
    let sensor_ids: Vec<usize> = (0..field.len()).filter(|&i| in_h[i] || in_v[i]).collect();
    let mut compact = vec![usize::MAX; field.len()];
    for (idx, &id) in sensor_ids.iter().enumerate() {
        compact[id] = idx;
    }

    // boundary contact: disk touches one side of Γ_R
    let edge = |side: u8| -> (Point, Point) {
        match side {
            0 => (Point::new(0.0, 0.0), Point::new(0.0, l)), // left
            1 => (Point::new(l, 0.0), Point::new(l, l)),     // right
            2 => (Point::new(0.0, 0.0), Point::new(l, 0.0)), // bottom
            _ => (Point::new(0.0, l), Point::new(l, l)),     // top
        }
    };
    let touches = |i: usize, side: u8| -> bool {
        let (a, b) = edge(side);
        dist_point_to_span(disks[i].center, a, b) <= SENSING_RADIUS + GEOM_EPS
    };
    let boundary_set = |line: &[usize], side: u8| -> Vec<usize> {
        line.iter().copied().filter(|&i| touches(i, side)).collect()
    };

    let mut arcs = Vec::new();
    // internal arcs in compact order
    for (idx, &id) in sensor_ids.iter().enumerate() {
        arcs.push(FlowArc {
            from: FlowNetwork::in_node(idx),
            to: FlowNetwork::out_node(idx),
            capacity: Some(field.sensors[id].battery),
            horizontal: in_h[id],
            vertical: in_v[id],
        });
    }

    // sensor-to-sensor arcs: strip-sharing disk-graph pairs, plus serpentine
    // boundary chaining; flags merged per directed pair
    let mut pair_flags: BTreeMap<(u32, u32), (bool, bool)> = BTreeMap::new();
    let mut link = |a: usize, b: usize, h: bool| {
        let key = (compact[a] as u32, compact[b] as u32);
        let e = pair_flags.entry(key).or_insert((false, false));
        if h {
            e.0 = true;
        } else {
            e.1 = true;
        }
    };
    let adjacent = |a: usize, b: usize| -> bool {
        let reach = disks[a].radius + disks[b].radius + GEOM_EPS;
        disks[a].center.dist2(disks[b].center) <= reach * reach
    };
    for (line, horizontal) in h_members
        .iter()
        .map(|m| (m, true))
        .chain(v_members.iter().map(|m| (m, false)))
    {
        for (pos, &a) in line.iter().enumerate() {
            for &b in &line[pos + 1..] {
                if adjacent(a, b) {
                    link(a, b, horizontal);
                    link(b, a, horizontal);
                }
            }
        }
    }
    // serpentine chaining between consecutive same-orientation lines
    let chain = |pair_flags: &mut BTreeMap<(u32, u32), (bool, bool)>,
                 members: &[Vec<usize>],
                 near_side: u8,
                 far_side: u8,
                 horizontal: bool| {
        for j in 0..members.len().saturating_sub(1) {
            let side = if j % 2 == 0 { far_side } else { near_side };
            for &a in &boundary_set(&members[j], side) {
                for &b in &boundary_set(&members[j + 1], side) {
                    let key = (compact[a] as u32, compact[b] as u32);
                    let e = pair_flags.entry(key).or_insert((false, false));
                    if horizontal {
                        e.0 = true;
                    } else {
                        e.1 = true;
                    }
                }
            }
        }
    };
    // horizontal serpentine enters left, so odd lines (1-based) exit right
    chain(&mut pair_flags, &h_members, 0, 1, true);
    // vertical serpentine enters bottom, exits top on odd lines
    chain(&mut pair_flags, &v_members, 2, 3, false);

    for (&(a, b), &(h, v)) in &pair_flags {
        arcs.push(FlowArc {
            from: FlowNetwork::out_node(a as usize),
            to: FlowNetwork::in_node(b as usize),
            capacity: None,
            horizontal: h,
            vertical: v,
        });
    }

    // terminal sides by serpentine parity
    let exit_side = |count: usize, near: u8, far: u8| if count % 2 == 1 { far } else { near };
    if let Some(first) = h_members.first() {
        for &a in &boundary_set(first, 0) {
            arcs.push(FlowArc {
                from: FlowNetwork::SOURCE,
                to: FlowNetwork::in_node(compact[a]),
                capacity: None,
                horizontal: true,
                vertical: false,
            });
        }
    }
    if let Some(last) = h_members.last() {
        let side = exit_side(h_members.len(), 0, 1);
        for &a in &boundary_set(last, side) {
            arcs.push(FlowArc {
                from: FlowNetwork::out_node(compact[a]),
                to: FlowNetwork::CONVERTER,
                capacity: None,
                horizontal: true,
                vertical: false,
            });
        }
    }
    if let Some(first) = v_members.first() {
        for &a in &boundary_set(first, 2) {
            arcs.push(FlowArc {
                from: FlowNetwork::CONVERTER,
                to: FlowNetwork::in_node(compact[a]),
                capacity: None,
                horizontal: false,
                vertical: true,
            });
        }
    }
    if let Some(last) = v_members.last() {
        let side = exit_side(v_members.len(), 2, 3);
        for &a in &boundary_set(last, side) {
            arcs.push(FlowArc {
                from: FlowNetwork::out_node(compact[a]),
                to: FlowNetwork::SINK,
                capacity: None,
                horizontal: false,
                vertical: true,
            });
        }
    }

    let big_m = sensor_ids
        .iter()
        .map(|&id| field.sensors[id].battery)
        .sum::<f64>()
        + 1.0;
    Ok(FlowNetwork {
        arcs,
        sensor_ids,
        big_m,
        epsilon: 2.0 * strip_half_width / grid.kappa,
    })
}

#[derive(Clone, Debug)]
pub struct FlowPath {
    pub nodes: Vec<NodeId>,
    pub delta: f64,
}

#[derive(Clone, Debug, Default)]
pub struct FlowDecomposition {
    pub paths: Vec<FlowPath>,
}

impl FlowDecomposition {
    pub fn total(&self) -> f64 {
        self.paths.iter().map(|p| p.delta).sum()
    }
}

/// Sensors traversed by a decomposed path, as a cover.
pub fn path_cover(network: &FlowNetwork, path: &FlowPath) -> Cover {
    let sensor_ids = path
        .nodes
        .iter()
        .filter_map(|&n| network.sensor_of_node(n))
        .collect();
    Cover {
        sensor_ids,
        grid_ref: None,
        epsilon: network.epsilon,
        algorithm: CoverAlgorithm::Lp,
    }
}

const FLOW_DUST: f64 = 1e-12;

// The walk lives in the layered (node, commodity) space: horizontal arcs
// before µ, vertical arcs after. A variable index addresses (arc, phase).
const PHASE_H: usize = 0;
const PHASE_V: usize = 1;

struct Walker<'a> {
    network: &'a FlowNetwork,
    out_arcs: Vec<Vec<u32>>,
    /// residual flow per (phase, arc)
    residual: [Vec<f64>; 2],
}

impl<'a> Walker<'a> {
    fn new(network: &'a FlowNetwork, solution: &LpSolution) -> Self {
        let n = network.node_count();
        let mut out_arcs: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, arc) in network.arcs.iter().enumerate() {
            out_arcs[arc.from as usize].push(i as u32);
        }
        Walker {
            network,
            out_arcs,
            residual: [solution.h_flows.clone(), solution.v_flows.clone()],
        }
    }

    /// Max-residual arc out of `node` in the given phase, ties toward the
    /// smallest head node id.
    fn pick(&self, node: NodeId, phase: usize) -> Option<u32> {
        let res = &self.residual[phase];
        let mut best: Option<u32> = None;
        for &ai in &self.out_arcs[node as usize] {
            if res[ai as usize] <= FLOW_DUST {
                continue;
            }
            match best {
                None => best = Some(ai),
                Some(b) => {
                    let (rb, ra) = (res[b as usize], res[ai as usize]);
                    let (hb, ha) = (
                        self.network.arcs[b as usize].to,
                        self.network.arcs[ai as usize].to,
                    );
                    if ra > rb + FLOW_DUST || ((ra - rb).abs() <= FLOW_DUST && ha < hb) {
                        best = Some(ai);
                    }
                }
            }
        }
        best
    }

    fn source_outflow(&self) -> f64 {
        self.out_arcs[FlowNetwork::SOURCE as usize]
            .iter()
            .map(|&ai| self.residual[PHASE_H][ai as usize])
            .sum()
    }
}

/// Splits an optimal flow into s→d paths: repeatedly walk from the source
/// along the arc carrying maximum remaining flow of the current commodity
/// (ties toward the smallest head node), switch from horizontal to vertical
/// at µ, cancel loops as soon as a node repeats within a phase, subtract the
/// bottleneck along the loop-free path, and stop when the flow out of the
/// source drops below 1e-9. Circulations never reached from the source are
/// cancelled in a final sweep.
pub fn decompose_paths(network: &FlowNetwork, solution: &LpSolution) -> FlowDecomposition {
    let n = network.node_count();
    let mut w = Walker::new(network, solution);
    let mut paths = Vec::new();
    let iter_cap = network.arcs.len() * 8 + 1024;
    let mut iters = 0usize;
    while w.source_outflow() >= 1e-9 && iters < iter_cap {
        iters += 1;
        // position of each layered node on the current path, -1 if absent
        let mut node_pos: Vec<i32> = vec![-1; 2 * n];
        let mut nodes: Vec<NodeId> = vec![FlowNetwork::SOURCE];
        // (arc, phase) steps taken
        let mut taken: Vec<(u32, usize)> = Vec::new();
        let mut phase = PHASE_H;
        node_pos[FlowNetwork::SOURCE as usize] = 0;
        let complete = loop {
            let cur = *nodes.last().unwrap();
            if cur == FlowNetwork::SINK {
                break true;
            }
            if cur == FlowNetwork::CONVERTER {
                phase = PHASE_V;
            }
            let Some(ai) = w.pick(cur, phase) else {
                break false;
            };
            let next = network.arcs[ai as usize].to;
            let key = phase * n + next as usize;
            if node_pos[key] >= 0 {
                // shorten the loop: deaugment it and resume from `next`
                let pos = node_pos[key] as usize;
                let loop_steps: Vec<(u32, usize)> =
                    taken[pos..].iter().copied().chain([(ai, phase)]).collect();
                let bottleneck = loop_steps
                    .iter()
                    .map(|&(a, p)| w.residual[p][a as usize])
                    .fold(f64::INFINITY, f64::min);
                for &(a, p) in &loop_steps {
                    w.residual[p][a as usize] -= bottleneck;
                }
                for (i, &node) in nodes.iter().enumerate().skip(pos + 1) {
                    let p = taken[i - 1].1;
                    node_pos[p * n + node as usize] = -1;
                }
                nodes.truncate(pos + 1);
                taken.truncate(pos);
                // the resumed node may sit before µ even if the cancelled
                // loop crossed into the vertical phase
                phase = if pos == 0 { PHASE_H } else { taken[pos - 1].1 };
                continue;
            }
            taken.push((ai, phase));
            node_pos[key] = nodes.len() as i32;
            nodes.push(next);
        };
        if taken.is_empty() {
            break;
        }
        let bottleneck = taken
            .iter()
            .map(|&(a, p)| w.residual[p][a as usize])
            .fold(f64::INFINITY, f64::min);
        for &(a, p) in &taken {
            w.residual[p][a as usize] -= bottleneck;
        }
        if complete && bottleneck > 1e-9 {
            paths.push(FlowPath {
                nodes,
                delta: bottleneck,
            });
        }
    }

    // cancel circulations never reached from the source, phase by phase
    for phase in [PHASE_H, PHASE_V] {
        let mut sweeps = 0usize;
        while sweeps < network.arcs.len() {
            sweeps += 1;
            let Some(start) = w.residual[phase].iter().position(|&r| r > 1e-7) else {
                break;
            };
            let mut node_pos: Vec<i32> = vec![-1; n];
            let from = network.arcs[start].from;
            let mut nodes: Vec<NodeId> = vec![from];
            let mut taken: Vec<u32> = Vec::new();
            node_pos[from as usize] = 0;
            let mut forced = Some(start as u32);
            loop {
                let cur = *nodes.last().unwrap();
                let ai = match forced.take().or_else(|| w.pick(cur, phase)) {
                    Some(a) => a,
                    None => {
                        // conservation dust; drop the stranded flow
                        for &a in &taken {
                            w.residual[phase][a as usize] = 0.0;
                        }
                        w.residual[phase][start] = 0.0;
                        break;
                    }
                };
                let next = network.arcs[ai as usize].to;
                if node_pos[next as usize] >= 0 {
                    let pos = node_pos[next as usize] as usize;
                    let loop_arcs: Vec<u32> =
                        taken[pos..].iter().copied().chain([ai]).collect();
                    let bottleneck = loop_arcs
                        .iter()
                        .map(|&a| w.residual[phase][a as usize])
                        .fold(f64::INFINITY, f64::min);
                    for &a in &loop_arcs {
                        w.residual[phase][a as usize] -= bottleneck;
                    }
                    break;
                }
                taken.push(ai);
                node_pos[next as usize] = nodes.len() as i32;
                nodes.push(next);
                if taken.len() > n + 2 {
                    for &a in &taken {
                        w.residual[phase][a as usize] = 0.0;
                    }
                    break;
                }
            }
        }
    }

    FlowDecomposition { paths }
}

#[cfg(test)]
mod tests;
