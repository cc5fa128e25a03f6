//! Standard-form LP for the flow network and its solver.
//!
//! Variables are (arc, commodity) pairs. Constraints follow the flow
//! formulation: per-sensor conservation per commodity at both split vertices,
//! one shared capacity row per sensor, the µ conversion row, and the
//! source/sink balance row, maximizing the flow out of the source.

use super::{FlowNetwork, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Commodity {
    Horizontal,
    Vertical,
}

/// Sparse standard-form LP: maximize c·x subject to equality rows, ≤ rows,
/// and 0 ≤ x ≤ upper bounds.
#[derive(Clone, Debug, Default)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub upper_bounds: Vec<f64>,
    pub eq_rows: Vec<(Vec<(u32, f64)>, f64)>,
    pub le_rows: Vec<(Vec<(u32, f64)>, f64)>,
    /// variable index -> (arc index, commodity); empty for hand-built LPs
    pub var_arcs: Vec<(u32, Commodity)>,
    pub arc_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    /// total flow per network arc (all commodities), when the problem came
    /// from [`to_standard_lp`]
    pub arc_flows: Vec<f64>,
    /// horizontal-commodity flow per network arc
    pub h_flows: Vec<f64>,
    /// vertical-commodity flow per network arc
    pub v_flows: Vec<f64>,
}

/// Builds the multi-commodity max-flow LP from the network.
pub fn to_standard_lp(network: &FlowNetwork) -> LpProblem {
    let mut problem = LpProblem {
        arc_count: network.arcs.len(),
        ..Default::default()
    };
    // one variable per legal (arc, commodity)
    let mut h_var = vec![u32::MAX; network.arcs.len()];
    let mut v_var = vec![u32::MAX; network.arcs.len()];
    for (ai, arc) in network.arcs.iter().enumerate() {
        let ub = arc.capacity.unwrap_or(network.big_m);
        if arc.horizontal {
            h_var[ai] = problem.var_arcs.len() as u32;
            problem.var_arcs.push((ai as u32, Commodity::Horizontal));
            problem.upper_bounds.push(ub);
            problem.objective.push(0.0);
        }
        if arc.vertical {
            v_var[ai] = problem.var_arcs.len() as u32;
            problem.var_arcs.push((ai as u32, Commodity::Vertical));
            problem.upper_bounds.push(ub);
            problem.objective.push(0.0);
        }
    }
    // node incidences per commodity
    let n = network.node_count();
    let mut into_h: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut outof_h: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut into_v: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut outof_v: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (ai, arc) in network.arcs.iter().enumerate() {
        if arc.horizontal {
            into_h[arc.to as usize].push(h_var[ai]);
            outof_h[arc.from as usize].push(h_var[ai]);
        }
        if arc.vertical {
            into_v[arc.to as usize].push(v_var[ai]);
            outof_v[arc.from as usize].push(v_var[ai]);
        }
    }
    // conservation at both split vertices of each sensor, per commodity
    for idx in 0..network.sensor_ids.len() {
        let internal = idx; // internal arcs come first, in compact order
        let node_in = FlowNetwork::in_node(idx) as usize;
        let node_out = FlowNetwork::out_node(idx) as usize;
        for (legal, var_int, into, outof) in [
            (
                network.arcs[internal].horizontal,
                h_var[internal],
                &into_h,
                &outof_h,
            ),
            (
                network.arcs[internal].vertical,
                v_var[internal],
                &into_v,
                &outof_v,
            ),
        ] {
            if !legal {
                continue;
            }
            let mut row_in: Vec<(u32, f64)> =
                into[node_in].iter().map(|&v| (v, 1.0)).collect();
            row_in.push((var_int, -1.0));
            problem.eq_rows.push((row_in, 0.0));
            let mut row_out: Vec<(u32, f64)> =
                outof[node_out].iter().map(|&v| (v, 1.0)).collect();
            row_out.push((var_int, -1.0));
            problem.eq_rows.push((row_out, 0.0));
        }
        // shared capacity row across commodities
        let mut cap_row = Vec::new();
        if network.arcs[internal].horizontal {
            cap_row.push((h_var[internal], 1.0));
        }
        if network.arcs[internal].vertical {
            cap_row.push((v_var[internal], 1.0));
        }
        let cap = network.arcs[internal].capacity.expect("internal arcs carry battery");
        problem.le_rows.push((cap_row, cap));
    }
    // µ conversion: horizontal in equals vertical out
    let mu = FlowNetwork::CONVERTER as usize;
    let mut mu_row: Vec<(u32, f64)> = into_h[mu].iter().map(|&v| (v, 1.0)).collect();
    mu_row.extend(outof_v[mu].iter().map(|&v| (v, -1.0)));
    problem.eq_rows.push((mu_row, 0.0));
    // source outflow equals sink inflow
    let s = FlowNetwork::SOURCE as usize;
    let d = FlowNetwork::SINK as usize;
    let mut bal_row: Vec<(u32, f64)> = outof_h[s].iter().map(|&v| (v, 1.0)).collect();
    bal_row.extend(into_v[d].iter().map(|&v| (v, -1.0)));
    problem.eq_rows.push((bal_row, 0.0));
    // objective: total flow out of the source
    for &v in &outof_h[s] {
        problem.objective[v as usize] = 1.0;
    }
    problem
}

/// Solves the LP with the HiGHS simplex (single-threaded, quiet) and reports
/// the optimal basic solution, or the infeasible/unbounded status.
pub fn solve_lp(problem: &LpProblem) -> LpSolution {
    if problem.objective.is_empty() {
        return LpSolution {
            status: LpStatus::Optimal,
            objective: 0.0,
            values: Vec::new(),
            arc_flows: vec![0.0; problem.arc_count],
            h_flows: vec![0.0; problem.arc_count],
            v_flows: vec![0.0; problem.arc_count],
        };
    }
    let mut rp = highs::RowProblem::default();
    let cols: Vec<highs::Col> = problem
        .objective
        .iter()
        .zip(&problem.upper_bounds)
        .map(|(&c, &ub)| rp.add_column(c, 0.0..ub))
        .collect();
    for (row, rhs) in &problem.eq_rows {
        rp.add_row(
            *rhs..=*rhs,
            row.iter().map(|&(v, c)| (cols[v as usize], c)),
        );
    }
    for (row, rhs) in &problem.le_rows {
        rp.add_row(..=*rhs, row.iter().map(|&(v, c)| (cols[v as usize], c)));
    }
    let mut model = rp.optimise(highs::Sense::Maximise);
    model.set_option("threads", 1i32);
    model.set_option("presolve", "on");
    model.make_quiet();
    let solved = model.solve();
    match solved.status() {
        highs::HighsModelStatus::Optimal => {
            let values = solved.get_solution().columns().to_vec();
            let objective = problem
                .objective
                .iter()
                .zip(&values)
                .map(|(c, x)| c * x)
                .sum();
            let mut arc_flows = vec![0.0; problem.arc_count];
            let mut h_flows = vec![0.0; problem.arc_count];
            let mut v_flows = vec![0.0; problem.arc_count];
            for (var, &(arc, commodity)) in problem.var_arcs.iter().enumerate() {
                arc_flows[arc as usize] += values[var];
                match commodity {
                    Commodity::Horizontal => h_flows[arc as usize] += values[var],
                    Commodity::Vertical => v_flows[arc as usize] += values[var],
                }
            }
            LpSolution {
                status: LpStatus::Optimal,
                objective,
                values,
                arc_flows,
                h_flows,
                v_flows,
            }
        }
        highs::HighsModelStatus::Infeasible => LpSolution {
            status: LpStatus::Infeasible,
            objective: 0.0,
            values: Vec::new(),
            arc_flows: Vec::new(),
            h_flows: Vec::new(),
            v_flows: Vec::new(),
        },
        highs::HighsModelStatus::Unbounded
        | highs::HighsModelStatus::UnboundedOrInfeasible => LpSolution {
            status: LpStatus::Unbounded,
            objective: f64::INFINITY,
            values: Vec::new(),
            arc_flows: Vec::new(),
            h_flows: Vec::new(),
            v_flows: Vec::new(),
        },
        other => panic!("unexpected LP solver status: {other:?}"),
    }
}

/// Maximum violation of any row or bound by the given assignment.
pub fn feasibility_residual(problem: &LpProblem, values: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (row, rhs) in &problem.eq_rows {
        let lhs: f64 = row.iter().map(|&(v, c)| c * values[v as usize]).sum();
        worst = worst.max((lhs - rhs).abs());
    }
    for (row, rhs) in &problem.le_rows {
        let lhs: f64 = row.iter().map(|&(v, c)| c * values[v as usize]).sum();
        worst = worst.max(lhs - rhs);
    }
    for (i, &x) in values.iter().enumerate() {
        worst = worst.max(-x);
        worst = worst.max(x - problem.upper_bounds[i]);
    }
    worst
}

/// Total flow into a node, summing both commodities (diagnostics/tests).
pub fn node_inflow(network: &FlowNetwork, arc_flows: &[f64], node: NodeId) -> f64 {
    network
        .arcs
        .iter()
        .zip(arc_flows)
        .filter(|(a, _)| a.to == node)
        .map(|(_, &f)| f)
        .sum()
}
