use super::*;
use crate::field::SensorField;
use crate::grids::GridKind;

/// One horizontal and one vertical line crossing at (2,2) in a 4x4 region,
/// three exclusive sensors per line plus one shared corner sensor.
fn cross_instance() -> (SensorField, Grid) {
    let field = SensorField::from_positions(
        4.0,
        &[
            (0.4, 2.0),
            (0.8, 2.0),
            (3.2, 2.0),
            (2.0, 0.4),
            (2.0, 0.8),
            (2.0, 3.2),
            (2.0, 2.0),
        ],
    );
    let grid = Grid {
        kind: GridKind::Square,
        kappa: 4.0 * crate::grids::SQRT2,
        offset: Point::new(0.0, 0.0),
        region_side: 4.0,
        segments: vec![
            Segment::new(Point::new(0.0, 2.0), Point::new(4.0, 2.0)),
            Segment::new(Point::new(2.0, 0.0), Point::new(2.0, 4.0)),
        ],
    };
    (field, grid)
}

fn hand_network(sensors: usize, arcs: Vec<(NodeId, NodeId, Option<f64>, bool, bool)>) -> FlowNetwork {
    FlowNetwork {
        arcs: arcs
            .into_iter()
            .map(|(from, to, capacity, horizontal, vertical)| FlowArc {
                from,
                to,
                capacity,
                horizontal,
                vertical,
            })
            .collect(),
        sensor_ids: (0..sensors).collect(),
        big_m: 100.0,
        epsilon: 0.0,
    }
}

#[test]
fn cross_network_matches_hand_construction() {
    let (field, grid) = cross_instance();
    let net = build_flow_network(&field, &grid, 0.0).unwrap();
    assert_eq!(net.sensor_ids, vec![0, 1, 2, 3, 4, 5, 6]);
    assert_eq!(net.node_count(), 17); // 2*7 + 3

    // internal arcs carry batteries and region-class flags
    for idx in 0..7 {
        let arc = &net.arcs[idx];
        assert_eq!(arc.from, FlowNetwork::in_node(idx));
        assert_eq!(arc.to, FlowNetwork::out_node(idx));
        assert_eq!(arc.capacity, Some(1.0));
    }
    assert!(net.arcs[0].horizontal && !net.arcs[0].vertical);
    assert!(!net.arcs[3].horizontal && net.arcs[3].vertical);
    assert!(net.arcs[6].horizontal && net.arcs[6].vertical); // mixed corner

    // sensor-to-sensor arcs: strip-sharing adjacent pairs, both directions
    let directed: Vec<(usize, usize, bool, bool)> = net
        .arcs
        .iter()
        .filter(|a| a.from >= 3 && a.to >= 3 && a.capacity.is_none())
        .map(|a| {
            (
                net.sensor_of_node(a.from).unwrap(),
                net.sensor_of_node(a.to).unwrap(),
                a.horizontal,
                a.vertical,
            )
        })
        .collect();
    let mut expect_h = vec![(0, 1), (0, 6), (1, 6), (2, 6)];
    expect_h.extend(vec![(1, 0), (6, 0), (6, 1), (6, 2)]);
    let mut expect_v = vec![(3, 4), (3, 6), (4, 6), (5, 6)];
    expect_v.extend(vec![(4, 3), (6, 3), (6, 4), (6, 5)]);
    assert_eq!(directed.len(), 16);
    for (a, b, h, v) in &directed {
        if *h {
            assert!(expect_h.contains(&(*a, *b)), "unexpected H arc {a}->{b}");
            assert!(!v);
        } else {
            assert!(expect_v.contains(&(*a, *b)), "unexpected V arc {a}->{b}");
        }
    }

    // terminals: s -> left sensors of the horizontal line, right sensor -> µ,
    // µ -> bottom sensors of the vertical line, top sensor -> d
    let from_s: Vec<usize> = net
        .arcs
        .iter()
        .filter(|a| a.from == FlowNetwork::SOURCE)
        .map(|a| net.sensor_of_node(a.to).unwrap())
        .collect();
    assert_eq!(from_s, vec![0, 1]);
    let to_mu: Vec<usize> = net
        .arcs
        .iter()
        .filter(|a| a.to == FlowNetwork::CONVERTER)
        .map(|a| net.sensor_of_node(a.from).unwrap())
        .collect();
    assert_eq!(to_mu, vec![2]);
    let from_mu: Vec<usize> = net
        .arcs
        .iter()
        .filter(|a| a.from == FlowNetwork::CONVERTER)
        .map(|a| net.sensor_of_node(a.to).unwrap())
        .collect();
    assert_eq!(from_mu, vec![3, 4]);
    let to_d: Vec<usize> = net
        .arcs
        .iter()
        .filter(|a| a.to == FlowNetwork::SINK)
        .map(|a| net.sensor_of_node(a.from).unwrap())
        .collect();
    assert_eq!(to_d, vec![5]);
    assert_eq!(net.arcs.len(), 7 + 16 + 2 + 1 + 2 + 1);
}

#[test]
fn cross_network_flow_is_half_through_shared_sensor() {
    // every unit of flow passes the shared corner twice (once per
    // commodity), so its unit battery caps the flow at 1/2
    let (field, grid) = cross_instance();
    let net = build_flow_network(&field, &grid, 0.0).unwrap();
    let problem = to_standard_lp(&net);
    let solution = solve_lp(&problem);
    assert_eq!(solution.status, LpStatus::Optimal);
    assert!((solution.objective - 0.5).abs() < 1e-6);
    assert!((max_flow_oracle(&net) - 0.5).abs() < 1e-6);
    assert!(feasibility_residual(&problem, &solution.values) <= 1e-6);

    let decomposition = decompose_paths(&net, &solution);
    assert!((decomposition.total() - 0.5).abs() < 1e-6);
    for path in &decomposition.paths {
        assert_eq!(path.nodes.first(), Some(&FlowNetwork::SOURCE));
        assert_eq!(path.nodes.last(), Some(&FlowNetwork::SINK));
        assert!(path.nodes.contains(&FlowNetwork::CONVERTER));
        let cover = path_cover(&net, path);
        assert!(cover.sensor_ids.contains(&6));
    }
}

#[test]
fn missing_line_members_give_zero_flow() {
    // no sensors on the vertical line: s and d are disconnected
    let field = SensorField::from_positions(4.0, &[(0.4, 2.0), (1.8, 2.0), (3.2, 2.0)]);
    let grid = cross_instance().1;
    let net = build_flow_network(&field, &grid, 0.0).unwrap();
    assert_eq!(max_flow_oracle(&net), 0.0);
    let solution = solve_lp(&to_standard_lp(&net));
    assert!(solution.objective.abs() < 1e-9);
}

#[test]
fn depleted_batteries_give_zero_flow() {
    let (mut field, grid) = cross_instance();
    for i in 0..field.len() {
        field.set_battery(i, 0.0);
    }
    let net = build_flow_network(&field, &grid, 0.0).unwrap();
    assert!(net.sensor_ids.is_empty());
    let solution = solve_lp(&to_standard_lp(&net));
    assert_eq!(solution.status, LpStatus::Optimal);
    assert_eq!(solution.objective, 0.0);
}

#[test]
fn hex_grid_is_rejected() {
    let field = SensorField::from_positions(10.0, &[(5.0, 5.0)]);
    let grid = crate::grids::hex_grid(10.0, 5.0, Point::new(0.0, 0.0));
    assert_eq!(
        build_flow_network(&field, &grid, 0.0).unwrap_err(),
        FlowBuildError::NonSquareGrid
    );
}

#[test]
fn solve_lp_single_bounded_variable() {
    let problem = LpProblem {
        objective: vec![1.0],
        upper_bounds: vec![3.0],
        ..Default::default()
    };
    let solution = solve_lp(&problem);
    assert_eq!(solution.status, LpStatus::Optimal);
    assert!((solution.objective - 3.0).abs() < 1e-9);
}

#[test]
fn solve_lp_detects_infeasible_row() {
    // 0 * x = 1
    let problem = LpProblem {
        objective: vec![1.0],
        upper_bounds: vec![3.0],
        eq_rows: vec![(vec![(0, 0.0)], 1.0)],
        ..Default::default()
    };
    assert_eq!(solve_lp(&problem).status, LpStatus::Infeasible);
}

#[test]
fn diamond_network_lp_matches_oracle() {
    // two parallel sensor routes on each side of µ, capacities 0.5 each
    let (s, d, mu) = (FlowNetwork::SOURCE, FlowNetwork::SINK, FlowNetwork::CONVERTER);
    let (a_in, a_out) = (FlowNetwork::in_node(0), FlowNetwork::out_node(0));
    let (b_in, b_out) = (FlowNetwork::in_node(1), FlowNetwork::out_node(1));
    let (c_in, c_out) = (FlowNetwork::in_node(2), FlowNetwork::out_node(2));
    let (e_in, e_out) = (FlowNetwork::in_node(3), FlowNetwork::out_node(3));
    let net = hand_network(
        4,
        vec![
            (a_in, a_out, Some(0.5), true, false),
            (b_in, b_out, Some(0.5), true, false),
            (c_in, c_out, Some(0.5), false, true),
            (e_in, e_out, Some(0.5), false, true),
            (s, a_in, None, true, false),
            (s, b_in, None, true, false),
            (a_out, mu, None, true, false),
            (b_out, mu, None, true, false),
            (mu, c_in, None, false, true),
            (mu, e_in, None, false, true),
            (c_out, d, None, false, true),
            (e_out, d, None, false, true),
        ],
    );
    let solution = solve_lp(&to_standard_lp(&net));
    let oracle = max_flow_oracle(&net);
    assert!((solution.objective - 1.0).abs() < 1e-6);
    assert!((solution.objective - oracle).abs() < 1e-6);
    let decomposition = decompose_paths(&net, &solution);
    assert!((decomposition.total() - 1.0).abs() < 1e-6);
}

#[test]
fn chain_bottleneck_oracle() {
    let (s, d, mu) = (FlowNetwork::SOURCE, FlowNetwork::SINK, FlowNetwork::CONVERTER);
    let net = hand_network(
        2,
        vec![
            (FlowNetwork::in_node(0), FlowNetwork::out_node(0), Some(0.4), true, false),
            (FlowNetwork::in_node(1), FlowNetwork::out_node(1), Some(1.0), false, true),
            (s, FlowNetwork::in_node(0), None, true, false),
            (FlowNetwork::out_node(0), mu, None, true, false),
            (mu, FlowNetwork::in_node(1), None, false, true),
            (FlowNetwork::out_node(1), d, None, false, true),
        ],
    );
    assert!((max_flow_oracle(&net) - 0.4).abs() < 1e-12);
}

#[test]
fn disjoint_chains_add_up() {
    let (s, d, mu) = (FlowNetwork::SOURCE, FlowNetwork::SINK, FlowNetwork::CONVERTER);
    let mut arcs = Vec::new();
    for i in 0..2 {
        let (h_in, h_out) = (FlowNetwork::in_node(i), FlowNetwork::out_node(i));
        let (v_in, v_out) = (FlowNetwork::in_node(i + 2), FlowNetwork::out_node(i + 2));
        arcs.push((h_in, h_out, Some(1.0), true, false));
        arcs.push((v_in, v_out, Some(1.0), false, true));
        arcs.push((s, h_in, None, true, false));
        arcs.push((h_out, mu, None, true, false));
        arcs.push((mu, v_in, None, false, true));
        arcs.push((v_out, d, None, false, true));
    }
    let net = hand_network(4, arcs);
    assert!((max_flow_oracle(&net) - 2.0).abs() < 1e-12);
    let solution = solve_lp(&to_standard_lp(&net));
    assert!((solution.objective - 2.0).abs() < 1e-6);
}

#[test]
fn decompose_single_path_carries_objective() {
    let (s, d, mu) = (FlowNetwork::SOURCE, FlowNetwork::SINK, FlowNetwork::CONVERTER);
    let net = hand_network(
        2,
        vec![
            (FlowNetwork::in_node(0), FlowNetwork::out_node(0), Some(0.7), true, false),
            (FlowNetwork::in_node(1), FlowNetwork::out_node(1), Some(1.0), false, true),
            (s, FlowNetwork::in_node(0), None, true, false),
            (FlowNetwork::out_node(0), mu, None, true, false),
            (mu, FlowNetwork::in_node(1), None, false, true),
            (FlowNetwork::out_node(1), d, None, false, true),
        ],
    );
    let solution = solve_lp(&to_standard_lp(&net));
    let decomposition = decompose_paths(&net, &solution);
    assert_eq!(decomposition.paths.len(), 1);
    assert!((decomposition.paths[0].delta - solution.objective).abs() < 1e-9);
    let cover = path_cover(&net, &decomposition.paths[0]);
    assert_eq!(cover.sensor_ids, [0usize, 1].into_iter().collect());
}

#[test]
fn decompose_constructed_two_path_flow() {
    // A carries 0.3, B carries 0.7, both convert at µ and share C
    let (s, d, mu) = (FlowNetwork::SOURCE, FlowNetwork::SINK, FlowNetwork::CONVERTER);
    let net = hand_network(
        3,
        vec![
            (FlowNetwork::in_node(0), FlowNetwork::out_node(0), Some(0.3), true, false),
            (FlowNetwork::in_node(1), FlowNetwork::out_node(1), Some(0.7), true, false),
            (FlowNetwork::in_node(2), FlowNetwork::out_node(2), Some(1.0), false, true),
            (s, FlowNetwork::in_node(0), None, true, false),
            (s, FlowNetwork::in_node(1), None, true, false),
            (FlowNetwork::out_node(0), mu, None, true, false),
            (FlowNetwork::out_node(1), mu, None, true, false),
            (mu, FlowNetwork::in_node(2), None, false, true),
            (FlowNetwork::out_node(2), d, None, false, true),
        ],
    );
    let solution = solve_lp(&to_standard_lp(&net));
    assert!((solution.objective - 1.0).abs() < 1e-6);
    let decomposition = decompose_paths(&net, &solution);
    assert_eq!(decomposition.paths.len(), 2);
    let mut deltas: Vec<f64> = decomposition.paths.iter().map(|p| p.delta).collect();
    deltas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((deltas[0] - 0.3).abs() < 1e-6 && (deltas[1] - 0.7).abs() < 1e-6);
    // greedy walk takes the fatter route first
    assert!((decomposition.paths[0].delta - 0.7).abs() < 1e-6);
}

#[test]
fn decompose_zero_flow_is_empty() {
    let (s, _, mu) = (FlowNetwork::SOURCE, FlowNetwork::SINK, FlowNetwork::CONVERTER);
    let net = hand_network(
        1,
        vec![
            (FlowNetwork::in_node(0), FlowNetwork::out_node(0), Some(1.0), true, false),
            (s, FlowNetwork::in_node(0), None, true, false),
            (FlowNetwork::out_node(0), mu, None, true, false),
        ],
    );
    let solution = solve_lp(&to_standard_lp(&net));
    assert_eq!(solution.objective, 0.0);
    assert!(decompose_paths(&net, &solution).paths.is_empty());
}

#[test]
fn small_field_lp_agrees_with_oracle() {
    for (seed, hw) in [(11u64, 0.0), (12, 0.6), (13, 0.3)] {
        let field = crate::field::generate_field(12.0, 1.2, seed);
        let grid = crate::grids::square_grid(12.0, 6.0, Point::new(0.0, 0.0));
        let net = build_flow_network(&field, &grid, hw).unwrap();
        let problem = to_standard_lp(&net);
        let solution = solve_lp(&problem);
        let oracle = max_flow_oracle(&net);
        assert_eq!(solution.status, LpStatus::Optimal);
        assert!(
            (solution.objective - oracle).abs() <= 1e-6,
            "seed {seed}: lp {} oracle {}",
            solution.objective,
            oracle
        );
        assert!(feasibility_residual(&problem, &solution.values) <= 1e-6);
        let decomposition = decompose_paths(&net, &solution);
        assert!(
            (decomposition.total() - solution.objective).abs() <= 1e-6,
            "seed {seed}: deltas {} objective {}",
            decomposition.total(),
            solution.objective
        );
        for path in &decomposition.paths {
            assert_eq!(path.nodes.first(), Some(&FlowNetwork::SOURCE));
            assert_eq!(path.nodes.last(), Some(&FlowNetwork::SINK));
        }
    }
}
