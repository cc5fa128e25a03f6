//! Independent max-flow cross-check. Commodity labels only restrict which
//! arcs exist, which the network already encodes, so the LP optimum must
//! equal the plain single-commodity s→d max flow. Computed with Dinic's
//! augmenting-path algorithm on the same arc set.

use super::FlowNetwork;

const EPS: f64 = 1e-12;

struct Dinic {
    // arc-parallel arrays; even indices forward, odd reverse
    head: Vec<u32>,
    residual: Vec<f64>,
    out: Vec<Vec<u32>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: Vec::new(),
            residual: Vec::new(),
            out: vec![Vec::new(); n],
            level: vec![-1; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: u32, to: u32, cap: f64) {
        let e = self.head.len() as u32;
        self.head.push(to);
        self.residual.push(cap);
        self.out[from as usize].push(e);
        self.head.push(from);
        self.residual.push(0.0);
        self.out[to as usize].push(e + 1);
    }

    fn bfs(&mut self, s: u32, t: u32) -> bool {
        self.level.fill(-1);
        self.level[s as usize] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.out[u as usize] {
                let v = self.head[e as usize];
                if self.residual[e as usize] > EPS && self.level[v as usize] < 0 {
                    self.level[v as usize] = self.level[u as usize] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t as usize] >= 0
    }

    fn dfs(&mut self, u: u32, t: u32, limit: f64) -> f64 {
        if u == t {
            return limit;
        }
        while self.iter[u as usize] < self.out[u as usize].len() {
            let e = self.out[u as usize][self.iter[u as usize]];
            let v = self.head[e as usize];
            if self.residual[e as usize] > EPS
                && self.level[v as usize] == self.level[u as usize] + 1
            {
                let pushed = self.dfs(v, t, limit.min(self.residual[e as usize]));
                if pushed > EPS {
                    self.residual[e as usize] -= pushed;
                    self.residual[(e ^ 1) as usize] += pushed;
                    return pushed;
                }
            }
            self.iter[u as usize] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, s: u32, t: u32) -> f64 {
        let mut flow = 0.0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, f64::INFINITY);
                if pushed <= EPS {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }
}

/// Augmenting-path max flow on the network's arcs, ignoring commodity labels.
pub fn max_flow_oracle(network: &FlowNetwork) -> f64 {
    let n = network.node_count();
    let mut dinic = Dinic::new(n);
    for arc in &network.arcs {
        dinic.add_edge(arc.from, arc.to, arc.capacity.unwrap_or(network.big_m));
    }
    dinic.max_flow(FlowNetwork::SOURCE, FlowNetwork::SINK)
}
