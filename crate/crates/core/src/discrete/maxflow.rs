//! Dinic maximum flow on `f64` capacities, with access to both extremal minimum cuts.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: f64,
}

#[derive(Debug, Clone)]
pub struct FlowGraph {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i64>,
    iter: Vec<usize>,
    eps: f64,
    total_cap: f64,
}

impl FlowGraph {
    pub fn new(nodes: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
            eps: 0.0,
            total_cap: 0.0,
        }
    }

    pub fn nodes(&self) -> usize {
        self.adj.len()
    }

    /// Directed edge `u -> v`. Edge `2k` is the forward arc, `2k + 1` its residual twin.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: f64) {
        self.add_pair(u, v, cap, 0.0);
    }

    /// Undirected edge: capacity `cap` in both directions.
    pub fn add_undirected(&mut self, u: usize, v: usize, cap: f64) {
        self.add_pair(u, v, cap, cap);
    }

    fn add_pair(&mut self, u: usize, v: usize, fwd: f64, back: f64) {
        if fwd <= 0.0 && back <= 0.0 {
            return;
        }
        if fwd.is_finite() {
            self.total_cap += fwd;
        }
        if back.is_finite() {
            self.total_cap += back;
        }
        self.adj[u].push(self.edges.len());
        self.edges.push(Edge { to: v, cap: fwd });
        self.adj[v].push(self.edges.len());
        self.edges.push(Edge { to: u, cap: back });
    }

    /// Capacity that no finite cut can reach.
    pub fn infinite_capacity(&self) -> f64 {
        f64::INFINITY
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let Edge { to, cap } = self.edges[e];
                if cap > self.eps && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: f64) -> f64 {
        if v == t {
            return pushed;
        }
        while self.iter[v] < self.adj[v].len() {
            let e = self.adj[v][self.iter[v]];
            let Edge { to, cap } = self.edges[e];
            if cap > self.eps && self.level[to] == self.level[v] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0.0 {
                    self.edges[e].cap -= got;
                    self.edges[e ^ 1].cap += got;
                    return got;
                }
            }
            self.iter[v] += 1;
        }
        0.0
    }

    /// Maximum flow value from `s` to `t`. Residual capacities below
    /// `1e-13 * (total finite capacity)` are treated as saturated.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        self.eps = 1e-13 * self.total_cap.max(f64::MIN_POSITIVE);
        let mut flow = 0.0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, f64::INFINITY);
                if pushed <= 0.0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Nodes reachable from `s` in the residual graph: the source side of the
    /// minimum cut with the fewest nodes.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                let Edge { to, cap } = self.edges[e];
                if cap > self.eps && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        seen
    }

    /// Complement of the nodes that can reach `t` in the residual graph: the
    /// source side of the minimum cut with the most nodes.
    pub fn maximal_source_side(&self, t: usize) -> Vec<bool> {
        let mut reaches = vec![false; self.nodes()];
        reaches[t] = true;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                // arc e goes v -> to; its twin e^1 goes to -> v
                let to = self.edges[e].to;
                if self.edges[e ^ 1].cap > self.eps && !reaches[to] {
                    reaches[to] = true;
                    stack.push(to);
                }
            }
        }
        reaches.into_iter().map(|r| !r).collect()
    }
}
