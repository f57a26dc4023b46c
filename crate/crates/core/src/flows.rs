//! Exact maximum flow, feasible circulations and bipartite f-factors.
//!
//! Max flow is Edmonds–Karp (shortest augmenting paths) over rationals.
//! Circulations with lower bounds reduce to one max-flow call through a
//! super source and super sink; when the reduction does not saturate, the
//! complement of the residual-reachable set is a Hoffman violator.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph};
use crate::rational::{int, zero, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub lower: Rational,
    pub capacity: Rational,
}

#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    node_count: usize,
    arcs: Vec<Arc>,
    pub source: Option<usize>,
    pub sink: Option<usize>,
}

impl FlowNetwork {
    pub fn new(node_count: usize) -> Self {
        Self {
            node_count,
            ..Default::default()
        }
    }

    pub fn with_terminals(node_count: usize, source: usize, sink: usize) -> Self {
        Self {
            node_count,
            arcs: Vec::new(),
            source: Some(source),
            sink: Some(sink),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(
        &mut self,
        tail: usize,
        head: usize,
        lower: Rational,
        capacity: Rational,
    ) -> Result<usize> {
        if tail >= self.node_count || head >= self.node_count {
            return Err(Error::InvalidNetwork(format!(
                "arc ({tail}, {head}) outside 0..{}",
                self.node_count
            )));
        }
        if tail == head {
            return Err(Error::InvalidNetwork(format!("loop arc at {tail}")));
        }
        if lower.is_negative() || lower > capacity {
            return Err(Error::InvalidNetwork(format!(
                "arc ({tail}, {head}) needs 0 <= lower <= capacity"
            )));
        }
        self.arcs.push(Arc {
            tail,
            head,
            lower,
            capacity,
        });
        Ok(self.arcs.len() - 1)
    }

    pub fn add_capacity_arc(
        &mut self,
        tail: usize,
        head: usize,
        capacity: Rational,
    ) -> Result<usize> {
        self.add_arc(tail, head, zero(), capacity)
    }

    /// Net outflow `x_f(v)` of an assignment.
    pub fn excess(&self, flow: &[Rational], v: usize) -> Rational {
        let mut x = zero();
        for (a, f) in self.arcs.iter().zip(flow) {
            if a.tail == v {
                x += f;
            }
            if a.head == v {
                x -= f;
            }
        }
        x
    }

    /// Total capacity of arcs leaving `side` (`∂+(side)`).
    pub fn cut_capacity(&self, in_side: &[bool]) -> Rational {
        self.arcs
            .iter()
            .filter(|a| in_side[a.tail] && !in_side[a.head])
            .fold(zero(), |acc, a| acc + &a.capacity)
    }

    /// `c(V\R, R)` and `l(R, V\R)` for a node set `R`.
    pub fn hoffman_sides(&self, in_r: &[bool]) -> (Rational, Rational) {
        let mut cap_in = zero();
        let mut low_out = zero();
        for a in &self.arcs {
            if !in_r[a.tail] && in_r[a.head] {
                cap_in += &a.capacity;
            }
            if in_r[a.tail] && !in_r[a.head] {
                low_out += &a.lower;
            }
        }
        (cap_in, low_out)
    }
}

#[derive(Debug, Clone)]
pub struct MaxFlow {
    pub value: Rational,
    pub flow: Vec<Rational>,
    /// Nodes reachable from the source in the final residual network.
    pub min_cut_side: Vec<usize>,
}

/// Residual graph with paired forward/backward edges.
struct Residual {
    head: Vec<usize>,
    cap: Vec<Rational>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Self {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: Rational) -> usize {
        let id = self.head.len();
        self.head.push(v);
        self.cap.push(c);
        self.adj[u].push(id);
        self.head.push(u);
        self.cap.push(zero());
        self.adj[v].push(id + 1);
        id
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if !seen[v] && self.cap[e].is_positive() {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn augment_all(&mut self, s: usize, t: usize) -> Rational {
        let mut total = zero();
        loop {
            let n = self.adj.len();
            let mut via: Vec<Option<usize>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.head[e];
                    if !seen[v] && self.cap[e].is_positive() {
                        seen[v] = true;
                        via[v] = Some(e);
                        if v == t {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut path = Vec::new();
            let mut v = t;
            while let Some(e) = via[v] {
                path.push(e);
                v = self.head[e ^ 1];
            }
            let delta = path
                .iter()
                .map(|&e| self.cap[e].clone())
                .min()
                .expect("path has at least one arc");
            for &e in &path {
                self.cap[e] -= &delta;
                self.cap[e ^ 1] += &delta;
            }
            total += delta;
        }
    }
}

/// Maximum s-t flow. All lower bounds must be zero.
pub fn max_flow(net: &FlowNetwork) -> Result<MaxFlow> {
    let (s, t) = match (net.source, net.sink) {
        (Some(s), Some(t)) if s != t => (s, t),
        _ => return Err(Error::MissingTerminals),
    };
    if net.arcs.iter().any(|a| !a.lower.is_zero()) {
        return Err(Error::InvalidNetwork(
            "max_flow requires zero lower bounds".into(),
        ));
    }
    let mut res = Residual::new(net.node_count);
    let ids: Vec<usize> = net
        .arcs
        .iter()
        .map(|a| res.add(a.tail, a.head, a.capacity.clone()))
        .collect();
    let value = res.augment_all(s, t);
    let flow = ids.iter().map(|&id| res.cap[id + 1].clone()).collect();
    let seen = res.reachable(s);
    let min_cut_side = (0..net.node_count).filter(|&v| seen[v]).collect();
    Ok(MaxFlow {
        value,
        flow,
        min_cut_side,
    })
}

#[derive(Debug, Clone)]
pub enum Circulation {
    Feasible(Vec<Rational>),
    /// A node set `R` with `c(V\R, R) < l(R, V\R)`.
    Violation(Vec<usize>),
}

/// Finds a circulation with `lower <= f <= capacity` on every arc, or a
/// Hoffman violator. Terminals, if set, are ignored.
pub fn feasible_circulation(net: &FlowNetwork) -> Circulation {
    let n = net.node_count;
    let (ss, tt) = (n, n + 1);
    let mut res = Residual::new(n + 2);
    // imbalance[v] = lower flow entering v minus lower flow leaving v
    let mut imbalance = vec![zero(); n];
    let ids: Vec<usize> = net
        .arcs
        .iter()
        .map(|a| {
            imbalance[a.head] += &a.lower;
            imbalance[a.tail] -= &a.lower;
            res.add(a.tail, a.head, &a.capacity - &a.lower)
        })
        .collect();
    let mut demand = zero();
    for (v, b) in imbalance.iter().enumerate() {
        if b.is_positive() {
            res.add(ss, v, b.clone());
            demand += b;
        } else if b.is_negative() {
            res.add(v, tt, -b);
        }
    }
    let value = res.augment_all(ss, tt);
    if value == demand {
        let flow = net
            .arcs
            .iter()
            .zip(&ids)
            .map(|(a, &id)| &a.lower + &res.cap[id + 1])
            .collect();
        Circulation::Feasible(flow)
    } else {
        let seen = res.reachable(ss);
        Circulation::Violation((0..n).filter(|&v| !seen[v]).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FFactor {
    /// Edge indices of a spanning subgraph with degree `f(v)` at every `v`.
    Found(Vec<usize>),
    /// `Σ_A f ≠ Σ_B f`.
    UnequalSums,
    /// `X ⊆ A`, `Y ⊆ B` with `Σ_X f > e(X,Y) + Σ_{B\Y} f`.
    Violation { x: Vec<usize>, y: Vec<usize> },
}

impl FFactor {
    pub fn exists(&self) -> bool {
        matches!(self, FFactor::Found(_))
    }
}

/// Decides whether a bipartite graph has an f-factor via the flow network
/// `s → a (f(a))`, `a → b (1 per edge)`, `b → t (f(b))`.
pub fn f_factor_exists(g: &Graph, bip: &Bipartition, f: &[usize]) -> Result<FFactor> {
    let n = g.vertex_count();
    if !bip.is_valid_for(g) {
        return Err(Error::NotBipartite);
    }
    assert_eq!(f.len(), n, "one demand per vertex");
    let sum_a: usize = bip.side_a.iter().map(|&v| f[v]).sum();
    let sum_b: usize = bip.side_b.iter().map(|&v| f[v]).sum();
    if sum_a != sum_b {
        return Ok(FFactor::UnequalSums);
    }
    let in_a = bip.membership(n);
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::with_terminals(n + 2, s, t);
    for &a in &bip.side_a {
        net.add_capacity_arc(s, a, int(f[a] as i64))?;
    }
    let mut edge_arcs = Vec::with_capacity(g.edge_count());
    for &(u, v) in g.edges() {
        let (a, b) = if in_a[u] { (u, v) } else { (v, u) };
        edge_arcs.push(net.add_capacity_arc(a, b, int(1))?);
    }
    for &b in &bip.side_b {
        net.add_capacity_arc(b, t, int(f[b] as i64))?;
    }
    let mf = max_flow(&net)?;
    if mf.value == int(sum_a as i64) {
        let edges = edge_arcs
            .iter()
            .enumerate()
            .filter(|(_, &arc)| mf.flow[arc] == int(1))
            .map(|(i, _)| i)
            .collect();
        return Ok(FFactor::Found(edges));
    }
    let mut in_r = vec![false; n + 2];
    for &v in &mf.min_cut_side {
        in_r[v] = true;
    }
    let x = bip.side_a.iter().copied().filter(|&a| in_r[a]).collect();
    let y = bip.side_b.iter().copied().filter(|&b| !in_r[b]).collect();
    Ok(FFactor::Violation { x, y })
}

/// Largest `k` such that the graph has a k-factor (0 always qualifies).
pub fn max_k_factor(g: &Graph, bip: &Bipartition) -> Result<usize> {
    if !bip.is_valid_for(g) {
        return Err(Error::NotBipartite);
    }
    let mut best = 0;
    for k in 1..=g.min_degree() {
        if f_factor_exists(g, bip, &vec![k; g.vertex_count()])?.exists() {
            best = k;
        } else {
            break;
        }
    }
    Ok(best)
}
