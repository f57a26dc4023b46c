//! Deterministic graph families.
//!
//! Random families draw from [`Lcg`], a 64-bit linear congruential generator
//! with Knuth's MMIX constants:
//!
//! ```text
//! state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//! draw  =  state >> 33                                          (31 bits)
//! below(k) = draw mod k
//! ```
//!
//! The initial state is the seed itself; every draw advances first. Any
//! implementation using these constants reproduces the same graphs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
    pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        (self.state >> 33) as u32
    }

    /// Uniform-ish integer in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        self.next_u32() as usize % bound
    }

    /// `true` with probability `percent / 100`.
    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    /// Fisher–Yates shuffle from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// `G_k` with its four labeled vertex classes.
#[derive(Debug, Clone)]
pub struct GkGraph {
    pub graph: Graph,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub d: Vec<usize>,
}

impl GkGraph {
    /// The 2-factor made of the `k` disjoint 6-cycles
    /// `c_i a_i b_i d_i b_{i+k} a_{i+k} c_i`, as edge indices.
    pub fn two_factor(&self) -> Vec<usize> {
        let k = self.c.len();
        let g = &self.graph;
        let mut edges = Vec::with_capacity(6 * k);
        for i in 0..k {
            let cycle = [
                self.c[i],
                self.a[i],
                self.b[i],
                self.d[i],
                self.b[i + k],
                self.a[i + k],
                self.c[i],
            ];
            for w in cycle.windows(2) {
                edges.push(g.edge_index(w[0], w[1]).expect("cycle edge present in G_k"));
            }
        }
        edges.sort_unstable();
        edges
    }
}

/// Vertices `a_1..a_{2k}, b_1..b_{2k}, c_1..c_k, d_1..d_k` in that index
/// order; edges `a_i b_i`, then all `a_i c_j`, then all `b_i d_j`.
pub fn gen_gk(k: usize) -> Result<GkGraph> {
    if k == 0 {
        return Err(Error::InvalidSpec("G_k needs k >= 1".into()));
    }
    let a: Vec<usize> = (0..2 * k).collect();
    let b: Vec<usize> = (2 * k..4 * k).collect();
    let c: Vec<usize> = (4 * k..5 * k).collect();
    let d: Vec<usize> = (5 * k..6 * k).collect();
    let mut pairs = Vec::with_capacity(2 * k + 4 * k * k);
    for i in 0..2 * k {
        pairs.push((a[i], b[i]));
    }
    for &ai in &a {
        for &cj in &c {
            pairs.push((ai, cj));
        }
    }
    for &bi in &b {
        for &dj in &d {
            pairs.push((bi, dj));
        }
    }
    let labels = [("a", &a), ("b", &b), ("c", &c), ("d", &d)]
        .iter()
        .flat_map(|(p, vs)| (1..=vs.len()).map(move |i| format!("{p}{i}")))
        .collect();
    let graph = Graph::new(6 * k, &pairs)?.with_labels(labels);
    Ok(GkGraph { graph, a, b, c, d })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Gk,
    CompleteBipartite,
    Complete,
    Cycle,
    Path,
    Hypercube,
    RandomRegularBipartite,
    RandomTree,
    RandomBipartite,
    RandomConnected,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Gk,
        Family::CompleteBipartite,
        Family::Complete,
        Family::Cycle,
        Family::Path,
        Family::Hypercube,
        Family::RandomRegularBipartite,
        Family::RandomTree,
        Family::RandomBipartite,
        Family::RandomConnected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gk => "gk",
            Family::CompleteBipartite => "complete_bipartite",
            Family::Complete => "complete",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Hypercube => "hypercube",
            Family::RandomRegularBipartite => "random_regular_bipartite",
            Family::RandomTree => "random_tree",
            Family::RandomBipartite => "random_bipartite",
            Family::RandomConnected => "random_connected",
        }
    }

    fn arity(self) -> usize {
        match self {
            Family::Gk | Family::Complete | Family::Cycle | Family::Path | Family::Hypercube => 1,
            Family::RandomTree => 1,
            Family::CompleteBipartite
            | Family::RandomRegularBipartite
            | Family::RandomConnected => 2,
            Family::RandomBipartite => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown family {s:?}")))
    }
}

/// A family name with its integer parameters:
///
/// | family | parameters |
/// |---|---|
/// | `gk` | `k` |
/// | `complete_bipartite` | `a, b` (side sizes) |
/// | `complete` | `n` |
/// | `cycle` | `n >= 3` |
/// | `path` | `n >= 1` |
/// | `hypercube` | dimension `>= 1` |
/// | `random_regular_bipartite` | side size `n`, degree `r <= n` |
/// | `random_tree` | `n >= 1` |
/// | `random_bipartite` | `a, b`, edge percentage |
/// | `random_connected` | `n >= 1`, extra-edge percentage |
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub params: Vec<usize>,
    pub seed: Option<u64>,
}

impl FamilySpec {
    pub fn new(family: Family, params: Vec<usize>, seed: Option<u64>) -> Self {
        Self {
            family,
            params,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(format!("{}: {msg}", self.family)));
        if self.params.len() != self.family.arity() {
            return bad(&format!("expected {} parameter(s)", self.family.arity()));
        }
        let p = &self.params;
        match self.family {
            Family::Gk if p[0] == 0 => bad("k must be >= 1"),
            Family::Cycle if p[0] < 3 => bad("length must be >= 3"),
            Family::Hypercube if p[0] == 0 || p[0] > 16 => bad("dimension must be in 1..=16"),
            Family::Path | Family::RandomTree | Family::RandomConnected if p[0] == 0 => {
                bad("need at least one vertex")
            }
            Family::RandomRegularBipartite if p[1] > p[0] => bad("degree exceeds side size"),
            Family::RandomBipartite if p[2] > 100 => bad("edge percentage exceeds 100"),
            Family::RandomConnected if p[1] > 100 => bad("edge percentage exceeds 100"),
            _ => Ok(()),
        }
    }
}

/// Builds the graph named by `spec`; random families default to seed 0.
pub fn gen_family(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    let p = &spec.params;
    let mut rng = Lcg::new(spec.seed.unwrap_or(0));
    match spec.family {
        Family::Gk => Ok(gen_gk(p[0])?.graph),
        Family::CompleteBipartite => complete_bipartite(p[0], p[1]),
        Family::Complete => {
            let n = p[0];
            let pairs: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            Graph::new(n, &pairs)
        }
        Family::Cycle => cycle(p[0]),
        Family::Path => path(p[0]),
        Family::Hypercube => {
            let d = p[0];
            let n = 1usize << d;
            let pairs: Vec<_> = (0..n)
                .flat_map(|u| (0..d).map(move |bit| (u, u ^ (1 << bit))))
                .filter(|&(u, v)| u < v)
                .collect();
            Graph::new(n, &pairs)
        }
        Family::RandomRegularBipartite => random_regular_bipartite(p[0], p[1], &mut rng),
        Family::RandomTree => Graph::new(p[0], &random_tree_edges(p[0], &mut rng)),
        Family::RandomBipartite => {
            let (a, b, pct) = (p[0], p[1], p[2]);
            let mut pairs = Vec::new();
            for u in 0..a {
                for v in 0..b {
                    if rng.chance(pct) {
                        pairs.push((u, a + v));
                    }
                }
            }
            Graph::new(a + b, &pairs)
        }
        Family::RandomConnected => {
            let (n, pct) = (p[0], p[1]);
            let mut pairs = random_tree_edges(n, &mut rng);
            for u in 0..n {
                for v in u + 1..n {
                    let in_tree = pairs.contains(&(u, v));
                    if !in_tree && rng.chance(pct) {
                        pairs.push((u, v));
                    }
                }
            }
            Graph::new(n, &pairs)
        }
    }
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    let pairs: Vec<_> = (0..a)
        .flat_map(|u| (0..b).map(move |v| (u, a + v)))
        .collect();
    Graph::new(a + b, &pairs)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSpec("cycle length must be >= 3".into()));
    }
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &pairs)
}

pub fn path(n: usize) -> Result<Graph> {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &pairs)
}

/// Vertex `v >= 1` attaches to a uniformly drawn earlier vertex.
fn random_tree_edges(n: usize, rng: &mut Lcg) -> Vec<(usize, usize)> {
    (1..n).map(|v| (rng.below(v), v)).collect()
}

const REGULAR_ATTEMPTS: usize = 1000;

/// Union of `r` shuffled perfect matchings between `0..n` and `n..2n`; a
/// matching that repeats an existing edge is redrawn.
fn random_regular_bipartite(n: usize, r: usize, rng: &mut Lcg) -> Result<Graph> {
    let mut used = vec![vec![false; n]; n];
    let mut pairs = Vec::with_capacity(n * r);
    for _ in 0..r {
        let mut attempts = 0;
        let perm = loop {
            let mut perm: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut perm);
            if (0..n).all(|u| !used[u][perm[u]]) {
                break perm;
            }
            attempts += 1;
            if attempts == REGULAR_ATTEMPTS {
                return Err(Error::InvalidSpec(format!(
                    "random_regular_bipartite({n}, {r}) failed after {REGULAR_ATTEMPTS} redraws"
                )));
            }
        };
        for u in 0..n {
            used[u][perm[u]] = true;
            pairs.push((u, n + perm[u]));
        }
    }
    Graph::new(2 * n, &pairs)
}
