//! Perfect matchings: enumeration, a minimum-weight oracle, separation for
//! the fractional preclusion polyhedron, and regular bipartite decomposition.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph};
use crate::rational::{one, sum, zero, Rational};

/// Default cap on the number of perfect matchings enumerated.
pub const DEFAULT_MATCHING_CAP: usize = 100_000;

/// All perfect matchings of a graph, each a sorted list of edge indices, in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingSet {
    pub matchings: Vec<Vec<usize>>,
}

impl MatchingSet {
    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.matchings.iter()
    }
}

/// Matches the lowest unmatched vertex to each neighbor in turn.
pub fn enumerate_perfect_matchings(g: &Graph, cap: usize) -> Result<MatchingSet> {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    let mut matched = vec![false; n];
    let mut current = Vec::with_capacity(n / 2);
    let mut out = Vec::new();
    extend(g, &mut matched, &mut current, &mut out, cap)?;
    for m in &mut out {
        m.sort_unstable();
    }
    out.sort();
    Ok(MatchingSet { matchings: out })
}

fn extend(
    g: &Graph,
    matched: &mut [bool],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    let Some(v) = matched.iter().position(|&m| !m) else {
        if out.len() == cap {
            return Err(Error::CapExceeded {
                cap,
                partial: out.len(),
            });
        }
        out.push(current.clone());
        return Ok(());
    };
    matched[v] = true;
    for &(w, e) in g.incident(v) {
        if matched[w] {
            continue;
        }
        matched[w] = true;
        current.push(e);
        let r = extend(g, matched, current, out, cap);
        current.pop();
        matched[w] = false;
        r?;
    }
    matched[v] = false;
    Ok(())
}

pub fn matching_weight(matching: &[usize], w: &[Rational]) -> Rational {
    sum(matching.iter().map(|&e| &w[e]))
}

/// Source of minimum-weight perfect matchings. Implementations must break
/// ties toward the lexicographically smallest sorted edge-index list.
pub trait MinWeightOracle {
    fn min_weight_perfect_matching(&self, w: &[Rational]) -> Option<(Vec<usize>, Rational)>;
}

/// Scans a fully enumerated matching list.
#[derive(Debug, Clone)]
pub struct EnumerationOracle {
    matchings: MatchingSet,
}

impl EnumerationOracle {
    pub fn new(g: &Graph, cap: usize) -> Result<Self> {
        Ok(Self {
            matchings: enumerate_perfect_matchings(g, cap)?,
        })
    }

    pub fn from_matchings(matchings: MatchingSet) -> Self {
        Self { matchings }
    }

    pub fn matchings(&self) -> &MatchingSet {
        &self.matchings
    }
}

impl MinWeightOracle for EnumerationOracle {
    fn min_weight_perfect_matching(&self, w: &[Rational]) -> Option<(Vec<usize>, Rational)> {
        let mut best: Option<(&Vec<usize>, Rational)> = None;
        // list is sorted, so the first strict minimum is the lexicographic one
        for m in self.matchings.iter() {
            let weight = matching_weight(m, w);
            if best.as_ref().is_none_or(|(_, b)| weight < *b) {
                best = Some((m, weight));
            }
        }
        best.map(|(m, wt)| (m.clone(), wt))
    }
}

pub fn min_weight_perfect_matching(
    g: &Graph,
    w: &[Rational],
    cap: usize,
) -> Result<Option<(Vec<usize>, Rational)>> {
    Ok(EnumerationOracle::new(g, cap)?.min_weight_perfect_matching(w))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    InPolyhedron,
    /// `w` with `wᵀx > wᵀy` for every feasible `x`.
    Violated(Vec<Rational>),
}

/// Separation for `{y ≥ 0 : (q^M)ᵀy ≥ 1 for every perfect matching M}`:
/// a negative coordinate yields its unit vector; otherwise the minimum-weight
/// perfect matching under `y` is checked against 1.
pub fn separate_fmp(
    oracle: &dyn MinWeightOracle,
    edge_count: usize,
    y: &[Rational],
) -> Result<Separation> {
    if let Some(f) = y.iter().position(|v| v < &zero()) {
        let mut w = vec![zero(); edge_count];
        w[f] = one();
        return Ok(Separation::Violated(w));
    }
    let (m0, weight) = oracle
        .min_weight_perfect_matching(y)
        .ok_or(Error::NoPerfectMatching)?;
    if weight >= one() {
        Ok(Separation::InPolyhedron)
    } else {
        let mut w = vec![zero(); edge_count];
        for e in m0 {
            w[e] = one();
        }
        Ok(Separation::Violated(w))
    }
}

/// Maximum matching in a bipartite graph by augmenting paths from side A,
/// restricted to edges where `alive[e]` holds. Returns `mate` per vertex as
/// `(partner, edge)`.
pub(crate) fn bipartite_max_matching(
    g: &Graph,
    bip: &Bipartition,
    alive: &[bool],
) -> Vec<Option<(usize, usize)>> {
    let n = g.vertex_count();
    let mut mate: Vec<Option<(usize, usize)>> = vec![None; n];
    for &a in &bip.side_a {
        let mut visited = vec![false; n];
        augment(g, a, alive, &mut mate, &mut visited);
    }
    mate
}

fn augment(
    g: &Graph,
    a: usize,
    alive: &[bool],
    mate: &mut [Option<(usize, usize)>],
    visited: &mut [bool],
) -> bool {
    for &(b, e) in g.incident(a) {
        if !alive[e] || visited[b] {
            continue;
        }
        visited[b] = true;
        let free = match mate[b] {
            None => true,
            Some((a2, _)) => augment(g, a2, alive, mate, visited),
        };
        if free {
            mate[b] = Some((a, e));
            mate[a] = Some((b, e));
            return true;
        }
    }
    false
}

pub fn has_perfect_matching(g: &Graph) -> bool {
    if g.vertex_count() % 2 == 1 {
        return false;
    }
    if let Some(bip) = crate::graph::bipartition(g) {
        let alive = vec![true; g.edge_count()];
        let mate = bipartite_max_matching(g, &bip, &alive);
        return mate.iter().all(Option::is_some);
    }
    // general graphs: depth-first search for a single matching
    let mut matched = vec![false; g.vertex_count()];
    find_one(g, &mut matched)
}

fn find_one(g: &Graph, matched: &mut [bool]) -> bool {
    let Some(v) = matched.iter().position(|&m| !m) else {
        return true;
    };
    matched[v] = true;
    for &(w, _) in g.incident(v) {
        if !matched[w] {
            matched[w] = true;
            if find_one(g, matched) {
                matched[w] = false;
                matched[v] = false;
                return true;
            }
            matched[w] = false;
        }
    }
    matched[v] = false;
    false
}

/// Splits an r-regular bipartite graph into r disjoint perfect matchings by
/// repeatedly extracting one and deleting it.
pub fn pm_partition_regular_bipartite(g: &Graph, bip: &Bipartition) -> Result<Vec<Vec<usize>>> {
    let r = match g.regular_degree() {
        Some(r) if r >= 1 && bip.is_valid_for(g) => r,
        _ => return Err(Error::NotRegularBipartite),
    };
    let mut alive = vec![true; g.edge_count()];
    let mut parts = Vec::with_capacity(r);
    for _ in 0..r {
        let mate = bipartite_max_matching(g, bip, &alive);
        let mut m: Vec<usize> = bip
            .side_a
            .iter()
            .map(|&a| mate[a].map(|(_, e)| e))
            .collect::<Option<_>>()
            .expect("regular bipartite graphs keep a perfect matching after deleting one");
        m.sort_unstable();
        for &e in &m {
            alive[e] = false;
        }
        parts.push(m);
    }
    debug_assert!(alive.iter().all(|a| !a));
    Ok(parts)
}

/// `true` when `edges` covers every vertex exactly once.
pub fn is_perfect_matching(g: &Graph, edges: &[usize]) -> bool {
    let mut cover = vec![0u32; g.vertex_count()];
    for &e in edges {
        let (u, v) = g.edge(e);
        cover[u] += 1;
        cover[v] += 1;
    }
    cover.iter().all(|&c| c == 1)
}

pub(crate) fn fmp_satisfied(matchings: &MatchingSet, y: &[Rational]) -> bool {
    y.iter().all(|v| !(v < &Rational::zero()))
        && matchings.iter().all(|m| matching_weight(m, y) >= one())
}
