//! Matching preclusion `mp(G)` and fractional matching preclusion `mp_f(G)`.
//!
//! `mp_f` is computed by independent routes that must agree exactly:
//!
//! * [`mpf_enumerated`]: the covering LP over every perfect matching;
//! * [`mpf_cutting_plane`]: the same LP by row generation, with a
//!   minimum-weight perfect matching oracle as separation routine;
//! * [`mpf_odd_cut_lp`]: `1 / L(G)` where `L(G)` minimizes the largest edge
//!   value over the perfect matching polytope (degree equalities plus
//!   non-trivial odd-cut inequalities);
//! * bipartite only: [`mpf_bipartite_formula`] (closed form over pairs
//!   `X ⊆ A`, `Y ⊆ B`) and [`mpf_bipartite_blp`] (the polytope LP without odd
//!   cuts).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flows::{self, Circulation, FlowNetwork};
use crate::graph::{self, bipartition, Bipartition, Graph};
use crate::lp::{self, LinearProgram, LpStatus, Relation, Sense};
use crate::matching::{
    self, bipartite_max_matching, EnumerationOracle, MatchingSet, MinWeightOracle, Separation,
};
use crate::rational::{floor_to_usize, frac, int, one, sum, zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Enumeration,
    CuttingPlane,
    OddCutLp,
    BipartiteFormula,
    Blp,
    ProductFormula,
    HittingSearch,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Enumeration,
        Method::CuttingPlane,
        Method::OddCutLp,
        Method::BipartiteFormula,
        Method::Blp,
        Method::ProductFormula,
        Method::HittingSearch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Enumeration => "enumeration",
            Method::CuttingPlane => "cutting_plane",
            Method::OddCutLp => "odd_cut_lp",
            Method::BipartiteFormula => "bipartite_formula",
            Method::Blp => "blp",
            Method::ProductFormula => "product_formula",
            Method::HittingSearch => "hitting_search",
        }
    }

    pub fn requires_bipartite(self) -> bool {
        matches!(
            self,
            Method::BipartiteFormula | Method::Blp | Method::ProductFormula
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

/// Size limits that turn combinatorial blow-up into explicit errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub matching_cap: usize,
    pub odd_cut_cap: usize,
    /// Largest `|A| + |B|` searched exhaustively by the closed forms; larger
    /// graphs use the parametric flow search.
    pub subset_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            matching_cap: matching::DEFAULT_MATCHING_CAP,
            odd_cut_cap: graph::DEFAULT_ODD_CUT_CAP,
            subset_cap: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreclusionReport {
    pub value: Rational,
    pub method: Method,
    pub witness_xy: Option<(Vec<usize>, Vec<usize>)>,
    /// Optimal `y` for the covering LP, one entry per edge.
    pub certificate_y: Option<Vec<Rational>>,
    /// Edge set whose deletion leaves no perfect matching (integer `mp`).
    pub preclusion_set: Option<Vec<usize>>,
    pub cross_check: BTreeMap<Method, Rational>,
}

impl PreclusionReport {
    fn new(value: Rational, method: Method) -> Self {
        Self {
            value,
            method,
            witness_xy: None,
            certificate_y: None,
            preclusion_set: None,
            cross_check: BTreeMap::new(),
        }
    }

    /// Every cross-checked value equals `value`.
    pub fn agrees(&self) -> bool {
        self.cross_check.values().all(|v| v == &self.value)
    }
}

fn require_even_nonempty(g: &Graph) -> Result<()> {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(())
}

fn covering_lp(g: &Graph, matchings: &MatchingSet) -> LinearProgram {
    let m = g.edge_count();
    let mut lp = LinearProgram::new(m, Sense::Minimize);
    lp.set_objective(vec![one(); m]);
    for pm in matchings.iter() {
        let terms: Vec<_> = pm.iter().map(|&e| (e, one())).collect();
        lp.add_sparse_constraint(&terms, Relation::Ge, one());
    }
    lp
}

/// `mp(G)` by branch and bound on the 0-1 covering program over all perfect
/// matchings.
pub fn mp(g: &Graph, limits: &Limits) -> Result<PreclusionReport> {
    require_even_nonempty(g)?;
    let matchings = matching::enumerate_perfect_matchings(g, limits.matching_cap)?;
    let mut report;
    if matchings.is_empty() {
        report = PreclusionReport::new(zero(), Method::Enumeration);
        report.preclusion_set = Some(Vec::new());
        return Ok(report);
    }
    let mut lp = covering_lp(g, &matchings);
    for e in 0..g.edge_count() {
        lp.set_bounds(e, zero(), Some(one()));
        lp.set_integral(e, true);
    }
    let sol = lp::solve_01(&lp);
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "deleting every edge is feasible"
    );
    report = PreclusionReport::new(sol.value, Method::Enumeration);
    report.preclusion_set = Some(
        (0..g.edge_count())
            .filter(|&e| sol.primal[e] == one())
            .collect(),
    );
    Ok(report)
}

/// A perfect matching of the graph restricted to `alive` edges, if any.
fn find_perfect_matching(
    g: &Graph,
    bip: Option<&Bipartition>,
    alive: &[bool],
) -> Option<Vec<usize>> {
    if let Some(bip) = bip {
        if !bip.is_balanced() {
            return None;
        }
        let mate = bipartite_max_matching(g, bip, alive);
        return bip
            .side_a
            .iter()
            .map(|&a| mate[a].map(|(_, e)| e))
            .collect();
    }
    fn search(g: &Graph, alive: &[bool], matched: &mut [bool], acc: &mut Vec<usize>) -> bool {
        let Some(v) = matched.iter().position(|&m| !m) else {
            return true;
        };
        matched[v] = true;
        for &(w, e) in g.incident(v) {
            if alive[e] && !matched[w] {
                matched[w] = true;
                acc.push(e);
                if search(g, alive, matched, acc) {
                    return true;
                }
                acc.pop();
                matched[w] = false;
            }
        }
        matched[v] = false;
        false
    }
    let mut matched = vec![false; g.vertex_count()];
    let mut acc = Vec::new();
    search(g, alive, &mut matched, &mut acc).then_some(acc)
}

/// `mp(G)` by iterative deepening: a deletion set must hit the perfect
/// matching found in what remains, so branch on its edges.
pub fn mp_hitting_search(g: &Graph) -> Result<PreclusionReport> {
    require_even_nonempty(g)?;
    let bip = bipartition(g);
    let mut alive = vec![true; g.edge_count()];
    let mut chosen = Vec::new();
    for budget in 0..=g.edge_count() {
        if hit(g, bip.as_ref(), &mut alive, &mut chosen, budget) {
            let mut set = chosen.clone();
            set.sort_unstable();
            let mut report = PreclusionReport::new(int(set.len() as i64), Method::HittingSearch);
            report.preclusion_set = Some(set);
            return Ok(report);
        }
    }
    unreachable!("deleting every edge destroys all perfect matchings of a nonempty graph")
}

fn hit(
    g: &Graph,
    bip: Option<&Bipartition>,
    alive: &mut [bool],
    chosen: &mut Vec<usize>,
    budget: usize,
) -> bool {
    let Some(pm) = find_perfect_matching(g, bip, alive) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    let mut pm = pm;
    pm.sort_unstable();
    for e in pm {
        alive[e] = false;
        chosen.push(e);
        if hit(g, bip, alive, chosen, budget - 1) {
            return true;
        }
        chosen.pop();
        alive[e] = true;
    }
    false
}

/// `mp_f(G)` from the covering LP written out over every perfect matching.
pub fn mpf_enumerated(g: &Graph, limits: &Limits) -> Result<PreclusionReport> {
    require_even_nonempty(g)?;
    let matchings = matching::enumerate_perfect_matchings(g, limits.matching_cap)?;
    if matchings.is_empty() {
        let mut report = PreclusionReport::new(zero(), Method::Enumeration);
        report.certificate_y = Some(vec![zero(); g.edge_count()]);
        return Ok(report);
    }
    let lp = covering_lp(g, &matchings);
    let sol = lp::solve_lp(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    let mut report = PreclusionReport::new(sol.value, Method::Enumeration);
    report.certificate_y = Some(sol.primal);
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct CuttingPlaneRun {
    pub report: PreclusionReport,
    /// Separation calls made, including the final one that certified membership.
    pub rounds: usize,
    /// Matching constraints in the final LP.
    pub constraints: usize,
}

/// Row generation for the covering LP with the given separation oracle.
/// Starts from the lexicographically first perfect matching's constraint.
pub fn mpf_cutting_plane_with(g: &Graph, oracle: &dyn MinWeightOracle) -> Result<CuttingPlaneRun> {
    require_even_nonempty(g)?;
    let m = g.edge_count();
    let (first, _) = oracle
        .min_weight_perfect_matching(&vec![zero(); m])
        .ok_or(Error::NoPerfectMatching)?;
    let mut lp = LinearProgram::new(m, Sense::Minimize);
    lp.set_objective(vec![one(); m]);
    let row = |pm: &[usize]| pm.iter().map(|&e| (e, one())).collect::<Vec<_>>();
    lp.add_sparse_constraint(&row(&first), Relation::Ge, one());
    let mut rounds = 0;
    loop {
        let sol = lp::solve_lp(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        rounds += 1;
        match matching::separate_fmp(oracle, m, &sol.primal)? {
            Separation::InPolyhedron => {
                let constraints = lp.constraints().len();
                let mut report = PreclusionReport::new(sol.value, Method::CuttingPlane);
                report.certificate_y = Some(sol.primal);
                return Ok(CuttingPlaneRun {
                    report,
                    rounds,
                    constraints,
                });
            }
            Separation::Violated(w) => {
                lp.add_constraint(w, Relation::Ge, one());
            }
        }
    }
}

pub fn mpf_cutting_plane(g: &Graph, limits: &Limits) -> Result<PreclusionReport> {
    require_even_nonempty(g)?;
    let oracle = EnumerationOracle::new(g, limits.matching_cap)?;
    Ok(mpf_cutting_plane_with(g, &oracle)?.report)
}

/// Which odd-cut inequalities the polytope LP carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddCuts {
    /// Every non-trivial odd cut written up front.
    All,
    /// Violated cuts added one at a time until none remain.
    Lazy,
    /// Degree equalities only.
    Omit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LOfG {
    pub l: Rational,
    pub b: Vec<Rational>,
    /// Odd-cut inequalities present in the final LP.
    pub odd_cut_rows: usize,
}

/// Variables `b_0..b_{m-1}, z`: minimize `z` with `z >= b_e`, degree
/// equalities, `b >= 0`.
fn polytope_lp(g: &Graph) -> LinearProgram {
    let m = g.edge_count();
    let mut lp = LinearProgram::new(m + 1, Sense::Minimize);
    lp.set_objective_coeff(m, one());
    for e in 0..m {
        lp.add_sparse_constraint(&[(m, one()), (e, -one())], Relation::Ge, zero());
    }
    for v in 0..g.vertex_count() {
        let terms: Vec<_> = g.incident(v).iter().map(|&(_, e)| (e, one())).collect();
        lp.add_sparse_constraint(&terms, Relation::Eq, one());
    }
    lp
}

fn add_cut_row(lp: &mut LinearProgram, g: &Graph, mask: u64) {
    let terms: Vec<_> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| ((mask >> u) & 1) != ((mask >> v) & 1))
        .map(|(e, _)| (e, one()))
        .collect();
    lp.add_sparse_constraint(&terms, Relation::Ge, one());
}

/// Optimum of the min-max LP over the perfect matching polytope.
pub fn l_of_g_with(g: &Graph, limits: &Limits, odd_cuts: OddCuts) -> Result<LOfG> {
    require_even_nonempty(g)?;
    if !matching::has_perfect_matching(g) {
        return Err(Error::NoPerfectMatching);
    }
    let m = g.edge_count();
    let mut lp = polytope_lp(g);
    let mut masks = Vec::new();
    if odd_cuts != OddCuts::Omit {
        graph::for_each_nontrivial_odd_cut(g, limits.odd_cut_cap, |mask| masks.push(mask))?;
    }
    if odd_cuts == OddCuts::All {
        for &mask in &masks {
            add_cut_row(&mut lp, g, mask);
        }
    }
    let mut added = if odd_cuts == OddCuts::All {
        masks.len()
    } else {
        0
    };
    loop {
        let sol = lp::solve_lp(&lp);
        assert_eq!(
            sol.status,
            LpStatus::Optimal,
            "a perfect matching is feasible"
        );
        if odd_cuts == OddCuts::Lazy {
            let b = &sol.primal[..m];
            let support: Vec<(usize, usize, &Rational)> = g
                .edges()
                .iter()
                .zip(b)
                .filter(|(_, x)| !x.is_zero())
                .map(|(&(u, v), x)| (u, v, x))
                .collect();
            let mut worst: Option<(u64, Rational)> = None;
            for &mask in &masks {
                let mut load = zero();
                for &(u, v, x) in &support {
                    if ((mask >> u) & 1) != ((mask >> v) & 1) {
                        load += x;
                    }
                }
                if load < one() && worst.as_ref().is_none_or(|(_, w)| load < *w) {
                    worst = Some((mask, load));
                }
            }
            if let Some((mask, _)) = worst {
                add_cut_row(&mut lp, g, mask);
                added += 1;
                continue;
            }
        }
        let mut b = sol.primal;
        let l = b.pop().unwrap();
        return Ok(LOfG {
            l,
            b,
            odd_cut_rows: added,
        });
    }
}

pub fn l_of_g(g: &Graph, limits: &Limits) -> Result<LOfG> {
    l_of_g_with(g, limits, OddCuts::Lazy)
}

/// `mp_f(G) = 1 / L(G)`.
pub fn mpf_odd_cut_lp(g: &Graph, limits: &Limits) -> Result<PreclusionReport> {
    let res = l_of_g(g, limits)?;
    Ok(PreclusionReport::new(one() / res.l, Method::OddCutLp))
}

fn check_bipartition(g: &Graph, bip: &Bipartition) -> Result<()> {
    if bip.is_valid_for(g) {
        Ok(())
    } else {
        Err(Error::NotBipartite)
    }
}

/// `mp_f` of a bipartite graph as `1 / L(G)` with `L(G)` from the polytope LP
/// without odd cuts.
pub fn mpf_bipartite_blp(g: &Graph, bip: &Bipartition) -> Result<PreclusionReport> {
    check_bipartition(g, bip)?;
    require_even_nonempty(g)?;
    let lp = polytope_lp(g);
    let sol = lp::solve_lp(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::NoPerfectMatching);
    }
    Ok(PreclusionReport::new(one() / sol.value, Method::Blp))
}

/// Side data used by the closed-form searches; `small` is the smaller side.
struct Sides<'a> {
    small: &'a [usize],
    large: &'a [usize],
}

fn sides(bip: &Bipartition) -> Sides<'_> {
    if bip.side_a.len() <= bip.side_b.len() {
        Sides {
            small: &bip.side_a,
            large: &bip.side_b,
        }
    } else {
        Sides {
            small: &bip.side_b,
            large: &bip.side_a,
        }
    }
}

/// A pair `(X, Y)` of local masks with the exact ratio it attains.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    x: u64,
    y: u64,
    num: u64,
    den: u64,
}

/// Sorted lists compare as sequences; for masks, the lowest differing bit
/// decides unless one list ends first.
fn mask_lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let bit = diff.trailing_zeros();
    let above = |m: u64| bit < 63 && (m >> (bit + 1)) != 0;
    if (a >> bit) & 1 == 1 {
        above(b)
    } else {
        !above(a)
    }
}

/// Exhaustive minimum of `(e(X,Y) + r·min(|X|,|Y|)) / (|X|+|Y|-|A|)` over
/// pairs with positive denominator; ties go to the lexicographically smallest
/// `(X, Y)`.
fn exhaustive_min(g: &Graph, a_side: &[usize], b_side: &[usize], r: u64) -> Candidate {
    let na = a_side.len();
    let nb = b_side.len();
    assert!(
        na + nb <= 40,
        "exhaustive pair search is limited to small sides"
    );
    let mut b_local = vec![usize::MAX; g.vertex_count()];
    for (j, &b) in b_side.iter().enumerate() {
        b_local[b] = j;
    }
    let adj: Vec<u64> = a_side
        .iter()
        .map(|&a| {
            g.neighbors(a)
                .filter(|&w| b_local[w] != usize::MAX)
                .fold(0u64, |m, w| m | (1 << b_local[w]))
        })
        .collect();
    let mut best: Option<Candidate> = None;
    let mut e_of_x = vec![0u64; 1 << na];
    let mut counts = vec![0u64; na];
    for y in 0u64..(1 << nb) {
        let ny = y.count_ones() as usize;
        for (i, c) in counts.iter_mut().enumerate() {
            *c = (adj[i] & y).count_ones() as u64;
        }
        for x in 1u64..(1 << na) {
            let low = x.trailing_zeros() as usize;
            e_of_x[x as usize] = e_of_x[(x & (x - 1)) as usize] + counts[low];
        }
        for x in 0u64..(1 << na) {
            let nx = x.count_ones() as usize;
            if nx + ny <= na {
                continue;
            }
            let den = (nx + ny - na) as u64;
            let num = e_of_x[x as usize] + r * nx.min(ny) as u64;
            let cand = Candidate { x, y, num, den };
            let better = match &best {
                None => true,
                Some(b) => {
                    let lhs = num as u128 * b.den as u128;
                    let rhs = b.num as u128 * den as u128;
                    lhs < rhs
                        || (lhs == rhs
                            && (mask_lex_less(x, b.x) || (x == b.x && mask_lex_less(y, b.y))))
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best.expect("X = A, Y = B has a positive denominator when B is nonempty")
}

fn local_to_global(mask: u64, side: &[usize]) -> Vec<usize> {
    side.iter()
        .enumerate()
        .filter(|(i, _)| (mask >> i) & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

/// `Y0 ⊆ large` with `|N(Y0)| < |Y0|`, and `X0 = small \ N(Y0)`.
fn hall_violator(g: &Graph, s: &Sides) -> (Vec<usize>, Vec<usize>) {
    let n = g.vertex_count();
    let from_large = Bipartition {
        side_a: s.large.to_vec(),
        side_b: s.small.to_vec(),
    };
    let alive = vec![true; g.edge_count()];
    let mate = bipartite_max_matching(g, &from_large, &alive);
    let root = *s
        .large
        .iter()
        .find(|&&v| mate[v].is_none())
        .expect("no perfect matching leaves a vertex of the larger side exposed");
    // alternating search: large -> any neighbor, small -> its mate
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for w in g.neighbors(v) {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            let (partner, _) = mate[w].expect("alternating tree reaches only matched vertices");
            if !seen[partner] {
                seen[partner] = true;
                stack.push(partner);
            }
        }
    }
    let y0: Vec<usize> = s.large.iter().copied().filter(|&v| seen[v]).collect();
    let x0: Vec<usize> = s.small.iter().copied().filter(|&v| !seen[v]).collect();
    (x0, y0)
}

/// Largest candidate `p/q` (`1 <= q <= q_max`, `lo <= p/q`, `p <= p_max`)
/// accepted by `feasible`, which must be monotone (true up to the answer).
/// Returns it with the first rejected candidate above it.
fn parametric_search(
    q_max: u64,
    p_max: u64,
    lo: &Rational,
    mut feasible: impl FnMut(&Rational) -> bool,
) -> (Rational, Rational) {
    let mut cands: Vec<Rational> = (1..=q_max)
        .flat_map(|q| (0..=p_max).map(move |p| frac(p as i64, q as i64)))
        .filter(|v| v >= lo)
        .collect();
    cands.sort();
    cands.dedup();
    assert!(cands.first() == Some(lo), "lower end must be a candidate");
    // invariant: cands[ok] feasible, cands[bad] infeasible
    let (mut ok, mut bad) = (0usize, cands.len() - 1);
    assert!(
        !feasible(&cands[bad]),
        "largest candidate must be infeasible"
    );
    while bad - ok > 1 {
        let mid = (ok + bad) / 2;
        if feasible(&cands[mid]) {
            ok = mid;
        } else {
            bad = mid;
        }
    }
    (cands[ok].clone(), cands[bad].clone())
}

/// Network `s → a (cap 1)`, `a → b (cap z)`, `b → t (cap 1)`; returns it
/// with `(s, t)`.
fn bipartite_flow_network(
    g: &Graph,
    a_side: &[usize],
    z: &Rational,
) -> (FlowNetwork, usize, usize) {
    let n = g.vertex_count();
    let (s, t) = (n, n + 1);
    let mut in_a = vec![false; n];
    for &a in a_side {
        in_a[a] = true;
    }
    let mut net = FlowNetwork::with_terminals(n + 2, s, t);
    for (v, _) in in_a.iter().enumerate().filter(|(_, &a)| a) {
        net.add_capacity_arc(s, v, one()).unwrap();
    }
    for &(u, v) in g.edges() {
        let (a, b) = if in_a[u] { (u, v) } else { (v, u) };
        net.add_capacity_arc(a, b, z.clone()).unwrap();
    }
    for (v, _) in in_a.iter().enumerate().filter(|(_, &a)| !a) {
        net.add_capacity_arc(v, t, one()).unwrap();
    }
    (net, s, t)
}

/// Exposed for tests and the CLI's verify command: the flow network at `z`
/// whose maximum flow reaches `|A|` exactly when `z >= L(G)`.
pub fn bipartite_feasibility_network(g: &Graph, bip: &Bipartition, z: &Rational) -> FlowNetwork {
    bipartite_flow_network(g, &bip.side_a, z).0
}

/// Circulation network for the product formula at `z`: lower bounds
/// `1 - r z` on terminal arcs, capacity `z` on graph arcs, `t → s` capacity `|A|`.
pub fn product_circulation_network(
    g: &Graph,
    bip: &Bipartition,
    r: usize,
    z: &Rational,
) -> FlowNetwork {
    let n = g.vertex_count();
    let (s, t) = (n, n + 1);
    let in_a = bip.membership(n);
    let low = one() - int(r as i64) * z;
    let mut net = FlowNetwork::new(n + 2);
    for &a in &bip.side_a {
        net.add_arc(s, a, low.clone(), one()).unwrap();
    }
    for &(u, v) in g.edges() {
        let (a, b) = if in_a[u] { (u, v) } else { (v, u) };
        net.add_arc(a, b, zero(), z.clone()).unwrap();
    }
    for &b in &bip.side_b {
        net.add_arc(b, t, low.clone(), one()).unwrap();
    }
    net.add_arc(t, s, zero(), int(bip.side_a.len() as i64))
        .unwrap();
    net
}

/// How the closed-form minimum is located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    /// Exhaustive when `|A| + |B| <= subset_cap`, parametric otherwise.
    Auto,
    Exhaustive,
    Parametric,
}

fn use_exhaustive(search: Search, size: usize, limits: &Limits) -> bool {
    match search {
        Search::Auto => size <= limits.subset_cap,
        Search::Exhaustive => true,
        Search::Parametric => false,
    }
}

/// Closed-form `mp_f` of a bipartite graph with witness pair and optimal `ỹ`.
pub fn mpf_bipartite_formula(
    g: &Graph,
    bip: &Bipartition,
    limits: &Limits,
) -> Result<PreclusionReport> {
    mpf_bipartite_formula_with(g, bip, limits, Search::Auto)
}

pub fn mpf_bipartite_formula_with(
    g: &Graph,
    bip: &Bipartition,
    limits: &Limits,
    search: Search,
) -> Result<PreclusionReport> {
    check_bipartition(g, bip)?;
    require_even_nonempty(g)?;
    let s = sides(bip);
    let m = g.edge_count();
    let has_pm = bip.is_balanced() && {
        let mate = bipartite_max_matching(g, bip, &vec![true; m]);
        mate.iter().all(Option::is_some)
    };
    let mut report;
    if !has_pm {
        report = PreclusionReport::new(zero(), Method::BipartiteFormula);
        report.witness_xy = Some(hall_violator(g, &s));
        report.certificate_y = Some(vec![zero(); m]);
        return Ok(report);
    }
    let (x, y, value) = if use_exhaustive(search, g.vertex_count(), limits) {
        let best = exhaustive_min(g, s.small, s.large, 0);
        (
            local_to_global(best.x, s.small),
            local_to_global(best.y, s.large),
            frac(best.num as i64, best.den as i64),
        )
    } else {
        let feasible = |v: &Rational| {
            let (net, _, _) = bipartite_flow_network(g, s.small, &(one() / v));
            flows::max_flow(&net).unwrap().value == int(s.small.len() as i64)
        };
        let (value, above) =
            parametric_search(s.small.len() as u64, (m + 1) as u64, &one(), feasible);
        let (net, _, _) = bipartite_flow_network(g, s.small, &(one() / &above));
        let cut = flows::max_flow(&net)?;
        let mut in_r = vec![false; g.vertex_count() + 2];
        for &v in &cut.min_cut_side {
            in_r[v] = true;
        }
        let x: Vec<usize> = s.small.iter().copied().filter(|&v| in_r[v]).collect();
        let y: Vec<usize> = s.large.iter().copied().filter(|&v| !in_r[v]).collect();
        (x, y, value)
    };
    let (num, den) = pair_ratio(g, bip.side_a.len().min(bip.side_b.len()), &x, &y, 0);
    assert_eq!(
        frac(num as i64, den as i64),
        value,
        "witness attains the minimum"
    );

    let mut in_x = vec![false; g.vertex_count()];
    let mut in_y = vec![false; g.vertex_count()];
    x.iter().for_each(|&v| in_x[v] = true);
    y.iter().for_each(|&v| in_y[v] = true);
    let mut cert = vec![zero(); m];
    let weight = frac(1, den as i64);
    for e in g.edges_between(&in_x, &in_y) {
        cert[e] = weight.clone();
    }
    report = PreclusionReport::new(value, Method::BipartiteFormula);
    report.witness_xy = Some((x, y));
    report.certificate_y = Some(cert);
    Ok(report)
}

/// `(e(X,Y) + r·min(|X|,|Y|), |X|+|Y|-|A|)`; the denominator must be positive.
fn pair_ratio(g: &Graph, a_len: usize, x: &[usize], y: &[usize], r: usize) -> (u64, u64) {
    let n = g.vertex_count();
    let mut in_x = vec![false; n];
    let mut in_y = vec![false; n];
    x.iter().for_each(|&v| in_x[v] = true);
    y.iter().for_each(|&v| in_y[v] = true);
    let e = g.edges_between(&in_x, &in_y).len();
    assert!(x.len() + y.len() > a_len, "witness needs |X|+|Y| > |A|");
    (
        (e + r * x.len().min(y.len())) as u64,
        (x.len() + y.len() - a_len) as u64,
    )
}

/// `mp_f(G □ H)` for bipartite `G` with balanced sides and r-regular bipartite
/// `H`, by the closed form; the reduced LP on `G` with one shared vertex
/// variable per `G`-vertex is solved as a cross-check.
pub fn mpf_product_regular(
    g: &Graph,
    bip_g: &Bipartition,
    h: &Graph,
    limits: &Limits,
) -> Result<PreclusionReport> {
    mpf_product_regular_with(g, bip_g, h, limits, Search::Auto)
}

pub fn mpf_product_regular_with(
    g: &Graph,
    bip_g: &Bipartition,
    h: &Graph,
    limits: &Limits,
    search: Search,
) -> Result<PreclusionReport> {
    check_bipartition(g, bip_g)?;
    if bipartition(h).is_none() {
        return Err(Error::NotBipartite);
    }
    if !bip_g.is_balanced() {
        return Err(Error::UnbalancedSides(
            bip_g.side_a.len(),
            bip_g.side_b.len(),
        ));
    }
    let r = h.regular_degree().ok_or(Error::NotRegular)?;
    if h.vertex_count() == 0 || g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let a_len = bip_g.side_a.len();
    let (x, y, value) = if use_exhaustive(search, g.vertex_count(), limits) {
        let best = exhaustive_min(g, &bip_g.side_a, &bip_g.side_b, r as u64);
        (
            local_to_global(best.x, &bip_g.side_a),
            local_to_global(best.y, &bip_g.side_b),
            frac(best.num as i64, best.den as i64),
        )
    } else {
        let feasible = |v: &Rational| {
            let net = product_circulation_network(g, bip_g, r, &(one() / v));
            matches!(flows::feasible_circulation(&net), Circulation::Feasible(_))
        };
        if r == 0 {
            return Err(Error::NotRegularBipartite);
        }
        // z = 1/r admits the zero circulation
        let lo = int(r as i64);
        let (value, above) = parametric_search(
            a_len as u64,
            (g.edge_count() + r * a_len + 1) as u64,
            &lo,
            feasible,
        );
        let net = product_circulation_network(g, bip_g, r, &(one() / &above));
        let Circulation::Violation(rset) = flows::feasible_circulation(&net) else {
            unreachable!("candidate above the optimum is infeasible");
        };
        let (x, y) = violator_pair(g, bip_g, r, &rset);
        (x, y, value)
    };
    let (num, den) = pair_ratio(g, a_len, &x, &y, r);
    assert_eq!(
        frac(num as i64, den as i64),
        value,
        "witness attains the minimum"
    );

    let mut report = PreclusionReport::new(value, Method::ProductFormula);
    report.witness_xy = Some((x, y));
    let reduced = reduced_product_lp(g, r);
    let sol = lp::solve_lp(&reduced);
    let lp_value = if sol.is_optimal() && sol.value.is_positive() {
        one() / sol.value
    } else {
        zero()
    };
    report.cross_check.insert(Method::Blp, lp_value);
    Ok(report)
}

/// The pair read off a Hoffman violator `R`: its sides are `X = A \\ R` and
/// either `Y = B ∩ R` or `Y = B \\ R` depending on where the terminals fall;
/// the better of the two is returned.
fn violator_pair(
    g: &Graph,
    bip: &Bipartition,
    r: usize,
    rset: &[usize],
) -> (Vec<usize>, Vec<usize>) {
    let mut in_r = vec![false; g.vertex_count() + 2];
    for &v in rset {
        in_r[v] = true;
    }
    let x: Vec<usize> = bip.side_a.iter().copied().filter(|&v| !in_r[v]).collect();
    let a_len = bip.side_a.len();
    [true, false]
        .into_iter()
        .map(|inside| {
            let y: Vec<usize> = bip
                .side_b
                .iter()
                .copied()
                .filter(|&v| in_r[v] == inside)
                .collect();
            (x.clone(), y)
        })
        .filter(|(x, y)| x.len() + y.len() > a_len)
        .min_by(|p, q| {
            let (n1, d1) = pair_ratio(g, a_len, &p.0, &p.1, r);
            let (n2, d2) = pair_ratio(g, a_len, &q.0, &q.1, r);
            (n1 * d2).cmp(&(n2 * d1))
        })
        .expect("a violator yields a pair with positive denominator")
}

/// Variables `a_e` (edges of G), `h_v` (vertices of G), `z`: minimize `z`
/// with `z >= a_e`, `z >= h_v`, `M_G a + r h = 1`, `a, h >= 0`.
pub fn reduced_product_lp(g: &Graph, r: usize) -> LinearProgram {
    let m = g.edge_count();
    let n = g.vertex_count();
    let z = m + n;
    let mut lp = LinearProgram::new(m + n + 1, Sense::Minimize);
    lp.set_objective_coeff(z, one());
    for j in 0..m + n {
        lp.add_sparse_constraint(&[(z, one()), (j, -one())], Relation::Ge, zero());
    }
    for v in 0..n {
        let mut terms: Vec<_> = g.incident(v).iter().map(|&(_, e)| (e, one())).collect();
        terms.push((m + v, int(r as i64)));
        lp.add_sparse_constraint(&terms, Relation::Eq, one());
    }
    lp
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductBound {
    /// `mp_f(g □ h)` computed on the explicit product.
    pub lhs: Rational,
    /// `mp_f(g) + ⌊mp_f(h)⌋`.
    pub rhs: Rational,
    pub holds: bool,
    pub equality: bool,
}

/// Checks `mp_f(g □ h) >= mp_f(g) + ⌊mp_f(h)⌋` on the explicit product.
pub fn check_product_bound(g: &Graph, h: &Graph, limits: &Limits) -> Result<ProductBound> {
    let bip_g = bipartition(g).ok_or(Error::NotBipartite)?;
    let bip_h = bipartition(h).ok_or(Error::NotBipartite)?;
    let prod = graph::cartesian_product(g, h).graph;
    let bip_p = bipartition(&prod).expect("product of bipartite graphs is bipartite");
    let lhs = mpf_bipartite_formula(&prod, &bip_p, limits)?.value;
    let mpf_g = mpf_bipartite_formula(g, &bip_g, limits)?.value;
    let mpf_h = mpf_bipartite_formula(h, &bip_h, limits)?.value;
    let rhs = mpf_g + int(floor_to_usize(&mpf_h) as i64);
    Ok(ProductBound {
        holds: lhs >= rhs,
        equality: lhs == rhs,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KFactorCheck {
    pub floor_mpf: usize,
    pub max_k_factor: usize,
    pub agree: bool,
}

/// `⌊mp_f⌋` from the closed form against the largest k-factor found by flows.
pub fn kfactor_crosscheck(g: &Graph, bip: &Bipartition, limits: &Limits) -> Result<KFactorCheck> {
    let floor_mpf = floor_to_usize(&mpf_bipartite_formula(g, bip, limits)?.value);
    let max_k = flows::max_k_factor(g, bip)?;
    Ok(KFactorCheck {
        floor_mpf,
        max_k_factor: max_k,
        agree: floor_mpf == max_k,
    })
}

/// Pipelines applicable to `g`, in reporting order.
pub fn applicable_methods(g: &Graph) -> Vec<Method> {
    let mut methods = vec![Method::Enumeration, Method::CuttingPlane, Method::OddCutLp];
    if bipartition(g).is_some() {
        methods.extend([Method::BipartiteFormula, Method::Blp]);
    }
    methods
}

/// Runs one `mp_f` pipeline.
pub fn mpf_by(g: &Graph, method: Method, limits: &Limits) -> Result<PreclusionReport> {
    let bip = || bipartition(g).ok_or(Error::NotBipartite);
    match method {
        Method::Enumeration => mpf_enumerated(g, limits),
        Method::CuttingPlane => {
            if !matching::has_perfect_matching(g) {
                require_even_nonempty(g)?;
                return Ok(PreclusionReport::new(zero(), Method::CuttingPlane));
            }
            mpf_cutting_plane(g, limits)
        }
        Method::OddCutLp => {
            if !matching::has_perfect_matching(g) {
                require_even_nonempty(g)?;
                return Ok(PreclusionReport::new(zero(), Method::OddCutLp));
            }
            mpf_odd_cut_lp(g, limits)
        }
        Method::BipartiteFormula => mpf_bipartite_formula(g, &bip()?, limits),
        Method::Blp => {
            if !matching::has_perfect_matching(g) {
                require_even_nonempty(g)?;
                return Ok(PreclusionReport::new(zero(), Method::Blp));
            }
            mpf_bipartite_blp(g, &bip()?)
        }
        Method::ProductFormula | Method::HittingSearch => Err(Error::InvalidSpec(format!(
            "{method} is not a standalone mp_f pipeline"
        ))),
    }
}

/// Runs several pipelines (concurrently) and reports the first, with every
/// value recorded in `cross_check`.
pub fn mpf_cross_checked(
    g: &Graph,
    methods: &[Method],
    limits: &Limits,
) -> Result<PreclusionReport> {
    assert!(!methods.is_empty());
    let results: Vec<Result<PreclusionReport>> =
        methods.par_iter().map(|&m| mpf_by(g, m, limits)).collect();
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        reports.push(r?);
    }
    let mut primary = reports[0].clone();
    for rep in &reports {
        primary.cross_check.insert(rep.method, rep.value.clone());
    }
    for rep in &reports[1..] {
        if primary.witness_xy.is_none() {
            primary.witness_xy = rep.witness_xy.clone();
        }
    }
    Ok(primary)
}

/// Preferred pipeline order for `g`: the closed forms first when bipartite.
pub fn auto_methods(g: &Graph) -> Vec<Method> {
    if bipartition(g).is_some() {
        vec![
            Method::BipartiteFormula,
            Method::Blp,
            Method::Enumeration,
            Method::CuttingPlane,
            Method::OddCutLp,
        ]
    } else {
        vec![Method::Enumeration, Method::CuttingPlane, Method::OddCutLp]
    }
}

/// Every pipeline in [`auto_methods`] that stays within `limits`; pipelines
/// that hit a size cap are left out of the cross-check, other errors propagate.
pub fn mpf_auto(g: &Graph, limits: &Limits) -> Result<PreclusionReport> {
    let methods = auto_methods(g);
    let results: Vec<Result<PreclusionReport>> =
        methods.par_iter().map(|&m| mpf_by(g, m, limits)).collect();
    let mut reports = Vec::new();
    let mut cap_error = None;
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e @ (Error::CapExceeded { .. } | Error::SizeCapExceeded { .. })) => {
                cap_error.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    let Some(first) = reports.first() else {
        return Err(cap_error.expect("at least one pipeline ran"));
    };
    let mut primary = first.clone();
    for rep in &reports {
        primary.cross_check.insert(rep.method, rep.value.clone());
    }
    Ok(primary)
}

/// `mp` by the 0-1 program and by hitting search, cross-checked.
pub fn mp_cross_checked(g: &Graph, limits: &Limits) -> Result<PreclusionReport> {
    let (ilp, search) = rayon::join(|| mp(g, limits), || mp_hitting_search(g));
    let mut report = ilp?;
    let search = search?;
    report
        .cross_check
        .insert(Method::Enumeration, report.value.clone());
    report
        .cross_check
        .insert(Method::HittingSearch, search.value);
    Ok(report)
}

/// `true` when `y` satisfies every covering constraint and sums to `value`.
pub fn certificate_is_valid(matchings: &MatchingSet, y: &[Rational], value: &Rational) -> bool {
    matching::fmp_satisfied(matchings, y) && &sum(y) == value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_bipartite, cycle, gen_gk, path};

    fn lim() -> Limits {
        Limits::default()
    }

    fn k4() -> Graph {
        Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn two_triangles() -> Graph {
        Graph::new(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn mask_lex_order() {
        // {0} < {0,2} < {1}
        assert!(mask_lex_less(0b001, 0b101));
        assert!(mask_lex_less(0b101, 0b010));
        assert!(!mask_lex_less(0b010, 0b101));
        assert!(mask_lex_less(0b000, 0b001));
        assert!(!mask_lex_less(0b011, 0b011));
        // {0,1} < {0,2}
        assert!(mask_lex_less(0b011, 0b101));
    }

    #[test]
    fn mp_examples() {
        assert_eq!(mp(&path(4).unwrap(), &lim()).unwrap().value, int(1));
        let none = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = mp(&none, &lim()).unwrap();
        assert_eq!(r.value, int(0));
        assert_eq!(r.preclusion_set, Some(vec![]));
        assert!(matches!(
            mp(&path(3).unwrap(), &lim()),
            Err(Error::OddOrder(3))
        ));
        let k2 = path(2).unwrap();
        assert_eq!(mp(&k2, &lim()).unwrap().value, int(1));
        assert_eq!(mp(&cycle(4).unwrap(), &lim()).unwrap().value, int(2));
    }

    #[test]
    fn hitting_search_matches_ilp() {
        for g in [
            k4(),
            two_triangles(),
            cycle(6).unwrap(),
            gen_gk(1).unwrap().graph,
        ] {
            assert_eq!(
                mp_hitting_search(&g).unwrap().value,
                mp(&g, &lim()).unwrap().value
            );
        }
    }

    #[test]
    fn mpf_small_examples() {
        assert_eq!(mpf_enumerated(&k4(), &lim()).unwrap().value, int(3));
        let run = mpf_cutting_plane_with(
            &cycle(4).unwrap(),
            &EnumerationOracle::new(&cycle(4).unwrap(), 10).unwrap(),
        )
        .unwrap();
        assert_eq!(run.report.value, int(2));
        assert!(run.rounds <= 2);
        assert_eq!(
            mpf_cutting_plane(&cycle(6).unwrap(), &lim()).unwrap().value,
            int(2)
        );
        assert_eq!(mpf_cutting_plane(&k4(), &lim()).unwrap().value, int(3));
        let none = Graph::new(4, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(mpf_enumerated(&none, &lim()).unwrap().value, int(0));
        assert!(matches!(
            mpf_cutting_plane(&none, &lim()),
            Err(Error::NoPerfectMatching)
        ));
    }

    #[test]
    fn l_of_g_examples() {
        let r = l_of_g(&k4(), &lim()).unwrap();
        assert_eq!(r.l, frac(1, 3));
        assert_eq!(r.b, vec![frac(1, 3); 6]);
        let r = l_of_g(&two_triangles(), &lim()).unwrap();
        assert_eq!(r.l, int(1));
        assert_eq!(l_of_g(&cycle(6).unwrap(), &lim()).unwrap().l, frac(1, 2));
        let loose = l_of_g_with(&two_triangles(), &lim(), OddCuts::Omit).unwrap();
        assert_eq!(loose.l, frac(1, 2));
        let eager = l_of_g_with(&two_triangles(), &lim(), OddCuts::All).unwrap();
        assert_eq!(eager.l, int(1));
        assert_eq!(eager.odd_cut_rows, 10);
    }

    #[test]
    fn formula_examples() {
        let p4 = path(4).unwrap();
        let r = mpf_bipartite_formula(&p4, &bipartition(&p4).unwrap(), &lim()).unwrap();
        assert_eq!(r.value, int(1));
        assert_eq!(r.witness_xy, Some((vec![0], vec![1, 3])));

        let k22 = complete_bipartite(2, 2).unwrap();
        let b = bipartition(&k22).unwrap();
        assert_eq!(mpf_bipartite_blp(&k22, &b).unwrap().value, int(2));
    }

    #[test]
    fn parametric_matches_exhaustive() {
        let graphs = [
            path(4).unwrap(),
            cycle(6).unwrap(),
            gen_gk(2).unwrap().graph,
            complete_bipartite(3, 3).unwrap(),
        ];
        for g in graphs {
            let b = bipartition(&g).unwrap();
            let ex = mpf_bipartite_formula_with(&g, &b, &lim(), Search::Exhaustive).unwrap();
            let pa = mpf_bipartite_formula_with(&g, &b, &lim(), Search::Parametric).unwrap();
            assert_eq!(ex.value, pa.value);
        }
    }

    #[test]
    fn hall_witness_for_unmatchable() {
        // 0-1, 0-3, vertex 2 isolated
        let g = Graph::new(4, &[(0, 1), (0, 3)]).unwrap();
        let b = bipartition(&g).unwrap();
        let r = mpf_bipartite_formula(&g, &b, &lim()).unwrap();
        assert_eq!(r.value, int(0));
        let (x, y) = r.witness_xy.unwrap();
        let (num, den) = pair_ratio(&g, 2, &x, &y, 0);
        assert_eq!(num, 0);
        assert!(den > 0);
    }

    #[test]
    fn product_examples() {
        let k2 = path(2).unwrap();
        let k22 = complete_bipartite(2, 2).unwrap();
        let r = mpf_product_regular(&k22, &bipartition(&k22).unwrap(), &k2, &lim()).unwrap();
        assert_eq!(r.value, int(3));
        assert!(r.agrees());
        let p4 = path(4).unwrap();
        let r = mpf_product_regular(&p4, &bipartition(&p4).unwrap(), &k2, &lim()).unwrap();
        assert_eq!(r.value, int(2));
        assert_eq!(r.witness_xy, Some((vec![0], vec![1, 3])));
        let c4 = cycle(4).unwrap();
        let r = mpf_product_regular(&c4, &bipartition(&c4).unwrap(), &cycle(6).unwrap(), &lim())
            .unwrap();
        assert_eq!(r.value, int(4));
        assert!(r.agrees());
    }

    #[test]
    fn product_errors() {
        let p3 = path(3).unwrap();
        let k2 = path(2).unwrap();
        assert!(matches!(
            mpf_product_regular(&p3, &bipartition(&p3).unwrap(), &k2, &lim()),
            Err(Error::UnbalancedSides(2, 1))
        ));
        let p4 = path(4).unwrap();
        assert!(matches!(
            mpf_product_regular(&p4, &bipartition(&p4).unwrap(), &p4, &lim()),
            Err(Error::NotRegular)
        ));
        assert!(matches!(
            mpf_product_regular(&p4, &bipartition(&p4).unwrap(), &cycle(3).unwrap(), &lim()),
            Err(Error::NotBipartite)
        ));
    }

    #[test]
    fn product_bound_examples() {
        let k2 = path(2).unwrap();
        let b = check_product_bound(&k2, &k2, &lim()).unwrap();
        assert_eq!(
            (b.lhs.clone(), b.rhs.clone(), b.equality),
            (int(2), int(2), true)
        );
        let b = check_product_bound(&path(4).unwrap(), &k2, &lim()).unwrap();
        assert_eq!((b.lhs, b.rhs), (int(2), int(2)));
    }

    #[test]
    fn kfactor_examples() {
        let g2 = gen_gk(2).unwrap().graph;
        let c = kfactor_crosscheck(&g2, &bipartition(&g2).unwrap(), &lim()).unwrap();
        assert_eq!(
            c,
            KFactorCheck {
                floor_mpf: 2,
                max_k_factor: 2,
                agree: true
            }
        );
    }
}
