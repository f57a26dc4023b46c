//! Cross-pipeline verification over a corpus of small connected graphs.

use num_traits::Signed;
use rayon::prelude::*;

use crate::flows::max_flow;
use crate::generators::{gen_family, Family, FamilySpec};
use crate::graph::{bipartition, cartesian_product, Bipartition, Graph};
use crate::matching::enumerate_perfect_matchings;
use crate::preclusion::{
    applicable_methods, bipartite_feasibility_network, certificate_is_valid, kfactor_crosscheck,
    mp, mp_hitting_search, mpf_bipartite_formula, mpf_by, mpf_product_regular, Limits,
};
use crate::rational::{display, frac, int, one};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest order in the corpus; orders up to 6 are exhaustive.
    pub max_n: usize,
    /// Random connected graphs drawn for each even order above 6.
    pub sample: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_n: 8,
            sample: 150,
            seed: 1,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub graph: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub graphs: usize,
    pub bipartite: usize,
    pub findings: Vec<Finding>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

const EXHAUSTIVE_MAX_N: usize = 6;

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

/// Smallest edge bitmask over all relabelings.
fn canonical_mask(mask: u64, pair_maps: &[Vec<u8>]) -> u64 {
    pair_maps
        .iter()
        .map(|map| {
            let mut out = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                out |= 1 << map[i];
                rest &= rest - 1;
            }
            out
        })
        .min()
        .unwrap()
}

fn pair_maps(n: usize) -> Vec<Vec<u8>> {
    let pairs = pair_index(n);
    let pos = |u: usize, v: usize| {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        pairs.iter().position(|&p| p == (u, v)).unwrap() as u8
    };
    permutations(n)
        .into_iter()
        .map(|p| pairs.iter().map(|&(u, v)| pos(p[u], p[v])).collect())
        .collect()
}

fn mask_graph(n: usize, mask: u64) -> Graph {
    let pairs: Vec<_> = pair_index(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| (mask >> i) & 1 == 1)
        .map(|(_, p)| p)
        .collect();
    Graph::new(n, &pairs).expect("pairs are distinct and in range")
}

fn graph_mask(g: &Graph) -> u64 {
    let pairs = pair_index(g.vertex_count());
    g.edges()
        .iter()
        .map(|p| pairs.iter().position(|q| q == p).unwrap())
        .fold(0, |m, i| m | (1 << i))
}

/// Every connected graph of order `n` up to isomorphism, by canonical mask.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "exhaustive generation is limited to order 7");
    let maps = pair_maps(n);
    let total = pair_index(n).len();
    let mut canon: Vec<u64> = (0u64..(1 << total))
        .into_par_iter()
        .filter_map(|mask| {
            let c = canonical_mask(mask, &maps);
            (c == mask && mask_graph(n, mask).is_connected()).then_some(mask)
        })
        .collect();
    canon.sort_unstable();
    canon.into_iter().map(|m| mask_graph(n, m)).collect()
}

/// Exhaustive connected graphs of even order up to 6, then seeded random
/// connected graphs of each larger even order, deduplicated up to isomorphism.
pub fn corpus(opts: &VerifyOptions) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in (2..=opts.max_n.min(EXHAUSTIVE_MAX_N)).step_by(2) {
        out.extend(connected_graphs(n));
    }
    for n in (EXHAUSTIVE_MAX_N + 2..=opts.max_n).step_by(2) {
        let maps = (n <= 8).then(|| pair_maps(n));
        let mut seen = std::collections::BTreeSet::new();
        let mut drawn = 0;
        let mut seed = opts.seed;
        while drawn < opts.sample && seed < opts.seed + 100 * opts.sample as u64 + 100 {
            let spec = FamilySpec::new(Family::RandomConnected, vec![n, 35], Some(seed));
            seed += 1;
            let g = gen_family(&spec).expect("valid spec");
            let key = match &maps {
                Some(maps) => canonical_mask(graph_mask(&g), maps),
                None => graph_mask(&g),
            };
            if seen.insert(key) {
                out.push(g);
                drawn += 1;
            }
        }
    }
    out
}

pub fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("n={} [{}]", g.vertex_count(), edges.join(" "))
}

/// Disagreements found on one graph.
pub fn verify_graph(g: &Graph, limits: &Limits) -> Vec<String> {
    let mut problems = Vec::new();
    let mut values = Vec::new();
    for method in applicable_methods(g) {
        match mpf_by(g, method, limits) {
            Ok(r) => values.push((method, r)),
            Err(e) => problems.push(format!("{method} failed: {e}")),
        }
    }
    if let Some((_, first)) = values.first() {
        for (method, r) in &values[1..] {
            if r.value != first.value {
                problems.push(format!(
                    "{method} gives {} but {} gives {}",
                    display(&r.value),
                    values[0].0,
                    display(&first.value)
                ));
            }
        }
    }
    let matchings = enumerate_perfect_matchings(g, limits.matching_cap);
    for (method, r) in &values {
        if let (Some(y), Ok(ms)) = (&r.certificate_y, &matchings) {
            if !certificate_is_valid(ms, y, &r.value) {
                problems.push(format!("{method} certificate is not optimal-feasible"));
            }
        }
    }
    match (mp(g, limits), mp_hitting_search(g)) {
        (Ok(a), Ok(b)) => {
            if a.value != b.value {
                problems.push(format!(
                    "mp: 0-1 program gives {} but hitting search gives {}",
                    display(&a.value),
                    display(&b.value)
                ));
            }
            if let Some((_, f)) = values.first() {
                if f.value > a.value {
                    problems.push("fractional value exceeds mp".to_string());
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => problems.push(format!("mp failed: {e}")),
    }
    if let Some(bip) = bipartition(g) {
        problems.extend(flow_checks(g, &bip, limits));
        match kfactor_crosscheck(g, &bip, limits) {
            Ok(c) if !c.agree => problems.push(format!(
                "floor(mp_f) = {} but largest k-factor is {}",
                c.floor_mpf, c.max_k_factor
            )),
            Ok(_) => {}
            Err(e) => problems.push(format!("k-factor check failed: {e}")),
        }
    }
    problems
}

/// Flow-side invariants on a bipartite graph: the feasibility network at
/// `z = L(G)` saturates the source arcs, max-flow values equal the returned
/// cut capacities, and for balanced sides the product formula with `K_2`
/// matches the explicitly built product.
fn flow_checks(g: &Graph, bip: &Bipartition, limits: &Limits) -> Vec<String> {
    let mut problems = Vec::new();
    let Ok(formula) = mpf_bipartite_formula(g, bip, limits) else {
        return vec!["bipartite formula failed".into()];
    };
    if formula.value.is_positive() {
        let l = one() / &formula.value;
        for (z, saturates) in [(l.clone(), true), (&l * frac(1, 2), false)] {
            let net = bipartite_feasibility_network(g, bip, &z);
            let Ok(mf) = max_flow(&net) else {
                problems.push("max flow failed".into());
                continue;
            };
            let mut side = vec![false; net.node_count()];
            mf.min_cut_side.iter().for_each(|&v| side[v] = true);
            if mf.value != net.cut_capacity(&side) {
                problems.push(format!(
                    "flow value {} differs from its cut",
                    display(&mf.value)
                ));
            }
            if (mf.value == int(bip.side_a.len() as i64)) != saturates {
                problems.push(format!("feasibility at z = {} is wrong", display(&z)));
            }
        }
    }
    if bip.is_balanced() {
        let k2 = Graph::new(2, &[(0, 1)]).expect("K_2");
        let prod = cartesian_product(g, &k2).graph;
        let direct = bipartition(&prod).map(|b| mpf_bipartite_formula(&prod, &b, limits));
        match (mpf_product_regular(g, bip, &k2, limits), direct) {
            (Ok(f), Some(Ok(d))) if f.value == d.value && f.agrees() => {}
            (Ok(f), Some(Ok(d))) => problems.push(format!(
                "product formula with K_2 gives {} but the product has {}",
                display(&f.value),
                display(&d.value)
            )),
            _ => problems.push("product formula with K_2 failed".into()),
        }
    }
    problems
}

/// Verifies every graph in the corpus (in parallel, reported in corpus order).
pub fn run_verify(opts: &VerifyOptions) -> VerifyReport {
    let graphs = corpus(opts);
    let findings: Vec<Finding> = graphs
        .par_iter()
        .map(|g| {
            verify_graph(g, &opts.limits)
                .into_iter()
                .map(|message| Finding {
                    graph: describe(g),
                    message,
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    VerifyReport {
        graphs: graphs.len(),
        bipartite: graphs.iter().filter(|g| bipartition(g).is_some()).count(),
        findings,
    }
}
