//! Brute-force oracles, written independently of the library's algorithms.
#![allow(dead_code)]

use num_traits::{Signed, Zero};
use preclude_core::flows::FlowNetwork;
use preclude_core::graph::{Bipartition, Graph};
use preclude_core::lp::{LinearProgram, Relation, Sense};
use preclude_core::rational::{frac, int, one, zero, Rational};

/// Number of perfect matchings of a bipartite graph as the permanent of its
/// biadjacency matrix, by expansion along the first row.
pub fn permanent_count(g: &Graph, bip: &Bipartition) -> u64 {
    if bip.side_a.len() != bip.side_b.len() {
        return 0;
    }
    let m: Vec<Vec<bool>> = bip
        .side_a
        .iter()
        .map(|&a| bip.side_b.iter().map(|&b| g.has_edge(a, b)).collect())
        .collect();
    fn go(m: &[Vec<bool>], row: usize, used: u32) -> u64 {
        if row == m.len() {
            return 1;
        }
        (0..m.len())
            .filter(|&c| m[row][c] && used & (1 << c) == 0)
            .map(|c| go(m, row + 1, used | (1 << c)))
            .sum()
    }
    go(&m, 0, 0)
}

/// Perfect matchings of a general graph counted over all edge subsets of
/// size n/2 (small graphs only).
pub fn subset_matching_count(g: &Graph) -> u64 {
    let n = g.vertex_count();
    let m = g.edge_count();
    assert!(m <= 24);
    (0u32..(1 << m))
        .filter(|s| s.count_ones() as usize * 2 == n)
        .filter(|&s| {
            let mut cover = 0u64;
            for e in 0..m {
                if s >> e & 1 == 1 {
                    let (u, v) = g.edge(e);
                    if cover >> u & 1 == 1 || cover >> v & 1 == 1 {
                        return false;
                    }
                    cover |= (1 << u) | (1 << v);
                }
            }
            true
        })
        .count() as u64
}

/// Whether `keep` (edge mask) leaves a perfect matching.
fn has_pm_within(g: &Graph, keep: u32) -> bool {
    fn go(g: &Graph, keep: u32, covered: u64) -> bool {
        let n = g.vertex_count();
        let Some(v) = (0..n).find(|&v| covered >> v & 1 == 0) else {
            return true;
        };
        g.incident(v).iter().any(|&(w, e)| {
            keep >> e & 1 == 1 && covered >> w & 1 == 0 && go(g, keep, covered | 1 << v | 1 << w)
        })
    }
    go(g, keep, 0)
}

/// Smallest number of edges whose removal destroys every perfect matching.
pub fn brute_force_mp(g: &Graph) -> usize {
    let m = g.edge_count();
    assert!(m <= 20);
    let full = ((1u64 << m) - 1) as u32;
    (0..=m)
        .find(|&k| {
            (0u32..(1 << m))
                .filter(|s| s.count_ones() as usize == k)
                .any(|s| !has_pm_within(g, full & !s))
        })
        .unwrap()
}

/// Spanning subgraph with prescribed degrees, by trying every edge subset.
pub fn brute_force_f_factor(g: &Graph, f: &[usize]) -> bool {
    let m = g.edge_count();
    assert!(m <= 20);
    (0u32..(1 << m)).any(|s| {
        let mut deg = vec![0usize; g.vertex_count()];
        for e in 0..m {
            if s >> e & 1 == 1 {
                let (u, v) = g.edge(e);
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        deg == f
    })
}

/// Hoffman's condition checked over every node subset: each arc has
/// `lower <= capacity` and no set must push out more than it can take in.
pub fn hoffman_feasible(net: &FlowNetwork) -> bool {
    let n = net.node_count();
    assert!(n <= 16);
    if net.arcs().iter().any(|a| a.lower > a.capacity) {
        return false;
    }
    (0u32..(1 << n)).all(|s| {
        let inside = |v: usize| s >> v & 1 == 1;
        let mut cap_in = zero();
        let mut low_out = zero();
        for a in net.arcs() {
            if !inside(a.tail) && inside(a.head) {
                cap_in += &a.capacity;
            }
            if inside(a.tail) && !inside(a.head) {
                low_out += &a.lower;
            }
        }
        low_out <= cap_in
    })
}

/// Minimum capacity over every source/sink node partition.
pub fn brute_force_min_cut(net: &FlowNetwork) -> Rational {
    let n = net.node_count();
    let (s, t) = (net.source.unwrap(), net.sink.unwrap());
    (0u32..(1 << n))
        .filter(|m| m >> s & 1 == 1 && m >> t & 1 == 0)
        .map(|m| {
            net.arcs()
                .iter()
                .filter(|a| m >> a.tail & 1 == 1 && m >> a.head & 1 == 0)
                .fold(zero(), |acc, a| acc + &a.capacity)
        })
        .min()
        .unwrap()
}

/// Closed-form minimum over all pairs, in plain rationals.
pub fn brute_force_formula(g: &Graph, bip: &Bipartition, r: usize) -> Option<Rational> {
    let (a, b) = (&bip.side_a, &bip.side_b);
    let mut best: Option<Rational> = None;
    for xm in 0u32..(1 << a.len()) {
        for ym in 0u32..(1 << b.len()) {
            let x: Vec<usize> = (0..a.len())
                .filter(|i| xm >> i & 1 == 1)
                .map(|i| a[i])
                .collect();
            let y: Vec<usize> = (0..b.len())
                .filter(|i| ym >> i & 1 == 1)
                .map(|i| b[i])
                .collect();
            let d = x.len() as i64 + y.len() as i64 - a.len() as i64;
            if d <= 0 {
                continue;
            }
            let e = x
                .iter()
                .flat_map(|&u| y.iter().map(move |&v| (u, v)))
                .filter(|&(u, v)| g.has_edge(u, v))
                .count();
            let v = frac((e + r * x.len().min(y.len())) as i64, d);
            if best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
        }
    }
    best
}

/// Solves `A x = b` (square) by Gauss-Jordan elimination; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        b[col] = &b[col] / &p;
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

/// Optimum of a bounded LP by visiting every basic solution: each choice of
/// `n` tight rows (constraints and finite bounds). `None` when infeasible.
pub fn vertex_enumeration(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<Rational>, Rational)> = lp
        .constraints()
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    for v in 0..n {
        let mut unit = vec![zero(); n];
        unit[v] = one();
        rows.push((unit.clone(), lp.lower_bounds()[v].clone()));
        if let Some(u) = &lp.upper_bounds()[v] {
            rows.push((unit, u.clone()));
        }
    }
    let feasible = |x: &[Rational]| {
        lp.constraints().iter().all(|c| c.is_satisfied_by(x))
            && (0..n).all(|v| {
                x[v] >= lp.lower_bounds()[v]
                    && lp.upper_bounds()[v].as_ref().is_none_or(|u| &x[v] <= u)
            })
    };
    let mut best: Option<Rational> = None;
    let mut choose = Vec::new();
    fn combos(
        k: usize,
        start: usize,
        total: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..total {
            acc.push(i);
            combos(k, i + 1, total, acc, out);
            acc.pop();
        }
    }
    let mut all = Vec::new();
    combos(n, 0, rows.len(), &mut choose, &mut all);
    for pick in all {
        let a: Vec<_> = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<_> = pick.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let v = lp.objective_value(&x);
                let better = match (&best, lp.sense()) {
                    (None, _) => true,
                    (Some(b), Sense::Minimize) => &v < b,
                    (Some(b), Sense::Maximize) => &v > b,
                };
                if better {
                    best = Some(v);
                }
            }
        }
    }
    best
}

/// Builds an LP from small integer data with every variable in `[0, ub]`.
pub fn small_lp(
    sense: Sense,
    objective: &[i64],
    rows: &[(Vec<i64>, Relation, i64)],
    ub: i64,
) -> LinearProgram {
    let n = objective.len();
    let mut lp = LinearProgram::new(n, sense);
    lp.set_objective(objective.iter().map(|&c| int(c)).collect());
    for (coeffs, rel, rhs) in rows {
        lp.add_constraint(coeffs.iter().map(|&c| int(c)).collect(), *rel, int(*rhs));
    }
    for v in 0..n {
        lp.set_bounds(v, zero(), Some(int(ub)));
    }
    lp
}

pub fn nonnegative(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
