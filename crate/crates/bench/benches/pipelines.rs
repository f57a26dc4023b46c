use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use preclude_core::flows::max_flow;
use preclude_core::generators::{complete_bipartite, gen_gk};
use preclude_core::graph::bipartition;
use preclude_core::lp::{solve_lp, LinearProgram, Relation, Sense};
use preclude_core::preclusion::{
    bipartite_feasibility_network, mp, mp_hitting_search, mpf_bipartite_blp, mpf_bipartite_formula,
    mpf_cutting_plane, mpf_enumerated, mpf_odd_cut_lp, Limits,
};
use preclude_core::rational::{frac, int};

/// Dense covering LP: minimize the sum of x subject to `n` rows of mixed coefficients.
fn covering_lp(n: usize) -> LinearProgram {
    let mut lp = LinearProgram::new(n, Sense::Minimize);
    lp.set_objective(vec![int(1); n]);
    for i in 0..n {
        let row = (0..n).map(|j| int(((i * 7 + j * 3) % 5) as i64)).collect();
        lp.add_constraint(row, Relation::Ge, int(1 + (i % 3) as i64));
    }
    lp
}

fn simplex(c: &mut Criterion) {
    let mut group = c.benchmark_group("simplex");
    for n in [5, 10, 20] {
        let lp = covering_lp(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &lp, |b, lp| {
            b.iter(|| solve_lp(black_box(lp)))
        });
    }
    group.finish();
}

fn flows(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_flow");
    for n in [4, 8, 12] {
        let g = complete_bipartite(n, n).unwrap();
        let net = bipartite_feasibility_network(&g, &bipartition(&g).unwrap(), &frac(1, n as i64));
        group.bench_with_input(BenchmarkId::new("K_nn", n), &net, |b, net| {
            b.iter(|| max_flow(black_box(net)).unwrap())
        });
    }
    group.finish();
}

fn pipelines(c: &mut Criterion) {
    let lim = Limits::default();
    let mut group = c.benchmark_group("mpf_gk");
    group.sample_size(10);
    for k in [1, 2, 3] {
        let g = gen_gk(k).unwrap().graph;
        let bip = bipartition(&g).unwrap();
        group.bench_with_input(BenchmarkId::new("enumeration", k), &g, |b, g| {
            b.iter(|| mpf_enumerated(g, &lim).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cutting_plane", k), &g, |b, g| {
            b.iter(|| mpf_cutting_plane(g, &lim).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("odd_cut_lp", k), &g, |b, g| {
            b.iter(|| mpf_odd_cut_lp(g, &lim).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bipartite_formula", k), &g, |b, g| {
            b.iter(|| mpf_bipartite_formula(g, &bip, &lim).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("blp", k), &g, |b, g| {
            b.iter(|| mpf_bipartite_blp(g, &bip).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("mp_gk");
    group.sample_size(10);
    for k in [1, 2, 3] {
        let g = gen_gk(k).unwrap().graph;
        group.bench_with_input(BenchmarkId::new("branch_and_bound", k), &g, |b, g| {
            b.iter(|| mp(g, &lim).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("hitting_search", k), &g, |b, g| {
            b.iter(|| mp_hitting_search(g).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, simplex, flows, pipelines);
criterion_main!(benches);
