use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dirflow_bench::{matching_loop, random_assignment, random_graph, random_state};
use dirflow_core::assignment::{solve_brute_force, solve_hungarian};
use dirflow_core::controller::{g_bar_closed_form, ClosedLoop};
use dirflow_core::graph::{maximal_cliques, proximity_graph};

fn cliques(c: &mut Criterion) {
    let mut group = c.benchmark_group("maximal_cliques");
    for n in [10, 20, 40] {
        let g = random_graph(n as u64, n, 0.3);
        group.bench_with_input(BenchmarkId::new("gnp_0.3", n), &g, |b, g| b.iter(|| maximal_cliques(black_box(g))));
    }
    let x = random_state(7, 20, 3.0);
    group.bench_function("proximity_20_agents", |b| b.iter(|| maximal_cliques(&proximity_graph(black_box(&x), 1.5))));
    group.finish();
}

fn assignment(c: &mut Criterion) {
    let mut group = c.benchmark_group("assignment");
    for m in [5, 10, 50] {
        let p = random_assignment(m as u64, m, m + 2);
        group.bench_with_input(BenchmarkId::new("hungarian", m), &p, |b, p| b.iter(|| solve_hungarian(black_box(p))));
    }
    let p = random_assignment(1, 6, 8);
    group.bench_function("brute_force_6x8", |b| b.iter(|| solve_brute_force(black_box(&p))));
    group.finish();
}

fn projection(c: &mut Criterion) {
    let a = [0.3, -1.2];
    let bvec = [-0.9, 0.4];
    c.bench_function("g_bar_closed_form", |b| b.iter(|| g_bar_closed_form(black_box(&a), black_box(&bvec), 1.2, 0.6)));
}

fn matching_control(c: &mut Criterion) {
    let mut group = c.benchmark_group("matching_control");
    for n in [10, 20, 40] {
        let lp = matching_loop(n);
        let x = random_state(n as u64, n, 4.0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| b.iter(|| lp.control(black_box(x))));
    }
    group.finish();
}

criterion_group!(benches, cliques, assignment, projection, matching_control);
criterion_main!(benches);
