//! Microbenchmarks of the analytic kernels and the grid oracle.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dkv::grid::Grid;
use dkv::oracle::{build_hamiltonian, Scheme};
use dkv::spectrum::{enumerate_levels, level, select_physical_root, CubicTriple};
use dkv::wavefunction::psi_eval;
use dkv::DkvForm;
use dkv_bench::{deep_well, reference};

fn bench_cubic(c: &mut Criterion) {
    let p = reference();
    c.bench_function("cubic_build_and_select", |b| {
        b.iter(|| {
            let triple = CubicTriple::build(black_box(&p), black_box(0));
            select_physical_root(&triple)
        })
    });
}

fn bench_enumerate(c: &mut Criterion) {
    let deep = deep_well();
    c.bench_function("enumerate_levels_deep_well", |b| {
        b.iter(|| enumerate_levels(black_box(&deep), 24))
    });
}

fn bench_sturm(c: &mut Criterion) {
    let p = reference();
    let grid = Grid::new(-15.0, 40.0, 0.01).expect("valid grid");
    let ham = build_hamiltonian(|x| DkvForm::First.eval(&p, x), &grid, Scheme::Numerov)
        .expect("bounded potential");
    let edge = p.continuum_edge();
    c.bench_function("sturm_count_5501_points", |b| {
        b.iter(|| ham.count_below(black_box(edge)).expect("finite pivots"))
    });
}

fn bench_psi(c: &mut Criterion) {
    let p = dkv::DkvParams::new(135.0, 200.0).expect("valid strengths");
    let state = level(&p, 1).expect("level exists");
    c.bench_function("wavefunction_eval", |b| {
        b.iter(|| psi_eval(black_box(&state), black_box(0.75)))
    });
}

criterion_group!(kernels, bench_cubic, bench_enumerate, bench_sturm, bench_psi);
criterion_main!(kernels);
