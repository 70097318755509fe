use criterion::{criterion_group, criterion_main, Criterion};

use g2bvp_core::exterior::Basis;
use g2bvp_core::g2::{phi_std, G2Point};
use g2bvp_core::scalar::{Rat, Scalar};
use g2bvp_core::spectral::kernel::scan_spectrum;
use g2bvp_core::spectral::mode::assemble_mode;
use g2bvp_core::spectral::nonlinear::torsion_residual;
use g2bvp_core::spectral::rng::FieldSampler;
use g2bvp_core::symbol::p_tilde_symbol;

fn bench_induce(c: &mut Criterion) {
    let basis = Basis::standard7();
    let phi_exact = phi_std::<Rat>(&basis);
    let phi_float = phi_std::<f64>(&basis);
    c.bench_function("induce_exact", |b| {
        b.iter(|| G2Point::induce(&phi_exact).unwrap())
    });
    c.bench_function("induce_float", |b| {
        b.iter(|| G2Point::induce(&phi_float).unwrap())
    });
}

fn bench_symbol(c: &mut Criterion) {
    let mut xi = vec![Rat::from_int(0); 6];
    xi[0] = Rat::new(3, 5);
    xi[3] = Rat::new(4, 5);
    c.bench_function("ptilde_symbol_exact", |b| {
        b.iter(|| p_tilde_symbol(&xi).unwrap())
    });
}

fn bench_mode_spectrum(c: &mut Criterion) {
    let k = vec![1, 0, -1, 0, 2, 0];
    c.bench_function("mode_spectrum_nt200", |b| {
        b.iter(|| {
            assemble_mode(&k, 1.0, 200)
                .unwrap()
                .spectrum()
                .unwrap()
        })
    });
    c.bench_function("scan_k2_nt100", |b| {
        b.iter(|| scan_spectrum(1.0, 2, 100, 1e6).unwrap())
    });
}

fn bench_torsion(c: &mut Criterion) {
    let mut sampler = FieldSampler::new(2024);
    let raw = sampler.random_real_field(7, 2, 2, &[0, 3], 6);
    let alpha = raw.scale(0.01 / raw.norm());
    c.bench_function("torsion_residual_32", |b| {
        b.iter(|| torsion_residual(&alpha, 32).unwrap())
    });
}

criterion_group!(benches, bench_induce, bench_symbol, bench_mode_spectrum, bench_torsion);
criterion_main!(benches);
