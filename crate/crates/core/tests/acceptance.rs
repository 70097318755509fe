//! Acceptance suite: one test per verified claim, with the tolerances
//! pinned in code and one printed pass line each. Runtime bounds are
//! asserted where the claim includes one.

use std::time::Instant;

use g2bvp_core::report::Verdict;
use g2bvp_core::scalar::Rat;
use g2bvp_core::spectral::kernel::{modes_in_ball, predict_slab_kernel, scan_spectrum, total_kernel};
use g2bvp_core::spectral::mode::assemble_mode;
use g2bvp_core::suites::{algebra_suite, spectral_suite, symbol_suite, SuiteConfig};
use rayon::prelude::*;

fn require(verdicts: &[Verdict], ids: &[&str]) {
    for id in ids {
        let v = verdicts
            .iter()
            .find(|v| &v.id == id)
            .unwrap_or_else(|| panic!("missing verdict {}", id));
        assert!(
            v.pass,
            "{}: measured {} exceeds tolerance {}",
            v.id, v.measured, v.tolerance
        );
    }
}

fn report(name: &str, detail: String) {
    println!("criterion {name}: PASS ({detail})");
}

#[test]
fn criterion_01_symbol_certificate() {
    let start = Instant::now();
    let mut cfg = SuiteConfig::default();
    cfg.symbol_samples = 100;
    let verdicts = symbol_suite(&cfg);
    require(
        &verdicts,
        &["symbol-table", "symbol-eigenvalues", "ptilde-min-eig", "modulus-bound"],
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}", elapsed);
    report(
        "1 symbol certificate",
        format!(
            "exact eigenvalues 0,0,+1,+1,-1,-1 and min |eig| = 1 on 100 rational unit \
             covectors in {:?}",
            elapsed
        ),
    );
}

#[test]
fn criterion_02_type_decompositions() {
    let start = Instant::now();
    let cfg = SuiteConfig::default();
    let verdicts = algebra_suite(&cfg);
    require(&verdicts, &["ranks", "projector-algebra", "wedge-eigenvalues"]);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}", elapsed);
    report(
        "2 type decompositions",
        format!("ranks 7/14 and 1/7/27 with exact wedge identities in {:?}", elapsed),
    );
}

#[test]
fn criterion_03_chi_normalization() {
    let cfg = SuiteConfig::default();
    let verdicts = algebra_suite(&cfg);
    require(&verdicts, &["chi-norm"]);
    report("3 chi normalization", "|chi(eta)|^2 = 4|eta|^2 exact on all basis covectors".into());
}

#[test]
fn criterion_04_derivative_formulas() {
    let cfg = SuiteConfig::default();
    let verdicts = algebra_suite(&cfg);
    require(
        &verdicts,
        &[
            "first-variation",
            "first-variation-order",
            "theta-linearization",
            "theta-linearization-order",
        ],
    );
    let fv = verdicts.iter().find(|v| v.id == "first-variation").unwrap();
    let tl = verdicts.iter().find(|v| v.id == "theta-linearization").unwrap();
    report(
        "4 derivative formulas",
        format!(
            "central differences converge at order >= 2; final relative errors {:.2e} and {:.2e}",
            fv.measured, tl.measured
        ),
    );
}

#[test]
fn criterion_05_derivative_identities() {
    let start = Instant::now();
    let mut cfg = SuiteConfig::default();
    cfg.prop1_fields = 20;
    let verdicts = spectral_suite(&cfg);
    require(
        &verdicts,
        &[
            "typed-d1-vanishes",
            "typed-d7-on-14",
            "typed-d7-on-7",
            "one-form-identities",
        ],
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {:?}", elapsed);
    let worst = verdicts
        .iter()
        .filter(|v| v.id.starts_with("typed-") || v.id == "one-form-identities")
        .map(|v| v.measured)
        .fold(0.0f64, f64::max);
    report(
        "5 derivative identities",
        format!("all three items on 20 seeded fields, worst residual {:.2e} in {:?}", worst, elapsed),
    );
}

#[test]
fn criterion_06_torsion_linearization() {
    let cfg = SuiteConfig::default();
    let verdicts = spectral_suite(&cfg);
    require(&verdicts, &["w-linearization", "w-linearization-order", "w-coclosed"]);
    let v = verdicts.iter().find(|v| v.id == "w-linearization").unwrap();
    report(
        "6 torsion linearization",
        format!(
            "relative error {:.2e} at the smallest step with first-order decay",
            v.measured
        ),
    );
}

#[test]
fn criterion_07_self_adjointness() {
    let start = Instant::now();
    let modes = modes_in_ball(3);
    let worst = modes
        .par_iter()
        .map(|k| assemble_mode(k, 1.0, 100).unwrap().symmetry_defect())
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1e-10, "symmetry defect {}", worst);
    report(
        "7 self-adjointness",
        format!(
            "weighted Hermitian defect {:.2e} over {} modes in {:?}",
            worst,
            modes.len(),
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_08_slab_spectrum() {
    let start = Instant::now();
    let pi = std::f64::consts::PI;
    for &ell in &[0.5, 1.0, 2.0, 4.0] {
        let scan = scan_spectrum(ell, 3, 200, 1e7).unwrap();
        assert_eq!(scan.count_positive, 0, "positive eigenvalues at L = {}", ell);
        assert_eq!(scan.count_zero, 6, "kernel dimension at L = {}", ell);
        assert!(
            scan.theta_eig_rel_error <= 1e-3,
            "Dirichlet-block error {} at L = {}",
            scan.theta_eig_rel_error,
            ell
        );
        // doubling the grid leaves the kernel dimension at 6
        let kernel = total_kernel(ell, 3, 200).unwrap();
        assert_eq!(kernel.dim, 6);
        assert_eq!(kernel.dim_doubled_grid, 6);
        // spot check the lowest separated eigenvalue
        let expect = -(pi / ell).powi(2);
        let zero_class = &scan.classes[&0];
        assert!((zero_class.theta_eigs[0] - expect).abs() <= 1e-3 * expect.abs());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {:?}", elapsed);
    report(
        "8 slab spectrum",
        format!(
            "no positive eigenvalues, kernel 6, Dirichlet block within 0.1% for four \
             lengths in {:?}",
            elapsed
        ),
    );
}

#[test]
fn criterion_09_green_formula() {
    let mut cfg = SuiteConfig::default();
    cfg.green_pairs = 10;
    let verdicts = spectral_suite(&cfg);
    require(&verdicts, &["green-identity", "green-dirichlet", "pairing-symmetry"]);
    let g = verdicts.iter().find(|v| v.id == "green-identity").unwrap();
    let p = verdicts.iter().find(|v| v.id == "pairing-symmetry").unwrap();
    report(
        "9 boundary identity",
        format!(
            "three-term residual {:.2e} on 10 seeded pairs, pairing symmetry defect {:.2e}",
            g.measured, p.measured
        ),
    );
}

#[test]
fn criterion_10_cohomological_consistency() {
    let prediction = predict_slab_kernel(9, 3, 6);
    assert_eq!(prediction.dim_v, 7);
    assert_eq!(prediction.dim_k_phi, 0);
    assert_eq!(prediction.dim_h_phi, 0);
    let kernel = total_kernel(1.0, 3, 100).unwrap();
    assert_eq!(kernel.dim, prediction.dim_h_phi + prediction.relative_h2_dim);
    assert_eq!(kernel.dim, 6);
    assert!(!kernel.theta_block_contributes);
    report(
        "10 cohomological consistency",
        format!(
            "predicted obstruction spaces vanish; spectral kernel {} equals the 6 \
             relative classes",
            kernel.dim
        ),
    );
}

/// The exact backend agrees with floating point on shared operations.
#[test]
fn backends_agree_on_random_inputs() {
    use g2bvp_core::exterior::{Basis, Form, IndexTable};
    use rand::Rng;
    use rand::SeedableRng;
    let basis = Basis::standard7();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let t2 = IndexTable::new(7, 2);
        let t3 = IndexTable::new(7, 3);
        let mut a: Form<Rat> = Form::zero(&basis, 2);
        let mut b: Form<Rat> = Form::zero(&basis, 3);
        for pos in 0..t2.len() {
            let num = rng.gen_range(-16i64..=16);
            let den = rng.gen_range(1i64..=16);
            a.coeffs_mut()[pos] = Rat::new(num, den);
        }
        for pos in 0..t3.len() {
            let num = rng.gen_range(-16i64..=16);
            let den = rng.gen_range(1i64..=16);
            b.coeffs_mut()[pos] = Rat::new(num, den);
        }
        let exact = a.wedge(&b).unwrap().to_f64();
        let float = a.to_f64().wedge(&b.to_f64()).unwrap();
        for (x, y) in exact.coeffs().iter().zip(float.coeffs()) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}
