use heatchain_core::observables::{bath_current, heat_current_coherence, heat_current_structural};
use heatchain_core::steady_state::StateTolerances;
use heatchain_core::{
    assemble_liouvillian, extract_observables, heat_current_analytic, solve_steady_state, solve_steady_state_with_info,
    steady_state, vectorize, BathSpec, ChainSpec, DensityMatrix, Error, Side, SolverMethod, SolverOptions,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn benchmark(n: usize, dephasing: f64) -> ChainSpec {
    let hot = BathSpec::thermal(1.0, 1.0, 1.0).unwrap();
    let cold = BathSpec::thermal(1.0, 0.0, 1.0).unwrap();
    ChainSpec::uniform(n, 1.0, 1.0, hot, cold, dephasing).unwrap()
}

/// Null vector from an SVD of the dense generator, independent of the solver.
fn svd_steady_state(spec: &ChainSpec) -> DMatrix<Complex64> {
    let l = assemble_liouvillian(spec).matrix().to_dense();
    let svd = l.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let v: Vec<Complex64> = v_t.row(k).iter().map(|z| z.conj()).collect();
    let d = spec.dimension();
    let m = DMatrix::from_column_slice(d, d, &v);
    let tr = m.trace();
    m / tr
}

#[test]
fn solver_matches_svd_null_vector() {
    for (n, deph) in [(2, 0.0), (3, 0.7), (3, 0.0)] {
        let spec = benchmark(n, deph);
        let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
        let oracle = svd_steady_state(&spec);
        let diff = (rho.matrix() - oracle).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "N={n}: {diff}");
    }
}

#[test]
fn analytic_current_for_all_small_chains() {
    for n in 2..=6 {
        let spec = benchmark(n, 0.0);
        let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
        let report = extract_observables(&rho, &spec).unwrap();
        let exact = heat_current_analytic(&spec).unwrap();
        assert!(((report.heat_current - exact) / exact).abs() < 1e-8, "N={n}");
        assert!((heat_current_coherence(&rho, &spec).unwrap() - report.heat_current).abs() < 1e-9);
        assert!(report.heat_current > 0.0);
    }
}

#[test]
fn coherences_are_imaginary_and_equal_across_bonds() {
    for n in 2..=6 {
        let spec = benchmark(n, 0.0);
        let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
        let report = extract_observables(&rho, &spec).unwrap();
        let first = report.bond_coherences[0].im;
        for c in &report.bond_coherences {
            assert!(c.re.abs() < 1e-10, "N={n}: {c}");
            assert!((c.im - first).abs() < 1e-10, "N={n}: {c}");
        }
    }
}

#[test]
fn terminal_balance_and_structural_current() {
    for n in 2..=5 {
        let spec = benchmark(n, 0.0);
        let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
        let report = extract_observables(&rho, &spec).unwrap();
        let left = spec.bath_left().derived();
        let c = report.bond_coherences[0];
        // γ₁(s₁ − ⟨n₁⟩) = i g (⟨σ₁⁺σ₂⁻⟩ − ⟨σ₁⁻σ₂⁺⟩)
        let rhs = (Complex64::i() * (c - c.conj())).re;
        assert!((left.gamma * (left.s - report.populations[0]) - rhs).abs() < 1e-10);
        for side in [Side::Left, Side::Right] {
            let s = heat_current_structural(&rho, &spec, side).unwrap();
            assert!((s - bath_current(&rho, &spec, side).unwrap()).abs() < 1e-9);
        }
    }
    // dephasing enters only through inner-site coherences
    let spec = benchmark(4, 0.8);
    let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
    for side in [Side::Left, Side::Right] {
        let s = heat_current_structural(&rho, &spec, side).unwrap();
        assert!((s - bath_current(&rho, &spec, side).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn benchmark_populations() {
    let spec = benchmark(2, 0.0);
    let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
    let report = extract_observables(&rho, &spec).unwrap();
    let delta = heat_current_analytic(&spec).unwrap();
    let left = spec.bath_left().derived();
    assert!((report.populations[0] - (left.s - delta / left.gamma)).abs() < 1e-10);
    assert!((report.populations[0] - 0.213_780).abs() < 1e-6);
    assert!((report.populations[1] - delta).abs() < 1e-10);
}

#[test]
fn dense_and_sparse_paths_agree() {
    for (n, deph) in [(4, 0.0), (5, 0.5), (6, 5.0)] {
        let spec = benchmark(n, deph);
        let l = assemble_liouvillian(&spec);
        let dense = solve_steady_state(&l, &SolverOptions::with_method(SolverMethod::DenseNullspace)).unwrap();
        let sparse = solve_steady_state(&l, &SolverOptions::with_method(SolverMethod::SparseIterative)).unwrap();
        let diff = (dense.matrix() - sparse.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-8, "N={n}: {diff}");
    }
}

#[test]
fn equilibrium_is_a_product_of_thermal_states() {
    let bath = BathSpec::thermal(0.8, 1.5, 1.0).unwrap();
    let spec = ChainSpec::uniform(3, 1.0, 0.6, bath, bath, 0.0).unwrap();
    let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
    let s = bath.derived().s;
    let single = DMatrix::from_row_slice(2, 2, &[s, 0.0, 0.0, 1.0 - s]).map(|x| Complex64::new(x, 0.0));
    let product = single.kronecker(&single).kronecker(&single);
    let diff = (rho.matrix() - product).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(diff < 1e-12);
}

#[test]
fn isolated_segment_is_reported_as_degenerate() {
    let hot = BathSpec::thermal(1.0, 1.0, 1.0).unwrap();
    let cold = BathSpec::thermal(1.0, 0.0, 1.0).unwrap();
    // the third site touches neither bath nor neighbour
    let spec = ChainSpec::new(vec![0.3, 0.9, 0.5, 0.7], vec![0.4, 0.0, 0.0], hot, cold, 1.0).unwrap();
    for method in [SolverMethod::DenseNullspace, SolverMethod::SparseIterative] {
        let err = steady_state(&spec, &SolverOptions::with_method(method)).unwrap_err();
        assert!(matches!(err, Error::DegenerateNullspace { .. }), "{err}");
    }
}

#[test]
fn single_cut_keeps_a_unique_state() {
    // each half thermalises with its own bath
    let hot = BathSpec::thermal(1.0, 1.0, 1.0).unwrap();
    let cold = BathSpec::thermal(1.0, 0.0, 1.0).unwrap();
    let spec = ChainSpec::new(vec![1.0; 4], vec![0.4, 0.0, 0.8], hot, cold, 1.0).unwrap();
    let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
    let report = extract_observables(&rho, &spec).unwrap();
    assert!(report.heat_current.abs() < 1e-12);
    assert!((report.populations[0] - hot.derived().s).abs() < 1e-12);
    assert!(report.populations[3].abs() < 1e-12);
}

#[test]
fn uniform_dephased_chain_balances_bath_currents() {
    let rho = steady_state(&benchmark(4, 2.0), &SolverOptions::default()).unwrap();
    let report = extract_observables(&rho, &benchmark(4, 2.0)).unwrap();
    assert!(report.current_imbalance() < 1e-12);
    assert!(report.current_dephasing.abs() < 1e-12);
}

#[test]
fn iteration_budget_is_enforced() {
    let spec = benchmark(7, 5.0);
    let opts = SolverOptions {
        method: SolverMethod::SparseIterative,
        max_iterations: 2,
        ..SolverOptions::default()
    };
    assert!(matches!(steady_state(&spec, &opts), Err(Error::NonConvergence { .. })));
}

#[test]
fn residual_is_reported_and_small() {
    let spec = benchmark(7, 0.5);
    let l = assemble_liouvillian(&spec);
    let (rho, info) = solve_steady_state_with_info(&l, &SolverOptions::default()).unwrap();
    assert_eq!(info.method, SolverMethod::SparseIterative);
    assert_eq!(info.population_block, 3432);
    assert!(info.relative_residual <= 1e-12);
    let v = vectorize(rho.matrix()).unwrap();
    let lv = l.matrix().matvec(&v).unwrap();
    assert!(lv.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
    rho.validate(&StateTolerances::default()).unwrap();
}

#[test]
fn weakly_damped_chain_falls_back_to_plain_gmres() {
    // without dephasing ILU(0) is unstable here; the result must still be exact
    let spec = benchmark(7, 0.0);
    let l = assemble_liouvillian(&spec);
    let (rho, info) = solve_steady_state_with_info(&l, &SolverOptions::default()).unwrap();
    assert_eq!(info.method, SolverMethod::SparseIterative);
    let report = extract_observables(&rho, &spec).unwrap();
    let exact = heat_current_analytic(&spec).unwrap();
    assert!(((report.heat_current - exact) / exact).abs() < 1e-10);
}

#[test]
fn solves_are_deterministic() {
    let spec = benchmark(7, 1.0);
    let a = steady_state(&spec, &SolverOptions::default()).unwrap();
    let b = steady_state(&spec, &SolverOptions::default()).unwrap();
    assert_eq!(a, b);
}

fn random_spec() -> impl Strategy<Value = ChainSpec> {
    (2usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(0.1..2.0f64, n),
            prop::collection::vec(0.1..1.5f64, n - 1),
            (0.1..3.0f64, 0.0..5.0f64),
            (0.1..3.0f64, 0.0..5.0f64),
            prop_oneof![Just(0.0), 0.0..5.0f64],
        )
            .prop_map(|(w, g, (r1, t1), (r2, t2), deph)| {
                let left = BathSpec::thermal(r1, t1, w[0]).unwrap();
                let right = BathSpec::thermal(r2, t2, *w.last().unwrap()).unwrap();
                ChainSpec::new(w, g, left, right, deph).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_solve_is_physical_and_balanced(spec in random_spec()) {
        let rho: DensityMatrix = steady_state(&spec, &SolverOptions::default()).unwrap();
        prop_assert!(rho.validate(&StateTolerances::default()).is_ok());
        let report = extract_observables(&rho, &spec).unwrap();
        let scale = report.current_left.abs().max(1.0);
        prop_assert!(report.energy_imbalance() < 1e-9 * scale);
        if spec.dephasing_rate() == 0.0 {
            prop_assert!(report.current_imbalance() < 1e-9 * scale);
        }
        for p in &report.populations {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(p));
        }
    }

    #[test]
    fn single_site_population_is_thermal(rate in 0.1..3.0f64, n in 0.0..10.0f64) {
        let bath = BathSpec::with_occupation(rate, n).unwrap();
        let spec = ChainSpec::uniform(1, 1.0, 0.0, bath, bath, 0.0).unwrap();
        let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
        prop_assert!((rho.matrix()[(0, 0)].re - n / (2.0 * n + 1.0)).abs() < 1e-12);
    }
}
