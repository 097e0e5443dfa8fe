use heatchain_core::entanglement::{
    analyze, entanglement_cell, partial_transpose, two_site_state, EntanglementSearch, ENTANGLEMENT_THRESHOLD,
};
use heatchain_core::{
    concurrence, extract_observables, negativity, steady_state, BathSpec, ChainSpec, DensityMatrix, SolverOptions,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M = DMatrix<Complex64>;

fn random_state(rng: &mut ChaCha8Rng, rank: usize) -> DensityMatrix {
    let g = M::from_fn(4, rank, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(rho / tr).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng) -> M {
    let a = M::from_fn(2, 2, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    a.qr().q()
}

#[test]
fn concurrence_and_negativity_agree_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut entangled = 0;
    for i in 0..1000 {
        let rho = random_state(&mut rng, 1 + i % 4);
        let n = negativity(&rho, &[0]).unwrap();
        let c = concurrence(&rho).unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&c));
        // keep clear of the separability boundary where both vanish to rounding
        if n > 1e-6 || c > 1e-6 {
            assert!(n > 1e-9 && c > 1e-9, "state {i}: N={n} C={c}");
            entangled += 1;
        } else {
            assert!(n < 1e-6 && c < 1e-6);
        }
        // for two qubits N ≤ C/2; the square root of a rank-deficient ρ limits C to ~1e-8
        assert!(n <= c / 2.0 + 1e-7);
    }
    assert!(entangled > 100);
}

#[test]
fn negativity_is_invariant_under_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let hot = BathSpec::with_occupation(0.3, 2.0).unwrap();
    let cold = BathSpec::with_occupation(2.5, 0.0).unwrap();
    for g in [0.2, 1.0, 4.0] {
        let spec = ChainSpec::uniform(2, 1.0, g, hot, cold, 0.0).unwrap();
        let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
        let before = negativity(&rho, &[0]).unwrap();
        for _ in 0..20 {
            let u = random_unitary(&mut rng).kronecker(&random_unitary(&mut rng));
            let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
            assert!((negativity(&rotated, &[0]).unwrap() - before).abs() < 1e-10);
        }
    }
}

#[test]
fn equal_bath_rates_never_entangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let rate = 10f64.powf(rng.random_range(-2.0..2.0));
        let g = 10f64.powf(rng.random_range(-2.0..2.0));
        let left = BathSpec::thermal(rate, rng.random_range(0.0..20.0), 1.0).unwrap();
        let right = BathSpec::thermal(rate, rng.random_range(0.0..20.0), 1.0).unwrap();
        let spec = ChainSpec::uniform(2, 1.0, g, left, right, 0.0).unwrap();
        let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
        assert!(negativity(&rho, &[0]).unwrap() < 1e-10);
    }
}

#[test]
fn unequal_rates_can_entangle() {
    // γ₁ = γ_N with one bath at zero temperature; parameters taken from a search
    let cell = entanglement_cell(0.0, 0.45, &EntanglementSearch::default()).unwrap();
    assert!(cell.entangled);
    let rho = two_site_state(cell.best_g, cell.best_gamma, 0.0, 0.45, 1.0).unwrap();
    let result = analyze(&rho, ENTANGLEMENT_THRESHOLD).unwrap();
    assert!(result.entangled);
    assert!(result.concurrence.unwrap() > 0.0);
}

#[test]
fn coherence_without_entanglement() {
    let hot = BathSpec::thermal(1.0, 1.0, 1.0).unwrap();
    let cold = BathSpec::thermal(1.0, 0.0, 1.0).unwrap();
    let spec = ChainSpec::uniform(2, 1.0, 1.0, hot, cold, 0.0).unwrap();
    let rho = steady_state(&spec, &SolverOptions::default()).unwrap();
    let report = extract_observables(&rho, &spec).unwrap();
    assert!(report.bond_coherences[0].im.abs() > 1e-3);
    assert!(negativity(&rho, &[0]).unwrap() < 1e-10);
}

#[test]
fn partial_transpose_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rho = random_state(&mut rng, 2);
    let once = DensityMatrix::new(partial_transpose(&rho, &[1]).unwrap()).unwrap();
    let twice = partial_transpose(&once, &[1]).unwrap();
    assert_eq!(&twice, rho.matrix());
    let full = DensityMatrix::new(partial_transpose(&once, &[0]).unwrap()).unwrap();
    assert_eq!(full.matrix(), &rho.matrix().transpose());
}
