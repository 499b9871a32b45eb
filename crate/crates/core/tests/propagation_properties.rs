use std::f64::consts::PI;

use ctqw_core::prelude::*;
use ctqw_core::propagate::SymmetricSpectrum;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut impl Rng, n: usize) -> ComplexState {
    ComplexState::new(
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
    .normalize()
    .unwrap()
}

fn random_rates(rng: &mut impl Rng) -> TransitionRates {
    let d = rng.gen_range(0..=5);
    let one_sided: Vec<f64> = (0..=d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TransitionRates::symmetric(&one_sided).unwrap()
}

fn dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, v)| {
                    v * Complex64::from_polar(1.0, -2.0 * PI * ((j * k) % n) as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}

#[test]
fn fourier_agrees_with_dense_oracle_on_random_rates() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let rates = random_rates(&mut rng);
        for n in [16, 31, 64] {
            let h = rates_to_dense(&rates, n, Boundary::Periodic).unwrap();
            let kernel = build_kernel(&rates, n, 1).unwrap();
            let spectrum = SymmetricSpectrum::of(&h).unwrap();
            let psi = random_state(&mut rng, n);
            for t in [0.5, 5.0] {
                let a = evolve_fourier(&psi, &kernel, t).unwrap();
                let b = spectrum.evolve(&psi, t).unwrap();
                worst = worst.max(a.max_abs_diff(&b).unwrap());
            }
        }
    }
    assert!(worst <= 1e-10, "max deviation {worst:e}");
}

#[test]
fn shift_theorem_holds_for_all_shifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in [5, 8, 13] {
        let psi = random_state(&mut rng, n);
        let f = dft(psi.amplitudes());
        for s in -(n as i64)..=(n as i64) {
            let fs = dft(shift_state(&psi, s).amplitudes());
            for k in 0..n {
                let expect = f[k] * fourier_phase(k, s, n).unwrap();
                assert!((fs[k] - expect).norm() <= 1e-12, "n={n} s={s} k={k}");
            }
        }
    }
}

#[test]
fn dense_operator_of_periodic_rates_commutes_with_cyclic_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [11, 20, 32] {
        let rates = random_rates(&mut rng);
        let h = rates_to_dense(&rates, n, Boundary::Periodic).unwrap();
        let shift =
            nalgebra::DMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { 1.0 } else { 0.0 });
        let comm = h.matrix() * &shift - &shift * h.matrix();
        assert!(comm.abs().max() <= 1e-12);
        assert!(h.max_asymmetry() <= 1e-14);
    }
}

#[test]
fn unitarity_over_long_times_and_large_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let rates = stencil_to_rates(&laplacian_stencil(StencilOrder::Tenth));
    for n in [64, 1000, 4096] {
        let kernel = build_kernel(&rates, n, 1).unwrap();
        let psi = random_state(&mut rng, n);
        for t in [0.1, 7.0, 25.0] {
            let out = evolve_fourier(&psi, &kernel, t).unwrap();
            assert!((out.l2_norm() - 1.0).abs() <= 1e-11, "n={n} t={t}");
        }
    }
    let h = rates_to_dense(&rates, 300, Boundary::Periodic).unwrap();
    let psi = random_state(&mut rng, 300);
    let out = evolve_direct(&h, &psi, 25.0).unwrap();
    assert!((out.l2_norm() - 1.0).abs() <= 1e-11);
}

#[test]
fn two_dimensional_evolution_separates_for_product_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let (nx, ny) = (rng.gen_range(11..40), rng.gen_range(11..40));
        let rx = random_rates(&mut rng);
        let ry = random_rates(&mut rng);
        let kx = build_kernel(&rx, nx, 1).unwrap();
        let ky = build_kernel(&ry, ny, 1).unwrap();
        let (u, v) = (random_state(&mut rng, nx), random_state(&mut rng, ny));
        let t = rng.gen_range(0.0..10.0);
        let out = evolve_fourier_2d(&Grid2DState::outer(&u, &v), &kx, &ky, t).unwrap();
        let expect = Grid2DState::outer(
            &evolve_fourier(&u, &kx, t).unwrap(),
            &evolve_fourier(&v, &ky, t).unwrap(),
        );
        assert!(out.max_abs_diff(&expect).unwrap() <= 1e-10);
        assert!((out.frobenius_norm() - 1.0).abs() <= 1e-11);
    }
}

fn rates_strategy() -> impl Strategy<Value = TransitionRates> {
    prop::collection::vec(-1.0..1.0f64, 1..=6).prop_map(|v| TransitionRates::symmetric(&v).unwrap())
}

fn state_strategy(n: usize) -> impl Strategy<Value = ComplexState> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n).prop_filter_map("zero state", |v| {
        ComplexState::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
            .ok()?
            .normalize()
            .ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_of_evolutions(rates in rates_strategy(), psi in state_strategy(24),
                                 t1 in -5.0..5.0f64, t2 in -5.0..5.0f64) {
        let k = build_kernel(&rates, 24, 1).unwrap();
        let joint = evolve_fourier(&psi, &k, t1 + t2).unwrap();
        let split = evolve_fourier(&evolve_fourier(&psi, &k, t1).unwrap(), &k, t2).unwrap();
        prop_assert!(joint.max_abs_diff(&split).unwrap() <= 1e-11);

        let h = rates_to_dense(&rates, 24, Boundary::Periodic).unwrap();
        let joint = evolve_direct(&h, &psi, t1 + t2).unwrap();
        let split = evolve_direct(&h, &evolve_direct(&h, &psi, t1).unwrap(), t2).unwrap();
        prop_assert!(joint.max_abs_diff(&split).unwrap() <= 1e-11);
    }

    #[test]
    fn time_reversal_restores_state(rates in rates_strategy(), psi in state_strategy(31), t in 0.0..25.0f64) {
        let k = build_kernel(&rates, 31, 1).unwrap();
        let back = evolve_fourier(&evolve_fourier(&psi, &k, t).unwrap(), &k, -t).unwrap();
        prop_assert!(back.max_abs_diff(&psi).unwrap() <= 1e-11);

        let h = rates_to_dense(&rates, 31, Boundary::Periodic).unwrap();
        let back = evolve_direct(&h, &evolve_direct(&h, &psi, t).unwrap(), -t).unwrap();
        prop_assert!(back.max_abs_diff(&psi).unwrap() <= 1e-11);
    }

    #[test]
    fn kernel_is_real_and_reflection_symmetric(rates in rates_strategy(), n in 12usize..80, lambda in 1usize..3) {
        prop_assume!(n > 2 * rates.half_width() * lambda);
        let k = build_kernel(&rates, n, lambda).unwrap();
        let q = k.eigenphases();
        for i in 1..n {
            prop_assert!((q[i] - q[n - i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn line_hamiltonians_are_symmetric(n in 2usize..40, gamma in 0.01..5.0f64, periodic in any::<bool>()) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Truncated };
        for conv in [LineConvention::Quantum, LineConvention::Conservative] {
            let h = line_hamiltonian(n, gamma, conv, boundary).unwrap();
            prop_assert!(h.max_asymmetry() <= 1e-14);
        }
        if periodic {
            let h = line_hamiltonian(n, gamma, LineConvention::Conservative, boundary).unwrap();
            prop_assert!(h.row_sums().iter().all(|&s| s == 0.0));
        }
    }
}
