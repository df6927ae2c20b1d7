use cgp_core::cgp::{self, cgp_max, cgp_unitary, coefficient_table, factor};
use cgp_core::channels::{self, Channel};
use cgp_core::coherence::{c_s, c_s_diagonal_conjugated, skew_information};
use cgp_core::linalg::{hermitian_eig, is_unitary, principal_sqrt, ComplexMatrix, DensityOperator};
use cgp_core::sampling::{sample_ginibre, sample_haar_unitary, sample_hs_density, sample_incoherent_hs, RngStream};
use num_complex::Complex64;
use proptest::prelude::*;

fn hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let g = sample_ginibre(n, &mut RngStream::new(seed, 0).rng());
    &g + &g.dagger()
}

fn permutation(perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if perm[i] == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn mix(a: &DensityOperator, b: &DensityOperator, q: f64) -> DensityOperator {
    let m = &a.matrix().scale(Complex64::new(q, 0.0)) + &b.matrix().scale(Complex64::new(1.0 - q, 0.0));
    DensityOperator::new(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs_hermitian(n in 1usize..=16, seed in any::<u64>()) {
        let h = hermitian(n, seed);
        let e = hermitian_eig(&h).unwrap();
        prop_assert!(is_unitary(&e.eigenvectors, 1e-10));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!(e.reconstruct().max_abs_diff(&h) <= 1e-10 * scale);
    }

    #[test]
    fn sqrt_squares_back(n in 1usize..=8, seed in any::<u64>()) {
        let rho = sample_hs_density(n, &mut RngStream::new(seed, 1).rng());
        let s = principal_sqrt(&rho).unwrap();
        prop_assert!(s.hermitian_deviation() <= 1e-12);
        prop_assert!((&s * &s).max_abs_diff(rho.matrix()) <= 1e-10);
    }

    #[test]
    fn hs_density_is_valid(n in 1usize..=8, seed in any::<u64>()) {
        let rho = sample_hs_density(n, &mut RngStream::new(seed, 2).rng());
        let e = rho.eig().unwrap();
        prop_assert!((e.eigenvalues.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        prop_assert!(e.eigenvalues.iter().all(|&l| l >= -1e-10));
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn coherence_range_and_skew_sum(n in 2usize..=6, seed in any::<u64>()) {
        let rho = sample_hs_density(n, &mut RngStream::new(seed, 3).rng());
        let v = c_s(&rho).unwrap();
        prop_assert!(v >= -1e-12 && v <= 1.0 - 1.0 / n as f64 + 1e-12);
        let total: f64 = (0..n).map(|k| skew_information(&rho, k).unwrap()).sum();
        prop_assert!((total - v).abs() <= 1e-10);
    }

    #[test]
    fn coherence_is_convex(n in 2usize..=5, seed in any::<u64>(), q in 0.0f64..=1.0) {
        let mut rng = RngStream::new(seed, 4).rng();
        let a = sample_hs_density(n, &mut rng);
        let b = sample_hs_density(n, &mut rng);
        let lhs = c_s(&mix(&a, &b, q)).unwrap();
        let rhs = q * c_s(&a).unwrap() + (1.0 - q) * c_s(&b).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn coherence_is_faithful_on_dephased_family(n in 2usize..=5, seed in any::<u64>(), log_eps in -14.0f64..0.0) {
        // Scale the off-diagonal part of a full-rank state; c_s vanishes with it.
        let rho = sample_hs_density(n, &mut RngStream::new(seed, 5).rng());
        let eps = 10f64.powf(log_eps);
        let m = ComplexMatrix::from_fn(n, n, |i, j| if i == j { rho.matrix()[(i, j)] } else { rho.matrix()[(i, j)] * eps });
        let off = (m.frobenius_norm().powi(2) - m.real_diagonal().iter().map(|d| d * d).sum::<f64>()).max(0.0).sqrt();
        let v = c_s(&DensityOperator::new(m).unwrap()).unwrap();
        if off <= 1e-9 {
            prop_assert!(v <= 1e-9);
        }
        if off >= 1e-3 {
            prop_assert!(v > 1e-9);
        }
    }

    #[test]
    fn fast_path_matches_eigensolve(seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 6).rng();
        let u = sample_haar_unitary(4, &mut rng);
        let lambda = sample_incoherent_hs(4, &mut rng);
        let fast = c_s_diagonal_conjugated(&u, lambda.lambdas()).unwrap();
        let rho = DensityOperator::new(u.conjugate(lambda.to_density().matrix()).hermitian_part()).unwrap();
        let s = principal_sqrt(&rho).unwrap();
        let slow = 1.0 - (0..4).map(|k| s[(k, k)].re.powi(2)).sum::<f64>();
        prop_assert!((fast - slow).abs() <= 1e-9);
        prop_assert!((fast - c_s(&rho).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn apply_preserves_trace_and_hermiticity(n in 2usize..=4, terms in 1usize..=4, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 7).rng();
        let phi = match seed % 3 {
            0 => Channel::unitary(sample_haar_unitary(n, &mut rng)).unwrap(),
            1 => cgp_core::experiments::suites::random_mixture(n, terms, RngStream::new(seed, 8)).unwrap(),
            _ => channels::amplitude_damping((seed % 1000) as f64 / 999.0, seed % 2 == 0).unwrap(),
        };
        let rho = sample_hs_density(phi.dim(), &mut rng);
        let out = phi.apply(&rho).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() <= 1e-9);
        prop_assert!(out.matrix().trace().im.abs() <= 1e-9);
        prop_assert!(out.matrix().hermitian_deviation() <= 1e-9);
        prop_assert!(out.eig().unwrap().eigenvalues[0] >= -1e-9);
    }

    #[test]
    fn unitary_preserves_spectrum(n in 1usize..=8, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 9).rng();
        let u = sample_haar_unitary(n, &mut rng);
        let lambda = sample_incoherent_hs(n, &mut rng);
        let out = Channel::unitary(u).unwrap().apply(&lambda.to_density()).unwrap();
        let mut expected = lambda.lambdas().to_vec();
        expected.sort_by(f64::total_cmp);
        for (a, b) in out.eig().unwrap().eigenvalues.iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn cgp_within_bounds(n in 2usize..=12, seed in any::<u64>()) {
        let u = sample_haar_unitary(n, &mut RngStream::new(seed, 10).rng());
        let v = cgp_unitary(&u).unwrap();
        prop_assert!(v >= 0.0 && v <= cgp_max(n).unwrap() + 1e-12);
        let ps = cgp::purity_sum(&u).unwrap();
        prop_assert!(ps >= 1.0 - 1e-12 && ps <= n as f64 + 1e-12);
    }

    #[test]
    fn cgp_permutation_invariant(
        (n, p, q) in (2usize..=8).prop_flat_map(|n| (
            Just(n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )),
        seed in any::<u64>(),
    ) {
        let u = sample_haar_unitary(n, &mut RngStream::new(seed, 11).rng());
        let puq = &(&permutation(&p) * &u) * &permutation(&q);
        prop_assert!((cgp_unitary(&puq).unwrap() - cgp_unitary(&u).unwrap()).abs() <= 1e-14);
    }

    #[test]
    fn phased_permutations_have_zero_cgp(
        perm in (2usize..=8).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle()),
        seed in any::<u64>(),
    ) {
        let n = perm.len();
        let phases: Vec<f64> = (0..n).map(|i| (seed.rotate_left(7 * i as u32) % 6283) as f64 / 1000.0).collect();
        let u = ComplexMatrix::from_fn(n, n, |i, j| {
            if perm[i] == j { Complex64::from_polar(1.0, phases[i]) } else { Complex64::new(0.0, 0.0) }
        });
        prop_assert!(cgp_unitary(&u).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn table_is_symmetric(n in 2usize..=40) {
        let t = coefficient_table(n).unwrap();
        for k in 0..n {
            for l in 0..n {
                prop_assert_eq!(t.get(k, l), t.get(l, k));
            }
        }
        prop_assert!(t.bracket() > 0.0);
    }
}

#[test]
fn factor_strictly_inside_unit_interval() {
    let sparse = [200, 255, 256, 257, 300, 500, 512, 700, 1000, 1023, 1024];
    for n in (2..=128).chain(sparse) {
        let f = factor(n).unwrap();
        assert!(f > 0.0 && f < 1.0, "F_{n} = {f}");
    }
}
