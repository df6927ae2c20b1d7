use cgp_core::cgp::{self, cgp_unitary, mean_cgp};
use cgp_core::channels::{self, Channel};
use cgp_core::coherence::c_s;
use cgp_core::experiments::suites::{run_suite, Suite};
use cgp_core::experiments::{
    collect_samples, mc_cgp, mc_mean_cgp, quadrature_cgp_n2, typicality_experiment, verify_mixed_unitary_bound,
    DEFAULT_QUADRATURE_POINTS,
};
use cgp_core::sampling::{sample_haar_unitary, sample_incoherent_hs, RngStream};
use cgp_core::ComplexMatrix;

#[test]
fn oracle_triangle_qubits() {
    let mut rng = RngStream::new(20, 0).rng();
    for i in 0..20u64 {
        let u = sample_haar_unitary(2, &mut rng);
        let exact = cgp_unitary(&u).unwrap();
        let phi = Channel::unitary(u).unwrap();
        let quad = quadrature_cgp_n2(&phi, DEFAULT_QUADRATURE_POINTS).unwrap();
        assert!((quad - exact).abs() <= 1e-8, "#{i}: {quad} vs {exact}");
        let mc = mc_cgp(&phi, 50_000, RngStream::new(20, 1 + i)).unwrap();
        assert!(mc.agrees_with(exact), "#{i}: {mc:?} vs {exact}");
    }
}

#[test]
fn kraus_path_matches_fast_path() {
    // Writing a unitary as a one-operator Kraus channel forces the eigensolve path.
    let u = sample_haar_unitary(3, &mut RngStream::new(21, 0).rng());
    let fast = mc_cgp(&Channel::unitary(u.clone()).unwrap(), 2_000, RngStream::new(21, 1)).unwrap();
    let slow = mc_cgp(&Channel::kraus(vec![u]).unwrap(), 2_000, RngStream::new(21, 1)).unwrap();
    assert!((fast.mean - slow.mean).abs() <= 1e-9, "{} vs {}", fast.mean, slow.mean);
}

#[test]
fn zero_cgp_channels_sample_by_sample() {
    let family = [
        channels::pauli_channel([0.25; 4]).unwrap(),
        channels::depolarizing(0.1).unwrap(),
        channels::bit_flip(0.4).unwrap(),
        channels::phase_flip(0.2).unwrap(),
        channels::bit_phase_flip(0.7).unwrap(),
        channels::amplitude_damping(0.3, true).unwrap(),
        channels::amplitude_damping(0.3, false).unwrap(),
        channels::amplitude_damping(1.0, false).unwrap(),
        channels::identity(5).unwrap(),
    ];
    for (i, phi) in family.iter().enumerate() {
        let samples = collect_samples(2_000, RngStream::new(22, i as u64), |rng| {
            let lambda = sample_incoherent_hs(phi.dim(), rng);
            c_s(&phi.apply(&lambda.to_density())?)
        })
        .unwrap();
        assert!(samples.iter().all(|&v| v.abs() <= 1e-10), "channel #{i}");
        assert_eq!(mc_cgp(phi, 1_000, RngStream::new(22, 100)).unwrap().mean, 0.0);
    }
}

#[test]
fn amplitude_damping_outputs() {
    let lambda = cgp_core::DensityOperator::from_diagonal(&[0.35, 0.65]).unwrap();
    let g = 0.3;
    let out = channels::amplitude_damping(g, false).unwrap().apply(&lambda).unwrap();
    let want = ComplexMatrix::from_real_diagonal(&[0.35 + g * 0.65, (1.0 - g) * 0.65]);
    assert!(out.matrix().max_abs_diff(&want) < 1e-15);
    let out = channels::amplitude_damping(g, true).unwrap().apply(&lambda).unwrap();
    assert!(out.matrix().max_abs_diff(lambda.matrix()) < 1e-15);
}

#[test]
fn mean_cgp_four_qubit_dimension() {
    let est = mc_mean_cgp(4, 100_000, RngStream::new(23, 0)).unwrap();
    assert!(est.agrees_with(mean_cgp(4).unwrap()), "{est:?}");
    assert!((mean_cgp(4).unwrap() - 0.6 * cgp::factor(4).unwrap()).abs() < 1e-15);
}

#[test]
fn typicality_curve() {
    let mut previous = f64::INFINITY;
    for (i, n) in [2usize, 4, 8, 16, 32, 64].into_iter().enumerate() {
        let draws = if n == 64 { 10_000 } else { 4_000 };
        let r = typicality_experiment(n, draws, RngStream::new(24, i as u64)).unwrap();
        assert!(r.bound_holds, "{r:?}");
        assert!(r.variance < previous, "{r:?}");
        previous = r.variance;
        if n == 2 {
            assert!(r.threshold < 0.0);
            assert_eq!(r.fraction_above_threshold, 1.0);
        }
        if n == 64 {
            assert!((r.lower_bound - (1.0 - (-4.0f64 / 256.0).exp())).abs() < 1e-15);
        }
    }
}

#[test]
fn mixed_bound_cases() {
    let h = channels::hadamard_matrix();
    let single = Channel::mixed_unitary(vec![1.0], vec![h.clone()]).unwrap();
    let r = verify_mixed_unitary_bound(&single, 100_000, RngStream::new(25, 0)).unwrap();
    assert!(r.holds && r.mc.agrees_with(r.bound), "{r:?}");

    let half = Channel::mixed_unitary(vec![0.5, 0.5], vec![h, ComplexMatrix::identity(2)]).unwrap();
    let r = verify_mixed_unitary_bound(&half, 20_000, RngStream::new(25, 1)).unwrap();
    assert!(r.holds);
    assert!(r.mc.mean + 3.0 * r.mc.std_error < r.bound, "{r:?}");

    let pauli = channels::pauli_channel([0.25; 4]).unwrap();
    let r = verify_mixed_unitary_bound(&pauli, 1_000, RngStream::new(25, 2)).unwrap();
    assert!(r.holds && r.bound == 0.0 && r.mc.mean == 0.0);
}

#[test]
fn estimates_are_reproducible() {
    let phi = channels::rotation(0.3).unwrap();
    let a = mc_cgp(&phi, 5_000, RngStream::new(26, 0)).unwrap();
    let b = mc_cgp(&phi, 5_000, RngStream::new(26, 0)).unwrap();
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    let c = mc_cgp(&phi, 5_000, RngStream::new(27, 0)).unwrap();
    assert_ne!(a.mean, c.mean);
}

#[test]
fn all_suites_pass() {
    for suite in Suite::ALL {
        let report = run_suite(suite, 0).unwrap();
        assert!(report.passed, "{}", serde_json::to_string_pretty(&report).unwrap());
    }
}
