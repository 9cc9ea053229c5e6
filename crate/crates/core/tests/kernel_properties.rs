use num_complex::Complex64;
use proptest::prelude::*;
use qei_core::*;

fn models(b: f64) -> Vec<ScatteringModel64> {
    vec![
        ScatteringModel::free(1.0).unwrap(),
        ScatteringModel::ising(1.0).unwrap(),
        ScatteringModel::sinh_gordon(1.0, b).unwrap(),
    ]
}

fn spec(model: ScatteringModel64, coeffs: Vec<f64>) -> KernelSpec64 {
    KernelSpec::energy_density(model, PolynomialP::new(coeffs).unwrap(), 0.1).unwrap()
}

#[test]
fn normalisation_hook() {
    for model in models(1.0) {
        assert_eq!(spec(model, vec![0.3, 0.3, 0.4]).f_p(0.0).unwrap(), 1.0);
    }
}

#[test]
fn smearing_transform_positive_and_unit_at_zero() {
    let g = SmearingFunction::gaussian(0.1, 1.0).unwrap();
    assert_eq!(g.gtilde_sq(0.0), 1.0);
    for i in 0..200 {
        let omega = i as f64 * 0.1;
        assert!(g.gtilde_sq(omega) > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_and_tensor_symmetric(theta in -8.0f64..8.0, eta in -8.0f64..8.0, b in 0.1f64..1.9) {
        for model in models(b) {
            let s = spec(model, vec![0.7, 0.3]);
            for (a, c) in [(0u8, 0u8), (0, 1), (1, 1)] {
                let sc = s.with_component(ComponentPair::new(a, c).unwrap());
                let fwd = sc.kernel_value(theta, eta).unwrap();
                let rev = sc.kernel_value(eta, theta).unwrap();
                prop_assert!((fwd - rev).abs() <= 1e-12 * fwd.abs().max(f64::MIN_POSITIVE));
            }
            let f01 = s.with_component(ComponentPair::new(0, 1).unwrap()).kernel_value(theta, eta).unwrap();
            let f10 = s.with_component(ComponentPair::new(1, 0).unwrap()).kernel_value(theta, eta).unwrap();
            prop_assert_eq!(f01, f10);
        }
    }
}

fn small_grid() -> DiscretizationGrid64 {
    DiscretizationGrid::new(3.0, 60, 4).unwrap()
}

#[test]
fn basis_matrix_elements_reproduce_entries_exactly() {
    let grid = small_grid();
    for model in models(1.0) {
        let s = spec(model, vec![1.0]);
        let m = assemble_matrix(&s, &grid).unwrap();
        for (j, k) in [(0, 0), (3, 17), (17, 3), (29, 30), (59, 0)] {
            let bra = StepWavefunction::basis(grid, j).unwrap();
            let ket = StepWavefunction::basis(grid, k).unwrap();
            let value = matrix_element(&s, &bra, &ket).unwrap();
            assert_eq!(value.re, m.get(j, k));
            assert_eq!(value.im, 0.0);
        }
        let j = 11;
        assert_eq!(
            expectation(&s, &StepWavefunction::basis(grid, j).unwrap()).unwrap(),
            m.get(j, j)
        );
    }
}

#[test]
fn free_indicator_state_has_positive_energy() {
    let grid = DiscretizationGrid::new(1.0, 100, 4).unwrap();
    let s = spec(ScatteringModel::free(1.0).unwrap(), vec![1.0]);
    let psi = StepWavefunction::indicator(grid, -0.1, 0.1).unwrap();
    let value = expectation(&s, &psi).unwrap();
    assert!(value > 0.0);

    // same number from the assembled matrix as a quadratic form
    let m = assemble_matrix(&s, &grid).unwrap();
    let c: Vec<f64> = psi.coefficients().iter().map(|z| z.re).collect();
    let quad: f64 = (0..100)
        .map(|j| (0..100).map(|k| c[j] * m.get(j, k) * c[k]).sum::<f64>())
        .sum();
    assert!((value - quad).abs() <= 1e-12 * value);
    // a narrow state near θ = 0 sees roughly width · F(0, 0)
    let expected = psi.norm_sqr() * 0.2 / (2.0 * std::f64::consts::PI);
    assert!(
        (value - expected).abs() < 0.02 * expected,
        "{value} vs {expected}"
    );
}

#[test]
fn complex_wavefunction_gives_real_expectation() {
    let grid = small_grid();
    for model in models(0.8) {
        let s = spec(model, vec![1.0]);
        let psi = StepWavefunction::sample(grid, |t| {
            Complex64::from_polar((-(t - 0.5).powi(2)).exp(), 1.7 * t + 0.3 * t * t)
        })
        .unwrap();
        let value = expectation_complex(&s, &psi).unwrap();
        assert!(value.im.abs() <= 1e-10 * value.re.abs().max(1.0), "{value}");
        assert_eq!(expectation(&s, &psi).unwrap(), value.re);
    }
}

#[test]
fn zero_wavefunction_rejected() {
    let grid = small_grid();
    let s = spec(ScatteringModel::free(1.0).unwrap(), vec![1.0]);
    let psi = StepWavefunction::from_real(grid, &vec![0.0; grid.cells()]).unwrap();
    assert!(matches!(expectation(&s, &psi), Err(Error::ZeroNorm)));
}

#[test]
fn mismatched_grids_rejected() {
    let s = spec(ScatteringModel::free(1.0).unwrap(), vec![1.0]);
    let a = StepWavefunction::basis(small_grid(), 0).unwrap();
    let b = StepWavefunction::basis(DiscretizationGrid::new(3.0, 60, 2).unwrap(), 0).unwrap();
    assert!(matrix_element(&s, &a, &b).is_err());
}

#[test]
fn ising_lowest_mode_is_a_negative_energy_witness() {
    let grid = DiscretizationGrid::new(5.0, 200, 4).unwrap();
    let s = spec(ScatteringModel::ising(1.0).unwrap(), vec![1.0]);
    assert!(find_negativity_witness(&s, (0.0, 10.0), 100)
        .unwrap()
        .is_present());
    let lowest = lowest_eigenpair(&assemble_matrix(&s, &grid).unwrap()).unwrap();
    let psi = StepWavefunction::from_real(grid, &lowest.eigenvector).unwrap();
    let value = expectation(&s, &psi).unwrap();
    assert!(value < 0.0);
    assert!((value - lowest.lowest_eigenvalue).abs() < 1e-12);
}
