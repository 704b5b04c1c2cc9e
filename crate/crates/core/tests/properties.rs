use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use qweyl::bargmann::{apply_annihilation, dilation, q_commutator, q_derivative, BargmannPoly};
use qweyl::expm::expm;
use qweyl::fock::squeeze_generator;
use qweyl::foliation::{scalar_product, scalar_product_invariance_check, TestFunction};
use qweyl::weyl::{symplectic_invariance_check, SYMPLECTIC_TOLERANCE};
use qweyl::Deformation;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn poly(max_degree: usize) -> impl Strategy<Value = BargmannPoly> {
    prop::collection::vec(complex(), 1..=max_degree + 1).prop_map(BargmannPoly::from_coeffs)
}

fn near_unit_q() -> impl Strategy<Value = Deformation> {
    (-0.2..0.2f64, -3.0..3.0f64)
        .prop_map(|(re, im)| Deformation::from_epsilon(Complex64::new(re, im)).unwrap())
        .prop_filter("|q - 1| ≥ 1e-3", |d| (d.q() - 1.0).norm() >= 1e-3)
}

fn test_function_pair() -> impl Strategy<Value = (TestFunction, TestFunction)> {
    (1usize..32, 0.01..1.0f64).prop_flat_map(|(len, w)| {
        let s = || prop::collection::vec(-1.0..1.0f64, len);
        (s(), s(), s(), s()).prop_map(move |(f1, g1, f2, g2)| {
            (TestFunction::new(f1, g1, w).unwrap(), TestFunction::new(f2, g2, w).unwrap())
        })
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = DMatrix<Complex64>> {
    prop::collection::vec(complex(), n * n).prop_map(move |v| {
        let m = DMatrix::from_vec(n, n, v);
        (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
    })
}

fn rel_gap(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn spectral_exp_i(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let mut v = eig.eigenvectors.clone();
    for (j, mut col) in v.column_iter_mut().enumerate() {
        col *= Complex64::new(0.0, t * eig.eigenvalues[j]).exp();
    }
    &v * eig.eigenvectors.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_commutator_is_dilation(p in poly(32), d in near_unit_q()) {
        let diff = &q_commutator(&p, &d).unwrap() - &dilation(&p, &d);
        prop_assert!(diff.max_abs() <= 1e-12 * p.max_abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn q_derivative_reaches_ordinary_derivative(p in poly(12), h in 1e-7..1e-5f64) {
        let d = Deformation::from_q(Complex64::new(1.0 + h, 0.0)).unwrap();
        let err = (&q_derivative(&p, &d).unwrap() - &apply_annihilation(&p)).max_abs();
        let n = p.cutoff() as f64;
        prop_assert!(err <= 2.0 * h * n * n * p.max_abs() + 1e-12);
    }

    #[test]
    fn scalar_product_is_hermitian_and_linear((a, b) in test_function_pair(), x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let ab = scalar_product(&a, &b).unwrap();
        let ba = scalar_product(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-13 * (1.0 + ab.norm()));

        let mix = a.combine(x, &b, y).unwrap();
        let lhs = scalar_product(&mix, &b).unwrap();
        let rhs = ab * x + scalar_product(&b, &b).unwrap() * y;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn imaginary_part_survives_scaling((a, b) in test_function_pair(), log_rho in -2.0..2.0f64) {
        let r = scalar_product_invariance_check(&a, &b, 10f64.powf(log_rho)).unwrap();
        prop_assert!(r.relative_deviation <= SYMPLECTIC_TOLERANCE);
    }

    #[test]
    fn area_survives_scaling(z1 in complex(), z2 in complex(), log_rho in -3.0..3.0f64) {
        let r = symplectic_invariance_check(z1 * 4.0, z2 * 4.0, 10f64.powf(log_rho)).unwrap();
        prop_assert!(r.pass);
    }

    #[test]
    fn expm_matches_spectral_exponential(h in hermitian(12), t in -3.0..3.0f64) {
        let got = expm(&(h.clone() * Complex64::new(0.0, t)));
        prop_assert!(rel_gap(&got, &spectral_exp_i(&h, t)) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn squeeze_operator_is_unitary(eps in -1.0..1.0f64) {
        let s = squeeze_generator(48, eps).unwrap();
        prop_assert!(s.unitarity_defect() <= 1e-12);
    }
}

#[test]
fn expm_matches_spectral_exponential_at_scale() {
    for n in [64, 256] {
        let (_, p) = qweyl::fock::quadratures(n).unwrap();
        let h = p.entries().clone();
        for t in [0.3, 2.5] {
            let got = expm(&(h.clone() * Complex64::new(0.0, t)));
            let gap = rel_gap(&got, &spectral_exp_i(&h, t));
            assert!(gap <= 1e-10, "n={n} t={t}: {gap:e}");
        }
    }
}

#[test]
fn squeeze_operators_compose() {
    let n = 128;
    let s2 = squeeze_generator(n, 0.2).unwrap();
    let s3 = squeeze_generator(n, 0.3).unwrap();
    let s5 = squeeze_generator(n, 0.5).unwrap();
    assert!((&s2 * &s3).block_deviation(&s5, n / 4) <= 1e-6);
}
