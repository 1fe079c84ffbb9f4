use std::f64::consts::PI;

use gegtau::spectra::{
    eigenfunction, evaluate_expansion, exact_neumann_spectrum, exact_spectrum, tau_spectrum,
    BoundaryCondition,
};
use gegtau::{Error, GegenbauerIndex, Parity};

fn g(gamma: f64) -> GegenbauerIndex {
    GegenbauerIndex::new(gamma).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn lowest_modes_converge_spectrally() {
    let s = tau_spectrum(10, g(0.5), Parity::Odd, BoundaryCondition::Dirichlet).unwrap();
    assert!(rel(s.eigenvalues[0].re, -PI * PI) < 1e-12);
    for gamma in [-0.25, 0.0, 0.5, 1.0, 1.5, 2.0] {
        for parity in [Parity::Even, Parity::Odd] {
            let s = tau_spectrum(40, g(gamma), parity, BoundaryCondition::Dirichlet).unwrap();
            for (k, want) in exact_spectrum(10, parity).iter().enumerate() {
                let got = s.eigenvalues[k];
                assert!(got.im == 0.0 || got.im.abs() < 1e-12 * got.norm());
                assert!(
                    rel(got.re, *want) < 1e-10,
                    "γ={gamma} {parity} k={k}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn error_decreases_with_modes() {
    let err = |m| {
        let s = tau_spectrum(m, g(0.0), Parity::Even, BoundaryCondition::Dirichlet).unwrap();
        rel(s.eigenvalues[2].re, exact_spectrum(3, Parity::Even)[2])
    };
    let (e4, e6, e8) = (err(4), err(6), err(8));
    assert!(e4 > e6 && e6 > e8, "{e4} {e6} {e8}");
}

fn amplitude_matched_error(u: &[f64], want: &[f64]) -> f64 {
    let a = u.iter().zip(want).map(|(x, y)| x * y).sum::<f64>()
        / want.iter().map(|y| y * y).sum::<f64>();
    u.iter()
        .zip(want)
        .map(|(x, y)| (x / a - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn lowest_odd_eigenfunction_is_sine() {
    let xs: Vec<f64> = (0..=400).map(|i| -1.0 + i as f64 / 200.0).collect();
    let sine: Vec<f64> = xs.iter().map(|x| (PI * x).sin()).collect();
    for gamma in [0.5, 0.0, 1.5] {
        let pair = eigenfunction(0, 40, g(gamma), Parity::Odd).unwrap();
        assert!(rel(pair.lambda.re, -PI * PI) < 1e-12);
        let u = evaluate_expansion(&pair.u_coeffs, g(gamma), Parity::Odd, &xs).unwrap();
        let err = amplitude_matched_error(&u, &sine);
        assert!(err < 1e-8, "γ={gamma}: {err:e}");
    }
}

#[test]
fn lowest_even_eigenfunction_is_cosine() {
    let xs: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 / 100.0).collect();
    let cosine: Vec<f64> = xs.iter().map(|x| (PI * x / 2.0).cos()).collect();
    let pair = eigenfunction(0, 30, g(1.0), Parity::Even).unwrap();
    let u = evaluate_expansion(&pair.u_coeffs, g(1.0), Parity::Even, &xs).unwrap();
    assert!(amplitude_matched_error(&u, &cosine) < 1e-8);
}

#[test]
fn right_eigenvector_is_second_derivative_of_u() {
    for parity in [Parity::Even, Parity::Odd] {
        let pair = eigenfunction(2, 24, g(0.5), parity).unwrap();
        let peak = pair.u_coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert_eq!(peak, 1.0);
        // c = λ u on the first m modes; u_m carries the Tau correction
        for (c, u) in pair.c_coeffs.iter().zip(&pair.u_coeffs) {
            assert!(
                (c - pair.lambda * u).norm() < 1e-10 * pair.lambda.norm(),
                "{parity}"
            );
        }
    }
}

#[test]
fn eigenfunctions_have_their_parity() {
    let pair = eigenfunction(1, 20, g(0.0), Parity::Odd).unwrap();
    let xs = [0.1, 0.37, 0.8];
    let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
    let a = evaluate_expansion(&pair.u_coeffs, g(0.0), Parity::Odd, &xs).unwrap();
    let b = evaluate_expansion(&pair.u_coeffs, g(0.0), Parity::Odd, &neg).unwrap();
    for (p, q) in a.iter().zip(&b) {
        assert!((p + q).abs() < 1e-14);
    }
}

#[test]
fn eigenfunction_index_out_of_range() {
    assert!(matches!(
        eigenfunction(8, 8, g(0.0), Parity::Odd),
        Err(Error::OutOfRange { index: 8, len: 8 })
    ));
}

#[test]
fn neumann_spectrum() {
    for gamma in [0.0, 0.5, 1.0] {
        for parity in [Parity::Even, Parity::Odd] {
            let s = tau_spectrum(30, g(gamma), parity, BoundaryCondition::Neumann).unwrap();
            assert_eq!(s.len(), 30);
            for (k, want) in exact_neumann_spectrum(8, parity).iter().enumerate() {
                let got = s.eigenvalues[k].re;
                if *want == 0.0 {
                    assert_eq!(got, 0.0);
                } else {
                    assert!(
                        rel(got, *want) < 1e-10,
                        "γ={gamma} {parity} k={k}: {got} vs {want}"
                    );
                }
            }
        }
    }
    assert_eq!(
        exact_neumann_spectrum(3, Parity::Even),
        vec![0.0, -PI * PI, -4.0 * PI * PI]
    );
}

#[test]
fn mixed_bc_is_polynomial_only() {
    let e = tau_spectrum(10, g(0.0), Parity::Odd, BoundaryCondition::Mixed).unwrap_err();
    assert!(matches!(e, Error::UnknownTag { .. }));
}

#[test]
fn too_few_modes() {
    assert!(matches!(
        tau_spectrum(1, g(0.0), Parity::Odd, BoundaryCondition::Dirichlet),
        Err(Error::TooSmall { .. })
    ));
}

#[test]
fn spectrum_is_ordered_by_modulus_with_reciprocal_mus() {
    let s = tau_spectrum(60, g(1.5), Parity::Even, BoundaryCondition::Dirichlet).unwrap();
    for w in s.eigenvalues.windows(2) {
        assert!(w[0].norm() <= w[1].norm());
    }
    for (l, mu) in s.eigenvalues.iter().zip(&s.mu_values) {
        assert!((l * mu - 1.0).norm() < 1e-14);
    }
    assert!(s.negative.iter().all(|n| *n));
    assert_eq!(s.non_real_count(), 0);
    assert!(s.min_relative_gap() > 1e-10);
}

#[test]
fn complex_pairs_beyond_five_halves() {
    let s = tau_spectrum(200, g(3.0), Parity::Odd, BoundaryCondition::Dirichlet).unwrap();
    assert!(s.non_real_count() >= 2);
    assert_eq!(s.non_real_count() % 2, 0);
    let s = tau_spectrum(50, g(0.5), Parity::Odd, BoundaryCondition::Dirichlet).unwrap();
    assert_eq!(s.non_real_count(), 0);
}
