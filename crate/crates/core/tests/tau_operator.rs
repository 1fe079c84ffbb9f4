use faer::Mat;
use gegtau::charpoly::charpoly_sequence;
use gegtau::field::ratio;
use gegtau::linalg::dense_eigs;
use gegtau::orthopoly::{gegenbauer_at_one, second_derivative_matrix};
use gegtau::spectra::{pencil_spectrum, tau_spectrum, BoundaryCondition};
use gegtau::tau_operator::{
    apply_double_integration, build_diff_pencil, build_gi2, gi2_dense_with, PencilVariant,
    Structure,
};
use gegtau::verify::{
    check_left_eigenvectors, check_matrix_matches_polynomial, check_matrix_matches_polynomial_exact,
};
use gegtau::{Error, GegenbauerIndex, Parity};
use num_rational::BigRational;

mod common;
use common::reference_gi2;

fn g(gamma: f64) -> GegenbauerIndex {
    GegenbauerIndex::new(gamma).unwrap()
}

#[test]
fn matches_reference_routine() {
    for m in 2..=8 {
        for gamma in [0.0, 0.5, 1.0, 1.5, 2.0] {
            for parity in [Parity::Even, Parity::Odd] {
                let got = build_gi2(m, g(gamma), parity).unwrap().rect();
                let want = reference_gi2(m, gamma, parity.offset());
                assert_eq!(want.len(), m + 1);
                for (i, row) in want.iter().enumerate() {
                    assert_eq!(row.len(), m);
                    for (j, w) in row.iter().enumerate() {
                        let a = got[(i, j)];
                        assert!(
                            (a - w).abs() <= 1e-15 * w.abs(),
                            "m={m} γ={gamma} {parity} ({i},{j}): {a} vs {w}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn exact_rational_three_mode_matrix() {
    let got: Vec<Vec<BigRational>> = gi2_dense_with(3, &ratio(0, 1), Parity::Even);
    let want = [
        [ratio(-1, 4), ratio(7, 96), ratio(-1, 240)],
        [ratio(1, 2), ratio(-1, 6), ratio(1, 48)],
        [ratio(0, 1), ratio(1, 24), ratio(-1, 30)],
        [ratio(0, 1), ratio(0, 1), ratio(1, 80)],
    ];
    for (row, w) in got.iter().zip(&want) {
        assert_eq!(row.as_slice(), w.as_slice());
    }
}

#[test]
fn legendre_first_column() {
    let a = build_gi2(6, g(0.5), Parity::Even).unwrap().rect();
    assert!((a[(0, 0)] + 1.0 / 3.0).abs() < 1e-16);
    assert!((a[(1, 0)] - 1.0 / 3.0).abs() < 1e-16);
    for i in 2..=6 {
        assert_eq!(a[(i, 0)], 0.0);
    }
}

#[test]
fn rejects_single_mode() {
    assert!(matches!(
        build_gi2(1, g(0.0), Parity::Odd),
        Err(Error::TooSmall { .. })
    ));
}

fn two_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn grid() -> Vec<BigRational> {
    vec![
        ratio(-49, 100),
        ratio(-1, 4),
        ratio(0, 1),
        ratio(1, 2),
        ratio(1, 1),
        ratio(3, 2),
        ratio(2, 1),
        ratio(5, 2),
    ]
}

#[test]
fn left_eigenvectors_are_polynomial_values() {
    for gamma in grid() {
        for parity in [Parity::Even, Parity::Odd] {
            for m in 2..=15 {
                let r = check_left_eigenvectors(m, &gamma, parity).unwrap();
                assert!(r.passed, "{r}");
            }
        }
    }
}

// Evaluated in doubles at the double eigenvalue, the row only holds while
// the decaying solution has not yet been swamped.
#[test]
fn double_precision_rows_hold_for_small_m() {
    for gamma in [-0.49, 0.0, 0.5, 1.0, 2.5] {
        for parity in [Parity::Even, Parity::Odd] {
            let seq = charpoly_sequence(5, g(gamma), parity);
            for m in 2..=5 {
                let sq = build_gi2(m, g(gamma), parity).unwrap().square();
                let norm = sq.singular_values().unwrap()[0];
                for mu in dense_eigs(&sq).unwrap() {
                    let mu = mu.re;
                    let v: Vec<f64> = (0..m).map(|l| seq[l].eval(&mu)).collect();
                    let res: Vec<f64> = (0..m)
                        .map(|j| (0..m).map(|i| v[i] * sq[(i, j)]).sum::<f64>() - mu * v[j])
                        .collect();
                    let r = two_norm(&res) / (two_norm(&v) * norm);
                    assert!(r <= 1e-8, "γ={gamma} {parity} m={m} μ={mu}: {r:e}");
                }
            }
        }
    }
}

#[test]
fn matrix_eigenvalues_are_polynomial_roots() {
    for gamma in grid() {
        for parity in [Parity::Even, Parity::Odd] {
            for m in 2..=20 {
                let r = check_matrix_matches_polynomial_exact(m, &gamma, parity).unwrap();
                assert!(r.passed, "{r}");
            }
        }
    }
    let r = check_matrix_matches_polynomial(12, g(0.3), Parity::Odd).unwrap();
    assert!(r.passed, "{r}");
}

#[test]
fn double_integration_inverts_second_derivative() {
    for gamma in [0.0, 0.5, 2.0] {
        for parity in [Parity::Even, Parity::Odd] {
            let m = 9;
            let mat = build_gi2(m, g(gamma), parity).unwrap();
            let f: Vec<f64> = (0..m)
                .map(|l| 1.0 / (1.0 + l as f64) - 0.3 * (l % 3) as f64)
                .collect();
            let u = apply_double_integration(&f, &mat).unwrap();
            let d2 = second_derivative_matrix(m + 1, g(gamma), parity);
            for k in 0..=m {
                let got: f64 = (0..=m).map(|l| d2[(k, l)] * u[l]).sum();
                let want = if k < m { f[k] } else { 0.0 };
                assert!(
                    (got - want).abs() < 1e-13,
                    "γ={gamma} {parity} k={k}: {got} vs {want}"
                );
            }
            let at_one: f64 = (0..=m)
                .map(|l| u[l] * gegenbauer_at_one(parity.degree(l), g(gamma)))
                .sum();
            assert!(at_one.abs() < 1e-13, "γ={gamma} {parity}: u(1) = {at_one}");
        }
    }
}

#[test]
fn pencils_share_the_tau_spectrum() {
    for gamma in [0.0, 0.5, 1.5] {
        for m in 2..=12 {
            let reference = tau_spectrum(m, g(gamma), Parity::Even, BoundaryCondition::Dirichlet)
                .unwrap()
                .sorted_real_parts();
            for variant in PencilVariant::ALL {
                if variant == PencilVariant::IerleyLegendre && gamma != 1.5 {
                    continue;
                }
                let s = pencil_spectrum(&build_diff_pencil(m, g(gamma), variant).unwrap()).unwrap();
                assert_eq!(s.non_real_count(), 0, "{variant} γ={gamma} m={m}");
                let got = s.sorted_real_parts();
                assert_eq!(got.len(), reference.len());
                for (a, b) in got.iter().zip(&reference) {
                    assert!(
                        (a - b).abs() <= 1e-8 * b.abs(),
                        "{variant} γ={gamma} m={m}: {a} vs {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn ierley_needs_three_halves() {
    let e = build_diff_pencil(6, g(0.5), PencilVariant::IerleyLegendre).unwrap_err();
    assert!(matches!(e, Error::VariantIndexMismatch { .. }));
}

#[test]
fn pencil_structures_hold() {
    for variant in PencilVariant::ALL {
        let p = build_diff_pencil(10, g(1.5), variant).unwrap();
        assert!(p.a_structure.holds(&p.a), "{variant} A");
        assert!(p.b_structure.holds(&p.b), "{variant} B");
    }
    assert!(!Structure::Diagonal.holds(&Mat::from_fn(2, 2, |_, _| 1.0)));
}

#[test]
fn variant_tags_round_trip() {
    for v in PencilVariant::ALL {
        assert_eq!(v.tag().parse::<PencilVariant>().unwrap(), v);
    }
    assert!("diff".parse::<PencilVariant>().is_err());
}
