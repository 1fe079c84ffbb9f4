use faer::Mat;
use gegtau::charpoly::{
    charpoly_direct_with, charpoly_sequence, charpoly_sequence_with, KSequence,
};
use gegtau::field::ratio;
use gegtau::io::{
    coordinate_to_string, matrix_to_csv, parse_coordinate, parse_float_grid, parse_matrix_csv,
    parse_polynomial_json, parse_usize_grid, polynomial_to_json,
};
use gegtau::orthopoly::{gegenbauer_eval, second_derivative_matrix};
use gegtau::poly::from_real_roots;
use gegtau::tau_operator::{apply_double_integration, build_gi2};
use gegtau::verify::{
    check_matrix_matches_polynomial, check_positive_pair, check_stable, hb_compose,
};
use gegtau::{GegenbauerIndex, MuPolynomial, Parity};
use proptest::prelude::*;
use serde_json::json;

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

fn idx(gamma: f64) -> GegenbauerIndex {
    GegenbauerIndex::new(gamma).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_square_substitutes(c in prop::collection::vec(-5.0f64..5.0, 1..8), z in -1.5f64..1.5) {
        let p = MuPolynomial::new(c);
        let lhs = p.compose_square().eval(&z);
        let rhs = p.eval(&(z * z));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn gegenbauer_parity(n in 0usize..40, gamma in -0.49f64..4.0, x in -1.0f64..1.0) {
        let a = gegenbauer_eval(n, idx(gamma), x).unwrap();
        let b = gegenbauer_eval(n, idx(gamma), -x).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn k_recurrence_tracks_closed_form(gamma in -0.49f64..4.0) {
        let closed = KSequence::closed_form(idx(gamma), 200);
        let rec = KSequence::by_recurrence(idx(gamma), 200);
        for (n, (a, b)) in closed.values.iter().zip(&rec.values).enumerate() {
            let scale = a.abs().max(b.abs());
            // K vanishes identically at γ = 1/2 and 3/2; near those points
            // the two forms agree to the cancellation left in the factor
            let tol = 1e-13 * scale + 1e-15 * closed.values.iter().skip(3).map(|v| v.abs()).fold(0.0, f64::max);
            prop_assert!((a - b).abs() <= tol, "n={} {} vs {}", n, a, b);
        }
    }

    #[test]
    fn rational_recurrence_is_exact(num in -4i64..12, den in 1i64..7, p in parity()) {
        prop_assume!(2 * num > -den);
        let gamma = ratio(num, den);
        for (m, q) in charpoly_sequence_with(10, &gamma, p).iter().enumerate() {
            prop_assert_eq!(q, &charpoly_direct_with(p.degree(m), &gamma));
        }
    }

    #[test]
    fn matrix_eigenvalues_are_roots(m in 2usize..12, gamma in -0.45f64..2.5, p in parity()) {
        let r = check_matrix_matches_polynomial(m, idx(gamma), p).unwrap();
        prop_assert!(r.passed, "{}", r);
    }

    #[test]
    fn polynomial_roots_interlace(m in 1usize..12, gamma in -0.45f64..2.5) {
        let p = charpoly_sequence(m, idx(gamma), Parity::Even);
        let q = charpoly_sequence(m, idx(gamma), Parity::Odd);
        let r = check_positive_pair(&p[m], &q[m - 1]).unwrap();
        prop_assert!(r.passed, "{}", r);
        let r = check_positive_pair(&q[m], &p[m]).unwrap();
        prop_assert!(r.passed, "{}", r);
    }

    #[test]
    fn double_integration_inverts(f in prop::collection::vec(-1.0f64..1.0, 2..14), gamma in -0.4f64..3.0, p in parity()) {
        let m = f.len();
        let mat = build_gi2(m, idx(gamma), p).unwrap();
        let u = apply_double_integration(&f, &mat).unwrap();
        let d2 = second_derivative_matrix(m + 1, idx(gamma), p);
        let scale = u.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for k in 0..=m {
            let got: f64 = (0..=m).map(|l| d2[(k, l)] * u[l]).sum();
            let want = if k < m { f[k] } else { 0.0 };
            prop_assert!((got - want).abs() <= 1e-10 * scale, "k={} {} vs {}", k, got, want);
        }
    }

    #[test]
    fn interlaced_roots_compose_to_stable(mut roots in prop::collection::vec(0.05f64..20.0, 2..9), lead in 0.1f64..10.0) {
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-3 * b.abs());
        prop_assume!(roots.len() >= 2);
        let neg: Vec<f64> = roots.iter().map(|r| -r).collect();
        // alternate roots between the two factors
        let r1: Vec<f64> = neg.iter().step_by(2).copied().collect();
        let r2: Vec<f64> = neg.iter().skip(1).step_by(2).copied().collect();
        let om1 = from_real_roots(lead, &r1);
        let om2 = from_real_roots(1.0, &r2);
        let pair = check_positive_pair(&om1, &om2).unwrap();
        let stable = check_stable(&hb_compose(&om1, &om2)).unwrap();
        prop_assert_eq!(pair.passed, stable.passed, "{} / {}", pair, stable);
    }

    #[test]
    fn matrix_csv_round_trips(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-1e300f64..1e300, 36)) {
        let a = Mat::from_fn(rows, cols, |i, j| seed[i * 6 + j] * if (i + j) % 3 == 0 { 1e-310 } else { 1.0 });
        let b = parse_matrix_csv(&matrix_to_csv(&a)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn coordinate_round_trips(entries in prop::collection::btree_map((0usize..7, 0usize..5), -1e6f64..1e6, 0..12)) {
        let triplets: Vec<(usize, usize, f64)> = entries.iter().map(|(&(i, j), &v)| (i, j, v)).collect();
        let c = parse_coordinate(&coordinate_to_string(7, 5, &triplets)).unwrap();
        prop_assert_eq!((c.rows, c.cols), (7, 5));
        prop_assert_eq!(c.triplets, triplets);
    }

    #[test]
    fn polynomial_json_round_trips(c in prop::collection::vec(-1e12f64..1e12, 1..20)) {
        let p = MuPolynomial::new(c);
        let q = parse_polynomial_json(&polynomial_to_json(&p, json!({}))).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn float_list_round_trips(v in prop::collection::vec(-1e3f64..1e3, 1..10)) {
        let text = v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        prop_assert_eq!(parse_float_grid(&text).unwrap(), v);
    }

    #[test]
    fn parsers_never_panic(s in ".{0,200}") {
        let _ = parse_matrix_csv(&s);
        let _ = parse_coordinate(&s);
        let _ = parse_polynomial_json(&s);
        let _ = parse_float_grid(&s);
        let _ = parse_usize_grid(&s);
    }

    #[test]
    fn structured_junk_never_panics(
        head in "[0-9 ]{0,12}",
        body in prop::collection::vec("[-0-9e.,:% a-z\\[\\]{}\"]{0,16}", 0..6),
    ) {
        let text = format!("{head}\n{}", body.join("\n"));
        let _ = parse_coordinate(&text);
        let _ = parse_matrix_csv(&text);
        let _ = parse_polynomial_json(&text);
        let _ = parse_float_grid(&body.join(","));
    }
}
