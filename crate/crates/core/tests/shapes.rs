use foilspace::cst::{cst_surface, expand_odd_polynomial, ClassFunctionSpec, CstParams};
use foilspace::geometry::{
    validate_airfoil, BasisKind, BasisSpec, ShapeCoefficients, Surface, ValidityOptions,
};
use foilspace::parsec::{
    build_constraint_system, solve_coefficients, solve_system, ParsecParams, Side,
};
use foilspace::sampling::parsec_table2;
use proptest::prelude::*;

fn basis_kind() -> impl Strategy<Value = BasisKind> {
    prop_oneof![
        Just(BasisKind::Naca4Like),
        Just(BasisKind::HalfIntegerPowers),
        Just(BasisKind::OddPowersInT),
    ]
}

fn surface(kind: BasisKind, coeffs: Vec<f64>) -> Surface {
    let basis = BasisSpec::new(kind, coeffs.len()).unwrap();
    Surface::new(basis, ShapeCoefficients::new(coeffs)).unwrap()
}

fn parsec_in_table(unit: &[f64]) -> ParsecParams {
    let b = parsec_table2();
    ParsecParams::from_slice(&b.denormalize(unit).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn l_and_t_forms_agree(
        kind in basis_kind(),
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..8),
        ells in prop::collection::vec(0.0f64..=1.0, 101),
    ) {
        let s = surface(kind, coeffs);
        for ell in ells {
            let a = s.eval(ell).unwrap();
            let b = s.eval_t(ell.sqrt()).unwrap();
            prop_assert!((a - b).abs() <= 1e-13 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn slope_matches_chain_rule_and_differences(
        kind in basis_kind(),
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..8),
        ell in 0.05f64..0.95,
    ) {
        let s = surface(kind, coeffs);
        let d = s.slope(ell).unwrap();
        let via_t = s.slope_t(ell.sqrt()).unwrap() / (2.0 * ell.sqrt());
        prop_assert!((d - via_t).abs() <= 1e-12 * d.abs().max(1e-300) + 1e-14);
        let h = 1e-6;
        let fd = (s.eval(ell + h).unwrap() - s.eval(ell - h).unwrap()) / (2.0 * h);
        prop_assert!((fd - d).abs() <= 1e-5 * d.abs().max(1.0));
    }

    #[test]
    fn evaluation_is_linear_in_coefficients(
        kind in basis_kind(),
        a in prop::collection::vec(-1.0f64..1.0, 6),
        b in prop::collection::vec(-1.0f64..1.0, 6),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
        ell in 0.0f64..=1.0,
    ) {
        let combo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| alpha * x + beta * y).collect();
        let lhs = surface(kind, combo).eval(ell).unwrap();
        let rhs = alpha * surface(kind, a).eval(ell).unwrap() + beta * surface(kind, b).eval(ell).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-14 * (1.0 + lhs.abs()) * 8.0);
    }

    #[test]
    fn half_integer_nose_is_square_root(
        a1 in prop_oneof![-1.0f64..-0.05, 0.05f64..1.0],
        rest in prop::collection::vec(-1.0f64..1.0, 5),
    ) {
        let mut coeffs = vec![a1];
        coeffs.extend(rest);
        let s = surface(BasisKind::HalfIntegerPowers, coeffs);
        let ell = 1e-8;
        prop_assert!((s.eval(ell).unwrap() / (a1 * ell.sqrt()) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn parsec_constraints_hold_in_table_box(unit in prop::collection::vec(-1.0f64..=1.0, 11)) {
        let p = parsec_in_table(&unit);
        for side in [Side::Upper, Side::Lower] {
            let system = build_constraint_system(&p, side).unwrap();
            let a = solve_system(&system).unwrap();
            prop_assert!(system.residual(a.as_slice()) < 1e-9);
        }
        let pair = solve_coefficients(&p).unwrap();
        prop_assert!((pair.upper.eval(p.x1).unwrap() - p.x3).abs() < 1e-9);
        prop_assert!(pair.upper.slope(p.x1).unwrap().abs() < 1e-9);
        prop_assert!((pair.lower.eval(p.x2).unwrap() - p.x4).abs() < 1e-9);
        prop_assert!(pair.lower.slope(p.x2).unwrap().abs() < 1e-9);
    }

    #[test]
    fn parsec_nose_osculates_leading_edge_circle(unit in prop::collection::vec(-1.0f64..=1.0, 11)) {
        let p = parsec_in_table(&unit);
        let pair = solve_coefficients(&p).unwrap();
        let eps = p.x11;
        for k in 1..=50 {
            let ell = eps / 10.0 * k as f64 / 50.0;
            let ratio = pair.upper.eval(ell).unwrap() / (2.0 * eps * ell).sqrt();
            prop_assert!((ratio - 1.0).abs() < 0.05, "ratio {} at l = {}", ratio, ell);
        }
    }

    #[test]
    fn parsec_closed_tail_sums_to_zero(unit in prop::collection::vec(-1.0f64..=1.0, 11)) {
        let mut p = parsec_in_table(&unit);
        p.x5 = 0.0;
        p.x6 = 0.0;
        let pair = solve_coefficients(&p).unwrap();
        for s in [&pair.upper, &pair.lower] {
            let sum: f64 = s.coefficients().values.iter().sum();
            prop_assert!(sum.abs() < 1e-9);
        }
    }

    #[test]
    fn cst_expansion_matches_product(coeffs in prop::collection::vec(-2.0f64..2.0, 5)) {
        let spec = ClassFunctionSpec::default();
        let expanded = expand_odd_polynomial(&coeffs, &spec).unwrap();
        prop_assert_eq!(expanded.basis().t_powers(), vec![1, 3, 5, 7, 9, 11]);
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let product = cst_surface(t * t, &coeffs, &spec).unwrap();
            prop_assert!((product - expanded.eval_t(t).unwrap()).abs() < 1e-12);
        }
        prop_assert_eq!(cst_surface(0.0, &coeffs, &spec).unwrap(), 0.0);
        prop_assert_eq!(cst_surface(1.0, &coeffs, &spec).unwrap(), 0.0);
    }

    #[test]
    fn cst_nose_radius_from_leading_coefficient(
        x0 in 0.05f64..0.3,
        rest in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        let mut coeffs = vec![x0];
        coeffs.extend(rest);
        let eps = x0 * x0 / 2.0;
        let ell = 1e-8;
        let s = cst_surface(ell, &coeffs, &ClassFunctionSpec::default()).unwrap();
        prop_assert!((s / (2.0 * eps * ell).sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn mirrored_airfoil_has_same_validity(
        upper in prop::collection::vec(0.1f64..0.3, 5),
        lower in prop::collection::vec(-0.3f64..-0.1, 5),
    ) {
        let pair = CstParams::new(upper, lower).unwrap().surfaces().unwrap();
        let options = ValidityOptions { sharp_trailing_edge: true, ..Default::default() };
        let a = validate_airfoil(&pair, &options);
        let b = validate_airfoil(&pair.mirrored(), &options);
        prop_assert_eq!(a.feasible, b.feasible);
        prop_assert!(a.feasible);
        prop_assert!((a.min_gap - b.min_gap).abs() < 1e-15);
    }
}

#[test]
fn cst_nose_matches_circle_for_table_center() {
    let b = foilspace::sampling::cst_table3();
    let p = CstParams::from_flat(&b.center()).unwrap();
    let pair = p.surfaces().unwrap();
    let eps = p.upper[0] * p.upper[0] / 2.0;
    for k in 1..=50 {
        let ell = eps / 10.0 * k as f64 / 50.0;
        let ratio = pair.upper.eval(ell).unwrap() / (2.0 * eps * ell).sqrt();
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio} at l = {ell}");
    }
}
