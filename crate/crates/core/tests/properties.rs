use std::f64::consts::{PI, TAU};

use lorentz_harmonics::diffcheck::{partial6, ScalarField6, Var};
use lorentz_harmonics::grouprep::{
    hyperspherical_m, rep_matrix_formula, rep_matrix_oracle, sl2c_fundamental, su2_from_euler, su2_matrix_element, zfn,
    ComplexEulerAngles,
};
use lorentz_harmonics::gysystem::{
    build_lambda, dirac_chain, dirac_lambda_literal, dirac_operators_literal, invariance_check, maxwell_chain,
    maxwell_lambda_literal, maxwell_operators_literal, reference_bivector_metric, DottedRadical,
};
use lorentz_harmonics::liealg::{
    build_operators, infinitesimal_from_subgroup, ladder_coefficients, max_abs, Flavor, Ladder, SubgroupKind,
};
use lorentz_harmonics::numkit::{
    bessel_j_half, bessel_j_series, gamma_half, hyp2f1_terminating, pochhammer, HalfInt, C64,
};
use lorentz_harmonics::radial::{build_rfs, dirac_kappa, integrate, reduce_dirac, RadialMeta, RfsForm};
use lorentz_harmonics::wavefield::{
    assemble, sphere_cartesian, substitution_residual, tabulate, SphereCoords, Substitution, WaveKind, WaveSpec,
};
use proptest::prelude::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn weight(max_twice: i32) -> impl Strategy<Value = HalfInt> {
    (0..=max_twice).prop_map(HalfInt::from_twice)
}

fn weight_and_labels(max_twice: i32) -> impl Strategy<Value = (HalfInt, HalfInt, HalfInt)> {
    weight(max_twice).prop_flat_map(|l| {
        let d = l.dim();
        (Just(l), 0..d, 0..d).prop_map(|(l, i, j)| (l, l.descending()[i], l.descending()[j]))
    })
}

prop_compose! {
    fn euler_angles()(phi in 0.0..TAU, epsilon in -1.0..1.0, theta in 0.1..3.0, tau in -1.0..1.0, psi in 0.0..TAU, varep in -1.0..1.0)
        -> ComplexEulerAngles {
        ComplexEulerAngles::new(phi, epsilon, theta, tau, psi, varep)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_is_gamma_ratio(twice_a in 1..20i32, k in 0..=12u32) {
        let a = HalfInt::from_twice(twice_a);
        let ratio = gamma_half(a + HalfInt::from_int(k as i32)).unwrap() / gamma_half(a).unwrap();
        let p = pochhammer(c(a.value()), k);
        prop_assert!((p.re - ratio).abs() <= 1e-11 * ratio.abs());
        prop_assert_eq!(p.im, 0.0);
    }

    #[test]
    fn terminating_series_symmetric(p in 0..8i32, b in -3.0..3.0f64, cc in 0.3..4.0f64, z in -0.9..0.9f64) {
        let a = c(-p as f64);
        let x = hyp2f1_terminating(a, c(b), c(cc + 0.123), c(z)).unwrap();
        let y = hyp2f1_terminating(c(b), a, c(cc + 0.123), c(z)).unwrap();
        prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn half_order_bessel_forms_agree(s in 0..=4u32, z in 0.1..20.0f64) {
        let closed = bessel_j_half(s, c(z)).unwrap();
        let series = bessel_j_series(HalfInt::from_twice(2 * s as i32 + 1), c(z), 40).value;
        prop_assert!((closed - series).norm() <= 1e-10);
    }

    #[test]
    fn half_integers_parse_both_forms(twice in -40..40i32) {
        let h = HalfInt::from_twice(twice);
        prop_assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        let decimal = format!("{}", twice as f64 / 2.0);
        prop_assert_eq!(decimal.parse::<HalfInt>().unwrap(), h);
    }

    #[test]
    fn oracle_is_homomorphism(l in weight(5), a in euler_angles(), b in euler_angles()) {
        let (g, h) = (sl2c_fundamental(&a), sl2c_fundamental(&b));
        let lhs = rep_matrix_oracle(l, &(g * h), false).unwrap().entries;
        let rhs = rep_matrix_oracle(l, &g, false).unwrap().entries * rep_matrix_oracle(l, &h, false).unwrap().entries;
        prop_assert!(max_abs(&(&lhs - &rhs)) <= 1e-10 * (1.0 + max_abs(&lhs)));
    }

    #[test]
    fn hypergeometric_matches_oracle((l, m, n) in weight_and_labels(5), a in euler_angles(), dotted in any::<bool>()) {
        let oracle = rep_matrix_oracle(l, &sl2c_fundamental(&a), dotted).unwrap();
        let expect = oracle.get(m, n).unwrap();
        let got = hyperspherical_m(l, m, n, &a, dotted).unwrap();
        prop_assert!((got - expect).norm() <= 1e-9 * expect.norm().max(1.0));
        let full = rep_matrix_formula(l, &a, dotted).unwrap();
        prop_assert_eq!(full.get(m, n).unwrap(), got);
    }

    #[test]
    fn rotation_elements_match_oracle((l, m, n) in weight_and_labels(5), phi in 0.0..TAU, theta in 0.0..PI, psi in 0.0..TAU) {
        let oracle = rep_matrix_oracle(l, &su2_from_euler(phi, theta, psi), false).unwrap();
        let got = su2_matrix_element(l, m, n, phi, theta, psi).unwrap();
        prop_assert!((got - oracle.get(m, n).unwrap()).norm() <= 1e-10);
        prop_assert!(got.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn rotations_are_unitary(l in weight(5), phi in 0.0..TAU, theta in 0.0..PI, psi in 0.0..TAU) {
        let t = rep_matrix_formula(l, &ComplexEulerAngles::real(phi, theta, psi), false).unwrap().entries;
        let d = t.nrows();
        let gram = t.adjoint() * &t;
        prop_assert!(max_abs(&(gram - lorentz_harmonics::grouprep::CMat::identity(d, d))) <= 1e-10);
    }

    #[test]
    fn representation_is_unimodular(l in weight(5), a in euler_angles(), dotted in any::<bool>()) {
        let det = rep_matrix_formula(l, &a, dotted).unwrap().entries.determinant();
        prop_assert!((det - c(1.0)).norm() <= 1e-9 * (1.0 + det.norm()));
    }

    #[test]
    fn kernel_symmetric_in_labels((l, m, n) in weight_and_labels(6), theta in 0.1..3.0f64, tau in -1.5..1.5f64) {
        let a = zfn(l, m, n, theta, tau).unwrap();
        let b = zfn(l, n, m, theta, tau).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn polynomial_partials_exact(coef in prop::array::uniform4(-2.0..2.0f64), a in euler_angles()) {
        let f = ScalarField6::new(move |p: &ComplexEulerAngles| {
            let x = p.as_array();
            c(coef[0] * x[2].powi(3) + coef[1] * x[2] * x[3] * x[3] + coef[2] * x[0] * x[1] + coef[3] * x[5].powi(2))
        });
        let x = a.as_array();
        let exact = [
            coef[2] * x[1],
            coef[2] * x[0],
            3.0 * coef[0] * x[2] * x[2] + coef[1] * x[3] * x[3],
            2.0 * coef[1] * x[2] * x[3],
            0.0,
            2.0 * coef[3] * x[5],
        ];
        for (k, var) in [Var::Phi, Var::Epsilon, Var::Theta, Var::Tau, Var::Psi, Var::Varep].into_iter().enumerate() {
            let d = partial6(&f, var, &a).unwrap();
            prop_assert!((d - c(exact[k])).norm() <= 1e-9, "{:?}: {} vs {}", var, d, exact[k]);
        }
    }

    #[test]
    fn invariance_under_random_transformations(a in euler_angles(), which in 0..4usize) {
        let (sys, ops, dops) = match which {
            0 => { let ch = dirac_chain(); (build_lambda(&ch, DottedRadical::Mirrored).unwrap(), ch.undotted.operators(Flavor::Plain).unwrap(), ch.dotted.operators(Flavor::Tilde).unwrap()) }
            1 => { let ch = maxwell_chain(); (build_lambda(&ch, DottedRadical::Mirrored).unwrap(), ch.undotted.operators(Flavor::Plain).unwrap(), ch.dotted.operators(Flavor::Tilde).unwrap()) }
            2 => { let (o, d) = dirac_operators_literal(); (dirac_lambda_literal(), o, d) }
            _ => { let (o, d) = maxwell_operators_literal(); (maxwell_lambda_literal(), o, d) }
        };
        let rep = invariance_check(&sys, &ops, &dops, &a, &reference_bivector_metric()).unwrap();
        prop_assert!(rep.lambda_residual <= 1e-9);
        prop_assert!(rep.metric_residual <= 1e-9);
    }

    #[test]
    fn sphere_coordinates_square_to_radius(r in 0.2..5.0f64, rs in 0.2..5.0f64, a in euler_angles()) {
        let z = sphere_cartesian(&SphereCoords::new(r, rs, a));
        prop_assert!((z.square() - c(r * r)).norm() <= 1e-12 * (1.0 + r * r));
        prop_assert!((z.square_dual() - c(rs * rs)).norm() <= 1e-12 * (1.0 + rs * rs));
    }

    #[test]
    fn bracket_substitutions_hold((l, m, n) in weight_and_labels(6), theta in 0.4..2.7f64, tau in -1.0..1.0f64, below in any::<bool>(), dotted in any::<bool>()) {
        let which = if below { Substitution::FromBelow } else { Substitution::FromAbove };
        if let Ok(v) = substitution_residual(l, m, n, theta, tau, which, dotted) {
            prop_assert!(v <= 1e-5);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generators_are_subgroup_derivatives(twice in 0..=6i32, axis in 1..=3usize) {
        let l = HalfInt::from_twice(twice);
        let ops = build_operators(l, Flavor::Plain).unwrap();
        let rot = infinitesimal_from_subgroup(l, axis, SubgroupKind::Rotation).unwrap();
        let boost = infinitesimal_from_subgroup(l, axis, SubgroupKind::Boost).unwrap();
        prop_assert!(max_abs(&(rot - &ops.a[axis - 1])) <= 1e-7);
        prop_assert!(max_abs(&(boost - &ops.b[axis - 1])) <= 1e-7);
    }

    #[test]
    fn integration_is_linear(l_dot in 0..3usize, mass in 0.0..2.0f64, f in prop::array::uniform4(-1.0..1.0f64)) {
        let l_dot = HalfInt::from_twice(2 * l_dot as i32 + 1);
        let k = dirac_kappa(mass);
        let meta = RadialMeta::new(HalfInt::HALF, l_dot, HalfInt::HALF, HalfInt::HALF, k, k);
        let sys = build_rfs(&dirac_chain(), &meta, RfsForm::CrossWeight, DottedRadical::Mirrored).unwrap();
        let u = [C64::new(f[0], f[1]), c(1.0), c(0.5), C64::new(0.0, -1.0)];
        let v = [c(f[2]), C64::new(0.0, f[3]), c(-0.3), c(2.0)];
        let w: Vec<C64> = u.iter().zip(&v).map(|(x, y)| x + y * 2.0).collect();
        let (pu, pv, pw) = (
            integrate(&sys, &u, 0.5, 3.0, 200).unwrap(),
            integrate(&sys, &v, 0.5, 3.0, 200).unwrap(),
            integrate(&sys, &w, 0.5, 3.0, 200).unwrap(),
        );
        for j in 0..4 {
            let combo = pu.last()[j] + pv.last()[j] * 2.0;
            prop_assert!((pw.last()[j] - combo).norm() <= 1e-10 * (1.0 + combo.norm()));
        }
    }
}

#[test]
fn ladder_coefficients_match_operator_action() {
    for twice in 0..=6 {
        let l = HalfInt::from_twice(twice);
        let ops = build_operators(l, Flavor::Plain).unwrap();
        let xy = lorentz_harmonics::liealg::xy_basis(&ops);
        let d = l.dim();
        // on a single weight only the Y family acts; i Y carries the real coefficients
        for (which, mat) in [(Ladder::YPlus, &xy.y_plus), (Ladder::YMinus, &xy.y_minus), (Ladder::Y3, &xy.y[2])] {
            for (col, &m) in l.descending().iter().enumerate() {
                let (coef, (m2, _)) = ladder_coefficients(l, m, HalfInt::ZERO, HalfInt::ZERO, which);
                for row in 0..d {
                    let expect = if coef != 0.0 && l.row_of(m2) == Some(row) { coef } else { 0.0 };
                    assert!((mat[(row, col)] * C64::new(0.0, 1.0) - c(expect)).norm() < 1e-12, "{which:?} l={l} m={m}");
                }
            }
        }
    }
}

#[test]
fn integration_converges_at_fourth_order() {
    let k = dirac_kappa(1.0);
    let meta = RadialMeta::new(HalfInt::HALF, HalfInt::from_twice(3), HalfInt::HALF, HalfInt::HALF, k, k);
    let reduced =
        reduce_dirac(&build_rfs(&dirac_chain(), &meta, RfsForm::CrossWeight, DottedRadical::Mirrored).unwrap())
            .unwrap();
    let exact = reduced.scalar_closed_form(0, c(1.0)).unwrap();
    let exact_dot = reduced.scalar_closed_form(1, c(1.0)).unwrap();
    let f0 = [exact.value(0.5), exact_dot.value(0.5)];
    let errors: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let p = integrate(&reduced, &f0, 0.5, 5.0, n).unwrap();
            (p.last()[0] - exact.value(5.0)).norm().max((p.last()[1] - exact_dot.value(5.0)).norm())
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 3.8, "observed order {order} from errors {errors:?}");
    }
}

#[test]
fn integration_matches_power_exponential() {
    for twice_dot in [1, 3, 5] {
        for mass in [0.5, 1.0] {
            let k = dirac_kappa(mass);
            let meta =
                RadialMeta::new(HalfInt::HALF, HalfInt::from_twice(twice_dot), HalfInt::HALF, HalfInt::HALF, k, k);
            let red =
                reduce_dirac(&build_rfs(&dirac_chain(), &meta, RfsForm::CrossWeight, DottedRadical::Mirrored).unwrap())
                    .unwrap();
            let forms = [red.scalar_closed_form(0, c(1.0)).unwrap(), red.scalar_closed_form(1, c(1.0)).unwrap()];
            let p = integrate(&red, &[forms[0].value(0.5), forms[1].value(0.5)], 0.5, 5.0, 2048).unwrap();
            for (i, r) in p.r.iter().enumerate() {
                for (j, form) in forms.iter().enumerate() {
                    let e = form.value(*r);
                    assert!((p.values[i][j] - e).norm() <= 1e-8 * e.norm(), "l_dot={twice_dot}/2 mass={mass} r={r}");
                }
            }
        }
    }
}

#[test]
fn weyl_is_massless_dirac() {
    for n in [HalfInt::HALF, -HalfInt::HALF] {
        let weyl = assemble(&WaveSpec::new(WaveKind::Weyl, HalfInt::HALF, n, 0.0)).unwrap();
        let dirac = assemble(&WaveSpec::new(WaveKind::Dirac, HalfInt::HALF, n, 0.0)).unwrap();
        let a = ComplexEulerAngles::new(0.3, 0.1, 1.1, -0.4, 0.0, 0.0);
        let r = [0.6, 1.7, 4.2];
        let tw = tabulate(&weyl, &r, a).unwrap();
        let td = tabulate(&dirac, &r, a).unwrap();
        assert_eq!(tw.radial, td.radial);
        assert_eq!(tw.psi, td.psi);
    }
}
