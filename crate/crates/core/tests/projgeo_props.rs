use ihp_core::arith::{big, Rat};
use ihp_core::projgeo::{
    evaluate, intersection_multiplicity, intersection_multiplicity_resultant, line_through_points,
    parametrize_conic, HomogForm, ProjPoint, RationalParam,
};
use num_traits::Zero;
use proptest::prelude::*;

fn form(s: &str) -> HomogForm {
    HomogForm::parse_expr(s, 3).unwrap()
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, n)
}

fn point() -> impl Strategy<Value = ProjPoint> {
    prop::collection::vec(-9i64..=9, 3)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
        .prop_map(|v| ProjPoint::from_ints(&v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn evaluation_is_a_ring_map(a in coeffs(6), b in coeffs(10), p in point()) {
        let f = HomogForm::from_ints(3, 2, &a).unwrap();
        let g = HomogForm::from_ints(3, 3, &b).unwrap();
        let fp = evaluate(&f, &p).unwrap();
        let gp = evaluate(&g, &p).unwrap();
        prop_assert_eq!(evaluate(&f.mul(&g), &p).unwrap(), &fp * &gp);
        prop_assert_eq!(evaluate(&f.pow(2).add(&f.pow(2)), &p).unwrap(), Rat::from_integer(big(2)) * &fp * &fp);
    }

    #[test]
    fn text_round_trip(a in coeffs(10)) {
        let f = HomogForm::from_ints(3, 3, &a).unwrap();
        prop_assert_eq!(HomogForm::parse_coeff_list(&f.to_coeff_list()).unwrap(), f.clone());
        prop_assert_eq!(HomogForm::parse_expr(&f.to_string(), 3).unwrap(), f);
    }

    #[test]
    fn euler_identity(a in coeffs(10), p in point()) {
        // Σ xᵢ·∂ᵢF = 3F
        let f = HomogForm::from_ints(3, 3, &a).unwrap();
        let x = p.as_rats();
        let lhs = f.gradient().iter().zip(&x).fold(Rat::zero(), |acc, (g, xi)| acc + g.eval(&x).unwrap() * xi);
        prop_assert_eq!(lhs, f.eval(&x).unwrap() * Rat::from_integer(big(3)));
    }

    #[test]
    fn lines_through_two_points(p in point(), q in point(), s in -6i64..6, t in -6i64..6) {
        prop_assume!(p != q && (s, t) != (0, 0));
        let l = line_through_points(&p, &q).unwrap();
        let par = RationalParam::line_through(&p, &q).unwrap();
        let r = par.point_at(&Rat::from_integer(big(s)), &Rat::from_integer(big(t))).unwrap();
        prop_assert!(evaluate(&l, &r).unwrap().is_zero());
        prop_assert_eq!(par.compose(&l).unwrap().is_zero(), true);
    }

    #[test]
    fn conic_parametrization_stays_on_the_conic(t in -20i64..20, s in 1i64..20) {
        let c = form("x^2 + y^2 - z^2");
        let par = parametrize_conic(&c, &ProjPoint::from_ints(&[3, 4, 5]).unwrap()).unwrap();
        let p = par.point_at(&Rat::from_integer(big(s)), &Rat::from_integer(big(t))).unwrap();
        prop_assert!(evaluate(&c, &p).unwrap().is_zero());
    }

    // the two multiplicity routes agree on lines through points of a cubic
    #[test]
    fn multiplicity_routes_agree(q in point(), k in 0usize..6) {
        let f = form("z*y^2 - x^3 - z^3");
        let pts = [[2, 3, 1], [2, -3, 1], [0, 1, 1], [0, -1, 1], [-1, 0, 1], [0, 1, 0]];
        let p = ProjPoint::from_ints(&pts[k]).unwrap();
        prop_assume!(p != q);
        let line = line_through_points(&p, &q).unwrap();
        let par = RationalParam::line_through(&p, &q).unwrap();
        prop_assume!(!par.compose(&f).unwrap().is_zero());
        prop_assert_eq!(
            intersection_multiplicity(&f, &par, &p).unwrap(),
            intersection_multiplicity_resultant(&f, &line, &p).unwrap()
        );
    }
}
