use ihp_core::arith::Rat;
use ihp_core::cubic::{
    classify, flex_decomposition, rational_flexes, singular_points, CubicClass, PlaneCubic,
};
use ihp_core::projgeo::{evaluate, HomogForm};
use num_traits::Zero;
use proptest::prelude::*;

// y²z = x³ + a·x·z² + b·z³ always has the flex [0:1:0] with flex line z
fn weierstrass(a: i64, b: i64) -> Option<PlaneCubic> {
    PlaneCubic::parse(&format!("y^2*z - x^3 - ({a})*x*z^2 - ({b})*z^3")).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flex_decomposition_round_trips(a in -6i64..6, b in -6i64..6) {
        let d = weierstrass(a, b).unwrap();
        let z = HomogForm::parse_expr("z", 3).unwrap();
        let fd = flex_decomposition(&d, &z).unwrap();
        prop_assert!(fd.residual(d.form()).is_zero());
        prop_assert!(fd.c > Rat::zero());
        for fl in rational_flexes(&d).unwrap() {
            prop_assert!(flex_decomposition(&d, &fl.line).unwrap().residual(d.form()).is_zero());
        }
    }

    #[test]
    fn singular_iff_discriminant_vanishes(a in -6i64..6, b in -6i64..6) {
        let d = weierstrass(a, b).unwrap();
        let disc = 4 * a * a * a + 27 * b * b;
        let class = classify(&d).unwrap();
        prop_assert_eq!(class == CubicClass::Smooth, disc != 0);
        for s in singular_points(&d).unwrap() {
            prop_assert!(evaluate(d.form(), &s.point).unwrap().is_zero());
            prop_assert_eq!(d.multiplicity_at(&s.point).unwrap(), s.multiplicity);
        }
        if disc == 0 {
            prop_assert!(matches!(class, CubicClass::Nodal | CubicClass::Cuspidal));
        }
    }
}
