mod common;

use asympl::exterior::{KForm, VecField};
use asympl::reduction::{check_momentum_map, MomentumData};
use asympl::symplectic::AlmostSymplectic;
use asympl::tangent::TangentChart;
use asympl::Chart;
use proptest::prelude::*;
use rand::Rng;

fn setup(seed: u64) -> (rand_chacha::ChaCha8Rng, TangentChart) {
    let mut r = common::rng(seed);
    let n = r.gen_range(1..=3);
    (r, TangentChart::new(&common::chart(n)).unwrap())
}

proptest! {
    #![proptest_config(common::config(60))]

    #[test]
    fn complete_lift_commutes_with_d(seed in any::<u64>()) {
        let (mut r, tc) = setup(seed);
        let k = r.gen_range(0..=tc.n().min(2));
        let th = common::form(&mut r, tc.base(), k, 2, false);
        prop_assert_eq!(tc.complete_lift(&th.ext_d()).unwrap(), tc.complete_lift(&th).unwrap().ext_d());
    }

    #[test]
    fn complete_lift_of_interior(seed in any::<u64>()) {
        let (mut r, tc) = setup(seed);
        let k = r.gen_range(1..=tc.n().min(2));
        let th = common::form(&mut r, tc.base(), k, 2, false);
        let x = common::field(&mut r, tc.base(), 2);
        let xc = tc.complete_lift_field(&x).unwrap();
        prop_assert_eq!(
            tc.complete_lift(&th.interior(&x).unwrap()).unwrap(),
            tc.complete_lift(&th).unwrap().interior(&xc).unwrap()
        );
    }

    #[test]
    fn complete_lift_of_lie_derivative(seed in any::<u64>()) {
        let (mut r, tc) = setup(seed);
        let k = r.gen_range(0..=tc.n().min(2));
        let th = common::form(&mut r, tc.base(), k, 2, false);
        let x = common::field(&mut r, tc.base(), 2);
        let xc = tc.complete_lift_field(&x).unwrap();
        prop_assert_eq!(
            tc.complete_lift(&th).unwrap().lie_derivative(&xc).unwrap(),
            tc.complete_lift(&th.lie_derivative(&x).unwrap()).unwrap()
        );
    }

    #[test]
    fn lifted_fields_and_brackets(seed in any::<u64>()) {
        let (mut r, tc) = setup(seed);
        let x = common::field(&mut r, tc.base(), 2);
        let y = common::field(&mut r, tc.base(), 2);
        let f = common::poly(&mut r, tc.n(), 3, 2);
        let (xc, yc) = (tc.complete_lift_field(&x).unwrap(), tc.complete_lift_field(&y).unwrap());
        let (xv, yv) = (tc.vertical_lift_field(&x).unwrap(), tc.vertical_lift_field(&y).unwrap());
        let xy = x.bracket(&y).unwrap();
        prop_assert_eq!(xc.bracket(&yc).unwrap(), tc.complete_lift_field(&xy).unwrap());
        prop_assert_eq!(xc.bracket(&yv).unwrap(), tc.vertical_lift_field(&xy).unwrap());
        prop_assert!(xv.bracket(&yv).unwrap().is_zero());
        let fc = tc.complete_lift_fn(&f).unwrap();
        prop_assert_eq!(xc.apply(&fc), tc.complete_lift_fn(&x.apply(&f)).unwrap());
        prop_assert_eq!(xv.apply(&fc), tc.vertical_lift_fn(&x.apply(&f)).unwrap());
        // S X^c = X^v
        prop_assert_eq!(tc.s(&xc).unwrap(), xv);
    }

    #[test]
    fn tangent_structure_squares_to_zero(seed in any::<u64>()) {
        let (mut r, tc) = setup(seed);
        let v = common::field(&mut r, tc.total(), 2);
        prop_assert!(tc.s(&tc.s(&v).unwrap()).unwrap().is_zero());
        let beta = common::form(&mut r, tc.total(), 1, 2, false);
        prop_assert!(tc.compose_s(&tc.compose_s(&beta).unwrap()).unwrap().is_zero());
        // (β∘S)(V) = β(SV)
        prop_assert_eq!(
            tc.compose_s(&beta).unwrap().interior(&v).unwrap(),
            beta.interior(&tc.s(&v).unwrap()).unwrap()
        );
    }

    #[test]
    fn vertical_lift_is_a_homomorphism(seed in any::<u64>()) {
        let (mut r, tc) = setup(seed);
        let k = r.gen_range(0..=tc.n().min(2));
        let a = common::form(&mut r, tc.base(), k, 2, false);
        let b = common::form(&mut r, tc.base(), 1, 2, false);
        prop_assert_eq!(
            tc.vertical_lift(&a.wedge(&b).unwrap()).unwrap(),
            tc.vertical_lift(&a).unwrap().wedge(&tc.vertical_lift(&b).unwrap()).unwrap()
        );
        prop_assert_eq!(tc.vertical_lift(&a.ext_d()).unwrap(), tc.vertical_lift(&a).unwrap().ext_d());
        let f = common::poly(&mut r, tc.n(), 2, 2);
        let g = common::poly(&mut r, tc.n(), 2, 2);
        prop_assert_eq!(
            tc.complete_lift_fn(&(&f * &g)).unwrap(),
            &(&tc.complete_lift_fn(&f).unwrap() * &tc.vertical_lift_fn(&g).unwrap())
                + &(&tc.vertical_lift_fn(&f).unwrap() * &tc.complete_lift_fn(&g).unwrap())
        );
    }
}

fn ex32() -> AlmostSymplectic {
    let c = Chart::new("M", &["x1", "x2", "x3", "x4"])
        .unwrap()
        .with_domain("x1 > 0, x2 > 0")
        .unwrap();
    let w = KForm::parse("x1*dx2^dx3 + x2*dx1^dx4", &c, Some(2)).unwrap();
    AlmostSymplectic::build(&c, &w).unwrap()
}

#[test]
fn complete_lift_of_momentum_map() {
    let s = ex32();
    let tc = TangentChart::new(s.chart()).unwrap();
    let x = VecField::parse("@x3 + @x4", s.chart()).unwrap();
    let phi = s.chart().parse("x1*x2").unwrap();
    assert!(check_momentum_map(&s, &MomentumData::new(vec![(x.clone(), phi.clone())])).unwrap().holds());
    let (lifted, v) = tc.transport(&s, &phi).unwrap();
    assert!(v.holds(), "{v}");
    let md = MomentumData::new(vec![(
        tc.complete_lift_field(&x).unwrap(),
        tc.complete_lift_fn(&phi).unwrap(),
    )]);
    let v = check_momentum_map(&lifted, &md).unwrap();
    assert!(v.holds(), "{v}");
    assert_eq!(md.components[0].1, tc.total().parse("x2*y1 + x1*y2").unwrap());
}
