use super::*;

fn r2() -> TangentChart {
    TangentChart::new(&Chart::new("R2", &["x1", "x2"]).unwrap()).unwrap()
}

fn id2(tc: &TangentChart) -> Vec<Vec<Expr>> {
    let _ = tc;
    vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), Expr::one()]]
}

fn tf(tc: &TangentChart, s: &str) -> VecField {
    VecField::parse(s, tc.total()).unwrap()
}

#[test]
fn chart_and_structure() {
    let tc = r2();
    assert_eq!(tc.total().coords(), &["x1", "x2", "y1", "y2"]);
    let other = TangentChart::new(&Chart::new("B", &["u", "v"]).unwrap()).unwrap();
    assert_eq!(other.total().coords(), &["u", "v", "y_u", "y_v"]);
    let v = tf(&tc, "x2*@x1 + @y2");
    assert_eq!(tc.s(&v).unwrap(), tf(&tc, "x2*@y1"));
    assert!(tc.s(&tc.s(&v).unwrap()).unwrap().is_zero());
}

#[test]
fn lift_examples() {
    let tc = r2();
    let b = tc.base();
    assert_eq!(tc.complete_lift_fn(&b.parse("x1").unwrap()).unwrap(), tc.y(0));
    let x = VecField::parse("x1*@x1", b).unwrap();
    assert_eq!(tc.complete_lift_field(&x).unwrap(), tf(&tc, "x1*@x1 + y1*@y1"));
    let sigma = KForm::parse("dx1^dx2", b, None).unwrap();
    let sc = tc.complete_lift(&sigma).unwrap();
    assert_eq!(sc, KForm::parse("dx1^dy2 - dx2^dy1", tc.total(), None).unwrap());
    assert!(AlmostSymplectic::build(tc.total(), &sc).is_ok());
    assert_eq!(
        tc.vertical_lift(&KForm::dx(b, 0)).unwrap(),
        tc.dx(0)
    );
}

#[test]
fn frames_and_curvature() {
    let tc = r2();
    let zero = NonlinearConnection::zero(&tc);
    let (x, th) = zero.horizontal_frame().unwrap();
    assert_eq!(x[0], tc.d_x(0));
    assert_eq!(th[1], tc.dy(1));
    assert!(zero.curvature().unwrap().iter().flatten().flatten().all(Expr::is_zero));

    let mut t = vec![vec![Expr::zero(); 2]; 2];
    t[0][1] = tc.total().parse("x1*y1").unwrap();
    let conn = NonlinearConnection::new(&tc, t).unwrap();
    let (x, _) = conn.horizontal_frame().unwrap();
    assert_eq!(x[0].bracket(&x[1]).unwrap(), tf(&tc, "-y1*@y1"));
    let r = conn.curvature().unwrap();
    assert_eq!(r[0][0][1], tc.y(0));
    assert_eq!(r[0][1][0], -tc.y(0));
}

#[test]
fn associated_flat() {
    let tc = r2();
    let a = AssociatedStructures::new(&id2(&tc), &NonlinearConnection::zero(&tc)).unwrap();
    assert_eq!(a.omega, KForm::parse("dx1^dy1 + dx2^dy2", tc.total(), None).unwrap());
    assert!(a.check().unwrap().holds());

    let (xv, v) = a.vertical_hamiltonian(&tc.base().parse("x1").unwrap()).unwrap();
    assert_eq!(xv, tc.d_y(0));
    assert!(v.holds() && v.auxiliary.iter().all(|c| c.holds()), "{v}");
    let (xv, _) = a.vertical_hamiltonian(&Expr::int(2)).unwrap();
    assert!(xv.is_zero());

    let h = a.horizontal_hamiltonian(&tc.y(0)).unwrap();
    assert_eq!(h.field, tc.d_x(0).neg());
    assert!(h.verdict.holds(), "{}", h.verdict);
    assert!(h.verdict.status("i(X^h)ω + df = 0").unwrap().holds());
    let h = a.horizontal_hamiltonian(&tc.x(0)).unwrap();
    assert!(h.verdict.status("(1) X_i f = 0").unwrap().fails());
}

#[test]
fn associated_curved() {
    let tc = r2();
    let mut t = vec![vec![Expr::zero(); 2]; 2];
    t[0][1] = tc.total().parse("x1*y1").unwrap();
    let conn = NonlinearConnection::new(&tc, t).unwrap();
    let gamma = vec![
        vec![Expr::int(2), Expr::one()],
        vec![Expr::one(), Expr::int(3)],
    ];
    let a = AssociatedStructures::new(&gamma, &conn).unwrap();
    assert!(a.check().unwrap().holds());
    let h = a.horizontal_hamiltonian(&tc.y(1)).unwrap();
    let v = &h.verdict;
    assert!(v.status("(1) X_i f = 0").unwrap().holds());
    assert!(v.status("(4) R(X^h, Y^h) = 0").unwrap().fails(), "{v}");
    assert!(v.status("(6) d(i(X^h)ω) = 0 and i(X^h)dω = 0").unwrap().fails(), "{v}");

    // y-dependent coefficients: d(i(X^v)ω) = 0 alone does not force i(X^v)dω = 0
    let (_, vv) = a.vertical_hamiltonian(&tc.base().parse("x1*x2").unwrap()).unwrap();
    assert!(vv.status("d(i(X^v)ω) = 0").unwrap().holds());
    assert!(vv.status("i(X^v)dω = 0").unwrap().fails());
    assert!(vv.auxiliary.iter().all(|c| c.holds()), "{vv}");

    // coefficients independent of y: the vertical field is Hamiltonian
    let mut t = vec![vec![Expr::zero(); 2]; 2];
    t[0][1] = tc.total().parse("x1*x2").unwrap();
    let a = AssociatedStructures::new(&gamma, &NonlinearConnection::new(&tc, t).unwrap()).unwrap();
    let (_, vv) = a.vertical_hamiltonian(&tc.base().parse("x1*x2").unwrap()).unwrap();
    assert!(vv.holds(), "{vv}");
}

#[test]
fn closed_form_variant() {
    let tc = r2();
    let a = AssociatedStructures::new(&id2(&tc), &NonlinearConnection::zero(&tc)).unwrap();
    let f = tc.base().parse("x1*x2").unwrap();
    let alpha = KForm::differential(tc.base(), &f);
    let (z, v) = a.vertical_from_closed(&alpha).unwrap();
    assert!(v.holds(), "{v}");
    let (xv, _) = a.vertical_hamiltonian(&f).unwrap();
    assert_eq!(z, xv.neg());
    let open = KForm::parse("x1*dx2", tc.base(), None).unwrap();
    let (_, v) = a.vertical_from_closed(&open).unwrap();
    assert!(!v.holds());
}

#[test]
fn transport_ex32() {
    let c = Chart::new("M", &["x1", "x2", "x3", "x4"])
        .unwrap()
        .with_domain("x1 > 0, x2 > 0")
        .unwrap();
    let w = KForm::parse("x1*dx2^dx3 + x2*dx1^dx4", &c, Some(2)).unwrap();
    let s = AlmostSymplectic::build(&c, &w).unwrap();
    let tc = TangentChart::new(&c).unwrap();
    let (_, v) = tc.transport(&s, &c.parse("x1*x2").unwrap()).unwrap();
    assert!(v.holds(), "{v}");
    assert!(v.auxiliary.iter().all(|c| c.holds()), "{v}");
}
