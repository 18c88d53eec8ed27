use super::*;
use crate::expr::q;

fn ex32() -> AlmostSymplectic {
    let c = Chart::new("M", &["x1", "x2", "x3", "x4"])
        .unwrap()
        .with_domain("x1 > 0, x2 > 0")
        .unwrap();
    let w = KForm::parse("x1*dx2^dx3 + x2*dx1^dx4", &c, Some(2)).unwrap();
    AlmostSymplectic::build(&c, &w).unwrap()
}

fn ex33() -> AlmostSymplectic {
    let c = Chart::new("M", &["x1", "x2", "x3", "x4"])
        .unwrap()
        .with_domain("x1 > 0, x2 > 0")
        .unwrap();
    let w = KForm::parse("dx1^dx2 + dx1^dx3 + x1*x2*dx3^dx4", &c, Some(2)).unwrap();
    AlmostSymplectic::build(&c, &w).unwrap()
}

fn std4() -> AlmostSymplectic {
    let c = Chart::new("R4", &["x1", "x2", "y1", "y2"]).unwrap();
    let w = KForm::parse("dx1^dy1 + dx2^dy2", &c, Some(2)).unwrap();
    AlmostSymplectic::build(&c, &w).unwrap()
}

fn form(s: &AlmostSymplectic, src: &str) -> KForm {
    KForm::parse(src, s.chart(), None).unwrap()
}

fn e(s: &AlmostSymplectic, src: &str) -> Expr {
    s.chart().parse(src).unwrap()
}

#[test]
fn build_and_inverse() {
    let s = std4();
    assert!(s.det().is_one());
    let s = ex32();
    assert_eq!(s.det(), &e(&s, "x1**2*x2**2"));
    // W = Ω⁻¹ has ±1/x2 on (1,4) and ±1/x1 on (2,3)
    assert_eq!(s.inverse()[0][3], e(&s, "-1/x2"));
    assert_eq!(s.inverse()[1][2], e(&s, "-1/x1"));
    assert_eq!(s.bivector().get(&[0, 3]), e(&s, "1/x2"));
    let c = Chart::new("P", &["x1", "x2"]).unwrap();
    let w = KForm::parse("x1*dx1^dx2", &c, None).unwrap();
    assert!(AlmostSymplectic::build(&c, &w).is_ok());
    let c3 = Chart::new("T", &["a", "b", "c"]).unwrap();
    let w3 = KForm::parse("da^db", &c3, None).unwrap();
    assert!(matches!(AlmostSymplectic::build(&c3, &w3), Err(Error::Dimension(_))));
    let deg = KForm::parse("dx1^dx2 + (x1 - x1)*dx3^dx4", &m4(), None).unwrap();
    assert_eq!(AlmostSymplectic::build(&m4(), &deg).unwrap_err(), Error::Degenerate);
}

fn m4() -> Chart {
    Chart::new("M", &["x1", "x2", "x3", "x4"]).unwrap()
}

#[test]
fn musical_round_trip() {
    let s = ex32();
    let nu = form(&s, "x3*dx1 - dx2 + x1*x4*dx3 + dx4/x2");
    let x = s.sharp(&nu).unwrap();
    assert_eq!(s.flat(&x).unwrap(), nu);
    assert_eq!(s.sharp(&s.flat(&x).unwrap()).unwrap(), x);
    let xf = s.sharp(&KForm::differential(s.chart(), &e(&s, "x1*x2"))).unwrap().neg();
    assert_eq!(xf, VecField::parse("@x3 + @x4", s.chart()).unwrap());
    assert!(s.flat(&VecField::zero(s.chart())).unwrap().is_zero());
}

#[test]
fn star_and_codifferential() {
    let s = ex32();
    let one = KForm::scalar(s.chart(), Expr::one());
    assert_eq!(&s.star(&one).unwrap(), s.volume());
    assert_eq!(
        s.codifferential(s.omega()).unwrap(),
        form(&s, "dx1/x1 + dx2/x2")
    );
    assert!(std4().codifferential(std4().omega()).unwrap().is_zero());
}

#[test]
fn lepage_examples() {
    let l = ex32().lepage_decompose().unwrap();
    assert_eq!(l.sigma, form(&ex32(), "dx1/x1 + dx2/x2"));
    assert!(l.psi.is_zero());
    let s = ex33();
    let l = s.lepage_decompose().unwrap();
    assert_eq!(l.sigma, form(&s, "dx1/x1 + dx2/x2 + dx3/x2"));
    assert!(l.psi.is_zero());
    let l = std4().lepage_decompose().unwrap();
    assert!(l.sigma.is_zero() && l.psi.is_zero());
}

#[test]
fn classify_examples() {
    let c = ex32().classify().unwrap();
    assert_eq!(c.kind, StructureKind::LocallyConformalSymplectic);
    let t = c.potential.clone().expect("potential");
    assert_eq!(t, e(&ex32(), "ln(x1*x2)"));
    assert!(c.globally_conformal());
    let c = ex33().classify().unwrap();
    assert_eq!(c.kind, StructureKind::General);
    assert!(c.d_sigma_status.unwrap().fails());
    assert_eq!(std4().classify().unwrap().kind, StructureKind::Symplectic);
}

#[test]
fn potentials() {
    let c = Chart::new("P", &["x", "y", "z"]).unwrap();
    let cases = [
        ("2*x*dx + dz", "x**2 + z"),
        ("dx/x + dy/y", "ln(x*y)"),
        ("dx/x - 2*dy/y", "ln(x/y**2)"),
        ("(2*x*dx + 2*y*dy)/(x**2 + y**2)", "ln(x**2 + y**2)"),
        ("1/2*dx/x + y*dz + z*dy", "1/2*ln(x) + y*z"),
    ];
    for (s, t) in cases {
        let f = KForm::parse(s, &c, Some(1)).unwrap();
        let p = find_potential(&f).unwrap_or_else(|| panic!("no potential for {s}"));
        assert_eq!(KForm::differential(&c, &p), f, "{s}");
        let expected = c.parse(t).unwrap();
        assert_eq!(KForm::differential(&c, &expected), f);
    }
    let not_closed = KForm::parse("y*dx", &c, Some(1)).unwrap();
    assert!(find_potential(&not_closed).is_none());
}

#[test]
fn locally_hamiltonian_examples() {
    let s = ex32();
    let x = VecField::parse("@x3 + @x4", s.chart()).unwrap();
    let v = s.is_locally_hamiltonian(&x).unwrap();
    assert!(v.holds(), "{v}");
    assert!(v.status("criteria agree").unwrap().holds());
    let s = ex33();
    let x = VecField::parse("x1*@x1 - x2*@x2", s.chart()).unwrap();
    let v = s.is_locally_hamiltonian(&x).unwrap();
    assert!(!v.holds());
    assert!(v.status("i(X)dω = 0").unwrap().holds());
    assert!(v.status("d(i(X)ω) = 0").unwrap().fails());
    assert!(v.status("criteria agree").unwrap().holds());
    assert!(s.is_locally_hamiltonian(&VecField::zero(s.chart())).unwrap().holds());
}

#[test]
fn hamiltonian_field_examples() {
    let s = ex32();
    let (x, v) = s.hamiltonian_field(&e(&s, "x1*x2")).unwrap();
    assert_eq!(x, VecField::parse("@x3 + @x4", s.chart()).unwrap());
    assert!(v.holds());
    assert!(v.auxiliary.iter().all(|c| c.holds()), "{v}");
    let (_, v) = s.hamiltonian_field(&e(&s, "x3")).unwrap();
    assert!(!v.holds());
    assert!(v.status("σ∧df − i(♯df)ψ = 0").unwrap().fails());
    assert!(v.status("criteria agree").unwrap().holds());
    let (x, v) = s.hamiltonian_field(&Expr::int(7)).unwrap();
    assert!(x.is_zero() && v.holds());
}

#[test]
fn brackets() {
    let s = ex32();
    let t = e(&s, "x1*x2");
    assert!(s.poisson_bracket(&t, &(&t * &t)).unwrap().is_zero());
    assert!(matches!(
        s.poisson_bracket(&t, &e(&s, "x3")),
        Err(Error::Precondition(_))
    ));
    let r = std4();
    let b = r.poisson_bracket(&e(&r, "y1"), &e(&r, "x1")).unwrap();
    assert_eq!(b, Expr::int(-1));
    let f = e(&r, "x1*y2");
    assert!(r.poisson_bracket(&f, &f).unwrap().is_zero());
}

#[test]
fn cones_and_frames() {
    let s = ex32();
    let p = s.chart().point(vec![q(1, 1), q(1, 1), q(0, 1), q(0, 1)]).unwrap();
    let cone = s.hamiltonian_cone_at(&p).unwrap();
    assert_eq!(cone.dim, 1);
    assert_eq!(cone.basis[0], vec![q(0, 1), q(0, 1), q(1, 1), q(1, 1)]);
    assert_eq!(std4().hamiltonian_cone_at(&std4().chart().point(vec![q(0, 1); 4]).unwrap()).unwrap().dim, 4);

    let x = VecField::parse("@x3 + @x4", s.chart()).unwrap();
    let fr = s.dirac_frame_at(&p, &[x]).unwrap();
    assert_eq!(fr.dim_h, 1);
    assert!(fr.is_valid());
    assert_eq!(fr.pairs[0].1, vec![q(-1, 1), q(-1, 1), q(0, 1), q(0, 1)]);
    let empty = s.dirac_frame_at(&p, &[]).unwrap();
    assert!(empty.is_valid() && empty.dim_h == 0);
    let bad = VecField::parse("@x1", s.chart()).unwrap();
    assert!(matches!(s.dirac_frame_at(&p, &[bad]), Err(Error::Precondition(_))));
}
