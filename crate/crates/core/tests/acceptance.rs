//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use asympl::exterior::{kernel_of_contraction, KForm, MapExpr, VecField};
use asympl::liealg::{diagonal_check, LieAlgebraData};
use asympl::reduction::{check_momentum_map, check_reduction, restrict_to_level, MomentumData};
use asympl::symplectic::{AlmostSymplectic, StructureKind};
use asympl::tangent::{AssociatedStructures, NonlinearConnection, TangentChart};
use asympl::{Chart, Expr, Q};
use common::lie;
use num_traits::Zero;
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(t: Duration, limit: f64, what: &str) -> Result<(), String> {
    ensure!(t.as_secs_f64() < limit, "{what} took {:.2} s (limit {limit} s)", t.as_secs_f64());
    Ok(())
}

fn m4() -> Chart {
    Chart::new("M", &["x1", "x2", "x3", "x4"])
        .unwrap()
        .with_domain("x1 > 0, x2 > 0")
        .unwrap()
}

fn structure(c: &Chart, src: &str) -> AlmostSymplectic {
    AlmostSymplectic::build(c, &KForm::parse(src, c, Some(2)).unwrap()).unwrap()
}

fn ex32() -> AlmostSymplectic {
    structure(&m4(), "x1*dx2^dx3 + x2*dx1^dx4")
}

fn ex33() -> AlmostSymplectic {
    structure(&m4(), "dx1^dx2 + dx1^dx3 + x1*x2*dx3^dx4")
}

fn ex34(tilde: bool) -> AlmostSymplectic {
    let c = Chart::new("Mt", &["x1", "x2", "x3", "x4", "y1", "y2"])
        .unwrap()
        .with_domain("x1 > 0, x2 > 0")
        .unwrap();
    let extra = if tilde { "exp(x3*x4)*dy1^dy2" } else { "dy1^dy2" };
    structure(&c, &format!("x1*dx2^dx3 + x2*dx1^dx4 + {extra}"))
}

fn form(c: &Chart, s: &str) -> KForm {
    KForm::parse(s, c, None).unwrap()
}

fn r2() -> TangentChart {
    TangentChart::new(&Chart::new("R2", &["x1", "x2"]).unwrap()).unwrap()
}

fn curved(tc: &TangentChart, t12: &str) -> AssociatedStructures {
    let mut t = vec![vec![Expr::zero(); 2]; 2];
    t[0][1] = tc.total().parse(t12).unwrap();
    let gamma = vec![vec![Expr::int(2), Expr::one()], vec![Expr::one(), Expr::int(3)]];
    AssociatedStructures::new(&gamma, &NonlinearConnection::new(tc, t).unwrap()).unwrap()
}

fn flat(tc: &TangentChart) -> AssociatedStructures {
    let id = vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), Expr::one()]];
    AssociatedStructures::new(&id, &NonlinearConnection::zero(tc)).unwrap()
}

fn criterion1() -> Outcome {
    let mut times = Vec::new();
    for (build, sigma, conformal) in [
        (ex32 as fn() -> AlmostSymplectic, "dx1/x1 + dx2/x2", true),
        (ex33, "dx1/x1 + dx2/x2 + dx3/x2", false),
    ] {
        let t = Instant::now();
        let s = build();
        let l = ok(s.lepage_decompose())?;
        ensure!(l.sigma == form(s.chart(), sigma), "σ = {} expected {sigma}", l.sigma);
        ensure!(l.psi.is_zero(), "ψ = {}", l.psi);
        let cl = ok(s.classify())?;
        times.push(t.elapsed());
        if conformal {
            ensure!(cl.kind == StructureKind::LocallyConformalSymplectic, "ex32 classified {}", cl.label());
            ensure!(cl.globally_conformal(), "ex32 not globally conformal");
        } else {
            ensure!(cl.d_sigma.as_ref().is_some_and(|d| !d.is_zero()), "ex33 dσ reported zero");
            ensure!(cl.kind == StructureKind::General, "ex33 classified {}", cl.label());
        }
    }
    for t in &times {
        within(*t, 1.0, "Lepage decomposition")?;
    }
    Ok(format!("{:.3} s, {:.3} s", times[0].as_secs_f64(), times[1].as_secs_f64()))
}

fn criterion2() -> Outcome {
    let t = Instant::now();
    let s = ex32();
    let (x, v) = ok(s.hamiltonian_field(&s.chart().parse("x1*x2").unwrap()))?;
    ensure!(x == VecField::parse("@x3 + @x4", s.chart()).unwrap(), "X_f = {x}");
    ensure!(v.holds() && v.auxiliary.iter().all(|c| c.holds()), "X_f verdict:\n{v}");

    let s3 = ex33();
    let cand = VecField::parse("x1*@x1 - x2*@x2", s3.chart()).unwrap();
    let v = ok(s3.check_field(&cand, None))?;
    let failing: Vec<&str> = v.failures().map(|c| c.name.as_str()).collect();
    ensure!(failing == ["d(i(X)ω) = 0"], "ex33 failing conditions {failing:?}");

    let k3 = ok(kernel_of_contraction(s3.d_omega()))?;
    ensure!(k3.dim == 1, "ex33 kernel dimension {}", k3.dim);
    ensure!(k3.basis[0] == cand, "ex33 kernel spanned by {}", k3.basis[0]);
    let k4 = ok(kernel_of_contraction(ex34(true).d_omega()))?;
    ensure!(k4.dim == 0, "ex34 kernel dimension {}", k4.dim);
    let el = t.elapsed();
    within(el, 2.0, "Hamiltonian verdicts")?;
    Ok(format!("{:.3} s", el.as_secs_f64()))
}

fn criterion3() -> Outcome {
    let s = ex32();
    let t = s.chart().parse("x1*x2").unwrap();
    ensure!(ok(s.poisson_bracket(&t, &(&t * &t)))?.is_zero(), "{{t, t²}} ≠ 0");

    let p = ex34(false);
    let e = |src: &str| p.chart().parse(src).unwrap();
    ensure!(ok(p.poisson_bracket(&e("y1"), &e("y2")))? == Expr::one(), "{{y1, y2}} ≠ 1");
    for (a, b) in [("x1*x2", "y1"), ("y1", "y1"), ("x1*x2", "(x1*x2)**2")] {
        ensure!(ok(p.poisson_bracket(&e(a), &e(b)))?.is_zero(), "{{{a}, {b}}} ≠ 0");
    }
    let f = e("x1*x2*y1 + y2**2");
    let g = e("(x1*x2)**2 - y1*y2");
    let h = e("y1**3 + x1*x2");
    for k in [&f, &g, &h] {
        ensure!(ok(p.hamiltonian_field(k))?.1.holds(), "not Hamiltonian on ω̄");
    }
    let b = |a: &Expr, c: &Expr| p.poisson_bracket(a, c).unwrap();
    let jac = &(&b(&f, &b(&g, &h)) + &b(&g, &b(&h, &f))) + &b(&h, &b(&f, &g));
    ensure!(jac.is_zero(), "Jacobi defect {jac:?}");
    Ok("{y1, y2} = 1, Jacobi exact".into())
}

fn criterion4() -> Outcome {
    let s = ex32();
    let gen = VecField::parse("@x3 + @x4", s.chart()).unwrap();
    let pts = ok(s.chart().sample_points(10, 0xd1ac))?;
    for p in &pts {
        let fr = ok(s.dirac_frame_at(p, std::slice::from_ref(&gen)))?;
        ensure!(fr.rank == 4 && fr.isotropic, "frame at {p}: rank {}, isotropic {}", fr.rank, fr.isotropic);
        for (x, nu) in &fr.pairs {
            ensure!(x[0].is_zero() && x[1].is_zero() && x[2] == x[3], "tangent part {x:?} at {p}");
            ensure!((&nu[2] + &nu[3]).is_zero(), "covector {nu:?} does not annihilate ∂3+∂4");
        }
    }
    Ok(format!("{} points", pts.len()))
}

fn criterion5() -> Outcome {
    let s = ex32();
    let x = VecField::parse("@x3 + @x4", s.chart()).unwrap();
    let md = MomentumData::new(vec![(x, s.chart().parse("x1*x2").unwrap())]);
    let v = ok(check_momentum_map(&s, &md))?;
    ensure!(v.holds(), "momentum map:\n{v}");

    let n1 = Chart::new("N", &["x1", "x3", "x4"]).unwrap().with_domain("x1 > 0").unwrap();
    let iota = MapExpr::parse(&n1, s.chart(), &["x1", "1/x1", "x3", "x4"]).unwrap();
    let pulled = ok(restrict_to_level(&s, &iota))?.pulled;
    ensure!(pulled == form(&n1, "-(dx1/x1)^(dx3 - dx4)"), "ι*ω = {pulled}");

    let qc = Chart::new("Q", &["u", "v"]).unwrap();
    let q = MapExpr::parse(&n1, &qc, &["ln(x1)", "x4 - x3"]).unwrap();
    let v = ok(check_reduction(&pulled, &q, &form(&qc, "du^dv")))?;
    ensure!(v.holds(), "reduction:\n{v}");

    let nt = Chart::with_params("N", &["x1", "x3", "x4"], &["t0"])
        .unwrap()
        .with_domain("x1 > 0, t0 > 0")
        .unwrap();
    let iota = MapExpr::parse(&nt, s.chart(), &["x1", "t0/x1", "x3", "x4"]).unwrap();
    let pulled = ok(restrict_to_level(&s, &iota))?.pulled;
    ensure!(pulled == form(&nt, "-t0*(dx1/x1)^(dx3 - dx4)"), "t0-general ι*ω = {pulled}");
    Ok("ι*ω = −t0 (dx1/x1)∧(dx3 − dx4)".into())
}

fn criterion6() -> Outcome {
    let t = Instant::now();
    let mut r = common::rng(6);
    let cases = 50;
    for case in 0..cases {
        let tc = TangentChart::new(&common::chart(r.gen_range(1..=3))).unwrap();
        let k = r.gen_range(0..=tc.n().min(2));
        let th = common::form(&mut r, tc.base(), k, 2, false);
        let x = common::field(&mut r, tc.base(), 2);
        let xc = ok(tc.complete_lift_field(&x))?;
        let thc = ok(tc.complete_lift(&th))?;
        ensure!(ok(tc.complete_lift(&th.ext_d()))? == thc.ext_d(), "case {case}: (dΘ)^c ≠ d(Θ^c)");
        if k > 0 {
            ensure!(
                ok(tc.complete_lift(&ok(th.interior(&x))?))? == ok(thc.interior(&xc))?,
                "case {case}: (i(X)Θ)^c ≠ i(X^c)Θ^c"
            );
        }
        ensure!(
            ok(thc.lie_derivative(&xc))? == ok(tc.complete_lift(&ok(th.lie_derivative(&x))?))?,
            "case {case}: L_X^c Θ^c ≠ (L_X Θ)^c"
        );
    }
    let s = ex32();
    let tc = TangentChart::new(s.chart()).unwrap();
    let (_, v) = ok(tc.transport(&s, &s.chart().parse("x1*x2").unwrap()))?;
    ensure!(v.holds() && v.auxiliary.iter().all(|c| c.holds()), "transport:\n{v}");
    let el = t.elapsed();
    within(el, 30.0, "lift suite")?;
    Ok(format!("{cases} cases + transport, {:.2} s", el.as_secs_f64()))
}

fn criterion7() -> Outcome {
    let tc = r2();
    let a = flat(&tc);
    let (xv, v) = ok(a.vertical_hamiltonian(&tc.base().parse("x1").unwrap()))?;
    ensure!(xv == tc.d_y(0), "flat X^v = {xv}");
    ensure!(v.holds() && v.auxiliary.iter().all(|c| c.holds()), "flat vertical:\n{v}");
    let h = ok(a.horizontal_hamiltonian(&tc.y(0)))?;
    ensure!(h.field == tc.d_x(0).neg(), "flat X^h = {}", h.field);
    ensure!(h.verdict.holds(), "flat horizontal:\n{}", h.verdict);

    let c = curved(&tc, "x1*y1");
    let curv = c.curvature();
    ensure!(curv.iter().flatten().flatten().any(|e| !e.is_zero()), "curvature vanishes");
    let h = ok(c.horizontal_hamiltonian(&tc.y(1)))?;
    let flag = |n: &str| h.verdict.status(n).map(|s| s.holds());
    ensure!(flag("(4) R(X^h, Y^h) = 0") == Some(false), "flag (4) not failing:\n{}", h.verdict);
    let om = &c.structure;
    let direct = ok(om.omega().interior(&h.field))?.ext_d().is_zero()
        && ok(om.d_omega().interior(&h.field))?.is_zero();
    let f6 = flag("(6) d(i(X^h)ω) = 0 and i(X^h)dω = 0");
    ensure!(f6 == Some(direct), "flag (6) {f6:?} vs direct {direct}");
    ensure!(!direct, "curved X^h locally Hamiltonian");
    Ok("flat passes; curved R ≠ 0, (4) and (6) fail".into())
}

fn criterion8() -> Outcome {
    let mut r = common::rng(8);
    let cases = 25;
    for case in 0..cases {
        let c = lie::random_lie(&mut r);
        let n = c.len();
        ensure!(lie::satisfies_jacobi(&c), "case {case}: generator broke Jacobi");
        let d = ok(LieAlgebraData::new(c, lie::id(n)))?;
        ensure!(lie::d_squared_vanishes(&d), "case {case}: Jacobi but d² ≠ 0");
        let c = lie::random_non_lie(&mut r);
        let n = c.len();
        let d = ok(LieAlgebraData::new(c, lie::id(n)))?;
        ensure!(!lie::d_squared_vanishes(&d), "case {case}: Jacobi fails but d² = 0");
    }
    for case in 0..cases {
        let c = if case % 4 == 0 { lie::empty(r.gen_range(2..=4)) } else { lie::random_lie(&mut r) };
        let n = c.len();
        let abelian = c.iter().flatten().flatten().all(|x| x == &Q::default());
        let d = ok(LieAlgebraData::new(c, lie::random_metric(&mut r, n)))?;
        let closed = asympl::liealg::ce_differential(&d.omega(), &d).is_zero();
        ensure!(closed == abelian, "case {case}: dω = 0 is {closed}, abelian {abelian}");
    }
    let c = lie::table(3, &[(0, 1, &[(2, 1)])]);
    let d = ok(LieAlgebraData::new(c.clone(), lie::id(3)))?;
    for i in 0..3 {
        let xi = lie::basis(3, i);
        let v = ok(diagonal_check(&d, &xi))?;
        let a = v.status("A: ξ ⊥_γ [g, g]").is_some_and(|s| s.holds());
        let b = v.status("B: ad X skew for γ").is_some_and(|s| s.holds());
        ensure!((a, b) == lie::oracle(&c, &lie::id(3), &xi), "Heisenberg e{} disagrees with oracle", i + 1);
        if i == 0 {
            ensure!(a && !b, "Heisenberg e1: A {a}, B {b}");
        }
    }
    Ok(format!("{cases} cases per direction"))
}

/// Finite-difference guard: every partial derivative `∂_j e` and every
/// component of `dα` for the objects of criteria 1–7, at 20 points.
struct Guard {
    checked: usize,
    worst: f64,
}

const H: f64 = 1e-4;
const RTOL: f64 = 1e-6;

impl Guard {
    fn agree(&mut self, fd: f64, sym: f64, what: &str) -> Result<(), String> {
        let rel = (fd - sym).abs() / sym.abs().max(1.0);
        self.checked += 1;
        self.worst = self.worst.max(rel);
        ensure!(rel < RTOL, "{what}: symbolic {sym:e}, central difference {fd:e}");
        Ok(())
    }

    fn points(chart: &Chart) -> Result<Vec<Vec<f64>>, String> {
        Ok(ok(chart.moderate_points(20, 0x9fd))?
            .iter()
            .map(|p| p.values().iter().map(|q| asympl::expr::Value::Exact(q.clone()).to_f64()).collect())
            .collect())
    }

    fn partial(e: &Expr, j: usize, p: &[f64]) -> Result<f64, String> {
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[j] += H;
        b[j] -= H;
        Ok((ok(e.eval_f64(&a))? - ok(e.eval_f64(&b))?) / (2.0 * H))
    }

    fn function(&mut self, chart: &Chart, e: &Expr, label: &str) -> Result<(), String> {
        for p in Self::points(chart)? {
            for j in 0..chart.dim() {
                let sym = ok(e.diff(j).eval_f64(&p))?;
                let fd = Self::partial(e, j, &p)?;
                self.agree(fd, sym, &format!("∂{} {label} at {p:?}", chart.coords()[j]))?;
            }
        }
        Ok(())
    }

    fn form(&mut self, a: &KForm, label: &str) -> Result<(), String> {
        let chart = a.chart();
        for (_, c) in a.components() {
            self.function(chart, c, label)?;
        }
        let da = a.ext_d();
        let keys: Vec<Vec<usize>> = da.components().map(|(k, _)| k.clone()).collect();
        for p in Self::points(chart)? {
            for idx in &keys {
                let sym = ok(da.get(idx).eval_f64(&p))?;
                let mut fd = 0.0;
                for r in 0..idx.len() {
                    let mut rest = idx.clone();
                    let j = rest.remove(r);
                    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                    fd += sign * Self::partial(&a.get(&rest), j, &p)?;
                }
                self.agree(fd, sym, &format!("d({label}){idx:?} at {p:?}"))?;
            }
        }
        Ok(())
    }

    fn field(&mut self, x: &VecField, label: &str) -> Result<(), String> {
        for c in x.components() {
            self.function(x.chart(), c, label)?;
        }
        Ok(())
    }
}

fn criterion9() -> Outcome {
    let mut g = Guard { checked: 0, worst: 0.0 };
    for s in [ex32(), ex33(), ex34(false), ex34(true)] {
        g.form(s.omega(), "ω")?;
        if let Ok(l) = s.lepage_decompose() {
            g.form(&l.sigma, "σ")?;
            g.form(&l.psi, "ψ")?;
        }
    }
    let s = ex32();
    let c = s.chart();
    for f in ["x1*x2", "(x1*x2)**2", "x3"] {
        let f = c.parse(f).unwrap();
        g.function(c, &f, "f")?;
        let (x, _) = ok(s.hamiltonian_field(&f))?;
        g.field(&x, "X_f")?;
    }
    let p = ex34(false);
    for f in ["x1*x2*y1 + y2**2", "(x1*x2)**2 - y1*y2", "y1**3 + x1*x2"] {
        let f = p.chart().parse(f).unwrap();
        g.function(p.chart(), &f, "f on ω̄")?;
        g.field(&ok(p.hamiltonian_field(&f))?.0, "X_f on ω̄")?;
    }
    let nt = Chart::with_params("N", &["x1", "x3", "x4"], &["t0"])
        .unwrap()
        .with_domain("x1 > 0, t0 > 0")
        .unwrap();
    let iota = MapExpr::parse(&nt, c, &["x1", "t0/x1", "x3", "x4"]).unwrap();
    g.form(&ok(restrict_to_level(&s, &iota))?.pulled, "ι*ω")?;
    let tc = TangentChart::new(c).unwrap();
    let (lifted, _) = ok(tc.transport(&s, &c.parse("x1*x2").unwrap()))?;
    g.form(lifted.omega(), "ω^c")?;
    let t2 = r2();
    for a in [flat(&t2), curved(&t2, "x1*y1"), curved(&t2, "x1*x2")] {
        g.form(&a.omega, "associated ω")?;
        for row in &a.frame {
            g.field(row, "horizontal frame")?;
        }
        let h = ok(a.horizontal_hamiltonian(&t2.y(1)))?;
        g.field(&h.field, "X^h")?;
        let (xv, _) = ok(a.vertical_hamiltonian(&t2.base().parse("x1*x2").unwrap()))?;
        g.field(&xv, "X^v")?;
    }
    Ok(format!("{} comparisons, worst relative error {:.1e}", g.checked, g.worst))
}

fn random_structure(r: &mut rand_chacha::ChaCha8Rng) -> Option<AlmostSymplectic> {
    let c = common::chart(4);
    let w = form(&c, "dx1^dx3 + dx2^dx4").add(&common::form(r, &c, 2, 1, false)).unwrap();
    AlmostSymplectic::build(&c, &w).ok()
}

fn criterion10() -> Outcome {
    let t = Instant::now();
    let mut r = common::rng(10);
    let cases = 50;
    let mut structures = 0;
    for case in 0..cases {
        let c = common::chart(r.gen_range(2..=6));
        let k = r.gen_range(0..=3.min(c.dim()));
        let a = common::form(&mut r, &c, k, 2, true);
        ensure!(a.ext_d().ext_d().is_zero(), "case {case}: d∘d ≠ 0");

        let x = common::field(&mut r, &c, 2);
        let b = common::form(&mut r, &c, k.max(1), 2, false);
        let cartan = ok(ok(b.ext_d().interior(&x))?.add(&ok(b.interior(&x))?.ext_d()))?;
        ensure!(ok(b.lie_derivative(&x))? == cartan, "case {case}: L_X ≠ i_X d + d i_X");

        let src = common::chart(2);
        let f = MapExpr::new(&src, &c, (0..c.dim()).map(|_| common::poly(&mut r, 2, 2, 2)).collect()).unwrap();
        ensure!(ok(f.pullback(&b.ext_d()))? == ok(f.pullback(&b))?.ext_d(), "case {case}: F*d ≠ dF*");

        if let Some(s) = random_structure(&mut r) {
            structures += 1;
            let nu = common::form(&mut r, s.chart(), 1, 2, true);
            ensure!(ok(s.flat(&ok(s.sharp(&nu))?))? == nu, "case {case}: ♭♯ν ≠ ν");
            let y = common::field(&mut r, s.chart(), 2);
            ensure!(ok(s.sharp(&ok(s.flat(&y))?))? == y, "case {case}: ♯♭Y ≠ Y");
        }
    }
    Ok(format!("{cases} cases ({structures} musical), {:.2} s", t.elapsed().as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Lepage regression", criterion1),
        ("Hamiltonian verdicts", criterion2),
        ("bracket triviality", criterion3),
        ("Dirac frame", criterion4),
        ("reduction", criterion5),
        ("lift identities", criterion6),
        ("tangent structure", criterion7),
        ("Lie algebra", criterion8),
        ("numerical guard", criterion9),
        ("core invariants", criterion10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let el = t.elapsed().as_secs_f64();
        match out {
            Ok(note) => println!("criterion {:>2} {name:<22} PASS  {el:>7.3} s  {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name:<22} FAIL  {el:>7.3} s  {why}", i + 1);
            }
        }
    }
    println!("total {:.2} s, {failed} failed", start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
