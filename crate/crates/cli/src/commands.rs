use anyhow::{anyhow, bail, Context, Result};
use asympl::exterior::{kernel_of_contraction, KForm};
use asympl::liealg::{ce_differential, diagonal_check};
use asympl::reduction::{check_momentum_map, check_reduction, restrict_to_level, MomentumData};
use asympl::symplectic::AlmostSymplectic;
use asympl::tangent::AssociatedStructures;
use asympl::{Chart, Expr, SamplePoint, Status, Q};

use crate::manifest::{parse_rational, split_top, Manifest};
use crate::report::Report;
use crate::Flags;

pub fn run(name: &str, flags: &Flags) -> Result<Report> {
    let mut m = Manifest::load(&flags.manifest)?;
    if let Some(s) = flags.seed {
        m.reseed(s);
    }
    let cx = Ctx { m: &m, f: flags };
    let mut r = Report::new(name);
    match name {
        "lepage" => lepage(&cx, &mut r),
        "classify" => classify(&cx, &mut r),
        "check-field" => check_field(&cx, &mut r),
        "ham" => ham(&cx, &mut r),
        "bracket" => bracket(&cx, &mut r),
        "kernel" => kernel(&cx, &mut r),
        "cone" => cone(&cx, &mut r),
        "dirac" => dirac(&cx, &mut r),
        "momentum" => momentum(&cx, &mut r),
        "restrict" => restrict(&cx, &mut r),
        "reduce" => reduce(&cx, &mut r),
        "lift" => lift(&cx, &mut r),
        "curvature" => curvature(&cx, &mut r),
        "vham" => vham(&cx, &mut r),
        "hham" => hham(&cx, &mut r),
        "lie" => lie(&cx, &mut r),
        other => bail!("unknown subcommand `{other}`"),
    }?;
    Ok(r)
}

struct Ctx<'a> {
    m: &'a Manifest,
    f: &'a Flags,
}

fn show(e: &Expr, c: &Chart) -> String {
    e.display(c).to_string()
}

fn vector(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl Ctx<'_> {
    /// The `i`-th name given to `--flag`, or the only one defined.
    fn pick<'b>(&self, given: &'b [String], i: usize, defined: Vec<&'b String>, what: &str) -> Result<&'b str> {
        if let Some(n) = given.get(i) {
            return Ok(n);
        }
        if i == 0 && given.is_empty() && defined.len() == 1 {
            return Ok(defined[0]);
        }
        bail!("--{what} required")
    }

    fn form_name(&self, i: usize) -> Result<&str> {
        self.pick(&self.f.form, i, self.m.forms.keys().collect(), "form")
    }

    fn form(&self, i: usize) -> Result<KForm> {
        self.m.form(self.form_name(i)?)
    }

    fn structure(&self) -> Result<AlmostSymplectic> {
        let name = self.form_name(0)?;
        let w = self.m.form(name)?;
        AlmostSymplectic::build(w.chart(), &w).with_context(|| format!("form `{name}` as an almost symplectic structure"))
    }

    fn function_names(&self) -> Vec<String> {
        self.f.function.iter().chain(&self.f.functions).cloned().collect()
    }

    fn function(&self, i: usize, on: Option<&Chart>) -> Result<(String, Expr)> {
        let names = self.function_names();
        let n = self.pick(&names, i, self.m.functions.keys().collect(), "function")?.to_string();
        let e = self.m.function(&n, on)?;
        Ok((n, e))
    }

    fn point(&self, chart: &Chart) -> Result<SamplePoint> {
        let src = self.f.point.as_deref().ok_or_else(|| anyhow!("--point required"))?;
        let values = split_top(src, ',').iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?;
        chart.point(values).with_context(|| format!("point on chart `{}`", chart.name()))
    }

    fn associated(&self) -> Result<AssociatedStructures> {
        let conn = self.m.connection(self.f.connection.as_deref())?;
        let gamma = self.m.metric(self.f.metric.as_deref(), conn.tangent().total())?;
        Ok(AssociatedStructures::new(&gamma, &conn)?)
    }
}

fn lepage(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let l = s.lepage_decompose()?;
    r.output("sigma", &l.sigma);
    r.output("psi", &l.psi);
    Ok(())
}

fn classify(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let c = s.classify()?;
    r.output("kind", c.label());
    r.output("d_omega", s.d_omega());
    if let Ok(l) = s.lepage_decompose() {
        r.output("sigma", &l.sigma);
        r.output("psi", &l.psi);
    }
    if let Some(ds) = &c.d_sigma {
        r.output("d_sigma", ds);
    }
    if let Some(t) = &c.potential {
        r.output("potential", show(t, s.chart()));
    }
    r.condition("dω = 0", &c.d_omega, false);
    if let Some(p) = &c.psi {
        r.condition("ψ = 0", p, false);
    }
    if let Some(d) = &c.d_sigma_status {
        r.condition("dσ = 0", d, false);
    }
    Ok(())
}

fn check_field(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let xn = cx.pick(&cx.f.field, 0, cx.m.fields.keys().collect(), "field")?;
    let x = cx.m.field(xn)?;
    let f = if cx.function_names().is_empty() {
        None
    } else {
        Some(cx.function(0, Some(s.chart()))?.1)
    };
    r.output("X", &x);
    let v = s.check_field(&x, f.as_ref())?;
    r.verdict("", &v);
    Ok(())
}

fn ham(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let (_, f) = cx.function(0, Some(s.chart()))?;
    let (x, v) = s.hamiltonian_field(&f)?;
    r.output("X_f", &x);
    r.verdict("", &v);
    Ok(())
}

fn bracket(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let names = cx.function_names();
    if names.len() != 2 {
        bail!("--functions needs exactly two names");
    }
    let (fname, f) = cx.function(0, Some(s.chart()))?;
    let (hname, h) = cx.function(1, Some(s.chart()))?;
    let (_, vf) = s.hamiltonian_field(&f)?;
    let (_, vh) = s.hamiltonian_field(&h)?;
    r.verdict(&fname, &vf);
    r.verdict(&hname, &vh);
    if vf.holds() && vh.holds() {
        let b = s.poisson_bracket(&f, &h)?;
        r.output(format!("{{{fname}, {hname}}}"), show(&b, s.chart()));
    }
    Ok(())
}

fn kernel(cx: &Ctx, r: &mut Report) -> Result<()> {
    let w = cx.form(0)?;
    let eta = if w.degree() == 2 { w.ext_d() } else { w };
    let k = kernel_of_contraction(&eta)?;
    r.output("dimension", k.dim);
    r.output_list("basis", k.basis.iter().map(|x| x.to_string()).collect());
    Ok(())
}

fn cone(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let p = cx.point(s.chart())?;
    let c = s.hamiltonian_cone_at(&p)?;
    r.output("point", &p);
    r.output("dimension", c.dim);
    r.output_list("basis", c.basis.iter().map(|v| vector(v)).collect());
    Ok(())
}

fn dirac(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let p = cx.point(s.chart())?;
    let fields = cx.f.field.iter().map(|n| cx.m.field(n)).collect::<Result<Vec<_>>>()?;
    let fr = s.dirac_frame_at(&p, &fields)?;
    r.output("point", &p);
    r.output("dim_H", fr.dim_h);
    r.output("rank", fr.rank);
    r.output_list(
        "frame",
        fr.pairs.iter().map(|(x, nu)| format!("{} ; {}", vector(x), vector(nu))).collect(),
    );
    let m = s.chart().dim();
    r.condition("isotropic", &Status::from_bool(fr.isotropic, "α(Y) + β(X)"), true);
    r.condition(format!("rank = {m}"), &Status::from_bool(fr.rank == m, "rank"), true);
    Ok(())
}

fn momentum(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let fnames = cx.function_names();
    if cx.f.field.is_empty() || cx.f.field.len() != fnames.len() {
        bail!("momentum needs --field and --functions of equal length");
    }
    let mut comps = Vec::new();
    for (i, xn) in cx.f.field.iter().enumerate() {
        comps.push((cx.m.field(xn)?, cx.function(i, Some(s.chart()))?.1));
    }
    let mut md = MomentumData::new(comps);
    if let Some(lie) = &cx.m.lie {
        if lie.dim == cx.f.field.len() {
            md = md.with_constants(cx.m.lie_data()?.constants().clone());
        }
    }
    let v = check_momentum_map(&s, &md)?;
    r.verdict("", &v);
    Ok(())
}

fn restrict(cx: &Ctx, r: &mut Report) -> Result<()> {
    let s = cx.structure()?;
    let mn = cx.pick(&cx.f.map, 0, cx.m.maps.keys().collect(), "map")?;
    let iota = cx.m.map(mn)?;
    let rep = restrict_to_level(&s, &iota)?;
    r.output(format!("{mn}*omega"), &rep.pulled);
    r.output_list(
        "kernels",
        rep.kernels
            .iter()
            .map(|(p, k)| {
                let vs: Vec<String> = k.iter().map(|v| vector(v)).collect();
                format!("{p}: {}", if vs.is_empty() { "0".into() } else { vs.join(", ") })
            })
            .collect(),
    );
    Ok(())
}

fn reduce(cx: &Ctx, r: &mut Report) -> Result<()> {
    if cx.f.form.len() != 2 || cx.f.map.len() != 2 {
        bail!("reduce needs --form OMEGA,VARPI and --map IOTA,Q");
    }
    let omega = cx.form(0)?;
    let varpi = cx.form(1)?;
    let iota = cx.m.map(&cx.f.map[0])?;
    let q = cx.m.map(&cx.f.map[1])?;
    let pulled = iota.pullback(&omega)?;
    r.output("iota*omega", &pulled);
    r.output("q*varpi", q.pullback(&varpi)?);
    let v = check_reduction(&pulled, &q, &varpi)?;
    r.verdict("", &v);
    Ok(())
}

fn lift(cx: &Ctx, r: &mut Report) -> Result<()> {
    let theta = cx.form(0)?;
    let tc = asympl::tangent::TangentChart::new(theta.chart())?;
    r.output("complete", tc.complete_lift(&theta)?);
    r.output("vertical", tc.vertical_lift(&theta)?);
    for xn in &cx.f.field {
        let x = cx.m.field(xn)?;
        r.output(format!("{xn}^c"), tc.complete_lift_field(&x)?);
        r.output(format!("{xn}^v"), tc.vertical_lift_field(&x)?);
    }
    if !cx.function_names().is_empty() {
        let (fname, f) = cx.function(0, Some(theta.chart()))?;
        r.output(format!("{fname}^c"), show(&tc.complete_lift_fn(&f)?, tc.total()));
        if theta.degree() != 2 {
            return Ok(());
        }
        let s = AlmostSymplectic::build(theta.chart(), &theta)?;
        let (_, v) = tc.transport(&s, &f)?;
        r.verdict("", &v);
    }
    Ok(())
}

fn curvature(cx: &Ctx, r: &mut Report) -> Result<()> {
    let conn = cx.m.connection(cx.f.connection.as_deref())?;
    let tc = conn.tangent();
    let (frame, coframe) = conn.horizontal_frame()?;
    r.output_list("frame", frame.iter().map(|x| x.to_string()).collect());
    r.output_list("coframe", coframe.iter().map(|t| t.to_string()).collect());
    let curv = conn.curvature()?;
    let n = tc.n();
    let mut entries = Vec::new();
    for (k, rk) in curv.iter().enumerate() {
        for i in 0..n {
            for j in i + 1..n {
                if !rk[i][j].is_zero() {
                    entries.push(format!("R{}_{}{} = {}", k + 1, i + 1, j + 1, show(&rk[i][j], tc.total())));
                }
            }
        }
    }
    let flat = entries.is_empty();
    r.output_list("curvature", entries);
    r.output("flat", flat);
    Ok(())
}

fn vham(cx: &Ctx, r: &mut Report) -> Result<()> {
    let a = cx.associated()?;
    let (x, v) = if cx.function_names().is_empty() {
        let alpha = cx.form(0)?;
        a.vertical_from_closed(&alpha)?
    } else {
        let (_, f) = cx.function(0, Some(a.tangent().base()))?;
        a.vertical_hamiltonian(&f)?
    };
    r.output("X^v", &x);
    r.verdict("", &v);
    Ok(())
}

fn hham(cx: &Ctx, r: &mut Report) -> Result<()> {
    let a = cx.associated()?;
    let (_, f) = cx.function(0, Some(a.tangent().total()))?;
    let h = a.horizontal_hamiltonian(&f)?;
    r.output("X^h", &h.field);
    r.verdict("", &h.verdict);
    Ok(())
}

fn lie(cx: &Ctx, r: &mut Report) -> Result<()> {
    let data = cx.m.lie_data()?;
    let xi = match (&cx.f.point, cx.m.lie_xi()) {
        (Some(p), _) => split_top(p, ',').iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?,
        (None, Some(xi)) => xi?,
        (None, None) => bail!("give ξ with --point or `xi` in [lie]"),
    };
    let omega = data.omega();
    r.output("xi", vector(&xi));
    r.output("omega", &omega);
    r.output("d_omega", ce_differential(&omega, &data));
    let v = diagonal_check(&data, &xi)?;
    r.verdict("", &v);
    Ok(())
}
