//! Tangent bundles of coordinate charts: the tangent structure `S`,
//! vertical and complete lifts, nonlinear connections with their adapted
//! frames, the associated almost symplectic form and metric, curvature, and
//! the vertical/horizontal Hamiltonian criteria.

mod connection;

pub use connection::{AssociatedStructures, HorizontalReport, NonlinearConnection};

use crate::error::{Error, Result};
use crate::exterior::{KForm, MapExpr, VecField};
use crate::expr::{Chart, Expr};
use crate::symplectic::AlmostSymplectic;
use crate::verdict::Verdict;

/// `TM` over a base chart: coordinates `(x^1..x^n, y^1..y^n)` followed by
/// the base parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentChart {
    base: Chart,
    total: Chart,
    pi: MapExpr,
}

fn fiber_name(coord: &str) -> String {
    match coord.strip_prefix('x') {
        Some(rest) => format!("y{rest}"),
        None => format!("y_{coord}"),
    }
}

impl TangentChart {
    pub fn new(base: &Chart) -> Result<Self> {
        let mut coords: Vec<String> = base.coords().to_vec();
        coords.extend(base.coords().iter().map(|c| fiber_name(c)));
        let mut total = Chart::with_params(&format!("T{}", base.name()), &coords, base.params())
            .map_err(|e| Error::InvalidChart(format!("cannot name fiber coordinates: {e}")))?;
        if let Some(d) = base.domain() {
            total = total.with_domain(d)?;
        }
        total = total.with_seed(base.seed());
        let n = base.dim();
        let pi = MapExpr::new(&total, base, (0..n).map(Expr::var).collect())?;
        Ok(TangentChart {
            base: base.clone(),
            total,
            pi,
        })
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn total(&self) -> &Chart {
        &self.total
    }

    pub fn projection(&self) -> &MapExpr {
        &self.pi
    }

    /// Base dimension `n`.
    pub fn n(&self) -> usize {
        self.base.dim()
    }

    pub fn x(&self, i: usize) -> Expr {
        Expr::var(i)
    }

    pub fn y(&self, i: usize) -> Expr {
        Expr::var(self.n() + i)
    }

    pub fn dx(&self, i: usize) -> KForm {
        KForm::dx(&self.total, i)
    }

    pub fn dy(&self, i: usize) -> KForm {
        KForm::dx(&self.total, self.n() + i)
    }

    pub fn d_x(&self, i: usize) -> VecField {
        VecField::basis(&self.total, i)
    }

    pub fn d_y(&self, i: usize) -> VecField {
        VecField::basis(&self.total, self.n() + i)
    }

    /// `S(∂x^i) = ∂y^i`, `S(∂y^i) = 0`.
    pub fn s(&self, v: &VecField) -> Result<VecField> {
        self.total.ensure_same(v.chart())?;
        let n = self.n();
        let mut comps = vec![Expr::zero(); 2 * n];
        for i in 0..n {
            comps[n + i] = v.component(i);
        }
        VecField::new(&self.total, comps)
    }

    /// `β∘S` for a 1-form on the total chart.
    pub fn compose_s(&self, beta: &KForm) -> Result<KForm> {
        self.total.ensure_same(beta.chart())?;
        let n = self.n();
        let comps = (0..n).map(|i| (vec![i], beta.get(&[n + i])));
        KForm::from_components(&self.total, 1, comps)
    }

    /// Lifts a base function to the total chart, `π*f`.
    pub fn vertical_lift_fn(&self, f: &Expr) -> Result<Expr> {
        self.pi.pull_function(f)
    }

    /// `Θ^v = π*Θ`.
    pub fn vertical_lift(&self, theta: &KForm) -> Result<KForm> {
        self.pi.pullback(theta)
    }

    /// `X^v = ξ^i ∂y^i`.
    pub fn vertical_lift_field(&self, x: &VecField) -> Result<VecField> {
        self.base.ensure_same(x.chart())?;
        let n = self.n();
        let mut comps = vec![Expr::zero(); 2 * n];
        for i in 0..n {
            comps[n + i] = self.vertical_lift_fn(&x.component(i))?;
        }
        VecField::new(&self.total, comps)
    }

    /// `f^c = y^j ∂f/∂x^j`.
    pub fn complete_lift_fn(&self, f: &Expr) -> Result<Expr> {
        let n = self.n();
        let mut out = Expr::zero();
        for j in 0..n {
            if f.depends_on(j as u32) {
                out = &out + &(&self.y(j) * &self.vertical_lift_fn(&f.diff(j))?);
            }
        }
        Ok(out)
    }

    /// `X^c = ξ^i ∂x^i + y^j (∂ξ^i/∂x^j) ∂y^i`.
    pub fn complete_lift_field(&self, x: &VecField) -> Result<VecField> {
        self.base.ensure_same(x.chart())?;
        let n = self.n();
        let mut comps = vec![Expr::zero(); 2 * n];
        for i in 0..n {
            comps[i] = self.vertical_lift_fn(&x.component(i))?;
            comps[n + i] = self.complete_lift_fn(&x.component(i))?;
        }
        VecField::new(&self.total, comps)
    }

    /// `Θ^c = (Θ_I)^c dx^I + Θ_I^v Σ_r dx^{i1}∧…∧dy^{ir}∧…∧dx^{ik}`.
    pub fn complete_lift(&self, theta: &KForm) -> Result<KForm> {
        self.base.ensure_same(theta.chart())?;
        let k = theta.degree();
        let mut out = KForm::zero(&self.total, k);
        for (idx, c) in theta.components() {
            let cv = self.vertical_lift_fn(c)?;
            let cc = self.complete_lift_fn(c)?;
            let mut base = KForm::scalar(&self.total, Expr::one());
            for &i in idx {
                base = base.wedge(&self.dx(i))?;
            }
            out = out.add(&base.scale(&cc))?;
            for r in 0..k {
                let mut b = KForm::scalar(&self.total, Expr::one());
                for (s, &i) in idx.iter().enumerate() {
                    b = b.wedge(&if s == r { self.dy(i) } else { self.dx(i) })?;
                }
                out = out.add(&b.scale(&cv))?;
            }
        }
        Ok(out)
    }

    /// Lifts `(σ, f)` to `(σ^c, f^c)` and checks that `X_f^c` is the
    /// `σ^c`-Hamiltonian field of `f^c`.
    pub fn transport(&self, s: &AlmostSymplectic, f: &Expr) -> Result<(AlmostSymplectic, Verdict)> {
        self.base.ensure_same(s.chart())?;
        let lifted = AlmostSymplectic::build(&self.total, &self.complete_lift(s.omega())?)?;
        let (xf, vf) = s.hamiltonian_field(f)?;
        let xc = self.complete_lift_field(&xf)?;
        let fc = self.complete_lift_fn(f)?;
        let mut v = Verdict::new();
        v.push("X_f Hamiltonian on the base", crate::verdict::Status::all(vf.conditions.iter().map(|c| c.status.clone())));
        let r = lifted
            .omega()
            .interior(&xc)?
            .add(&KForm::differential(&self.total, &fc))?;
        v.push("i(X_f^c)σ^c + d f^c = 0", r.zero_status("i(X_f^c)σ^c + d f^c"));
        v.push(
            "i(X_f^c)dσ^c = 0",
            lifted.d_omega().interior(&xc)?.zero_status("i(X_f^c)dσ^c"),
        );
        let (xh, _) = lifted.hamiltonian_field(&fc)?;
        v.push_aux("X_{f^c} = X_f^c", xh.sub(&xc)?.zero_status("X_{f^c} − X_f^c"));
        Ok((lifted, v))
    }
}

#[cfg(test)]
mod tests;
