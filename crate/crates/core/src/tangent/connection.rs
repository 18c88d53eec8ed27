use super::TangentChart;
use crate::error::{Error, Result};
use crate::exterior::linalg::{self, Matrix};
use crate::exterior::{KForm, VecField};
use crate::expr::{Expr, ZeroTest};
use crate::symplectic::AlmostSymplectic;
use crate::verdict::{Status, Verdict};

/// Coefficients `t[j][i] = t^j_i` on the total chart.
#[derive(Clone, Debug)]
pub struct NonlinearConnection {
    tc: TangentChart,
    t: Matrix,
}

impl NonlinearConnection {
    pub fn new(tc: &TangentChart, t: Matrix) -> Result<Self> {
        let n = tc.n();
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("connection needs {n}×{n} coefficients")));
        }
        Ok(NonlinearConnection { tc: tc.clone(), t })
    }

    pub fn zero(tc: &TangentChart) -> Self {
        let n = tc.n();
        NonlinearConnection {
            tc: tc.clone(),
            t: vec![vec![Expr::zero(); n]; n],
        }
    }

    pub fn tangent(&self) -> &TangentChart {
        &self.tc
    }

    /// `t^j_i`.
    pub fn coeff(&self, j: usize, i: usize) -> &Expr {
        &self.t[j][i]
    }

    /// `X_i = ∂x^i − t^j_i ∂y^j` and `θ^i = dy^i + t^i_j dx^j`.
    pub fn horizontal_frame(&self) -> Result<(Vec<VecField>, Vec<KForm>)> {
        let n = self.tc.n();
        let total = self.tc.total();
        let mut frame = Vec::with_capacity(n);
        let mut coframe = Vec::with_capacity(n);
        for i in 0..n {
            let mut comps = vec![Expr::zero(); 2 * n];
            comps[i] = Expr::one();
            for j in 0..n {
                comps[n + j] = -&self.t[j][i];
            }
            frame.push(VecField::new(total, comps)?);
            let mut th = self.tc.dy(i);
            for j in 0..n {
                th = th.add(&self.tc.dx(j).scale(&self.t[i][j]))?;
            }
            coframe.push(th);
        }
        Ok((frame, coframe))
    }

    /// `R[k][i][j] = R^k_{ij}`, with `R(X_i, X_j) = −pr_V [X_i, X_j]`.
    pub fn curvature(&self) -> Result<Vec<Vec<Vec<Expr>>>> {
        let n = self.tc.n();
        let (frame, _) = self.horizontal_frame()?;
        let mut r = vec![vec![vec![Expr::zero(); n]; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = frame[i].bracket(&frame[j])?;
                for k in 0..n {
                    let c = -&b.component(n + k);
                    r[k][j][i] = -&c;
                    r[k][i][j] = c;
                }
            }
        }
        Ok(r)
    }
}

/// `ω = γ_ij dx^i∧θ^j` and `g = γ_ij dx^i dx^j + γ_ij θ^i θ^j` on the total
/// chart, with the adapted frames.
#[derive(Clone, Debug)]
pub struct AssociatedStructures {
    pub conn: NonlinearConnection,
    /// `γ_ij` lifted to the total chart.
    pub gamma: Matrix,
    pub frame: Vec<VecField>,
    pub coframe: Vec<KForm>,
    pub omega: KForm,
    pub g: Matrix,
    pub g_inv: Matrix,
    pub structure: AlmostSymplectic,
    curvature: Vec<Vec<Vec<Expr>>>,
}

/// Result of the horizontal Hamiltonian criterion.
#[derive(Clone, Debug)]
pub struct HorizontalReport {
    pub field: VecField,
    pub verdict: Verdict,
}

fn mat_vec(m: &Matrix, v: &[Expr]) -> Vec<Expr> {
    m.iter()
        .map(|row| row.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
        .collect()
}

impl AssociatedStructures {
    pub fn new(gamma: &Matrix, conn: &NonlinearConnection) -> Result<Self> {
        let tc = conn.tangent();
        let n = tc.n();
        let total = tc.total();
        if gamma.len() != n || gamma.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("metric needs {n}×{n} entries")));
        }
        let gamma: Matrix = gamma
            .iter()
            .map(|r| r.iter().map(|e| tc.vertical_lift_fn(e)).collect())
            .collect::<Result<_>>()?;
        for i in 0..n {
            for j in i + 1..n {
                if gamma[i][j] != gamma[j][i] {
                    return Err(Error::Precondition(format!(
                        "metric is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        match total.is_zero(&linalg::det(&gamma, total)?) {
            ZeroTest::Zero => return Err(Error::Degenerate),
            ZeroTest::Indeterminate => return Err(Error::Indeterminate("det γ".into())),
            ZeroTest::NonZero { .. } => {}
        }
        let (frame, coframe) = conn.horizontal_frame()?;
        let mut omega = KForm::zero(total, 2);
        for i in 0..n {
            for j in 0..n {
                if !gamma[i][j].is_zero() {
                    omega = omega.add(&tc.dx(i).wedge(&coframe[j])?.scale(&gamma[i][j]))?;
                }
            }
        }
        let m = 2 * n;
        let th: Vec<Vec<Expr>> = coframe
            .iter()
            .map(|t| (0..m).map(|a| t.get(&[a])).collect())
            .collect();
        let mut g = vec![vec![Expr::zero(); m]; m];
        for (i, gi) in gamma.iter().enumerate() {
            for (j, gij) in gi.iter().enumerate() {
                if gij.is_zero() {
                    continue;
                }
                g[i][j] = &g[i][j] + gij;
                for a in 0..m {
                    if th[i][a].is_zero() {
                        continue;
                    }
                    for b in 0..m {
                        if !th[j][b].is_zero() {
                            g[a][b] = &g[a][b] + &(gij * &(&th[i][a] * &th[j][b]));
                        }
                    }
                }
            }
        }
        let g_inv = linalg::inverse(&g, total)?;
        let structure = AlmostSymplectic::build(total, &omega)?;
        let curvature = conn.curvature()?;
        Ok(AssociatedStructures {
            conn: conn.clone(),
            gamma,
            frame,
            coframe,
            omega,
            g,
            g_inv,
            structure,
            curvature,
        })
    }

    pub fn tangent(&self) -> &TangentChart {
        self.conn.tangent()
    }

    pub fn curvature(&self) -> &Vec<Vec<Vec<Expr>>> {
        &self.curvature
    }

    /// Duality and pairing identities of the adapted frames.
    pub fn check(&self) -> Result<Verdict> {
        let tc = self.tangent();
        let n = tc.n();
        let mut v = Verdict::new();
        let mut dual = Vec::new();
        let mut pair = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let xj = &self.frame[j];
                let delta = if i == j { Expr::one() } else { Expr::zero() };
                let a = &tc.dx(i).interior(xj)?.as_scalar() - &delta;
                let b = self.coframe[i].interior(xj)?.as_scalar();
                dual.push(KForm::scalar(tc.total(), a).zero_status(&format!("dx^{}(X_{})", i + 1, j + 1)));
                dual.push(KForm::scalar(tc.total(), b).zero_status(&format!("θ^{}(X_{})", i + 1, j + 1)));
                let w = &self.structure.pair(&self.frame[i], &tc.d_y(j))? - &self.gamma[i][j];
                pair.push(KForm::scalar(tc.total(), w).zero_status(&format!("ω(X_{}, ∂y^{})", i + 1, j + 1)));
                let gv = self.g_apply(&self.frame[i], &tc.d_y(j));
                pair.push(KForm::scalar(tc.total(), gv).zero_status(&format!("g(X_{}, ∂y^{})", i + 1, j + 1)));
            }
        }
        v.push("dx^i(X_j) = δ, θ^i(X_j) = 0", Status::all(dual));
        v.push("ω(X_i, ∂y^j) = γ_ij, g(X_i, ∂y^j) = 0", Status::all(pair));
        Ok(v)
    }

    /// `g(U, V)`.
    pub fn g_apply(&self, u: &VecField, w: &VecField) -> Expr {
        let gu = mat_vec(&self.g, w.components());
        u.components()
            .iter()
            .zip(&gu)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `♯_g α`.
    pub fn sharp_g(&self, alpha: &KForm) -> Result<VecField> {
        let m = 2 * self.tangent().n();
        let a: Vec<Expr> = (0..m).map(|i| alpha.get(&[i])).collect();
        VecField::new(self.tangent().total(), mat_vec(&self.g_inv, &a))
    }

    /// `♭_g X = g(X, ·)`.
    pub fn flat_g(&self, x: &VecField) -> Result<KForm> {
        let comps = mat_vec(&self.g, x.components())
            .into_iter()
            .enumerate()
            .map(|(i, e)| (vec![i], e));
        KForm::from_components(self.tangent().total(), 1, comps)
    }

    /// `S'(∂y^i) = X_i`, `S'(X_i) = 0`, i.e. `S'V = θ^i(V) X_i`.
    pub fn s_prime(&self, v: &VecField) -> Result<VecField> {
        let mut out = VecField::zero(self.tangent().total());
        for (th, x) in self.coframe.iter().zip(&self.frame) {
            let c = th.interior(v)?.as_scalar();
            if !c.is_zero() {
                out = out.add(&x.scale(&c))?;
            }
        }
        Ok(out)
    }

    /// `α∘S'`.
    pub fn compose_s_prime(&self, alpha: &KForm) -> Result<KForm> {
        let mut out = KForm::zero(self.tangent().total(), 1);
        for (th, x) in self.coframe.iter().zip(&self.frame) {
            let c = alpha.interior(x)?.as_scalar();
            if !c.is_zero() {
                out = out.add(&th.scale(&c))?;
            }
        }
        Ok(out)
    }

    /// `R(U, V)` as a vertical field, for horizontal `U, V`.
    pub fn curvature_on(&self, u: &VecField, w: &VecField) -> Result<VecField> {
        let tc = self.tangent();
        let n = tc.n();
        let mut comps = vec![Expr::zero(); 2 * n];
        for k in 0..n {
            let mut s = Expr::zero();
            for i in 0..n {
                let ui = u.component(i);
                if ui.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let r = &self.curvature[k][i][j];
                    let wj = w.component(j);
                    if !r.is_zero() && !wj.is_zero() {
                        s = &s + &(&ui * &(&wj * r));
                    }
                }
            }
            comps[n + k] = s;
        }
        VecField::new(tc.total(), comps)
    }

    fn vertical_status(&self, x: &VecField, label: &str) -> Status {
        let n = self.tangent().n();
        Status::all((0..n).map(|i| {
            KForm::scalar(self.tangent().total(), x.component(i))
                .zero_status(&format!("{label}[{}]", self.tangent().total().coords()[i]))
        }))
    }

    /// `X^v = −♯_ω d(π*f)` with verticality, the locally Hamiltonian
    /// conditions and the two alternative characterizations via `S'`, `S`.
    pub fn vertical_hamiltonian(&self, f: &Expr) -> Result<(VecField, Verdict)> {
        let tc = self.tangent();
        let total = tc.total();
        let df = KForm::differential(total, &tc.vertical_lift_fn(f)?);
        let x = self.structure.sharp(&df)?.neg();
        let mut v = Verdict::new();
        v.push("X^v vertical", self.vertical_status(&x, "X^v"));
        let ix = self.omega.interior(&x)?;
        v.push("d(i(X^v)ω) = 0", ix.ext_d().zero_status("d(i(X^v)ω)"));
        v.push(
            "i(X^v)dω = 0",
            self.structure.d_omega().interior(&x)?.zero_status("i(X^v)dω"),
        );
        let alt = self.sharp_g(&self.compose_s_prime(&df)?)?;
        v.push_aux("X^v = ♯_g(df∘S')", x.sub(&alt)?.zero_status("X^v − ♯_g(df∘S')"));
        let beta = tc.compose_s(&self.flat_g(&x)?)?;
        v.push_aux(
            "i(X^v)ω = −(♭X^v)∘S",
            ix.add(&beta)?.zero_status("i(X^v)ω + (♭X^v)∘S"),
        );
        v.push_aux("S S'X^v = X^v", tc.s(&self.s_prime(&x)?)?.sub(&x)?.zero_status("SS'X^v − X^v"));
        Ok((x, v))
    }

    /// The vertical field `Z^v` with `i(Z^v)ω = π*α` for a base 1-form `α`;
    /// locally Hamiltonian exactly when `α` is closed.
    pub fn vertical_from_closed(&self, alpha: &KForm) -> Result<(VecField, Verdict)> {
        let tc = self.tangent();
        if alpha.degree() != 1 {
            return Err(Error::Degree("expected a base 1-form".into()));
        }
        let pa = tc.vertical_lift(alpha)?;
        let z = self.structure.sharp(&pa)?;
        let mut v = Verdict::new();
        v.push_aux("dα = 0", alpha.ext_d().zero_status("dα"));
        v.push("Z^v vertical", self.vertical_status(&z, "Z^v"));
        let lh = self.structure.is_locally_hamiltonian(&z)?;
        for c in lh.conditions {
            v.push(c.name, c.status);
        }
        Ok((z, v))
    }

    /// Horizontal criterion for `f` on the total chart; every step is a
    /// separate flag, `(6)` being the direct check on the produced field.
    pub fn horizontal_hamiltonian(&self, f: &Expr) -> Result<HorizontalReport> {
        let tc = self.tangent();
        let total = tc.total();
        let n = tc.n();
        total.ensure_same(&self.omega.chart().clone())?;
        let mut v = Verdict::new();
        v.push(
            "(1) X_i f = 0",
            Status::all(self.frame.iter().enumerate().map(|(i, x)| {
                KForm::scalar(total, x.apply(f)).zero_status(&format!("X_{} f", i + 1))
            })),
        );
        let grad = self.sharp_g(&KForm::differential(total, f))?;
        v.push("(2) grad_g f vertical", self.vertical_status(&grad, "grad f"));
        let xh = self.s_prime(&grad)?.neg();
        v.push(
            "(3) X^h = −S'(grad_g f) horizontal",
            Status::all(self.coframe.iter().enumerate().map(|(i, th)| {
                KForm::scalar(total, th.interior(&xh).map(|t| t.as_scalar()).unwrap_or_else(|_| Expr::zero()))
                    .zero_status(&format!("θ^{}(X^h)", i + 1))
            })),
        );
        let mut kernel = Vec::new();
        let mut literal = Vec::new();
        for (j, y) in self.frame.iter().enumerate() {
            let r = self.curvature_on(&xh, y)?;
            kernel.push(r.zero_status(&format!("R(X^h, X_{})", j + 1)));
        }
        v.push("(4) R(X^h, Y^h) = 0", Status::all(kernel));
        let mut cyc = Vec::new();
        for j in 0..n {
            for l in j + 1..n {
                let (y, z) = (&self.frame[j], &self.frame[l]);
                let a = self.structure.pair(&self.curvature_on(&xh, y)?, z)?;
                let b = self.structure.pair(&self.curvature_on(y, z)?, &xh)?;
                let c = self.structure.pair(&self.curvature_on(z, &xh)?, y)?;
                cyc.push(
                    KForm::scalar(total, &(&a + &b) + &c)
                        .zero_status(&format!("cyclic ω(R, ·)[X_{}, X_{}]", j + 1, l + 1)),
                );
                let rim = self.curvature_on(y, z)?;
                literal.push(
                    KForm::scalar(total, self.g_apply(&xh, &rim))
                        .zero_status(&format!("g(X^h, R(X_{}, X_{}))", j + 1, l + 1)),
                );
            }
        }
        v.push("(5) cyclic ω(R(X^h,Y^h),Z^h) = 0", Status::all(cyc));
        let direct = self.structure.is_locally_hamiltonian(&xh)?;
        v.push(
            "(6) d(i(X^h)ω) = 0 and i(X^h)dω = 0",
            Status::all(direct.conditions.iter().map(|c| c.status.clone())),
        );
        v.push_aux("g(X^h, im R) = 0 (literal reading)", Status::all(literal));
        let df = KForm::differential(total, f);
        v.push_aux(
            "i(X^h)ω + df = 0",
            self.omega.interior(&xh)?.add(&df)?.zero_status("i(X^h)ω + df"),
        );
        Ok(HorizontalReport { field: xh, verdict: v })
    }
}
