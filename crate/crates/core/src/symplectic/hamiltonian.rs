use super::AlmostSymplectic;
use crate::error::{Error, Result};
use crate::exterior::{KForm, VecField};
use crate::expr::Expr;
use crate::verdict::{Status, Verdict};

/// Agreement of two independent verdicts on the same question.
fn agreement(direct: &[&Status], other: &[&Status]) -> Status {
    let det = |v: &[&Status]| {
        if v.iter().any(|s| s.fails()) {
            Some(false)
        } else if v.iter().all(|s| s.holds()) {
            Some(true)
        } else {
            None
        }
    };
    match (det(direct), det(other)) {
        (Some(a), Some(b)) => Status::from_bool(a == b, "Lepage criterion vs direct conditions"),
        _ => Status::Indeterminate {
            component: "Lepage criterion vs direct conditions".into(),
        },
    }
}

impl AlmostSymplectic {
    /// Tests `d(i(X)ω) = 0` and `i(X)dω = 0`, and cross-checks against the
    /// Lepage form of the criterion.
    pub fn is_locally_hamiltonian(&self, x: &VecField) -> Result<Verdict> {
        self.check_field(x, None)
    }

    /// As [`is_locally_hamiltonian`](Self::is_locally_hamiltonian), adding
    /// `i(X)ω + df = 0` for a proposed Hamiltonian function.
    pub fn check_field(&self, x: &VecField, f: Option<&Expr>) -> Result<Verdict> {
        self.chart.ensure_same(x.chart())?;
        let ix = self.omega.interior(x)?;
        let mut v = Verdict::new();
        v.push("d(i(X)ω) = 0", ix.ext_d().zero_status("d(i(X)ω)"));
        v.push("i(X)dω = 0", self.d_omega.interior(x)?.zero_status("i(X)dω"));
        if let Some(f) = f {
            let r = ix.add(&KForm::differential(&self.chart, f))?;
            v.push("i(X)ω + df = 0", r.zero_status("i(X)ω + df"));
        }
        if self.n >= 2 {
            let sigma = self.sigma();
            let s1 = KForm::scalar(&self.chart, sigma.interior(x)?.as_scalar()).zero_status("σ(X)");
            let s2 = sigma
                .wedge(&ix)?
                .sub(&self.psi().interior(x)?)?
                .zero_status("σ∧i(X)ω − i(X)ψ");
            let a = agreement(
                &[&v.conditions[0].status, &v.conditions[1].status],
                &[&v.conditions[0].status, &s1, &s2],
            );
            v.push_aux("σ(X) = 0", s1);
            v.push_aux("σ∧i(X)ω − i(X)ψ = 0", s2);
            v.push_aux("criteria agree", a);
        }
        Ok(v)
    }

    /// `X_f = −♯df` with the verdict `i(X_f)dω = 0` (equivalently
    /// `L_{X_f}ω = 0`) and the σ/ψ form of the same condition.
    pub fn hamiltonian_field(&self, f: &Expr) -> Result<(VecField, Verdict)> {
        let df = KForm::differential(&self.chart, f);
        let sharp_df = self.sharp(&df)?;
        let x = sharp_df.neg();
        let mut v = Verdict::new();
        v.push("i(X_f)dω = 0", self.d_omega.interior(&x)?.zero_status("i(X_f)dω"));
        v.push_aux(
            "i(X_f)ω + df = 0",
            self.omega.interior(&x)?.add(&df)?.zero_status("i(X_f)ω + df"),
        );
        if self.n >= 2 {
            let sigma = self.sigma();
            let sharp_sigma = self.sharp(&sigma)?;
            let s1 = KForm::scalar(&self.chart, sharp_sigma.apply(f)).zero_status("(♯σ)f");
            let s2 = sigma
                .wedge(&df)?
                .sub(&self.psi().interior(&sharp_df)?)?
                .zero_status("σ∧df − i(♯df)ψ");
            let a = agreement(&[&v.conditions[0].status], &[&s1, &s2]);
            v.push_aux("(♯σ)f = 0", s1);
            v.push_aux("σ∧df − i(♯df)ψ = 0", s2);
            v.push_aux("criteria agree", a);
        }
        Ok((x, v))
    }

    /// `{f, h} = ω(X_f, X_h)`, compared against `X_f h` and `−X_h f`.
    pub fn poisson_bracket(&self, f: &Expr, h: &Expr) -> Result<Expr> {
        let (xf, vf) = self.hamiltonian_field(f)?;
        if !vf.holds() {
            return Err(Error::Precondition(format!("f is not Hamiltonian: {vf}")));
        }
        let (xh, vh) = self.hamiltonian_field(h)?;
        if !vh.holds() {
            return Err(Error::Precondition(format!("h is not Hamiltonian: {vh}")));
        }
        let a = self.pair(&xf, &xh)?;
        let b = xf.apply(h);
        let c = -xh.apply(f);
        for (e, name) in [(&b, "X_f h"), (&c, "−X_h f")] {
            let s = KForm::scalar(&self.chart, &a - e).zero_status(name);
            if !s.holds() {
                return Err(Error::Convention(format!("ω(X_f, X_h) ≠ {name}: {s}")));
            }
        }
        Ok(a)
    }
}
