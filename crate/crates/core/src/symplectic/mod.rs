//! Almost symplectic structures: musical maps, `Λ`, `⋆`, `δ`, the Lepage
//! decomposition `dω = σ∧ω + ψ`, Hamiltonian verdicts, brackets, pointwise
//! cones and Dirac frames.

mod dirac;
mod hamiltonian;
mod potential;

use std::collections::BTreeMap;
use std::fmt;

pub use dirac::{DiracFrame, HamiltonianCone};
pub use potential::find_potential;

use crate::error::{Error, Result};
use crate::exterior::linalg::{self, Matrix};
use crate::exterior::{KForm, KVector, VecField};
use crate::expr::{Chart, Expr, ZeroTest, Q};
use crate::verdict::Status;

/// A nondegenerate 2-form on an even-dimensional chart with its inverse and
/// the derived data every operation needs, computed once at construction.
#[derive(Clone, Debug)]
pub struct AlmostSymplectic {
    chart: Chart,
    omega: KForm,
    n: usize,
    matrix: Matrix,
    det: Expr,
    /// `W = Ω⁻¹`, so `♯ν = ν_j W_{ji} ∂_i`.
    inverse: Matrix,
    bivector: KVector,
    d_omega: KForm,
    volume: KForm,
    sharp_dx: Vec<KVector>,
    lepage: Option<(KForm, KForm)>,
}

/// `σ` and `ψ` with `dω = σ∧ω + ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LepageData {
    pub sigma: KForm,
    pub psi: KForm,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    Symplectic,
    LocallyConformalSymplectic,
    General,
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::Symplectic => "symplectic",
            StructureKind::LocallyConformalSymplectic => "locally_conformal_symplectic",
            StructureKind::General => "general",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub kind: StructureKind,
    pub d_omega: Status,
    pub psi: Option<Status>,
    pub d_sigma: Option<KForm>,
    pub d_sigma_status: Option<Status>,
    /// `t` with `σ = dt`, when the integration heuristic finds one.
    pub potential: Option<Expr>,
}

impl Classification {
    pub fn globally_conformal(&self) -> bool {
        self.kind == StructureKind::LocallyConformalSymplectic && self.potential.is_some()
    }

    pub fn label(&self) -> String {
        match self.kind {
            StructureKind::LocallyConformalSymplectic if self.globally_conformal() => {
                "locally_conformal_symplectic (globally conformal)".into()
            }
            StructureKind::LocallyConformalSymplectic => {
                "locally_conformal_symplectic (σ closed)".into()
            }
            k => k.to_string(),
        }
    }
}

fn require(status: Status, what: &str) -> Result<()> {
    match status {
        Status::Holds => Ok(()),
        Status::Fails(w) => Err(Error::Convention(format!("{what}: {w}"))),
        Status::Indeterminate { component } => Err(Error::Indeterminate(component)),
    }
}

fn factorial(n: usize) -> Q {
    (1..=n).fold(Q::from_integer(1.into()), |acc, k| acc * Q::from_integer(k.into()))
}

impl AlmostSymplectic {
    pub fn build(chart: &Chart, omega: &KForm) -> Result<Self> {
        chart.ensure_same(omega.chart())?;
        if omega.degree() != 2 {
            return Err(Error::Degree(format!(
                "almost symplectic structure needs a 2-form, got degree {}",
                omega.degree()
            )));
        }
        let m = chart.dim();
        if m % 2 != 0 || m == 0 {
            return Err(Error::Dimension(format!(
                "almost symplectic structure on a chart of odd dimension {m}"
            )));
        }
        let n = m / 2;
        let matrix = omega.matrix()?;
        let det = linalg::det(&matrix, chart)?;
        match chart.is_zero(&det) {
            ZeroTest::Zero => return Err(Error::Degenerate),
            ZeroTest::Indeterminate => {
                return Err(Error::Indeterminate("det(ω_ij)".into()));
            }
            ZeroTest::NonZero { .. } => {}
        }
        let inverse = linalg::inverse(&matrix, chart)?;
        let mut biv = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                biv.push((vec![i, j], -&inverse[i][j]));
            }
        }
        let bivector = KVector::from_components(chart, 2, biv)?;
        let sharp_dx = (0..m)
            .map(|j| {
                let comps = (0..m).map(|i| (vec![i], inverse[j][i].clone()));
                KVector::from_components(chart, 1, comps)
            })
            .collect::<Result<Vec<_>>>()?;
        let volume = omega
            .wedge_pow(n)?
            .scale(&Expr::constant(Q::from_integer(1.into()) / factorial(n)));
        let d_omega = omega.ext_d();
        let mut s = AlmostSymplectic {
            chart: chart.clone(),
            omega: omega.clone(),
            n,
            matrix,
            det,
            inverse,
            bivector,
            d_omega,
            volume,
            sharp_dx,
            lepage: None,
        };
        if n >= 2 {
            let sigma = s
                .lambda(&s.d_omega)?
                .scale(&Expr::rational(1, n as i64 - 1));
            let psi = s.d_omega.sub(&sigma.wedge(&s.omega)?)?;
            s.lepage = Some((sigma, psi));
        }
        Ok(s)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    /// Half the dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn det(&self) -> &Expr {
        &self.det
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn bivector(&self) -> &KVector {
        &self.bivector
    }

    pub fn d_omega(&self) -> &KForm {
        &self.d_omega
    }

    /// `ω^n/n!`.
    pub fn volume(&self) -> &KForm {
        &self.volume
    }

    /// `σ` from `Λdω/(n−1)`; zero when `n = 1`.
    pub fn sigma(&self) -> KForm {
        self.lepage
            .as_ref()
            .map_or_else(|| KForm::zero(&self.chart, 1), |(s, _)| s.clone())
    }

    pub fn psi(&self) -> KForm {
        self.lepage
            .as_ref()
            .map_or_else(|| KForm::zero(&self.chart, 3), |(_, p)| p.clone())
    }

    /// `♭X = i(X)ω`.
    pub fn flat(&self, x: &VecField) -> Result<KForm> {
        self.omega.interior(x)
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn sharp(&self, nu: &KForm) -> Result<VecField> {
        self.chart.ensure_same(nu.chart())?;
        if nu.degree() != 1 {
            return Err(Error::Degree(format!("♯ of a {}-form", nu.degree())));
        }
        let m = self.chart.dim();
        let comps = (0..m)
            .map(|i| {
                nu.components()
                    .map(|(idx, c)| c * &self.inverse[idx[0]][i])
                    .sum()
            })
            .collect();
        VecField::new(&self.chart, comps)
    }

    /// Raises every index of a k-form: `♯(ν_J dx^J) = ν_J ♯dx^{j1}∧…∧♯dx^{jk}`.
    pub fn raise(&self, nu: &KForm) -> Result<KVector> {
        self.chart.ensure_same(nu.chart())?;
        let mut cache: BTreeMap<Vec<usize>, KVector> = BTreeMap::new();
        let mut out = KVector::zero(&self.chart, nu.degree());
        for (idx, c) in nu.components() {
            let basis = match cache.get(idx) {
                Some(b) => b.clone(),
                None => {
                    let mut b = KVector::scalar(&self.chart, Expr::one());
                    for &j in idx {
                        b = b.wedge(&self.sharp_dx[j])?;
                    }
                    cache.insert(idx.clone(), b.clone());
                    b
                }
            };
            out = out.add(&basis.scale(c))?;
        }
        Ok(out)
    }

    /// `⋆ν = i(♯ν)(ω^n/n!)`.
    pub fn star(&self, nu: &KForm) -> Result<KForm> {
        self.volume.interior_multi(&self.raise(nu)?)
    }

    /// `δ = ⋆d⋆`.
    pub fn codifferential(&self, nu: &KForm) -> Result<KForm> {
        if nu.degree() == 0 {
            return Ok(KForm::zero(&self.chart, 0));
        }
        self.star(&self.star(nu)?.ext_d())
    }

    /// `Λ = i(ω⁻¹)`.
    pub fn lambda(&self, nu: &KForm) -> Result<KForm> {
        if nu.degree() < 2 {
            return Ok(KForm::zero(&self.chart, 0));
        }
        nu.interior_multi(&self.bivector)
    }

    /// `ω(X, Y)`.
    pub fn pair(&self, x: &VecField, y: &VecField) -> Result<Expr> {
        self.omega.apply(&[x, y])
    }

    /// Decomposition with exact reconstruction checks and the `δω`
    /// cross-check on `σ`.
    pub fn lepage_decompose(&self) -> Result<LepageData> {
        let Some((sigma, psi)) = &self.lepage else {
            return Err(Error::Dimension(
                "Lepage decomposition: n ≥ 2 required".into(),
            ));
        };
        let recon = self
            .d_omega
            .sub(&sigma.wedge(&self.omega)?)?
            .sub(psi)?;
        require(recon.zero_status("dω − σ∧ω − ψ"), "reconstruction")?;
        require(self.lambda(psi)?.zero_status("Λψ"), "ψ not primitive")?;
        if self.n == 2 {
            require(psi.zero_status("ψ"), "ψ nonzero in dimension 4")?;
        }
        let via_delta = self
            .codifferential(&self.omega)?
            .scale(&Expr::rational(1, self.n as i64 - 1));
        require(
            via_delta.sub(sigma)?.zero_status("δω/(n−1) − σ"),
            "σ disagrees with δω/(n−1)",
        )?;
        Ok(LepageData {
            sigma: sigma.clone(),
            psi: psi.clone(),
            n: self.n,
        })
    }

    pub fn classify(&self) -> Result<Classification> {
        let d_omega = self.d_omega.zero_status("dω");
        let mut c = Classification {
            kind: StructureKind::General,
            d_omega: d_omega.clone(),
            psi: None,
            d_sigma: None,
            d_sigma_status: None,
            potential: None,
        };
        match d_omega {
            Status::Holds => {
                c.kind = StructureKind::Symplectic;
                return Ok(c);
            }
            Status::Indeterminate { component } => return Err(Error::Indeterminate(component)),
            Status::Fails(_) => {}
        }
        let (sigma, psi) = self.lepage.as_ref().expect("dω ≠ 0 implies n ≥ 2");
        let psi_status = psi.zero_status("ψ");
        let d_sigma = sigma.ext_d();
        let ds_status = d_sigma.zero_status("dσ");
        for s in [&psi_status, &ds_status] {
            if let Status::Indeterminate { component } = s {
                return Err(Error::Indeterminate(component.clone()));
            }
        }
        if psi_status.holds() && ds_status.holds() {
            c.kind = StructureKind::LocallyConformalSymplectic;
        }
        if ds_status.holds() {
            c.potential = find_potential(sigma);
        }
        c.psi = Some(psi_status);
        c.d_sigma = Some(d_sigma);
        c.d_sigma_status = Some(ds_status);
        Ok(c)
    }
}

#[cfg(test)]
mod tests;
