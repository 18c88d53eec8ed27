//! Momentum maps, level-set pullbacks and reduced forms, all checked in
//! user-supplied charts and parametrizations.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::linalg::{self, nullspace_q};
use crate::exterior::{KForm, MapExpr, VecField};
use crate::expr::{Expr, SamplePoint, ZeroTest, Q};
use crate::symplectic::AlmostSymplectic;
use crate::verdict::{Status, Verdict};

/// Infinitesimal generators with the matching momentum components.
#[derive(Clone, Debug)]
pub struct MomentumData {
    pub components: Vec<(VecField, Expr)>,
    /// `constants[a][b][c] = c^c_{ab}` of the acting algebra.
    pub constants: Option<Vec<Vec<Vec<Q>>>>,
}

impl MomentumData {
    pub fn new(components: Vec<(VecField, Expr)>) -> Self {
        MomentumData {
            components,
            constants: None,
        }
    }

    pub fn with_constants(mut self, c: Vec<Vec<Vec<Q>>>) -> Self {
        self.constants = Some(c);
        self
    }
}

pub fn check_momentum_map(s: &AlmostSymplectic, md: &MomentumData) -> Result<Verdict> {
    let chart = s.chart();
    let mut v = Verdict::new();
    for (a, (x, phi)) in md.components.iter().enumerate() {
        chart.ensure_same(x.chart())?;
        let a = a + 1;
        let r = s.flat(x)?.add(&KForm::differential(chart, phi))?;
        v.push(
            format!("i(X_{a})ω + dΦ_{a} = 0"),
            r.zero_status(&format!("i(X_{a})ω + dΦ_{a}")),
        );
        v.push(
            format!("L_X_{a} ω = 0"),
            s.omega().lie_derivative(x)?.zero_status(&format!("L_X_{a} ω")),
        );
    }
    if let Some(c) = &md.constants {
        let k = md.components.len();
        if c.len() != k || c.iter().any(|r| r.len() != k || r.iter().any(|t| t.len() != k)) {
            return Err(Error::Dimension(format!(
                "structure constants must be {k}×{k}×{k}"
            )));
        }
        for a in 0..k {
            for b in a + 1..k {
                let name = format!("{{Φ_{}, Φ_{}}} = c^c_{}{} Φ_c", a + 1, b + 1, a + 1, b + 1);
                let fa = &md.components[a].1;
                let fb = &md.components[b].1;
                let status = match s.poisson_bracket(fa, fb) {
                    Ok(br) => {
                        let rhs: Expr = (0..k)
                            .filter(|&j| !c[a][b][j].is_zero())
                            .map(|j| md.components[j].1.scale(&c[a][b][j]))
                            .sum();
                        KForm::scalar(chart, &br - &rhs).zero_status(&name)
                    }
                    Err(Error::Precondition(m)) => Status::fails_exact(m, f64::NAN),
                    Err(e) => return Err(e),
                };
                v.push(name, status);
            }
        }
    }
    Ok(v)
}

/// Pullback of `ω` to a level set together with pointwise kernels.
#[derive(Clone, Debug)]
pub struct LevelReport {
    pub pulled: KForm,
    /// Exact null space of the pulled-back component matrix at sample points.
    pub kernels: Vec<(SamplePoint, Vec<Vec<Q>>)>,
}

fn matrix_at(a: &KForm, p: &SamplePoint) -> Result<Vec<Vec<Q>>> {
    a.matrix()?
        .iter()
        .map(|row| row.iter().map(|e| e.eval_exact(p.values())).collect())
        .collect()
}

pub fn restrict_to_level(s: &AlmostSymplectic, param: &MapExpr) -> Result<LevelReport> {
    s.chart().ensure_same(param.target())?;
    let pulled = param.pullback(s.omega())?;
    let n = param.source();
    let mut kernels = Vec::new();
    for p in n.sample_points(4, n.seed())? {
        let m = matrix_at(&pulled, &p)?;
        kernels.push((p, nullspace_q(&m, n.dim())));
    }
    Ok(LevelReport { pulled, kernels })
}

/// Verifies `q*ϖ = ι*ω` and nondegeneracy of `ϖ`.
pub fn check_reduction(iota_omega: &KForm, q: &MapExpr, varpi: &KForm) -> Result<Verdict> {
    if iota_omega.degree() != 2 || varpi.degree() != 2 {
        return Err(Error::Degree("reduction check needs 2-forms".into()));
    }
    q.source().ensure_same(iota_omega.chart())?;
    q.target().ensure_same(varpi.chart())?;
    let qc = q.target();
    if qc.dim() % 2 != 0 {
        return Err(Error::Dimension(format!(
            "reduced chart `{}` has odd dimension {}",
            qc.name(),
            qc.dim()
        )));
    }
    let det = linalg::det(&varpi.matrix()?, qc)?;
    let mut v = Verdict::new();
    match qc.is_zero(&det) {
        ZeroTest::Zero => return Err(Error::Degenerate),
        t => v.push("ϖ nondegenerate", match t {
            ZeroTest::Indeterminate => Status::Indeterminate {
                component: "det ϖ".into(),
            },
            _ => Status::Holds,
        }),
    }
    let diff = q.pullback(varpi)?.sub(iota_omega)?;
    v.push("q*ϖ = ι*ω", diff.zero_status("q*ϖ − ι*ω"));

    // basic: ker dq ⊂ ker ι*ω at sample points
    let n = q.source();
    let jac = q.jacobian();
    let mut basic = Status::Holds;
    for p in n.sample_points(4, n.seed())? {
        let j: Vec<Vec<Q>> = jac
            .iter()
            .map(|row| row.iter().map(|e| e.eval_exact(p.values())).collect())
            .collect::<Result<_>>()?;
        let m = matrix_at(iota_omega, &p)?;
        for k in nullspace_q(&j, n.dim()) {
            let bad = m
                .iter()
                .position(|row| !row.iter().zip(&k).map(|(a, b)| a * b).sum::<Q>().is_zero());
            if let Some(r) = bad {
                basic = Status::Fails(crate::verdict::Witness {
                    component: format!("ι*ω(ker dq)[{}]", n.coords()[r]),
                    point: Some(p.clone()),
                    value: f64::NAN,
                });
                break;
            }
        }
        if basic.fails() {
            break;
        }
    }
    v.push_aux("ι*ω basic", basic);
    Ok(v)
}
