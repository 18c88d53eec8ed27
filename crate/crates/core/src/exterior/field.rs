use std::fmt;

use super::KVector;
use crate::error::{Error, Result};
use crate::expr::{Chart, Expr, SamplePoint, Q};
use crate::par::Exec;
use crate::verdict::Status;

/// Vector field `X = X^i ∂_i` with one component per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct VecField {
    chart: Chart,
    comps: Vec<Expr>,
}

impl VecField {
    pub fn zero(chart: &Chart) -> Self {
        VecField {
            chart: chart.clone(),
            comps: vec![Expr::zero(); chart.dim()],
        }
    }

    pub fn new(chart: &Chart, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::Dimension(format!(
                "vector field with {} components on a {}-dimensional chart",
                comps.len(),
                chart.dim()
            )));
        }
        Ok(VecField {
            chart: chart.clone(),
            comps,
        })
    }

    /// Coordinate field `∂_i`.
    pub fn basis(chart: &Chart, i: usize) -> Self {
        let mut x = VecField::zero(chart);
        x.comps[i] = Expr::one();
        x
    }

    /// Parses a literal such as `x1*@x1 - x2*@x2`.
    pub fn parse(src: &str, chart: &Chart) -> Result<Self> {
        let v = KVector::parse(src, chart, Some(1))?;
        Ok(Self::from_kvector(&v))
    }

    pub fn from_kvector(v: &KVector) -> Self {
        let mut x = VecField::zero(v.chart());
        for (k, e) in v.components() {
            if k.len() == 1 {
                x.comps[k[0]] = e.clone();
            }
        }
        x
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> Expr {
        self.comps[i].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Expr) -> Expr {
        self.comps
            .iter()
            .enumerate()
            .filter(|(i, c)| !c.is_zero() && f.depends_on(*i as u32))
            .map(|(i, c)| c * &f.diff(i))
            .sum()
    }

    /// Commutator `[X, Y]^i = X(Y^i) − Y(X^i)`.
    pub fn bracket(&self, y: &VecField) -> Result<VecField> {
        self.chart.ensure_same(&y.chart)?;
        let comps = (0..self.chart.dim())
            .map(|i| &self.apply(&y.comps[i]) - &y.apply(&self.comps[i]))
            .collect();
        VecField::new(&self.chart, comps)
    }

    pub fn add(&self, y: &VecField) -> Result<VecField> {
        self.chart.ensure_same(&y.chart)?;
        VecField::new(
            &self.chart,
            self.comps.iter().zip(&y.comps).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, y: &VecField) -> Result<VecField> {
        self.add(&y.neg())
    }

    pub fn neg(&self) -> VecField {
        self.map(|e| -e)
    }

    pub fn scale(&self, f: &Expr) -> VecField {
        self.map(|e| e * f)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> VecField {
        VecField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn zero_status(&self, label: &str) -> Status {
        let idx: Vec<usize> = (0..self.comps.len()).filter(|&i| !self.comps[i].is_zero()).collect();
        Status::all(Exec::default().map(&idx, |&i| {
            Status::from_zero_test(
                self.chart.is_zero_with(&self.comps[i], Exec::Sequential),
                format!("{label}[{}]", self.chart.coords()[i]),
            )
        }))
    }

    /// Exact value at a point.
    pub fn eval_at(&self, p: &SamplePoint) -> Result<Vec<Q>> {
        self.comps.iter().map(|e| e.eval_exact(p.values())).collect()
    }

    pub fn to_kvector(&self) -> KVector {
        KVector::from_field(self)
    }
}

impl fmt::Display for VecField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_kvector().fmt(f)
    }
}
