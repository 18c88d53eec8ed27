use std::collections::BTreeMap;

use super::{KForm, VecField};
use crate::error::{Error, Result};
use crate::expr::{Chart, Expr, Value};

/// A smooth map between charts given by one source-chart expression per
/// target coordinate. Target parameters map to source parameters of the same
/// name.
#[derive(Clone, Debug, PartialEq)]
pub struct MapExpr {
    source: Chart,
    target: Chart,
    images: Vec<Expr>,
}

impl MapExpr {
    pub fn new(source: &Chart, target: &Chart, images: Vec<Expr>) -> Result<Self> {
        if images.len() != target.dim() {
            return Err(Error::Dimension(format!(
                "map into `{}` needs {} components, got {}",
                target.name(),
                target.dim(),
                images.len()
            )));
        }
        for p in target.params() {
            if source.symbol_index(p).is_none() {
                return Err(Error::InvalidChart(format!(
                    "target parameter `{p}` is not a symbol of `{}`",
                    source.name()
                )));
            }
        }
        Ok(MapExpr {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Parses one expression per target coordinate, in target order.
    pub fn parse<S: AsRef<str>>(source: &Chart, target: &Chart, srcs: &[S]) -> Result<Self> {
        let images = srcs
            .iter()
            .map(|s| source.parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        MapExpr::new(source, target, images)
    }

    pub fn identity(chart: &Chart) -> Self {
        MapExpr {
            source: chart.clone(),
            target: chart.clone(),
            images: (0..chart.dim()).map(Expr::var).collect(),
        }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn images(&self) -> &[Expr] {
        &self.images
    }

    /// Substitution table indexed by target symbols.
    fn table(&self) -> Vec<Expr> {
        let mut t = self.images.clone();
        for p in self.target.params() {
            let k = self.source.symbol_index(p).expect("checked in new");
            t.push(Expr::var(k));
        }
        t
    }

    /// `f∘F` for a function on the target chart.
    pub fn pull_function(&self, f: &Expr) -> Result<Expr> {
        let e = f.substitute(&self.table())?;
        self.check_ln(&e)?;
        Ok(e)
    }

    /// Rejects `ln` atoms whose argument is non-positive at every sample
    /// point of the source domain.
    fn check_ln(&self, e: &Expr) -> Result<()> {
        let args = e.ln_arguments();
        if args.is_empty() {
            return Ok(());
        }
        let pts = self.source.sample_points(16, self.source.seed())?;
        for a in args {
            let positive_somewhere = pts.iter().any(|p| match a.eval_at(p) {
                Ok(Value::Exact(q)) => q > Default::default(),
                Ok(Value::Float(x)) => x > 0.0,
                Err(_) => false,
            });
            if !positive_somewhere {
                return Err(Error::LnNonPositive);
            }
        }
        Ok(())
    }

    /// Pullback `F*a`.
    pub fn pullback(&self, a: &KForm) -> Result<KForm> {
        self.target.ensure_same(a.chart())?;
        let table = self.table();
        let dimg: Vec<KForm> = self
            .images
            .iter()
            .map(|e| KForm::differential(&self.source, e))
            .collect();
        let mut cache: BTreeMap<Vec<usize>, KForm> = BTreeMap::new();
        let mut out = KForm::zero(&self.source, a.degree());
        for (idx, f) in a.components() {
            let g = f.substitute(&table)?;
            self.check_ln(&g)?;
            let basis = match cache.get(idx) {
                Some(b) => b.clone(),
                None => {
                    let mut b = KForm::scalar(&self.source, Expr::one());
                    for &i in idx {
                        b = b.wedge(&dimg[i])?;
                    }
                    cache.insert(idx.clone(), b.clone());
                    b
                }
            };
            out = out.add(&basis.scale(&g))?;
        }
        Ok(out)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &MapExpr) -> Result<MapExpr> {
        inner.target.ensure_same(&self.source)?;
        let images = self
            .images
            .iter()
            .map(|e| inner.pull_function(e))
            .collect::<Result<Vec<_>>>()?;
        MapExpr::new(&inner.source, &self.target, images)
    }

    /// Jacobian `J[i][j] = ∂F^i/∂x^j`.
    pub fn jacobian(&self) -> Vec<Vec<Expr>> {
        self.images
            .iter()
            .map(|e| (0..self.source.dim()).map(|j| e.diff(j)).collect())
            .collect()
    }

    /// Pushforward of a source field, expressed in source coordinates.
    pub fn pushforward(&self, x: &VecField) -> Result<Vec<Expr>> {
        self.source.ensure_same(x.chart())?;
        Ok(self.images.iter().map(|e| x.apply(e)).collect())
    }
}
