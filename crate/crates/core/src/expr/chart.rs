use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{parse_scalar, Expr, SamplePoint, Value};
use crate::error::{Error, Result};

/// Default seed of the sampler used by zero tests.
pub const DEFAULT_SEED: u64 = 0x5eed_a5b1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    Gt,
    Ge,
    Lt,
    Le,
    Ne,
}

/// One domain constraint `lhs REL rhs`, stored as `lhs - rhs REL 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    expr: Expr,
    rel: Relation,
}

impl Constraint {
    pub fn holds(&self, point: &[super::Q]) -> bool {
        let v = match self.expr.eval(point) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let (pos, zero) = match v {
            Value::Exact(q) => (q.is_positive(), q.is_zero()),
            Value::Float(x) => (x > 0.0, x == 0.0),
        };
        match self.rel {
            Relation::Gt => pos,
            Relation::Ge => pos || zero,
            Relation::Lt => !pos && !zero,
            Relation::Le => !pos,
            Relation::Ne => !zero,
        }
    }
}

#[derive(Debug, PartialEq)]
struct ChartData {
    name: String,
    coords: Vec<String>,
    params: Vec<String>,
    domain: Option<String>,
    constraints: Vec<Constraint>,
    seed: u64,
}

/// A coordinate chart: ordered coordinate names, optional constant
/// parameters, and an optional domain predicate used to draw sample points.
///
/// Symbols are indexed coordinates first, then parameters. Cloning is cheap.
#[derive(Clone)]
pub struct Chart(Arc<ChartData>);

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.name == other.0.name
                && self.0.coords == other.0.coords
                && self.0.params == other.0.params)
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}: {})", self.0.name, self.0.coords.join(","))?;
        if !self.0.params.is_empty() {
            write!(f, " [{}]", self.0.params.join(","))?;
        }
        Ok(())
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "exp"
        && s != "ln"
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<Chart> {
        Chart::with_params(name, coords, &[] as &[&str])
    }

    pub fn with_params<S: AsRef<str>, T: AsRef<str>>(
        name: &str,
        coords: &[S],
        params: &[T],
    ) -> Result<Chart> {
        let coords: Vec<String> = coords.iter().map(|s| s.as_ref().trim().to_string()).collect();
        let params: Vec<String> = params.iter().map(|s| s.as_ref().trim().to_string()).collect();
        if coords.is_empty() {
            return Err(Error::InvalidChart(format!("chart `{name}` has no coordinates")));
        }
        let all: Vec<&String> = coords.iter().chain(&params).collect();
        for (i, c) in all.iter().enumerate() {
            if !valid_name(c) {
                return Err(Error::InvalidChart(format!("invalid symbol name `{c}`")));
            }
            if all[..i].contains(c) {
                return Err(Error::InvalidChart(format!("duplicate symbol `{c}`")));
            }
        }
        Ok(Chart(Arc::new(ChartData {
            name: name.to_string(),
            coords,
            params,
            domain: None,
            constraints: Vec::new(),
            seed: DEFAULT_SEED,
        })))
    }

    /// Attaches a domain predicate: comma separated relations such as
    /// `x1 > 0, x2 > 0, t0 != 0` (`>`, `>=`, `<`, `<=`, `!=`).
    pub fn with_domain(&self, predicate: &str) -> Result<Chart> {
        let mut constraints = Vec::new();
        for part in predicate.split([',', ';']).map(str::trim).filter(|s| !s.is_empty()) {
            let (lhs, rel, rhs) = split_relation(part).ok_or_else(|| Error::Syntax {
                pos: 0,
                msg: format!("expected a relation in domain constraint `{part}`"),
            })?;
            let l = parse_scalar(lhs, self)?;
            let r = parse_scalar(rhs, self)?;
            constraints.push(Constraint { expr: &l - &r, rel });
        }
        let d = &self.0;
        Ok(Chart(Arc::new(ChartData {
            name: d.name.clone(),
            coords: d.coords.clone(),
            params: d.params.clone(),
            domain: Some(predicate.trim().to_string()),
            constraints,
            seed: d.seed,
        })))
    }

    pub fn with_seed(&self, seed: u64) -> Chart {
        let d = &self.0;
        Chart(Arc::new(ChartData {
            name: d.name.clone(),
            coords: d.coords.clone(),
            params: d.params.clone(),
            domain: d.domain.clone(),
            constraints: d.constraints.clone(),
            seed,
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn coords(&self) -> &[String] {
        &self.0.coords
    }

    pub fn params(&self) -> &[String] {
        &self.0.params
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    /// Number of symbols (coordinates plus parameters).
    pub fn nsyms(&self) -> usize {
        self.0.coords.len() + self.0.params.len()
    }

    pub fn domain(&self) -> Option<&str> {
        self.0.domain.as_deref()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.0.constraints
    }

    pub fn seed(&self) -> u64 {
        self.0.seed
    }

    pub fn symbol_name(&self, k: usize) -> &str {
        let m = self.dim();
        if k < m {
            &self.0.coords[k]
        } else {
            &self.0.params[k - m]
        }
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.0
            .coords
            .iter()
            .chain(&self.0.params)
            .position(|c| c == name)
    }

    pub fn coord_index(&self, name: &str) -> Result<usize> {
        self.0
            .coords
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    pub fn coord(&self, name: &str) -> Result<Expr> {
        self.coord_index(name).map(Expr::var)
    }

    pub fn parse(&self, src: &str) -> Result<Expr> {
        parse_scalar(src, self)
    }

    /// Partial derivative by coordinate name.
    pub fn differentiate(&self, e: &Expr, coord: &str) -> Result<Expr> {
        Ok(e.diff(self.coord_index(coord)?))
    }

    pub fn point(&self, values: Vec<super::Q>) -> Result<SamplePoint> {
        SamplePoint::new(self, values)
    }

    pub fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch(self.name().into(), other.name().into()))
        }
    }
}

fn split_relation(s: &str) -> Option<(&str, Relation, &str)> {
    for (tok, rel) in [
        (">=", Relation::Ge),
        ("<=", Relation::Le),
        ("!=", Relation::Ne),
        (">", Relation::Gt),
        ("<", Relation::Lt),
    ] {
        if let Some(i) = s.find(tok) {
            return Some((&s[..i], rel, &s[i + tok.len()..]));
        }
    }
    None
}
