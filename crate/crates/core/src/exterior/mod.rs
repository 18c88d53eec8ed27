//! Differential forms and multivectors on a single chart.
//!
//! Components live on strictly increasing index tuples; zero components are
//! never stored.

mod field;
pub mod linalg;
mod map;

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

pub use field::VecField;
pub use linalg::{kernel_of_contraction, ContractionKernel};
pub use map::MapExpr;

use crate::error::{Error, Result};
use crate::expr::{parse_graded, sort_with_sign, Chart, Expr, GradedKind, SamplePoint, Q};
use crate::par::Exec;
use crate::verdict::Status;

/// Marker for covariant (form) or contravariant (multivector) index type.
pub trait Variance: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    const PREFIX: &'static str;
    const KIND: GradedKind;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lower;
#[derive(Clone, Debug, PartialEq)]
pub struct Upper;

impl Variance for Lower {
    const PREFIX: &'static str = "d";
    const KIND: GradedKind = GradedKind::Form;
}

impl Variance for Upper {
    const PREFIX: &'static str = "@";
    const KIND: GradedKind = GradedKind::Vector;
}

/// Homogeneous element of the exterior algebra of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Alternating<V: Variance> {
    chart: Chart,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
    _v: PhantomData<V>,
}

pub type KForm = Alternating<Lower>;
pub type KVector = Alternating<Upper>;

/// Sorted concatenation of two index tuples with its sign, `None` on repeats.
pub(crate) fn merge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
    sort_with_sign(&mut idx).map(|s| (idx, s))
}

fn signed(e: Expr, sign: i32) -> Expr {
    if sign < 0 {
        -e
    } else {
        e
    }
}

impl<V: Variance> Alternating<V> {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        Alternating {
            chart: chart.clone(),
            degree,
            comps: BTreeMap::new(),
            _v: PhantomData,
        }
    }

    /// Builds from components on arbitrary (not necessarily sorted) tuples;
    /// repeated entries accumulate.
    pub fn from_components<I>(chart: &Chart, degree: usize, comps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Expr)>,
    {
        let mut out = Self::zero(chart, degree);
        for (mut idx, e) in comps {
            if idx.len() != degree {
                return Err(Error::Degree(format!(
                    "component of length {} in a degree {degree} element",
                    idx.len()
                )));
            }
            if let Some(&i) = idx.iter().find(|&&i| i >= chart.dim()) {
                return Err(Error::Dimension(format!(
                    "index {i} out of range for chart `{}`",
                    chart.name()
                )));
            }
            if let Some(s) = sort_with_sign(&mut idx) {
                out.add_component(idx, signed(e, s));
            }
        }
        Ok(out)
    }

    /// The scalar `f` as a degree-0 element.
    pub fn scalar(chart: &Chart, f: Expr) -> Self {
        let mut out = Self::zero(chart, 0);
        out.add_component(Vec::new(), f);
        out
    }

    /// Basis element for a tuple of coordinate indices (order matters).
    pub fn basis(chart: &Chart, idx: &[usize]) -> Result<Self> {
        Self::from_components(chart, idx.len(), [(idx.to_vec(), Expr::one())])
    }

    /// Parses a literal such as `x1*dx2^dx3` or `@x3 + @x4`. A scalar literal
    /// is accepted as a degree-0 element, or as zero of any degree when it is 0.
    pub fn parse(src: &str, chart: &Chart, degree: Option<usize>) -> Result<Self> {
        let g = parse_graded(src, chart)?;
        let kind_ok = g.kind == V::KIND || g.kind == GradedKind::Scalar;
        if !kind_ok {
            return Err(Error::Degree(format!(
                "expected a {} literal",
                if V::KIND == GradedKind::Form { "form" } else { "multivector" }
            )));
        }
        let deg = match degree {
            Some(d) if g.is_zero() => d,
            Some(d) if d != g.degree => {
                return Err(Error::Degree(format!("expected degree {d}, got {}", g.degree)))
            }
            _ => g.degree,
        };
        Self::from_components(chart, deg, g.components)
    }

    fn add_component(&mut self, idx: Vec<usize>, e: Expr) {
        if e.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.comps.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(e);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &e;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.comps.iter()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Syntactic zero of the canonical forms (sound).
    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Component on an arbitrary tuple, with antisymmetry applied.
    pub fn get(&self, idx: &[usize]) -> Expr {
        if idx.len() != self.degree {
            return Expr::zero();
        }
        let mut k = idx.to_vec();
        match sort_with_sign(&mut k) {
            Some(s) => signed(self.comps.get(&k).cloned().unwrap_or_default(), s),
            None => Expr::zero(),
        }
    }

    /// The degree-0 value (zero for higher degrees).
    pub fn as_scalar(&self) -> Expr {
        if self.degree == 0 {
            self.get(&[])
        } else {
            Expr::zero()
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        self.chart.ensure_same(&o.chart)?;
        if self.degree != o.degree && !self.is_zero() && !o.is_zero() {
            return Err(Error::Degree(format!(
                "cannot add degrees {} and {}",
                self.degree, o.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        if self.is_zero() {
            return Ok(o.clone());
        }
        let mut out = self.clone();
        for (k, v) in &o.comps {
            out.add_component(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    pub fn scale(&self, f: &Expr) -> Self {
        self.map(|e| e * f)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        Alternating {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|(k, v)| (k.clone(), f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            _v: PhantomData,
        }
    }

    /// Wedge product; degree overflow yields the zero element.
    pub fn wedge(&self, o: &Self) -> Result<Self> {
        self.chart.ensure_same(&o.chart)?;
        let mut out = Self::zero(&self.chart, self.degree + o.degree);
        if out.degree > self.chart.dim() {
            return Ok(out);
        }
        for (a, x) in &self.comps {
            for (b, y) in &o.comps {
                if let Some((idx, s)) = merge(a, b) {
                    out.add_component(idx, signed(x * y, s));
                }
            }
        }
        Ok(out)
    }

    /// Zero test of every component; the first failing one becomes the
    /// witness, labelled `label[coords]`.
    pub fn zero_status(&self, label: &str) -> Status {
        self.zero_status_with(label, Exec::default())
    }

    pub fn zero_status_with(&self, label: &str, exec: Exec) -> Status {
        let comps: Vec<_> = self.comps.iter().collect();
        let statuses = exec.map(&comps, |(k, v)| {
            Status::from_zero_test(
                self.chart.is_zero_with(v, Exec::Sequential),
                format!("{label}[{}]", self.index_names(k)),
            )
        });
        Status::all(statuses)
    }

    pub fn index_names(&self, idx: &[usize]) -> String {
        idx.iter()
            .map(|&i| self.chart.coords()[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Exact values of the components at a point.
    pub fn eval_at(&self, p: &SamplePoint) -> Result<BTreeMap<Vec<usize>, Q>> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.comps {
            let x = v.eval_at(p)?;
            let q = match x {
                crate::expr::Value::Exact(q) => q,
                crate::expr::Value::Float(_) => return Err(Error::NotRational),
            };
            if q != Q::default() {
                out.insert(k.clone(), q);
            }
        }
        Ok(out)
    }

    /// Partial derivative of every component.
    pub fn diff_components(&self, k: usize) -> Self {
        self.map(|e| e.diff(k))
    }

    fn basis_string(&self, idx: &[usize]) -> String {
        idx.iter()
            .map(|&i| format!("{}{}", V::PREFIX, self.chart.coords()[i]))
            .collect::<Vec<_>>()
            .join("^")
    }
}

impl<V: Variance> fmt::Display for Alternating<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, v) in &self.comps {
            let (neg, body) = term_string(v, &self.chart, &self.basis_string(k));
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            f.write_str(&body)?;
            first = false;
        }
        Ok(())
    }
}

/// Renders `coef*basis`, pulling a leading minus sign out when that keeps the
/// text re-parseable.
fn term_string(c: &Expr, chart: &Chart, basis: &str) -> (bool, String) {
    if basis.is_empty() {
        let s = c.to_string_in(chart);
        return (false, s);
    }
    if c.is_one() {
        return (false, basis.to_string());
    }
    let neg_c = -c;
    if neg_c.is_one() {
        return (true, basis.to_string());
    }
    let lead_negative = c.numerator().len() == 1 && c.numerator().leading_sign_negative();
    let (neg, coef) = if lead_negative { (true, neg_c) } else { (false, c.clone()) };
    let s = coef.to_string_in(chart);
    let body = if coef.is_compound_sum() {
        format!("({s})*{basis}")
    } else {
        format!("{s}*{basis}")
    };
    (neg, body)
}

impl KForm {
    /// Coordinate 1-form `dx^i`.
    pub fn dx(chart: &Chart, i: usize) -> KForm {
        KForm::basis(chart, &[i]).expect("valid index")
    }

    /// Exterior derivative.
    pub fn ext_d(&self) -> KForm {
        let mut out = KForm::zero(&self.chart, self.degree + 1);
        if out.degree > self.chart.dim() {
            return out;
        }
        for (idx, f) in &self.comps {
            for k in 0..self.chart.dim() {
                if !f.depends_on(k as u32) {
                    continue;
                }
                if let Some((j, s)) = merge(&[k], idx) {
                    out.add_component(j, signed(f.diff(k), s));
                }
            }
        }
        out
    }

    /// `d f` for a scalar.
    pub fn differential(chart: &Chart, f: &Expr) -> KForm {
        KForm::scalar(chart, f.clone()).ext_d()
    }

    /// Contraction with a vector field (antiderivation of degree −1).
    pub fn interior(&self, x: &VecField) -> Result<KForm> {
        self.chart.ensure_same(x.chart())?;
        let mut out = KForm::zero(&self.chart, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return Ok(out);
        }
        for (idx, f) in &self.comps {
            for (r, &i) in idx.iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(r);
                let t = &xi * f;
                out.add_component(rest, if r % 2 == 1 { -t } else { t });
            }
        }
        Ok(out)
    }

    /// Contraction with a coordinate basis vector.
    pub fn interior_basis(&self, j: usize) -> KForm {
        let mut out = KForm::zero(&self.chart, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (idx, f) in &self.comps {
            if let Some(r) = idx.iter().position(|&i| i == j) {
                let mut rest = idx.clone();
                rest.remove(r);
                out.add_component(rest, signed(f.clone(), if r % 2 == 1 { -1 } else { 1 }));
            }
        }
        out
    }

    /// Contraction with a multivector: for `∂_{i1}∧…∧∂_{ik}` the vector
    /// `∂_{i1}` is contracted first, i.e. `i(X∧Y) = i(Y)∘i(X)`.
    pub fn interior_multi(&self, v: &KVector) -> Result<KForm> {
        self.chart.ensure_same(v.chart())?;
        if v.degree() > self.degree {
            return Err(Error::Degree(format!(
                "cannot contract a degree {} multivector with a {}-form",
                v.degree(),
                self.degree
            )));
        }
        let mut out = KForm::zero(&self.chart, self.degree - v.degree());
        for (jdx, g) in v.components() {
            let mut t = self.clone();
            for &j in jdx {
                t = t.interior_basis(j);
            }
            out = out.add(&t.scale(g))?;
        }
        Ok(out)
    }

    /// Lie derivative by Cartan's formula `d i(X) + i(X) d`.
    pub fn lie_derivative(&self, x: &VecField) -> Result<KForm> {
        self.interior(x)?.ext_d().add(&self.ext_d().interior(x)?)
    }

    /// Value on vector fields: `a(X_1, …, X_k)` = `i(X_k)…i(X_1) a`.
    pub fn apply(&self, xs: &[&VecField]) -> Result<Expr> {
        if xs.len() != self.degree {
            return Err(Error::Degree(format!(
                "{}-form applied to {} vectors",
                self.degree,
                xs.len()
            )));
        }
        let mut t = self.clone();
        for x in xs {
            t = t.interior(x)?;
        }
        Ok(t.as_scalar())
    }

    /// Square component matrix of a 2-form: `M[i][j] = a(∂_i, ∂_j)`.
    pub fn matrix(&self) -> Result<Vec<Vec<Expr>>> {
        if self.degree != 2 {
            return Err(Error::Degree(format!("matrix of a {}-form", self.degree)));
        }
        let m = self.chart.dim();
        let mut out = vec![vec![Expr::zero(); m]; m];
        for (idx, f) in &self.comps {
            out[idx[0]][idx[1]] = f.clone();
            out[idx[1]][idx[0]] = -f;
        }
        Ok(out)
    }

    /// 2-form with the given antisymmetric matrix (upper triangle is read).
    pub fn from_matrix(chart: &Chart, m: &[Vec<Expr>]) -> KForm {
        let mut out = KForm::zero(chart, 2);
        for (i, row) in m.iter().enumerate() {
            for (j, e) in row.iter().enumerate().skip(i + 1) {
                out.add_component(vec![i, j], e.clone());
            }
        }
        out
    }

    /// `a^k`, wedge power.
    pub fn wedge_pow(&self, k: usize) -> Result<KForm> {
        let mut acc = KForm::scalar(&self.chart, Expr::one());
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }
}

impl KVector {
    pub fn from_field(x: &VecField) -> KVector {
        let comps = x
            .components()
            .iter()
            .enumerate()
            .map(|(i, e)| (vec![i], e.clone()));
        KVector::from_components(x.chart(), 1, comps).expect("valid field")
    }
}
