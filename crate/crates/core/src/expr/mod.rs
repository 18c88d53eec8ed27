//! Symbolic scalar functions on a chart.
//!
//! An [`Expr`] is kept in canonical form: a reduced fraction of polynomials
//! over the rationals whose variables are chart symbols and the transcendental
//! atoms `exp(a)` and `ln(a)`. Canonical forms of equal functions coincide
//! (modulo relations between distinct atoms), so syntactic zero is a sound
//! identity certificate.

mod chart;
mod display;
pub(crate) mod gcd;
mod parse;
pub(crate) mod poly;
mod sample;

use std::collections::BTreeSet;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use chart::{Chart, Constraint};
pub use display::ExprDisplay;
pub use parse::{parse_graded, parse_scalar, Graded, GradedKind};
pub(crate) use parse::sort_with_sign;
pub use poly::{Monomial, Poly, Var, Q};
pub use sample::{SamplePoint, Value, ZeroTest, SAMPLE_ATTEMPTS, WITNESS_THRESHOLD};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

impl Expr {
    pub fn zero() -> Self {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Expr::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Expr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(Q::from_integer(n.into()))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Expr::constant(q(n, d))
    }

    /// The chart symbol with index `k` (coordinate or parameter).
    pub fn var(k: usize) -> Self {
        Expr::from_poly(Poly::from_monomial(
            Monomial::var(Var::Sym(k as u32)),
            Q::one(),
        ))
    }

    pub fn from_poly(p: Poly) -> Self {
        Expr {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn has_atoms(&self) -> bool {
        self.num.has_atoms() || self.den.has_atoms()
    }

    pub fn depends_on(&self, k: u32) -> bool {
        self.num.depends_on(k) || self.den.depends_on(k)
    }

    /// Indices of chart symbols occurring anywhere, including inside atoms.
    pub fn symbols(&self) -> BTreeSet<usize> {
        fn walk(p: &Poly, out: &mut BTreeSet<usize>) {
            for m in p.terms.keys() {
                for (v, _) in &m.factors {
                    match v {
                        Var::Sym(k) => {
                            out.insert(*k as usize);
                        }
                        Var::Ln(a) => {
                            walk(&a.num, out);
                            walk(&a.den, out);
                        }
                    }
                }
                if let Some(a) = &m.exp {
                    walk(&a.num, out);
                    walk(&a.den, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(&self.num, &mut out);
        walk(&self.den, &mut out);
        out
    }

    /// Arguments of every `ln` atom (recursively).
    pub fn ln_arguments(&self) -> Vec<Expr> {
        fn walk(p: &Poly, out: &mut Vec<Expr>) {
            for m in p.terms.keys() {
                for (v, _) in &m.factors {
                    if let Var::Ln(a) = v {
                        if !out.contains(a) {
                            out.push((**a).clone());
                        }
                        walk(&a.num, out);
                        walk(&a.den, out);
                    }
                }
                if let Some(a) = &m.exp {
                    walk(&a.num, out);
                    walk(&a.den, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.num, &mut out);
        walk(&self.den, &mut out);
        out
    }

    fn normalize(mut num: Poly, mut den: Poly) -> Expr {
        if num.is_zero() {
            return Expr::zero();
        }
        strip_exp_unit(&mut num, &mut den);
        if den.as_constant().is_none() {
            let g = num.monomial_content().gcd(&den.monomial_content());
            if !g.is_one() {
                num = num.div_monomial(&g);
                den = den.div_monomial(&g);
            }
            if num.len() > 1 && den.len() > 1 {
                if let Some((n, d)) = gcd::cancel(&num, &den) {
                    num = n;
                    den = d;
                    strip_exp_unit(&mut num, &mut den);
                }
            }
        }
        Self::rescale(num, den)
    }

    /// Makes the denominator's leading coefficient one.
    fn rescale(mut num: Poly, mut den: Poly) -> Expr {
        let lc = den.leading_coeff().cloned().expect("nonzero denominator");
        if !lc.is_one() {
            let s = Q::one() / lc;
            num = num.scale(&s);
            den = den.scale(&s);
        }
        Expr { num, den }
    }

    pub fn checked_div(&self, other: &Expr) -> Result<Expr> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&(Q::one() / c)));
        }
        Ok(Self::normalize(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Expr> {
        Expr::one().checked_div(self)
    }

    pub fn scale(&self, c: &Q) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn powi(&self, k: i32) -> Result<Expr> {
        if k < 0 {
            return self.inv()?.powi(-k);
        }
        let k = k as u32;
        // Powers of a reduced fraction stay reduced.
        Ok(Self::rescale(self.num.pow(k), self.den.pow(k)))
    }

    pub fn exp(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        Expr::from_poly(Poly::from_monomial(Monomial::exp_of(self.clone()), Q::one()))
    }

    pub fn ln(&self) -> Result<Expr> {
        if let Some(c) = self.as_constant() {
            if !c.is_positive() {
                return Err(Error::LnNonPositive);
            }
            if c.is_one() {
                return Ok(Expr::zero());
            }
        }
        Ok(Expr::from_poly(Poly::from_monomial(
            Monomial::var(Var::Ln(Arc::new(self.clone()))),
            Q::one(),
        )))
    }

    /// Exact partial derivative with respect to chart symbol `k`.
    pub fn diff(&self, k: usize) -> Expr {
        let k = k as u32;
        if !self.depends_on(k) {
            return Expr::zero();
        }
        if self.den.is_one() {
            return self.num.diff(k);
        }
        let n = Expr::from_poly(self.num.clone());
        let d = Expr::from_poly(self.den.clone());
        let top = &(&self.num.diff(k) * &d) - &(&n * &self.den.diff(k));
        top.checked_div(&(&d * &d))
            .expect("denominator of a canonical form is nonzero")
    }

    /// Substitutes `images[k]` for chart symbol `k`.
    pub fn substitute(&self, images: &[Expr]) -> Result<Expr> {
        let n = subst_poly(&self.num, images)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = subst_poly(&self.den, images)?;
        n.checked_div(&d)
    }

    /// Evaluates at a point given by exact values for every chart symbol.
    /// Exact when no atoms occur, floating otherwise.
    pub fn eval(&self, point: &[Q]) -> Result<Value> {
        if let (Some(n), Some(d)) = (eval_poly_exact(&self.num, point), eval_poly_exact(&self.den, point)) {
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Value::Exact(n / d));
        }
        let fp: Vec<f64> = point.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        self.eval_f64(&fp).map(Value::Float)
    }

    pub fn eval_exact(&self, point: &[Q]) -> Result<Q> {
        match self.eval(point)? {
            Value::Exact(q) => Ok(q),
            Value::Float(_) => Err(Error::NotRational),
        }
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        let n = eval_poly_f64(&self.num, point)?;
        let d = eval_poly_f64(&self.den, point)?;
        if d == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(n / d)
    }
}

fn strip_exp_unit(num: &mut Poly, den: &mut Poly) {
    if let Some(e) = den.common_exp() {
        let unit = Monomial::exp_of(-&*e);
        *num = num.mul_monomial(&unit);
        *den = den.mul_monomial(&unit);
    }
}

fn subst_poly(p: &Poly, images: &[Expr]) -> Result<Expr> {
    use std::collections::BTreeMap;
    let mut cache: BTreeMap<&Var, Expr> = BTreeMap::new();
    let mut acc = Expr::zero();
    for (m, c) in p.terms() {
        let mut t = Expr::constant(c.clone());
        for (v, e) in m.factors() {
            if !cache.contains_key(v) {
                let img = match v {
                    Var::Sym(k) => images
                        .get(*k as usize)
                        .cloned()
                        .unwrap_or_else(|| Expr::var(*k as usize)),
                    Var::Ln(a) => a.substitute(images)?.ln()?,
                };
                cache.insert(v, img);
            }
            t = &t * &cache[v].powi(*e as i32)?;
        }
        if let Some(a) = m.exp_arg() {
            t = &t * &a.substitute(images)?.exp();
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Exact value, or `None` when an atom is irrational there.
/// Only `exp(0) = 1` and `ln(1) = 0` are treated as rational.
fn eval_poly_exact(p: &Poly, point: &[Q]) -> Option<Q> {
    let mut acc = Q::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, e) in m.factors() {
            match v {
                Var::Sym(k) => t *= point[*k as usize].pow(*e as i32),
                Var::Ln(a) => {
                    if !a.eval(point).ok()?.is_exact_one() {
                        return None;
                    }
                    t = Q::zero();
                }
            }
        }
        if let Some(a) = m.exp_arg() {
            if !a.eval(point).ok()?.is_exact_zero() {
                return None;
            }
        }
        acc += t;
    }
    Some(acc)
}

fn eval_poly_f64(p: &Poly, point: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64().unwrap_or(f64::NAN);
        for (v, e) in m.factors() {
            let base = match v {
                Var::Sym(k) => point[*k as usize],
                Var::Ln(a) => {
                    let x = a.eval_f64(point)?;
                    if x <= 0.0 {
                        return Err(Error::LnNonPositive);
                    }
                    x.ln()
                }
            };
            t *= base.powi(*e as i32);
        }
        if let Some(a) = m.exp_arg() {
            t *= a.eval_f64(point)?.exp();
        }
        acc += t;
    }
    Ok(acc)
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Expr::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Expr::normalize(self.num.add(&o.num), self.den.clone());
        }
        Expr::normalize(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, o: &Expr) -> Expr {
        self + &(-o)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        if self.is_zero() || o.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if self.den.is_one() && o.den.is_one() {
            return Expr::from_poly(self.num.mul(&o.num));
        }
        Expr::normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                (&self).$m(&o)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                (&self).$m(o)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Q> for Expr {
    fn from(c: Q) -> Self {
        Expr::constant(c)
    }
}
