//! Sparse multivariate polynomials over the rationals in coordinate symbols
//! and transcendental atoms.
//!
//! A monomial carries at most one `exp` factor: products of exponentials are
//! merged into a single atom of the summed argument, and `exp(0)` is dropped.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Expr;

pub type Q = BigRational;

/// A polynomial variable: a chart symbol (coordinate or parameter) or a
/// logarithm atom `ln(a)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Sym(u32),
    Ln(Arc<Expr>),
}

impl Var {
    pub fn depends_on(&self, k: u32) -> bool {
        match self {
            Var::Sym(j) => *j == k,
            Var::Ln(a) => a.depends_on(k),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub(crate) factors: Vec<(Var, u32)>,
    pub(crate) exp: Option<Arc<Expr>>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial {
            factors: vec![(v, 1)],
            exp: None,
        }
    }

    pub fn exp_of(arg: Expr) -> Self {
        Monomial {
            factors: Vec::new(),
            exp: if arg.is_zero() { None } else { Some(Arc::new(arg)) },
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.exp.is_none()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn exp_arg(&self) -> Option<&Expr> {
        self.exp.as_deref()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    factors.push((a.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    factors.push((b.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    factors.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                let s = &**a + &**b;
                if s.is_zero() {
                    None
                } else {
                    Some(Arc::new(s))
                }
            }
        };
        Monomial { factors, exp }
    }

    /// Greatest common monomial divisor of the non-exponential parts.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::new();
        for (v, e) in &self.factors {
            if let Some((_, f)) = other.factors.iter().find(|(w, _)| w == v) {
                factors.push((v.clone(), (*e).min(*f)));
            }
        }
        Monomial { factors, exp: None }
    }

    /// Divides by a monomial without exponential part that is known to divide `self`.
    pub fn div_factors(&self, d: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len());
        for (v, e) in &self.factors {
            let f = d
                .factors
                .iter()
                .find(|(w, _)| w == v)
                .map(|(_, f)| *f)
                .unwrap_or(0);
            debug_assert!(f <= *e);
            if *e > f {
                factors.push((v.clone(), e - f));
            }
        }
        Monomial {
            factors,
            exp: self.exp.clone(),
        }
    }

    fn with_factor_lowered(&self, idx: usize) -> Monomial {
        let mut m = self.clone();
        if m.factors[idx].1 == 1 {
            m.factors.remove(idx);
        } else {
            m.factors[idx].1 -= 1;
        }
        m
    }

    pub fn depends_on(&self, k: u32) -> bool {
        self.factors.iter().any(|(v, _)| v.depends_on(k))
            || self.exp.as_ref().is_some_and(|p| p.depends_on(k))
    }

    pub fn has_atoms(&self) -> bool {
        self.exp.is_some() || self.factors.iter().any(|(v, _)| matches!(v, Var::Ln(_)))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_monomial(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let mut r = Poly::zero();
        for (n, c) in &self.terms {
            r.add_term(n.mul(m), c.clone());
        }
        r
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut r = Poly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                r.add_term(m.mul(n), a * b);
            }
        }
        r
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The greatest monomial (without exponential part) dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = Monomial {
            factors: first.factors.clone(),
            exp: None,
        };
        for m in it {
            if g.factors.is_empty() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, d: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.div_factors(d), c.clone()))
                .collect(),
        }
    }

    /// If every term carries the same exponential atom, returns its argument.
    pub fn common_exp(&self) -> Option<Arc<Expr>> {
        let mut it = self.terms.keys();
        let first = it.next()?.exp.clone()?;
        it.all(|m| m.exp.as_ref() == Some(&first)).then_some(first)
    }

    pub fn leading_coeff(&self) -> Option<&Q> {
        self.terms.last_key_value().map(|(_, c)| c)
    }

    pub fn depends_on(&self, k: u32) -> bool {
        self.terms.keys().any(|m| m.depends_on(k))
    }

    pub fn has_atoms(&self) -> bool {
        self.terms.keys().any(Monomial::has_atoms)
    }

    /// Partial derivative with respect to symbol `k`; `ln` atoms make the
    /// result rational, hence the `Expr` return type.
    pub fn diff(&self, k: u32) -> Expr {
        let mut plain = Poly::zero();
        let mut ln_groups: BTreeMap<Arc<Expr>, Poly> = BTreeMap::new();
        let mut exp_groups: BTreeMap<Arc<Expr>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (i, (v, e)) in m.factors.iter().enumerate() {
                match v {
                    Var::Sym(j) if *j == k => {
                        plain.add_term(m.with_factor_lowered(i), c * Q::from_integer((*e).into()));
                    }
                    Var::Ln(a) if a.depends_on(k) => {
                        ln_groups
                            .entry(a.clone())
                            .or_default()
                            .add_term(m.with_factor_lowered(i), c * Q::from_integer((*e).into()));
                    }
                    _ => {}
                }
            }
            if let Some(p) = &m.exp {
                if p.depends_on(k) {
                    exp_groups
                        .entry(p.clone())
                        .or_default()
                        .add_term(m.clone(), c.clone());
                }
            }
        }
        let mut out = Expr::from_poly(plain);
        for (a, coeff) in ln_groups {
            let da = a.diff(k as usize);
            let q = da
                .checked_div(&a)
                .expect("ln atom argument is a nonzero expression");
            out = &out + &(&Expr::from_poly(coeff) * &q);
        }
        for (p, coeff) in exp_groups {
            out = &out + &(&Expr::from_poly(coeff) * &p.diff(k as usize));
        }
        out
    }

    pub fn leading_sign_negative(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_negative())
    }
}
