//! Multivariate polynomial gcd over the rationals.
//!
//! Polynomials are flattened to dense exponent vectors, with every `ln`
//! atom and every distinct `exp` argument promoted to an independent
//! variable. The gcd is the recursive primitive pseudo-remainder sequence.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::{Monomial, Poly, Var, Q};
use super::Expr;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PureVar {
    Var(Var),
    Exp(Arc<Expr>),
}

/// Variable table shared by the polynomials being converted.
#[derive(Default)]
pub(crate) struct PureCtx {
    vars: Vec<PureVar>,
    index: BTreeMap<PureVar, usize>,
}

impl PureCtx {
    fn id(&mut self, v: PureVar) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.vars.len();
        self.vars.push(v.clone());
        self.index.insert(v, i);
        i
    }

    pub(crate) fn register(&mut self, p: &Poly) {
        for m in p.terms.keys() {
            for (v, _) in &m.factors {
                self.id(PureVar::Var(v.clone()));
            }
            if let Some(e) = &m.exp {
                self.id(PureVar::Exp(e.clone()));
            }
        }
    }

    pub(crate) fn to_pure(&self, p: &Poly) -> PPoly {
        let n = self.vars.len();
        let mut out = PPoly::zero(n);
        for (m, c) in &p.terms {
            let mut e = vec![0u32; n];
            for (v, k) in &m.factors {
                e[self.index[&PureVar::Var(v.clone())]] += k;
            }
            if let Some(x) = &m.exp {
                e[self.index[&PureVar::Exp(x.clone())]] += 1;
            }
            out.add_term(e, c.clone());
        }
        out
    }

    pub(crate) fn from_pure(&self, p: &PPoly) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &p.terms {
            let mut m = Monomial::one();
            for (i, k) in e.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                match &self.vars[i] {
                    PureVar::Var(v) => {
                        m = m.mul(&Monomial {
                            factors: vec![(v.clone(), *k)],
                            exp: None,
                        })
                    }
                    PureVar::Exp(a) => {
                        let arg = &**a * &Expr::int(*k as i64);
                        m = m.mul(&Monomial::exp_of(arg));
                    }
                }
            }
            out.add_term(m, c.clone());
        }
        out
    }
}

pub(crate) type Exps = Vec<u32>;

/// Polynomial with dense exponent vectors, ordered lexicographically
/// (variable 0 most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PPoly {
    n: usize,
    pub(crate) terms: BTreeMap<Exps, Q>,
}

impl PPoly {
    pub(crate) fn zero(n: usize) -> Self {
        PPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn constant(n: usize, c: Q) -> Self {
        let mut p = PPoly::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    pub(crate) fn add_term(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
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

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_const(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&k| k == 0)
    }

    fn lead(&self) -> (&Exps, &Q) {
        self.terms.last_key_value().expect("nonzero polynomial")
    }

    pub(crate) fn sub(&self, o: &PPoly) -> PPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }

    pub(crate) fn mul(&self, o: &PPoly) -> PPoly {
        let mut r = PPoly::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Exps = a.iter().zip(b).map(|(p, q)| p + q).collect();
                r.add_term(e, x * y);
            }
        }
        r
    }

    fn mul_term(&self, e: &[u32], c: &Q) -> PPoly {
        PPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, x)| (a.iter().zip(e).map(|(p, q)| p + q).collect(), x * c))
                .collect(),
        }
    }

    pub(crate) fn scale(&self, c: &Q) -> PPoly {
        PPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub(crate) fn monic(&self) -> PPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.lead().1.clone();
        self.scale(&(Q::one() / c))
    }

    fn deg(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    fn coeffs(&self, v: usize) -> BTreeMap<u32, PPoly> {
        let mut out: BTreeMap<u32, PPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[v];
            f[v] = 0;
            out.entry(k)
                .or_insert_with(|| PPoly::zero(self.n))
                .add_term(f, c.clone());
        }
        out
    }

    fn lc(&self, v: usize) -> PPoly {
        let d = self.deg(v);
        self.coeffs(v).remove(&d).unwrap()
    }

    fn uses(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    fn min_exps(&self) -> Exps {
        let mut m = vec![u32::MAX; self.n];
        for e in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        if self.terms.is_empty() {
            m.iter_mut().for_each(|a| *a = 0);
        }
        m
    }

    fn div_exps(&self, d: &[u32]) -> PPoly {
        PPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(d).map(|(p, q)| p - q).collect(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub(crate) fn div_exact(&self, d: &PPoly) -> Option<PPoly> {
        let (de, dc) = d.lead();
        let (de, dc) = (de.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = PPoly::zero(self.n);
        while !r.is_zero() {
            let (re, rc) = r.lead();
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let te: Exps = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let tc = rc / &dc;
            r = r.sub(&d.mul_term(&te, &tc));
            q.add_term(te, tc);
        }
        Some(q)
    }

    /// Normal form modulo the principal ideal generated by `d`.
    pub(crate) fn rem(&self, d: &PPoly) -> PPoly {
        let (de, dc) = d.lead();
        let (de, dc) = (de.clone(), dc.clone());
        let mut p = self.clone();
        let mut r = PPoly::zero(self.n);
        while !p.is_zero() {
            let (pe, pc) = p.lead();
            let (pe, pc) = (pe.clone(), pc.clone());
            if pe.iter().zip(&de).all(|(a, b)| a >= b) {
                let te: Exps = pe.iter().zip(&de).map(|(a, b)| a - b).collect();
                p = p.sub(&d.mul_term(&te, &(&pc / &dc)));
            } else {
                p.terms.remove(&pe);
                r.add_term(pe, pc);
            }
        }
        r
    }

    fn prem(&self, b: &PPoly, v: usize) -> PPoly {
        let db = b.deg(v);
        let lb = b.lc(v);
        let mut r = self.clone();
        while !r.is_zero() && r.deg(v) >= db {
            let dr = r.deg(v);
            let lr = r.lc(v);
            let mut shift = vec![0u32; self.n];
            shift[v] = dr - db;
            let t = lr.mul(b).mul_term(&shift, &Q::one());
            r = lb.mul(&r).sub(&t);
        }
        r
    }

    fn content(&self, v: usize) -> PPoly {
        let mut g: Option<PPoly> = None;
        for (_, c) in self.coeffs(v) {
            g = Some(match g {
                None => c.monic(),
                Some(g) => gcd_rec(&g, &c),
            });
            if g.as_ref().unwrap().is_const() {
                break;
            }
        }
        g.unwrap_or_else(|| PPoly::constant(self.n, Q::one()))
    }

    fn primitive(&self, v: usize) -> PPoly {
        let c = self.content(v);
        self.div_exact(&c).expect("content divides").monic()
    }
}

fn lowest_var(a: &PPoly, b: &PPoly) -> Option<usize> {
    (0..a.n).find(|&v| a.uses(v) || b.uses(v))
}

fn gcd_rec(a: &PPoly, b: &PPoly) -> PPoly {
    let n = a.n;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_const() || b.is_const() {
        return PPoly::constant(n, Q::one());
    }
    let ma = a.min_exps();
    let mb = b.min_exps();
    let mg: Exps = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let a1 = a.div_exps(&ma);
    let b1 = b.div_exps(&mb);
    let g = gcd_primitive(&a1, &b1);
    g.mul_term(&mg, &Q::one()).monic()
}

fn gcd_primitive(a: &PPoly, b: &PPoly) -> PPoly {
    let n = a.n;
    if a.is_const() || b.is_const() {
        return PPoly::constant(n, Q::one());
    }
    let Some(v) = lowest_var(a, b) else {
        return PPoly::constant(n, Q::one());
    };
    if !a.uses(v) {
        return gcd_rec(a, &b.content(v));
    }
    if !b.uses(v) {
        return gcd_rec(&a.content(v), b);
    }
    let ca = a.content(v);
    let cb = b.content(v);
    let c = gcd_rec(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    if p.deg(v) < q.deg(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.deg(v) == 0 {
            return c;
        }
        p = q;
        q = r.primitive(v);
    }
    c.mul(&q.primitive(v)).monic()
}

// Modular images -------------------------------------------------------------

const P: u64 = (1 << 61) - 1;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> u64 {
    powm(a, P - 2)
}

fn reduce(q: &Q) -> Option<u64> {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let p = BigInt::from(P);
    let n = (q.numer() % &p + &p) % &p;
    let d = (q.denom() % &p + &p) % &p;
    let d = d.to_u64()?;
    (d != 0).then(|| mulm(n.to_u64().unwrap(), invm(d)))
}

/// Univariate image in variable `v` with the other variables set to `pt`.
/// Coefficients indexed by degree.
fn image(a: &PPoly, v: usize, pt: &[u64]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; a.deg(v) as usize + 1];
    for (e, c) in &a.terms {
        let mut t = reduce(c)?;
        for (i, k) in e.iter().enumerate() {
            if i != v && *k > 0 {
                t = mulm(t, powm(pt[i], *k as u64));
            }
        }
        let slot = &mut out[e[v] as usize];
        *slot = (*slot + t) % P;
    }
    Some(out)
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Degree of the univariate gcd modulo `P`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let lb = invm(*b.last().unwrap());
        while a.len() >= b.len() {
            let f = mulm(*a.last().unwrap(), lb);
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                let x = &mut a[i + shift];
                *x = (*x + P - mulm(f, *c)) % P;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Proves `gcd(a, b) = 1` through univariate images modulo a prime: an
/// image of the gcd whose leading coefficient survives has the true degree,
/// and image gcds can only be larger. `false` means "not proven".
fn provably_coprime(a: &PPoly, b: &PPoly) -> bool {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9cd);
    for v in 0..a.n {
        if !(a.uses(v) && b.uses(v)) {
            continue;
        }
        let mut ok = false;
        for _ in 0..3 {
            let pt: Vec<u64> = (0..a.n).map(|_| rng.gen_range(1..P)).collect();
            let (Some(ia), Some(ib)) = (image(a, v, &pt), image(b, v, &pt)) else {
                return false;
            };
            if ia.last() == Some(&0) || ib.last() == Some(&0) {
                continue;
            }
            if gcd_degree_mod(ia, ib) == 0 {
                ok = true;
            }
            break;
        }
        if !ok {
            return false;
        }
    }
    true
}

/// Cancels the gcd of `num` and `den`; returns `None` when it is trivial.
pub(crate) fn cancel(num: &Poly, den: &Poly) -> Option<(Poly, Poly)> {
    let mut ctx = PureCtx::default();
    ctx.register(num);
    ctx.register(den);
    let a = ctx.to_pure(num);
    let b = ctx.to_pure(den);
    if provably_coprime(&a, &b) {
        return None;
    }
    let g = gcd_rec(&a, &b);
    if g.is_const() {
        return None;
    }
    let a = a.div_exact(&g).expect("gcd divides numerator");
    let b = b.div_exact(&g).expect("gcd divides denominator");
    Some((ctx.from_pure(&a), ctx.from_pure(&b)))
}

/// Monic gcd of two polynomials (atoms treated as independent variables).
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut ctx = PureCtx::default();
    ctx.register(a);
    ctx.register(b);
    let g = gcd_rec(&ctx.to_pure(a), &ctx.to_pure(b));
    ctx.from_pure(&g)
}

/// Normal forms of each `a` modulo the principal ideal `(d)`, computed in one
/// shared variable order so the results can be combined linearly.
pub fn poly_rem_many(ps: &[Poly], d: &Poly) -> Vec<Poly> {
    let mut ctx = PureCtx::default();
    ctx.register(d);
    for a in ps {
        ctx.register(a);
    }
    let dp = ctx.to_pure(d);
    ps.iter().map(|a| ctx.from_pure(&ctx.to_pure(a).rem(&dp))).collect()
}

/// Exact polynomial quotient `a / b`, if `b` divides `a`.
pub fn poly_div_exact(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut ctx = PureCtx::default();
    ctx.register(a);
    ctx.register(b);
    let q = ctx.to_pure(a).div_exact(&ctx.to_pure(b))?;
    Some(ctx.from_pure(&q))
}
