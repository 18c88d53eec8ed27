//! Heuristic potentials for closed 1-forms: logarithmic parts `c·dp/p`
//! read off the denominators, plus a polynomial remainder integrated along
//! rays from the origin.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exterior::linalg::rref_q;
use crate::exterior::KForm;
use crate::expr::gcd::{poly_div_exact, poly_gcd, poly_rem_many};
use crate::expr::{Expr, Monomial, Poly, Var, Q};

fn is_constant(p: &Poly) -> bool {
    p.as_constant().is_some()
}

fn monic(p: &Poly) -> Poly {
    match p.leading_coeff() {
        Some(c) if !c.is_one() => p.scale(&(Q::one() / c)),
        _ => p.clone(),
    }
}

/// Pairwise-coprime candidate factors of the denominators.
fn candidate_factors(dens: &[&Poly]) -> Option<Vec<Poly>> {
    let mut out: Vec<Poly> = Vec::new();
    let mut rest: Vec<Poly> = Vec::new();
    for d in dens {
        let m = d.monomial_content();
        for (v, _) in m.factors() {
            match v {
                Var::Sym(_) => {
                    let p = Poly::from_monomial(Monomial::var(v.clone()), Q::one());
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
                Var::Ln(_) => return None,
            }
        }
        let r = d.div_monomial(&m);
        if !is_constant(&r) {
            rest.push(monic(&r));
        }
    }
    // refine until pairwise coprime
    loop {
        rest.sort();
        rest.dedup();
        let mut split = None;
        'outer: for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                let g = poly_gcd(&rest[i], &rest[j]);
                if !is_constant(&g) {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let a = poly_div_exact(&rest[i], &g)?;
        let b = poly_div_exact(&rest[j], &g)?;
        rest.remove(j);
        rest.remove(i);
        for p in [g, a, b] {
            if !is_constant(&p) {
                rest.push(monic(&p));
            }
        }
    }
    out.extend(rest);
    Some(out)
}

fn lcm(a: &Poly, b: &Poly) -> Option<Poly> {
    let g = poly_gcd(a, b);
    Some(a.mul(&poly_div_exact(b, &g)?))
}

/// Antiderivative of a closed 1-form with polynomial components:
/// `t = Σ_k x^k ∫₀¹ σ_k(s·x) ds`, parameters held fixed.
fn integrate_polynomial(sigma: &KForm) -> Option<Expr> {
    let dim = sigma.chart().dim() as u32;
    let mut t = Poly::zero();
    for (idx, e) in sigma.components() {
        if !e.is_polynomial() || e.has_atoms() {
            return None;
        }
        let k = idx[0] as u32;
        for (m, c) in e.numerator().terms() {
            let deg: u32 = m
                .factors()
                .iter()
                .filter(|(v, _)| matches!(v, Var::Sym(j) if *j < dim))
                .map(|(_, p)| *p)
                .sum();
            let mono = m.mul(&Monomial::var(Var::Sym(k)));
            t.add_term(mono, c / Q::from_integer((deg + 1).into()));
        }
    }
    Some(Expr::from_poly(t))
}

/// A function `t` with `dt = σ`, if the heuristic finds one.
pub fn find_potential(sigma: &KForm) -> Option<Expr> {
    if sigma.degree() != 1 {
        return None;
    }
    let chart = sigma.chart();
    if sigma.is_zero() {
        return Some(Expr::zero());
    }
    if sigma.components().any(|(_, e)| e.has_atoms()) {
        return None;
    }
    let dens: Vec<&Poly> = sigma
        .components()
        .map(|(_, e)| e.denominator())
        .filter(|d| !is_constant(d))
        .collect();
    let factors = candidate_factors(&dens)?;

    let mut log_part = KForm::zero(chart, 1);
    let mut coeffs: Vec<Q> = Vec::new();
    if !factors.is_empty() {
        let mut l = Poly::one();
        for p in factors.iter().chain(dens.iter().copied()) {
            l = lcm(&l, p)?;
        }
        let quotients: Vec<Poly> = factors
            .iter()
            .map(|p| poly_div_exact(&l, p))
            .collect::<Option<_>>()?;
        // per coordinate: rhs term then one column per factor
        let mut polys = Vec::new();
        let m = chart.dim();
        for k in 0..m {
            let e = sigma.get(&[k]);
            let lk = poly_div_exact(&l, e.denominator())?;
            polys.push(e.numerator().mul(&lk));
            for (p, q) in factors.iter().zip(&quotients) {
                let dp = Expr::from_poly(p.clone()).diff(k);
                polys.push(dp.numerator().mul(q));
            }
        }
        let rems = poly_rem_many(&polys, &l);
        let cols = factors.len();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for k in 0..m {
            let block = &rems[k * (cols + 1)..(k + 1) * (cols + 1)];
            let mut monos: Vec<&Monomial> = block.iter().flat_map(|r| r.terms().map(|(mo, _)| mo)).collect();
            monos.sort();
            monos.dedup();
            for mo in monos {
                let coeff = |r: &Poly| {
                    r.terms()
                        .find(|(x, _)| *x == mo)
                        .map_or_else(Q::zero, |(_, c)| c.clone())
                };
                let mut row: Vec<Q> = block[1..].iter().map(coeff).collect();
                row.push(coeff(&block[0]));
                rows.push(row);
            }
        }
        let pivots = rref_q(&mut rows, cols + 1);
        if pivots.contains(&cols) {
            return None;
        }
        coeffs = vec![Q::zero(); cols];
        for (r, &pc) in pivots.iter().enumerate() {
            coeffs[pc] = rows[r][cols].clone();
        }
        for (p, c) in factors.iter().zip(&coeffs) {
            if c.is_zero() {
                continue;
            }
            let pe = Expr::from_poly(p.clone());
            let dlog = KForm::differential(chart, &pe).scale(&pe.inv().ok()?.scale(c));
            log_part = log_part.add(&dlog).ok()?;
        }
    }

    let rest = sigma.sub(&log_part).ok()?;
    let poly_t = integrate_polynomial(&rest)?;

    // (1/D)·ln(Π p^{k_p}) with integer k_p
    let mut denom = num_bigint::BigInt::one();
    for c in &coeffs {
        denom = denom.lcm(c.denom());
    }
    let mut num = Expr::one();
    let mut den = Expr::one();
    for (p, c) in factors.iter().zip(&coeffs) {
        let k = (c * Q::from_integer(denom.clone())).to_integer();
        if k.is_zero() {
            continue;
        }
        let e: i32 = k.abs().try_into().ok()?;
        let pw = Expr::from_poly(p.clone()).powi(e).ok()?;
        if k.is_positive() {
            num = &num * &pw;
        } else {
            den = &den * &pw;
        }
    }
    let mut t = poly_t;
    if !(num.is_one() && den.is_one()) {
        let arg = num.checked_div(&den).ok()?;
        let ln = arg.ln().ok()?;
        t = &t + &ln.scale(&Q::new(num_bigint::BigInt::one(), denom));
    }
    (KForm::differential(chart, &t) == *sigma).then_some(t)
}
