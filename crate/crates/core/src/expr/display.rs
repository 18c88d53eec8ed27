//! Printing in the scalar grammar. Output re-parses to the same canonical form.

use std::fmt;

use num_traits::{One, Signed};

use super::{Chart, Expr, Monomial, Poly, Var, Q};

/// An expression paired with the chart that names its symbols.
pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    chart: &'a Chart,
}

impl Expr {
    pub fn display<'a>(&'a self, chart: &'a Chart) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, chart }
    }

    pub fn to_string_in(&self, chart: &Chart) -> String {
        self.display(chart).to_string()
    }

    /// True when printing as a factor of a product needs parentheses.
    pub fn is_compound_sum(&self) -> bool {
        self.den.is_one() && self.num.len() > 1
    }
}

fn monomial(m: &Monomial, chart: &Chart) -> String {
    let mut parts = Vec::new();
    for (v, e) in m.factors() {
        let base = match v {
            Var::Sym(k) => chart.symbol_name(*k as usize).to_string(),
            Var::Ln(a) => format!("ln({})", a.display(chart)),
        };
        if *e == 1 {
            parts.push(base);
        } else {
            parts.push(format!("{base}**{e}"));
        }
    }
    if let Some(a) = m.exp_arg() {
        parts.push(format!("exp({})", a.display(chart)));
    }
    parts.join("*")
}

/// Signed terms, each rendered without its sign.
fn terms(p: &Poly, chart: &Chart) -> Vec<(bool, String)> {
    p.terms
        .iter()
        .rev()
        .map(|(m, c)| {
            let neg = c.is_negative();
            let a: Q = c.abs();
            let body = if m.is_one() {
                a.to_string()
            } else if a.is_one() {
                monomial(m, chart)
            } else {
                format!("{}*{}", a, monomial(m, chart))
            };
            (neg, body)
        })
        .collect()
}

pub(crate) fn poly_string(p: &Poly, chart: &Chart) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms(p, chart).into_iter().enumerate() {
        if i == 0 {
            if neg {
                // `-x**2` parses as `(-x)**2`; an explicit `-1*` avoids that.
                if body.contains("**") && !body.starts_with(|c: char| c.is_ascii_digit()) {
                    s.push_str("-1*");
                } else {
                    s.push('-');
                }
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    s
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.expr;
        let num = poly_string(&e.num, self.chart);
        if e.den.is_one() {
            return f.write_str(&num);
        }
        let den = poly_string(&e.den, self.chart);
        let simple_den = e.den.len() == 1
            && e.den.terms().all(|(m, c)| {
                c.is_one() && m.exp_arg().is_none() && m.factors().len() == 1
            });
        if e.num.len() > 1 {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        if simple_den {
            write!(f, "/{den}")
        } else {
            write!(f, "/({den})")
        }
    }
}
