//! Linear algebra over the field of chart functions and over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{KForm, VecField};
use crate::error::{Error, Result};
use crate::expr::gcd::{poly_div_exact, poly_gcd};
use crate::expr::{Chart, Expr, Poly, ZeroTest, Q};

pub type Matrix = Vec<Vec<Expr>>;

/// Pivot selection in column `col` among rows `from..`: the simplest entry
/// the zero test certifies nonzero. `Ok(None)` when every entry is zero.
fn find_pivot(m: &Matrix, from: usize, col: usize, chart: &Chart) -> Result<Option<usize>> {
    let mut candidates: Vec<usize> = (from..m.len()).filter(|&r| !m[r][col].is_zero()).collect();
    candidates.sort_by_key(|&r| {
        let e = &m[r][col];
        (e.numerator().len() + e.denominator().len(), r)
    });
    let mut undecided = None;
    for r in candidates {
        match chart.is_zero(&m[r][col]) {
            ZeroTest::NonZero { .. } => return Ok(Some(r)),
            ZeroTest::Indeterminate => undecided = Some(r),
            ZeroTest::Zero => {}
        }
    }
    match undecided {
        Some(r) => Err(Error::Indeterminate(format!(
            "pivot candidate in row {} column {} could not be certified nonzero",
            r + 1,
            col + 1
        ))),
        None => Ok(None),
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &Matrix, chart: &Chart) -> Result<Expr> {
    let n = m.len();
    if n == 0 {
        return Ok(Expr::one());
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = Expr::one();
    for k in 0..n {
        let Some(p) = find_pivot(&a, k, k, chart)? else {
            return Ok(Expr::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.checked_div(&prev)?;
            }
            a[i][k] = Expr::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign < 0 { -d } else { d })
}

/// Inverse by Gauss–Jordan elimination; `Error::Degenerate` when singular.
pub fn inverse(m: &Matrix, chart: &Chart) -> Result<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let p = find_pivot(&a, k, k, chart)?.ok_or(Error::Degenerate)?;
        a.swap(p, k);
        let inv = a[k][k].inv()?;
        for j in 0..2 * n {
            a[k][j] = &a[k][j] * &inv;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..2 * n {
                if !a[k][j].is_zero() {
                    a[i][j] = &a[i][j] - &(&f * &a[k][j]);
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Null space of a matrix over the function field.
#[derive(Clone, Debug)]
pub struct Kernel {
    /// Basis vectors, denominators cleared and content removed.
    pub basis: Vec<Vec<Expr>>,
    /// Pivot expressions used during elimination (the generic-rank
    /// certificate: each is certified nonzero by a sample point).
    pub pivots: Vec<Expr>,
    pub rank: usize,
}

/// Reduced row echelon form; returns pivot columns and the pivots used.
fn rref(m: &Matrix, cols: usize, chart: &Chart) -> Result<(Matrix, Vec<usize>, Vec<Expr>)> {
    let mut a = m.clone();
    let mut pivot_cols = Vec::new();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(p) = find_pivot(&a, row, col, chart)? else {
            continue;
        };
        a.swap(p, row);
        pivots.push(a[row][col].clone());
        let inv = a[row][col].inv()?;
        for j in col..cols {
            a[row][j] = &a[row][j] * &inv;
        }
        for i in 0..a.len() {
            if i == row || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in col..cols {
                if !a[row][j].is_zero() {
                    a[i][j] = &a[i][j] - &(&f * &a[row][j]);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    Ok((a, pivot_cols, pivots))
}

pub fn kernel(m: &Matrix, cols: usize, chart: &Chart) -> Result<Kernel> {
    let (a, pivot_cols, pivots) = rref(m, cols, chart)?;
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Expr::zero(); cols];
        v[free] = Expr::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        basis.push(normalize_vector(v));
    }
    Ok(Kernel {
        basis,
        pivots,
        rank: pivot_cols.len(),
    })
}

fn lcm_poly(a: &Poly, b: &Poly) -> Poly {
    let g = poly_gcd(a, b);
    a.mul(&poly_div_exact(b, &g).expect("gcd divides"))
}

/// Clears denominators, removes the polynomial and rational content and fixes
/// the sign so the first nonzero entry has a positive leading coefficient.
pub fn normalize_vector(v: Vec<Expr>) -> Vec<Expr> {
    if v.iter().all(Expr::is_zero) {
        return v;
    }
    let mut l = Poly::one();
    for e in v.iter().filter(|e| !e.is_polynomial()) {
        l = lcm_poly(&l, e.denominator());
    }
    let lx = Expr::from_poly(l);
    let nums: Vec<Expr> = v.iter().map(|e| e * &lx).collect();
    if nums.iter().any(|e| !e.is_polynomial()) {
        return v;
    }
    let mut g: Option<Poly> = None;
    for e in nums.iter().filter(|e| !e.is_zero()) {
        g = Some(match g {
            None => e.numerator().clone(),
            Some(g) => poly_gcd(&g, e.numerator()),
        });
    }
    let g = g.expect("nonzero vector");
    let mut out: Vec<Expr> = nums
        .iter()
        .map(|e| {
            if e.is_zero() {
                Expr::zero()
            } else {
                poly_div_exact(e.numerator(), &g)
                    .map(Expr::from_poly)
                    .unwrap_or_else(|| e.clone())
            }
        })
        .collect();
    // rational content
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for e in &out {
        for (_, c) in e.numerator().terms() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
    }
    let first = out.iter().find(|e| !e.is_zero()).expect("nonzero vector");
    let negative = first.numerator().leading_sign_negative();
    let mut s = Q::new(den_lcm, num_gcd);
    if negative {
        s = -s;
    }
    if !s.is_one() {
        out = out.iter().map(|e| e.scale(&s)).collect();
    }
    out
}

/// Vector fields `X` with `i(X)η = 0`, computed over the fraction field.
#[derive(Clone, Debug)]
pub struct ContractionKernel {
    pub basis: Vec<VecField>,
    /// Generic-rank certificate: the pivots used in elimination.
    pub pivots: Vec<Expr>,
    /// Dimension of the kernel on a dense open subset.
    pub dim: usize,
}

/// Kernel of `X ↦ i(X)η` for a form of positive degree.
pub fn kernel_of_contraction(eta: &KForm) -> Result<ContractionKernel> {
    let chart = eta.chart();
    let m = chart.dim();
    if eta.degree() == 0 {
        return Err(Error::Degree("contraction kernel of a 0-form".into()));
    }
    let cols: Vec<KForm> = (0..m).map(|j| eta.interior_basis(j)).collect();
    let mut keys: Vec<Vec<usize>> = cols
        .iter()
        .flat_map(|c| c.components().map(|(k, _)| k.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    let mat: Matrix = keys
        .iter()
        .map(|k| cols.iter().map(|c| c.get(k)).collect())
        .collect();
    let k = kernel(&mat, m, chart)?;
    let basis = k
        .basis
        .into_iter()
        .map(|v| VecField::new(chart, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(ContractionKernel {
        dim: basis.len(),
        basis,
        pivots: k.pivots,
    })
}

// Rational matrices --------------------------------------------------------

/// Reduced row echelon form over Q; returns pivot columns.
pub fn rref_q(m: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, row);
        let inv = Q::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..cols {
                    let t = &f * &m[row][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank_q(m: &[Vec<Q>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    rref_q(&mut m.to_vec(), cols).len()
}

/// Basis of the null space `{v : M v = 0}` with integer-primitive entries.
pub fn nullspace_q(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.to_vec();
    let pivots = rref_q(&mut a, cols);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        out.push(primitive_q(v));
    }
    out
}

/// Scales a rational vector to coprime integers with a positive first entry.
pub fn primitive_q(v: Vec<Q>) -> Vec<Q> {
    let mut l = BigInt::one();
    let mut g = BigInt::zero();
    for x in &v {
        l = l.lcm(x.denom());
        g = g.gcd(x.numer());
    }
    if g.is_zero() {
        return v;
    }
    let mut s = Q::new(l, g);
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        s = -s;
    }
    v.into_iter().map(|x| x * &s).collect()
}
