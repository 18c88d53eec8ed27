//! Left-invariant forms on `G×G` in the constant-coefficient
//! Chevalley–Eilenberg model, and the diagonal-field criteria.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exterior::linalg::rank_q;
use crate::exterior::merge;
use crate::expr::Q;
use crate::verdict::{Status, Verdict};

/// Structure constants `c[i][j][k] = c^i_{jk}` and a constant metric `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    r: usize,
    c: Vec<Vec<Vec<Q>>>,
    gamma: Vec<Vec<Q>>,
}

fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl LieAlgebraData {
    pub fn new(c: Vec<Vec<Vec<Q>>>, gamma: Vec<Vec<Q>>) -> Result<Self> {
        let r = c.len();
        if r == 0 {
            return Err(Error::LieData("dimension must be positive".into()));
        }
        if c.iter().any(|m| m.len() != r || m.iter().any(|row| row.len() != r)) {
            return Err(Error::LieData(format!("structure constants must be {r}×{r}×{r}")));
        }
        if gamma.len() != r || gamma.iter().any(|row| row.len() != r) {
            return Err(Error::LieData(format!("metric must be {r}×{r}")));
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if c[i][j][k] != -c[i][k][j].clone() {
                        return Err(Error::LieData(format!(
                            "c[{}][{}][{}] is not antisymmetric in the lower indices",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
                if gamma[i][j] != gamma[j][i] {
                    return Err(Error::LieData(format!(
                        "metric is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if rank_q(&gamma) < r {
            return Err(Error::LieData("metric is degenerate".into()));
        }
        Ok(LieAlgebraData { r, c, gamma })
    }

    /// Builds from the nonzero entries `c^i_{jk}` with `j < k` (1-based
    /// in messages, 0-based here); the antisymmetric partners are filled in.
    pub fn from_entries(r: usize, entries: &[((usize, usize, usize), Q)], gamma: Vec<Vec<Q>>) -> Result<Self> {
        let mut c = vec![vec![vec![Q::zero(); r]; r]; r];
        for ((i, j, k), v) in entries {
            if *i >= r || *j >= r || *k >= r {
                return Err(Error::LieData(format!("index out of range in c[{i}][{j}][{k}]")));
            }
            if j == k {
                return Err(Error::LieData("c^i_jj must vanish".into()));
            }
            c[*i][*j][*k] = v.clone();
            c[*i][*k][*j] = -v.clone();
        }
        LieAlgebraData::new(c, gamma)
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn constants(&self) -> &Vec<Vec<Vec<Q>>> {
        &self.c
    }

    pub fn gamma(&self) -> &Vec<Vec<Q>> {
        &self.gamma
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(Zero::is_zero)
    }

    /// Nonzero entries of `J^i_{jkl}`.
    pub fn jacobi_defect(&self) -> Vec<((usize, usize, usize, usize), Q)> {
        let r = self.r;
        let c = &self.c;
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let s: Q = (0..r)
                            .map(|m| {
                                &c[i][j][m] * &c[m][k][l]
                                    + &c[i][k][m] * &c[m][l][j]
                                    + &c[i][l][m] * &c[m][j][k]
                            })
                            .sum();
                        if !s.is_zero() {
                            out.push(((i, j, k, l), s));
                        }
                    }
                }
            }
        }
        out
    }

    /// `ω = γ_ij ω₁^i∧ω₂^j`.
    pub fn omega(&self) -> InvariantForm {
        let mut w = InvariantForm::zero(self.r, 2);
        for i in 0..self.r {
            for j in 0..self.r {
                w.add_component(vec![i, self.r + j], self.gamma[i][j].clone());
            }
        }
        w
    }
}

/// Element of the exterior algebra on `ω₁^1..ω₁^r, ω₂^1..ω₂^r`
/// (generators `0..r` and `r..2r`) with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantForm {
    r: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Q>,
}

impl InvariantForm {
    pub fn zero(r: usize, degree: usize) -> Self {
        InvariantForm {
            r,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn scalar(r: usize, c: Q) -> Self {
        let mut f = InvariantForm::zero(r, 0);
        f.add_component(Vec::new(), c);
        f
    }

    /// The generator `ω_copy^i` (`copy` is 1 or 2, `i` 0-based).
    pub fn generator(r: usize, copy: usize, i: usize) -> Self {
        let mut f = InvariantForm::zero(r, 1);
        f.add_component(vec![(copy - 1) * r + i], Q::from_integer(1.into()));
        f
    }

    fn add_component(&mut self, idx: Vec<usize>, c: Q) {
        if c.is_zero() {
            return;
        }
        let mut idx = idx;
        let Some(sign) = crate::expr::sort_with_sign(&mut idx) else {
            return;
        };
        let c = if sign < 0 { -c } else { c };
        match self.comps.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.comps.iter()
    }

    pub fn get(&self, idx: &[usize]) -> Q {
        self.comps.get(idx).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &InvariantForm) -> InvariantForm {
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (k, v) in &o.comps {
            out.add_component(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> InvariantForm {
        let mut out = InvariantForm::zero(self.r, self.degree);
        for (k, v) in &self.comps {
            out.add_component(k.clone(), v * s);
        }
        out
    }

    pub fn wedge(&self, o: &InvariantForm) -> InvariantForm {
        let mut out = InvariantForm::zero(self.r, self.degree + o.degree);
        for (a, x) in &self.comps {
            for (b, y) in &o.comps {
                if let Some((idx, s)) = merge(a, b) {
                    let v = x * y;
                    out.add_component(idx, if s < 0 { -v } else { v });
                }
            }
        }
        out
    }

    /// Contraction with a constant vector on the `2r` generators.
    pub fn interior(&self, v: &[Q]) -> InvariantForm {
        let mut out = InvariantForm::zero(self.r, self.degree.saturating_sub(1));
        for (idx, c) in &self.comps {
            for (pos, &g) in idx.iter().enumerate() {
                if v[g].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let t = &v[g] * c;
                out.add_component(rest, if pos % 2 == 1 { -t } else { t });
            }
        }
        out
    }

    /// First nonzero coefficient, for witnesses.
    fn witness(&self) -> Option<(String, f64)> {
        self.comps.iter().next().map(|(k, v)| {
            let names: Vec<String> = k
                .iter()
                .map(|&g| format!("w{}_{}", g / self.r + 1, g % self.r + 1))
                .collect();
            (names.join("^"), to_f64(v))
        })
    }

    fn zero_status(&self, label: &str) -> Status {
        match self.witness() {
            None => Status::Holds,
            Some((k, v)) => Status::fails_exact(format!("{label}[{k}]"), v),
        }
    }
}

impl fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, v)) in self.comps.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let names: Vec<String> = k
                .iter()
                .map(|&g| format!("w{}_{}", g / self.r + 1, g % self.r + 1))
                .collect();
            if names.is_empty() {
                write!(f, "{v}")?;
            } else {
                write!(f, "({v})*{}", names.join("^"))?;
            }
        }
        Ok(())
    }
}

/// Chevalley–Eilenberg differential with `dω^i = ½ c^i_{jk} ω^k∧ω^j` on each
/// copy, extended as a graded derivation.
pub fn ce_differential(a: &InvariantForm, data: &LieAlgebraData) -> InvariantForm {
    let r = data.r;
    let half = Q::new(1.into(), 2.into());
    let d_gen: Vec<InvariantForm> = (0..2 * r)
        .map(|g| {
            let (copy, i) = (g / r, g % r);
            let mut out = InvariantForm::zero(r, 2);
            for j in 0..r {
                for k in 0..r {
                    let c = &data.c[i][j][k];
                    if !c.is_zero() {
                        out.add_component(vec![copy * r + k, copy * r + j], c * &half);
                    }
                }
            }
            out
        })
        .collect();
    let mut out = InvariantForm::zero(r, a.degree + 1);
    for (idx, c) in &a.comps {
        for (pos, &g) in idx.iter().enumerate() {
            let mut left = InvariantForm::zero(r, pos);
            left.add_component(idx[..pos].to_vec(), Q::from_integer(1.into()));
            let mut right = InvariantForm::zero(r, idx.len() - pos - 1);
            right.add_component(idx[pos + 1..].to_vec(), Q::from_integer(1.into()));
            let term = left.wedge(&d_gen[g]).wedge(&right);
            let s = if pos % 2 == 1 { -c.clone() } else { c.clone() };
            out = out.add(&term.scale(&s));
        }
    }
    out
}

/// Locally Hamiltonian test for `Z = X₁ + X₂`, `X = ξ^i Y_i`: condition A is
/// `γ_ij ξ^i c^j_{hk} = 0`, condition B is skew-adjointness of `ad X` for
/// `γ`. Both are cross-checked against `d(i(Z)ω)` and `i(Z)dω` in the CE
/// model.
pub fn diagonal_check(data: &LieAlgebraData, xi: &[Q]) -> Result<Verdict> {
    let r = data.r;
    if xi.len() != r {
        return Err(Error::LieData(format!("ξ needs {r} components")));
    }
    if let Some(((i, j, k, l), _)) = data.jacobi_defect().first() {
        return Err(Error::LieData(format!(
            "Jacobi identity fails at J^{}_{}{}{}",
            i + 1,
            j + 1,
            k + 1,
            l + 1
        )));
    }
    let c = &data.c;
    let g = &data.gamma;
    let mut a = Status::Holds;
    'a: for h in 0..r {
        for k in 0..r {
            let s: Q = (0..r)
                .flat_map(|i| (0..r).map(move |j| (i, j)))
                .map(|(i, j)| &(&g[i][j] * &xi[i]) * &c[j][h][k])
                .sum();
            if !s.is_zero() {
                a = Status::fails_exact(format!("γ_ij ξ^i c^j_{}{}", h + 1, k + 1), to_f64(&s));
                break 'a;
            }
        }
    }
    let mut b = Status::Holds;
    'b: for u in 0..r {
        for v in 0..r {
            let s: Q = (0..r)
                .flat_map(|i| (0..r).map(move |m| (i, m)))
                .map(|(i, m)| &xi[i] * &(&(&c[m][i][u] * &g[m][v]) + &(&c[m][i][v] * &g[u][m])))
                .sum();
            if !s.is_zero() {
                b = Status::fails_exact(
                    format!("γ(ad X(e{}), e{}) + γ(e{}, ad X(e{}))", u + 1, v + 1, u + 1, v + 1),
                    to_f64(&s),
                );
                break 'b;
            }
        }
    }
    let omega = data.omega();
    let z: Vec<Q> = xi.iter().chain(xi).cloned().collect();
    let iz = omega.interior(&z);
    let d_iz = ce_differential(&iz, data);
    let iz_d = ce_differential(&omega, data).interior(&z);
    let direct = d_iz.is_zero() && iz_d.is_zero();
    let mut verdict = Verdict::new();
    let ab = a.holds() && b.holds();
    verdict.push("A: ξ ⊥_γ [g, g]", a);
    verdict.push("B: ad X skew for γ", b);
    verdict.push_aux("d(i(Z)ω) = 0", d_iz.zero_status("d(i(Z)ω)"));
    verdict.push_aux("i(Z)dω = 0", iz_d.zero_status("i(Z)dω"));
    verdict.push_aux("criteria agree", Status::from_bool(ab == direct, "A∧B vs CE computation"));
    Ok(verdict)
}
