use num_traits::Zero;

use super::AlmostSymplectic;
use crate::error::{Error, Result};
use crate::exterior::linalg::{nullspace_q, rank_q};
use crate::exterior::VecField;
use crate::expr::{SamplePoint, Q};

/// `{X₀ ∈ T_x M : i(X₀)(dω)_x = 0}` as an exact rational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianCone {
    pub point: SamplePoint,
    pub basis: Vec<Vec<Q>>,
    pub dim: usize,
}

/// A basis of `D_ω(x) = {(X, ♭X + ν) : X ∈ H_x, ν ∈ ann H_x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracFrame {
    pub point: SamplePoint,
    /// `(tangent vector, covector)` pairs.
    pub pairs: Vec<(Vec<Q>, Vec<Q>)>,
    pub dim_h: usize,
    pub rank: usize,
    /// `α(Y) + β(X) = 0` on every pair of basis elements.
    pub isotropic: bool,
}

impl DiracFrame {
    pub fn is_valid(&self) -> bool {
        self.isotropic && self.rank == self.point.chart().dim()
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl AlmostSymplectic {
    fn check_point(&self, x: &SamplePoint) -> Result<()> {
        self.chart.ensure_same(x.chart())?;
        if !x.in_domain() {
            return Err(Error::Precondition(format!("{x} is outside the chart domain")));
        }
        Ok(())
    }

    pub fn hamiltonian_cone_at(&self, x: &SamplePoint) -> Result<HamiltonianCone> {
        self.check_point(x)?;
        let m = self.chart.dim();
        let cols = (0..m)
            .map(|j| self.d_omega.interior_basis(j).eval_at(x))
            .collect::<Result<Vec<_>>>()?;
        let mut keys: Vec<&Vec<usize>> = cols.iter().flat_map(|c| c.keys()).collect();
        keys.sort();
        keys.dedup();
        let rows: Vec<Vec<Q>> = keys
            .iter()
            .map(|k| cols.iter().map(|c| c.get(*k).cloned().unwrap_or_else(Q::zero)).collect())
            .collect();
        let basis = nullspace_q(&rows, m);
        Ok(HamiltonianCone {
            point: x.clone(),
            dim: basis.len(),
            basis,
        })
    }

    /// Frame of the Dirac structure built from `H_x = span{X_a(x)}`; every
    /// supplied field must be locally Hamiltonian.
    pub fn dirac_frame_at(&self, x: &SamplePoint, fields: &[VecField]) -> Result<DiracFrame> {
        self.check_point(x)?;
        let m = self.chart.dim();
        let mut h: Vec<Vec<Q>> = Vec::new();
        for (i, f) in fields.iter().enumerate() {
            let v = self.is_locally_hamiltonian(f)?;
            if !v.holds() {
                return Err(Error::Precondition(format!(
                    "field {} is not locally Hamiltonian:\n{v}",
                    i + 1
                )));
            }
            let val = f.eval_at(x)?;
            let mut trial = h.clone();
            trial.push(val.clone());
            if rank_q(&trial) > h.len() {
                h.push(val);
            }
        }
        let omega_x: Vec<Vec<Q>> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| e.eval_exact(x.values())).collect())
            .collect::<Result<_>>()?;
        let flat = |v: &[Q]| -> Vec<Q> {
            (0..m)
                .map(|j| (0..m).map(|i| &v[i] * &omega_x[i][j]).sum())
                .collect()
        };
        let mut pairs: Vec<(Vec<Q>, Vec<Q>)> = h.iter().map(|v| (v.clone(), flat(v))).collect();
        for nu in nullspace_q(&h, m) {
            pairs.push((vec![Q::zero(); m], nu));
        }
        let stacked: Vec<Vec<Q>> = pairs
            .iter()
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        let rank = rank_q(&stacked);
        let isotropic = pairs.iter().all(|(xa, al)| {
            pairs
                .iter()
                .all(|(ya, be)| (dot(al, ya) + dot(be, xa)).is_zero())
        });
        Ok(DiracFrame {
            point: x.clone(),
            pairs,
            dim_h: h.len(),
            rank,
            isotropic,
        })
    }
}
