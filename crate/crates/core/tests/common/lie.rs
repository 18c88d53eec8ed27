//! Random Lie algebras and brute-force oracles over basis elements.

use asympl::liealg::{ce_differential, InvariantForm, LieAlgebraData};
use asympl::Q;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Consts = Vec<Vec<Vec<Q>>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn empty(r: usize) -> Consts {
    vec![vec![vec![Q::zero(); r]; r]; r]
}

/// `[e_j, e_k] = Σ v e_i` from a list `(j, k, [(i, v)])`.
pub fn table(r: usize, rows: &[(usize, usize, &[(usize, i64)])]) -> Consts {
    let mut c = empty(r);
    for (j, k, img) in rows {
        for (i, v) in img.iter() {
            c[*i][*j][*k] = q(*v);
            c[*i][*k][*j] = q(-*v);
        }
    }
    c
}

pub fn library() -> Vec<Consts> {
    vec![
        empty(3),
        table(3, &[(0, 1, &[(2, 1)])]),
        table(3, &[(0, 1, &[(2, 1)]), (1, 2, &[(0, 1)]), (2, 0, &[(1, 1)])]),
        table(3, &[(0, 1, &[(1, 2)]), (0, 2, &[(2, -2)]), (1, 2, &[(0, 1)])]),
        table(3, &[(0, 1, &[(1, 1)]), (0, 2, &[(2, 1)])]),
        table(4, &[(0, 1, &[(1, 1)]), (2, 3, &[(3, 1)])]),
        table(4, &[(0, 1, &[(2, 1)]), (0, 2, &[(3, 1)])]),
        table(4, &[(0, 1, &[(2, 1)])]),
    ]
}

pub fn bracket(c: &Consts, a: &[Q], b: &[Q]) -> Vec<Q> {
    let r = c.len();
    (0..r)
        .map(|i| {
            let mut s = Q::zero();
            for j in 0..r {
                for k in 0..r {
                    s += &a[j] * &b[k] * &c[i][j][k];
                }
            }
            s
        })
        .collect()
}

pub fn basis(r: usize, i: usize) -> Vec<Q> {
    (0..r).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

/// Jacobi identity checked on basis triples through the bracket.
pub fn satisfies_jacobi(c: &Consts) -> bool {
    let r = c.len();
    let e: Vec<Vec<Q>> = (0..r).map(|i| basis(r, i)).collect();
    for a in 0..r {
        for b in 0..r {
            for d in 0..r {
                let t1 = bracket(c, &e[a], &bracket(c, &e[b], &e[d]));
                let t2 = bracket(c, &e[b], &bracket(c, &e[d], &e[a]));
                let t3 = bracket(c, &e[d], &bracket(c, &e[a], &e[b]));
                if (0..r).any(|i| !(&t1[i] + &t2[i] + &t3[i]).is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().cloned().chain(basis(n, i)).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let inv = Q::one() / &a[k][k];
        for x in a[k].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Structure constants in the basis `f_i = Σ_a P[a][i] e_a`.
pub fn change_basis(c: &Consts, p: &[Vec<Q>]) -> Option<Consts> {
    let r = c.len();
    let pi = inverse(p)?;
    let cols: Vec<Vec<Q>> = (0..r).map(|i| (0..r).map(|a| p[a][i].clone()).collect()).collect();
    let mut out = empty(r);
    for j in 0..r {
        for k in 0..r {
            let br = bracket(c, &cols[j], &cols[k]);
            for i in 0..r {
                out[i][j][k] = (0..r).map(|a| &pi[i][a] * &br[a]).sum();
            }
        }
    }
    Some(out)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize) -> Vec<Vec<Q>> {
    (0..r).map(|_| (0..r).map(|_| q(rng.gen_range(-2..=2))).collect()).collect()
}

pub fn random_metric(rng: &mut ChaCha8Rng, r: usize) -> Vec<Vec<Q>> {
    loop {
        let mut g = vec![vec![Q::zero(); r]; r];
        for i in 0..r {
            for j in i..r {
                let v = q(rng.gen_range(-2..=2));
                g[i][j] = v.clone();
                g[j][i] = v;
            }
        }
        if inverse(&g).is_some() {
            return g;
        }
    }
}

pub fn random_lie(rng: &mut ChaCha8Rng) -> Consts {
    let lib = library();
    let c = &lib[rng.gen_range(0..lib.len())];
    loop {
        if let Some(out) = change_basis(c, &random_matrix(rng, c.len())) {
            return out;
        }
    }
}

pub fn random_non_lie(rng: &mut ChaCha8Rng) -> Consts {
    loop {
        let r = rng.gen_range(3..=4);
        let mut c = empty(r);
        for i in 0..r {
            for j in 0..r {
                for k in j + 1..r {
                    if rng.gen_bool(0.3) {
                        let v = q(rng.gen_range(-2..=2));
                        c[i][j][k] = v.clone();
                        c[i][k][j] = -v;
                    }
                }
            }
        }
        if !satisfies_jacobi(&c) {
            return c;
        }
    }
}

fn metric(g: &[Vec<Q>], u: &[Q], v: &[Q]) -> Q {
    let mut s = Q::zero();
    for i in 0..u.len() {
        for j in 0..v.len() {
            s += &u[i] * &g[i][j] * &v[j];
        }
    }
    s
}

/// Brute force over basis pairs: A is `γ(X, [e_h, e_k]) = 0`, B is
/// `γ([X, e_u], e_v) + γ(e_u, [X, e_v]) = 0`.
pub fn oracle(c: &Consts, g: &[Vec<Q>], xi: &[Q]) -> (bool, bool) {
    let r = c.len();
    let e: Vec<Vec<Q>> = (0..r).map(|i| basis(r, i)).collect();
    let mut a = true;
    let mut b = true;
    for h in 0..r {
        for k in 0..r {
            a &= metric(g, xi, &bracket(c, &e[h], &e[k])).is_zero();
            let s = metric(g, &bracket(c, xi, &e[h]), &e[k]) + metric(g, &e[h], &bracket(c, xi, &e[k]));
            b &= s.is_zero();
        }
    }
    (a, b)
}


pub fn d_squared_vanishes(data: &LieAlgebraData) -> bool {
    let r = data.dim();
    (1..=2).all(|copy| {
        (0..r).all(|i| {
            let g = InvariantForm::generator(r, copy, i);
            ce_differential(&ce_differential(&g, data), data).is_zero()
        })
    })
}

pub fn id(r: usize) -> Vec<Vec<Q>> {
    (0..r).map(|i| basis(r, i)).collect()
}

