//! Seeded generators shared by the integration suites.
#![allow(dead_code, clippy::needless_range_loop, clippy::type_complexity)]

pub mod lie;

use asympl::exterior::{KForm, VecField};
use asympl::{Chart, Expr};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn chart(n: usize) -> Chart {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    Chart::new(&format!("R{n}"), &names).unwrap()
}

/// Polynomial with at most `terms` terms of total degree at most `deg` in
/// the first `n` symbols, small integer coefficients.
pub fn poly(r: &mut ChaCha8Rng, n: usize, terms: usize, deg: u32) -> Expr {
    let mut out = Expr::zero();
    for _ in 0..r.gen_range(1..=terms) {
        let c = r.gen_range(-3i64..=3);
        if c == 0 {
            continue;
        }
        let mut t = Expr::int(c);
        let mut left = r.gen_range(0..=deg);
        while left > 0 {
            let k = r.gen_range(0..n);
            t = &t * &Expr::var(k);
            left -= 1;
        }
        out = &out + &t;
    }
    out
}

/// Polynomial, sometimes divided by `1 + x_k²`.
pub fn rational(r: &mut ChaCha8Rng, n: usize, terms: usize, deg: u32) -> Expr {
    let p = poly(r, n, terms, deg);
    if r.gen_bool(0.25) {
        let k = r.gen_range(0..n);
        let d = &Expr::one() + &(&Expr::var(k) * &Expr::var(k));
        p.checked_div(&d).unwrap()
    } else {
        p
    }
}

pub fn form(r: &mut ChaCha8Rng, c: &Chart, degree: usize, deg: u32, rational_coeffs: bool) -> KForm {
    let n = c.dim();
    let idx: Vec<usize> = (0..n).collect();
    let count = r.gen_range(1..=3);
    let comps: Vec<(Vec<usize>, Expr)> = (0..count)
        .map(|_| {
            let mut i: Vec<usize> = idx.choose_multiple(r, degree).copied().collect();
            i.sort_unstable();
            let e = if rational_coeffs {
                rational(r, n, 2, deg)
            } else {
                poly(r, n, 2, deg)
            };
            (i, e)
        })
        .collect();
    KForm::from_components(c, degree, comps).unwrap()
}

pub fn field(r: &mut ChaCha8Rng, c: &Chart, deg: u32) -> VecField {
    let n = c.dim();
    let comps = (0..n)
        .map(|_| if r.gen_bool(0.6) { poly(r, n, 2, deg) } else { Expr::zero() })
        .collect();
    VecField::new(c, comps).unwrap()
}

/// Reproducible proptest configuration.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed_2024),
        failure_persistence: None,
        ..Default::default()
    }
}
