use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Chart, Expr, Q};
use crate::error::{Error, Result};
use crate::par::Exec;

/// Number of random points tried before a zero test gives up.
pub const SAMPLE_ATTEMPTS: usize = 64;
/// Minimum magnitude of a nonzero witness value.
pub const WITNESS_THRESHOLD: f64 = 1e-9;

const MAX_DEN: i64 = 16;
const MAX_MAG: i64 = 8;
const DRAWS_PER_POINT: usize = 400;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Q),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }

    pub(crate) fn is_exact_zero(&self) -> bool {
        matches!(self, Value::Exact(q) if q.is_zero())
    }

    pub(crate) fn is_exact_one(&self) -> bool {
        matches!(self, Value::Exact(q) if q.is_one())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{q}"),
            Value::Float(x) => write!(f, "{x:e}"),
        }
    }
}

/// Exact rational values for every symbol of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint {
    chart: Chart,
    values: Vec<Q>,
}

impl SamplePoint {
    pub fn new(chart: &Chart, values: Vec<Q>) -> Result<Self> {
        if values.len() != chart.nsyms() {
            return Err(Error::Dimension(format!(
                "point has {} values, chart `{}` has {} symbols",
                values.len(),
                chart.name(),
                chart.nsyms()
            )));
        }
        Ok(SamplePoint {
            chart: chart.clone(),
            values,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn in_domain(&self) -> bool {
        self.chart.constraints().iter().all(|c| c.holds(&self.values))
    }
}

impl fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", self.chart.symbol_name(i), v)?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroTest {
    /// The canonical form is syntactically zero.
    Zero,
    /// A sample point where the value exceeds the witness threshold.
    NonZero { point: SamplePoint, value: f64 },
    /// Canonical form nonzero, yet no witness among the sampled points.
    Indeterminate,
}

impl ZeroTest {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroTest::Zero)
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, ZeroTest::NonZero { .. })
    }
}

fn draw(rng: &mut ChaCha8Rng, mag: (i64, i64)) -> Q {
    let den = rng.gen_range(1..=MAX_DEN);
    let (lo, hi) = mag;
    loop {
        let num = rng.gen_range(-hi * den..=hi * den);
        if num.abs() >= lo * den {
            return Q::new(BigInt::from(num), BigInt::from(den));
        }
    }
}

impl Chart {
    fn sample_with(&self, count: usize, seed: u64, mag: (i64, i64)) -> Result<Vec<SamplePoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut draws = 0;
        while out.len() < count {
            if draws > DRAWS_PER_POINT * count.max(1) {
                return Err(Error::NoSamplePoint(self.name().into()));
            }
            draws += 1;
            let values: Vec<Q> = (0..self.nsyms()).map(|_| draw(&mut rng, mag)).collect();
            if self.constraints().iter().all(|c| c.holds(&values)) {
                out.push(SamplePoint {
                    chart: self.clone(),
                    values,
                });
            }
        }
        Ok(out)
    }

    /// Random rational points (denominators at most 16, magnitudes at most 8)
    /// satisfying the domain predicate.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<SamplePoint>> {
        self.sample_with(count, seed, (0, MAX_MAG))
    }

    /// Sample points with every coordinate magnitude in `[1/2, 4]`, used for
    /// finite-difference comparisons away from poles.
    pub fn moderate_points(&self, count: usize, seed: u64) -> Result<Vec<SamplePoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut draws = 0;
        while out.len() < count {
            if draws > DRAWS_PER_POINT * count.max(1) {
                return Err(Error::NoSamplePoint(self.name().into()));
            }
            draws += 1;
            let values: Vec<Q> = (0..self.nsyms())
                .map(|_| {
                    let den = rng.gen_range(2..=MAX_DEN);
                    let num = rng.gen_range(den / 2..=4 * den);
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    Q::new(BigInt::from(sign * num), BigInt::from(den))
                })
                .collect();
            if self.constraints().iter().all(|c| c.holds(&values)) {
                out.push(SamplePoint {
                    chart: self.clone(),
                    values,
                });
            }
        }
        Ok(out)
    }

    /// Sound zero test: `Zero` only for syntactically zero canonical forms;
    /// `NonZero` always carries a numeric witness.
    pub fn is_zero(&self, e: &Expr) -> ZeroTest {
        self.is_zero_with(e, Exec::default())
    }

    pub fn is_zero_with(&self, e: &Expr, exec: Exec) -> ZeroTest {
        if e.is_zero() {
            return ZeroTest::Zero;
        }
        if let Some(c) = e.as_constant() {
            // Constant: any point of the domain is a witness.
            if let Ok(mut pts) = self.sample_points(1, self.seed()) {
                return ZeroTest::NonZero {
                    point: pts.remove(0),
                    value: c.to_f64().unwrap_or(f64::NAN),
                };
            }
            return ZeroTest::Indeterminate;
        }
        let Ok(points) = self.sample_points(SAMPLE_ATTEMPTS, self.seed()) else {
            return ZeroTest::Indeterminate;
        };
        exec.find_map_first(&points, |p| {
            let v = e.eval(&p.values).ok()?;
            let (nonzero, x) = match &v {
                Value::Exact(q) => (!q.is_zero(), v.to_f64()),
                Value::Float(x) => (x.is_finite(), *x),
            };
            (nonzero && x.abs() > WITNESS_THRESHOLD).then(|| ZeroTest::NonZero {
                point: p.clone(),
                value: x,
            })
        })
        .unwrap_or(ZeroTest::Indeterminate)
    }

    /// Evaluates at a sample point of this chart.
    pub fn eval_at(&self, e: &Expr, p: &SamplePoint) -> Result<Value> {
        self.ensure_same(p.chart())?;
        e.eval(&p.values)
    }
}

impl Expr {
    pub fn eval_at(&self, p: &SamplePoint) -> Result<Value> {
        self.eval(p.values())
    }

    /// True when the value at `p` is exactly zero (or numerically below the
    /// witness threshold for transcendental values).
    pub fn vanishes_at(&self, p: &SamplePoint) -> Result<bool> {
        Ok(match self.eval(p.values())? {
            Value::Exact(q) => q.is_zero(),
            Value::Float(x) => x.abs() <= WITNESS_THRESHOLD,
        })
    }

    pub fn sign_at(&self, p: &SamplePoint) -> Result<i8> {
        Ok(match self.eval(p.values())? {
            Value::Exact(q) => {
                if q.is_positive() {
                    1
                } else if q.is_negative() {
                    -1
                } else {
                    0
                }
            }
            Value::Float(x) => {
                if x > 0.0 {
                    1
                } else if x < 0.0 {
                    -1
                } else {
                    0
                }
            }
        })
    }
}
