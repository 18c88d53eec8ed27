//! Pass/fail reports with witnesses.

use std::fmt;

use crate::expr::{SamplePoint, ZeroTest};

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Which component or identity failed, e.g. `d(i(X)ω)[1,2]`.
    pub component: String,
    pub point: Option<SamplePoint>,
    pub value: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {:e}", self.component, self.value)?;
        if let Some(p) = &self.point {
            write!(f, " at {p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Holds,
    Fails(Witness),
    Indeterminate { component: String },
}

impl Status {
    pub fn holds(&self) -> bool {
        matches!(self, Status::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Status::Fails(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Status::Fails(w) => Some(w),
            _ => None,
        }
    }

    /// Status of the identity `e = 0` for a component named `component`.
    pub fn from_zero_test(t: ZeroTest, component: impl Into<String>) -> Status {
        match t {
            ZeroTest::Zero => Status::Holds,
            ZeroTest::NonZero { point, value } => Status::Fails(Witness {
                component: component.into(),
                point: Some(point),
                value,
            }),
            ZeroTest::Indeterminate => Status::Indeterminate {
                component: component.into(),
            },
        }
    }

    /// A failure without a sample point (purely algebraic data).
    pub fn fails_exact(component: impl Into<String>, value: f64) -> Status {
        Status::Fails(Witness {
            component: component.into(),
            point: None,
            value,
        })
    }

    pub fn from_bool(ok: bool, component: impl Into<String>) -> Status {
        if ok {
            Status::Holds
        } else {
            Status::fails_exact(component, f64::NAN)
        }
    }

    /// Conjunction: the first non-holding status wins, failures before
    /// indeterminate ones.
    pub fn all(items: impl IntoIterator<Item = Status>) -> Status {
        let mut pending = None;
        for s in items {
            match s {
                Status::Holds => {}
                Status::Fails(_) => return s,
                Status::Indeterminate { .. } => {
                    pending.get_or_insert(s);
                }
            }
        }
        pending.unwrap_or(Status::Holds)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Holds => write!(f, "holds"),
            Status::Fails(w) => write!(f, "FAILS: {w}"),
            Status::Indeterminate { component } => write!(f, "indeterminate ({component})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub name: String,
    pub status: Status,
}

impl Condition {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Condition {
            name: name.into(),
            status,
        }
    }

    pub fn holds(&self) -> bool {
        self.status.holds()
    }
}

/// A list of primary conditions whose conjunction is the verdict, plus
/// auxiliary cross-checks that are reported but do not enter the conjunction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Verdict {
    pub conditions: Vec<Condition>,
    pub auxiliary: Vec<Condition>,
}

impl Verdict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status) {
        self.conditions.push(Condition::new(name, status));
    }

    pub fn push_aux(&mut self, name: impl Into<String>, status: Status) {
        self.auxiliary.push(Condition::new(name, status));
    }

    pub fn holds(&self) -> bool {
        self.conditions.iter().all(Condition::holds)
    }

    pub fn is_indeterminate(&self) -> bool {
        !self.conditions.iter().any(|c| c.status.fails())
            && self
                .conditions
                .iter()
                .any(|c| matches!(c.status, Status::Indeterminate { .. }))
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions
            .iter()
            .chain(&self.auxiliary)
            .find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<&Status> {
        self.condition(name).map(|c| &c.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.holds())
    }

    pub fn witnesses(&self) -> Vec<&Witness> {
        self.conditions
            .iter()
            .chain(&self.auxiliary)
            .filter_map(|c| c.status.witness())
            .collect()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            writeln!(f, "  {:<40} {}", c.name, c.status)?;
        }
        for c in &self.auxiliary {
            writeln!(f, "  (check) {:<32} {}", c.name, c.status)?;
        }
        write!(f, "  verdict: {}", if self.holds() { "PASS" } else { "FAIL" })
    }
}
