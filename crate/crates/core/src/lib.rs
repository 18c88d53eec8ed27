//! Exact exterior calculus for almost symplectic structures on coordinate
//! charts: Lepage decomposition, Hamiltonian criteria, Poisson brackets,
//! Dirac frames, reduction checks, tangent-bundle lifts and a
//! Chevalley–Eilenberg model for invariant forms on `G×G`.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod exterior;
pub mod expr;
pub mod liealg;
pub mod par;
pub mod reduction;
pub mod symplectic;
pub mod tangent;
pub mod verdict;

pub use error::{Error, Result};
pub use expr::{Chart, Expr, SamplePoint, ZeroTest, Q};
pub use par::Exec;
pub use verdict::{Condition, Status, Verdict, Witness};
