//! Calculus on bounded time scales: jump operators, delta/nabla/diamond-alpha
//! derivatives and integrals, and numerical verification of diamond-alpha
//! integral inequalities (Jensen, Hölder, Cauchy-Schwarz, Minkowski and
//! related power-sum and mean inequalities).

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod cli;
pub mod convexity;
pub mod expr;
pub mod inequalities;
pub mod oracle;
mod quad;
pub mod timescale;

pub use calculus::{Alpha, CalcError, Integral, Measure, QuadConfig, TsFunction};
pub use expr::Expr;
pub use inequalities::{IneqReport, Verdict};

pub use timescale::{Component, PointClass, TimeScale, TsInterval};
