//! Both sides of the diamond-alpha integral inequalities, evaluated
//! numerically and compared with a margin.
//!
//! Every check produces an [`IneqReport`]. A report `Holds` when its margin
//! is at least `-tol`, where `tol = 1e-9 + 1e-9 * max(|lhs|, |rhs|)` plus the
//! quadrature error propagated through both sides. A negative margin that
//! depends on an integral whose quadrature did not converge is reported
//! `Inconclusive` instead of `Violated`.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::calculus::{self, Alpha, CalcError, Integral, Measure, QuadConfig, TsFunction};
use crate::convexity::{self, ConvexityError, Shape};
use crate::timescale::TimeScale;

mod jensen;
mod means;
mod norms;

pub use jensen::{jensen, jensen_discrete, jensen_weighted, signed_weights_counterexample, Counterexample, JensenOptions};
pub use means::{log_mean, log_mean_exp, pow2_scale_check, power_mean, weighted_amgm, Pow2Check, Pow2Sums};
pub use norms::{cauchy_schwarz, holder, minkowski, power_sum};

pub const ATOL: f64 = 1e-9;
pub const RTOL: f64 = 1e-9;
/// Samples per interval component when scanning a function's values.
const SCAN: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IneqError {
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Convexity(#[from] ConvexityError),
    #[error("outer function is neither convex nor concave on ({c}, {d})")]
    NotConvex { c: f64, d: f64 },
    #[error("values of g span [{lo}, {hi}], outside ({c}, {d})")]
    RangeEscapes { lo: f64, hi: f64, c: f64, d: f64 },
    #[error("total weight {total:e} is not above the floor {floor:e}")]
    WeightTooSmall { total: f64, floor: f64 },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("{which} takes the value {value} at {at}; it must be {need}")]
    Sign {
        which: &'static str,
        at: f64,
        value: f64,
        need: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which way an inequality points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `lhs <= rhs`; margin is `rhs - lhs`.
    Le,
    /// `lhs >= rhs`; margin is `lhs - rhs`.
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IneqReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub verdict: Verdict,
    pub inputs_digest: String,
    #[serde(skip)]
    pub relation: Relation,
}

impl IneqReport {
    pub fn new(name: &str, relation: Relation, lhs: f64, rhs: f64, extra_tol: f64, converged: bool, digest: String) -> Self {
        let margin = match relation {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
        };
        let tol = ATOL + RTOL * lhs.abs().max(rhs.abs()) + extra_tol;
        let verdict = if margin >= -tol {
            Verdict::Holds
        } else if converged {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        };
        IneqReport {
            name: name.to_string(),
            lhs,
            rhs,
            margin,
            tol,
            verdict,
            inputs_digest: digest,
            relation,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// One JSON object, keys in declaration order.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report fields are plain numbers and strings")
    }
}

/// Stable hex digest of the inputs that produced a report.
pub fn digest(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update(p.as_bytes());
        hasher.update([0x1f]);
    }
    hasher.finalize()[..16].iter().map(|b| format!("{b:02x}")).collect()
}

/// The time-scale interval and integration settings shared by the integral
/// inequalities.
#[derive(Debug, Clone)]
pub struct Setting {
    pub scale: TimeScale,
    pub a: f64,
    pub b: f64,
    pub alpha: Alpha,
    pub cfg: QuadConfig,
}

impl Setting {
    pub fn new(scale: TimeScale, a: f64, b: f64, alpha: Alpha, cfg: QuadConfig) -> Result<Self, IneqError> {
        let range = scale.restrict(a, b).map_err(CalcError::from)?;
        if a >= b {
            return Err(IneqError::BadParameter(format!("need a < b, got a = {a}, b = {b}")));
        }
        cfg.validate()?;
        Ok(Setting {
            scale: range.into_scale(),
            a,
            b,
            alpha,
            cfg,
        })
    }

    pub fn with_alpha(&self, alpha: Alpha) -> Setting {
        Setting { alpha, ..self.clone() }
    }

    fn integral(&self, f: &TsFunction, book: &mut Book) -> Result<f64, IneqError> {
        let r: Integral = calculus::integrate(&self.scale, f, self.a, self.b, Measure::Diamond(self.alpha), &self.cfg)?;
        book.errors.push(r.abs_error);
        book.converged &= r.converged;
        Ok(r.value)
    }

    /// Points at which functions are scanned for range and sign checks.
    fn samples(&self) -> Vec<f64> {
        self.scale.sample_points(SCAN)
    }

    fn scan(&self, f: &TsFunction) -> Result<Vec<f64>, IneqError> {
        self.samples()
            .into_iter()
            .map(|t| f.eval(t).map_err(|e| IneqError::Calc(e.into())))
            .collect()
    }

    fn require(&self, f: &TsFunction, which: &'static str, need: &'static str, ok: fn(f64) -> bool) -> Result<(), IneqError> {
        for t in self.samples() {
            let value = f.eval(t).map_err(|e| IneqError::Calc(e.into()))?;
            if !ok(value) {
                return Err(IneqError::Sign { which, at: t, value, need });
            }
        }
        Ok(())
    }

    fn digest(&self, name: &str, funcs: &[&TsFunction], params: &[f64]) -> String {
        let scale = serde_json::to_string(&self.scale).unwrap_or_default();
        let mut parts = vec![
            name.to_string(),
            scale,
            format!("{:?}", self.a),
            format!("{:?}", self.b),
            format!("{:?}", self.alpha.value()),
        ];
        parts.extend(funcs.iter().map(|f| f.label().to_string()));
        parts.extend(params.iter().map(|p| format!("{p:?}")));
        let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
        digest(&refs)
    }
}

/// Integral values gathered for one report, with their error bounds.
#[derive(Debug, Default)]
struct Book {
    errors: Vec<f64>,
    converged: bool,
}

impl Book {
    fn new() -> Self {
        Book {
            errors: Vec::new(),
            converged: true,
        }
    }

    /// First-order bound on how far `side(values)` can move when each value
    /// moves by its quadrature error.
    fn propagate(&self, values: &[f64], side: impl Fn(&[f64]) -> f64) -> f64 {
        let base = side(values);
        let mut total = 0.0;
        let mut probe = values.to_vec();
        for (k, &err) in self.errors.iter().enumerate() {
            if err == 0.0 {
                continue;
            }
            let mut worst = 0.0f64;
            for delta in [err, -err] {
                probe[k] = values[k] + delta;
                let moved = side(&probe);
                if moved.is_finite() {
                    worst = worst.max((moved - base).abs());
                }
            }
            probe[k] = values[k];
            total += worst;
        }
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn report(
        &self,
        name: &str,
        relation: Relation,
        values: &[f64],
        lhs: impl Fn(&[f64]) -> f64,
        rhs: impl Fn(&[f64]) -> f64,
        digest: String,
    ) -> IneqReport {
        let extra = self.propagate(values, &lhs) + self.propagate(values, &rhs);
        IneqReport::new(name, relation, lhs(values), rhs(values), extra, self.converged, digest)
    }
}

/// Orientation of Jensen's inequality for `f` over the values it will be
/// applied to: convex `f` gives `<=`, concave `f` gives `>=`.
///
/// Without an explicit domain the values' range is widened by 1% on each
/// side, falling back to tighter widenings where `f` is undefined.
fn orientation(f: &TsFunction, values: &[f64], domain: Option<(f64, f64)>) -> Result<Relation, IneqError> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if let Some((c, d)) = domain {
        if !(c < lo && hi < d) {
            return Err(IneqError::RangeEscapes { lo, hi, c, d });
        }
        return shape_relation(convexity::check_convexity(f, c, d, convexity::DEFAULT_GRID)?.kind, c, d);
    }
    if lo == hi {
        // A constant argument makes both sides f(lo).
        return Ok(Relation::Le);
    }
    let span = hi - lo;
    let mut last = None;
    for widen in [0.01, 1e-4, 0.0] {
        let (c, d) = (lo - widen * span, hi + widen * span);
        match convexity::check_convexity(f, c, d, convexity::DEFAULT_GRID) {
            Ok(v) => return shape_relation(v.kind, c, d),
            Err(ConvexityError::Eval(e)) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(ConvexityError::Eval(last.expect("loop ran")).into())
}

fn shape_relation(kind: Shape, c: f64, d: f64) -> Result<Relation, IneqError> {
    match kind {
        Shape::Convex | Shape::Affine => Ok(Relation::Le),
        Shape::Concave => Ok(Relation::Ge),
        Shape::Neither => Err(IneqError::NotConvex { c, d }),
    }
}

/// `|h|` and its integral, which must clear `1e-12 (b - a) max |h|`.
fn weight(s: &Setting, h: &TsFunction, book: &mut Book) -> Result<(TsFunction, f64), IneqError> {
    let w = h.abs();
    let h_max = s.scan(&w)?.into_iter().fold(0.0f64, f64::max);
    let total = s.integral(&w, book)?;
    let floor = 1e-12 * (s.b - s.a) * h_max;
    if !(total > floor) {
        return Err(IneqError::WeightTooSmall { total, floor });
    }
    Ok((w, total))
}

fn nonneg(v: f64) -> bool {
    v >= 0.0
}

fn positive(v: f64) -> bool {
    v > 0.0
}
