//! Delta, nabla and diamond-alpha derivatives and integrals.
//!
//! At scattered points derivatives are exact difference quotients. At dense
//! points they are Richardson-extrapolated finite differences taken inside
//! the containing interval component.
//!
//! Integrals decompose `[a, b]_T` into interval pieces, integrated by
//! adaptive quadrature, and point masses. Right-scattered points in
//! `[a, b)` carry `f(t) * mu(t)` in the delta integral. Left-scattered
//! points in `(a, b]` carry `f(t) * nu(t)` in the nabla integral. The right
//! end of an interval followed by a gap is right-scattered like any
//! isolated point, which keeps `int_a^c = int_a^b + int_b^c` exact across
//! component boundaries.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::Expr;
use crate::quad;
use crate::timescale::{Component, TimeScale, TimeScaleError};

/// Finite-difference estimates with an error above this (relative to
/// `1 + |value|`) are rejected.
const FD_ACCEPT: f64 = 1e-6;
const FD_MIN_STEP: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("evaluation failed at {at}: {message}")]
pub struct EvalError {
    pub at: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalcError {
    #[error(transparent)]
    TimeScale(#[from] TimeScaleError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{kind} derivative is not defined at {t}: {reason}")]
    NotAdmissible {
        kind: &'static str,
        t: f64,
        reason: &'static str,
    },
    #[error("difference quotient at {t} did not settle: estimate {estimate}, error {error:e}")]
    NonConvergent { t: f64, estimate: f64, error: f64 },
    #[error("quadrature missed its tolerance: estimate {estimate}, error {error:e}")]
    Quadrature { estimate: f64, error: f64 },
    #[error("reversed limits {a} > {b}")]
    Reversed { a: f64, b: f64 },
    #[error("alpha must lie in [0, 1], got {0}")]
    BadAlpha(f64),
    #[error("invalid quadrature configuration: {0}")]
    BadConfig(&'static str),
}

type Rule = dyn Fn(f64) -> Result<f64, String> + Send + Sync;

/// A real function on a time scale, assumed continuous where it is used.
#[derive(Clone)]
pub struct TsFunction {
    label: String,
    rule: Arc<Rule>,
}

impl fmt::Debug for TsFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("TsFunction").field(&self.label).finish()
    }
}

impl TsFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::fallible(label, move |x| Ok(f(x)))
    }

    pub fn fallible(
        label: impl Into<String>,
        f: impl Fn(f64) -> Result<f64, String> + Send + Sync + 'static,
    ) -> Self {
        TsFunction {
            label: label.into(),
            rule: Arc::new(f),
        }
    }

    pub fn from_expr(expr: Expr) -> Self {
        let label = expr.to_string();
        Self::fallible(label, move |x| expr.eval(x).map_err(|e| e.to_string()))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c:?}"), move |_| c)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = (self.rule)(x).map_err(|message| EvalError { at: x, message })?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError {
                at: x,
                message: format!("non-finite value {v}"),
            })
        }
    }

    /// `x -> outer(self(x))`.
    pub fn then(&self, label: impl Into<String>, outer: impl Fn(f64) -> Result<f64, String> + Send + Sync + 'static) -> Self {
        let inner = self.rule.clone();
        Self::fallible(label, move |x| outer(inner(x)?))
    }

    /// Pointwise combination of two functions.
    pub fn zip(
        &self,
        other: &TsFunction,
        label: impl Into<String>,
        op: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let (l, r) = (self.rule.clone(), other.rule.clone());
        Self::fallible(label, move |x| Ok(op(l(x)?, r(x)?)))
    }

    pub fn neg(&self) -> Self {
        self.then(format!("-({})", self.label), |v| Ok(-v))
    }

    pub fn abs(&self) -> Self {
        self.then(format!("abs({})", self.label), |v| Ok(v.abs()))
    }

    pub fn compose(&self, inner: &TsFunction) -> Self {
        let outer = self.rule.clone();
        inner.then(format!("({})∘({})", self.label, inner.label), move |v| outer(v))
    }
}

/// The diamond weight: 1 is the delta calculus, 0 the nabla calculus.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub const DELTA: Alpha = Alpha(1.0);
    pub const NABLA: Alpha = Alpha(0.0);

    pub fn new(value: f64) -> Result<Alpha, CalcError> {
        if (0.0..=1.0).contains(&value) {
            Ok(Alpha(value))
        } else {
            Err(CalcError::BadAlpha(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `alpha * delta + (1 - alpha) * nabla`.
    pub fn blend(self, delta: f64, nabla: f64) -> f64 {
        self.0 * delta + (1.0 - self.0) * nabla
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Base finite-difference step as a fraction of the component width.
    pub fd_base_step: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 50,
            fd_base_step: 1e-4,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<(), CalcError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(CalcError::BadConfig("tolerances must be positive"));
        }
        if self.max_depth < 1 {
            return Err(CalcError::BadConfig("max depth must be at least 1"));
        }
        if !(self.fd_base_step > 0.0) {
            return Err(CalcError::BadConfig("finite-difference step must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    /// Zero at scattered points, where the quotient is exact.
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Backward,
}

pub fn delta_derivative(ts: &TimeScale, f: &TsFunction, t: f64, cfg: &QuadConfig) -> Result<Derivative, CalcError> {
    let sigma = ts.sigma(t)?;
    if sigma > t {
        let value = (f.eval(sigma)? - f.eval(t)?) / (sigma - t);
        return Ok(Derivative { value, abs_error: 0.0 });
    }
    let k = ts.component_index(t).ok_or(TimeScaleError::NotMember(t))?;
    match ts.components()[k] {
        Component::Interval(lo, hi) => dense_derivative(f, t, lo, hi, cfg),
        Component::Point(_) => Err(CalcError::NotAdmissible {
            kind: "delta",
            t,
            reason: "left-scattered maximum",
        }),
    }
}

pub fn nabla_derivative(ts: &TimeScale, f: &TsFunction, t: f64, cfg: &QuadConfig) -> Result<Derivative, CalcError> {
    let rho = ts.rho(t)?;
    if rho < t {
        let value = (f.eval(t)? - f.eval(rho)?) / (t - rho);
        return Ok(Derivative { value, abs_error: 0.0 });
    }
    let k = ts.component_index(t).ok_or(TimeScaleError::NotMember(t))?;
    match ts.components()[k] {
        Component::Interval(lo, hi) => dense_derivative(f, t, lo, hi, cfg),
        Component::Point(_) => Err(CalcError::NotAdmissible {
            kind: "nabla",
            t,
            reason: "right-scattered minimum",
        }),
    }
}

pub fn diamond_derivative(
    ts: &TimeScale,
    f: &TsFunction,
    t: f64,
    alpha: Alpha,
    cfg: &QuadConfig,
) -> Result<Derivative, CalcError> {
    let d = delta_derivative(ts, f, t, cfg)?;
    let n = nabla_derivative(ts, f, t, cfg)?;
    Ok(Derivative {
        value: alpha.blend(d.value, n.value),
        abs_error: alpha.blend(d.abs_error, n.abs_error),
    })
}

/// Derivative at a point of the interval `[lo, hi]`, from difference
/// quotients that stay inside the interval. Central when there is room on
/// both sides, one-sided otherwise.
fn dense_derivative(f: &TsFunction, t: f64, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<Derivative, CalcError> {
    let base = (cfg.fd_base_step * (hi - lo)).max(FD_MIN_STEP);
    let (left, right) = (t - lo, hi - t);
    let (value, abs_error) = if left >= base && right >= base {
        central_richardson(f, t, base)?
    } else if left.min(right) >= 1e-3 * base {
        central_richardson(f, t, left.min(right))?
    } else if right >= left {
        one_sided_richardson(f, t, base.min(right), Direction::Forward)?
    } else {
        one_sided_richardson(f, t, base.min(left), Direction::Backward)?
    };
    if abs_error > FD_ACCEPT * (1.0 + value.abs()) {
        return Err(CalcError::NonConvergent {
            t,
            estimate: value,
            error: abs_error,
        });
    }
    Ok(Derivative { value, abs_error })
}

const LEVELS: usize = 3;

fn richardson(estimates: [f64; LEVELS], order: i32, step: i32) -> (f64, f64) {
    let mut table = [[0.0; LEVELS]; LEVELS];
    for i in 0..LEVELS {
        table[i][0] = estimates[i];
        for j in 1..=i {
            let factor = 2f64.powi(order + step * (j as i32 - 1));
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
        }
    }
    let best = table[LEVELS - 1][LEVELS - 1];
    (best, (best - table[LEVELS - 2][LEVELS - 2]).abs())
}

fn central_richardson(f: &TsFunction, t: f64, h: f64) -> Result<(f64, f64), EvalError> {
    let mut est = [0.0; LEVELS];
    for (i, e) in est.iter_mut().enumerate() {
        let step = h / f64::from(1u32 << i);
        *e = (f.eval(t + step)? - f.eval(t - step)?) / (2.0 * step);
    }
    Ok(richardson(est, 2, 2))
}

fn one_sided_richardson(f: &TsFunction, t: f64, h: f64, dir: Direction) -> Result<(f64, f64), EvalError> {
    let sign = match dir {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let ft = f.eval(t)?;
    let mut est = [0.0; LEVELS];
    for (i, e) in est.iter_mut().enumerate() {
        let step = sign * h / f64::from(1u32 << i);
        *e = (f.eval(t + step)? - ft) / step;
    }
    Ok(richardson(est, 1, 1))
}

/// Which integral to take.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Delta,
    Nabla,
    Diamond(Alpha),
}

impl Measure {
    pub fn name(&self) -> &'static str {
        match self {
            Measure::Delta => "delta",
            Measure::Nabla => "nabla",
            Measure::Diamond(_) => "diamond",
        }
    }
}

/// An integral value with its decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Bound on the quadrature error; zero on purely discrete ranges.
    pub abs_error: f64,
    /// Point-mass contributions summed (delta and nabla masses counted
    /// separately for the diamond integral).
    pub point_masses: usize,
    /// Interval pieces integrated by quadrature.
    pub intervals: usize,
    pub panels: usize,
    pub evaluations: usize,
    pub converged: bool,
}

struct Pieces {
    continuous: f64,
    error: f64,
    delta_mass: f64,
    nabla_mass: f64,
    delta_count: usize,
    nabla_count: usize,
    intervals: usize,
    panels: usize,
    evaluations: usize,
    converged: bool,
}

fn decompose(ts: &TimeScale, f: &TsFunction, a: f64, b: f64, cfg: &QuadConfig) -> Result<Pieces, CalcError> {
    cfg.validate()?;
    for x in [a, b] {
        if !ts.contains(x) {
            return Err(TimeScaleError::NotMember(x).into());
        }
    }
    if a > b {
        return Err(CalcError::Reversed { a, b });
    }
    let mut p = Pieces {
        continuous: 0.0,
        error: 0.0,
        delta_mass: 0.0,
        nabla_mass: 0.0,
        delta_count: 0,
        nabla_count: 0,
        intervals: 0,
        panels: 0,
        evaluations: 0,
        converged: true,
    };
    if a == b {
        return Ok(p);
    }
    let comps = ts.components();
    let first = comps.partition_point(|c| c.end() < a);
    for k in first..comps.len() {
        let c = comps[k];
        if c.start() > b {
            break;
        }
        let start = c.start();
        if k > 0 && start > a && start <= b {
            let nu = start - comps[k - 1].end();
            p.nabla_mass += f.eval(start)? * nu;
            p.nabla_count += 1;
        }
        if let Component::Interval(lo, hi) = c {
            let (lo, hi) = (lo.max(a), hi.min(b));
            if lo < hi {
                let q = quad::adaptive(|x| f.eval(x), lo, hi, cfg.abs_tol, cfg.rel_tol, cfg.max_depth)?;
                p.continuous += q.value;
                p.error += q.abs_error;
                p.intervals += 1;
                p.panels += q.panels;
                p.evaluations += q.evaluations;
                p.converged &= q.converged;
            }
        }
        let end = c.end();
        if let Some(next) = comps.get(k + 1) {
            if end >= a && end < b {
                let mu = next.start() - end;
                p.delta_mass += f.eval(end)? * mu;
                p.delta_count += 1;
            }
        }
    }
    Ok(p)
}

/// Integral over `[a, b]_T` without the convergence check: an integral whose
/// quadrature missed its tolerance comes back with `converged == false`.
pub fn integrate(
    ts: &TimeScale,
    f: &TsFunction,
    a: f64,
    b: f64,
    measure: Measure,
    cfg: &QuadConfig,
) -> Result<Integral, CalcError> {
    let p = decompose(ts, f, a, b, cfg)?;
    let delta = p.continuous + p.delta_mass;
    let nabla = p.continuous + p.nabla_mass;
    let (value, point_masses) = match measure {
        Measure::Delta => (delta, p.delta_count),
        Measure::Nabla => (nabla, p.nabla_count),
        Measure::Diamond(alpha) => (alpha.blend(delta, nabla), p.delta_count + p.nabla_count),
    };
    Ok(Integral {
        value,
        abs_error: p.error,
        point_masses,
        intervals: p.intervals,
        panels: p.panels,
        evaluations: p.evaluations,
        converged: p.converged,
    })
}

fn checked(r: Integral) -> Result<Integral, CalcError> {
    if r.converged {
        Ok(r)
    } else {
        Err(CalcError::Quadrature {
            estimate: r.value,
            error: r.abs_error,
        })
    }
}

pub fn delta_integral(ts: &TimeScale, f: &TsFunction, a: f64, b: f64, cfg: &QuadConfig) -> Result<Integral, CalcError> {
    checked(integrate(ts, f, a, b, Measure::Delta, cfg)?)
}

pub fn nabla_integral(ts: &TimeScale, f: &TsFunction, a: f64, b: f64, cfg: &QuadConfig) -> Result<Integral, CalcError> {
    checked(integrate(ts, f, a, b, Measure::Nabla, cfg)?)
}

pub fn diamond_integral(
    ts: &TimeScale,
    f: &TsFunction,
    a: f64,
    b: f64,
    alpha: Alpha,
    cfg: &QuadConfig,
) -> Result<Integral, CalcError> {
    checked(integrate(ts, f, a, b, Measure::Diamond(alpha), cfg)?)
}

/// `t -> int_a^t f`, defined for `t` in the scale with `t >= a`.
pub fn running_integral(ts: &TimeScale, f: &TsFunction, a: f64, measure: Measure, cfg: &QuadConfig) -> TsFunction {
    let (ts, f, cfg) = (ts.clone(), f.clone(), *cfg);
    let label = format!("int_{a}^x {} {}", f.label(), measure.name());
    TsFunction::fallible(label, move |t| {
        let r = integrate(&ts, &f, a, t, measure, &cfg).map_err(|e| e.to_string())?;
        checked(r).map(|r| r.value).map_err(|e| e.to_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timescale::Component::{Interval, Point};

    fn pts(p: &[f64]) -> TimeScale {
        TimeScale::from_points(p.iter().copied()).unwrap()
    }

    fn sq() -> TsFunction {
        TsFunction::new("x^2", |x| x * x)
    }

    fn id() -> TsFunction {
        TsFunction::new("x", |x| x)
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    fn alpha(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn scattered_derivatives_are_exact_quotients() {
        let t = pts(&[0.0, 1.0, 2.0]);
        assert_eq!(delta_derivative(&t, &sq(), 0.0, &cfg()).unwrap().value, 1.0);
        assert_eq!(nabla_derivative(&t, &sq(), 2.0, &cfg()).unwrap().value, 3.0);
        assert_eq!(delta_derivative(&t, &sq(), 1.0, &cfg()).unwrap().abs_error, 0.0);
    }

    #[test]
    fn dense_derivatives() {
        let unit = TimeScale::interval(0.0, 1.0).unwrap();
        let d = delta_derivative(&unit, &sq(), 0.5, &cfg()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-9, "{d:?}");
        for t in [0.0, 0.3, 0.999_999_99, 1.0] {
            let n = nabla_derivative(&unit, &id(), t, &cfg()).unwrap();
            assert!((n.value - 1.0).abs() < 1e-9, "t={t} {n:?}");
        }
        let e = TsFunction::new("exp", f64::exp);
        for t in [0.0, 0.5, 1.0] {
            let d = delta_derivative(&unit, &e, t, &cfg()).unwrap();
            assert!((d.value - t.exp()).abs() < 1e-8 * t.exp(), "t={t} {d:?}");
        }
    }

    #[test]
    fn boundary_admissibility() {
        let t = pts(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            delta_derivative(&t, &sq(), 2.0, &cfg()),
            Err(CalcError::NotAdmissible { kind: "delta", .. })
        ));
        assert!(matches!(
            nabla_derivative(&t, &sq(), 0.0, &cfg()),
            Err(CalcError::NotAdmissible { kind: "nabla", .. })
        ));
        assert!(diamond_derivative(&t, &sq(), 0.0, alpha(0.5), &cfg()).is_err());
        assert!(matches!(
            delta_derivative(&t, &sq(), 0.5, &cfg()),
            Err(CalcError::TimeScale(TimeScaleError::NotMember(_)))
        ));
        // A left-dense maximum keeps its one-sided delta derivative.
        let unit = TimeScale::interval(0.0, 1.0).unwrap();
        assert!((delta_derivative(&unit, &sq(), 1.0, &cfg()).unwrap().value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn non_differentiable_point_is_reported() {
        let unit = TimeScale::interval(-1.0, 1.0).unwrap();
        let jump = TsFunction::new("step", |x| if x > 0.0 { 1.0 } else { 0.0 });
        assert!(matches!(
            delta_derivative(&unit, &jump, 0.0, &cfg()),
            Err(CalcError::NonConvergent { .. })
        ));
    }

    #[test]
    fn diamond_endpoints() {
        let t = TimeScale::new([Interval(0.0, 1.0), Point(2.0), Interval(3.0, 4.0)]).unwrap();
        for x in [0.5, 1.0, 3.0, 3.5] {
            let d = delta_derivative(&t, &sq(), x, &cfg()).unwrap();
            let n = nabla_derivative(&t, &sq(), x, &cfg()).unwrap();
            assert_eq!(diamond_derivative(&t, &sq(), x, Alpha::DELTA, &cfg()).unwrap().value, d.value);
            assert_eq!(diamond_derivative(&t, &sq(), x, Alpha::NABLA, &cfg()).unwrap().value, n.value);
        }
    }

    #[test]
    fn example_running_integral_derivatives() {
        let t = pts(&[0.0, 1.0, 2.0]);
        for a in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let al = alpha(a);
            let big_f = running_integral(&t, &sq(), 0.0, Measure::Diamond(al), &cfg());
            assert!((big_f.eval(1.0).unwrap() - (1.0 - a)).abs() < 1e-15);
            assert!((big_f.eval(2.0).unwrap() - (5.0 - 4.0 * a)).abs() < 1e-14);
            let d = delta_derivative(&t, &big_f, 1.0, &cfg()).unwrap().value;
            let n = nabla_derivative(&t, &big_f, 1.0, &cfg()).unwrap().value;
            assert!((d - (4.0 - 3.0 * a)).abs() < 1e-14);
            assert!((n - (1.0 - a)).abs() < 1e-15);
            let dd = diamond_derivative(&t, &big_f, 1.0, al, &cfg()).unwrap().value;
            assert!((dd - (1.0 + 2.0 * a * (1.0 - a))).abs() < 1e-14);
        }
    }

    #[test]
    fn discrete_integrals() {
        let z4 = pts(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(delta_integral(&z4, &id(), 0.0, 3.0, &cfg()).unwrap().value, 3.0);
        assert_eq!(nabla_integral(&z4, &id(), 0.0, 3.0, &cfg()).unwrap().value, 6.0);
        let z3 = pts(&[0.0, 1.0, 2.0]);
        assert_eq!(delta_integral(&z3, &sq(), 0.0, 2.0, &cfg()).unwrap().value, 1.0);
        assert_eq!(nabla_integral(&z3, &sq(), 0.0, 2.0, &cfg()).unwrap().value, 5.0);
        let d = diamond_integral(&z3, &sq(), 0.0, 2.0, alpha(0.5), &cfg()).unwrap();
        assert_eq!(d.value, 3.0);
        assert_eq!(d.point_masses, 4);
        assert_eq!(d.abs_error, 0.0);
        assert_eq!(
            diamond_integral(&z3, &sq(), 0.0, 2.0, Alpha::DELTA, &cfg()).unwrap().value,
            delta_integral(&z3, &sq(), 0.0, 2.0, &cfg()).unwrap().value
        );
        assert_eq!(delta_integral(&z3, &sq(), 1.0, 1.0, &cfg()).unwrap().value, 0.0);
    }

    #[test]
    fn continuous_integrals() {
        let unit = TimeScale::interval(0.0, 1.0).unwrap();
        let one = TsFunction::constant(1.0);
        assert!((delta_integral(&unit, &one, 0.0, 1.0, &cfg()).unwrap().value - 1.0).abs() < 1e-15);
        assert!((nabla_integral(&unit, &one, 0.0, 1.0, &cfg()).unwrap().value - 1.0).abs() < 1e-15);
        let e = TsFunction::new("exp", f64::exp);
        let vals: Vec<f64> = [0.0, 0.3, 0.7, 1.0]
            .iter()
            .map(|&a| diamond_integral(&unit, &e, 0.0, 1.0, alpha(a), &cfg()).unwrap().value)
            .collect();
        for v in &vals {
            assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn mixed_scale_masses() {
        // [0,1] ∪ {2} ∪ [3,4] with f = 1: delta masses at 1 (mu=1) and 2 (mu=1).
        let t = TimeScale::new([Interval(0.0, 1.0), Point(2.0), Interval(3.0, 4.0)]).unwrap();
        let one = TsFunction::constant(1.0);
        let d = delta_integral(&t, &one, 0.0, 4.0, &cfg()).unwrap();
        assert!((d.value - 4.0).abs() < 1e-14);
        assert_eq!(d.point_masses, 2);
        assert_eq!(d.intervals, 2);
        let d = delta_integral(&t, &id(), 0.0, 4.0, &cfg()).unwrap();
        assert!((d.value - (0.5 + 1.0 + 2.0 + 3.5)).abs() < 1e-13);
        let n = nabla_integral(&t, &id(), 0.0, 4.0, &cfg()).unwrap();
        assert!((n.value - (0.5 + 2.0 + 3.0 + 3.5)).abs() < 1e-13);
        // Right end of [0,1] is left out of int_0^1 and counted in int_1^2.
        assert!((delta_integral(&t, &id(), 0.0, 1.0, &cfg()).unwrap().value - 0.5).abs() < 1e-14);
        assert_eq!(delta_integral(&t, &id(), 1.0, 2.0, &cfg()).unwrap().value, 1.0);
        assert_eq!(nabla_integral(&t, &id(), 1.0, 2.0, &cfg()).unwrap().value, 2.0);
        assert!((nabla_integral(&t, &id(), 2.0, 4.0, &cfg()).unwrap().value - 6.5).abs() < 1e-13);
    }

    #[test]
    fn integral_errors() {
        let z3 = pts(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            delta_integral(&z3, &sq(), 2.0, 0.0, &cfg()),
            Err(CalcError::Reversed { .. })
        ));
        assert!(matches!(
            delta_integral(&z3, &sq(), 0.5, 2.0, &cfg()),
            Err(CalcError::TimeScale(TimeScaleError::NotMember(_)))
        ));
        let unit = TimeScale::interval(0.0, 1.0).unwrap();
        let wild = TsFunction::new("wild", |x: f64| (1.0 / x.max(1e-300)).sin() / x.max(1e-300).sqrt());
        let tight = QuadConfig {
            max_depth: 4,
            ..cfg()
        };
        assert!(matches!(
            delta_integral(&unit, &wild, 0.0, 1.0, &tight),
            Err(CalcError::Quadrature { .. })
        ));
        let r = integrate(&unit, &wild, 0.0, 1.0, Measure::Delta, &tight).unwrap();
        assert!(!r.converged);
        let bad = TsFunction::fallible("half", |x: f64| if x < 0.5 { Ok(x) } else { Err("outside".into()) });
        assert!(matches!(
            delta_integral(&unit, &bad, 0.0, 1.0, &cfg()),
            Err(CalcError::Eval(_))
        ));
        assert!(Alpha::new(1.5).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        let bad_cfg = QuadConfig { abs_tol: 0.0, ..cfg() };
        assert!(matches!(
            delta_integral(&unit, &sq(), 0.0, 1.0, &bad_cfg),
            Err(CalcError::BadConfig(_))
        ));
    }
}
