//! Sampled convexity checks and support-line slopes.
//!
//! Convexity is judged by midpoint convexity on a grid, which needs no
//! smoothness: `f((x + y) / 2) <= (f(x) + f(y)) / 2` for every pair of grid
//! points, up to a tolerance scaled by the largest `|f|` seen.

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{EvalError, TsFunction};

pub const DEFAULT_GRID: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvexityError {
    #[error("need c < d, got ({c}, {d})")]
    BadInterval { c: f64, d: f64 },
    #[error("need at least 3 grid points, got {0}")]
    GridTooSmall(usize),
    #[error("{t} is not inside ({c}, {d})")]
    PointOutside { t: f64, c: f64, d: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("function is not convex on ({c}, {d}): support line misses by {violation:e}")]
    NotConvex { c: f64, d: f64, violation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    Convex,
    Concave,
    Affine,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityVerdict {
    pub kind: Shape,
    /// Largest signed midpoint violation of the reported shape: at most the
    /// tolerance for Convex/Concave/Affine, above it for Neither.
    pub worst_violation: f64,
    pub tol: f64,
    pub samples: usize,
}

fn grid(c: f64, d: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| c + (d - c) * i as f64 / (n + 1) as f64).collect()
}

/// Classifies `f` on the open interval `(c, d)` from an `n`-point interior
/// grid.
pub fn check_convexity(f: &TsFunction, c: f64, d: f64, n: usize) -> Result<ConvexityVerdict, ConvexityError> {
    if !(c < d) {
        return Err(ConvexityError::BadInterval { c, d });
    }
    if n < 3 {
        return Err(ConvexityError::GridTooSmall(n));
    }
    let xs = grid(c, d, n);
    let fx = xs.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>, _>>()?;
    let mut scale = fx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // Positive where convexity fails, negative where concavity fails.
    let mut convex_gap = f64::NEG_INFINITY;
    let mut concave_gap = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let mid = f.eval(0.5 * (xs[i] + xs[j]))?;
            scale = scale.max(mid.abs());
            let v = mid - 0.5 * (fx[i] + fx[j]);
            convex_gap = convex_gap.max(v);
            concave_gap = concave_gap.max(-v);
        }
    }
    let tol = 1e-9 * (1.0 + scale);
    let (kind, worst_violation) = match (convex_gap <= tol, concave_gap <= tol) {
        (true, true) => (Shape::Affine, convex_gap.max(concave_gap)),
        (true, false) => (Shape::Convex, convex_gap),
        (false, true) => (Shape::Concave, concave_gap),
        (false, false) => (Shape::Neither, convex_gap.min(concave_gap)),
    };
    Ok(ConvexityVerdict {
        kind,
        worst_violation,
        tol,
        samples: n,
    })
}

/// Slope of a support line of the convex `f` at `t`: the midpoint of the
/// one-sided derivatives, validated against `f(x) - f(t) >= a (x - t)` on a
/// grid over `(c, d)`.
pub fn support_slope(f: &TsFunction, t: f64, c: f64, d: f64) -> Result<f64, ConvexityError> {
    if !(c < d) {
        return Err(ConvexityError::BadInterval { c, d });
    }
    if !(c < t && t < d) {
        return Err(ConvexityError::PointOutside { t, c, d });
    }
    let room = (t - c).min(d - t);
    let h = (1e-4 * (d - c)).max(1e-7).min(0.5 * room);
    let ft = f.eval(t)?;
    let right = one_sided(|s| f.eval(t + s), ft, h)?;
    let left = one_sided(|s| f.eval(t - s), ft, h)?;
    // one_sided(t - s) estimates the derivative of s -> f(t - s), i.e. -f'(t-).
    let slope = 0.5 * (right.0 - left.0);
    let slope_err = 0.5 * (right.1 + left.1);

    let xs = grid(c, d, DEFAULT_GRID);
    let fx = xs.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>, _>>()?;
    let scale = fx.iter().fold(ft.abs(), |m, v| m.max(v.abs()));
    let tol = 1e-9 * (1.0 + scale);
    let mut worst = 0.0f64;
    for (&x, &v) in xs.iter().zip(&fx) {
        let gap = v - ft - slope * (x - t) + slope_err * (x - t).abs() + tol;
        worst = worst.min(gap);
    }
    if worst < 0.0 {
        return Err(ConvexityError::NotConvex { c, d, violation: -worst });
    }
    Ok(slope)
}

/// Richardson-extrapolated forward difference `(g(s) - g(0)) / s` as `s -> 0+`.
fn one_sided(g: impl Fn(f64) -> Result<f64, EvalError>, g0: f64, h: f64) -> Result<(f64, f64), EvalError> {
    let d = |s: f64| -> Result<f64, EvalError> { Ok((g(s)? - g0) / s) };
    let (d1, d2, d3) = (d(h)?, d(h / 2.0)?, d(h / 4.0)?);
    let r21 = 2.0 * d2 - d1;
    let r31 = 2.0 * d3 - d2;
    let r32 = r31 + (r31 - r21) / 3.0;
    Ok((r32, (r32 - r21).abs()))
}
