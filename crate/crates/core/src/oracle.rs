//! Brute-force reference implementations for cross-checking the calculus.
//!
//! Nothing here calls into [`crate::calculus`] or [`crate::timescale`]: the
//! sums walk a plain slice of points and the quadrature is a fixed composite
//! Simpson rule, so a bug in the library cannot be mirrored here.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("points must be finite and strictly increasing")]
    BadPoints,
    #[error("endpoint {0} is not one of the points")]
    MissingEndpoint(f64),
    #[error("limits out of order: {a} > {b}")]
    Reversed { a: f64, b: f64 },
}

/// Strictly increasing finite points.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteScale {
    points: Vec<f64>,
}

impl DiscreteScale {
    pub fn new(points: Vec<f64>) -> Result<Self, OracleError> {
        let ok = !points.is_empty()
            && points.iter().all(|p| p.is_finite())
            && points.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(DiscreteScale { points })
        } else {
            Err(OracleError::BadPoints)
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    fn span(&self, a: f64, b: f64) -> Result<(usize, usize), OracleError> {
        let i = self.points.iter().position(|&p| p == a).ok_or(OracleError::MissingEndpoint(a))?;
        let j = self.points.iter().position(|&p| p == b).ok_or(OracleError::MissingEndpoint(b))?;
        if i > j {
            return Err(OracleError::Reversed { a, b });
        }
        Ok((i, j))
    }
}

/// `sum f(t_i) (t_{i+1} - t_i)` over `t_i` in `[a, b)`.
pub fn brute_delta_integral(s: &DiscreteScale, f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64, OracleError> {
    let (i, j) = s.span(a, b)?;
    let p = &s.points;
    let mut total = 0.0;
    for k in i..j {
        total += f(p[k]) * (p[k + 1] - p[k]);
    }
    Ok(total)
}

/// `sum f(t_i) (t_i - t_{i-1})` over `t_i` in `(a, b]`.
pub fn brute_nabla_integral(s: &DiscreteScale, f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64, OracleError> {
    let (i, j) = s.span(a, b)?;
    let p = &s.points;
    let mut total = 0.0;
    for k in i + 1..=j {
        total += f(p[k]) * (p[k] - p[k - 1]);
    }
    Ok(total)
}

pub fn brute_diamond_integral(
    s: &DiscreteScale,
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    alpha: f64,
) -> Result<f64, OracleError> {
    let d = brute_delta_integral(s, &f, a, b)?;
    let n = brute_nabla_integral(s, &f, a, b)?;
    Ok(alpha * d + (1.0 - alpha) * n)
}

const SIMPSON_PANELS: usize = 4096;

/// Composite Simpson's rule with a fixed 4096 panels.
pub fn reference_quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64, OracleError> {
    if a > b {
        return Err(OracleError::Reversed { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    let n = SIMPSON_PANELS;
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let x = a + h * i as f64;
        if i % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    Ok(h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even))
}
