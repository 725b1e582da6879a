use serde::Serialize;

use super::{digest, positive, weight, Book, IneqError, IneqReport, Relation, Setting};
use crate::calculus::{Alpha, TsFunction};

fn means(s: &Setting, g: &TsFunction, h: &TsFunction, mapped: &TsFunction) -> Result<(Book, [f64; 3]), IneqError> {
    s.require(g, "g", "positive", positive)?;
    let mut book = Book::new();
    let (w, total) = weight(s, h, &mut book)?;
    let wg = w.zip(g, "|h| g", |a, b| a * b);
    let wm = w.zip(mapped, "|h| m(g)", |a, b| a * b);
    let values = [total, s.integral(&wg, &mut book)?, s.integral(&wm, &mut book)?];
    Ok((book, values))
}

/// Power means: `(mean g)^beta` against `mean g^beta` with weight `|h|`;
/// at most for `beta < 0` or `beta > 1`, at least for `0 < beta < 1`.
pub fn power_mean(s: &Setting, beta: f64, g: &TsFunction, h: &TsFunction) -> Result<IneqReport, IneqError> {
    if !beta.is_finite() || beta == 0.0 || beta == 1.0 {
        return Err(IneqError::BadParameter(format!("power-mean exponent must be finite and not 0 or 1, got {beta}")));
    }
    let powered = g.then(format!("({})^{beta}", g.label()), move |v| Ok(v.powf(beta)));
    let (book, values) = means(s, g, h, &powered)?;
    let lhs = move |v: &[f64]| (v[1] / v[0]).powf(beta);
    let rhs = |v: &[f64]| v[2] / v[0];
    let relation = if beta > 0.0 && beta < 1.0 { Relation::Ge } else { Relation::Le };
    let digest = s.digest("power-mean", &[g, h], &[beta]);
    Ok(book.report("power-mean", relation, &values, lhs, rhs, digest))
}

/// `ln(mean g) >= mean ln g` with weight `|h|`.
pub fn log_mean(s: &Setting, g: &TsFunction, h: &TsFunction) -> Result<IneqReport, IneqError> {
    let logged = g.then(format!("ln({})", g.label()), |v| Ok(v.ln()));
    let (book, values) = means(s, g, h, &logged)?;
    let lhs = |v: &[f64]| (v[1] / v[0]).ln();
    let rhs = |v: &[f64]| v[2] / v[0];
    let digest = s.digest("log-mean", &[g, h], &[]);
    Ok(book.report("log-mean", Relation::Ge, &values, lhs, rhs, digest))
}

/// The exponentiated form `mean g >= exp(mean ln g)`.
pub fn log_mean_exp(s: &Setting, g: &TsFunction, h: &TsFunction) -> Result<IneqReport, IneqError> {
    let logged = g.then(format!("ln({})", g.label()), |v| Ok(v.ln()));
    let (book, values) = means(s, g, h, &logged)?;
    let lhs = |v: &[f64]| v[1] / v[0];
    let rhs = |v: &[f64]| (v[2] / v[0]).exp();
    let digest = s.digest("log-mean-exp", &[g, h], &[]);
    Ok(book.report("log-mean-exp", Relation::Ge, &values, lhs, rhs, digest))
}

fn check_positive(values: &[f64]) -> Result<(), IneqError> {
    for (k, &v) in values.iter().enumerate() {
        if !(v > 0.0) || !v.is_finite() {
            return Err(IneqError::Sign {
                which: "g",
                at: k as f64,
                value: v,
                need: "positive",
            });
        }
    }
    Ok(())
}

fn number_digest(name: &str, numbers: impl IntoIterator<Item = f64>) -> String {
    let parts: Vec<String> = std::iter::once(name.to_string())
        .chain(numbers.into_iter().map(|v| format!("{v:?}")))
        .collect();
    let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
    digest(&refs)
}

/// Weighted arithmetic-geometric mean inequality on `{1, ..., n+1}`, with
/// `values[t - 1] = g(t)`:
///
/// `(alpha sum_{1..n} g + (1 - alpha) sum_{2..n+1} g) / n
///   >= (prod_{1..n} g)^(alpha/n) (prod_{2..n+1} g)^((1-alpha)/n)`.
///
/// Products are formed as exponentials of log sums.
pub fn weighted_amgm(values: &[f64], alpha: Alpha) -> Result<IneqReport, IneqError> {
    if values.len() < 2 {
        return Err(IneqError::BadParameter(format!("need n + 1 >= 2 values, got {}", values.len())));
    }
    check_positive(values)?;
    let n = (values.len() - 1) as f64;
    let a = alpha.value();
    let head = &values[..values.len() - 1];
    let tail = &values[1..];
    let arith = (a * head.iter().sum::<f64>() + (1.0 - a) * tail.iter().sum::<f64>()) / n;
    let logs = |xs: &[f64]| xs.iter().map(|v| v.ln()).sum::<f64>();
    let geo = (a / n * logs(head) + (1.0 - a) / n * logs(tail)).exp();
    let digest = number_digest("amgm", std::iter::once(a).chain(values.iter().copied()));
    Ok(IneqReport::new("amgm", Relation::Ge, arith, geo, 0.0, true, digest))
}

/// The four sums behind the `2^N0` check, over `g_k = g(2^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pow2Sums {
    /// `sum_{k=0}^{N-1} 2^k g_k`, the delta integral over `[1, 2^N]`.
    pub delta: f64,
    /// `sum_{k=1}^{N} 2^(k-1) g_k`, the nabla integral over `[1, 2^N]`.
    pub nabla: f64,
    /// The same sums with `ln g_k` in place of `g_k`.
    pub delta_log: f64,
    pub nabla_log: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pow2Check {
    pub sums: Pow2Sums,
    pub general: IneqReport,
    pub alpha_one: IneqReport,
    pub alpha_zero: IneqReport,
}

/// Jensen with `f = -ln` on the scale `{1, 2, 4, ..., 2^N}`, `a = 1`,
/// `b = 2^N`: the weighted arithmetic mean of `g` dominates the weighted
/// geometric mean, with total weight `2^N - 1`. `values[k] = g(2^k)` for
/// `k = 0..=N`.
///
/// The graininess is `mu(2^k) = 2^k` forward and `nu(2^k) = 2^(k-1)`
/// backward, so the nabla sums carry weights `2^(k-1)`.
pub fn pow2_scale_check(n: u32, values: &[f64], alpha: Alpha) -> Result<Pow2Check, IneqError> {
    if !(1..=60).contains(&n) {
        return Err(IneqError::BadParameter(format!("N must be in 1..=60, got {n}")));
    }
    if values.len() != n as usize + 1 {
        return Err(IneqError::BadParameter(format!(
            "need N + 1 = {} values g(2^0..2^N), got {}",
            n + 1,
            values.len()
        )));
    }
    check_positive(values)?;
    let mut sums = Pow2Sums {
        delta: 0.0,
        nabla: 0.0,
        delta_log: 0.0,
        nabla_log: 0.0,
    };
    for (k, &g) in values.iter().enumerate().take(n as usize) {
        let mu = 2f64.powi(k as i32);
        sums.delta += g * mu;
        sums.delta_log += g.ln() * mu;
    }
    for (k, &g) in values.iter().enumerate().skip(1) {
        let nu = 2f64.powi(k as i32 - 1);
        sums.nabla += g * nu;
        sums.nabla_log += g.ln() * nu;
    }
    let total = 2f64.powi(n as i32) - 1.0;
    let digest_for = |name: &str, a: f64| number_digest(name, [f64::from(n), a].into_iter().chain(values.iter().copied()));
    let report = |name: &str, a: Alpha| {
        let lhs = a.blend(sums.delta, sums.nabla) / total;
        let rhs = (a.blend(sums.delta_log, sums.nabla_log) / total).exp();
        IneqReport::new(name, Relation::Ge, lhs, rhs, 0.0, true, digest_for(name, a.value()))
    };
    Ok(Pow2Check {
        sums,
        general: report("pow2", alpha),
        alpha_one: report("pow2-alpha1", Alpha::DELTA),
        alpha_zero: report("pow2-alpha0", Alpha::NABLA),
    })
}
