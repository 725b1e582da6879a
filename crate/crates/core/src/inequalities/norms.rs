use super::{nonneg, Book, IneqError, IneqReport, Relation, Setting};
use crate::calculus::TsFunction;

fn product(label: &str, fs: &[&TsFunction]) -> TsFunction {
    let first = fs[0].clone();
    fs[1..].iter().fold(first, |acc, f| acc.zip(f, label, |a, b| a * b))
}

fn power(f: &TsFunction, p: f64) -> TsFunction {
    f.then(format!("({})^{p}", f.label()), move |v| Ok(v.powf(p)))
}

/// Hölder: `int h f g <= (int h f^p)^(1/p) (int h g^q)^(1/q)` with
/// `q = p / (p - 1)`, for nonnegative `f`, `g`, `h` and `p > 1`.
pub fn holder(s: &Setting, f: &TsFunction, g: &TsFunction, h: &TsFunction, p: f64) -> Result<IneqReport, IneqError> {
    holder_named("holder", s, f, g, h, p)
}

fn holder_named(
    name: &str,
    s: &Setting,
    f: &TsFunction,
    g: &TsFunction,
    h: &TsFunction,
    p: f64,
) -> Result<IneqReport, IneqError> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(IneqError::BadParameter(format!("Hölder exponent must exceed 1, got {p}")));
    }
    let q = p / (p - 1.0);
    s.require(f, "f", "nonnegative", nonneg)?;
    s.require(g, "g", "nonnegative", nonneg)?;
    s.require(h, "h", "nonnegative", nonneg)?;

    let mut book = Book::new();
    let values = [
        s.integral(&product("h f g", &[h, f, g]), &mut book)?,
        s.integral(&product("h f^p", &[h, &power(f, p)]), &mut book)?,
        s.integral(&product("h g^q", &[h, &power(g, q)]), &mut book)?,
    ];
    let lhs = |v: &[f64]| v[0];
    let rhs = move |v: &[f64]| v[1].max(0.0).powf(1.0 / p) * v[2].max(0.0).powf(1.0 / q);
    let digest = s.digest(name, &[f, g, h], &[p]);
    Ok(book.report(name, Relation::Le, &values, lhs, rhs, digest))
}

/// Cauchy-Schwarz: `int |f g| <= (int f^2)^(1/2) (int g^2)^(1/2)`.
pub fn cauchy_schwarz(s: &Setting, f: &TsFunction, g: &TsFunction) -> Result<IneqReport, IneqError> {
    holder_named("cauchy-schwarz", s, &f.abs(), &g.abs(), &TsFunction::constant(1.0), 2.0)
}

/// Minkowski: `(int |f+g|^p)^(1/p) <= (int |f|^p)^(1/p) + (int |g|^p)^(1/p)`.
pub fn minkowski(s: &Setting, p: f64, f: &TsFunction, g: &TsFunction) -> Result<IneqReport, IneqError> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(IneqError::BadParameter(format!("Minkowski exponent must exceed 1, got {p}")));
    }
    let sum = f.zip(g, "|f+g|", |a, b| (a + b).abs());
    let mut book = Book::new();
    let values = [
        s.integral(&power(&sum, p), &mut book)?,
        s.integral(&power(&f.abs(), p), &mut book)?,
        s.integral(&power(&g.abs(), p), &mut book)?,
    ];
    let root = move |v: f64| v.max(0.0).powf(1.0 / p);
    let lhs = move |v: &[f64]| root(v[0]);
    let rhs = move |v: &[f64]| root(v[1]) + root(v[2]);
    let digest = s.digest("minkowski", &[f, g], &[p]);
    Ok(book.report("minkowski", Relation::Le, &values, lhs, rhs, digest))
}

/// `{(int h f)^p + (int h g)^p}^(1/p)` against `int h (f^p + g^p)^(1/p)`:
/// at most for `p > 1`, at least for `0 < p < 1`.
pub fn power_sum(s: &Setting, p: f64, f: &TsFunction, g: &TsFunction, h: &TsFunction) -> Result<IneqReport, IneqError> {
    if !(p > 0.0) || p == 1.0 || !p.is_finite() {
        return Err(IneqError::BadParameter(format!("power-sum exponent must be positive and not 1, got {p}")));
    }
    s.require(f, "f", "nonnegative", nonneg)?;
    s.require(g, "g", "nonnegative", nonneg)?;
    s.require(h, "h", "nonnegative", nonneg)?;
    let blend = f.zip(g, "(f^p+g^p)^(1/p)", move |a, b| (a.powf(p) + b.powf(p)).powf(1.0 / p));

    let mut book = Book::new();
    let values = [
        s.integral(&product("h f", &[h, f]), &mut book)?,
        s.integral(&product("h g", &[h, g]), &mut book)?,
        s.integral(&product("h (f^p+g^p)^(1/p)", &[h, &blend]), &mut book)?,
    ];
    let lhs = move |v: &[f64]| (v[0].max(0.0).powf(p) + v[1].max(0.0).powf(p)).powf(1.0 / p);
    let rhs = |v: &[f64]| v[2];
    let relation = if p > 1.0 { Relation::Le } else { Relation::Ge };
    let digest = s.digest("power-sum", &[f, g, h], &[p]);
    Ok(book.report("power-sum", relation, &values, lhs, rhs, digest))
}
