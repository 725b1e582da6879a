use serde::Serialize;

use super::{digest, orientation, weight, Book, IneqError, IneqReport, Setting};
use crate::calculus::TsFunction;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct JensenOptions {
    /// Open interval on which `f` is known to be convex or concave. When
    /// absent it is inferred from the sampled range of `g`.
    pub domain: Option<(f64, f64)>,
}

/// `f(mean of g) <= mean of f(g)` for convex `f`, means taken with the
/// diamond-alpha integral over `[a, b]_T`. Concave `f` reverses the relation.
pub fn jensen(s: &Setting, f: &TsFunction, g: &TsFunction, opts: JensenOptions) -> Result<IneqReport, IneqError> {
    weighted("jensen", s, f, g, &TsFunction::constant(1.0), opts)
}

/// Jensen's inequality with weight `|h|`:
/// `f(int |h| g / int |h|) <= int |h| f(g) / int |h|`.
pub fn jensen_weighted(
    s: &Setting,
    f: &TsFunction,
    g: &TsFunction,
    h: &TsFunction,
    opts: JensenOptions,
) -> Result<IneqReport, IneqError> {
    weighted("jensen-weighted", s, f, g, h, opts)
}

fn weighted(
    name: &str,
    s: &Setting,
    f: &TsFunction,
    g: &TsFunction,
    h: &TsFunction,
    opts: JensenOptions,
) -> Result<IneqReport, IneqError> {
    let relation = orientation(f, &s.scan(g)?, opts.domain)?;

    let mut book = Book::new();
    let (w, total) = weight(s, h, &mut book)?;
    let wg = w.zip(g, "|h| g", |a, b| a * b);
    let wfg = w.zip(&f.compose(g), "|h| f(g)", |a, b| a * b);
    let values = [total, s.integral(&wg, &mut book)?, s.integral(&wfg, &mut book)?];

    let outer = f.clone();
    let lhs = move |v: &[f64]| outer.eval(v[1] / v[0]).unwrap_or(f64::NAN);
    let rhs = |v: &[f64]| v[2] / v[0];
    if lhs(&values).is_nan() {
        f.eval(values[1] / values[0]).map_err(|e| IneqError::Calc(e.into()))?;
    }
    let digest = s.digest(name, &[f, g, h], &[]);
    Ok(book.report(name, relation, &values, lhs, rhs, digest))
}

/// Jensen's inequality on the integers with weights `|c_k|`:
/// `f(sum |c_k| x_k / sum |c_k|) <= sum |c_k| f(x_k) / sum |c_k|`.
pub fn jensen_discrete(c: &[f64], x: &[f64], f: &TsFunction) -> Result<IneqReport, IneqError> {
    if c.is_empty() || x.is_empty() {
        return Err(IneqError::BadParameter("weights and points must be nonempty".into()));
    }
    if c.len() != x.len() {
        return Err(IneqError::BadParameter(format!(
            "{} weights but {} points",
            c.len(),
            x.len()
        )));
    }
    let total: f64 = c.iter().map(|w| w.abs()).sum();
    if !(total > 0.0) {
        return Err(IneqError::WeightTooSmall { total, floor: 0.0 });
    }
    let relation = orientation(f, x, None)?;
    let mean: f64 = c.iter().zip(x).map(|(w, v)| w.abs() * v).sum::<f64>() / total;
    let mut acc = 0.0;
    for (w, &v) in c.iter().zip(x) {
        acc += w.abs() * f.eval(v).map_err(|e| IneqError::Calc(e.into()))?;
    }
    let lhs = f.eval(mean).map_err(|e| IneqError::Calc(e.into()))?;
    let rhs = acc / total;
    let numbers: Vec<String> = c.iter().chain(x).map(|v| format!("{v:?}")).collect();
    let mut parts = vec!["jensen-discrete", f.label()];
    parts.extend(numbers.iter().map(String::as_str));
    Ok(IneqReport::new("jensen-discrete", relation, lhs, rhs, 0.0, true, digest(&parts)))
}

/// The signed-weight data `c = (1, 5, -3)`, `x = (1, 1, 2)`, `f(x) = x^2`
/// on which Jensen's inequality with signed weights fails while the
/// absolute-weight form holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// `sum c_k`
    pub a: f64,
    /// `sum c_k x_k`
    pub b: f64,
    /// `sum c_k f(x_k)`
    pub c: f64,
    /// `f(B / A)`
    pub d: f64,
    /// `C / A`
    pub e: f64,
    pub signed_violated: bool,
    pub absolute: IneqReport,
}

pub fn signed_weights_counterexample() -> Counterexample {
    let weights = [1.0, 5.0, -3.0];
    let points = [1.0, 1.0, 2.0];
    let square = |v: f64| v * v;
    let a: f64 = weights.iter().sum();
    let b: f64 = weights.iter().zip(&points).map(|(w, x)| w * x).sum();
    let c: f64 = weights.iter().zip(&points).map(|(w, x)| w * square(*x)).sum();
    let d = square(b / a);
    let e = c / a;
    let f = TsFunction::new("x^2", square);
    let absolute = jensen_discrete(&weights, &points, &f).expect("fixed data is valid");
    Counterexample {
        a,
        b,
        c,
        d,
        e,
        signed_violated: d > e,
        absolute,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{Alpha, QuadConfig};
    use crate::inequalities::{Relation, Verdict};
    use crate::timescale::TimeScale;

    fn setting(points: &[f64], alpha: f64) -> Setting {
        let t = TimeScale::from_points(points.iter().copied()).unwrap();
        let (a, b) = (points[0], points[points.len() - 1]);
        Setting::new(t, a, b, Alpha::new(alpha).unwrap(), QuadConfig::default()).unwrap()
    }

    fn sq() -> TsFunction {
        TsFunction::new("x^2", |x| x * x)
    }

    fn id() -> TsFunction {
        TsFunction::new("x", |x| x)
    }

    #[test]
    fn three_point_example() {
        let r = jensen(&setting(&[1.0, 2.0, 3.0], 1.0), &sq(), &id(), JensenOptions::default()).unwrap();
        assert_eq!(r.lhs, 2.25);
        assert_eq!(r.rhs, 2.5);
        assert_eq!(r.margin, 0.25);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.relation, Relation::Le);
    }

    #[test]
    fn affine_outer_gives_zero_margin() {
        let lin = TsFunction::new("3x-1", |x| 3.0 * x - 1.0);
        let g = TsFunction::new("sin", f64::sin);
        for alpha in [0.0, 0.3, 1.0] {
            let r = jensen(&setting(&[0.0, 0.4, 1.1, 2.0, 2.5], alpha), &lin, &g, JensenOptions::default()).unwrap();
            assert!(r.margin.abs() < 1e-14, "{r:?}");
        }
        let unit = TimeScale::interval(0.0, 1.0).unwrap();
        let s = Setting::new(unit, 0.0, 1.0, Alpha::new(0.4).unwrap(), QuadConfig::default()).unwrap();
        let r = jensen(&s, &lin, &g, JensenOptions::default()).unwrap();
        assert!(r.margin.abs() < 1e-12 && r.holds());
    }

    #[test]
    fn unit_weight_matches_plain_jensen() {
        let s = setting(&[0.0, 0.5, 1.5, 2.0, 4.0], 0.3);
        let e = TsFunction::new("exp", f64::exp);
        let g = TsFunction::new("sin", f64::sin);
        let plain = jensen(&s, &e, &g, JensenOptions::default()).unwrap();
        let weighted = jensen_weighted(&s, &e, &g, &TsFunction::constant(1.0), JensenOptions::default()).unwrap();
        assert_eq!(plain.lhs.to_bits(), weighted.lhs.to_bits());
        assert_eq!(plain.rhs.to_bits(), weighted.rhs.to_bits());
    }

    #[test]
    fn weighted_three_point_example() {
        // alpha = 1/2 on {1,2,3}, h = g = t: int h = (1+2)/2 + (2+3)/2 = 4,
        // int h g = (1+4)/2 + (4+9)/2 = 9, int h g^2 = (1+8)/2 + (8+27)/2 = 22.
        let r = jensen_weighted(&setting(&[1.0, 2.0, 3.0], 0.5), &sq(), &id(), &id(), JensenOptions::default()).unwrap();
        assert_eq!(r.lhs, (9.0f64 / 4.0).powi(2));
        assert_eq!(r.rhs, 22.0 / 4.0);
        assert!(r.holds());
    }

    #[test]
    fn concave_outer_flips() {
        let ln = TsFunction::new("ln", f64::ln);
        let g = TsFunction::new("1+x", |x| 1.0 + x);
        let r = jensen_weighted(&setting(&[0.0, 1.0, 3.0, 4.0], 0.5), &ln, &g, &id(), JensenOptions::default()).unwrap();
        assert_eq!(r.relation, Relation::Ge);
        assert!(r.margin > 0.0 && r.holds());
    }

    #[test]
    fn jensen_errors() {
        let s = setting(&[0.0, 1.0, 2.0], 0.5);
        let wave = TsFunction::new("sin", f64::sin);
        let g = TsFunction::new("4x", |x| 4.0 * x);
        assert!(matches!(jensen(&s, &wave, &g, JensenOptions::default()), Err(IneqError::NotConvex { .. })));
        let opts = JensenOptions { domain: Some((0.5, 10.0)) };
        assert!(matches!(jensen(&s, &sq(), &g, opts), Err(IneqError::RangeEscapes { .. })));
        let zero = TsFunction::constant(0.0);
        assert!(matches!(
            jensen_weighted(&s, &sq(), &g, &zero, JensenOptions::default()),
            Err(IneqError::WeightTooSmall { .. })
        ));
        // |h| vanishes wherever it carries weight: t = 2 has no delta mass.
        let s1 = setting(&[0.0, 1.0, 2.0], 1.0);
        let spike = TsFunction::new("spike", |x| if x == 2.0 { 1.0 } else { 0.0 });
        assert!(matches!(
            jensen_weighted(&s1, &sq(), &g, &spike, JensenOptions::default()),
            Err(IneqError::WeightTooSmall { .. })
        ));
    }

    #[test]
    fn remark_data() {
        let cx = signed_weights_counterexample();
        assert_eq!((cx.a, cx.b, cx.c, cx.d, cx.e), (3.0, 0.0, -6.0, 0.0, -2.0));
        assert!(cx.signed_violated);
        assert!((cx.absolute.lhs - 16.0 / 9.0).abs() < 1e-15);
        assert_eq!(cx.absolute.rhs, 2.0);
        assert!((cx.absolute.margin - 2.0 / 9.0).abs() < 1e-15);
        assert!(cx.absolute.holds());
    }

    #[test]
    fn discrete_edge_cases() {
        let lin = TsFunction::new("2x", |x| 2.0 * x);
        let r = jensen_discrete(&[2.0, 2.0, 2.0], &[1.0, 4.0, 7.0], &lin).unwrap();
        assert_eq!(r.margin, 0.0);
        let r = jensen_discrete(&[3.0], &[5.0], &sq()).unwrap();
        assert_eq!(r.margin, 0.0);
        assert!(jensen_discrete(&[], &[], &sq()).is_err());
        assert!(jensen_discrete(&[1.0], &[1.0, 2.0], &sq()).is_err());
        assert!(matches!(jensen_discrete(&[0.0, 0.0], &[1.0, 2.0], &sq()), Err(IneqError::WeightTooSmall { .. })));
    }
}
