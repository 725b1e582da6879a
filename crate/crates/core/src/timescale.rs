//! Bounded time scales built from finitely many closed intervals and isolated
//! points, together with the jump operators, graininess and point
//! classification.
//!
//! A [`TimeScale`] is always stored in canonical form: components sorted by
//! position, pairwise disjoint and separated by a strictly positive gap.
//! Membership and jump queries are binary searches over the components and
//! compare endpoints exactly.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimeScaleError {
    #[error("a time scale needs at least one component")]
    Empty,
    #[error("non-finite endpoint {0}")]
    NonFinite(f64),
    #[error("interval [{lo}, {hi}] is empty or degenerate (need lo < hi)")]
    BadInterval { lo: f64, hi: f64 },
    #[error("{0} is not a point of the time scale")]
    NotMember(f64),
    #[error("interval endpoints out of order: {a} > {b}")]
    Reversed { a: f64, b: f64 },
}

/// One connected piece of a time scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Interval(f64, f64),
    Point(f64),
}

impl Component {
    pub fn start(&self) -> f64 {
        match *self {
            Component::Interval(lo, _) => lo,
            Component::Point(x) => x,
        }
    }

    pub fn end(&self) -> f64 {
        match *self {
            Component::Interval(_, hi) => hi,
            Component::Point(x) => x,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start() <= t && t <= self.end()
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, Component::Interval(..))
    }
}

/// Whether a side of a point is dense or scattered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Dense,
    Scattered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClass {
    pub right: Side,
    pub left: Side,
}

impl PointClass {
    pub fn is_isolated(&self) -> bool {
        self.left == Side::Scattered && self.right == Side::Scattered
    }

    pub fn is_dense(&self) -> bool {
        self.left == Side::Dense && self.right == Side::Dense
    }

    pub fn is_right_scattered(&self) -> bool {
        self.right == Side::Scattered
    }

    pub fn is_left_scattered(&self) -> bool {
        self.left == Side::Scattered
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_isolated() {
            f.write_str("isolated")
        } else if self.is_dense() {
            f.write_str("dense")
        } else if self.is_right_scattered() {
            f.write_str("left-dense, right-scattered")
        } else {
            f.write_str("left-scattered, right-dense")
        }
    }
}

#[derive(Deserialize)]
struct RawTimeScale {
    components: Vec<Component>,
}

/// A nonempty bounded closed subset of the reals with finitely many
/// components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTimeScale")]
pub struct TimeScale {
    components: Vec<Component>,
}

impl TryFrom<RawTimeScale> for TimeScale {
    type Error = TimeScaleError;

    fn try_from(raw: RawTimeScale) -> Result<Self, Self::Error> {
        TimeScale::new(raw.components)
    }
}

impl TimeScale {
    /// Canonicalizes `components`: sorts them, absorbs points lying inside
    /// intervals, merges touching or overlapping intervals and drops
    /// duplicate points.
    pub fn new(components: impl IntoIterator<Item = Component>) -> Result<Self, TimeScaleError> {
        let mut parts: Vec<Component> = components.into_iter().collect();
        if parts.is_empty() {
            return Err(TimeScaleError::Empty);
        }
        for c in &parts {
            for x in [c.start(), c.end()] {
                if !x.is_finite() {
                    return Err(TimeScaleError::NonFinite(x));
                }
            }
            if let Component::Interval(lo, hi) = *c {
                if lo >= hi {
                    return Err(TimeScaleError::BadInterval { lo, hi });
                }
            }
        }
        parts.sort_by(|x, y| x.start().total_cmp(&y.start()).then(x.end().total_cmp(&y.end())));

        let mut merged: Vec<Component> = Vec::with_capacity(parts.len());
        for c in parts {
            match merged.last_mut() {
                Some(last) if c.start() <= last.end() => {
                    let lo = last.start();
                    let hi = last.end().max(c.end());
                    *last = if lo < hi {
                        Component::Interval(lo, hi)
                    } else {
                        Component::Point(lo)
                    };
                }
                _ => merged.push(c),
            }
        }
        Ok(TimeScale { components: merged })
    }

    /// A purely discrete scale from a list of points.
    pub fn from_points(points: impl IntoIterator<Item = f64>) -> Result<Self, TimeScaleError> {
        Self::new(points.into_iter().map(Component::Point))
    }

    /// The closed real interval `[lo, hi]`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self, TimeScaleError> {
        Self::new([Component::Interval(lo, hi)])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn min(&self) -> f64 {
        self.components[0].start()
    }

    pub fn max(&self) -> f64 {
        self.components[self.components.len() - 1].end()
    }

    /// True when every component is an isolated point.
    pub fn is_discrete(&self) -> bool {
        self.components.iter().all(|c| !c.is_interval())
    }

    /// The points of a discrete scale, or the endpoints and isolated points
    /// otherwise.
    pub fn scattered_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for c in &self.components {
            match *c {
                Component::Point(x) => out.push(x),
                Component::Interval(lo, hi) => {
                    out.push(lo);
                    out.push(hi);
                }
            }
        }
        out
    }

    /// Index of the component containing `t`.
    pub fn component_index(&self, t: f64) -> Option<usize> {
        if t.is_nan() {
            return None;
        }
        let idx = self.components.partition_point(|c| c.start() <= t);
        if idx == 0 {
            return None;
        }
        let k = idx - 1;
        self.components[k].contains(t).then_some(k)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.component_index(t).is_some()
    }

    fn locate(&self, t: f64) -> Result<usize, TimeScaleError> {
        self.component_index(t).ok_or(TimeScaleError::NotMember(t))
    }

    /// Forward jump: the smallest point of the scale strictly above `t`, or
    /// `t` itself at the maximum.
    pub fn sigma(&self, t: f64) -> Result<f64, TimeScaleError> {
        let k = self.locate(t)?;
        let c = self.components[k];
        if t < c.end() {
            return Ok(t);
        }
        Ok(self.components.get(k + 1).map_or(t, Component::start))
    }

    /// Backward jump: the largest point of the scale strictly below `t`, or
    /// `t` itself at the minimum.
    pub fn rho(&self, t: f64) -> Result<f64, TimeScaleError> {
        let k = self.locate(t)?;
        let c = self.components[k];
        if t > c.start() {
            return Ok(t);
        }
        Ok(if k == 0 { t } else { self.components[k - 1].end() })
    }

    /// Forward graininess `sigma(t) - t`.
    pub fn mu(&self, t: f64) -> Result<f64, TimeScaleError> {
        Ok(self.sigma(t)? - t)
    }

    /// Backward graininess `t - rho(t)`.
    pub fn nu(&self, t: f64) -> Result<f64, TimeScaleError> {
        Ok(t - self.rho(t)?)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass, TimeScaleError> {
        let side = |scattered: bool| if scattered { Side::Scattered } else { Side::Dense };
        Ok(PointClass {
            right: side(self.sigma(t)? > t),
            left: side(self.rho(t)? < t),
        })
    }

    /// The time-scale interval `[a, b]_T`.
    pub fn restrict(&self, a: f64, b: f64) -> Result<TsInterval, TimeScaleError> {
        if !self.contains(a) {
            return Err(TimeScaleError::NotMember(a));
        }
        if !self.contains(b) {
            return Err(TimeScaleError::NotMember(b));
        }
        if a > b {
            return Err(TimeScaleError::Reversed { a, b });
        }
        let clipped = self
            .components
            .iter()
            .filter(|c| c.end() >= a && c.start() <= b)
            .map(|c| {
                let lo = c.start().max(a);
                let hi = c.end().min(b);
                if lo < hi {
                    Component::Interval(lo, hi)
                } else {
                    Component::Point(lo)
                }
            })
            .collect();
        Ok(TsInterval {
            scale: TimeScale { components: clipped },
            a,
            b,
        })
    }

    /// Evaluation points of the scale: every scattered point plus `per_interval`
    /// evenly spaced interior points of each interval component.
    pub fn sample_points(&self, per_interval: usize) -> Vec<f64> {
        let mut out = Vec::new();
        for c in &self.components {
            match *c {
                Component::Point(x) => out.push(x),
                Component::Interval(lo, hi) => {
                    out.push(lo);
                    let n = per_interval + 1;
                    for i in 1..n {
                        out.push(lo + (hi - lo) * i as f64 / n as f64);
                    }
                    out.push(hi);
                }
            }
        }
        out
    }
}

impl fmt::Display for TimeScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| match *c {
                Component::Interval(lo, hi) => format!("[{lo}, {hi}]"),
                Component::Point(x) => format!("{{{x}}}"),
            })
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// `[a, b]_T`: the points of a parent scale between `a` and `b`.
///
/// Derefs to the clipped [`TimeScale`], so jump operators evaluated through
/// it treat `a` and `b` as the extrema. Integrals over the clipped scale
/// agree with integrals over the parent, since every jump out of a point
/// below `b` lands at or before `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TsInterval {
    scale: TimeScale,
    a: f64,
    b: f64,
}

impl TsInterval {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn scale(&self) -> &TimeScale {
        &self.scale
    }

    pub fn into_scale(self) -> TimeScale {
        self.scale
    }
}

impl Deref for TsInterval {
    type Target = TimeScale;

    fn deref(&self) -> &TimeScale {
        &self.scale
    }
}
