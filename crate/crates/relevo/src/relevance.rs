//! Relevance functions: smooth monotone maps from target values to [0, 1]
//! built from a small set of control points.
//!
//! Interpolation is piecewise cubic Hermite with Fritsch-Carlson slope
//! limiting, so the curve never overshoots the unit interval and is monotone
//! wherever its control points are. Beyond the outermost points the function
//! extends as a constant.

use crate::stats::{adjusted_fences, Sample, StatsError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors from building or evaluating relevance functions.
#[derive(Debug, Error, PartialEq)]
pub enum RelevanceError {
    #[error("need at least 2 control points, got {0}")]
    TooFewPoints(usize),
    #[error("duplicate control point at y = {0}")]
    DuplicateControlPoint(f64),
    #[error("relevance value {0} outside [0, 1]")]
    PhiOutOfRange(f64),
    #[error("non-finite control point")]
    NonFinitePoint,
    #[error("cannot evaluate relevance at a non-finite target value")]
    NonFiniteQuery,
    #[error("anchors undefined: relevance never reaches {0}")]
    AnchorsUndefined(f64),
    #[error("anchors undefined for {0} tail")]
    TailUndefined(Tail),
    #[error("ambiguous tail: relevance reaches 1 on both sides of the centre, specify the tail explicitly")]
    AmbiguousTail,
    #[error("no rare region detected")]
    NoRareRegion,
    #[error("fence at {fence} does not lie beyond the centre {center}")]
    FenceAtCentre { fence: f64, center: f64 },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Which side of the centre carries the high-relevance region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Right,
    Left,
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tail::Right => "right",
            Tail::Left => "left",
        })
    }
}

/// The two target values that anchor a relevance slope: `pi_min` is where
/// relevance is still 0, `pi_max` where it first reaches 1. For a left tail
/// `pi_max < pi_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelevanceAnchors {
    pub pi_min: f64,
    pub pi_max: f64,
    pub tail: Tail,
}

/// A (target value, relevance, derivative) anchor for interpolation.
///
/// `dphi` is the derivative of relevance with respect to the target; `None`
/// lets the interpolant pick a shape-preserving slope automatically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlPoint {
    pub y: f64,
    pub phi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dphi: Option<f64>,
}

impl ControlPoint {
    pub fn new(y: f64, phi: f64) -> Self {
        Self { y, phi, dphi: None }
    }

    pub fn with_slope(y: f64, phi: f64, dphi: f64) -> Self {
        Self { y, phi, dphi: Some(dphi) }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelevanceDoc {
    points: Vec<ControlPoint>,
}

/// A relevance function: knots with resolved slopes, evaluated as a cubic
/// Hermite spline, constant beyond the outermost knots, clamped to [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RelevanceDoc", into = "RelevanceDoc")]
pub struct RelevanceFunction {
    ys: Vec<f64>,
    phis: Vec<f64>,
    slopes: Vec<f64>,
}

impl TryFrom<RelevanceDoc> for RelevanceFunction {
    type Error = RelevanceError;

    fn try_from(doc: RelevanceDoc) -> Result<Self, Self::Error> {
        RelevanceFunction::build(doc.points)
    }
}

impl From<RelevanceFunction> for RelevanceDoc {
    fn from(f: RelevanceFunction) -> Self {
        RelevanceDoc { points: f.points() }
    }
}

impl RelevanceFunction {
    /// Builds the interpolant from at least two control points.
    ///
    /// Points are sorted by y internally; duplicate y values are an error.
    /// Supplied `dphi` values are honored, then limited where they would
    /// break monotonicity or the [0, 1] bounds. Missing slopes get the
    /// Fritsch-Carlson shape-preserving estimate.
    pub fn build(mut points: Vec<ControlPoint>) -> Result<Self, RelevanceError> {
        if points.len() < 2 {
            return Err(RelevanceError::TooFewPoints(points.len()));
        }
        for p in &points {
            if !p.y.is_finite() || !p.phi.is_finite() || p.dphi.is_some_and(|d| !d.is_finite()) {
                return Err(RelevanceError::NonFinitePoint);
            }
            if !(0.0..=1.0).contains(&p.phi) {
                return Err(RelevanceError::PhiOutOfRange(p.phi));
            }
        }
        points.sort_by(|a, b| a.y.partial_cmp(&b.y).expect("finite y"));
        for w in points.windows(2) {
            if w[0].y == w[1].y {
                return Err(RelevanceError::DuplicateControlPoint(w[0].y));
            }
        }

        let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
        let phis: Vec<f64> = points.iter().map(|p| p.phi).collect();
        let user: Vec<Option<f64>> = points.iter().map(|p| p.dphi).collect();
        let slopes = resolve_slopes(&ys, &phis, &user);
        Ok(Self { ys, phis, slopes })
    }

    /// The constant function 1 everywhere: every target equally relevant.
    pub fn uniform() -> Self {
        Self {
            ys: vec![0.0, 1.0],
            phis: vec![1.0, 1.0],
            slopes: vec![0.0, 0.0],
        }
    }

    /// Control points with the resolved slopes filled in.
    pub fn points(&self) -> Vec<ControlPoint> {
        self.ys
            .iter()
            .zip(&self.phis)
            .zip(&self.slopes)
            .map(|((&y, &phi), &d)| ControlPoint { y, phi, dphi: Some(d) })
            .collect()
    }

    /// Smallest and largest knot y.
    pub fn knot_range(&self) -> (f64, f64) {
        (self.ys[0], self.ys[self.ys.len() - 1])
    }

    /// Relevance of the target value `y`.
    pub fn eval(&self, y: f64) -> Result<f64, RelevanceError> {
        if !y.is_finite() {
            return Err(RelevanceError::NonFiniteQuery);
        }
        Ok(self.eval_finite(y))
    }

    /// Relevance of every value in `ys`.
    pub fn eval_many(&self, ys: &[f64]) -> Result<Vec<f64>, RelevanceError> {
        ys.iter().map(|&y| self.eval(y)).collect()
    }

    pub(crate) fn eval_finite(&self, y: f64) -> f64 {
        let n = self.ys.len();
        if y <= self.ys[0] {
            return self.phis[0];
        }
        if y >= self.ys[n - 1] {
            return self.phis[n - 1];
        }
        let i = self.ys.partition_point(|&x| x <= y) - 1;
        let h = self.ys[i + 1] - self.ys[i];
        let t = (y - self.ys[i]) / h;
        let t2 = t * t;
        let omt = 1.0 - t;
        // Formulated so a flat segment evaluates to its endpoint value
        // exactly; the two value basis functions sum to 1.
        let h01 = t2 * (3.0 - 2.0 * t);
        let h10 = t * omt * omt;
        let h11 = t2 * (t - 1.0);
        let v = self.phis[i]
            + (self.phis[i + 1] - self.phis[i]) * h01
            + h * (self.slopes[i] * h10 + self.slopes[i + 1] * h11);
        v.clamp(0.0, 1.0)
    }

    /// Anchors with the tail inferred from the knot layout.
    ///
    /// Errors when relevance never reaches 0 or 1, and when both a left and
    /// a right reading exist (two-tail profiles), in which case
    /// [`anchors_for_tail`](Self::anchors_for_tail) must be used.
    pub fn anchors(&self) -> Result<RelevanceAnchors, RelevanceError> {
        self.check_attains()?;
        match (self.anchors_for_tail(Tail::Right), self.anchors_for_tail(Tail::Left)) {
            (Ok(a), Err(_)) => Ok(a),
            (Err(_), Ok(a)) => Ok(a),
            (Ok(_), Ok(_)) => Err(RelevanceError::AmbiguousTail),
            (Err(e), Err(_)) => Err(e),
        }
    }

    /// Anchors for an explicitly chosen tail.
    ///
    /// Right tail: `pi_max` is the smallest knot with relevance 1 that has a
    /// relevance-0 knot below it, `pi_min` the largest relevance-0 knot below
    /// `pi_max`. Left tail is the mirror image.
    pub fn anchors_for_tail(&self, tail: Tail) -> Result<RelevanceAnchors, RelevanceError> {
        self.check_attains()?;
        let ones: Vec<usize> = (0..self.ys.len()).filter(|&i| self.phis[i] == 1.0).collect();
        let zeros: Vec<usize> = (0..self.ys.len()).filter(|&i| self.phis[i] == 0.0).collect();
        match tail {
            Tail::Right => {
                let first_zero = zeros[0];
                let peak = ones.iter().copied().find(|&i| i > first_zero);
                match peak {
                    Some(i) => {
                        let base = zeros.iter().copied().filter(|&j| j < i).max().expect("zero below peak");
                        Ok(RelevanceAnchors {
                            pi_min: self.ys[base],
                            pi_max: self.ys[i],
                            tail,
                        })
                    }
                    None => Err(RelevanceError::TailUndefined(tail)),
                }
            }
            Tail::Left => {
                let last_zero = zeros[zeros.len() - 1];
                let peak = ones.iter().copied().rev().find(|&i| i < last_zero);
                match peak {
                    Some(i) => {
                        let base = zeros.iter().copied().find(|&j| j > i).expect("zero above peak");
                        Ok(RelevanceAnchors {
                            pi_min: self.ys[base],
                            pi_max: self.ys[i],
                            tail,
                        })
                    }
                    None => Err(RelevanceError::TailUndefined(tail)),
                }
            }
        }
    }

    fn check_attains(&self) -> Result<(), RelevanceError> {
        if !self.phis.iter().any(|&p| p == 1.0) {
            return Err(RelevanceError::AnchorsUndefined(1.0));
        }
        if !self.phis.iter().any(|&p| p == 0.0) {
            return Err(RelevanceError::AnchorsUndefined(0.0));
        }
        Ok(())
    }
}

/// Slopes at every knot: user-supplied values where given, Fritsch-Carlson
/// estimates elsewhere, then every slope limited into the monotone region
/// of its adjacent segments.
fn resolve_slopes(ys: &[f64], phis: &[f64], user: &[Option<f64>]) -> Vec<f64> {
    let n = ys.len();
    let h: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = phis
        .windows(2)
        .zip(&h)
        .map(|(w, &hi)| (w[1] - w[0]) / hi)
        .collect();

    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (s1, s2) = (delta[k - 1], delta[k]);
        if s1 == 0.0 || s2 == 0.0 || s1.signum() != s2.signum() {
            d[k] = 0.0;
        } else {
            // Weighted harmonic mean of the adjacent secants.
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / s1 + w2 / s2);
        }
    }
    d[0] = if n == 2 { delta[0] } else { endpoint_slope(h[0], h[1], delta[0], delta[1]) };
    d[n - 1] = if n == 2 {
        delta[0]
    } else {
        endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3])
    };

    for (k, slot) in d.iter_mut().enumerate() {
        if let Some(u) = user[k] {
            *slot = u;
        }
        // Intersection of the per-segment monotone boxes [0, 3*delta]
        // (or its reflection); always contains 0, so never empty.
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for s in [k.wrapping_sub(1), k] {
            if s >= delta.len() {
                continue;
            }
            if delta[s] >= 0.0 {
                lo = lo.max(0.0);
                hi = hi.min(3.0 * delta[s]);
            } else {
                lo = lo.max(3.0 * delta[s]);
                hi = hi.min(0.0);
            }
        }
        *slot = slot.clamp(lo, hi);
    }
    d
}

/// Non-centred three-point slope estimate for an endpoint, with the usual
/// shape-preserving adjustments.
fn endpoint_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d.signum() != s0.signum() {
        d = 0.0;
    } else if s0.signum() != s1.signum() && d.abs() > 3.0 * s0.abs() {
        d = 3.0 * s0;
    }
    d
}

/// Control points derived from the sample: relevance 0 at the median,
/// relevance 1 at every adjusted-boxplot fence that has sample values
/// beyond it.
pub fn auto_control_points(sample: &Sample) -> Result<Vec<ControlPoint>, RelevanceError> {
    auto_control_points_at(sample, sample.median())
}

/// Same as [`auto_control_points`] but with a caller-chosen centre for the
/// relevance-0 point.
pub fn auto_control_points_at(
    sample: &Sample,
    center: f64,
) -> Result<Vec<ControlPoint>, RelevanceError> {
    if !center.is_finite() {
        return Err(RelevanceError::NonFinitePoint);
    }
    let fences = adjusted_fences(sample)?;
    let beyond_lower = sample.min() < fences.lower;
    let beyond_upper = sample.max() > fences.upper;
    if !beyond_lower && !beyond_upper {
        return Err(RelevanceError::NoRareRegion);
    }

    let mut pts = Vec::with_capacity(3);
    if beyond_lower {
        if fences.lower >= center {
            return Err(RelevanceError::FenceAtCentre { fence: fences.lower, center });
        }
        pts.push(ControlPoint::with_slope(fences.lower, 1.0, 0.0));
    }
    pts.push(ControlPoint::with_slope(center, 0.0, 0.0));
    if beyond_upper {
        if fences.upper <= center {
            return Err(RelevanceError::FenceAtCentre { fence: fences.upper, center });
        }
        pts.push(ControlPoint::with_slope(fences.upper, 1.0, 0.0));
    }
    Ok(pts)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn control_points() -> impl Strategy<Value = Vec<ControlPoint>> {
        proptest::collection::btree_set(-1000i64..1000, 2..8).prop_flat_map(|ys| {
            let ys: Vec<f64> = ys.into_iter().map(|v| v as f64 / 10.0).collect();
            let n = ys.len();
            proptest::collection::vec(0.0f64..=1.0, n).prop_map(move |phis| {
                ys.iter()
                    .zip(&phis)
                    .map(|(&y, &phi)| ControlPoint::new(y, phi))
                    .collect()
            })
        })
    }

    proptest! {
        #[test]
        fn eval_stays_in_unit_interval(pts in control_points(), q in -200.0f64..200.0) {
            let f = RelevanceFunction::build(pts).unwrap();
            let v = f.eval(q).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn knot_exactness(pts in control_points()) {
            let f = RelevanceFunction::build(pts.clone()).unwrap();
            for p in &pts {
                prop_assert_eq!(f.eval(p.y).unwrap(), p.phi);
            }
        }

        #[test]
        fn segments_are_monotone(pts in control_points()) {
            let f = RelevanceFunction::build(pts.clone()).unwrap();
            for w in pts.windows(2) {
                let increasing = w[1].phi >= w[0].phi;
                let mut prev = f.eval(w[0].y).unwrap();
                for i in 1..=200 {
                    let y = w[0].y + (w[1].y - w[0].y) * i as f64 / 200.0;
                    let v = f.eval(y).unwrap();
                    if increasing {
                        prop_assert!(v >= prev - 1e-12);
                    } else {
                        prop_assert!(v <= prev + 1e-12);
                    }
                    prev = v;
                }
            }
        }
    }
}
