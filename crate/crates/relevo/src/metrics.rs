//! Squared error weighted by relevance: SER at a single cutoff and SERA,
//! the area under the SER curve over all cutoffs in [0, 1].
//!
//! Relevance is always evaluated at the true target values. A prediction for
//! a data point contributes its full squared error to SER at cutoff t when
//! the point's true-target relevance is at least t; SERA integrates that sum
//! as the cutoff sweeps from 0 (all points) to 1 (only maximally relevant
//! points).

use crate::relevance::{RelevanceError, RelevanceFunction};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default cutoff-grid spacing for SERA.
pub const DEFAULT_SERA_STEP: f64 = 0.001;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("no data points")]
    Empty,
    #[error("prediction length {got} does not match {expected} targets")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value in targets or predictions")]
    NonFinite,
    #[error("duplicate model \"{0}\"")]
    DuplicateModel(String),
    #[error("cutoff {0} outside [0, 1]")]
    InvalidCutoff(f64),
    #[error("step {0} outside (0, 0.5]")]
    InvalidStep(f64),
    #[error("model \"{id}\": {source}")]
    Model {
        id: String,
        #[source]
        source: Box<MetricsError>,
    },
    #[error(transparent)]
    Relevance(#[from] RelevanceError),
}

/// True targets plus aligned prediction vectors for one or more models,
/// validated at construction: equal lengths, at least one point, all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    y_true: Vec<f64>,
    models: BTreeMap<String, Vec<f64>>,
}

impl PredictionSet {
    pub fn new(
        y_true: Vec<f64>,
        models: impl IntoIterator<Item = (String, Vec<f64>)>,
    ) -> Result<Self, MetricsError> {
        if y_true.is_empty() {
            return Err(MetricsError::Empty);
        }
        if y_true.iter().any(|v| !v.is_finite()) {
            return Err(MetricsError::NonFinite);
        }
        let mut map = BTreeMap::new();
        for (id, preds) in models {
            if preds.len() != y_true.len() {
                return Err(MetricsError::Model {
                    id: id.clone(),
                    source: Box::new(MetricsError::LengthMismatch {
                        expected: y_true.len(),
                        got: preds.len(),
                    }),
                });
            }
            if preds.iter().any(|v| !v.is_finite()) {
                return Err(MetricsError::Model {
                    id: id.clone(),
                    source: Box::new(MetricsError::NonFinite),
                });
            }
            if map.insert(id.clone(), preds).is_some() {
                return Err(MetricsError::DuplicateModel(id));
            }
        }
        Ok(Self { y_true, models: map })
    }

    pub fn y_true(&self) -> &[f64] {
        &self.y_true
    }

    /// Model ids in sorted order.
    pub fn model_ids(&self) -> Vec<String> {
        self.models.keys().cloned().collect()
    }

    pub fn predictions(&self, id: &str) -> Option<&[f64]> {
        self.models.get(id).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Vec<f64>)> {
        self.models.iter()
    }

    pub fn len(&self) -> usize {
        self.y_true.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_true.is_empty()
    }
}

/// SER values over a cutoff grid from 0 to 1 and the trapezoidal area
/// under them.
#[derive(Debug, Clone, PartialEq)]
pub struct SeraCurve {
    pub t_grid: Vec<f64>,
    pub ser_values: Vec<f64>,
    pub area: f64,
}

/// Squared error summed over the points whose true-target relevance is at
/// least `t`.
pub fn ser(
    t: f64,
    y_pred: &[f64],
    y_true: &[f64],
    f: &RelevanceFunction,
) -> Result<f64, MetricsError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(MetricsError::InvalidCutoff(t));
    }
    validate_pair(y_pred, y_true)?;
    let mut sum = 0.0;
    for (&p, &y) in y_pred.iter().zip(y_true) {
        if f.eval(y)? >= t {
            let e = p - y;
            sum += e * e;
        }
    }
    Ok(sum)
}

/// SER over the cutoff grid {0, step, 2 step, ..., 1} and its trapezoidal
/// area, the SERA value.
pub fn sera(
    y_pred: &[f64],
    y_true: &[f64],
    f: &RelevanceFunction,
    step: f64,
) -> Result<SeraCurve, MetricsError> {
    validate_pair(y_pred, y_true)?;
    let phi = f.eval_many(y_true)?;
    sera_from_phi(y_pred, y_true, &phi, step)
}

/// SERA from precomputed relevance values at the true targets. The values
/// must be aligned with `y_true` and lie in [0, 1].
pub fn sera_from_phi(
    y_pred: &[f64],
    y_true: &[f64],
    phi: &[f64],
    step: f64,
) -> Result<SeraCurve, MetricsError> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(MetricsError::InvalidStep(step));
    }
    validate_pair(y_pred, y_true)?;
    if phi.len() != y_true.len() {
        return Err(MetricsError::LengthMismatch { expected: y_true.len(), got: phi.len() });
    }

    // Squared errors sorted by ascending relevance; suffix sums give SER at
    // any cutoff with one binary search.
    let mut by_phi: Vec<(f64, f64)> = phi
        .iter()
        .zip(y_pred.iter().zip(y_true))
        .map(|(&ph, (&p, &y))| {
            let e = p - y;
            (ph, e * e)
        })
        .collect();
    by_phi.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("relevance is finite"));
    let mut suffix = vec![0.0; by_phi.len() + 1];
    for i in (0..by_phi.len()).rev() {
        suffix[i] = suffix[i + 1] + by_phi[i].1;
    }
    let ser_at = |t: f64| suffix[by_phi.partition_point(|&(ph, _)| ph < t)];

    let t_grid = cutoff_grid(step);
    let ser_values: Vec<f64> = t_grid.iter().map(|&t| ser_at(t)).collect();
    let mut area = 0.0;
    for i in 1..t_grid.len() {
        area += (t_grid[i] - t_grid[i - 1]) * 0.5 * (ser_values[i] + ser_values[i - 1]);
    }
    Ok(SeraCurve { t_grid, ser_values, area })
}

/// The cutoff grid {0, step, 2 step, ...} closed with 1; the last interval
/// may be shorter when step does not divide 1.
fn cutoff_grid(step: f64) -> Vec<f64> {
    let mut grid = Vec::with_capacity((1.0 / step) as usize + 2);
    let mut j = 0u64;
    loop {
        let t = j as f64 * step;
        if t >= 1.0 - 1e-12 {
            break;
        }
        grid.push(t);
        j += 1;
    }
    grid.push(1.0);
    grid
}

/// Exact integral of the SER step function, from its breakpoints.
///
/// SER is piecewise constant and left-continuous in the cutoff, jumping just
/// after each attained relevance value, so the integral over [0, 1] is a
/// finite sum over consecutive breakpoints. Agrees with the grid method up
/// to the half-step straddle at each jump.
pub fn sera_breakpoint_exact(
    y_pred: &[f64],
    y_true: &[f64],
    f: &RelevanceFunction,
) -> Result<f64, MetricsError> {
    validate_pair(y_pred, y_true)?;
    let phi = f.eval_many(y_true)?;

    let mut by_phi: Vec<(f64, f64)> = phi
        .iter()
        .zip(y_pred.iter().zip(y_true))
        .map(|(&ph, (&p, &y))| {
            let e = p - y;
            (ph, e * e)
        })
        .collect();
    by_phi.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("relevance is finite"));
    let mut suffix = vec![0.0; by_phi.len() + 1];
    for i in (0..by_phi.len()).rev() {
        suffix[i] = suffix[i + 1] + by_phi[i].1;
    }
    let ser_at = |t: f64| suffix[by_phi.partition_point(|&(ph, _)| ph < t)];

    let mut breaks: Vec<f64> = Vec::with_capacity(by_phi.len() + 2);
    breaks.push(0.0);
    for &(ph, _) in &by_phi {
        if ph > 0.0 && ph < 1.0 && Some(&ph) != breaks.last() {
            breaks.push(ph);
        }
    }
    breaks.push(1.0);

    // On (b_j, b_{j+1}] the step function equals its value at b_{j+1}.
    let mut area = 0.0;
    for w in breaks.windows(2) {
        area += (w[1] - w[0]) * ser_at(w[1]);
    }
    Ok(area)
}

/// SERA for every model in the set, keyed and ordered by model id.
pub fn sera_all(
    preds: &PredictionSet,
    f: &RelevanceFunction,
    step: f64,
) -> Result<BTreeMap<String, SeraCurve>, MetricsError> {
    let phi = f.eval_many(preds.y_true())?;
    let mut out = BTreeMap::new();
    for (id, y_pred) in preds.iter() {
        let curve = sera_from_phi(y_pred, preds.y_true(), &phi, step)
            .map_err(|e| MetricsError::Model { id: id.clone(), source: Box::new(e) })?;
        out.insert(id.clone(), curve);
    }
    Ok(out)
}

fn validate_pair(y_pred: &[f64], y_true: &[f64]) -> Result<(), MetricsError> {
    if y_true.is_empty() {
        return Err(MetricsError::Empty);
    }
    if y_pred.len() != y_true.len() {
        return Err(MetricsError::LengthMismatch { expected: y_true.len(), got: y_pred.len() });
    }
    if y_pred.iter().chain(y_true).any(|v| !v.is_finite()) {
        return Err(MetricsError::NonFinite);
    }
    Ok(())
}
