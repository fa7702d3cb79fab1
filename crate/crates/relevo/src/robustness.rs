//! Ranking robustness under perturbed relevance: generate neighbouring
//! relevance functions, score every model under each, and report how often
//! the best model changes.
//!
//! Two perturbation methods are provided. Convolution translates the whole
//! relevance function rigidly along the target axis. Elastic keeps the
//! base anchor (relevance 0) fixed and moves the peak anchor (relevance 1),
//! stretching the slope between them; the stretched region is the original
//! curve composed with the affine map of the anchor interval, so knots on
//! the closed anchor interval carry slopes scaled by the inverse stretch
//! factor, while knots outside it translate rigidly with their nearest
//! anchor and keep their slopes.

use crate::metrics::{sera_from_phi, MetricsError, PredictionSet};
use crate::relevance::{
    ControlPoint, RelevanceAnchors, RelevanceError, RelevanceFunction, Tail,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RobustnessError {
    #[error("steps must be odd and at least 3, got {0}")]
    InvalidSteps(u32),
    #[error("half_range must be positive and finite, got {0}")]
    InvalidHalfRange(f64),
    #[error("model \"{0}\" has a NaN area")]
    NanArea(String),
    #[error("cannot rank an empty model set")]
    EmptyRanking,
    #[error(transparent)]
    Relevance(#[from] RelevanceError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMethod {
    Convolution,
    Elastic,
}

impl fmt::Display for SweepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMethod::Convolution => "convolution",
            SweepMethod::Elastic => "elastic",
        })
    }
}

/// Sweep geometry: `steps` scenarios spaced `delta()` apart, spanning
/// `half_range` on each side of the reference function.
///
/// `steps` must be odd so the reference itself (offset 0) is a scenario.
/// With `one_sided` the same `steps` and spacing produce offsets
/// 0, delta, ..., (steps-1) * delta instead of the centred set.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub method: SweepMethod,
    pub steps: u32,
    pub half_range: f64,
    /// Tail to sweep; `None` infers it from the function's anchors, which
    /// fails for two-tail profiles.
    pub tail: Option<Tail>,
    pub one_sided: bool,
}

pub const DEFAULT_SWEEP_STEPS: u32 = 19;

impl SweepConfig {
    pub fn new(method: SweepMethod, half_range: f64) -> Self {
        Self {
            method,
            steps: DEFAULT_SWEEP_STEPS,
            half_range,
            tail: None,
            one_sided: false,
        }
    }

    pub fn validate(&self) -> Result<(), RobustnessError> {
        if self.steps < 3 || self.steps % 2 == 0 {
            return Err(RobustnessError::InvalidSteps(self.steps));
        }
        if !(self.half_range.is_finite() && self.half_range > 0.0) {
            return Err(RobustnessError::InvalidHalfRange(self.half_range));
        }
        Ok(())
    }

    /// Offset spacing between adjacent scenarios.
    pub fn delta(&self) -> f64 {
        2.0 * self.half_range / (self.steps - 1) as f64
    }

    fn indices(&self) -> Vec<i32> {
        let steps = self.steps as i32;
        if self.one_sided {
            (0..steps).collect()
        } else {
            (-(steps - 1) / 2..=(steps - 1) / 2).collect()
        }
    }

    fn resolve_anchors(
        &self,
        f: &RelevanceFunction,
    ) -> Result<RelevanceAnchors, RobustnessError> {
        Ok(match self.tail {
            Some(t) => f.anchors_for_tail(t)?,
            None => f.anchors()?,
        })
    }
}

/// One perturbed relevance function, or the reason it could not be built.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub index: i32,
    /// Signed distance `index * delta` in target units.
    pub offset: f64,
    pub outcome: ScenarioOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioOutcome {
    Built {
        relevance: RelevanceFunction,
        anchors: RelevanceAnchors,
    },
    Skipped { reason: String },
}

/// Per-scenario evaluation inside a [`SweepReport`].
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioResult {
    Evaluated {
        index: i32,
        offset: f64,
        /// SERA per model, aligned with the report's `model_ids`.
        sera: Vec<f64>,
        /// Model ids ascending by SERA, ties by id.
        ranking: Vec<String>,
    },
    Skipped {
        index: i32,
        offset: f64,
        reason: String,
    },
}

impl ScenarioResult {
    pub fn index(&self) -> i32 {
        match self {
            ScenarioResult::Evaluated { index, .. } | ScenarioResult::Skipped { index, .. } => {
                *index
            }
        }
    }

    pub fn offset(&self) -> f64 {
        match self {
            ScenarioResult::Evaluated { offset, .. } | ScenarioResult::Skipped { offset, .. } => {
                *offset
            }
        }
    }
}

/// Outcome of one sweep: every scenario's model scores and rankings, and
/// the fraction of evaluated non-reference scenarios whose best model
/// differs from the reference best.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub method: SweepMethod,
    pub steps: u32,
    pub half_range: f64,
    pub delta: f64,
    pub sera_step: f64,
    pub tail: Tail,
    pub reference_anchors: RelevanceAnchors,
    /// Sorted model ids; `sera` vectors in scenarios align with this.
    pub model_ids: Vec<String>,
    /// One entry per scenario, ascending by index.
    pub scenarios: Vec<ScenarioResult>,
    pub reference_best: String,
    pub rank_shift_probability: f64,
}

impl SweepReport {
    pub fn evaluated(&self) -> impl Iterator<Item = &ScenarioResult> {
        self.scenarios
            .iter()
            .filter(|s| matches!(s, ScenarioResult::Evaluated { .. }))
    }

    pub fn skipped(&self) -> impl Iterator<Item = &ScenarioResult> {
        self.scenarios
            .iter()
            .filter(|s| matches!(s, ScenarioResult::Skipped { .. }))
    }
}

/// Scenarios that translate every control point by `index * delta`,
/// preserving the function's shape.
pub fn convolution_scenarios(
    f: &RelevanceFunction,
    cfg: &SweepConfig,
) -> Result<Vec<ScenarioSpec>, RobustnessError> {
    cfg.validate()?;
    let anchors = cfg.resolve_anchors(f)?;
    let delta = cfg.delta();
    Ok(cfg
        .indices()
        .into_iter()
        .map(|k| {
            let offset = k as f64 * delta;
            if k == 0 {
                return ScenarioSpec {
                    index: 0,
                    offset,
                    outcome: ScenarioOutcome::Built {
                        relevance: f.clone(),
                        anchors,
                    },
                };
            }
            let points = f
                .points()
                .into_iter()
                .map(|p| ControlPoint { y: p.y + offset, ..p })
                .collect();
            ScenarioSpec {
                index: k,
                offset,
                outcome: build_outcome(points, anchors.tail),
            }
        })
        .collect())
}

/// Scenarios that keep the base anchor fixed and move the peak anchor by
/// `index * delta` away from it (toward it for negative indices), with the
/// sign mirrored for left tails so positive indices always widen the slope.
///
/// Scenarios whose moved peak would collide with the base anchor are
/// emitted as skipped entries.
pub fn elastic_scenarios(
    f: &RelevanceFunction,
    cfg: &SweepConfig,
) -> Result<Vec<ScenarioSpec>, RobustnessError> {
    cfg.validate()?;
    let anchors = cfg.resolve_anchors(f)?;
    let delta = cfg.delta();
    let (lo, hi) = f.knot_range();
    let eps = 1e-6 * (hi - lo);
    let sign = match anchors.tail {
        Tail::Right => 1.0,
        Tail::Left => -1.0,
    };
    Ok(cfg
        .indices()
        .into_iter()
        .map(|k| {
            let offset = k as f64 * delta;
            if k == 0 {
                return ScenarioSpec {
                    index: 0,
                    offset,
                    outcome: ScenarioOutcome::Built {
                        relevance: f.clone(),
                        anchors,
                    },
                };
            }
            let pi_min = anchors.pi_min;
            let pi_max = anchors.pi_max;
            let pi_max_new = pi_max + sign * offset;
            if sign * (pi_max_new - pi_min) <= eps {
                return ScenarioSpec {
                    index: k,
                    offset,
                    outcome: ScenarioOutcome::Skipped {
                        reason: format!(
                            "peak anchor moved to {pi_max_new} collides with base anchor {pi_min}"
                        ),
                    },
                };
            }
            let stretch = (pi_max_new - pi_min) / (pi_max - pi_min);
            let shift = pi_max_new - pi_max;
            let points = f
                .points()
                .into_iter()
                .map(|p| {
                    let d = p.dphi.expect("resolved slope");
                    if p.y == pi_min {
                        ControlPoint::with_slope(p.y, p.phi, d / stretch)
                    } else if p.y == pi_max {
                        ControlPoint::with_slope(pi_max_new, p.phi, d / stretch)
                    } else if sign * (p.y - pi_min) < 0.0 {
                        p
                    } else if sign * (p.y - pi_max) > 0.0 {
                        ControlPoint::with_slope(p.y + shift, p.phi, d)
                    } else {
                        ControlPoint::with_slope(
                            pi_min + (p.y - pi_min) * stretch,
                            p.phi,
                            d / stretch,
                        )
                    }
                })
                .collect();
            ScenarioSpec {
                index: k,
                offset,
                outcome: build_outcome(points, anchors.tail),
            }
        })
        .collect())
}

/// Builds the scenario function, downgrading construction failures (knot
/// collapse at extreme scales) to skipped entries so a sweep never aborts
/// mid-run.
fn build_outcome(points: Vec<ControlPoint>, tail: Tail) -> ScenarioOutcome {
    match RelevanceFunction::build(points) {
        Ok(relevance) => match relevance.anchors_for_tail(tail) {
            Ok(anchors) => ScenarioOutcome::Built { relevance, anchors },
            Err(e) => ScenarioOutcome::Skipped { reason: format!("degenerate geometry: {e}") },
        },
        Err(e) => ScenarioOutcome::Skipped { reason: format!("degenerate geometry: {e}") },
    }
}

/// Model ids ascending by area; ties broken by id. NaN areas are an error.
pub fn rank_models(areas: &BTreeMap<String, f64>) -> Result<Vec<String>, RobustnessError> {
    if areas.is_empty() {
        return Err(RobustnessError::EmptyRanking);
    }
    for (id, a) in areas {
        if a.is_nan() {
            return Err(RobustnessError::NanArea(id.clone()));
        }
    }
    let mut ids: Vec<&String> = areas.keys().collect();
    ids.sort_by(|a, b| {
        areas[*a]
            .partial_cmp(&areas[*b])
            .expect("areas are not NaN")
            .then_with(|| a.cmp(b))
    });
    Ok(ids.into_iter().cloned().collect())
}

/// Runs one sweep: builds the scenarios for the configured method, scores
/// every model under every built scenario, and assembles the report.
///
/// Scenario evaluations run in parallel; results are ordered by scenario
/// index, so the report is identical regardless of thread count.
pub fn run_sweep(
    preds: &PredictionSet,
    f: &RelevanceFunction,
    cfg: &SweepConfig,
    sera_step: f64,
) -> Result<SweepReport, RobustnessError> {
    if !(sera_step > 0.0 && sera_step <= 0.5) {
        return Err(MetricsError::InvalidStep(sera_step).into());
    }
    let scenarios = match cfg.method {
        SweepMethod::Convolution => convolution_scenarios(f, cfg)?,
        SweepMethod::Elastic => elastic_scenarios(f, cfg)?,
    };
    let reference_anchors = cfg.resolve_anchors(f)?;
    let model_ids = preds.model_ids();

    let results: Vec<ScenarioResult> = scenarios
        .par_iter()
        .map(|scn| evaluate_scenario(scn, preds, &model_ids, sera_step))
        .collect::<Result<_, _>>()?;

    let reference_best = results
        .iter()
        .find_map(|r| match r {
            ScenarioResult::Evaluated { index: 0, ranking, .. } => Some(ranking[0].clone()),
            _ => None,
        })
        .expect("reference scenario is always built");

    let mut shifted = 0usize;
    let mut neighbours = 0usize;
    for r in &results {
        if let ScenarioResult::Evaluated { index, ranking, .. } = r {
            if *index != 0 {
                neighbours += 1;
                if ranking[0] != reference_best {
                    shifted += 1;
                }
            }
        }
    }
    // All neighbours skipped leaves nothing to compare; report no shifts.
    let rank_shift_probability = if neighbours == 0 {
        0.0
    } else {
        shifted as f64 / neighbours as f64
    };

    Ok(SweepReport {
        method: cfg.method,
        steps: cfg.steps,
        half_range: cfg.half_range,
        delta: cfg.delta(),
        sera_step,
        tail: reference_anchors.tail,
        reference_anchors,
        model_ids,
        scenarios: results,
        reference_best,
        rank_shift_probability,
    })
}

fn evaluate_scenario(
    scn: &ScenarioSpec,
    preds: &PredictionSet,
    model_ids: &[String],
    sera_step: f64,
) -> Result<ScenarioResult, RobustnessError> {
    match &scn.outcome {
        ScenarioOutcome::Skipped { reason } => Ok(ScenarioResult::Skipped {
            index: scn.index,
            offset: scn.offset,
            reason: reason.clone(),
        }),
        ScenarioOutcome::Built { relevance, .. } => {
            let phi = relevance.eval_many(preds.y_true())?;
            let mut sera = Vec::with_capacity(model_ids.len());
            let mut areas = BTreeMap::new();
            for id in model_ids {
                let preds_for = preds.predictions(id).expect("id from this set");
                let curve = sera_from_phi(preds_for, preds.y_true(), &phi, sera_step)?;
                sera.push(curve.area);
                areas.insert(id.clone(), curve.area);
            }
            let ranking = rank_models(&areas)?;
            Ok(ScenarioResult::Evaluated {
                index: scn.index,
                offset: scn.offset,
                sera,
                ranking,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> RelevanceFunction {
        RelevanceFunction::build(vec![
            ControlPoint::with_slope(50.0, 0.0, 0.0),
            ControlPoint::with_slope(150.0, 1.0, 0.0),
        ])
        .unwrap()
    }

    fn cfg(method: SweepMethod, steps: u32, half_range: f64) -> SweepConfig {
        SweepConfig { method, steps, half_range, tail: None, one_sided: false }
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            cfg(SweepMethod::Convolution, 18, 1.0).validate().unwrap_err(),
            RobustnessError::InvalidSteps(18)
        );
        assert_eq!(
            cfg(SweepMethod::Convolution, 1, 1.0).validate().unwrap_err(),
            RobustnessError::InvalidSteps(1)
        );
        assert_eq!(
            cfg(SweepMethod::Convolution, 19, 0.0).validate().unwrap_err(),
            RobustnessError::InvalidHalfRange(0.0)
        );
        assert!(cfg(SweepMethod::Convolution, 19, 2.5).validate().is_ok());
    }

    #[test]
    fn delta_spacing() {
        let c = cfg(SweepMethod::Convolution, 19, 9.0);
        assert_eq!(c.delta(), 1.0);
    }

    #[test]
    fn convolution_translates_knots() {
        let scns = convolution_scenarios(&ramp(), &cfg(SweepMethod::Convolution, 3, 10.0)).unwrap();
        assert_eq!(scns.len(), 3);
        assert_eq!(scns.iter().map(|s| s.index).collect::<Vec<_>>(), vec![-1, 0, 1]);
        let ScenarioOutcome::Built { relevance, anchors } = &scns[2].outcome else {
            panic!("built");
        };
        let pts = relevance.points();
        assert_eq!((pts[0].y, pts[1].y), (60.0, 160.0));
        assert_eq!((pts[0].phi, pts[1].phi), (0.0, 1.0));
        assert_eq!((anchors.pi_min, anchors.pi_max), (60.0, 160.0));
    }

    #[test]
    fn index_zero_is_the_reference_bitwise() {
        let f = ramp();
        for method in [SweepMethod::Convolution, SweepMethod::Elastic] {
            let scns = match method {
                SweepMethod::Convolution => {
                    convolution_scenarios(&f, &cfg(method, 5, 10.0)).unwrap()
                }
                SweepMethod::Elastic => elastic_scenarios(&f, &cfg(method, 5, 10.0)).unwrap(),
            };
            let ScenarioOutcome::Built { relevance, .. } = &scns[2].outcome else {
                panic!("built");
            };
            assert_eq!(relevance, &f);
        }
    }

    #[test]
    fn offsets_span_the_half_range() {
        let sigma = 7.3;
        let scns = convolution_scenarios(&ramp(), &cfg(SweepMethod::Convolution, 19, sigma)).unwrap();
        assert_eq!(scns.len(), 19);
        assert!((scns[0].offset + sigma).abs() < 1e-12 * sigma);
        assert!((scns[18].offset - sigma).abs() < 1e-12 * sigma);
        let d = scns[1].offset - scns[0].offset;
        for w in scns.windows(2) {
            assert!((w[1].offset - w[0].offset - d).abs() < 1e-12);
        }
    }

    #[test]
    fn elastic_moves_only_the_peak_anchor() {
        // steps 3, half_range 20 gives delta 20.
        let scns = elastic_scenarios(&ramp(), &cfg(SweepMethod::Elastic, 3, 20.0)).unwrap();
        let ScenarioOutcome::Built { relevance, anchors } = &scns[2].outcome else {
            panic!("built");
        };
        let pts = relevance.points();
        assert_eq!((pts[0].y, pts[1].y), (50.0, 170.0));
        assert_eq!((anchors.pi_min, anchors.pi_max), (50.0, 170.0));
    }

    #[test]
    fn elastic_rescales_interior_knots_affinely() {
        let f = RelevanceFunction::build(vec![
            ControlPoint::with_slope(50.0, 0.0, 0.0),
            ControlPoint::with_slope(100.0, 0.5, 0.005),
            ControlPoint::with_slope(150.0, 1.0, 0.0),
        ])
        .unwrap();
        let scns = elastic_scenarios(&f, &cfg(SweepMethod::Elastic, 3, 20.0)).unwrap();
        let ScenarioOutcome::Built { relevance, .. } = &scns[2].outcome else {
            panic!("built");
        };
        let pts = relevance.points();
        // Interval scaled by 1.2, so the midpoint knot lands at 110 and its
        // slope shrinks by the same factor.
        assert_eq!(pts[1].y, 110.0);
        assert_eq!(pts[1].phi, 0.5);
        assert!((pts[1].dphi.unwrap() - 0.005 / 1.2).abs() < 1e-18);
        assert_eq!(relevance.eval(110.0).unwrap(), 0.5);
        assert_eq!((pts[0].y, pts[2].y), (50.0, 170.0));
    }

    #[test]
    fn elastic_skips_anchor_collisions() {
        // delta 100: indices -2 and -1 collapse the peak onto the base.
        let scns = elastic_scenarios(&ramp(), &cfg(SweepMethod::Elastic, 5, 200.0)).unwrap();
        assert_eq!(scns.len(), 5);
        let skipped: Vec<i32> = scns
            .iter()
            .filter(|s| matches!(s.outcome, ScenarioOutcome::Skipped { .. }))
            .map(|s| s.index)
            .collect();
        assert_eq!(skipped, vec![-2, -1]);
    }

    #[test]
    fn elastic_left_tail_mirrors_the_sign() {
        let left = RelevanceFunction::build(vec![
            ControlPoint::with_slope(-150.0, 1.0, 0.0),
            ControlPoint::with_slope(-50.0, 0.0, 0.0),
        ])
        .unwrap();
        let scns = elastic_scenarios(&left, &cfg(SweepMethod::Elastic, 3, 20.0)).unwrap();
        let ScenarioOutcome::Built { anchors, .. } = &scns[2].outcome else {
            panic!("built");
        };
        // Positive index widens the slope away from the base anchor.
        assert_eq!(anchors.pi_max, -170.0);
        assert_eq!(anchors.pi_min, -50.0);
    }

    #[test]
    fn one_sided_indices_start_at_zero() {
        let c = SweepConfig { one_sided: true, ..cfg(SweepMethod::Convolution, 5, 10.0) };
        let scns = convolution_scenarios(&ramp(), &c).unwrap();
        assert_eq!(scns.iter().map(|s| s.index).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!(scns[0].offset, 0.0);
        assert_eq!(scns[4].offset, 4.0 * c.delta());
    }

    #[test]
    fn two_tail_function_requires_explicit_tail() {
        let two_tail = RelevanceFunction::build(vec![
            ControlPoint::new(-10.0, 1.0),
            ControlPoint::new(0.0, 0.0),
            ControlPoint::new(10.0, 1.0),
        ])
        .unwrap();
        let c = cfg(SweepMethod::Convolution, 3, 1.0);
        assert!(matches!(
            convolution_scenarios(&two_tail, &c),
            Err(RobustnessError::Relevance(RelevanceError::AmbiguousTail))
        ));
        let explicit = SweepConfig { tail: Some(Tail::Right), ..c };
        assert!(convolution_scenarios(&two_tail, &explicit).is_ok());
    }

    #[test]
    fn rank_models_examples() {
        let mut areas = BTreeMap::new();
        areas.insert("A".to_string(), 2.0);
        areas.insert("B".to_string(), 1.0);
        assert_eq!(rank_models(&areas).unwrap(), vec!["B", "A"]);

        areas.insert("B".to_string(), 2.0);
        assert_eq!(rank_models(&areas).unwrap(), vec!["A", "B"]);

        let single = BTreeMap::from([("A".to_string(), 1.0)]);
        assert_eq!(rank_models(&single).unwrap(), vec!["A"]);

        let nan = BTreeMap::from([("A".to_string(), f64::NAN)]);
        assert_eq!(rank_models(&nan).unwrap_err(), RobustnessError::NanArea("A".into()));
        assert_eq!(rank_models(&BTreeMap::new()).unwrap_err(), RobustnessError::EmptyRanking);
    }

    #[test]
    fn dominance_means_no_rank_shifts() {
        let y_true: Vec<f64> = (0..40).map(|i| 50.0 + 3.0 * i as f64).collect();
        let close: Vec<f64> = y_true.iter().map(|y| y + 0.1).collect();
        let far: Vec<f64> = y_true.iter().map(|y| y + 5.0).collect();
        let preds = PredictionSet::new(
            y_true,
            vec![("close".into(), close), ("far".into(), far)],
        )
        .unwrap();
        for method in [SweepMethod::Convolution, SweepMethod::Elastic] {
            let report = run_sweep(&preds, &ramp(), &cfg(method, 9, 30.0), 0.01).unwrap();
            assert_eq!(report.reference_best, "close");
            assert_eq!(report.rank_shift_probability, 0.0);
            for s in report.evaluated() {
                let ScenarioResult::Evaluated { ranking, .. } = s else { unreachable!() };
                assert_eq!(ranking[0], "close");
            }
        }
    }

    #[test]
    fn report_is_ordered_and_complete() {
        let y_true = vec![60.0, 100.0, 140.0, 160.0];
        let preds = PredictionSet::new(
            y_true.clone(),
            vec![("m".into(), y_true.iter().map(|y| y + 1.0).collect())],
        )
        .unwrap();
        let report = run_sweep(&preds, &ramp(), &cfg(SweepMethod::Elastic, 7, 120.0), 0.05).unwrap();
        assert_eq!(report.scenarios.len(), 7);
        let idx: Vec<i32> = report.scenarios.iter().map(|s| s.index()).collect();
        assert_eq!(idx, vec![-3, -2, -1, 0, 1, 2, 3]);
        assert!(report.skipped().count() > 0, "expected anchor collisions");
        assert!((0.0..=1.0).contains(&report.rank_shift_probability));
        assert_eq!(report.delta, 40.0);
    }

    #[test]
    fn single_model_probability_zero() {
        let preds = PredictionSet::new(
            vec![60.0, 150.0],
            vec![("only".into(), vec![61.0, 149.0])],
        )
        .unwrap();
        let report =
            run_sweep(&preds, &ramp(), &cfg(SweepMethod::Convolution, 5, 10.0), 0.01).unwrap();
        assert_eq!(report.rank_shift_probability, 0.0);
        assert_eq!(report.reference_best, "only");
    }

    #[test]
    fn sweep_rejects_bad_sera_step() {
        let preds =
            PredictionSet::new(vec![60.0], vec![("m".into(), vec![61.0])]).unwrap();
        assert!(matches!(
            run_sweep(&preds, &ramp(), &cfg(SweepMethod::Convolution, 5, 10.0), 0.7),
            Err(RobustnessError::Metrics(MetricsError::InvalidStep(_)))
        ));
    }
}
