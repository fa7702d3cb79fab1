//! Evaluation of regression models when errors matter more in some parts of
//! the target domain than in others.
//!
//! The crate is organised around three ideas:
//!
//! * a *relevance function* mapping target values to importance weights in
//!   [0, 1], built from a handful of control points with smooth monotone
//!   interpolation ([`relevance`]);
//! * the *squared-error relevance area* (SERA), an error metric that
//!   integrates squared error over progressively stricter relevance cutoffs
//!   ([`metrics`]);
//! * *robustness sweeps* that perturb the relevance function and report how
//!   often the best-ranked model changes ([`robustness`]).
//!
//! Supporting modules provide robust statistics for deriving control points
//! from a target sample ([`stats`]), small reference learners with
//! cross-validated selection ([`models`]), and file formats ([`io`]).

pub mod metrics;
pub mod relevance;
pub mod robustness;
pub mod stats;

pub use metrics::{
    ser, sera, sera_all, sera_breakpoint_exact, MetricsError, PredictionSet, SeraCurve,
    DEFAULT_SERA_STEP,
};
pub use relevance::{
    auto_control_points, auto_control_points_at, ControlPoint, RelevanceAnchors, RelevanceError,
    RelevanceFunction, Tail,
};
pub use robustness::{
    convolution_scenarios, elastic_scenarios, rank_models, run_sweep, RobustnessError,
    ScenarioOutcome, ScenarioResult, ScenarioSpec, SweepConfig, SweepMethod, SweepReport,
    DEFAULT_SWEEP_STEPS,
};
pub use stats::{adjusted_fences, medcouple, Fences, Sample, StatsError};
