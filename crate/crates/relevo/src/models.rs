//! Small built-in learners and a cross-validation harness, so the pipeline
//! runs end to end without external prediction files. Hyperparameters are
//! selected by SERA on out-of-fold predictions.
//!
//! The learners are deliberately plain baselines (mean, ridge-regularized
//! least squares, k nearest neighbours); serious models are expected to
//! arrive as prediction CSVs.

use crate::metrics::{sera, MetricsError};
use crate::relevance::RelevanceFunction;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Ridge jitter applied by default so collinear feature matrices stay
/// solvable.
pub const DEFAULT_RIDGE: f64 = 1e-8;

const CV_FOLDS: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum ModelsError {
    #[error("empty training set")]
    EmptyTrain,
    #[error("row {row} has {got} features, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("feature count {features} does not match {names} feature names")]
    NameMismatch { features: usize, names: usize },
    #[error("target length {target} does not match {rows} rows")]
    TargetMismatch { rows: usize, target: usize },
    #[error("non-finite value in dataset")]
    NonFinite,
    #[error("need at least {CV_FOLDS} rows for {CV_FOLDS}-fold cross-validation, got {0}")]
    TooFewRows(usize),
    #[error("singular system, pass a ridge lambda > 0")]
    SingularSystem,
    #[error("ridge lambda must be finite and >= 0, got {0}")]
    InvalidLambda(f64),
    #[error("k must be between 1 and the training size {n_train}, got {k}")]
    InvalidK { k: usize, n_train: usize },
    #[error("empty hyperparameter grid")]
    EmptyGrid,
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// A feature matrix with its target column, validated on construction:
/// rectangular, finite, names aligned.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    target: Vec<f64>,
    feature_names: Vec<String>,
    target_name: String,
}

impl Dataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        target: Vec<f64>,
        feature_names: Vec<String>,
        target_name: String,
    ) -> Result<Self, ModelsError> {
        if features.is_empty() {
            return Err(ModelsError::EmptyTrain);
        }
        let p = feature_names.len();
        for (i, row) in features.iter().enumerate() {
            if row.len() != p {
                return Err(ModelsError::RaggedRow { row: i, expected: p, got: row.len() });
            }
        }
        if target.len() != features.len() {
            return Err(ModelsError::TargetMismatch {
                rows: features.len(),
                target: target.len(),
            });
        }
        let finite = features.iter().flatten().chain(&target).all(|v| v.is_finite());
        if !finite {
            return Err(ModelsError::NonFinite);
        }
        Ok(Self { features, target, feature_names, target_name })
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }

    pub fn p(&self) -> usize {
        self.feature_names.len()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }
}

/// Ten disjoint index folds covering 0..n, sizes differing by at most one,
/// reproducible from the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct CvPlan {
    folds: Vec<Vec<usize>>,
    seed: u64,
}

impl CvPlan {
    pub fn new(n: usize, seed: u64) -> Result<Self, ModelsError> {
        if n < CV_FOLDS {
            return Err(ModelsError::TooFewRows(n));
        }
        let mut indices: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        indices.shuffle(&mut rng);

        let base = n / CV_FOLDS;
        let extra = n % CV_FOLDS;
        let mut folds = Vec::with_capacity(CV_FOLDS);
        let mut at = 0;
        for f in 0..CV_FOLDS {
            let size = base + usize::from(f < extra);
            folds.push(indices[at..at + size].to_vec());
            at += size;
        }
        Ok(Self { folds, seed })
    }

    pub fn folds(&self) -> &[Vec<usize>] {
        &self.folds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Predicts the training-target mean for every test row.
pub fn fit_predict_mean(train_target: &[f64], n_test: usize) -> Result<Vec<f64>, ModelsError> {
    if train_target.is_empty() {
        return Err(ModelsError::EmptyTrain);
    }
    let mean = train_target.iter().sum::<f64>() / train_target.len() as f64;
    Ok(vec![mean; n_test])
}

/// Least squares with intercept via the normal equations, with `lambda`
/// added to the diagonal. `lambda = 0` is allowed but errors on singular
/// systems; [`DEFAULT_RIDGE`] keeps them solvable.
pub fn fit_predict_ols(
    train_x: &[Vec<f64>],
    train_y: &[f64],
    test_x: &[Vec<f64>],
    lambda: f64,
) -> Result<Vec<f64>, ModelsError> {
    if train_x.is_empty() {
        return Err(ModelsError::EmptyTrain);
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(ModelsError::InvalidLambda(lambda));
    }
    let p = train_x[0].len();
    let d = p + 1; // intercept first

    // Normal equations: G = X'X + lambda I, b = X'y, on the augmented X.
    let mut g = vec![vec![0.0; d]; d];
    let mut b = vec![0.0; d];
    for (row, &y) in train_x.iter().zip(train_y) {
        let aug = |j: usize| if j == 0 { 1.0 } else { row[j - 1] };
        for i in 0..d {
            b[i] += aug(i) * y;
            for j in i..d {
                g[i][j] += aug(i) * aug(j);
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            g[i][j] = g[j][i];
        }
        g[i][i] += lambda;
    }

    let beta = solve_symmetric(g, b)?;
    Ok(test_x
        .iter()
        .map(|row| beta[0] + row.iter().zip(&beta[1..]).map(|(x, c)| x * c).sum::<f64>())
        .collect())
}

/// Gaussian elimination with partial pivoting.
fn solve_symmetric(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, ModelsError> {
    let n = b.len();
    let scale: f64 = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))
            .expect("non-empty range");
        if a[pivot][col].abs() < 1e-12 * scale {
            return Err(ModelsError::SingularSystem);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let dot: f64 = (col + 1..n).map(|k| a[col][k] * x[k]).sum();
        x[col] = (b[col] - dot) / a[col][col];
    }
    Ok(x)
}

/// Mean target of the k nearest training rows under Euclidean distance on
/// features standardized by the training mean and standard deviation.
/// Distance ties break toward the lower training row index.
pub fn fit_predict_knn(
    train_x: &[Vec<f64>],
    train_y: &[f64],
    test_x: &[Vec<f64>],
    k: usize,
) -> Result<Vec<f64>, ModelsError> {
    let n = train_x.len();
    if n == 0 {
        return Err(ModelsError::EmptyTrain);
    }
    if k == 0 || k > n {
        return Err(ModelsError::InvalidK { k, n_train: n });
    }
    let p = train_x[0].len();

    let mut mean = vec![0.0; p];
    for row in train_x {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut scale = vec![0.0; p];
    for row in train_x {
        for (s, (x, m)) in scale.iter_mut().zip(row.iter().zip(&mean)) {
            let d = x - m;
            *s += d * d;
        }
    }
    for s in &mut scale {
        // Constant features contribute no distance; sample std elsewhere.
        *s = if *s == 0.0 || n == 1 { 1.0 } else { (*s / (n - 1) as f64).sqrt() };
    }

    let standardized: Vec<Vec<f64>> = train_x
        .iter()
        .map(|row| {
            row.iter()
                .zip(mean.iter().zip(&scale))
                .map(|(x, (m, s))| (x - m) / s)
                .collect()
        })
        .collect();

    let mut out = Vec::with_capacity(test_x.len());
    for row in test_x {
        let q: Vec<f64> = row
            .iter()
            .zip(mean.iter().zip(&scale))
            .map(|(x, (m, s))| (x - m) / s)
            .collect();
        let mut dist: Vec<(f64, usize)> = standardized
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let d2: f64 = t.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        dist.sort_unstable_by(|a, b| {
            a.0.partial_cmp(&b.0).expect("finite distance").then(a.1.cmp(&b.1))
        });
        let sum: f64 = dist[..k].iter().map(|&(_, i)| train_y[i]).sum();
        out.push(sum / k as f64);
    }
    Ok(out)
}

/// One learner with its hyperparameter grid.
#[derive(Debug, Clone, PartialEq)]
pub enum LearnerSpec {
    Mean,
    Ols { lambdas: Vec<f64> },
    Knn { ks: Vec<usize> },
}

impl LearnerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            LearnerSpec::Mean => "mean",
            LearnerSpec::Ols { .. } => "ols",
            LearnerSpec::Knn { .. } => "knn",
        }
    }

    fn grid(&self) -> Vec<HyperPoint> {
        match self {
            LearnerSpec::Mean => vec![HyperPoint::None],
            LearnerSpec::Ols { lambdas } => {
                lambdas.iter().map(|&l| HyperPoint::Lambda(l)).collect()
            }
            LearnerSpec::Knn { ks } => ks.iter().map(|&k| HyperPoint::K(k)).collect(),
        }
    }
}

/// One point of a hyperparameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HyperPoint {
    None,
    Lambda(f64),
    K(usize),
}

impl fmt::Display for HyperPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperPoint::None => f.write_str("-"),
            HyperPoint::Lambda(l) => write!(f, "lambda={l}"),
            HyperPoint::K(k) => write!(f, "k={k}"),
        }
    }
}

use std::fmt;

/// Winner of a grid search and the predictions that won it.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub best: HyperPoint,
    pub best_sera: f64,
    /// Out-of-fold predictions for the winning grid point, index-aligned
    /// with the dataset.
    pub oof_predictions: Vec<f64>,
}

/// Scores every grid point by SERA of its out-of-fold predictions under
/// `f` and returns the minimiser; ties keep the earlier grid point.
pub fn select_by_sera(
    dataset: &Dataset,
    spec: &LearnerSpec,
    f: &RelevanceFunction,
    plan: &CvPlan,
    sera_step: f64,
) -> Result<Selection, ModelsError> {
    let grid = spec.grid();
    if grid.is_empty() {
        return Err(ModelsError::EmptyGrid);
    }
    let mut best: Option<Selection> = None;
    for point in grid {
        let oof = oof_predictions(dataset, point, plan)?;
        let area = sera(&oof, dataset.target(), f, sera_step)?.area;
        if best.as_ref().is_none_or(|b| area < b.best_sera) {
            best = Some(Selection { best: point, best_sera: area, oof_predictions: oof });
        }
    }
    Ok(best.expect("non-empty grid"))
}

/// Predictions for every row from the model trained on the other folds.
pub fn oof_predictions(
    dataset: &Dataset,
    point: HyperPoint,
    plan: &CvPlan,
) -> Result<Vec<f64>, ModelsError> {
    let n = dataset.n();
    let mut out = vec![f64::NAN; n];
    for fold in plan.folds() {
        let in_fold = {
            let mut mask = vec![false; n];
            for &i in fold {
                mask[i] = true;
            }
            mask
        };
        let mut train_x = Vec::with_capacity(n - fold.len());
        let mut train_y = Vec::with_capacity(n - fold.len());
        for i in 0..n {
            if !in_fold[i] {
                train_x.push(dataset.features()[i].clone());
                train_y.push(dataset.target()[i]);
            }
        }
        let test_x: Vec<Vec<f64>> =
            fold.iter().map(|&i| dataset.features()[i].clone()).collect();
        let preds = match point {
            HyperPoint::None => fit_predict_mean(&train_y, test_x.len())?,
            HyperPoint::Lambda(l) => fit_predict_ols(&train_x, &train_y, &test_x, l)?,
            HyperPoint::K(k) => fit_predict_knn(&train_x, &train_y, &test_x, k)?,
        };
        for (&i, p) in fold.iter().zip(preds) {
            out[i] = p;
        }
    }
    debug_assert!(out.iter().all(|v| !v.is_nan()), "every index covered once");
    Ok(out)
}

/// A seeded random subset of a grid, at most `max_points` long, in grid
/// order. Supports random search over large grids.
pub fn grid_subset<T: Clone>(grid: &[T], max_points: usize, seed: u64) -> Vec<T> {
    if grid.len() <= max_points {
        return grid.to_vec();
    }
    let mut idx: Vec<usize> = (0..grid.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    let mut keep = idx[..max_points].to_vec();
    keep.sort_unstable();
    keep.into_iter().map(|i| grid[i].clone()).collect()
}
