//! Robust distribution statistics used to derive automatic control points:
//! quantiles, IQR, the medcouple skewness statistic, and adjusted-boxplot
//! fences.

use thiserror::Error;

/// Errors produced by the statistics routines.
#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("sample too small: need at least 3 values, got {0}")]
    TooFewValues(usize),
    #[error("non-finite value in sample")]
    NonFinite,
    #[error("degenerate sample: all values identical")]
    DegenerateSample,
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
}

/// A validated sample of a continuous target variable.
///
/// Values are stored sorted ascending; all values are finite and there are
/// at least 3 of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Validates and sorts the given values into a sample.
    pub fn new(mut values: Vec<f64>) -> Result<Self, StatsError> {
        if values.is_empty() {
            return Err(StatsError::EmptySample);
        }
        if values.len() < 3 {
            return Err(StatsError::TooFewValues(values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
        values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
        Ok(Self { values })
    }

    /// Sorted sample values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Linear-interpolation quantile (the convention where `quantile(k/(n-1))`
    /// returns the `(k+1)`-th order statistic): `quantile(0)` is the minimum
    /// and `quantile(1)` the maximum.
    ///
    /// This convention is the default in most statistical software and is
    /// fixed here because the fence values below depend on it.
    pub fn quantile(&self, p: f64) -> Result<f64, StatsError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(StatsError::InvalidProbability(p));
        }
        let n = self.values.len();
        let h = (n - 1) as f64 * p;
        let j = h.floor() as usize;
        let g = h - h.floor();
        if j + 1 >= n {
            Ok(self.values[n - 1])
        } else {
            Ok((1.0 - g) * self.values[j] + g * self.values[j + 1])
        }
    }

    /// Sample median, `quantile(0.5)`.
    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid probability")
    }

    /// Sample standard deviation (n - 1 denominator).
    pub fn std_dev(&self) -> f64 {
        let n = self.values.len() as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        let ss = self
            .values
            .iter()
            .map(|v| {
                let d = v - mean;
                d * d
            })
            .sum::<f64>();
        (ss / (n - 1.0)).sqrt()
    }
}

/// Adjusted-boxplot whisker fences together with the statistics they were
/// derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct Fences {
    pub lower: f64,
    pub upper: f64,
    pub medcouple: f64,
    pub q1: f64,
    pub q3: f64,
}

/// Medcouple robust skewness statistic, in [-1, 1].
///
/// The median over all pairs `x_i <= m <= x_j` of the kernel
/// `h(x_i, x_j) = ((x_j - m) - (m - x_i)) / (x_j - x_i)` where `m` is the
/// sample median. Pairs of values tied with the median (the only case where
/// the denominator vanishes) use the standard sign convention: with `k`
/// median-equal values indexed `1..=k` in sample order, the pair `(i, j)`
/// contributes `sign(i + j - 1 - k)`.
///
/// Complexity is O(n^2), which is adequate at desk scale.
pub fn medcouple(sample: &Sample) -> Result<f64, StatsError> {
    let x = sample.values();
    let n = x.len();
    if x[0] == x[n - 1] {
        return Err(StatsError::DegenerateSample);
    }
    let m = sample.median();

    // Split around the median; values equal to m belong to both sides.
    let lower_end = x.partition_point(|&v| v <= m);
    let upper_start = x.partition_point(|&v| v < m);
    let ties = lower_end - upper_start;

    let mut kernels = Vec::with_capacity(lower_end * (n - upper_start));
    for (ti, &xi) in x[..lower_end].iter().enumerate() {
        for (tj, &xj) in x[upper_start..].iter().enumerate() {
            if xi == m && xj == m {
                // 1-based positions of xi and xj within the tied block.
                let i = (ti - upper_start) as i64 + 1;
                let j = tj as i64 + 1;
                kernels.push(((i + j - 1 - ties as i64).signum()) as f64);
            } else {
                kernels.push(((xj - m) - (m - xi)) / (xj - xi));
            }
        }
    }

    kernels.sort_unstable_by(|a, b| a.partial_cmp(b).expect("kernels are finite"));
    let k = kernels.len();
    let mc = if k % 2 == 1 {
        kernels[k / 2]
    } else {
        0.5 * (kernels[k / 2 - 1] + kernels[k / 2])
    };
    Ok(mc)
}

/// Adjusted-boxplot fences: the classic 1.5 IQR whiskers scaled by
/// exponentials of the medcouple, so the outlier thresholds follow the
/// sample's skew.
///
/// With `MC >= 0`: `lower = q1 - 1.5 e^(-4 MC) IQR`, `upper = q3 + 1.5 e^(3 MC) IQR`;
/// with `MC < 0` the exponents swap to `-3` and `4`.
pub fn adjusted_fences(sample: &Sample) -> Result<Fences, StatsError> {
    let mc = medcouple(sample)?;
    let q1 = sample.quantile(0.25)?;
    let q3 = sample.quantile(0.75)?;
    let iqr = q3 - q1;
    let (lo_exp, hi_exp) = if mc >= 0.0 { (-4.0, 3.0) } else { (-3.0, 4.0) };
    Ok(Fences {
        lower: q1 - 1.5 * (lo_exp * mc).exp() * iqr,
        upper: q3 + 1.5 * (hi_exp * mc).exp() * iqr,
        medcouple: mc,
        q1,
        q3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(values: &[f64]) -> Sample {
        Sample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn sample_rejects_bad_input() {
        assert_eq!(Sample::new(vec![]).unwrap_err(), StatsError::EmptySample);
        assert_eq!(
            Sample::new(vec![1.0, 2.0]).unwrap_err(),
            StatsError::TooFewValues(2)
        );
        assert_eq!(
            Sample::new(vec![1.0, f64::NAN, 3.0]).unwrap_err(),
            StatsError::NonFinite
        );
    }

    #[test]
    fn sample_sorts_on_construction() {
        let s = sample(&[3.0, 1.0, 2.0]);
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn quantile_median_odd() {
        assert_eq!(sample(&[1.0, 2.0, 3.0, 4.0, 5.0]).quantile(0.5).unwrap(), 3.0);
    }

    #[test]
    fn quantile_midpoint_interpolation() {
        assert_eq!(sample(&[1.0, 2.0, 3.0, 4.0]).quantile(0.5).unwrap(), 2.5);
    }

    #[test]
    fn quantile_exact_order_statistic() {
        let s = sample(&[10.0, 20.0, 30.0, 40.0, 50.0]);
        assert_eq!(s.quantile(0.25).unwrap(), 20.0);
    }

    #[test]
    fn quantile_extremes() {
        let s = sample(&[5.0, 1.0, 9.0]);
        assert_eq!(s.quantile(0.0).unwrap(), 1.0);
        assert_eq!(s.quantile(1.0).unwrap(), 9.0);
    }

    #[test]
    fn quantile_rejects_out_of_range_p() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            s.quantile(1.5),
            Err(StatsError::InvalidProbability(_))
        ));
    }

    #[test]
    fn medcouple_symmetric_samples_are_zero() {
        assert_eq!(medcouple(&sample(&[1.0, 2.0, 3.0])).unwrap(), 0.0);
        assert_eq!(medcouple(&sample(&[1.0, 2.0, 3.0, 4.0, 5.0])).unwrap(), 0.0);
    }

    // Pinned from the brute-force kernel enumeration in tests/invariants.rs.
    #[test]
    fn medcouple_skewed_fixture() {
        assert_eq!(medcouple(&sample(&[0.0, 1.0, 2.0, 3.0, 10.0])).unwrap(), 0.0);
        let mc = medcouple(&sample(&[1.0, 2.0, 2.0, 3.0, 10.0])).unwrap();
        assert!((mc - 7.0 / 18.0).abs() < 1e-15, "mc = {mc}");
    }

    // Exercises the sign convention for kernels with a zero denominator.
    #[test]
    fn medcouple_median_ties() {
        assert_eq!(medcouple(&sample(&[5.0, 5.0, 5.0, 6.0])).unwrap(), 0.5);
    }

    #[test]
    fn medcouple_constant_sample_errors() {
        assert_eq!(
            medcouple(&sample(&[4.0, 4.0, 4.0])).unwrap_err(),
            StatsError::DegenerateSample
        );
    }

    #[test]
    fn fences_collapse_to_classic_boxplot_when_unskewed() {
        // q1 = 2, q3 = 4, MC = 0: classic 1.5 IQR whiskers.
        let f = adjusted_fences(&sample(&[1.0, 2.0, 3.0, 4.0, 5.0])).unwrap();
        assert_eq!(f.medcouple, 0.0);
        assert!((f.lower - -1.0).abs() < 1e-12);
        assert!((f.upper - 7.0).abs() < 1e-12);
    }

    #[test]
    fn fences_skewed_fixture() {
        let f = adjusted_fences(&sample(&[0.0, 1.0, 2.0, 3.0, 10.0])).unwrap();
        assert_eq!(f.medcouple, 0.0);
        assert_eq!((f.q1, f.q3), (1.0, 3.0));
        assert!((f.lower - -2.0).abs() < 1e-12);
        assert!((f.upper - 6.0).abs() < 1e-12);
    }

    #[test]
    fn fences_use_negative_branch_for_left_skew() {
        // Mirror of the positive-MC fixture: MC = -7/18.
        let f = adjusted_fences(&sample(&[-1.0, -2.0, -2.0, -3.0, -10.0])).unwrap();
        let mc: f64 = -7.0 / 18.0;
        assert!((f.medcouple - mc).abs() < 1e-15);
        assert_eq!((f.q1, f.q3), (-3.0, -2.0));
        assert!((f.lower - (-3.0 - 1.5 * (-3.0 * mc).exp())).abs() < 1e-12);
        assert!((f.upper - (-2.0 + 1.5 * (4.0 * mc).exp())).abs() < 1e-12);
    }

    #[test]
    fn fences_ordering_invariant() {
        for vals in [
            vec![0.0, 1.0, 2.0, 3.0, 10.0],
            vec![5.0, 5.0, 5.0, 6.0],
            vec![-4.0, 0.0, 0.5, 1.0, 100.0],
        ] {
            let f = adjusted_fences(&sample(&vals)).unwrap();
            assert!(f.lower <= f.q1 && f.q1 <= f.q3 && f.q3 <= f.upper);
            assert!((-1.0..=1.0).contains(&f.medcouple));
        }
    }
}
