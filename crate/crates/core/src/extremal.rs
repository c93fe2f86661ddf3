//! Limit objects: marked point measures on `[0, 1] × E^d`, cluster Poisson
//! processes, extremal processes and their finite-dimensional laws, and the
//! exponent measures `ν` and `ν^(u)`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::cadlag::StepFunction;
use crate::error::{domain, invalid, Error, Result};
use crate::inference::TailEnsemble;
use crate::mc::SimRng;
use crate::models::{pareto_sample, TimeSeries};

fn max_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, &v| m.max(v))
}

/// Finite set of points `(t_i, x_i)` with `t_i ∈ [0, 1]` and marks in `E^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMeasure {
    dim: usize,
    times: Vec<f64>,
    marks: Vec<f64>,
}

impl PointMeasure {
    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self { dim, times: Vec::new(), marks: Vec::new() }
    }

    pub fn from_points(dim: usize, points: &[(f64, Vec<f64>)]) -> Result<Self> {
        let mut pm = Self::empty(dim);
        for (t, x) in points {
            pm.push(*t, x)?;
        }
        Ok(pm)
    }

    pub fn push(&mut self, t: f64, mark: &[f64]) -> Result<()> {
        if mark.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: mark.len() });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(invalid(format!("point time {t} outside [0, 1]")));
        }
        if mark.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid("marks must be finite and nonnegative"));
        }
        if max_norm(mark) == 0.0 {
            return Err(invalid("marks must be nonzero"));
        }
        self.times.push(t);
        self.marks.extend_from_slice(mark);
        Ok(())
    }

    /// `N_n^* = Σ_i δ_{(i/n, X_i/a_n)}`, skipping all-zero rows.
    pub fn from_scaled_series(ts: &TimeSeries, a_n: f64) -> Result<Self> {
        ts.require_nonnegative()?;
        if !(a_n > 0.0 && a_n.is_finite()) {
            return Err(invalid("a_n must be positive"));
        }
        let n = ts.len();
        let mut pm = Self::empty(ts.dim());
        for (i, row) in ts.rows().enumerate() {
            let scaled: Vec<f64> = row.iter().map(|v| v / a_n).collect();
            if max_norm(&scaled) > 0.0 {
                pm.push((i + 1) as f64 / n as f64, &scaled)?;
            }
        }
        Ok(pm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.times[i]
    }

    pub fn mark(&self, i: usize) -> &[f64] {
        &self.marks[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.times.iter().copied().zip(self.marks.chunks_exact(self.dim))
    }

    /// Running componentwise max of the mark components exceeding `floor`
    /// (all components when `floor` is `None`); empty prefixes give `0`.
    pub(crate) fn running_max(&self, floor: Option<f64>) -> StepFunction {
        let d = self.dim;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.times[a].total_cmp(&self.times[b]));

        let mut breakpoints = vec![0.0];
        let mut values = vec![0.0; d];
        let mut current = vec![0.0; d];
        let mut k = 0;
        while k < order.len() {
            let t = self.times[order[k]];
            while k < order.len() && self.times[order[k]] == t {
                for (c, &x) in current.iter_mut().zip(self.mark(order[k])) {
                    if floor.is_none_or(|u| x > u) && x > *c {
                        *c = x;
                    }
                }
                k += 1;
            }
            if t == 0.0 {
                values[..d].copy_from_slice(&current);
            } else {
                breakpoints.push(t);
                values.extend_from_slice(&current);
            }
        }
        StepFunction::from_flat(d, breakpoints, values).expect("running maxima are canonicalizable")
    }
}

/// `M̃(t) = ∨_{t_k ≤ t} j_k`.
pub fn sample_extremal_process(pm: &PointMeasure) -> StepFunction {
    pm.running_max(None)
}

/// Law of one cluster `Σ_j δ_{Z_j}`, whose points with `‖Z_j‖ > 1` are kept.
pub trait ClusterSampler: Sync {
    fn dim(&self) -> usize;
    fn sample_cluster(&self, rng: &mut SimRng) -> Vec<Vec<f64>>;
}

/// Independent case: one point per cluster, Pareto(`alpha`) magnitude on an
/// axis chosen with probability proportional to `weights`.
#[derive(Debug, Clone, PartialEq)]
pub struct IidCluster {
    alpha: f64,
    cumulative: Vec<f64>,
}

impl IidCluster {
    pub fn new(alpha: f64, weights: &[f64]) -> Result<Self> {
        check_weights(weights)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha must be positive"));
        }
        let total: f64 = weights.iter().sum();
        let cumulative = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w / total;
                Some(*acc)
            })
            .collect();
        Ok(Self { alpha, cumulative })
    }

    pub fn scalar(alpha: f64) -> Self {
        Self { alpha, cumulative: vec![1.0] }
    }
}

impl ClusterSampler for IidCluster {
    fn dim(&self) -> usize {
        self.cumulative.len()
    }

    fn sample_cluster(&self, rng: &mut SimRng) -> Vec<Vec<f64>> {
        let mut mark = vec![0.0; self.dim()];
        let axis = if self.dim() == 1 {
            0
        } else {
            let v: f64 = rng.random();
            self.cumulative.iter().position(|&c| v < c).unwrap_or(self.dim() - 1)
        };
        mark[axis] = pareto_sample(self.alpha, 1.0, rng);
        vec![mark]
    }
}

/// Clusters resampled uniformly from the anti-clustered windows of a tail
/// ensemble, i.e. from `(Σ_j δ_{Y_j} | sup_{i ≤ -1} ‖Y_i‖ ≤ 1)`.
#[derive(Debug, Clone)]
pub struct EnsembleCluster {
    dim: usize,
    clusters: Vec<Vec<Vec<f64>>>,
}

impl EnsembleCluster {
    pub fn new(tails: &TailEnsemble) -> Result<Self> {
        let clusters: Vec<Vec<Vec<f64>>> = (0..tails.len())
            .filter(|&s| tails.backward_clear(s))
            .map(|s| {
                (-(tails.window() as isize)..=tails.window() as isize)
                    .map(|lag| tails.at(s, lag).to_vec())
                    .filter(|y| max_norm(y) > 1.0)
                    .collect()
            })
            .collect();
        if clusters.is_empty() {
            return Err(Error::Estimation("no window satisfies the anti-clustering condition".into()));
        }
        Ok(Self { dim: tails.dim(), clusters })
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

impl ClusterSampler for EnsembleCluster {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample_cluster(&self, rng: &mut SimRng) -> Vec<Vec<f64>> {
        self.clusters[rng.random_range(0..self.clusters.len())].clone()
    }
}

fn poisson_count(mean: f64, rng: &mut SimRng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let k: f64 = Poisson::new(mean).expect("positive finite mean").sample(rng);
    k as u64
}

/// `N^(u) = Σ_i Σ_j δ_{(T_i, u Z_ij)}` restricted to `‖·‖ > u`, with the
/// `T_i` a Poisson process of intensity `θ u^{-α}` on `[0, 1]`.
pub fn sample_cluster_process<C: ClusterSampler + ?Sized>(
    theta: f64,
    alpha: f64,
    sampler: &C,
    u: f64,
    rng: &mut SimRng,
) -> Result<PointMeasure> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(domain("theta must lie in (0, 1]"));
    }
    if !(alpha > 0.0 && u > 0.0 && alpha.is_finite() && u.is_finite()) {
        return Err(domain("alpha and u must be positive"));
    }
    let count = poisson_count(theta * u.powf(-alpha), rng);
    let mut pm = PointMeasure::empty(sampler.dim());
    for _ in 0..count {
        let t: f64 = rng.random();
        for z in sampler.sample_cluster(rng) {
            if max_norm(&z) > 1.0 {
                let mark: Vec<f64> = z.iter().map(|v| u * v).collect();
                pm.push(t, &mark)?;
            }
        }
    }
    Ok(pm)
}

/// `exp(-θ x^{-α})`.
pub fn frechet_norm_cdf(x: f64, theta: f64, alpha: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("the Fréchet CDF is evaluated at x > 0"));
    }
    Ok((-theta * x.powf(-alpha)).exp())
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(invalid("weights must be finite and nonnegative"));
    }
    if weights.iter().sum::<f64>() <= 0.0 {
        return Err(invalid("weights must not all vanish"));
    }
    Ok(())
}

/// Exponent measure together with its `ν([[0, x]]^c)` evaluator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentMeasureModel {
    /// Mass on the axes: `ν([[0, x]]^c) = Σ_k w_k (x^k)^{-α}`.
    IidFrechet { alpha: f64, weights: Vec<f64> },
    /// `ν^(u)` estimated from the cluster maxima
    /// `u ∨_{i ≥ 0} (Y_i^j 1{Y_i^j > 1})_j` of the anti-clustered windows.
    Empirical {
        u: f64,
        alpha: f64,
        /// Number of ensemble windows, including those failing the
        /// anti-clustering condition.
        windows: usize,
        /// One cluster maximum per anti-clustered window.
        maxima: Vec<Vec<f64>>,
    },
}

impl ExponentMeasureModel {
    pub fn iid_scalar(alpha: f64) -> Self {
        ExponentMeasureModel::IidFrechet { alpha, weights: vec![1.0] }
    }

    pub fn empirical(tails: &TailEnsemble, u: f64, alpha: f64) -> Result<Self> {
        if !(u > 0.0 && alpha > 0.0) {
            return Err(domain("u and alpha must be positive"));
        }
        if tails.is_empty() {
            return Err(Error::Estimation("empty tail ensemble".into()));
        }
        let maxima = (0..tails.len())
            .filter(|&s| tails.backward_clear(s))
            .map(|s| cluster_maximum(tails, s, u))
            .collect();
        Ok(ExponentMeasureModel::Empirical { u, alpha, windows: tails.len(), maxima })
    }

    pub fn dim(&self) -> usize {
        match self {
            ExponentMeasureModel::IidFrechet { weights, .. } => weights.len(),
            ExponentMeasureModel::Empirical { maxima, .. } => maxima.first().map_or(1, Vec::len),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExponentMeasureModel::IidFrechet { alpha, weights } => {
                check_weights(weights)?;
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    return Err(invalid("alpha must be positive"));
                }
                Ok(())
            }
            ExponentMeasureModel::Empirical { u, alpha, windows, maxima } => {
                if !(*u > 0.0 && *alpha > 0.0) || *windows == 0 || maxima.len() > *windows {
                    return Err(invalid("malformed empirical exponent measure"));
                }
                Ok(())
            }
        }
    }

    /// `ν([[0, x]]^c)`; infinite when some coordinate of `x` is zero and the
    /// measure charges that axis.
    pub fn nu_complement(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if x.iter().any(|v| !(*v >= 0.0)) {
            return Err(domain("thresholds must be nonnegative"));
        }
        Ok(match self {
            ExponentMeasureModel::IidFrechet { alpha, weights } => weights
                .iter()
                .zip(x)
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, xk)| w * xk.powf(-alpha))
                .sum(),
            ExponentMeasureModel::Empirical { u, alpha, windows, maxima } => {
                let hits = maxima.iter().filter(|m| m.iter().zip(x).any(|(a, b)| a > b)).count();
                u.powf(-alpha) * hits as f64 / *windows as f64
            }
        })
    }

    /// Simulates `M̃` on `[0, 1]` exactly above the truncation level `u`: the
    /// Poisson points of `λ × ν` with norm at most `u` are dropped.
    pub fn sample_process(&self, u: f64, rng: &mut SimRng) -> Result<StepFunction> {
        self.validate()?;
        if !(u > 0.0) {
            return Err(domain("truncation level must be positive"));
        }
        let pm = match self {
            ExponentMeasureModel::IidFrechet { alpha, weights } => {
                let total: f64 = weights.iter().sum();
                let cluster = IidCluster::new(*alpha, weights)?;
                let count = poisson_count(total * u.powf(-alpha), rng);
                let mut pm = PointMeasure::empty(weights.len());
                for _ in 0..count {
                    let t: f64 = rng.random();
                    let mut mark = cluster.sample_cluster(rng).remove(0);
                    mark.iter_mut().for_each(|v| *v *= u);
                    pm.push(t, &mark)?;
                }
                pm
            }
            ExponentMeasureModel::Empirical { u: base, alpha, windows, maxima } => {
                if u < *base {
                    return Err(domain("cannot truncate below the ensemble threshold u"));
                }
                let count = poisson_count(base.powf(-alpha) * maxima.len() as f64 / *windows as f64, rng);
                let mut pm = PointMeasure::empty(self.dim());
                for _ in 0..count {
                    let t: f64 = rng.random();
                    let mark = &maxima[rng.random_range(0..maxima.len())];
                    if max_norm(mark) > u {
                        pm.push(t, mark)?;
                    }
                }
                pm
            }
        };
        Ok(sample_extremal_process(&pm))
    }
}

fn cluster_maximum(tails: &TailEnsemble, s: usize, u: f64) -> Vec<f64> {
    let mut out = vec![0.0; tails.dim()];
    for lag in 0..=tails.window() as isize {
        for (o, &y) in out.iter_mut().zip(tails.at(s, lag)) {
            if y > 1.0 && u * y > *o {
                *o = u * y;
            }
        }
    }
    out
}

/// `P(M̃(t_1) ≤ x_1, .., M̃(t_m) ≤ x_m)
///   = Π_k exp(-(t_k - t_{k-1}) ν([[0, ∧_{i ≥ k} x_i]]^c))`, with `t_0 = 0`.
pub fn extremal_fidi_cdf(model: &ExponentMeasureModel, times: &[f64], thresholds: &[Vec<f64>]) -> Result<f64> {
    if times.is_empty() || times.len() != thresholds.len() {
        return Err(invalid("need one threshold vector per time"));
    }
    if times.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(domain("times must lie in [0, 1]"));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("times must be strictly increasing"));
    }
    let d = model.dim();
    let m = times.len();
    // suffix minima ∧_{i ≥ k} x_i
    let mut suffix = vec![vec![f64::INFINITY; d]; m];
    for k in (0..m).rev() {
        if thresholds[k].len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: thresholds[k].len() });
        }
        for j in 0..d {
            let next = if k + 1 < m { suffix[k + 1][j] } else { f64::INFINITY };
            suffix[k][j] = thresholds[k][j].min(next);
        }
    }
    let mut log_p = 0.0;
    let mut prev = 0.0;
    for k in 0..m {
        let dt = times[k] - prev;
        if dt > 0.0 {
            log_p -= dt * model.nu_complement(&suffix[k])?;
        }
        prev = times[k];
    }
    Ok(log_p.exp())
}

/// Monte Carlo estimate of `ν^(u)(((x, y]])` from a tail ensemble. The upper
/// corner may contain `+∞`.
pub fn estimate_nu_u(tails: &TailEnsemble, u: f64, alpha: f64, lower: &[f64], upper: &[f64]) -> Result<f64> {
    let d = tails.dim();
    if lower.len() != d || upper.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: lower.len().min(upper.len()) });
    }
    if lower.iter().any(|x| !(*x >= 0.0)) || lower.iter().zip(upper).any(|(x, y)| !(x < y)) {
        return Err(domain("box corners must satisfy 0 <= x < y"));
    }
    if lower.iter().all(|&x| x == 0.0) {
        return Err(domain("box touches zero"));
    }
    if !(u > 0.0 && alpha > 0.0) {
        return Err(domain("u and alpha must be positive"));
    }
    if tails.is_empty() {
        return Err(Error::Estimation("empty tail ensemble".into()));
    }
    let hits = (0..tails.len())
        .filter(|&s| tails.backward_clear(s))
        .filter(|&s| {
            let m = cluster_maximum(tails, s, u);
            m.iter().zip(lower.iter().zip(upper)).all(|(v, (x, y))| x < v && v <= y)
        })
        .count();
    Ok(u.powf(-alpha) * hits as f64 / tails.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::stream;

    #[test]
    fn extremal_process_of_single_point() {
        let pm = PointMeasure::from_points(2, &[(0.5, vec![3.0, 1.0])]).unwrap();
        let f = sample_extremal_process(&pm);
        assert_eq!(f.breakpoints(), &[0.0, 0.5]);
        assert_eq!(f.plateau(0), &[0.0, 0.0]);
        assert_eq!(f.plateau(1), &[3.0, 1.0]);
        assert_eq!(sample_extremal_process(&PointMeasure::empty(3)), StepFunction::zero(3));
    }

    #[test]
    fn points_at_time_zero_set_the_initial_value() {
        let pm = PointMeasure::from_points(1, &[(0.0, vec![2.0]), (0.3, vec![1.0])]).unwrap();
        let f = sample_extremal_process(&pm);
        assert!(f.is_constant());
        assert_eq!(f.terminal(), &[2.0]);
    }

    #[test]
    fn point_measure_validation() {
        let mut pm = PointMeasure::empty(1);
        assert!(pm.push(1.5, &[1.0]).is_err());
        assert!(pm.push(0.5, &[0.0]).is_err());
        assert!(pm.push(0.5, &[-1.0]).is_err());
        assert!(pm.push(0.5, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn fidi_examples() {
        let m = ExponentMeasureModel::iid_scalar(1.0);
        let p = extremal_fidi_cdf(&m, &[0.5], &[vec![2.0]]).unwrap();
        assert!((p - (-0.25f64).exp()).abs() < 1e-15);
        let collapsed = extremal_fidi_cdf(&m, &[0.3, 0.8], &[vec![2.0], vec![2.0]]).unwrap();
        assert!((collapsed - (-0.8f64 / 2.0).exp()).abs() < 1e-15);
        let joint = extremal_fidi_cdf(&m, &[0.5, 1.0], &[vec![2.0], vec![3.0]]).unwrap();
        assert!((joint - (-0.5f64 / 2.0).exp() * (-0.5f64 / 3.0).exp()).abs() < 1e-15);
        assert!(extremal_fidi_cdf(&m, &[0.5, 0.5], &[vec![2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn fidi_uses_suffix_minima() {
        let m = ExponentMeasureModel::iid_scalar(1.0);
        // x_1 = 3 > x_2 = 1: the first factor sees min(3, 1) = 1
        let p = extremal_fidi_cdf(&m, &[0.5, 1.0], &[vec![3.0], vec![1.0]]).unwrap();
        assert!((p - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn frechet_norm_cdf_examples() {
        assert!((frechet_norm_cdf(1.0, 1.0, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((frechet_norm_cdf(1.0, 0.5, 1.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!(frechet_norm_cdf(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn cluster_process_marks_exceed_u() {
        let sampler = IidCluster::new(1.0, &[0.5, 0.5]).unwrap();
        let mut rng = stream(1, 0);
        for _ in 0..200 {
            let pm = sample_cluster_process(1.0, 1.0, &sampler, 0.2, &mut rng).unwrap();
            for (t, x) in pm.points() {
                assert!((0.0..=1.0).contains(&t));
                assert!(max_norm(x) > 0.2);
                assert_eq!(x.iter().filter(|v| **v > 0.0).count(), 1);
            }
        }
    }

    #[test]
    fn iid_nu_complement_sums_axes() {
        let m = ExponentMeasureModel::IidFrechet { alpha: 2.0, weights: vec![1.0, 3.0] };
        let v = m.nu_complement(&[2.0, 1.0]).unwrap();
        assert!((v - (0.25 + 3.0)).abs() < 1e-15);
    }
}
