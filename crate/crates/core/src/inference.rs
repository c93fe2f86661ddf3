//! Estimators and diagnostics: Hill tail index, extremal index, empirical
//! tail process, anti-clustering and small-jump probes.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::maxima::timeless_max_below;
use crate::mc::{derive_seed, empirical_quantile, stream, Proportion, Runner};
use crate::models::{ModelSpec, TimeSeries};

const THETA_TAG: u64 = 0x7e7a;
const TAIL_TAG: u64 = 0x7a11;
const ANTI_TAG: u64 = 0xa47;
const SMALL_TAG: u64 = 0x5a11;

fn max_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, &v| m.max(v))
}

/// Windows `x^{-1} X_{t-w..t+w}` around exceedances `‖X_t‖ > x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEnsemble {
    dim: usize,
    window: usize,
    threshold: f64,
    data: Vec<f64>,
}

impl TailEnsemble {
    /// Collects every exceedance of `threshold` whose full window fits in the
    /// series; boundary windows are dropped.
    pub fn from_series(ts: &TimeSeries, threshold: f64, window: usize) -> Result<Self> {
        ts.require_nonnegative()?;
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(invalid("tail threshold must be positive"));
        }
        let (n, d) = (ts.len(), ts.dim());
        let mut data = Vec::new();
        if n > 2 * window {
            for t in window..n - window {
                if max_norm(ts.row(t)) > threshold {
                    for s in t - window..=t + window {
                        data.extend(ts.row(s).iter().map(|v| v / threshold));
                    }
                }
            }
        }
        if data.is_empty() {
            return Err(Error::Estimation(format!("no interior exceedances of {threshold}")));
        }
        Ok(Self { dim: d, window, threshold, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.data.len() / (self.dim * (2 * self.window + 1))
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `Y_lag` of sample `s`, for `|lag| ≤ w`.
    pub fn at(&self, s: usize, lag: isize) -> &[f64] {
        let w = self.window as isize;
        assert!(lag.abs() <= w, "lag {lag} outside window {w}");
        let row = s * (2 * self.window + 1) + (lag + w) as usize;
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn center_norm(&self, s: usize) -> f64 {
        max_norm(self.at(s, 0))
    }

    /// `sup_{-w ≤ i ≤ -1} ‖Y_i‖ ≤ 1`.
    pub fn backward_clear(&self, s: usize) -> bool {
        (1..=self.window as isize).all(|i| max_norm(self.at(s, -i)) <= 1.0)
    }

    /// `sup_{1 ≤ i ≤ w} ‖Y_i‖ ≤ 1`.
    pub fn forward_clear(&self, s: usize) -> bool {
        (1..=self.window as isize).all(|i| max_norm(self.at(s, i)) <= 1.0)
    }

    /// Fraction of samples with `‖Y_0‖ > y`.
    pub fn center_survival(&self, y: f64) -> Proportion {
        Proportion::from_flags((0..self.len()).map(|s| self.center_norm(s) > y))
    }
}

/// How the conditioning level of a tail ensemble is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailThreshold {
    Absolute { x: f64 },
    /// Empirical `p`-quantile of `‖X_i‖` along the simulated path.
    Quantile { p: f64 },
}

/// Simulates one path of length `n` and collects its tail ensemble.
pub fn tail_process_sample(spec: &ModelSpec, n: usize, threshold: TailThreshold, w: usize) -> Result<TailEnsemble> {
    let mut rng = stream(derive_seed(spec.seed, TAIL_TAG), 0);
    let ts = spec.sample_with(n, &mut rng)?;
    ts.require_nonnegative()?;
    let x = match threshold {
        TailThreshold::Absolute { x } => x,
        TailThreshold::Quantile { p } => {
            if !(0.0 < p && p < 1.0) {
                return Err(domain("quantile level must lie in (0, 1)"));
            }
            let mut norms = ts.norms();
            norms.sort_by(f64::total_cmp);
            empirical_quantile(&norms, p)
        }
    };
    TailEnsemble::from_series(&ts, x, w)
}

/// `θ = P(sup_{i ≥ 1} ‖Y_i‖ ≤ 1)`, truncated to the ensemble window.
pub fn theta_from_ensemble(tails: &TailEnsemble) -> Proportion {
    Proportion::from_flags((0..tails.len()).map(|s| tails.forward_clear(s)))
}

/// Hill estimate of the tail index from the top `k` order statistics.
pub fn hill_estimator(values: &[f64], k: usize) -> Result<f64> {
    if !(2 <= k && k < values.len()) {
        return Err(invalid(format!("need 2 <= k < {}, got k = {k}", values.len())));
    }
    if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(domain("Hill estimation needs positive finite data"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let base = sorted[k].ln();
    let mean = sorted[..k].iter().map(|x| x.ln() - base).sum::<f64>() / k as f64;
    if !(mean > 0.0) {
        return Err(Error::Estimation("top order statistics are tied".into()));
    }
    Ok(1.0 / mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThetaMethod {
    /// `-ln P̂(max_{i ≤ n} ‖X_i‖ ≤ u_n) / τ` over independent paths.
    Definition,
    /// Exceedance blocks over exceedances, blocks of length `r_n`
    /// (default `⌊n^0.6⌋`).
    Blocks { r_n: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaEstimate {
    /// Clamped to `[0, 1]`.
    pub theta: f64,
    pub raw: f64,
    pub stderr: f64,
    /// `u_n` with `n P(‖X_1‖ > u_n) ≈ τ`.
    pub threshold: f64,
    pub clamped: bool,
}

impl ThetaEstimate {
    fn new(raw: f64, stderr: f64, threshold: f64) -> Self {
        let theta = raw.clamp(0.0, 1.0);
        Self { theta, raw, stderr, threshold, clamped: theta != raw }
    }
}

pub fn default_block_length(n: usize) -> usize {
    ((n as f64).powf(0.6).floor() as usize).max(1)
}

/// Extremal index from `reps` independent length-`n` paths. `u_n` is the
/// `(1 - τ/n)`-quantile of the pooled norms of those paths.
pub fn extremal_index_blocks(
    spec: &ModelSpec,
    n: usize,
    tau: f64,
    reps: usize,
    method: ThetaMethod,
    runner: &Runner,
) -> Result<ThetaEstimate> {
    if !(tau > 0.0 && tau < n as f64) {
        return Err(domain("tau must lie in (0, n)"));
    }
    if reps == 0 || n == 0 {
        return Err(invalid("need reps >= 1 and n >= 1"));
    }
    let seed = derive_seed(spec.seed, THETA_TAG);
    let paths = runner.map(reps, |r| {
        let mut rng = stream(seed, r as u64);
        spec.sample_with(n, &mut rng).and_then(|ts| {
            ts.require_nonnegative()?;
            Ok(ts.norms())
        })
    });
    let paths = paths.into_iter().collect::<Result<Vec<_>>>()?;
    let mut pooled: Vec<f64> = paths.concat();
    pooled.sort_by(f64::total_cmp);
    let u = empirical_quantile(&pooled, 1.0 - tau / n as f64);

    match method {
        ThetaMethod::Definition => {
            let below = Proportion::from_flags(paths.iter().map(|p| p.iter().all(|&x| x <= u)));
            let p = below.estimate();
            if below.hits == 0 {
                return Err(Error::Estimation("no path stayed below u_n; decrease tau".into()));
            }
            let raw = -p.ln() / tau;
            Ok(ThetaEstimate::new(raw, below.stderr() / (p * tau), u))
        }
        ThetaMethod::Blocks { r_n } => {
            let r = r_n.unwrap_or_else(|| default_block_length(n));
            if r == 0 || r > n {
                return Err(invalid("block length must lie in [1, n]"));
            }
            let (mut blocks_hit, mut exceedances) = (0u64, 0u64);
            for p in &paths {
                for block in p.chunks_exact(r) {
                    let c = block.iter().filter(|&&x| x > u).count() as u64;
                    exceedances += c;
                    blocks_hit += u64::from(c > 0);
                }
            }
            if exceedances == 0 {
                return Err(Error::Estimation("no exceedances of u_n".into()));
            }
            let raw = blocks_hit as f64 / exceedances as f64;
            let se = (raw * (1.0 - raw).max(0.0) / blocks_hit.max(1) as f64).sqrt();
            Ok(ThetaEstimate::new(raw, se, u))
        }
    }
}

/// `P(max_{m_gap ≤ |i| ≤ r_n} ‖X_i‖ > u a_n | ‖X_0‖ > u a_n)`, pooled over
/// every interior exceedance of `reps` independent paths.
#[allow(clippy::too_many_arguments)]
pub fn anti_clustering_probe(
    spec: &ModelSpec,
    n: usize,
    r_n: usize,
    u: f64,
    m_gap: usize,
    a_n: f64,
    reps: usize,
    runner: &Runner,
) -> Result<Proportion> {
    if m_gap == 0 || m_gap > r_n {
        return Err(invalid("need 1 <= m_gap <= r_n"));
    }
    if 2 * r_n >= n {
        return Err(invalid("need 2 r_n < n"));
    }
    if !(u > 0.0 && a_n > 0.0) {
        return Err(domain("u and a_n must be positive"));
    }
    let level = u * a_n;
    let seed = derive_seed(spec.seed, ANTI_TAG);
    let counts = runner.map(reps, |r| -> Result<(u64, u64)> {
        let mut rng = stream(seed, r as u64);
        let ts = spec.sample_with(n, &mut rng)?;
        ts.require_nonnegative()?;
        let norms = ts.norms();
        let (mut hits, mut trials) = (0, 0);
        for t in r_n..n - r_n {
            if norms[t] > level {
                trials += 1;
                let far = |i: usize| norms[t - i] > level || norms[t + i] > level;
                hits += u64::from((m_gap..=r_n).any(far));
            }
        }
        Ok((hits, trials))
    });
    let (mut hits, mut trials) = (0, 0);
    for c in counts {
        let (h, t) = c?;
        hits += h;
        trials += t;
    }
    if trials == 0 {
        return Err(Error::Estimation("no exceedances of u a_n to condition on".into()));
    }
    Ok(Proportion::new(hits, trials))
}

/// `P(‖M_n(0, ε)‖ > δ)` over `reps` independent paths.
pub fn small_jump_probe(
    spec: &ModelSpec,
    n: usize,
    a_n: f64,
    eps: f64,
    delta: f64,
    reps: usize,
    runner: &Runner,
) -> Result<Proportion> {
    if !(eps > 0.0 && delta > 0.0) {
        return Err(domain("eps and delta must be positive"));
    }
    let seed = derive_seed(spec.seed, SMALL_TAG);
    let flags = runner.map(reps, |r| -> Result<bool> {
        let mut rng = stream(seed, r as u64);
        let ts = spec.sample_with(n, &mut rng)?;
        Ok(max_norm(&timeless_max_below(&ts, a_n, eps)?) > delta)
    });
    let flags = flags.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Proportion::from_flags(flags))
}

/// Upper envelope `ε^{s-α} d / δ^s · (1 + α/(s-α))` for the small-jump
/// probability, valid for `s > α`.
pub fn small_jump_bound(eps: f64, delta: f64, alpha: f64, s: f64, d: usize) -> Result<f64> {
    if !(s > alpha && alpha > 0.0 && eps > 0.0 && delta > 0.0) {
        return Err(domain("need s > alpha > 0 and eps, delta > 0"));
    }
    Ok(eps.powf(s - alpha) * d as f64 / delta.powf(s) * (1.0 + alpha / (s - alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hill_on_pareto_quantiles() {
        // exact Pareto(1) quantiles 1/(1 - p)
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 - (i as f64 + 0.5) / n as f64)).collect();
        let a = hill_estimator(&xs, 5000).unwrap();
        assert!((a - 1.0).abs() < 0.01, "{a}");
        let scaled: Vec<f64> = xs.iter().map(|x| 7.5 * x).collect();
        let b = hill_estimator(&scaled, 5000).unwrap();
        assert!((a - b).abs() < 1e-9);
        assert!(hill_estimator(&xs, 1).is_err());
        assert!(hill_estimator(&[1.0, 0.0, 2.0], 2).is_err());
    }

    #[test]
    fn tail_ensemble_conditioning() {
        let ts = TimeSeries::from_flat(1, vec![1.0, 5.0, 1.0, 1.0, 8.0, 9.0, 1.0, 20.0]).unwrap();
        let e = TailEnsemble::from_series(&ts, 4.0, 1).unwrap();
        // t = 1, 4, 5 are interior; t = 7 is on the boundary
        assert_eq!(e.len(), 3);
        assert!((0..e.len()).all(|s| e.center_norm(s) > 1.0));
        assert_eq!(e.at(1, 1), &[9.0 / 4.0]);
        assert!(e.forward_clear(0) && e.backward_clear(0));
        assert!(!e.forward_clear(1) && e.backward_clear(1));
        assert!(e.forward_clear(2) && !e.backward_clear(2));
        assert_eq!(theta_from_ensemble(&e), Proportion::new(2, 3));
        assert!(TailEnsemble::from_series(&ts, 100.0, 1).is_err());
    }

    #[test]
    fn small_jump_bound_formula() {
        let b = small_jump_bound(0.1, 1.0, 1.0, 2.0, 1).unwrap();
        assert!((b - 0.2).abs() < 1e-15);
        assert!(small_jump_bound(0.1, 1.0, 2.0, 2.0, 1).is_err());
    }

    #[test]
    fn small_jump_probe_vanishes_when_eps_below_delta() {
        let spec = ModelSpec::m_dependent(0, 1.0, 1);
        let p = small_jump_probe(&spec, 100, 100.0, 0.5, 0.5, 50, &Runner::new(1)).unwrap();
        assert_eq!(p.hits, 0);
    }

    #[test]
    fn theta_iid_and_m1() {
        let runner = Runner::new(1);
        let iid = extremal_index_blocks(&ModelSpec::m_dependent(0, 1.0, 3), 200, 1.0, 4000, ThetaMethod::Definition, &runner).unwrap();
        assert!((iid.theta - 1.0).abs() < 0.1, "{iid:?}");
        let m1 = extremal_index_blocks(&ModelSpec::m_dependent(1, 1.0, 3), 200, 1.0, 4000, ThetaMethod::Definition, &runner).unwrap();
        assert!((m1.theta - 0.5).abs() < 0.08, "{m1:?}");
        assert!((0.0..=1.0).contains(&m1.theta));
        let blocks = extremal_index_blocks(&ModelSpec::m_dependent(1, 1.0, 3), 200, 1.0, 4000, ThetaMethod::Blocks { r_n: None }, &runner).unwrap();
        assert!((blocks.theta - 0.5).abs() < 0.08, "{blocks:?}");
    }

    #[test]
    fn theta_estimate_records_clamping() {
        let e = ThetaEstimate::new(1.2, 0.1, 3.0);
        assert_eq!(e.theta, 1.0);
        assert_eq!(e.raw, 1.2);
        assert!(e.clamped);
    }
}
