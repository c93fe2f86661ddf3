//! Normalizing sequences and the partial-maxima step processes built from a
//! nonnegative series: `M_n(·)`, its truncation `M_n^(u)(·)`, the timeless
//! maximum `M_n` and the maximum functional `φ^(u)`.

use serde::{Deserialize, Serialize};

use crate::cadlag::StepFunction;
use crate::error::{domain, invalid, Error, Result};
use crate::extremal::PointMeasure;
use crate::mc::{derive_seed, empirical_quantile, stream, Runner};
use crate::models::{Model, ModelSpec, TimeSeries};

const SCALING_TAG: u64 = 0x5ca1e;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalingRule {
    /// Closed form, available for the m-dependent Fréchet family.
    Analytic,
    /// `(1 - 1/n)`-quantile of `‖X_1‖` over `reps` independent stationary draws.
    Empirical { reps: usize, seed: u64 },
}

/// A scaling rule bound to a model. The empirical kind draws its sample of
/// `‖X_1‖` once and answers every `n` from it.
#[derive(Debug, Clone)]
pub struct Scaling {
    kind: ScalingKind,
}

#[derive(Debug, Clone)]
enum ScalingKind {
    /// `a_n = (c · n)^{1/α}`.
    Power { c: f64, alpha: f64 },
    Quantiles(Vec<f64>),
}

impl Scaling {
    pub fn new(spec: &ModelSpec, rule: ScalingRule) -> Result<Self> {
        spec.validate()?;
        let kind = match rule {
            ScalingRule::Analytic => match spec.model {
                Model::MDependentFrechet { m, alpha } => ScalingKind::Power { c: (m + 1) as f64, alpha },
                _ => {
                    return Err(invalid(
                        "no closed-form a_n for this model; use the empirical scaling rule",
                    ))
                }
            },
            ScalingRule::Empirical { reps, seed } => {
                if reps == 0 {
                    return Err(invalid("empirical scaling needs reps >= 1"));
                }
                let seed = derive_seed(seed, SCALING_TAG);
                let draws = Runner::from_env().map(reps, |r| {
                    let mut rng = stream(seed, r as u64);
                    spec.sample_with(1, &mut rng).map(|ts| ts.norms()[0])
                });
                let mut norms = draws.into_iter().collect::<Result<Vec<f64>>>()?;
                norms.sort_by(f64::total_cmp);
                ScalingKind::Quantiles(norms)
            }
        };
        Ok(Self { kind })
    }

    /// Power-law scaling `a_n = (c n)^{1/α}`, e.g. `c = 1, α = 1` for the
    /// `Z`-normalization `a_n = n`.
    pub fn power(c: f64, alpha: f64) -> Result<Self> {
        if !(c > 0.0 && alpha > 0.0) {
            return Err(invalid("power scaling needs c, alpha > 0"));
        }
        Ok(Self { kind: ScalingKind::Power { c, alpha } })
    }

    pub fn a_n(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let a = match &self.kind {
            ScalingKind::Power { c, alpha } => {
                let x = c * n as f64;
                if *alpha == 1.0 {
                    x
                } else {
                    x.powf(1.0 / alpha)
                }
            }
            ScalingKind::Quantiles(sorted) => empirical_quantile(sorted, 1.0 - 1.0 / n as f64),
        };
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Estimation(format!("degenerate a_n = {a} for n = {n}")));
        }
        Ok(a)
    }
}

/// `a_n` with `n P(‖X_1‖ > a_n) → 1`.
pub fn normalizing_sequence(spec: &ModelSpec, n: usize, rule: ScalingRule) -> Result<f64> {
    Scaling::new(spec, rule)?.a_n(n)
}

fn check_scaling(ts: &TimeSeries, a_n: f64) -> Result<()> {
    if ts.is_empty() {
        return Err(invalid("empty series"));
    }
    ts.require_nonnegative()?;
    if !(a_n > 0.0 && a_n.is_finite()) {
        return Err(invalid("a_n must be positive and finite"));
    }
    Ok(())
}

fn running_max_process(ts: &TimeSeries, a_n: f64, floor: f64) -> StepFunction {
    let (n, d) = (ts.len(), ts.dim());
    let mut breakpoints = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity((n + 1) * d);
    breakpoints.push(0.0);
    values.extend(std::iter::repeat_n(0.0, d));
    let mut current = vec![0.0; d];
    for (i, row) in ts.rows().enumerate() {
        let mut changed = false;
        for (c, &x) in current.iter_mut().zip(row) {
            let v = x / a_n;
            if v > floor && v > *c {
                *c = v;
                changed = true;
            }
        }
        if changed {
            breakpoints.push((i + 1) as f64 / n as f64);
            values.extend_from_slice(&current);
        }
    }
    StepFunction::from_flat(d, breakpoints, values).expect("running maxima are canonical")
}

/// `M_n(t) = ∨_{i ≤ ⌊nt⌋} X_i / a_n`, with breakpoints at `i/n`.
pub fn partial_max_process(ts: &TimeSeries, a_n: f64) -> Result<StepFunction> {
    check_scaling(ts, a_n)?;
    Ok(running_max_process(ts, a_n, f64::NEG_INFINITY))
}

/// `M_n^(u)(t) = ∨_{i ≤ ⌊nt⌋} (X_i^k/a_n · 1{X_i^k/a_n > u})_k`.
pub fn truncated_process(ts: &TimeSeries, a_n: f64, u: f64) -> Result<StepFunction> {
    check_scaling(ts, a_n)?;
    if !(u > 0.0) {
        return Err(domain("truncation level u must be positive"));
    }
    Ok(running_max_process(ts, a_n, u))
}

/// `M_n = ∨_i X_i / a_n`.
pub fn timeless_max(ts: &TimeSeries, a_n: f64) -> Result<Vec<f64>> {
    restricted_max(ts, a_n, |_| true)
}

/// `M_n(0, ε)`: componentwise max over scaled entries in `(0, ε)`.
pub fn timeless_max_below(ts: &TimeSeries, a_n: f64, eps: f64) -> Result<Vec<f64>> {
    restricted_max(ts, a_n, |v| v < eps)
}

/// `M_n[ε, ∞)`: componentwise max over scaled entries `≥ ε`.
pub fn timeless_max_at_least(ts: &TimeSeries, a_n: f64, eps: f64) -> Result<Vec<f64>> {
    restricted_max(ts, a_n, |v| v >= eps)
}

fn restricted_max(ts: &TimeSeries, a_n: f64, keep: impl Fn(f64) -> bool) -> Result<Vec<f64>> {
    check_scaling(ts, a_n)?;
    let mut out = vec![0.0; ts.dim()];
    for row in ts.rows() {
        for (o, &x) in out.iter_mut().zip(row) {
            let v = x / a_n;
            if v > 0.0 && keep(v) && v > *o {
                *o = v;
            }
        }
    }
    Ok(out)
}

/// `φ^(u)(Σ δ_{(t_i, x_i)})(t) = ∨_{t_i ≤ t} (x_i^k 1{u < x_i^k})_k`.
pub fn max_functional_phi_u(pm: &PointMeasure, u: f64) -> Result<StepFunction> {
    if !(u > 0.0) {
        return Err(domain("u must be positive"));
    }
    Ok(pm.running_max(Some(u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(xs: &[f64]) -> TimeSeries {
        TimeSeries::from_flat(1, xs.to_vec()).unwrap()
    }

    #[test]
    fn analytic_scaling() {
        let iid = ModelSpec::m_dependent(0, 1.0, 0);
        assert_eq!(normalizing_sequence(&iid, 1000, ScalingRule::Analytic).unwrap(), 1000.0);
        let m1 = ModelSpec::m_dependent(1, 1.0, 0);
        assert_eq!(normalizing_sequence(&m1, 50, ScalingRule::Analytic).unwrap(), 100.0);
        let sq = ModelSpec::m_dependent(0, 2.0, 0);
        assert!((normalizing_sequence(&sq, 100, ScalingRule::Analytic).unwrap() - 10.0).abs() < 1e-12);
        let sre = ModelSpec::new(Model::Sre(crate::models::SreParams::pareto(1, 2.0).unwrap()), 0);
        assert!(normalizing_sequence(&sre, 10, ScalingRule::Analytic).is_err());
    }

    #[test]
    fn empirical_scaling_is_monotone() {
        let spec = ModelSpec::m_dependent(0, 1.0, 0);
        let s = Scaling::new(&spec, ScalingRule::Empirical { reps: 5000, seed: 2 }).unwrap();
        let a: Vec<f64> = [10, 100, 1000].iter().map(|&n| s.a_n(n).unwrap()).collect();
        assert!(a[0] <= a[1] && a[1] <= a[2]);
    }

    #[test]
    fn hand_computed_partial_max() {
        let f = partial_max_process(&scalar(&[1.0, 3.0, 2.0, 5.0]), 1.0).unwrap();
        assert_eq!(f.breakpoints(), &[0.0, 0.25, 0.5, 1.0]);
        let vals: Vec<f64> = f.plateaus().map(|p| p[0]).collect();
        assert_eq!(vals, vec![0.0, 1.0, 3.0, 5.0]);

        let ts = TimeSeries::from_rows(2, &[vec![3.0, 1.0]]).unwrap();
        let g = partial_max_process(&ts, 1.0).unwrap();
        assert_eq!(g.breakpoints(), &[0.0, 1.0]);
        assert_eq!(g.plateau(1), &[3.0, 1.0]);
    }

    #[test]
    fn hand_computed_truncation() {
        let ts = scalar(&[0.5, 2.0, 1.0]);
        let f = truncated_process(&ts, 1.0, 0.8).unwrap();
        assert_eq!(f.eval(0.0).unwrap(), &[0.0]);
        assert_eq!(f.eval(1.0 / 3.0).unwrap(), &[0.0]);
        assert_eq!(f.eval(2.0 / 3.0).unwrap(), &[2.0]);
        assert_eq!(f.eval(1.0).unwrap(), &[2.0]);
        assert_eq!(truncated_process(&ts, 1.0, 5.0).unwrap(), StepFunction::zero(1));
        assert_eq!(truncated_process(&ts, 1.0, 1e-9).unwrap(), partial_max_process(&ts, 1.0).unwrap());
        assert!(truncated_process(&ts, 1.0, 0.0).is_err());
    }

    #[test]
    fn timeless_variants() {
        let ts = TimeSeries::from_rows(2, &[vec![4.0, 0.2], vec![0.4, 6.0]]).unwrap();
        assert_eq!(timeless_max(&ts, 2.0).unwrap(), vec![2.0, 3.0]);
        let pm = partial_max_process(&ts, 2.0).unwrap();
        assert_eq!(pm.terminal(), &[2.0, 3.0]);
        assert_eq!(timeless_max_below(&ts, 2.0, 1.0).unwrap(), vec![0.2, 0.1]);
        assert_eq!(timeless_max_below(&ts, 2.0, 0.05).unwrap(), vec![0.0, 0.0]);
        assert_eq!(timeless_max_at_least(&ts, 2.0, 1.0).unwrap(), vec![2.0, 3.0]);
    }

    #[test]
    fn remark_point_measure() {
        let (u, n) = (1.0, 10.0);
        let t1 = 0.5 - 1.0 / n;
        let t2 = 0.5 - 1.0 / (2.0 * n);
        let eta = PointMeasure::from_points(2, &[(t1, vec![2.0 * u, 0.0]), (t2, vec![0.0, 2.0 * u])]).unwrap();
        let y = max_functional_phi_u(&eta, u).unwrap();
        assert_eq!(y.coordinate(0).unwrap(), StepFunction::indicator(2.0 * u, t1).unwrap());
        assert_eq!(y.coordinate(1).unwrap(), StepFunction::indicator(2.0 * u, t2).unwrap());
    }

    #[test]
    fn phi_of_empty_measure() {
        assert_eq!(max_functional_phi_u(&PointMeasure::empty(2), 0.5).unwrap(), StepFunction::zero(2));
    }

    #[test]
    fn phi_matches_truncated_process() {
        let spec = ModelSpec::m_dependent(2, 1.0, 4);
        let ts = spec.sample_path(500).unwrap();
        let a = 1500.0;
        let pm = PointMeasure::from_scaled_series(&ts, a).unwrap();
        for u in [0.01, 0.1, 0.5] {
            assert_eq!(max_functional_phi_u(&pm, u).unwrap(), truncated_process(&ts, a, u).unwrap());
        }
    }

    #[test]
    fn negative_series_rejected() {
        let ts = scalar(&[1.0, -2.0]);
        assert!(partial_max_process(&ts, 1.0).is_err());
    }
}
