//! Monte Carlo experiments and their reports.
//!
//! Each experiment takes a parameter struct (deserializable from the JSON
//! files accepted by `maxflow experiment`) and a [`Runner`]. Replicate `r`
//! always draws from stream `r` of a seed derived from the master seed, so a
//! report depends only on its parameters.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cadlag::{SignedStep, StepFunction};
use crate::error::{domain, invalid, Error, Result};
use crate::extremal::{extremal_fidi_cdf, frechet_norm_cdf, ExponentMeasureModel, PointMeasure};
use crate::maxima::{max_functional_phi_u, partial_max_process, timeless_max, truncated_process, Scaling, ScalingRule};
use crate::mc::{derive_seed, ks_distance, stream, Proportion, Runner, SimRng};
use crate::metrics::{d_m1_univariate, d_strong_m1, d_weak_m1, m1_oscillation_signed, DEFAULT_TOLERANCE};
use crate::models::{frechet_sample, squared_process, ModelSpec, TimeSeries};

pub const SCHEMA_VERSION: &str = "v1";

/// Column-oriented table of equally long numeric series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub data: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), data: vec![Vec::new(); columns.len()] }
    }

    pub fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), got: row.len() });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(invalid("table entries must be finite"));
        }
        for (col, &v) in self.data.iter_mut().zip(row) {
            col.push(v);
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().position(|c| c == name).map(|i| self.data[i].as_slice())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for r in 0..self.rows() {
            w.write_record(self.data.iter().map(|c| c[r].to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub name: String,
    pub params: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    pub scalars: BTreeMap<String, f64>,
    pub tables: BTreeMap<String, Table>,
    /// Wall-clock time; kept out of the serialized report.
    #[serde(skip)]
    pub runtime: Duration,
}

impl ExperimentReport {
    pub fn new<P: Serialize>(name: &str, params: &P, seed: u64) -> Result<Self> {
        Ok(Self {
            schema: SCHEMA_VERSION.to_string(),
            name: name.to_string(),
            params: serde_json::to_value(params)?,
            seeds: BTreeMap::from([("master".to_string(), seed)]),
            scalars: BTreeMap::new(),
            tables: BTreeMap::new(),
            runtime: Duration::ZERO,
        })
    }

    pub fn scalar(&mut self, name: impl Into<String>, value: f64) -> Result<()> {
        let name = name.into();
        if !value.is_finite() {
            return Err(Error::Numeric { step: 0, message: format!("scalar {name} is not finite") });
        }
        self.scalars.insert(name, value);
        Ok(())
    }

    /// Records `name` and `name_stderr`.
    pub fn proportion(&mut self, name: &str, p: Proportion) -> Result<()> {
        self.scalar(name, p.estimate())?;
        self.scalar(format!("{name}_stderr"), p.stderr())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.scalars.get(name).copied()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `<name>.json` and one `<name>_<table>.csv` per table into
    /// `dir`; returns the written paths.
    pub fn write_to_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        let json = dir.join(format!("{}.json", self.name));
        std::fs::write(&json, self.to_json()? + "\n")?;
        paths.push(json);
        for (t, table) in &self.tables {
            let p = dir.join(format!("{}_{t}.csv", self.name));
            table.write_csv(std::fs::File::create(&p)?)?;
            paths.push(p);
        }
        Ok(paths)
    }
}

fn timed(start: Instant, mut report: ExperimentReport) -> ExperimentReport {
    report.runtime = start.elapsed();
    report
}

fn default_scaling() -> ScalingRule {
    ScalingRule::Analytic
}

/// `a_n` for the (optionally squared) series of `model`.
fn scaling_for(model: &ModelSpec, rule: ScalingRule, square: bool, n: usize) -> Result<f64> {
    let a = Scaling::new(model, rule)?.a_n(n)?;
    Ok(if square { a * a } else { a })
}

fn replicate(model: &ModelSpec, square: bool, n: usize, rng: &mut SimRng) -> Result<TimeSeries> {
    let ts = model.sample_with(n, rng)?;
    Ok(if square { squared_process(&ts) } else { ts })
}

fn max_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, &v| m.max(v))
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

const FRECHET_TAG: u64 = 1;
const FIDI_TAG: u64 = 2;
const COUNTER_TAG: u64 = 3;
const TRUNC_TAG: u64 = 5;
const LIMIT_TAG: u64 = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FrechetLimitParams {
    pub model: ModelSpec,
    pub n: usize,
    pub reps: usize,
    pub theta_ref: f64,
    pub alpha: f64,
    #[serde(default = "default_scaling")]
    pub scaling: ScalingRule,
    /// Take maxima of the componentwise squares (for signed models).
    #[serde(default)]
    pub square: bool,
    /// Negative control: KS distance against this (wrong) θ as well.
    #[serde(default)]
    pub control_theta: Option<f64>,
    #[serde(default = "default_bins")]
    pub bins: usize,
}

fn default_bins() -> usize {
    10
}

/// KS distance between `‖M_n‖` and `exp(-θ x^{-α})`, with a PIT histogram.
pub fn exp_frechet_limit(p: &FrechetLimitParams, runner: &Runner) -> Result<ExperimentReport> {
    let start = Instant::now();
    if p.n == 0 || p.reps == 0 || p.bins == 0 {
        return Err(invalid("n, reps and bins must be positive"));
    }
    if !(p.theta_ref > 0.0 && p.alpha > 0.0) {
        return Err(domain("theta_ref and alpha must be positive"));
    }
    p.model.validate()?;
    let a_n = scaling_for(&p.model, p.scaling, p.square, p.n)?;
    let seed = derive_seed(p.model.seed, FRECHET_TAG);
    let norms = collect(runner.map(p.reps, |r| {
        let mut rng = stream(seed, r as u64);
        let ts = replicate(&p.model, p.square, p.n, &mut rng)?;
        Ok(max_norm(&timeless_max(&ts, a_n)?))
    }))?;

    let cdf = |theta: f64| move |x: f64| frechet_norm_cdf(x, theta, p.alpha).unwrap_or(0.0);
    let mut report = ExperimentReport::new("frechet_limit", p, p.model.seed)?;
    report.scalar("a_n", a_n)?;
    report.scalar("ks", ks_distance(&norms, cdf(p.theta_ref)))?;
    report.scalar("ks_critical_95", 1.358 / (p.reps as f64).sqrt())?;
    if let Some(ct) = p.control_theta {
        if !(ct > 0.0) {
            return Err(domain("control_theta must be positive"));
        }
        report.scalar("ks_control", ks_distance(&norms, cdf(ct)))?;
    }

    let mut counts = vec![0u64; p.bins];
    for &x in &norms {
        let u = cdf(p.theta_ref)(x);
        counts[((u * p.bins as f64) as usize).min(p.bins - 1)] += 1;
    }
    let mut pit = Table::new(&["bin_lo", "bin_hi", "count", "expected"]);
    for (b, &c) in counts.iter().enumerate() {
        let w = 1.0 / p.bins as f64;
        pit.push_row(&[b as f64 * w, (b + 1) as f64 * w, c as f64, p.reps as f64 * w])?;
    }
    report.tables.insert("pit".into(), pit);
    Ok(timed(start, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FidiParams {
    pub model: ModelSpec,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub times: Vec<f64>,
    pub thresholds: Vec<Vec<f64>>,
    pub reference: ExponentMeasureModel,
    #[serde(default = "default_scaling")]
    pub scaling: ScalingRule,
    #[serde(default)]
    pub square: bool,
    /// Also simulate this many limit processes from `reference`.
    #[serde(default)]
    pub limit_reps: usize,
}

/// `P̂(M_n(t_1) ≤ x_1, .., M_n(t_m) ≤ x_m)` against the extremal fidi product.
pub fn exp_fidi_convergence(p: &FidiParams, runner: &Runner) -> Result<ExperimentReport> {
    let start = Instant::now();
    if p.n_list.is_empty() || p.reps == 0 {
        return Err(invalid("need a nonempty n_list and reps >= 1"));
    }
    p.model.validate()?;
    p.reference.validate()?;
    let reference = extremal_fidi_cdf(&p.reference, &p.times, &p.thresholds)?;
    let below_all = |f: &StepFunction| -> Result<bool> {
        for (t, x) in p.times.iter().zip(&p.thresholds) {
            if f.eval(*t)?.iter().zip(x).any(|(v, x)| v > x) {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut report = ExperimentReport::new("fidi_convergence", p, p.model.seed)?;
    report.scalar("reference", reference)?;
    let mut table = Table::new(&["n", "a_n", "p_hat", "stderr", "reference", "abs_dev"]);
    let seed = derive_seed(p.model.seed, FIDI_TAG);
    for (idx, &n) in p.n_list.iter().enumerate() {
        let a_n = scaling_for(&p.model, p.scaling, p.square, n)?;
        let sub = derive_seed(seed, idx as u64);
        let flags = collect(runner.map(p.reps, |r| {
            let mut rng = stream(sub, r as u64);
            let ts = replicate(&p.model, p.square, n, &mut rng)?;
            below_all(&partial_max_process(&ts, a_n)?)
        }))?;
        let hat = Proportion::from_flags(flags);
        let dev = (hat.estimate() - reference).abs();
        table.push_row(&[n as f64, a_n, hat.estimate(), hat.stderr(), reference, dev])?;
        if idx + 1 == p.n_list.len() {
            report.proportion("p_hat", hat)?;
            report.scalar("abs_dev", dev)?;
        }
    }
    if let Some(max_dev) = table.column("abs_dev").map(|c| c.iter().fold(0.0_f64, |m, &v| m.max(v))) {
        report.scalar("max_abs_dev", max_dev)?;
    }
    report.tables.insert("deviation".into(), table);

    if p.limit_reps > 0 {
        // points with norm below every threshold cannot break the event
        let floor = p.thresholds.iter().flatten().fold(f64::INFINITY, |m, &x| m.min(x));
        if !(floor > 0.0 && floor.is_finite()) {
            return Err(domain("thresholds must be positive to simulate the limit"));
        }
        let u = match &p.reference {
            ExponentMeasureModel::Empirical { u, .. } => floor.max(*u),
            _ => floor,
        };
        let lseed = derive_seed(p.model.seed, LIMIT_TAG);
        let flags = collect(runner.map(p.limit_reps, |r| {
            let mut rng = stream(lseed, r as u64);
            below_all(&p.reference.sample_process(u, &mut rng)?)
        }))?;
        report.proportion("limit_p_hat", Proportion::from_flags(flags))?;
    }
    Ok(timed(start, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CounterexampleParams {
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub eps: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Per-replicate outcome of the counterexample events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleDraw {
    pub a: bool,
    pub b: bool,
    pub oscillation: f64,
}

/// `V_n = M_n^1 - M_n^2` for `X_i = (Z_i, Z_{i-1})`, given `z = Z_0..Z_n`
/// and `a_n`.
pub fn counterexample_v(z: &[f64], a_n: f64) -> Result<SignedStep> {
    let n = z.len() - 1;
    let (mut m1, mut m2) = (0.0_f64, 0.0_f64);
    let mut bps = vec![0.0];
    let mut vals = vec![0.0];
    for i in 1..=n {
        let (c1, c2) = (z[i] / a_n, z[i - 1] / a_n);
        if c1 > m1 || c2 > m2 {
            m1 = m1.max(c1);
            m2 = m2.max(c2);
            bps.push(i as f64 / n as f64);
            vals.push(m1 - m2);
        }
    }
    SignedStep::new(bps, vals)
}

/// Events `A_{n,ε}`, `B_{n,ε}` and `ω_{2/n}(V_n)` for one draw `Z_0..Z_n`
/// with `a_n = n`.
pub fn counterexample_events(z: &[f64], eps: f64) -> Result<CounterexampleDraw> {
    let n = z.len() - 1;
    if n < 2 {
        return Err(invalid("need n >= 2"));
    }
    let a_n = n as f64;
    let mut arg = 1;
    for i in 2..n {
        if z[i] > z[arg] {
            arg = i;
        }
    }
    let a = z[arg] > eps * a_n;
    let b = a && (0..=arg + 1).any(|j| j != arg && z[j] > eps * a_n / 4.0);
    let v = counterexample_v(z, a_n)?;
    let oscillation = m1_oscillation_signed(&v, 2.0 / n as f64)?;
    Ok(CounterexampleDraw { a, b, oscillation })
}

/// Non-vanishing M1 oscillation of `M_n^1 - M_n^2` for the 1-dependent
/// Fréchet window process.
pub fn exp_counterexample_m1(p: &CounterexampleParams, runner: &Runner) -> Result<ExperimentReport> {
    let start = Instant::now();
    let eps = p.eps;
    if !(eps > 0.0 && eps * eps * (1.0 - (-1.0 / eps).exp()) > 4.0) {
        return Err(domain("eps must satisfy eps^2 (1 - exp(-1/eps)) > 4"));
    }
    if p.n_list.is_empty() || p.n_list.iter().any(|&n| n < 3) || p.reps == 0 {
        return Err(invalid("need n >= 3 for every n and reps >= 1"));
    }
    let mut report = ExperimentReport::new("counterexample_m1", p, p.seed)?;
    let limit_a = 1.0 - (-1.0 / eps).exp();
    let bound_b = 4.0 / (eps * eps);
    report.scalar("p_A_limit", limit_a)?;
    report.scalar("p_B_bound", bound_b)?;
    report.scalar("p_A_minus_B_bound", limit_a - bound_b)?;

    let mut table = Table::new(&[
        "n", "p_A", "p_A_stderr", "p_B", "p_B_stderr", "p_A_not_B", "p_osc", "p_osc_stderr",
    ]);
    let seed = derive_seed(p.seed, COUNTER_TAG);
    for (idx, &n) in p.n_list.iter().enumerate() {
        let sub = derive_seed(seed, idx as u64);
        let draws = collect(runner.map(p.reps, |r| {
            let mut rng = stream(sub, r as u64);
            let z: Vec<f64> = (0..=n).map(|_| frechet_sample(1.0, &mut rng)).collect();
            counterexample_events(&z, eps)
        }))?;
        let pa = Proportion::from_flags(draws.iter().map(|d| d.a));
        let pb = Proportion::from_flags(draws.iter().map(|d| d.b));
        let pab = Proportion::from_flags(draws.iter().map(|d| d.a && !d.b));
        let po = Proportion::from_flags(draws.iter().map(|d| d.oscillation > eps / 2.0));
        table.push_row(&[
            n as f64,
            pa.estimate(),
            pa.stderr(),
            pb.estimate(),
            pb.stderr(),
            pab.estimate(),
            po.estimate(),
            po.stderr(),
        ])?;
        if idx + 1 == p.n_list.len() {
            report.proportion("p_A_hat", pa)?;
            report.proportion("p_B_hat", pb)?;
            report.proportion("p_A_not_B_hat", pab)?;
            report.proportion("p_osc_hat", po)?;
        }
    }
    let min_osc = table.column("p_osc").map_or(0.0, |c| c.iter().fold(f64::INFINITY, |m, &v| m.min(v)));
    report.scalar("p_osc_min", min_osc)?;
    report.tables.insert("events".into(), table);
    Ok(timed(start, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeakVsStrongParams {
    pub u: f64,
    pub n_list: Vec<usize>,
    #[serde(default = "default_tolerance")]
    pub tol: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// `η_n = δ_{(1/2 - 1/n, (2u, 0))} + δ_{(1/2 - 1/(2n), (0, 2u))}`, or the
/// limit `η` with both points at `1/2` when `n` is `None`.
pub fn remark_measure(u: f64, n: Option<usize>) -> Result<PointMeasure> {
    let (t1, t2) = match n {
        Some(n) => {
            let n = n as f64;
            (0.5 - 1.0 / n, 0.5 - 1.0 / (2.0 * n))
        }
        None => (0.5, 0.5),
    };
    PointMeasure::from_points(2, &[(t1, vec![2.0 * u, 0.0]), (t2, vec![0.0, 2.0 * u])])
}

/// Weak and strong M1 distances between `φ^(u)(η_n)` and `φ^(u)(η)`.
pub fn exp_weak_vs_strong(p: &WeakVsStrongParams) -> Result<ExperimentReport> {
    let start = Instant::now();
    if !(p.u > 0.0) {
        return Err(domain("u must be positive"));
    }
    if p.n_list.is_empty() || p.n_list.iter().any(|&n| n < 3) {
        return Err(invalid("need n >= 3"));
    }
    let y = max_functional_phi_u(&remark_measure(p.u, None)?, p.u)?;
    let mut report = ExperimentReport::new("weak_vs_strong", p, 0)?;
    let mut table = Table::new(&["n", "d_weak", "d_strong", "n_times_d_weak", "d_difference"]);
    for &n in &p.n_list {
        let yn = max_functional_phi_u(&remark_measure(p.u, Some(n))?, p.u)?;
        let weak = d_weak_m1(&yn, &y, p.tol)?;
        let strong = d_strong_m1(&yn, &y, p.tol)?;
        // coordinate difference of φ^(u)(η_n): 2u on [1/2 - 1/n, 1/2 - 1/(2n))
        let diff = yn.coordinate_difference(0, 1)?;
        let diff = StepFunction::new(1, diff.breakpoints().to_vec(), diff.values().iter().map(|v| vec![*v]).collect())?;
        let gap = d_m1_univariate(&diff, &StepFunction::zero(1), p.tol)?;
        table.push_row(&[n as f64, weak.value, strong.value, n as f64 * weak.value, gap.value])?;
    }
    let col = |name: &str| table.column(name).unwrap_or_default().to_vec();
    let weak = col("d_weak");
    let strong = col("d_strong");
    report.scalar("d_weak_max", weak.iter().fold(0.0_f64, |m, &v| m.max(v)))?;
    report.scalar("d_strong_min", strong.iter().fold(f64::INFINITY, |m, &v| m.min(v)))?;
    report.scalar("d_difference_min", col("d_difference").iter().fold(f64::INFINITY, |m, &v| m.min(v)))?;
    report.scalar("tolerance", p.tol)?;
    report.tables.insert("distances".into(), table);
    Ok(timed(start, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TruncationGapParams {
    pub model: ModelSpec,
    pub n: usize,
    pub reps: usize,
    pub u_list: Vec<f64>,
    pub eps: f64,
    #[serde(default = "default_scaling")]
    pub scaling: ScalingRule,
    #[serde(default)]
    pub square: bool,
}

/// `P̂(sup_t ‖M_n^(u)(t) - M_n(t)‖ > ε)` for each `u`.
pub fn exp_truncation_gap(p: &TruncationGapParams, runner: &Runner) -> Result<ExperimentReport> {
    let start = Instant::now();
    if p.n == 0 || p.reps == 0 || p.u_list.is_empty() {
        return Err(invalid("need n, reps >= 1 and a nonempty u_list"));
    }
    if !(p.eps > 0.0) || p.u_list.iter().any(|u| !(*u > 0.0)) {
        return Err(domain("eps and every u must be positive"));
    }
    p.model.validate()?;
    let a_n = scaling_for(&p.model, p.scaling, p.square, p.n)?;
    let seed = derive_seed(p.model.seed, TRUNC_TAG);
    // per replicate: (gap, largest discarded entry) for every u
    let rows = collect(runner.map(p.reps, |r| -> Result<Vec<(f64, f64)>> {
        let mut rng = stream(seed, r as u64);
        let ts = replicate(&p.model, p.square, p.n, &mut rng)?;
        let full = partial_max_process(&ts, a_n)?;
        p.u_list
            .iter()
            .map(|&u| {
                let gap = truncated_process(&ts, a_n, u)?.uniform_distance(&full)?;
                let discarded = ts.as_flat().iter().map(|x| x / a_n).filter(|&v| v <= u).fold(0.0_f64, f64::max);
                Ok((gap, discarded))
            })
            .collect()
    }))?;

    let mut report = ExperimentReport::new("truncation_gap", p, p.model.seed)?;
    report.scalar("a_n", a_n)?;
    let mut table = Table::new(&["u", "p_hat", "stderr", "max_gap"]);
    let mut violations = 0u64;
    for (k, &u) in p.u_list.iter().enumerate() {
        let hat = Proportion::from_flags(rows.iter().map(|r| r[k].0 > p.eps));
        let max_gap = rows.iter().map(|r| r[k].0).fold(0.0_f64, f64::max);
        violations += rows.iter().filter(|r| r[k].0 > r[k].1).count() as u64;
        table.push_row(&[u, hat.estimate(), hat.stderr(), max_gap])?;
    }
    report.scalar("bound_violations", violations as f64)?;
    report.tables.insert("gap".into(), table);
    Ok(timed(start, report))
}

impl Default for FrechetLimitParams {
    fn default() -> Self {
        Self {
            model: ModelSpec::m_dependent(0, 1.0, 0),
            n: 10_000,
            reps: 2000,
            theta_ref: 1.0,
            alpha: 1.0,
            scaling: ScalingRule::Analytic,
            square: false,
            control_theta: None,
            bins: default_bins(),
        }
    }
}

impl Default for FidiParams {
    fn default() -> Self {
        Self {
            model: ModelSpec::m_dependent(0, 1.0, 0),
            n_list: vec![100, 1000, 10_000],
            reps: 2000,
            times: vec![0.5, 1.0],
            thresholds: vec![vec![2.0], vec![3.0]],
            reference: ExponentMeasureModel::iid_scalar(1.0),
            scaling: ScalingRule::Analytic,
            square: false,
            limit_reps: 0,
        }
    }
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        Self { n_list: vec![1000, 10_000, 100_000], reps: 5000, eps: 10.0, seed: 0 }
    }
}

impl Default for WeakVsStrongParams {
    fn default() -> Self {
        Self { u: 1.0, n_list: vec![10, 100, 1000], tol: DEFAULT_TOLERANCE }
    }
}

impl Default for TruncationGapParams {
    fn default() -> Self {
        Self {
            model: ModelSpec::m_dependent(0, 1.0, 0),
            n: 1000,
            reps: 2000,
            u_list: vec![0.1, 0.25, 0.45, 0.6, 1.0, 2.0],
            eps: 0.5,
            scaling: ScalingRule::Analytic,
            square: false,
        }
    }
}
