//! The `maxflow` command line.
//!
//! Exit status is 0 on success, 2 on usage errors and 1 on runtime errors;
//! runtime errors are printed to stderr as `error: <message>`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cadlag::StepFunction;
use crate::error::{config, invalid, Result};
use crate::extremal::{extremal_fidi_cdf, sample_cluster_process, sample_extremal_process, ExponentMeasureModel, IidCluster};
use crate::inference::{
    anti_clustering_probe, default_block_length, extremal_index_blocks, hill_estimator, small_jump_probe,
    tail_process_sample, theta_from_ensemble, TailThreshold, ThetaMethod,
};
use crate::io;
use crate::lab::{self, ExperimentReport};
use crate::maxima::{partial_max_process, timeless_max, truncated_process, Scaling, ScalingRule};
use crate::mc::{stream, Runner};
use crate::metrics::{d_m1_univariate, d_strong_m1, d_weak_m1, m1_oscillation, MetricResult};
use crate::models::{squared_process, Model, ModelSpec, SreParams};

#[derive(Debug, Parser)]
#[command(name = "maxflow", version, about = "Partial maxima of heavy-tailed series, M1 metrics and extremal processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a stationary series.
    #[command(after_help = "Output: CSV with header `idx,x1,..,xd`, one row per observation.")]
    Simulate(SimulateArgs),
    /// Build the scaled partial-maxima process of a series.
    #[command(after_help = "Output: CSV `t,v1,..,vd` with one row per plateau start, \
                            or with --timeless a JSON array holding M_n.")]
    Maxima(MaximaArgs),
    /// Distances and oscillations of step functions.
    #[command(after_help = "Output: JSON `{value, tolerance, method}`; the true value lies in \
                            [value - tolerance, value].")]
    Metric(MetricArgs),
    /// Tail index, extremal index and related diagnostics.
    #[command(after_help = "Output: JSON `{estimate, stderr, params}`.")]
    Estimate(EstimateArgs),
    /// Simulate limit processes and evaluate their laws.
    #[command(subcommand)]
    Extremal(ExtremalCommand),
    /// Run a Monte Carlo experiment.
    #[command(after_help = "Output: JSON report `{schema: \"v1\", name, params, seeds, scalars, tables}` on \
                            stdout, or with --out-dir `<name>.json` plus one `<name>_<table>.csv` per table. \
                            Wall-clock time goes to stderr.")]
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelKind {
    /// `X_n = (Z_n, .., Z_{n-m})` with i.i.d. Fréchet `Z`.
    Mdep,
    /// Nonnegative SRE with Pareto(alpha) entries.
    Sre,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Built-in model; use --spec for anything else (e.g. CCC-GARCH).
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// ModelSpec JSON file.
    #[arg(long, conflicts_with = "model")]
    spec: Option<PathBuf>,
    /// Window length for the m-dependent model.
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Dimension of the SRE model.
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    burn_in: Option<usize>,
    /// Master seed (default 0, or the spec file's seed).
    #[arg(long)]
    seed: Option<u64>,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec> {
        let mut spec = match (&self.spec, self.model) {
            (Some(path), _) => {
                let spec: ModelSpec = serde_json::from_reader(BufReader::new(File::open(path)?))?;
                spec
            }
            (None, Some(ModelKind::Mdep)) => ModelSpec::m_dependent(self.m, self.alpha, 0),
            (None, Some(ModelKind::Sre)) => ModelSpec::new(Model::Sre(SreParams::pareto(self.d, self.alpha)?), 0),
            (None, None) => return Err(config("one of --model or --spec is required")),
        };
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if let Some(b) = self.burn_in {
            spec.burn_in = Some(b);
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    /// Emit componentwise squares.
    #[arg(long)]
    square: bool,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MaximaArgs {
    /// TimeSeries CSV.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    a_n: f64,
    /// Truncation level: keep only scaled entries above u.
    #[arg(long)]
    u: Option<f64>,
    /// Print M_n = M_n(1) as JSON instead of the process.
    #[arg(long)]
    timeless: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricKind {
    /// Product metric d_p: max of coordinatewise M1 distances.
    WeakM1,
    /// Standard M1 distance on R^d.
    StrongM1,
    /// M1 distance of univariate functions.
    M1,
    /// Sup-norm distance.
    Uniform,
    /// M1 oscillation of --a over windows --delta.
    Oscillation,
}

#[derive(Debug, Args)]
struct MetricArgs {
    #[arg(long, value_enum)]
    kind: MetricKind,
    /// StepFunction CSV.
    #[arg(long)]
    a: PathBuf,
    /// StepFunction CSV (not used by oscillation).
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long, default_value_t = crate::metrics::DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Estimand {
    /// Hill estimate of the tail index of ‖X_i‖ from --input.
    Hill,
    /// Extremal index from replicated paths.
    Theta,
    /// Extremal index as P(sup_{i≥1} ‖Y_i‖ ≤ 1) from the tail process.
    TailTheta,
    /// P(‖Y_0‖ > y) from the tail process.
    TailSurvival,
    /// Anti-clustering probability.
    AntiClustering,
    /// P(‖M_n(0, eps)‖ > delta).
    SmallJump,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ThetaKind {
    Definition,
    Blocks,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    what: Estimand,
    #[command(flatten)]
    model: ModelArgs,
    /// TimeSeries CSV (hill).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Estimate on componentwise squares.
    #[arg(long)]
    square: bool,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    /// Number of order statistics (hill).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, value_enum, default_value_t = ThetaKind::Definition)]
    method: ThetaKind,
    /// Block or anti-clustering range (default floor(n^0.6)).
    #[arg(long)]
    r_n: Option<usize>,
    /// Quantile level of the tail-process threshold.
    #[arg(long, default_value_t = 0.99)]
    quantile: f64,
    /// Tail-process window half-width.
    #[arg(long, default_value_t = 5)]
    w: usize,
    #[arg(long, default_value_t = 2.0)]
    y: f64,
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    #[arg(long, default_value_t = 1)]
    m_gap: usize,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Draws for the empirical a_n; analytic scaling when absent.
    #[arg(long)]
    scaling_reps: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum ExtremalCommand {
    /// Sample a cluster Poisson process with single-point Pareto clusters.
    #[command(after_help = "Output: CSV `t,m1,..,md`, one row per point.")]
    Sample {
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        u: f64,
        /// Axis weights, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        weights: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extremal process generated by a point measure CSV.
    #[command(after_help = "Output: CSV `t,v1,..,vd`.")]
    Process {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// P(M(t_1) ≤ x_1, .., M(t_m) ≤ x_m) for axis-weighted Fréchet exponent measures.
    #[command(after_help = "Output: JSON `{value}`.")]
    Cdf {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        weights: Vec<f64>,
        /// Times, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<f64>,
        /// Threshold vectors separated by `;`, coordinates by `,`.
        #[arg(long)]
        thresholds: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExperimentName {
    FrechetLimit,
    Fidi,
    Counterexample,
    WeakVsStrong,
    TruncationGap,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    name: ExperimentName,
    /// JSON parameter file; missing fields take their defaults.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Comma-separated sample sizes (overrides n / n_list).
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn emit_json<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            let spec = a.model.spec()?;
            let ts = spec.sample_path(a.n)?;
            let ts = if a.square { squared_process(&ts) } else { ts };
            io::write_time_series(&ts, sink(&a.out)?)
        }
        Command::Maxima(a) => {
            let ts = io::read_time_series(open(&a.input)?)?;
            if a.timeless {
                return emit_json(&timeless_max(&ts, a.a_n)?, &a.out);
            }
            let f = match a.u {
                Some(u) => truncated_process(&ts, a.a_n, u)?,
                None => partial_max_process(&ts, a.a_n)?,
            };
            io::write_step_function(&f, sink(&a.out)?)
        }
        Command::Metric(a) => metric(&a),
        Command::Estimate(a) => estimate(&a),
        Command::Extremal(c) => extremal(c),
        Command::Experiment(a) => experiment(&a),
    }
}

fn metric(a: &MetricArgs) -> Result<()> {
    let f = io::read_step_function(open(&a.a)?)?;
    let result = if let MetricKind::Oscillation = a.kind {
        let delta = a.delta.ok_or_else(|| invalid("--delta is required for oscillation"))?;
        MetricResult::exact(m1_oscillation(&f, delta)?)
    } else {
        let b = a.b.as_ref().ok_or_else(|| invalid("--b is required"))?;
        let g: StepFunction = io::read_step_function(open(b)?)?;
        match a.kind {
            MetricKind::WeakM1 => d_weak_m1(&f, &g, a.tol)?,
            MetricKind::StrongM1 => d_strong_m1(&f, &g, a.tol)?,
            MetricKind::M1 => d_m1_univariate(&f, &g, a.tol)?,
            MetricKind::Uniform => MetricResult::exact(f.uniform_distance(&g)?),
            MetricKind::Oscillation => unreachable!(),
        }
    };
    emit_json(&result, &None)
}

fn estimate(a: &EstimateArgs) -> Result<()> {
    let runner = Runner::from_env();
    let (estimate, stderr, params) = match a.what {
        Estimand::Hill => {
            let path = a.input.as_ref().ok_or_else(|| invalid("--input is required for hill"))?;
            let ts = io::read_time_series(open(path)?)?;
            let ts = if a.square { squared_process(&ts) } else { ts };
            let norms: Vec<f64> = ts.norms().into_iter().filter(|&x| x > 0.0).collect();
            let k = a.k.unwrap_or(norms.len() / 20);
            let alpha = hill_estimator(&norms, k)?;
            (alpha, alpha / (k as f64).sqrt(), json!({"k": k, "square": a.square, "observations": norms.len()}))
        }
        Estimand::Theta => {
            let spec = a.model.spec()?;
            let method = match a.method {
                ThetaKind::Definition => ThetaMethod::Definition,
                ThetaKind::Blocks => ThetaMethod::Blocks { r_n: a.r_n },
            };
            let t = extremal_index_blocks(&spec, a.n, a.tau, a.reps, method, &runner)?;
            (t.theta, t.stderr, json!({"model": spec, "n": a.n, "tau": a.tau, "reps": a.reps, "method": method,
                                       "raw": t.raw, "clamped": t.clamped, "threshold": t.threshold}))
        }
        Estimand::TailTheta | Estimand::TailSurvival => {
            let spec = a.model.spec()?;
            let tails = tail_process_sample(&spec, a.n, TailThreshold::Quantile { p: a.quantile }, a.w)?;
            let p = match a.what {
                Estimand::TailTheta => theta_from_ensemble(&tails),
                _ => tails.center_survival(a.y),
            };
            (p.estimate(), p.stderr(), json!({"model": spec, "n": a.n, "quantile": a.quantile, "w": a.w, "y": a.y,
                                              "threshold": tails.threshold(), "samples": tails.len()}))
        }
        Estimand::AntiClustering => {
            let spec = a.model.spec()?;
            let a_n = scaling(&spec, a.scaling_reps, a.n)?;
            let r_n = a.r_n.unwrap_or_else(|| default_block_length(a.n));
            let p = anti_clustering_probe(&spec, a.n, r_n, a.u, a.m_gap, a_n, a.reps, &runner)?;
            (p.estimate(), p.stderr(), json!({"model": spec, "n": a.n, "r_n": r_n, "u": a.u, "m_gap": a.m_gap,
                                              "a_n": a_n, "reps": a.reps, "conditioning_events": p.trials}))
        }
        Estimand::SmallJump => {
            let spec = a.model.spec()?;
            let a_n = scaling(&spec, a.scaling_reps, a.n)?;
            let p = small_jump_probe(&spec, a.n, a_n, a.eps, a.delta, a.reps, &runner)?;
            (p.estimate(), p.stderr(), json!({"model": spec, "n": a.n, "eps": a.eps, "delta": a.delta, "a_n": a_n,
                                              "reps": a.reps}))
        }
    };
    emit_json(&json!({"estimate": estimate, "stderr": stderr, "params": params}), &None)
}

fn scaling(spec: &ModelSpec, reps: Option<usize>, n: usize) -> Result<f64> {
    let rule = match reps {
        Some(reps) => ScalingRule::Empirical { reps, seed: spec.seed },
        None => ScalingRule::Analytic,
    };
    Scaling::new(spec, rule)?.a_n(n)
}

fn extremal(c: ExtremalCommand) -> Result<()> {
    match c {
        ExtremalCommand::Sample { theta, alpha, u, weights, seed, out } => {
            let sampler = IidCluster::new(alpha, &weights)?;
            let pm = sample_cluster_process(theta, alpha, &sampler, u, &mut stream(seed, 0))?;
            io::write_point_measure(&pm, sink(&out)?)
        }
        ExtremalCommand::Process { input, out } => {
            let pm = io::read_point_measure(open(&input)?)?;
            io::write_step_function(&sample_extremal_process(&pm), sink(&out)?)
        }
        ExtremalCommand::Cdf { alpha, weights, times, thresholds } => {
            let xs = thresholds
                .split(';')
                .map(|v| {
                    v.split(',')
                        .map(|x| x.trim().parse::<f64>().map_err(|_| invalid(format!("bad threshold `{x}`"))))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let model = ExponentMeasureModel::IidFrechet { alpha, weights };
            model.validate()?;
            let value = extremal_fidi_cdf(&model, &times, &xs)?;
            emit_json(&json!({ "value": value }), &None)
        }
    }
}

fn load_params<P: serde::de::DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<P> {
    match path {
        Some(p) => Ok(serde_json::from_reader(open(p)?)?),
        None => Ok(P::default()),
    }
}

fn experiment(a: &ExperimentArgs) -> Result<()> {
    let runner = Runner::from_env();
    let single_n = || -> Result<Option<usize>> {
        match a.n.as_deref() {
            None => Ok(None),
            Some([n]) => Ok(Some(*n)),
            Some(_) => Err(invalid("this experiment takes a single --n")),
        }
    };
    let report: ExperimentReport = match a.name {
        ExperimentName::FrechetLimit => {
            let mut p: lab::FrechetLimitParams = load_params(&a.params)?;
            p.n = single_n()?.unwrap_or(p.n);
            p.reps = a.reps.unwrap_or(p.reps);
            p.model.seed = a.seed.unwrap_or(p.model.seed);
            lab::exp_frechet_limit(&p, &runner)?
        }
        ExperimentName::Fidi => {
            let mut p: lab::FidiParams = load_params(&a.params)?;
            p.n_list = a.n.clone().unwrap_or(p.n_list);
            p.reps = a.reps.unwrap_or(p.reps);
            p.model.seed = a.seed.unwrap_or(p.model.seed);
            lab::exp_fidi_convergence(&p, &runner)?
        }
        ExperimentName::Counterexample => {
            let mut p: lab::CounterexampleParams = load_params(&a.params)?;
            p.n_list = a.n.clone().unwrap_or(p.n_list);
            p.reps = a.reps.unwrap_or(p.reps);
            p.seed = a.seed.unwrap_or(p.seed);
            p.eps = a.eps.unwrap_or(p.eps);
            lab::exp_counterexample_m1(&p, &runner)?
        }
        ExperimentName::WeakVsStrong => {
            let mut p: lab::WeakVsStrongParams = load_params(&a.params)?;
            p.n_list = a.n.clone().unwrap_or(p.n_list);
            p.u = a.u.unwrap_or(p.u);
            lab::exp_weak_vs_strong(&p)?
        }
        ExperimentName::TruncationGap => {
            let mut p: lab::TruncationGapParams = load_params(&a.params)?;
            p.n = single_n()?.unwrap_or(p.n);
            p.reps = a.reps.unwrap_or(p.reps);
            p.model.seed = a.seed.unwrap_or(p.model.seed);
            p.eps = a.eps.unwrap_or(p.eps);
            if let Some(u) = a.u {
                p.u_list = vec![u];
            }
            lab::exp_truncation_gap(&p, &runner)?
        }
    };
    eprintln!("{}: {:.3}s", report.name, report.runtime.as_secs_f64());
    match &a.out_dir {
        Some(dir) => {
            for p in report.write_to_dir(dir)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        None => {
            let mut w = sink(&None)?;
            writeln!(w, "{}", report.to_json()?)?;
            w.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
