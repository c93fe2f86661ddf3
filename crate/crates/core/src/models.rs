//! Seeded generators for stationary, jointly regularly varying processes:
//! m-dependent Fréchet windows, stochastic recurrence equations with
//! nonnegative coefficients, and CCC-GARCH(p, q).
//!
//! A [`ModelSpec`] is validated in full before the first draw. Paths are a
//! deterministic function of the spec's seed: [`ModelSpec::sample_path`] uses
//! stream 0 and replicate `r` uses stream `r` of the same seed.

use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{config, invalid, Error, Result};
use crate::mc::{stream, SimRng};

/// Default burn-in for the recursive models.
pub const DEFAULT_BURN_IN: usize = 1000;

/// Unit Fréchet with tail index `alpha`, by inversion of `exp(-x^{-α})`.
pub fn frechet_sample<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    frechet_from_uniform(u, alpha)
}

pub fn frechet_from_uniform(u: f64, alpha: f64) -> f64 {
    let e = -u.ln();
    if alpha == 1.0 {
        1.0 / e
    } else {
        e.powf(-1.0 / alpha)
    }
}

/// Pareto with `P(X > x) = (x / scale)^{-α}` for `x ≥ scale`.
pub fn pareto_sample<R: Rng + ?Sized>(alpha: f64, scale: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    scale * u.powf(-1.0 / alpha)
}

/// Law of a single nonnegative entry, drawn i.i.d. across entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum EntryLaw {
    Constant { value: f64 },
    Uniform { lo: f64, hi: f64 },
    Pareto { alpha: f64, scale: f64 },
    Exponential { mean: f64 },
}

impl EntryLaw {
    fn validate(&self, what: &str) -> Result<()> {
        let ok = match *self {
            EntryLaw::Constant { value } => value.is_finite() && value >= 0.0,
            EntryLaw::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi,
            EntryLaw::Pareto { alpha, scale } => alpha > 0.0 && scale > 0.0 && scale.is_finite(),
            EntryLaw::Exponential { mean } => mean > 0.0 && mean.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(config(format!("{what}: invalid or possibly negative law {self:?}")))
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            EntryLaw::Constant { value } => value,
            EntryLaw::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            EntryLaw::Pareto { alpha, scale } => pareto_sample(alpha, scale, rng),
            EntryLaw::Exponential { mean } => {
                let u: f64 = rng.sample(Open01);
                -mean * u.ln()
            }
        }
    }

    /// Mean, when finite.
    pub fn mean(&self) -> Option<f64> {
        match *self {
            EntryLaw::Constant { value } => Some(value),
            EntryLaw::Uniform { lo, hi } => Some(0.5 * (lo + hi)),
            EntryLaw::Pareto { alpha, scale } => (alpha > 1.0).then(|| scale * alpha / (alpha - 1.0)),
            EntryLaw::Exponential { mean } => Some(mean),
        }
    }
}

/// `X_n = A_n X_{n-1} + B_n` with i.i.d. nonnegative `(A_n, B_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SreParams {
    pub d: usize,
    /// Law of each entry of `A_n`.
    pub a_law: EntryLaw,
    /// Law of each entry of `B_n`.
    pub b_law: EntryLaw,
}

impl SreParams {
    /// Pareto(`alpha`) entries for both `A` and `B`, with `A` scaled so that
    /// the expected row sum of `A` is one half.
    pub fn pareto(d: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(config("pareto SRE needs alpha > 1 for a finite mean"));
        }
        let scale = 0.5 * (alpha - 1.0) / (alpha * d as f64);
        Ok(SreParams {
            d,
            a_law: EntryLaw::Pareto { alpha, scale },
            b_law: EntryLaw::Pareto { alpha, scale: 1.0 },
        })
    }
}

/// Symmetric, zero-mean, unit-variance innovation coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Innovation {
    Gaussian,
    /// Student t with `nu > 2` degrees of freedom, rescaled to unit variance.
    StudentT { nu: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchParams {
    pub d: usize,
    /// Positive intercept `C`.
    pub c: Vec<f64>,
    /// `A_1..A_p`, nonnegative `d × d`.
    pub a: Vec<Vec<Vec<f64>>>,
    /// `B_1..B_q`, nonnegative `d × d`.
    pub b: Vec<Vec<Vec<f64>>>,
    /// Constant conditional correlation matrix.
    pub r: Vec<Vec<f64>>,
    #[serde(default = "default_innovation")]
    pub innovation: Innovation,
    /// Reject configurations whose `ΣA_i + ΣB_j` has a row sum ≥ 1.
    #[serde(default = "default_true")]
    pub enforce_stationarity: bool,
}

fn default_innovation() -> Innovation {
    Innovation::Gaussian
}

fn default_true() -> bool {
    true
}

impl GarchParams {
    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    fn validate(&self) -> Result<()> {
        let d = self.d;
        if d == 0 {
            return Err(config("garch dimension must be positive"));
        }
        if self.c.len() != d || self.c.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(config("C must be a positive vector of length d"));
        }
        for (name, mats) in [("A", &self.a), ("B", &self.b)] {
            for (i, m) in mats.iter().enumerate() {
                check_square(m, d, &format!("{name}_{}", i + 1))?;
                if m.iter().flatten().any(|&v| !(v >= 0.0 && v.is_finite())) {
                    return Err(config(format!("{name}_{} must be nonnegative", i + 1)));
                }
            }
        }
        check_square(&self.r, d, "R")?;
        for i in 0..d {
            if self.r[i][i] != 1.0 {
                return Err(config("R must have a unit diagonal"));
            }
            for j in 0..d {
                if !self.r[i][j].is_finite() || self.r[i][j] != self.r[j][i] {
                    return Err(config("R must be symmetric"));
                }
            }
        }
        cholesky(&self.r)?;
        if let Innovation::StudentT { nu } = self.innovation {
            if !(nu > 2.0) {
                return Err(config("student t innovations need nu > 2 for unit variance"));
            }
        }
        if self.enforce_stationarity {
            for i in 0..d {
                let row: f64 = self.a.iter().chain(&self.b).map(|m| m[i].iter().sum::<f64>()).sum();
                if !(row < 1.0) {
                    return Err(config(format!(
                        "stationarity guard: row {i} of sum(A) + sum(B) is {row} >= 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_square(m: &[Vec<f64>], d: usize, name: &str) -> Result<()> {
    if m.len() != d || m.iter().any(|r| r.len() != d) {
        return Err(config(format!("{name} must be {d} x {d}")));
    }
    Ok(())
}

/// Lower-triangular `L` with `L Lᵀ = R` for positive semidefinite `R`; zero
/// pivots leave their column empty.
fn cholesky(r: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = r.len();
    let mut l = vec![vec![0.0; d]; d];
    for j in 0..d {
        let mut diag = r[j][j];
        for k in 0..j {
            diag -= l[j][k] * l[j][k];
        }
        if diag < -1e-10 {
            return Err(config("R is not positive semidefinite"));
        }
        let pivot = diag.max(0.0).sqrt();
        l[j][j] = pivot;
        for i in (j + 1)..d {
            let mut s = r[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if pivot > 1e-12 {
                l[i][j] = s / pivot;
            } else if s.abs() > 1e-8 {
                return Err(config("R is not positive semidefinite"));
            }
        }
    }
    Ok(l)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    /// `X_n = (Z_n, Z_{n-1}, .., Z_{n-m})` over i.i.d. Fréchet(`alpha`) `Z`.
    MDependentFrechet { m: usize, alpha: f64 },
    Sre(SreParams),
    CccGarch(GarchParams),
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::MDependentFrechet { m, .. } => m + 1,
            Model::Sre(p) => p.d,
            Model::CccGarch(p) => p.d,
        }
    }

    pub fn default_burn_in(&self) -> usize {
        match self {
            Model::MDependentFrechet { .. } => 0,
            _ => DEFAULT_BURN_IN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Model::MDependentFrechet { alpha, .. } => {
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    return Err(config("alpha must be positive"));
                }
                Ok(())
            }
            Model::Sre(p) => {
                if p.d == 0 {
                    return Err(config("SRE dimension must be positive"));
                }
                p.a_law.validate("A law")?;
                p.b_law.validate("B law")
            }
            Model::CccGarch(p) => p.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(model: Model, seed: u64) -> Self {
        Self { model, burn_in: None, seed }
    }

    pub fn m_dependent(m: usize, alpha: f64, seed: u64) -> Self {
        Self::new(Model::MDependentFrechet { m, alpha }, seed)
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = Some(burn_in);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or_else(|| self.model.default_burn_in())
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()
    }

    pub fn sample_path(&self, n: usize) -> Result<TimeSeries> {
        self.sample_replicate(n, 0)
    }

    /// Path drawn from stream `replicate` of the spec's seed.
    pub fn sample_replicate(&self, n: usize, replicate: u64) -> Result<TimeSeries> {
        let mut rng = stream(self.seed, replicate);
        self.sample_with(n, &mut rng)
    }

    pub fn sample_with(&self, n: usize, rng: &mut SimRng) -> Result<TimeSeries> {
        if n == 0 {
            return Err(invalid("path length must be at least 1"));
        }
        self.validate()?;
        let burn = self.burn_in();
        match &self.model {
            Model::MDependentFrechet { m, alpha } => Ok(m_dependent_path(*m, *alpha, n, burn, rng)),
            Model::Sre(p) => sre_path(p, n, burn, rng),
            Model::CccGarch(p) => garch_path(p, n, burn, rng),
        }
    }
}

/// Rows `X_1..X_n` of a stationary vector process.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    dim: usize,
    data: Vec<f64>,
}

impl TimeSeries {
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(invalid("row-major data does not match the dimension"));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(invalid("time series entries must be finite"));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
        }
        Self::from_flat(dim, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Row `i` (0-based, i.e. `X_{i+1}`).
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    /// Max-norm `max_k |X_i^k|` of every row.
    pub fn norms(&self) -> Vec<f64> {
        self.rows().map(|r| r.iter().fold(0.0_f64, |m, v| m.max(v.abs()))).collect()
    }

    pub fn require_nonnegative(&self) -> Result<()> {
        if self.is_nonnegative() {
            Ok(())
        } else {
            Err(invalid("series has negative entries; square it first"))
        }
    }
}

/// Componentwise square `((X^1)², .., (X^d)²)`.
pub fn squared_process(ts: &TimeSeries) -> TimeSeries {
    TimeSeries { dim: ts.dim, data: ts.data.iter().map(|v| v * v).collect() }
}

fn m_dependent_path(m: usize, alpha: f64, n: usize, burn: usize, rng: &mut SimRng) -> TimeSeries {
    for _ in 0..burn {
        frechet_sample(alpha, rng);
    }
    // z[j] = Z_{j - m + 1}; row k (X_{k+1}) = (z[k + m], .., z[k])
    let z: Vec<f64> = (0..n + m).map(|_| frechet_sample(alpha, rng)).collect();
    let mut data = Vec::with_capacity(n * (m + 1));
    for k in 0..n {
        data.extend((0..=m).map(|j| z[k + m - j]));
    }
    TimeSeries { dim: m + 1, data }
}

fn sre_path(p: &SreParams, n: usize, burn: usize, rng: &mut SimRng) -> Result<TimeSeries> {
    let d = p.d;
    let mut x = vec![0.0; d];
    let mut a = vec![0.0; d * d];
    let mut next = vec![0.0; d];
    let mut data = Vec::with_capacity(n * d);
    for step in 0..burn + n {
        for v in a.iter_mut() {
            *v = p.a_law.sample(rng);
        }
        for i in 0..d {
            let b = p.b_law.sample(rng);
            next[i] = b + (0..d).map(|j| a[i * d + j] * x[j]).sum::<f64>();
        }
        if next.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Numeric { step, message: "SRE state left [0, ∞)".into() });
        }
        std::mem::swap(&mut x, &mut next);
        if step >= burn {
            data.extend_from_slice(&x);
        }
    }
    Ok(TimeSeries { dim: d, data })
}

/// Recursion state: the last `p` squared observations and last `q`
/// conditional variance diagonals, most recent first.
#[derive(Debug, Clone, PartialEq)]
pub struct GarchState {
    pub squared_obs: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
    pub step: usize,
}

impl GarchState {
    /// All-zero history.
    pub fn zero(params: &GarchParams) -> Self {
        GarchState {
            squared_obs: vec![vec![0.0; params.d]; params.p()],
            variances: vec![vec![0.0; params.d]; params.q()],
            step: 0,
        }
    }
}

/// One CCC-GARCH observation with its conditional covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GarchOutput {
    pub x: Vec<f64>,
    /// `δ(H_n)`.
    pub h_diag: Vec<f64>,
    /// `H_n = D_n R D_n`, row-major.
    pub h: Vec<f64>,
}

/// Applies the diagonal recursion, `D_n = diag(√H_n(i,i))`, `H_n = D_n R D_n`
/// and `X_n = D_n η_n`, then shifts the history.
pub fn ccc_garch_step(
    state: &GarchState,
    eta: &[f64],
    params: &GarchParams,
) -> Result<(GarchState, GarchOutput)> {
    let d = params.d;
    if eta.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: eta.len() });
    }
    let mut h_diag = params.c.clone();
    for (a, sq) in params.a.iter().zip(&state.squared_obs) {
        for i in 0..d {
            h_diag[i] += (0..d).map(|j| a[i][j] * sq[j]).sum::<f64>();
        }
    }
    for (b, hv) in params.b.iter().zip(&state.variances) {
        for i in 0..d {
            h_diag[i] += (0..d).map(|j| b[i][j] * hv[j]).sum::<f64>();
        }
    }
    let scale: Vec<f64> = h_diag.iter().map(|h| h.sqrt()).collect();
    let mut h = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            h[i * d + j] = scale[i] * params.r[i][j] * scale[j];
            h[j * d + i] = h[i * d + j];
        }
    }
    let x: Vec<f64> = scale.iter().zip(eta).map(|(s, e)| s * e).collect();
    if h_diag.iter().chain(&x).any(|v| !v.is_finite()) {
        return Err(Error::Numeric { step: state.step, message: "non-finite GARCH state".into() });
    }

    let mut next = state.clone();
    next.step += 1;
    if params.p() > 0 {
        next.squared_obs.pop();
        next.squared_obs.insert(0, x.iter().map(|v| v * v).collect());
    }
    if params.q() > 0 {
        next.variances.pop();
        next.variances.insert(0, h_diag.clone());
    }
    Ok((next, GarchOutput { x, h_diag, h }))
}

/// Correlated innovation `η = L z` with `L Lᵀ = R`.
pub struct InnovationSampler {
    law: Innovation,
    chol: Vec<Vec<f64>>,
}

impl InnovationSampler {
    pub fn new(params: &GarchParams) -> Result<Self> {
        Ok(Self { law: params.innovation, chol: cholesky(&params.r)? })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let d = self.chol.len();
        let z: Vec<f64> = (0..d)
            .map(|_| match self.law {
                Innovation::Gaussian => rng.sample::<f64, _>(StandardNormal),
                Innovation::StudentT { nu } => {
                    let t = StudentT::new(nu).expect("validated nu");
                    t.sample(rng) * ((nu - 2.0) / nu).sqrt()
                }
            })
            .collect();
        (0..d).map(|i| (0..=i).map(|k| self.chol[i][k] * z[k]).sum()).collect()
    }
}

fn garch_path(p: &GarchParams, n: usize, burn: usize, rng: &mut SimRng) -> Result<TimeSeries> {
    let sampler = InnovationSampler::new(p)?;
    let mut state = GarchState::zero(p);
    let mut data = Vec::with_capacity(n * p.d);
    for step in 0..burn + n {
        let eta = sampler.sample(rng);
        let (next, out) = ccc_garch_step(&state, &eta, p)?;
        state = next;
        if step >= burn {
            data.extend_from_slice(&out.x);
        }
    }
    Ok(TimeSeries { dim: p.d, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn garch11(a: f64, b: f64, rho: f64) -> GarchParams {
        GarchParams {
            d: 2,
            c: vec![0.1, 0.2],
            a: vec![vec![vec![a, 0.05], vec![0.02, a]]],
            b: vec![vec![vec![b, 0.0], vec![0.0, b]]],
            r: vec![vec![1.0, rho], vec![rho, 1.0]],
            innovation: Innovation::StudentT { nu: 5.0 },
            enforce_stationarity: true,
        }
    }

    #[test]
    fn frechet_inversion() {
        assert!((frechet_from_uniform((-1.0f64).exp(), 1.0) - 1.0).abs() < 1e-15);
        assert!((frechet_from_uniform((-1.0f64).exp(), 2.5) - 1.0).abs() < 1e-15);
        // P(Z <= 1) = e^{-1} for every alpha
        let mut rng = stream(3, 0);
        let n = 200_000;
        let hits = (0..n).filter(|_| frechet_sample(0.7, &mut rng) <= 1.0).count();
        assert!((hits as f64 / n as f64 - (-1.0f64).exp()).abs() < 0.005);
    }

    #[test]
    fn m0_rows_are_scalars() {
        let ts = ModelSpec::m_dependent(0, 1.0, 9).sample_path(50).unwrap();
        assert_eq!(ts.dim(), 1);
        assert_eq!(ts.len(), 50);
        assert!(ts.is_nonnegative());
    }

    #[test]
    fn m1_rows_share_an_entry() {
        let spec = ModelSpec::m_dependent(1, 1.0, 7);
        let ts = spec.sample_path(100).unwrap();
        for k in 0..99 {
            assert_eq!(ts.row(k + 1)[1], ts.row(k)[0]);
        }
        // replay: the same stream produces Z_0, Z_1, ..
        let mut rng = stream(7, 0);
        let z: Vec<f64> = (0..101).map(|_| frechet_sample(1.0, &mut rng)).collect();
        for k in 0..100 {
            assert_eq!(ts.row(k), &[z[k + 1], z[k]]);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = ModelSpec::new(Model::CccGarch(garch11(0.1, 0.8, 0.3)), 5);
        assert_eq!(spec.sample_path(200).unwrap(), spec.sample_path(200).unwrap());
        let other = spec.clone().with_seed(6);
        assert_ne!(spec.sample_path(200).unwrap(), other.sample_path(200).unwrap());
    }

    #[test]
    fn garch_guard_and_validation() {
        let bad = ModelSpec::new(Model::CccGarch(garch11(0.3, 0.7, 0.0)), 0);
        assert!(matches!(bad.sample_path(10), Err(Error::Config(_))));
        let mut off = garch11(0.3, 0.7, 0.0);
        off.enforce_stationarity = false;
        assert!(ModelSpec::new(Model::CccGarch(off), 0).validate().is_ok());
        let not_psd = garch11(0.1, 0.1, 1.5);
        assert!(ModelSpec::new(Model::CccGarch(not_psd), 0).validate().is_err());
        let mut neg = garch11(0.1, 0.1, 0.0);
        neg.a[0][0][1] = -0.1;
        assert!(ModelSpec::new(Model::CccGarch(neg), 0).validate().is_err());
        let mut zero_c = garch11(0.1, 0.1, 0.0);
        zero_c.c[0] = 0.0;
        assert!(ModelSpec::new(Model::CccGarch(zero_c), 0).validate().is_err());
        // singular but PSD correlation is fine
        assert!(ModelSpec::new(Model::CccGarch(garch11(0.1, 0.1, 1.0)), 0).validate().is_ok());
    }

    #[test]
    fn garch_step_with_zero_coefficients() {
        let mut p = garch11(0.0, 0.0, 0.0);
        p.c = vec![1.0, 1.0];
        p.a = vec![vec![vec![0.0; 2]; 2]];
        p.b = vec![vec![vec![0.0; 2]; 2]];
        let (_, out) = ccc_garch_step(&GarchState::zero(&p), &[0.3, -1.2], &p).unwrap();
        assert_eq!(out.h_diag, vec![1.0, 1.0]);
        assert_eq!(out.x, vec![0.3, -1.2]);
    }

    #[test]
    fn garch_step_matches_scalar_recursion() {
        let (c, a, b) = (0.2, 0.15, 0.7);
        let p = GarchParams {
            d: 1,
            c: vec![c],
            a: vec![vec![vec![a]]],
            b: vec![vec![vec![b]]],
            r: vec![vec![1.0]],
            innovation: Innovation::Gaussian,
            enforce_stationarity: true,
        };
        let etas = [0.5, -1.3, 2.2, 0.1, -0.7, 1.9];
        let mut state = GarchState::zero(&p);
        let (mut x_prev, mut h_prev) = (0.0_f64, 0.0_f64);
        for &e in &etas {
            let h = c + a * x_prev * x_prev + b * h_prev;
            let x = h.sqrt() * e;
            let (next, out) = ccc_garch_step(&state, &[e], &p).unwrap();
            assert!((out.h_diag[0] - h).abs() < 1e-14);
            assert!((out.x[0] - x).abs() < 1e-14);
            state = next;
            x_prev = x;
            h_prev = h;
        }
    }

    #[test]
    fn squared_process_examples() {
        let ts = TimeSeries::from_rows(2, &[vec![2.0, -3.0], vec![0.0, 0.0]]).unwrap();
        let sq = squared_process(&ts);
        assert_eq!(sq.row(0), &[4.0, 9.0]);
        assert_eq!(sq.row(1), &[0.0, 0.0]);
    }

    #[test]
    fn sre_is_nonnegative_and_validated() {
        let spec = ModelSpec::new(Model::Sre(SreParams::pareto(2, 3.0).unwrap()), 1);
        let ts = spec.sample_path(2000).unwrap();
        assert!(ts.is_nonnegative());
        let bad = SreParams { d: 2, a_law: EntryLaw::Uniform { lo: -0.1, hi: 0.2 }, b_law: EntryLaw::Constant { value: 1.0 } };
        assert!(ModelSpec::new(Model::Sre(bad), 0).sample_path(5).is_err());
        assert!(SreParams::pareto(2, 0.9).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let spec = ModelSpec::m_dependent(1, 1.0, 7);
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"kind":"m_dependent_frechet","m":1,"alpha":1.0,"seed":7}"#);
        let g: ModelSpec = serde_json::from_str(
            r#"{"kind":"ccc_garch","d":1,"c":[0.1],"a":[[[0.1]]],"b":[[[0.8]]],"r":[[1.0]],"burn_in":10}"#,
        )
        .unwrap();
        assert_eq!(g.burn_in(), 10);
        assert_eq!(g.seed, 0);
    }

    #[test]
    fn zero_length_rejected() {
        assert!(ModelSpec::m_dependent(1, 1.0, 0).sample_path(0).is_err());
    }
}
