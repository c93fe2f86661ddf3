//! Nonnegative piecewise-constant càdlàg functions on `[0, 1]` and their
//! completed graphs.
//!
//! A [`StepFunction`] stores one plateau per breakpoint: the value held on
//! `[t_i, t_{i+1})`, with the last plateau extending to and including `1`.
//! Construction always canonicalizes, so adjacent plateaus differ and every
//! breakpoint past the first is a genuine jump.
//!
//! The left limit at `0` is undefined. Completed graphs start at `(0, x(0))`,
//! which for partial-maxima processes is the origin.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

/// Validates and merges redundant breakpoints. `values` is row-major with
/// `dim` entries per breakpoint.
fn canonical_parts(
    dim: usize,
    breakpoints: &[f64],
    values: &[f64],
    nonnegative: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if breakpoints.is_empty() {
        return Err(invalid("at least one breakpoint is required"));
    }
    if values.len() != breakpoints.len() * dim {
        return Err(invalid(format!(
            "{} breakpoints need {} values, got {}",
            breakpoints.len(),
            breakpoints.len() * dim,
            values.len()
        )));
    }
    if breakpoints[0] != 0.0 {
        return Err(invalid("first breakpoint must be 0"));
    }
    for w in breakpoints.windows(2) {
        if !(w[0] < w[1]) {
            return Err(invalid("breakpoints must be strictly increasing"));
        }
    }
    if let Some(&last) = breakpoints.last() {
        if !(last <= 1.0) {
            return Err(invalid("breakpoints must lie in [0, 1]"));
        }
    }
    for &v in values {
        if !v.is_finite() {
            return Err(invalid("plateau values must be finite"));
        }
        if nonnegative && v < 0.0 {
            return Err(invalid("plateau values must be nonnegative"));
        }
    }

    let mut bps = Vec::with_capacity(breakpoints.len());
    let mut vals = Vec::with_capacity(values.len());
    for (i, &t) in breakpoints.iter().enumerate() {
        let row = &values[i * dim..(i + 1) * dim];
        if i > 0 && row == &vals[vals.len() - dim..] {
            continue;
        }
        bps.push(t);
        vals.extend_from_slice(row);
    }
    Ok((bps, vals))
}

fn plateau_at(breakpoints: &[f64], t: f64) -> usize {
    breakpoints.partition_point(|&b| b <= t) - 1
}

fn plateau_before(breakpoints: &[f64], t: f64) -> usize {
    breakpoints.partition_point(|&b| b < t) - 1
}

/// A `d`-dimensional nonnegative step function on `[0, 1]` in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFunctionRepr", into = "StepFunctionRepr")]
pub struct StepFunction {
    dim: usize,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct StepFunctionRepr {
    dim: usize,
    breakpoints: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TryFrom<StepFunctionRepr> for StepFunction {
    type Error = Error;

    fn try_from(r: StepFunctionRepr) -> Result<Self> {
        StepFunction::new(r.dim, r.breakpoints, r.values)
    }
}

impl From<StepFunction> for StepFunctionRepr {
    fn from(f: StepFunction) -> Self {
        let values = f.plateaus().map(<[f64]>::to_vec).collect();
        StepFunctionRepr { dim: f.dim, breakpoints: f.breakpoints, values }
    }
}

impl StepFunction {
    pub fn new(dim: usize, breakpoints: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
        }
        let flat: Vec<f64> = values.into_iter().flatten().collect();
        Self::from_flat(dim, breakpoints, flat)
    }

    /// Like [`StepFunction::new`] with plateau values laid out row-major.
    pub fn from_flat(dim: usize, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let (breakpoints, values) = canonical_parts(dim, &breakpoints, &values, true)?;
        Ok(Self { dim, breakpoints, values })
    }

    pub fn constant(value: Vec<f64>) -> Result<Self> {
        let dim = value.len();
        Self::from_flat(dim, vec![0.0], value)
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self { dim, breakpoints: vec![0.0], values: vec![0.0; dim] }
    }

    /// Single jump from `0` to `height` at time `at` (univariate).
    pub fn indicator(height: f64, at: f64) -> Result<Self> {
        if at == 0.0 {
            return Self::constant(vec![height]);
        }
        Self::from_flat(1, vec![0.0, at], vec![0.0, height])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn num_plateaus(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn plateau(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn plateaus(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn is_constant(&self) -> bool {
        self.breakpoints.len() == 1
    }

    /// Right-continuous value `x(t)`.
    pub fn eval(&self, t: f64) -> Result<&[f64]> {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain(format!("t = {t} outside [0, 1]")));
        }
        Ok(self.plateau(plateau_at(&self.breakpoints, t)))
    }

    /// Left limit `x(t-)` for `t` in `(0, 1]`.
    pub fn left_limit(&self, t: f64) -> Result<&[f64]> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain(format!("left limit needs t in (0, 1], got {t}")));
        }
        Ok(self.plateau(plateau_before(&self.breakpoints, t)))
    }

    pub fn terminal(&self) -> &[f64] {
        self.plateau(self.num_plateaus() - 1)
    }

    /// Univariate projection onto coordinate `k` (0-based), re-canonicalized.
    pub fn coordinate(&self, k: usize) -> Result<StepFunction> {
        if k >= self.dim {
            return Err(invalid(format!("coordinate {k} out of range for dimension {}", self.dim)));
        }
        let vals: Vec<f64> = self.plateaus().map(|p| p[k]).collect();
        StepFunction::from_flat(1, self.breakpoints.clone(), vals)
    }

    /// `x^i - x^j` as a signed univariate step function.
    pub fn coordinate_difference(&self, i: usize, j: usize) -> Result<SignedStep> {
        if i >= self.dim || j >= self.dim {
            return Err(invalid("coordinate out of range"));
        }
        let vals: Vec<f64> = self.plateaus().map(|p| p[i] - p[j]).collect();
        SignedStep::new(self.breakpoints.clone(), vals)
    }

    pub fn completed_graph(&self, mode: GraphMode) -> Result<GraphChain> {
        match mode {
            GraphMode::Strong => Ok(GraphChain::build(self.dim, &self.breakpoints, &self.values)),
            GraphMode::Coordinate(k) => {
                let c = self.coordinate(k)?;
                Ok(GraphChain::build(1, &c.breakpoints, &c.values))
            }
        }
    }

    /// `sup_t ||f(t) - g(t)||_∞`, exact over the merged breakpoints.
    pub fn uniform_distance(&self, other: &StepFunction) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let (mut i, mut j) = (0, 0);
        let mut best = 0.0_f64;
        loop {
            let a = self.plateau(i);
            let b = other.plateau(j);
            for (x, y) in a.iter().zip(b) {
                best = best.max((x - y).abs());
            }
            let next_a = self.breakpoints.get(i + 1).copied();
            let next_b = other.breakpoints.get(j + 1).copied();
            match (next_a, next_b) {
                (None, None) => break,
                (Some(ta), Some(tb)) if ta == tb => {
                    i += 1;
                    j += 1;
                }
                (Some(ta), Some(tb)) if ta < tb => i += 1,
                (Some(_), None) => i += 1,
                _ => j += 1,
            }
        }
        Ok(best)
    }
}

/// Which completed graph to trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMode {
    /// `Γ_x`: jumps filled by straight segments in `R^d`.
    Strong,
    /// The univariate graph of coordinate `k` (0-based).
    Coordinate(usize),
}

/// Polygonal chain through `[0,1] × R^d` tracing a completed graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphChain {
    dim: usize,
    times: Vec<f64>,
    points: Vec<f64>,
}

impl GraphChain {
    fn build(dim: usize, breakpoints: &[f64], values: &[f64]) -> Self {
        let mut chain = GraphChain { dim, times: Vec::new(), points: Vec::new() };
        chain.push(0.0, &values[..dim]);
        for (i, &t) in breakpoints.iter().enumerate().skip(1) {
            chain.push(t, &values[(i - 1) * dim..i * dim]);
            chain.push(t, &values[i * dim..(i + 1) * dim]);
        }
        let last = breakpoints.len() - 1;
        chain.push(1.0, &values[last * dim..(last + 1) * dim]);
        chain
    }

    fn push(&mut self, t: f64, x: &[f64]) {
        if let Some(&lt) = self.times.last() {
            if lt == t && &self.points[self.points.len() - self.dim..] == x {
                return;
            }
        }
        self.times.push(t);
        self.points.extend_from_slice(x);
    }

    /// Builds a chain from explicit vertices (`dim` spatial coordinates each).
    pub fn from_vertices(dim: usize, vertices: &[(f64, Vec<f64>)]) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(invalid("a chain needs at least two vertices"));
        }
        let mut chain = GraphChain { dim, times: Vec::new(), points: Vec::new() };
        for (t, x) in vertices {
            if x.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
            }
            chain.times.push(*t);
            chain.points.extend_from_slice(x);
        }
        Ok(chain)
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

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.times.iter().copied().zip(self.points.chunks_exact(self.dim))
    }
}

/// Univariate step function with values of either sign, e.g. a difference of
/// two coordinates of a maxima process.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedStep {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl SignedStep {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let (breakpoints, values) = canonical_parts(1, &breakpoints, &values, false)?;
        Ok(Self { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain(format!("t = {t} outside [0, 1]")));
        }
        Ok(self.values[plateau_at(&self.breakpoints, t)])
    }
}

impl TryFrom<&StepFunction> for SignedStep {
    type Error = Error;

    fn try_from(f: &StepFunction) -> Result<Self> {
        if f.dim != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: f.dim });
        }
        Ok(SignedStep { breakpoints: f.breakpoints.clone(), values: f.values.clone() })
    }
}
