//! Skorohod M1 metric kernel on step functions.
//!
//! For piecewise-constant functions the completed graphs are polygonal
//! chains, and the infimum over pairs of parametric representations equals
//! the continuous Fréchet distance between the two chains under the ground
//! metric `max(|Δt|, ||Δx||_∞)`. That distance is found by bisection on the
//! leash length, each probe being an Alt–Godau reachability sweep through
//! the free-space diagram. Under an L∞ ground metric every free-space cell is
//! an intersection of slabs, hence convex, so free space on each cell edge is
//! a single interval.
//!
//! Reported values are upper ends of the final bracket: the true distance
//! lies in `[value - tolerance, value]`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cadlag::{GraphChain, GraphMode, SignedStep, StepFunction};
use crate::error::{domain, Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Closed form; `tolerance` is zero.
    ExactSweep,
    /// Bisection over free-space reachability.
    DpBinarySearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub value: f64,
    pub tolerance: f64,
    pub method: Method,
}

impl MetricResult {
    pub fn exact(value: f64) -> Self {
        Self { value, tolerance: 0.0, method: Method::ExactSweep }
    }

    /// Lower end of the bracket.
    pub fn lower(&self) -> f64 {
        self.value - self.tolerance
    }
}

/// Distance from `x2` to the closed segment between `x1` and `x3`.
pub fn m1_component(x1: f64, x2: f64, x3: f64) -> f64 {
    let (lo, hi) = if x1 <= x3 { (x1, x3) } else { (x3, x1) };
    if (lo..=hi).contains(&x2) {
        0.0
    } else {
        (x2 - x1).abs().min((x3 - x2).abs())
    }
}

/// M1 oscillation `ω_δ` of a univariate step function.
pub fn m1_oscillation(f: &StepFunction, delta: f64) -> Result<f64> {
    let s = SignedStep::try_from(f)?;
    m1_oscillation_signed(&s, delta)
}

/// M1 oscillation of a signed univariate step function.
///
/// `M(x(t1), x(t), x(t2))` only depends on which plateaus hold `t1 ≤ t ≤ t2`.
/// Plateaus `a ≤ c` are jointly reachable within a window of length `δ` iff
/// `t_c - t_{a+1} < δ` (`t1` stays strictly left of `t_{a+1}`), and the best
/// middle value is the extreme plateau between them.
pub fn m1_oscillation_signed(f: &SignedStep, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(domain(format!("oscillation window must be positive, got {delta}")));
    }
    let b = f.breakpoints();
    let v = f.values();
    let k = b.len();
    let mut best = 0.0_f64;
    for a in 0..k {
        let (mut hi_mid, mut lo_mid) = (v[a], v[a]);
        for c in (a + 1)..k {
            if !(b[c] - b[a + 1] < delta) {
                break;
            }
            let (lo, hi) = if v[a] <= v[c] { (v[a], v[c]) } else { (v[c], v[a]) };
            best = best.max(hi_mid - hi).max(lo - lo_mid);
            hi_mid = hi_mid.max(v[c]);
            lo_mid = lo_mid.min(v[c]);
        }
    }
    Ok(best)
}

/// M1 distance between two univariate step functions.
pub fn d_m1_univariate(f: &StepFunction, g: &StepFunction, tol: f64) -> Result<MetricResult> {
    check_tol(tol)?;
    for h in [f, g] {
        if h.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: h.dim() });
        }
    }
    d_strong_m1(f, g, tol)
}

/// Product (weak M1) metric: the largest coordinatewise M1 distance.
pub fn d_weak_m1(f: &StepFunction, g: &StepFunction, tol: f64) -> Result<MetricResult> {
    check_tol(tol)?;
    same_dim(f, g)?;
    let mut out = MetricResult::exact(0.0);
    for k in 0..f.dim() {
        let r = d_strong_m1(&f.coordinate(k)?, &g.coordinate(k)?, tol)?;
        out.value = out.value.max(r.value);
        out.tolerance = out.tolerance.max(r.tolerance);
        if r.method == Method::DpBinarySearch {
            out.method = Method::DpBinarySearch;
        }
    }
    Ok(out)
}

/// Standard (strong) M1 distance, with jumps filled by segments in `R^d`.
pub fn d_strong_m1(f: &StepFunction, g: &StepFunction, tol: f64) -> Result<MetricResult> {
    check_tol(tol)?;
    same_dim(f, g)?;
    if f == g {
        return Ok(MetricResult::exact(0.0));
    }
    if f.is_constant() && g.is_constant() {
        let d = f
            .plateau(0)
            .iter()
            .zip(g.plateau(0))
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        return Ok(MetricResult::exact(d));
    }
    let a = f.completed_graph(GraphMode::Strong)?;
    let b = g.completed_graph(GraphMode::Strong)?;
    Ok(frechet_distance(&a, &b, tol))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("tolerance must be positive, got {tol}")))
    }
}

fn same_dim(f: &StepFunction, g: &StepFunction) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: g.dim() });
    }
    Ok(())
}

/// Vertices as `[t, x_1, .., x_d]` rows, flattened.
struct Curve {
    width: usize,
    coords: Vec<f64>,
}

impl Curve {
    fn from_chain(c: &GraphChain) -> Self {
        let width = c.dim() + 1;
        let mut coords = Vec::with_capacity(c.len() * width);
        for (t, x) in c.vertices() {
            coords.push(t);
            coords.extend_from_slice(x);
        }
        Curve { width, coords }
    }

    fn len(&self) -> usize {
        self.coords.len() / self.width
    }

    fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.width..(i + 1) * self.width]
    }
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

fn cmp_curves(a: &Curve, b: &Curve) -> Ordering {
    a.coords
        .len()
        .cmp(&b.coords.len())
        .then_with(|| {
            a.coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Continuous Fréchet distance between two graph chains under the
/// `max(|Δt|, ||Δx||_∞)` ground metric, bracketed to within `tol`.
///
/// Arguments are put in a canonical order first, so swapping them gives a
/// bit-identical result.
pub fn frechet_distance(a: &GraphChain, b: &GraphChain, tol: f64) -> MetricResult {
    let (p, q) = (Curve::from_chain(a), Curve::from_chain(b));
    let (p, q) = if cmp_curves(&p, &q) == Ordering::Greater { (q, p) } else { (p, q) };

    let mut lo = linf(p.vertex(0), q.vertex(0)).max(linf(p.vertex(p.len() - 1), q.vertex(q.len() - 1)));
    let mut hi = 0.0_f64;
    for i in 0..p.len() {
        for j in 0..q.len() {
            hi = hi.max(linf(p.vertex(i), q.vertex(j)));
        }
    }
    if hi <= lo || reachable(&p, &q, lo) {
        return MetricResult::exact(lo);
    }
    while !reachable(&p, &q, hi) {
        hi = hi * 2.0 + f64::EPSILON;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if reachable(&p, &q, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    MetricResult { value: hi, tolerance: hi - lo, method: Method::DpBinarySearch }
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    const EMPTY: Interval = Interval { lo: 1.0, hi: 0.0 };

    fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    fn from(&self, lower: f64) -> Interval {
        Interval { lo: self.lo.max(lower), hi: self.hi }
    }
}

/// Parameters `s ∈ [0,1]` on segment `a→b` with `||p - (a + s(b-a))||_∞ ≤ eps`.
fn free_interval(p: &[f64], a: &[f64], b: &[f64], eps: f64) -> Interval {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for k in 0..p.len() {
        let off = p[k] - a[k];
        let slope = b[k] - a[k];
        if slope == 0.0 {
            if off.abs() > eps {
                return Interval::EMPTY;
            }
            continue;
        }
        let (mut s1, mut s2) = ((off - eps) / slope, (off + eps) / slope);
        if slope < 0.0 {
            std::mem::swap(&mut s1, &mut s2);
        }
        lo = lo.max(s1);
        hi = hi.min(s2);
        if lo > hi {
            return Interval::EMPTY;
        }
    }
    Interval { lo, hi }
}

/// Alt–Godau decision: is there a monotone coupled traversal with leash `eps`?
fn reachable(p: &Curve, q: &Curve, eps: f64) -> bool {
    let (np, nq) = (p.len(), q.len());
    if linf(p.vertex(0), q.vertex(0)) > eps || linf(p.vertex(np - 1), q.vertex(nq - 1)) > eps {
        return false;
    }
    // left[j]: reachable part of Q-segment j at the current P-vertex.
    let mut left = vec![Interval::EMPTY; nq - 1];
    let mut open = true;
    for j in 0..nq - 1 {
        let free = free_interval(p.vertex(0), q.vertex(j), q.vertex(j + 1), eps);
        if open && !free.is_empty() && free.lo == 0.0 {
            left[j] = free;
            open = free.hi == 1.0;
        } else {
            open = false;
        }
    }
    // bottom edge of the first cell in each P-column, fed along Q-vertex 0.
    let mut bottom_open = true;
    let mut next_left = vec![Interval::EMPTY; nq - 1];
    let mut last_bottom = Interval::EMPTY;
    for i in 0..np - 1 {
        let free = free_interval(q.vertex(0), p.vertex(i), p.vertex(i + 1), eps);
        let mut bottom = if bottom_open && !free.is_empty() && free.lo == 0.0 {
            bottom_open = free.hi == 1.0;
            free
        } else {
            bottom_open = false;
            Interval::EMPTY
        };
        for j in 0..nq - 1 {
            let l = left[j];
            let right_free = free_interval(p.vertex(i + 1), q.vertex(j), q.vertex(j + 1), eps);
            next_left[j] = if right_free.is_empty() {
                Interval::EMPTY
            } else if !bottom.is_empty() {
                right_free
            } else if !l.is_empty() {
                right_free.from(l.lo)
            } else {
                Interval::EMPTY
            };
            let top_free = free_interval(q.vertex(j + 1), p.vertex(i), p.vertex(i + 1), eps);
            bottom = if top_free.is_empty() {
                Interval::EMPTY
            } else if !l.is_empty() {
                top_free
            } else if !bottom.is_empty() {
                top_free.from(bottom.lo)
            } else {
                Interval::EMPTY
            };
        }
        last_bottom = bottom;
        std::mem::swap(&mut left, &mut next_left);
    }
    let end_left = left[nq - 2];
    (!end_left.is_empty() && end_left.hi == 1.0) || (!last_bottom.is_empty() && last_bottom.hi == 1.0)
}
