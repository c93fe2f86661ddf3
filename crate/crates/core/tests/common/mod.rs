//! Brute-force oracles shared by the integration tests. Nothing in here calls
//! into the metric kernel; chains are rebuilt from raw plateau data.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Raw step function: breakpoints (first = 0) and one value row per breakpoint.
#[derive(Clone, Debug)]
pub struct RawStep {
    pub breakpoints: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl RawStep {
    pub fn new(breakpoints: Vec<f64>, values: Vec<Vec<f64>>) -> Self {
        Self { breakpoints, values }
    }

    pub fn univariate(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        Self { breakpoints, values: values.into_iter().map(|v| vec![v]).collect() }
    }

    pub fn at(&self, t: f64) -> &[f64] {
        let i = self.breakpoints.iter().rposition(|&b| b <= t).unwrap();
        &self.values[i]
    }

    /// Completed-graph vertices: straight jump segments, start `(0, x(0))`.
    pub fn chain(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        let mut push = |t: f64, x: &[f64]| {
            let mut v = vec![t];
            v.extend_from_slice(x);
            if out.last() != Some(&v) {
                out.push(v);
            }
        };
        push(0.0, &self.values[0]);
        for i in 1..self.breakpoints.len() {
            push(self.breakpoints[i], &self.values[i - 1]);
            push(self.breakpoints[i], &self.values[i]);
        }
        push(1.0, self.values.last().unwrap());
        out
    }

    pub fn coordinate(&self, k: usize) -> RawStep {
        RawStep::univariate(self.breakpoints.clone(), self.values.iter().map(|v| v[k]).collect())
    }
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Points along the chain with consecutive L∞ gaps at most `h`.
pub fn resample(chain: &[Vec<f64>], h: f64) -> Vec<Vec<f64>> {
    let mut out = vec![chain[0].clone()];
    for w in chain.windows(2) {
        let len = linf(&w[0], &w[1]);
        let steps = ((len / h).ceil() as usize).max(1);
        for s in 1..=steps {
            let lam = s as f64 / steps as f64;
            out.push(w[0].iter().zip(&w[1]).map(|(a, b)| a + lam * (b - a)).collect());
        }
    }
    out
}

/// Discrete Fréchet distance (coupled monotone walks through the samples)
/// under the L∞ ground metric on (time, space).
pub fn discrete_frechet(p: &[Vec<f64>], q: &[Vec<f64>]) -> f64 {
    let m = q.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![f64::INFINITY; m];
    for (i, pi) in p.iter().enumerate() {
        for j in 0..m {
            let d = linf(pi, &q[j]);
            let best = if i == 0 && j == 0 {
                0.0
            } else {
                let mut b = f64::INFINITY;
                if i > 0 {
                    b = b.min(prev[j]);
                }
                if j > 0 {
                    b = b.min(cur[j - 1]);
                }
                if i > 0 && j > 0 {
                    b = b.min(prev[j - 1]);
                }
                b
            };
            cur[j] = d.max(best);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

/// Brute-force M1 distance between completed graphs sampled every `h`.
/// Overestimates the continuous value by at most `h`.
pub fn brute_m1(f: &RawStep, g: &RawStep, h: f64) -> f64 {
    discrete_frechet(&resample(&f.chain(), h), &resample(&g.chain(), h))
}

/// Brute-force weak M1 distance: max over coordinates.
pub fn brute_weak_m1(f: &RawStep, g: &RawStep, h: f64) -> f64 {
    (0..f.values[0].len())
        .map(|k| brute_m1(&f.coordinate(k), &g.coordinate(k), h))
        .fold(0.0, f64::max)
}

/// Distance from `x2` to the segment between `x1` and `x3`.
pub fn m1_component(x1: f64, x2: f64, x3: f64) -> f64 {
    let (lo, hi) = if x1 <= x3 { (x1, x3) } else { (x3, x1) };
    if x2 < lo {
        lo - x2
    } else if x2 > hi {
        x2 - hi
    } else {
        0.0
    }
}

/// M1 oscillation by enumerating triples on a grid of mesh `1/steps`.
/// Grid windows satisfy `t2 - t1 <= delta` with slack for rounding.
pub fn brute_oscillation(breakpoints: &[f64], values: &[f64], delta: f64, steps: usize) -> f64 {
    let at = |t: f64| values[breakpoints.iter().rposition(|&b| b <= t).unwrap()];
    let grid: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| at(t)).collect();
    let span = (delta * steps as f64 + 1e-9).floor() as usize;
    let mut best = 0.0_f64;
    for i in 0..grid.len() {
        let end = (i + span).min(grid.len() - 1);
        for k in i..=end {
            for j in i..=k {
                best = best.max(m1_component(vals[i], vals[j], vals[k]));
            }
        }
    }
    best
}

/// Random univariate step function with at most `max_jumps` jumps, values in
/// `[0, vmax]`, breakpoints on a 1/1000 lattice.
pub fn random_univariate(rng: &mut ChaCha8Rng, max_jumps: usize, vmax: f64) -> RawStep {
    random_step(rng, 1, max_jumps, vmax)
}

pub fn random_step(rng: &mut ChaCha8Rng, dim: usize, max_jumps: usize, vmax: f64) -> RawStep {
    let jumps = rng.random_range(0..=max_jumps);
    let mut ts: Vec<f64> = (0..jumps).map(|_| rng.random_range(1..=1000) as f64 / 1000.0).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut bps = vec![0.0];
    bps.extend(ts);
    let mut values: Vec<Vec<f64>> = Vec::new();
    for _ in 0..bps.len() {
        let row: Vec<f64> = (0..dim).map(|_| (rng.random::<f64>() * vmax * 100.0).round() / 100.0).collect();
        values.push(row);
    }
    // force adjacent plateaus to differ
    for i in 1..values.len() {
        if values[i] == values[i - 1] {
            values[i][0] += 0.5;
        }
    }
    RawStep::new(bps, values)
}
