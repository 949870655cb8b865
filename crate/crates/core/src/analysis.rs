//! Entropy, moments, Lorenz curves and majorization over site distributions.

use serde::Serialize;

use crate::distribution::SiteDistribution;
use crate::error::WalkError;

/// Tolerance for partial-sum comparisons and entropy descents.
pub const ANALYSIS_TOL: f64 = 1e-12;

/// Shannon entropy in nats. Zero probabilities contribute nothing.
pub fn shannon_entropy(dist: &SiteDistribution) -> f64 {
    dist.probabilities().filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
}

/// Shannon entropy of raw probabilities; values below `-1e-12` are refused.
pub fn entropy_of<I>(probs: I) -> Result<f64, WalkError>
where
    I: IntoIterator<Item = f64>,
{
    let mut s = 0.0;
    for (i, p) in probs.into_iter().enumerate() {
        if p < -ANALYSIS_TOL || p.is_nan() {
            return Err(WalkError::NegativeProbability {
                site: i as i64,
                value: p,
            });
        }
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

/// `<L^m> = Σ_k k^m P(k)`.
pub fn moment(dist: &SiteDistribution, order: u32) -> f64 {
    dist.iter().map(|(k, p)| (k as f64).powi(order as i32) * p).sum()
}

pub fn variance(dist: &SiteDistribution) -> f64 {
    let mean = moment(dist, 1);
    moment(dist, 2) - mean * mean
}

pub fn std_dev(dist: &SiteDistribution) -> f64 {
    variance(dist).max(0.0).sqrt()
}

fn sorted_desc(dist: &SiteDistribution, slots: usize) -> Vec<f64> {
    let mut v: Vec<f64> = dist.probabilities().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v.resize(slots.max(v.len()), 0.0);
    v
}

fn partial_sums(sorted: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(sorted.len() + 1);
    out.push(0.0);
    for p in sorted {
        acc += p;
        out.push(acc.min(1.0));
    }
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

/// Points `(n / N, γ_n)` of a Lorenz curve, `n = 0..=N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LorenzCurve {
    points: Vec<(f64, f64)>,
}

impl LorenzCurve {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Number of slots `N`.
    pub fn slots(&self) -> usize {
        self.points.len() - 1
    }

    pub fn gammas(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, g)| g)
    }
}

/// Lorenz curve over the distribution's own support.
pub fn lorenz_curve(dist: &SiteDistribution) -> LorenzCurve {
    lorenz_curve_padded(dist, dist.support_len())
}

/// Lorenz curve after padding with zeros to `slots` entries (never fewer than the support).
pub fn lorenz_curve_padded(dist: &SiteDistribution, slots: usize) -> LorenzCurve {
    let sorted = sorted_desc(dist, slots);
    let n = sorted.len() as f64;
    let points = partial_sums(&sorted)
        .into_iter()
        .enumerate()
        .map(|(i, g)| (i as f64 / n, g))
        .collect();
    LorenzCurve { points }
}

/// Outcome of comparing two distributions under majorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MajorizationVerdict {
    Equal,
    FirstMajorizes,
    SecondMajorizes,
    /// Lorenz curves cross; `crossings` are the partial-sum indices `n` at
    /// which the sign of `γ_n(p) - γ_n(q)` flips.
    Incomparable {
        crossings: Vec<usize>,
    },
}

impl MajorizationVerdict {
    pub fn crossings(&self) -> &[usize] {
        match self {
            MajorizationVerdict::Incomparable { crossings } => crossings,
            _ => &[],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MajorizationVerdict::Equal => "Equal",
            MajorizationVerdict::FirstMajorizes => "FirstMajorizes",
            MajorizationVerdict::SecondMajorizes => "SecondMajorizes",
            MajorizationVerdict::Incomparable { .. } => "Incomparable",
        }
    }

    /// `p ≻ q` holds (including equality).
    pub fn first_dominates(&self) -> bool {
        matches!(self, MajorizationVerdict::Equal | MajorizationVerdict::FirstMajorizes)
    }
}

/// Compares sorted partial sums of `p` and `q`, zero-padded to a common length.
pub fn compare_majorization(p: &SiteDistribution, q: &SiteDistribution) -> MajorizationVerdict {
    let slots = p.support_len().max(q.support_len());
    let gp = partial_sums(&sorted_desc(p, slots));
    let gq = partial_sums(&sorted_desc(q, slots));

    let mut above = false;
    let mut below = false;
    let mut crossings = Vec::new();
    let mut last_sign = 0i8;
    for (n, (a, b)) in gp.iter().zip(&gq).enumerate().skip(1) {
        let diff = a - b;
        let sign = if diff > ANALYSIS_TOL {
            1
        } else if diff < -ANALYSIS_TOL {
            -1
        } else {
            0
        };
        if sign == 0 {
            continue;
        }
        above |= sign > 0;
        below |= sign < 0;
        if last_sign != 0 && sign != last_sign {
            crossings.push(n);
        }
        last_sign = sign;
    }
    match (above, below) {
        (false, false) => MajorizationVerdict::Equal,
        (true, false) => MajorizationVerdict::FirstMajorizes,
        (false, true) => MajorizationVerdict::SecondMajorizes,
        (true, true) => MajorizationVerdict::Incomparable { crossings },
    }
}

/// Largest amount by which `q`'s Lorenz curve rises above `p`'s; zero exactly
/// when `p` majorizes `q`.
pub fn majorization_deficit(p: &SiteDistribution, q: &SiteDistribution) -> f64 {
    let slots = p.support_len().max(q.support_len());
    let gp = partial_sums(&sorted_desc(p, slots));
    let gq = partial_sums(&sorted_desc(q, slots));
    gp.iter().zip(&gq).map(|(a, b)| b - a).fold(0.0, f64::max)
}

/// A maximal run `start, start + stride, ...` of steps with strictly increasing entropy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArithmeticRun {
    pub start: usize,
    pub stride: usize,
    pub len: usize,
}

/// Summary statistics of an entropy time series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropySeries {
    pub first_step: usize,
    pub entropies: Vec<f64>,
    /// Least-squares slope of entropy against step.
    pub slope: f64,
    /// `(S_last - S_first) / (len - 1)`.
    pub mean_increase: f64,
    /// Steps `N` with `S(N+1) < S(N) - 1e-12`.
    pub descents: Vec<usize>,
    /// For each stride, the longest increasing arithmetic run of length at least three.
    pub increasing_runs: Vec<ArithmeticRun>,
}

impl EntropySeries {
    pub fn entropy_at(&self, step: usize) -> Option<f64> {
        step.checked_sub(self.first_step)
            .and_then(|i| self.entropies.get(i).copied())
    }
}

/// Entropy summary of a trajectory whose first element is step `first_step`.
pub fn entropy_series(trajectory: &[SiteDistribution], first_step: usize) -> Result<EntropySeries, WalkError> {
    if trajectory.is_empty() {
        return Err(WalkError::EmptyTrajectory);
    }
    let entropies: Vec<f64> = trajectory.iter().map(shannon_entropy).collect();
    let len = entropies.len();

    let slope = least_squares_slope(&entropies);
    let mean_increase = if len > 1 {
        (entropies[len - 1] - entropies[0]) / (len - 1) as f64
    } else {
        0.0
    };
    let descents = entropies
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] < w[0] - ANALYSIS_TOL)
        .map(|(i, _)| first_step + i)
        .collect();

    let mut increasing_runs = Vec::new();
    for stride in 1..len {
        let mut best: Option<ArithmeticRun> = None;
        for offset in 0..stride {
            let idx: Vec<usize> = (offset..len).step_by(stride).collect();
            let mut run_start = 0;
            for j in 1..=idx.len() {
                let extends = j < idx.len() && entropies[idx[j]] > entropies[idx[j - 1]];
                if !extends {
                    let run_len = j - run_start;
                    if run_len >= 3 && best.as_ref().is_none_or(|b| run_len > b.len) {
                        best = Some(ArithmeticRun {
                            start: first_step + idx[run_start],
                            stride,
                            len: run_len,
                        });
                    }
                    run_start = j;
                }
            }
        }
        increasing_runs.extend(best);
    }

    Ok(EntropySeries {
        first_step,
        entropies,
        slope,
        mean_increase,
        descents,
        increasing_runs,
    })
}

fn least_squares_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    sxy / sxx
}
