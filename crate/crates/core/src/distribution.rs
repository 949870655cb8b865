use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::WalkError;

/// Negative values down to this level are treated as floating dust and clamped to zero.
pub const NEGATIVE_DUST: f64 = 1e-10;

/// Total probability must lie within this distance of one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A finite-support probability distribution over lattice sites.
///
/// Only strictly positive probabilities are stored, so structural zeros (for
/// example odd sites after an even number of steps) never appear in the support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiteDistribution {
    probs: BTreeMap<i64, f64>,
}

impl SiteDistribution {
    /// All mass on `site`.
    pub fn delta(site: i64) -> Self {
        Self {
            probs: BTreeMap::from([(site, 1.0)]),
        }
    }

    /// Validates and builds a distribution. Values in `[-1e-10, 0]` are dropped.
    pub fn new<I>(probs: I) -> Result<Self, WalkError>
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        let mut map = BTreeMap::new();
        for (site, value) in probs {
            *map.entry(site).or_insert(0.0) += value;
        }
        for (&site, &value) in &map {
            if value < -NEGATIVE_DUST || value.is_nan() {
                return Err(WalkError::NegativeProbability { site, value });
            }
        }
        map.retain(|_, v| *v > 0.0);
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(WalkError::NotNormalized(total));
        }
        Ok(Self { probs: map })
    }

    pub fn prob(&self, site: i64) -> f64 {
        self.probs.get(&site).copied().unwrap_or(0.0)
    }

    /// `(site, probability)` pairs in ascending site order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        self.probs.keys().copied()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.probs.values().copied()
    }

    /// Number of sites with positive probability.
    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Mirror image `k -> -k`.
    pub fn reflected(&self) -> Self {
        Self {
            probs: self.probs.iter().map(|(&k, &v)| (-k, v)).collect(),
        }
    }

    /// `max_k |P(k) - Q(k)|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.probs
            .keys()
            .chain(other.probs.keys())
            .map(|&k| (self.prob(k) - other.prob(k)).abs())
            .fold(0.0, f64::max)
    }

    /// Total variation distance `½ Σ |P(k) - Q(k)|`.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let mut sites: Vec<i64> = self.probs.keys().chain(other.probs.keys()).copied().collect();
        sites.sort_unstable();
        sites.dedup();
        0.5 * sites.iter().map(|&k| (self.prob(k) - other.prob(k)).abs()).sum::<f64>()
    }
}
