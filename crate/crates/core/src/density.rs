//! Walker density matrices and the completely positive maps that act on them.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::distribution::{SiteDistribution, NEGATIVE_DUST};
use crate::error::WalkError;
use crate::laurent::{LaurentOperator, TRIM_EPS};
use crate::walk::{completeness_residuals, kraus_delayed, WalkConfig};

/// Kraus sets whose completeness residual exceeds this are refused.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Hermiticity and trace tolerance for explicitly constructed density matrices.
pub const DENSITY_TOL: f64 = 1e-12;

/// Sparse band storage of `<i|ρ|j>` over lattice sites.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: BTreeMap<(i64, i64), Complex64>,
}

impl DensityMatrix {
    /// `|site><site|`.
    pub fn pure_site(site: i64) -> Self {
        Self {
            entries: BTreeMap::from([((site, site), Complex64::new(1.0, 0.0))]),
        }
    }

    /// Builds a density matrix from `((i, j), <i|ρ|j>)` entries, checking
    /// Hermiticity, unit trace and a nonnegative diagonal.
    pub fn from_entries<I>(entries: I) -> Result<Self, WalkError>
    where
        I: IntoIterator<Item = ((i64, i64), Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (ij, v) in entries {
            *map.entry(ij).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        let rho = Self { entries: map };
        let herm = rho.hermiticity_residual();
        if herm > DENSITY_TOL {
            return Err(WalkError::NotHermitian(herm));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL {
            return Err(WalkError::NotNormalized(tr.re));
        }
        for (&(i, j), v) in &rho.entries {
            if i == j && v.re < -DENSITY_TOL {
                return Err(WalkError::NegativeProbability { site: i, value: v.re });
            }
        }
        Ok(rho)
    }

    pub fn get(&self, i: i64, j: i64) -> Complex64 {
        self.entries.get(&(i, j)).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        self.entries.iter().map(|(&ij, &v)| (ij, v))
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.iter().filter(|((i, j), _)| i == j).map(|(_, v)| *v).sum()
    }

    /// `max |ρ_ij - conj(ρ_ji)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|(&(i, j), v)| (v - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest distance from the main diagonal among stored entries.
    pub fn bandwidth(&self) -> i64 {
        self.entries.keys().map(|(i, j)| (i - j).abs()).max().unwrap_or(0)
    }

    /// Occupation probabilities `P(k) = Re <k|ρ|k>`.
    ///
    /// Entries down to `-1e-10` are clamped to zero and the result renormalized
    /// when the total is within `1e-10` of one.
    pub fn diagonal(&self) -> Result<SiteDistribution, WalkError> {
        let mut diag = Vec::new();
        for (&(i, j), v) in &self.entries {
            if i != j {
                continue;
            }
            if v.re < -NEGATIVE_DUST {
                return Err(WalkError::NegativeProbability { site: i, value: v.re });
            }
            diag.push((i, v.re.max(0.0)));
        }
        let total: f64 = diag.iter().map(|(_, v)| v).sum();
        if (total - 1.0).abs() >= NEGATIVE_DUST {
            return Err(WalkError::NotNormalized(total));
        }
        SiteDistribution::new(diag.into_iter().map(|(k, v)| (k, v / total)))
    }
}

/// `ρ -> Σ_k K_k ρ K_k†` for translation-invariant Kraus operators.
pub fn cp_apply(rho: &DensityMatrix, kraus: &[LaurentOperator]) -> Result<DensityMatrix, WalkError> {
    let refs: Vec<&LaurentOperator> = kraus.iter().collect();
    let (left, _) = completeness_residuals(&refs);
    if left > COMPLETENESS_TOL {
        return Err(WalkError::CompletenessViolation(left));
    }
    Ok(apply_unchecked(rho, kraus))
}

fn apply_unchecked(rho: &DensityMatrix, kraus: &[LaurentOperator]) -> DensityMatrix {
    let mut out: BTreeMap<(i64, i64), Complex64> = BTreeMap::new();
    for k in kraus {
        let terms: Vec<(i64, Complex64)> = k.iter().collect();
        for (&(a, b), v) in &rho.entries {
            for &(da, ka) in &terms {
                let left = ka * v;
                for &(db, kb) in &terms {
                    *out.entry((a + da, b + db)).or_insert(Complex64::new(0.0, 0.0)) += left * kb.conj();
                }
            }
        }
    }
    out.retain(|_, v| v.norm() >= TRIM_EPS);
    DensityMatrix { entries: out }
}

/// Trajectory of the walk that traces the coin every `m` steps:
/// `ρ(0) = |0><0|`, `ρ(j+1) = Σ_k B_k ρ(j) B_k†` with `B_k = <k|V^m|φ>`.
pub fn cp_walk(config: &WalkConfig, m: usize, iterations: usize) -> Result<Vec<DensityMatrix>, WalkError> {
    let kraus = kraus_delayed(config, m)?;
    let refs: Vec<&LaurentOperator> = kraus.iter().collect();
    let (left, _) = completeness_residuals(&refs);
    if left > COMPLETENESS_TOL {
        return Err(WalkError::CompletenessViolation(left));
    }
    let mut out = Vec::with_capacity(iterations + 1);
    out.push(DensityMatrix::pure_site(0));
    for j in 0..iterations {
        let next = apply_unchecked(&out[j], &kraus);
        out.push(next);
    }
    Ok(out)
}
