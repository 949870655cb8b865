//! Doubly stochastic kernels connecting successive walk distributions.
//!
//! Every kernel here is translation invariant, so it is stored like a
//! [`LaurentOperator`] with real coefficients. Row sums and column sums of
//! the realization both equal the coefficient sum.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::distribution::SiteDistribution;
use crate::error::WalkError;
use crate::laurent::{LaurentOperator, TRIM_EPS};
use crate::walk::{kraus_delayed, kraus_pair, KrausPair, WalkConfig};

/// Tolerance for kernel flags and for discarding imaginary parts.
pub const KERNEL_TOL: f64 = 1e-12;

/// Tolerance for the first-step compatibility condition of the pseudo-memory decomposition.
pub const COMPATIBILITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// Nonnegative coefficients summing to one.
    Stochastic,
    /// Coefficients summing to zero.
    NullSum,
    /// No constraint.
    Signed,
}

/// Real translation-invariant kernel, `degree -> coefficient`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealKernel {
    coeffs: BTreeMap<i64, f64>,
    kind: KernelKind,
}

impl RealKernel {
    /// Builds a kernel and checks the property its `kind` promises.
    pub fn new<I>(coeffs: I, kind: KernelKind) -> Result<Self, WalkError>
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        let kernel = Self::signed(coeffs);
        kernel.with_kind(kind)
    }

    /// A kernel with no declared property.
    pub fn signed<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        let mut map = BTreeMap::new();
        for (d, v) in coeffs {
            *map.entry(d).or_insert(0.0) += v;
        }
        Self::trimmed(map, KernelKind::Signed)
    }

    pub fn identity() -> Self {
        Self {
            coeffs: BTreeMap::from([(0, 1.0)]),
            kind: KernelKind::Stochastic,
        }
    }

    pub fn empty() -> Self {
        Self {
            coeffs: BTreeMap::new(),
            kind: KernelKind::NullSum,
        }
    }

    /// Real part of a lattice operator, refusing imaginary residue above `1e-12`.
    pub fn from_operator(op: &LaurentOperator, kind: KernelKind) -> Result<Self, WalkError> {
        let imag = op.iter().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
        if imag > KERNEL_TOL {
            return Err(WalkError::ImaginaryResidue(imag));
        }
        Self::new(op.iter().map(|(d, c)| (d, c.re)), kind)
    }

    /// The distribution viewed as the kernel column acting on `δ_0`.
    pub fn from_distribution(dist: &SiteDistribution) -> Self {
        Self {
            coeffs: dist.iter().collect(),
            kind: KernelKind::Stochastic,
        }
    }

    fn trimmed(mut coeffs: BTreeMap<i64, f64>, kind: KernelKind) -> Self {
        coeffs.retain(|_, v| v.abs() >= TRIM_EPS);
        Self { coeffs, kind }
    }

    /// Re-labels the kernel after checking the property `kind` promises.
    pub fn with_kind(mut self, kind: KernelKind) -> Result<Self, WalkError> {
        let sum = self.sum();
        match kind {
            KernelKind::Stochastic => {
                let min = self.min_coeff();
                if min < -KERNEL_TOL || (sum - 1.0).abs() > KERNEL_TOL {
                    return Err(WalkError::NotStochastic { min, sum });
                }
            }
            KernelKind::NullSum => {
                if sum.abs() > KERNEL_TOL {
                    return Err(WalkError::NotNormalized(sum));
                }
            }
            KernelKind::Signed => {}
        }
        self.kind = kind;
        Ok(self)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn coeff(&self, degree: i64) -> f64 {
        self.coeffs.get(&degree).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.coeffs.iter().map(|(&d, &v)| (d, v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient sum, equal to every row and column sum of the realization.
    pub fn sum(&self) -> f64 {
        self.coeffs.values().sum()
    }

    /// Smallest coefficient, zero for the empty kernel.
    pub fn min_coeff(&self) -> f64 {
        self.coeffs.values().copied().fold(0.0, f64::min)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .map(|&d| (self.coeff(d) - other.coeff(d)).abs())
            .fold(0.0, f64::max)
    }

    /// `self^n` by repeated convolution.
    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_operator(&self) -> LaurentOperator {
        LaurentOperator::from_real(self.iter())
    }

    /// Applies a stochastic kernel to a distribution.
    pub fn apply(&self, dist: &SiteDistribution) -> Result<SiteDistribution, WalkError> {
        self.require_stochastic()?;
        let mut out: BTreeMap<i64, f64> = BTreeMap::new();
        for (d, w) in &self.coeffs {
            for (k, p) in dist.iter() {
                *out.entry(k + d).or_insert(0.0) += w * p;
            }
        }
        SiteDistribution::new(out)
    }

    /// Reads the kernel column as a distribution (valid when it is one).
    pub fn to_distribution(&self) -> Result<SiteDistribution, WalkError> {
        SiteDistribution::new(self.iter())
    }

    fn require_stochastic(&self) -> Result<(), WalkError> {
        if self.kind != KernelKind::Stochastic {
            return Err(WalkError::NotStochastic {
                min: self.min_coeff(),
                sum: self.sum(),
            });
        }
        Ok(())
    }
}

fn combine_kinds(a: KernelKind, b: KernelKind) -> KernelKind {
    use KernelKind::*;
    match (a, b) {
        (Stochastic, Stochastic) => Stochastic,
        (NullSum, _) | (_, NullSum) => NullSum,
        _ => Signed,
    }
}

impl Mul for &RealKernel {
    type Output = RealKernel;

    /// Convolution. Products of stochastic kernels stay stochastic and a
    /// null-sum factor makes the product null-sum.
    fn mul(self, rhs: &RealKernel) -> RealKernel {
        let mut map = BTreeMap::new();
        for (da, a) in &self.coeffs {
            for (db, b) in &rhs.coeffs {
                *map.entry(da + db).or_insert(0.0) += a * b;
            }
        }
        RealKernel::trimmed(map, combine_kinds(self.kind, rhs.kind))
    }
}

impl Add for &RealKernel {
    type Output = RealKernel;

    fn add(self, rhs: &RealKernel) -> RealKernel {
        let mut map = self.coeffs.clone();
        for (d, v) in &rhs.coeffs {
            *map.entry(*d).or_insert(0.0) += v;
        }
        let kind = match (self.kind, rhs.kind) {
            (KernelKind::NullSum, KernelKind::NullSum) => KernelKind::NullSum,
            _ => KernelKind::Signed,
        };
        RealKernel::trimmed(map, kind)
    }
}

impl Sub for &RealKernel {
    type Output = RealKernel;

    fn sub(self, rhs: &RealKernel) -> RealKernel {
        let mut coeffs = self.coeffs.clone();
        for (&d, &v) in &rhs.coeffs {
            *coeffs.entry(d).or_insert(0.0) -= v;
        }
        RealKernel::signed(coeffs)
    }
}

/// Which bias convention the classical kernel uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalConvention {
    /// `(1 - p) E+ + p E-`.
    Literal,
    /// `p E+ + (1 - p) E-`.
    Swapped,
}

/// `Δ_C = (1 - p) E+ + p E-`.
pub fn classical_kernel(p: f64) -> Result<RealKernel, WalkError> {
    classical_kernel_with(p, ClassicalConvention::Literal)
}

pub fn classical_kernel_with(p: f64, convention: ClassicalConvention) -> Result<RealKernel, WalkError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(WalkError::BiasOutOfRange(p));
    }
    let (right, left) = match convention {
        ClassicalConvention::Literal => (1.0 - p, p),
        ClassicalConvention::Swapped => (p, 1.0 - p),
    };
    RealKernel::new([(1, right), (-1, left)], KernelKind::Stochastic)
}

fn hadamard_square_sum(ops: &[&LaurentOperator]) -> Result<RealKernel, WalkError> {
    let sum = ops
        .iter()
        .fold(LaurentOperator::zero(), |acc, a| &acc + &a.hadamard_conj(a));
    RealKernel::from_operator(&sum, KernelKind::Stochastic)
}

/// `Δ_Q^(n) = A_0 ∘ conj(A_0) + A_1 ∘ conj(A_1)` for the `n`-step Kraus pair.
pub fn quantum_kernel(config: &WalkConfig, n: usize) -> RealKernel {
    kernel_of_pair(&kraus_pair(config, n))
}

pub(crate) fn kernel_of_pair(pair: &KrausPair) -> RealKernel {
    hadamard_square_sum(&pair.as_slice()).expect("Hadamard squares of a complete Kraus pair form a stochastic kernel")
}

fn mixing_formula(p: f64, pair: &KrausPair) -> Result<RealKernel, WalkError> {
    let cross = &pair.a0.hadamard_conj(&pair.a1) + &pair.a1.hadamard_conj(&pair.a0);
    let sum =
        &cross.scale((p * (1.0 - p)).sqrt().into()) + &pair.a0.hadamard_conj(&pair.a0).scale((2.0 * p - 1.0).into());
    RealKernel::from_operator(&sum, KernelKind::Signed)
}

/// `M^(i) = √(p(1-p)) (A_0 ∘ conj(A_1) + A_1 ∘ conj(A_0)) + (2p - 1) A_0 ∘ conj(A_0)`,
/// with the convention `M^(0) = 0`.
pub fn mixing_matrix(config: &WalkConfig, i: usize) -> Result<RealKernel, WalkError> {
    let p = config.require_bias()?;
    if i == 0 {
        return Ok(RealKernel::signed([]));
    }
    mixing_formula(p, &kraus_pair(config, i))
}

fn step_difference() -> RealKernel {
    RealKernel::new([(1, 1.0), (-1, -1.0)], KernelKind::NullSum).expect("E+ - E- has null sum")
}

/// `ω^(i) = (E+ - E-) M^(i-1)` for `i >= 2`, and `ω^(1) = 0`.
pub fn reshuffling_matrix(config: &WalkConfig, i: usize) -> Result<RealKernel, WalkError> {
    if i == 0 {
        return Err(WalkError::InvalidReshufflingIndex(i));
    }
    config.require_bias()?;
    if i == 1 {
        return Ok(RealKernel::empty());
    }
    let m = mixing_matrix(config, i - 1)?;
    Ok(&step_difference() * &m)
}

/// Worst coefficient residual of
/// `Δ_Q^(n+1) = Δ_C Δ_Q^(n) + (E+ - E-) M^(n)`.
pub fn recurrence_residual(config: &WalkConfig, n: usize) -> Result<f64, WalkError> {
    let p = config.require_bias()?;
    let lhs = quantum_kernel(config, n + 1);
    let rhs =
        &(&classical_kernel(p)? * &quantum_kernel(config, n)) + &(&step_difference() * &mixing_matrix(config, n)?);
    Ok(lhs.max_abs_diff(&rhs))
}

/// The kernel that advances the walk by one trace period of `m` steps.
pub fn period_kernel(config: &WalkConfig, m: usize) -> Result<RealKernel, WalkError> {
    let kraus = kraus_delayed(config, m)?;
    let refs: Vec<&LaurentOperator> = kraus.iter().collect();
    hadamard_square_sum(&refs)
}

/// `Δ_Q = B_0 ∘ conj(B_0) + B_1 ∘ conj(B_1)` for tracing every second step.
pub fn delayed_kernel(config: &WalkConfig) -> Result<RealKernel, WalkError> {
    period_kernel(config, 2)
}

/// `Φ = Δ_Q - Δ_C` for the two-step tracing scheme.
pub fn phi_matrix(config: &WalkConfig) -> Result<RealKernel, WalkError> {
    let p = config.require_bias()?;
    (&delayed_kernel(config)? - &classical_kernel(p)?).with_kind(KernelKind::NullSum)
}

/// `Φ` written out coefficient by coefficient from the closed-form `B_0`, `B_1`.
pub fn phi_matrix_explicit(config: &WalkConfig) -> Result<RealKernel, WalkError> {
    let p = config.require_bias()?;
    let (c, d) = (config.c(), config.d());
    let s = (p * (1.0 - p)).sqrt();
    let q = 1.0 - p;
    RealKernel::new(
        [
            (2, (c * p + d * s).norm_sqr()),
            (-2, (c * s - d * p).norm_sqr()),
            (0, (c * q - d * s).norm_sqr() + (d * q + c * s).norm_sqr()),
            (1, -q),
            (-1, -p),
        ],
        KernelKind::NullSum,
    )
}

/// Repeatedly applies a stochastic kernel, returning `n + 1` distributions.
pub fn kernel_walk(
    kernel: &RealKernel,
    n: usize,
    start: &SiteDistribution,
) -> Result<Vec<SiteDistribution>, WalkError> {
    kernel.require_stochastic()?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(start.clone());
    for j in 0..n {
        let next = kernel.apply(&out[j])?;
        out.push(next);
    }
    Ok(out)
}

/// `Σ_k C(n, k) Φ^(n-k) Δ_C^k δ_0`, evaluated term by term.
pub fn binomial_solution(config: &WalkConfig, n: usize) -> Result<SiteDistribution, WalkError> {
    let p = config.require_bias()?;
    let dc = classical_kernel(p)?;
    let phi = phi_matrix(config)?;
    let phi_powers: Vec<RealKernel> = std::iter::successors(Some(RealKernel::identity()), |prev| Some(prev * &phi))
        .take(n + 1)
        .collect();
    let mut total = RealKernel::signed([]);
    let mut classical = RealKernel::identity();
    let mut binom = 1.0_f64;
    for k in 0..=n {
        let term = &phi_powers[n - k] * &classical;
        total = &total + &RealKernel::signed(term.iter().map(|(d, v)| (d, v * binom)));
        classical = &classical * &dc;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    total.to_distribution()
}

/// Checks `|c√p + d√(1-p)|² = 1 - p`, which makes the one-step quantum kernel
/// equal to the classical one.
pub fn first_step_compatibility(config: &WalkConfig) -> Result<(), WalkError> {
    let p = config.require_bias()?;
    let measured = config.right_step_probability();
    let expected = 1.0 - p;
    if (measured - expected).abs() > COMPATIBILITY_TOL {
        return Err(WalkError::IncompatibleFirstStep { measured, expected });
    }
    Ok(())
}

/// `P_C^(n) + Σ_{i=2..n} ω^(i) P_C^(n-i)` as a signed vector, with `P_C`
/// generated by the classical kernel in the given convention. No
/// compatibility check is made.
pub fn pseudo_memory_terms(
    config: &WalkConfig,
    n: usize,
    convention: ClassicalConvention,
) -> Result<RealKernel, WalkError> {
    let p = config.require_bias()?;
    let dc = classical_kernel_with(p, convention)?;
    let classical: Vec<RealKernel> = std::iter::successors(Some(RealKernel::identity()), |prev| Some(prev * &dc))
        .take(n + 1)
        .collect();
    let mut total = classical[n].clone();
    for i in 2..=n {
        total = &total + &(&reshuffling_matrix(config, i)? * &classical[n - i]);
    }
    Ok(total)
}

/// Reconstructs the global-trace distribution at step `n` from the first `n`
/// classical distributions and the reshuffling matrices.
pub fn pseudo_memory_reconstruct(config: &WalkConfig, n: usize) -> Result<SiteDistribution, WalkError> {
    first_step_compatibility(config)?;
    pseudo_memory_terms(config, n, ClassicalConvention::Literal)?.to_distribution()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn assert_kernel(k: &RealKernel, want: &[(i64, f64)]) {
        let want = RealKernel::signed(want.iter().copied());
        assert!(k.max_abs_diff(&want) < 1e-12, "{k:?} != {want:?}");
    }

    #[test]
    fn classical_cases() {
        assert_kernel(&classical_kernel(0.5).unwrap(), &[(1, 0.5), (-1, 0.5)]);
        assert_kernel(&classical_kernel(0.0).unwrap(), &[(1, 1.0)]);
        assert!(matches!(classical_kernel(-0.1), Err(WalkError::BiasOutOfRange(_))));
        let two = classical_kernel(0.5).unwrap().pow(2);
        assert_kernel(&two, &[(-2, 0.25), (0, 0.5), (2, 0.25)]);
    }

    #[test]
    fn quantum_kernel_cases() {
        let sym = WalkConfig::symmetric();
        assert_kernel(&quantum_kernel(&sym, 0), &[(0, 1.0)]);
        assert_kernel(&quantum_kernel(&sym, 1), &[(1, 0.5), (-1, 0.5)]);
        for p in [0.2, 0.5, 0.9] {
            let cfg = WalkConfig::symmetric_coin(p).unwrap();
            assert_kernel(&quantum_kernel(&cfg, 2), &[(2, p / 2.0), (0, 1.0 - p), (-2, p / 2.0)]);
        }
    }

    #[test]
    fn mixing_and_reshuffling_vanish_for_symmetric_walk() {
        let sym = WalkConfig::symmetric();
        for i in 0..=2 {
            assert!(mixing_matrix(&sym, i).unwrap().is_empty(), "M^({i})");
        }
        for i in 1..=3 {
            assert!(reshuffling_matrix(&sym, i).unwrap().is_empty(), "ω^({i})");
        }
        assert!(!reshuffling_matrix(&sym, 4).unwrap().is_empty());
        assert!(matches!(
            reshuffling_matrix(&sym, 0),
            Err(WalkError::InvalidReshufflingIndex(0))
        ));
    }

    #[test]
    fn mixing_at_one_step_vanishes_at_half_bias_for_any_coin() {
        let cfg = WalkConfig::biased(0.5, re(0.6), Complex64::new(0.0, 0.8)).unwrap();
        assert!(mixing_matrix(&cfg, 1).unwrap().is_empty());
    }

    #[test]
    fn phi_and_delayed_kernel() {
        let sym = WalkConfig::symmetric();
        let want_phi = [(2, 0.25), (0, 0.5), (-2, 0.25), (1, -0.5), (-1, -0.5)];
        assert_kernel(&phi_matrix(&sym).unwrap(), &want_phi);
        assert!(phi_matrix(&sym).unwrap().sum().abs() < 1e-12);
        let plain = WalkConfig::biased(0.5, re(1.0), re(0.0)).unwrap();
        assert_kernel(&phi_matrix(&plain).unwrap(), &want_phi);

        let dq = delayed_kernel(&sym).unwrap();
        assert_kernel(&dq, &[(2, 0.25), (0, 0.5), (-2, 0.25)]);
        assert_eq!(dq.kind(), KernelKind::Stochastic);
        let recombined = &classical_kernel(0.5).unwrap() + &phi_matrix(&sym).unwrap();
        assert!(recombined.max_abs_diff(&dq) < 1e-12);
    }

    #[test]
    fn kernel_walk_cases() {
        let dq = delayed_kernel(&WalkConfig::symmetric()).unwrap();
        let traj = kernel_walk(&dq, 2, &SiteDistribution::delta(0)).unwrap();
        let want = [(-4, 1.0 / 16.0), (-2, 0.25), (0, 0.375), (2, 0.25), (4, 1.0 / 16.0)];
        for (k, w) in want {
            assert!((traj[2].prob(k) - w).abs() < 1e-12);
        }

        let id = RealKernel::identity();
        let start = SiteDistribution::new([(0, 0.25), (3, 0.75)]).unwrap();
        for d in kernel_walk(&id, 5, &start).unwrap() {
            assert_eq!(d, start);
        }

        let traj = kernel_walk(&classical_kernel(0.5).unwrap(), 2, &SiteDistribution::delta(0)).unwrap();
        for (k, w) in [(-2, 0.25), (0, 0.5), (2, 0.25)] {
            assert!((traj[2].prob(k) - w).abs() < 1e-15);
        }

        let phi = phi_matrix(&WalkConfig::symmetric()).unwrap();
        assert!(matches!(
            kernel_walk(&phi, 1, &SiteDistribution::delta(0)),
            Err(WalkError::NotStochastic { .. })
        ));
    }

    #[test]
    fn binomial_solution_cases() {
        let sym = WalkConfig::symmetric();
        assert_eq!(binomial_solution(&sym, 0).unwrap(), SiteDistribution::delta(0));
        let dq = delayed_kernel(&sym).unwrap();
        assert!(
            binomial_solution(&sym, 1)
                .unwrap()
                .max_abs_diff(&dq.to_distribution().unwrap())
                < 1e-12
        );
        let traj = kernel_walk(&dq, 3, &SiteDistribution::delta(0)).unwrap();
        assert!(binomial_solution(&sym, 3).unwrap().max_abs_diff(&traj[3]) < 1e-10);
    }

    #[test]
    fn pseudo_memory_small_steps() {
        let sym = WalkConfig::symmetric();
        let p3 = pseudo_memory_reconstruct(&sym, 3).unwrap();
        for (k, w) in [(-3, 1.0), (-1, 3.0), (1, 3.0), (3, 1.0)] {
            assert!((p3.prob(k) - w / 8.0).abs() < 1e-12);
        }
        let p4 = pseudo_memory_reconstruct(&sym, 4).unwrap();
        for (k, w) in [(-4, 1.0), (-2, 6.0), (0, 2.0), (2, 6.0), (4, 1.0)] {
            assert!((p4.prob(k) - w / 16.0).abs() < 1e-12);
        }
        let p1 = pseudo_memory_reconstruct(&sym, 1).unwrap();
        assert!(p1.max_abs_diff(&classical_kernel(0.5).unwrap().to_distribution().unwrap()) < 1e-15);
    }

    #[test]
    fn pseudo_memory_rejects_incompatible_coin() {
        let cfg = WalkConfig::biased(0.25, re(1.0), re(0.0)).unwrap();
        assert!(matches!(
            pseudo_memory_reconstruct(&cfg, 3),
            Err(WalkError::IncompatibleFirstStep { .. })
        ));
    }

    #[test]
    fn general_unitary_coin_needs_bias_for_mixing() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let coin = crate::walk::Coin::Unitary([[re(h), Complex64::new(0.0, h)], [Complex64::new(0.0, h), re(h)]]);
        let cfg = WalkConfig::new(coin, re(1.0), re(0.0), crate::walk::TracingScheme::Global).unwrap();
        assert!(matches!(mixing_matrix(&cfg, 2), Err(WalkError::RequiresBiasedCoin)));
        assert!((quantum_kernel(&cfg, 5).sum() - 1.0).abs() < 1e-12);
    }
}
