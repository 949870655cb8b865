//! Coin-walker evolution: the step operator, Kraus generators and the
//! prompt and global tracing schemes.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::coin_block::CoinBlock;
use crate::distribution::SiteDistribution;
use crate::error::WalkError;
use crate::laurent::LaurentOperator;

/// Tolerance for the normalization of `(c, d)` and unitarity of the coin.
pub const CONFIG_TOL: f64 = 1e-12;

type Mat2 = [[Complex64; 2]; 2];

/// The coin unitary `U`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coin {
    /// `U(p) = [[√p, √(1-p)], [√(1-p), -√p]]`.
    Biased(f64),
    /// Any 2×2 unitary.
    Unitary(Mat2),
}

impl Coin {
    pub fn matrix(&self) -> Mat2 {
        match *self {
            Coin::Biased(p) => {
                let (a, b) = (p.sqrt(), (1.0 - p).sqrt());
                [
                    [Complex64::new(a, 0.0), Complex64::new(b, 0.0)],
                    [Complex64::new(b, 0.0), Complex64::new(-a, 0.0)],
                ]
            }
            Coin::Unitary(m) => m,
        }
    }

    /// The bias `p` of a `U(p)` coin.
    pub fn bias(&self) -> Option<f64> {
        match *self {
            Coin::Biased(p) => Some(p),
            Coin::Unitary(_) => None,
        }
    }

    fn unitarity_residual(&self) -> f64 {
        let m = self.matrix();
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let dot: Complex64 = (0..2).map(|k| m[i][k] * m[j][k].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// When the coin is traced out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TracingScheme {
    /// After every application of `V`.
    Prompt,
    /// Once, after all `N` applications.
    Global,
    /// After every `m` applications.
    Delayed(usize),
}

/// Coin unitary, initial coin state `c|0> + d|1>`, and tracing scheme.
/// The walker always starts at site 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkConfig {
    coin: Coin,
    c: Complex64,
    d: Complex64,
    scheme: TracingScheme,
}

impl WalkConfig {
    pub fn new(coin: Coin, c: Complex64, d: Complex64, scheme: TracingScheme) -> Result<Self, WalkError> {
        if let Coin::Biased(p) = coin {
            if !(0.0..=1.0).contains(&p) {
                return Err(WalkError::BiasOutOfRange(p));
            }
        }
        let residual = coin.unitarity_residual();
        if residual > CONFIG_TOL || residual.is_nan() {
            return Err(WalkError::CoinNotUnitary(residual));
        }
        let norm = c.norm_sqr() + d.norm_sqr();
        if (norm - 1.0).abs() > CONFIG_TOL || norm.is_nan() {
            return Err(WalkError::CoinStateNotNormalized(norm));
        }
        if let TracingScheme::Delayed(0) = scheme {
            return Err(WalkError::InvalidTracePeriod(0));
        }
        Ok(Self { coin, c, d, scheme })
    }

    /// A `U(p)` walk with global tracing.
    pub fn biased(p: f64, c: Complex64, d: Complex64) -> Result<Self, WalkError> {
        Self::new(Coin::Biased(p), c, d, TracingScheme::Global)
    }

    /// `U(p)` with the coin started in `(|0> + i|1>)/√2`.
    pub fn symmetric_coin(p: f64) -> Result<Self, WalkError> {
        Self::biased(p, symmetric_c(), symmetric_d())
    }

    /// The symmetric walk: `p = 1/2`, `c = 1/√2`, `d = i/√2`.
    pub fn symmetric() -> Self {
        Self::symmetric_coin(0.5).expect("the symmetric walk is a valid configuration")
    }

    pub fn with_scheme(mut self, scheme: TracingScheme) -> Result<Self, WalkError> {
        if let TracingScheme::Delayed(0) = scheme {
            return Err(WalkError::InvalidTracePeriod(0));
        }
        self.scheme = scheme;
        Ok(self)
    }

    pub fn coin(&self) -> Coin {
        self.coin
    }

    pub fn bias(&self) -> Option<f64> {
        self.coin.bias()
    }

    pub(crate) fn require_bias(&self) -> Result<f64, WalkError> {
        self.bias().ok_or(WalkError::RequiresBiasedCoin)
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn d(&self) -> Complex64 {
        self.d
    }

    pub fn scheme(&self) -> TracingScheme {
        self.scheme
    }

    /// One-step amplitudes `(c U00 + d U01, c U10 + d U11)` for moving right and left.
    pub fn one_step_amplitudes(&self) -> (Complex64, Complex64) {
        let u = self.coin.matrix();
        (self.c * u[0][0] + self.d * u[0][1], self.c * u[1][0] + self.d * u[1][1])
    }

    /// Probability of a right step when the coin is freshly prepared.
    pub fn right_step_probability(&self) -> f64 {
        self.one_step_amplitudes().0.norm_sqr()
    }
}

pub fn symmetric_c() -> Complex64 {
    Complex64::new(FRAC_1_SQRT_2, 0.0)
}

pub fn symmetric_d() -> Complex64 {
    Complex64::new(0.0, FRAC_1_SQRT_2)
}

/// `V = P+ U ⊗ E+ + P- U ⊗ E-` as a coin block.
pub fn build_step_operator(config: &WalkConfig) -> CoinBlock {
    let u = config.coin.matrix();
    CoinBlock::new([
        [
            LaurentOperator::monomial(1, u[0][0]),
            LaurentOperator::monomial(1, u[0][1]),
        ],
        [
            LaurentOperator::monomial(-1, u[1][0]),
            LaurentOperator::monomial(-1, u[1][1]),
        ],
    ])
}

/// The two walker-space Kraus generators `A_k = <k|V^n|φ>`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausPair {
    pub a0: LaurentOperator,
    pub a1: LaurentOperator,
}

impl KrausPair {
    pub fn as_slice(&self) -> [&LaurentOperator; 2] {
        [&self.a0, &self.a1]
    }

    pub fn into_vec(self) -> Vec<LaurentOperator> {
        vec![self.a0, self.a1]
    }

    /// Site distribution after applying the pair to `|0><0|` and reading the diagonal.
    pub fn occupation(&self) -> SiteDistribution {
        let mut probs: Vec<(i64, f64)> = Vec::with_capacity(self.a0.len() + self.a1.len());
        probs.extend(self.a0.iter().map(|(k, a)| (k, a.norm_sqr())));
        probs.extend(self.a1.iter().map(|(k, a)| (k, a.norm_sqr())));
        SiteDistribution::new(probs).expect("Kraus generators of a unitary walk conserve probability")
    }
}

/// Kraus generators for `n` steps followed by a single trace, via the block power `V^n`.
pub fn kraus_pair(config: &WalkConfig, n: usize) -> KrausPair {
    let vn = build_step_operator(config).pow(n);
    let (a0, a1) = vn.contract(config.c, config.d);
    debug_assert!(a0.degree_span() <= n as i64 && a1.degree_span() <= n as i64);
    KrausPair { a0, a1 }
}

/// Kraus generators of the channel that traces the coin every `m` steps.
pub fn kraus_delayed(config: &WalkConfig, m: usize) -> Result<Vec<LaurentOperator>, WalkError> {
    if m < 1 {
        return Err(WalkError::InvalidTracePeriod(m));
    }
    Ok(kraus_pair(config, m).into_vec())
}

/// Successive Kraus pairs for `n = 0, 1, 2, ...`, each obtained from the
/// previous one by a single application of `V`.
pub fn kraus_sequence(config: &WalkConfig) -> impl Iterator<Item = KrausPair> {
    let v = build_step_operator(config);
    let first = KrausPair {
        a0: LaurentOperator::monomial(0, config.c),
        a1: LaurentOperator::monomial(0, config.d),
    };
    std::iter::successors(Some(first), move |prev| {
        let (a0, a1) = v.apply((&prev.a0, &prev.a1));
        Some(KrausPair { a0, a1 })
    })
}

/// `Σ_k A_k† A_k - 1` and `Σ_k A_k A_k† - 1`, as worst coefficient residuals.
pub fn completeness_residuals(kraus: &[&LaurentOperator]) -> (f64, f64) {
    let id = LaurentOperator::identity();
    let mut left = LaurentOperator::zero();
    let mut right = LaurentOperator::zero();
    for k in kraus {
        left = &left + &(&k.adjoint() * k);
        right = &right + &(*k * &k.adjoint());
    }
    (left.max_abs_diff(&id), right.max_abs_diff(&id))
}

/// Occupation probabilities after `n` steps with a single final trace.
pub fn global_distribution(config: &WalkConfig, n: usize) -> SiteDistribution {
    kraus_pair(config, n).occupation()
}

/// `global_distribution` for every `n` in `0..=steps`.
pub fn global_trajectory(config: &WalkConfig, steps: usize) -> Vec<SiteDistribution> {
    kraus_sequence(config)
        .take(steps + 1)
        .map(|pair| pair.occupation())
        .collect()
}

/// Occupation probabilities when the coin is traced and re-prepared after every step.
///
/// The traced one-step map keeps the walker diagonal, so it acts on the
/// distribution as convolution with the two-point law
/// `{+1: |c U00 + d U01|², -1: |c U10 + d U11|²}`.
pub fn prompt_distribution(config: &WalkConfig, n: usize) -> SiteDistribution {
    prompt_trajectory(config, n)
        .pop()
        .expect("trajectory holds n + 1 entries")
}

pub fn prompt_trajectory(config: &WalkConfig, steps: usize) -> Vec<SiteDistribution> {
    let (right, left) = config.one_step_amplitudes();
    let (pr, pl) = (right.norm_sqr(), left.norm_sqr());
    let mut out = Vec::with_capacity(steps + 1);
    let mut current = SiteDistribution::delta(0);
    for _ in 0..steps {
        let next = SiteDistribution::new(current.iter().flat_map(|(k, v)| [(k + 1, v * pr), (k - 1, v * pl)]))
            .expect("two-point convolution conserves probability");
        out.push(std::mem::replace(&mut current, next));
    }
    out.push(current);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn close(a: &LaurentOperator, b: &LaurentOperator) -> bool {
        a.max_abs_diff(b) < 1e-12
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            WalkConfig::biased(1.2, re(1.0), re(0.0)),
            Err(WalkError::BiasOutOfRange(_))
        ));
        assert!(matches!(
            WalkConfig::biased(0.5, re(1.0), re(1.0)),
            Err(WalkError::CoinStateNotNormalized(_))
        ));
        let bad = Coin::Unitary([[re(1.0), re(1.0)], [re(0.0), re(1.0)]]);
        assert!(matches!(
            WalkConfig::new(bad, re(1.0), re(0.0), TracingScheme::Global),
            Err(WalkError::CoinNotUnitary(_))
        ));
        assert!(matches!(
            WalkConfig::symmetric().with_scheme(TracingScheme::Delayed(0)),
            Err(WalkError::InvalidTracePeriod(0))
        ));
    }

    #[test]
    fn step_operator_entries() {
        let v = build_step_operator(&WalkConfig::symmetric());
        assert!(close(v.entry(0, 0), &LaurentOperator::from_real([(1, FRAC_1_SQRT_2)])));

        let v = build_step_operator(&WalkConfig::biased(1.0, re(1.0), re(0.0)).unwrap());
        assert_eq!(v.entry(0, 0), &LaurentOperator::from_real([(1, 1.0)]));
        assert!(v.entry(0, 1).is_zero());
        assert!(v.entry(1, 0).is_zero());
        assert_eq!(v.entry(1, 1), &LaurentOperator::from_real([(-1, -1.0)]));
    }

    #[test]
    fn step_operator_powers() {
        let p: f64 = 0.3;
        let v = build_step_operator(&WalkConfig::biased(p, re(1.0), re(0.0)).unwrap());
        let v1 = v.pow(1);
        let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
        assert!(close(v1.entry(0, 0), &LaurentOperator::from_real([(1, sp)])));
        assert!(close(v1.entry(0, 1), &LaurentOperator::from_real([(1, sq)])));
        assert!(close(v1.entry(1, 0), &LaurentOperator::from_real([(-1, sq)])));
        assert!(close(v1.entry(1, 1), &LaurentOperator::from_real([(-1, -sp)])));

        let v2 = v.pow(2);
        assert!(close(
            v2.entry(0, 0),
            &LaurentOperator::from_real([(2, p), (0, 1.0 - p)])
        ));
        assert_eq!(v.pow(0), CoinBlock::identity());
    }

    #[test]
    fn kraus_pair_small_cases() {
        let (p, c, d) = (0.3_f64, Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let cfg = WalkConfig::biased(p, c, d).unwrap();
        let k1 = kraus_pair(&cfg, 1);
        let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
        assert!(close(&k1.a0, &LaurentOperator::monomial(1, c * sp + d * sq)));
        assert!(close(&k1.a1, &LaurentOperator::monomial(-1, c * sq - d * sp)));

        let k0 = kraus_pair(&cfg, 0);
        assert_eq!(k0.a0, LaurentOperator::monomial(0, c));
        assert_eq!(k0.a1, LaurentOperator::monomial(0, d));

        let cfg = WalkConfig::biased(0.5, re(1.0), re(0.0)).unwrap();
        let k2 = kraus_pair(&cfg, 2);
        assert!(close(&k2.a0, &LaurentOperator::from_real([(2, 0.5), (0, 0.5)])));
        assert!(close(&k2.a1, &LaurentOperator::from_real([(0, 0.5), (-2, -0.5)])));
    }

    #[test]
    fn kraus_delayed_cases() {
        assert!(matches!(
            kraus_delayed(&WalkConfig::symmetric(), 0),
            Err(WalkError::InvalidTracePeriod(0))
        ));

        let cfg = WalkConfig::symmetric();
        let b = kraus_delayed(&cfg, 2).unwrap();
        let (c, d) = (cfg.c(), cfg.d());
        let expected = LaurentOperator::from_coeffs([(2, (c + d) / 2.0), (0, (c - d) / 2.0)]);
        assert!(close(&b[0], &expected));
        for k in &b {
            for (_, v) in k.iter() {
                assert!((v.norm_sqr() - 0.25).abs() < 1e-12);
            }
        }

        let m1 = kraus_delayed(&cfg, 1).unwrap();
        assert_eq!(m1, kraus_pair(&cfg, 1).into_vec());
    }

    #[test]
    fn sequence_matches_block_powers() {
        let cfg = WalkConfig::symmetric_coin(1.0 / 3.0).unwrap();
        for (n, pair) in kraus_sequence(&cfg).take(15).enumerate() {
            let direct = kraus_pair(&cfg, n);
            assert!(close(&pair.a0, &direct.a0));
            assert!(close(&pair.a1, &direct.a1));
        }
    }

    #[test]
    fn global_small_steps() {
        let cfg = WalkConfig::symmetric();
        assert!(global_distribution(&cfg, 0).max_abs_diff(&SiteDistribution::delta(0)) < 1e-15);

        let p4 = global_distribution(&cfg, 4);
        let want = [(-4, 1.0), (-2, 6.0), (0, 2.0), (2, 6.0), (4, 1.0)];
        for (k, w) in want {
            assert!((p4.prob(k) - w / 16.0).abs() < 1e-12);
        }
        assert_eq!(p4.support_len(), 5);
    }

    #[test]
    fn prompt_small_steps() {
        let cfg = WalkConfig::biased(0.5, re(1.0), re(0.0)).unwrap();
        let p2 = prompt_distribution(&cfg, 2);
        for (k, w) in [(-2, 0.25), (0, 0.5), (2, 0.25)] {
            assert!((p2.prob(k) - w).abs() < 1e-15);
        }

        let p3 = prompt_distribution(&WalkConfig::symmetric(), 3);
        for (k, w) in [(-3, 1.0), (-1, 3.0), (1, 3.0), (3, 1.0)] {
            assert!((p3.prob(k) - w / 8.0).abs() < 1e-12);
        }

        let cfg = WalkConfig::biased(0.25, re(0.0), re(1.0)).unwrap();
        let p1 = prompt_distribution(&cfg, 1);
        assert!((p1.prob(1) - 0.75).abs() < 1e-12);
        assert!((p1.prob(-1) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn degenerate_coins_translate() {
        let right = WalkConfig::biased(1.0, re(1.0), re(0.0)).unwrap();
        assert_eq!(global_distribution(&right, 7), SiteDistribution::delta(7));
        let swap = WalkConfig::biased(0.0, re(1.0), re(0.0)).unwrap();
        // U(0) swaps the coin, so the walker alternates.
        let d = global_distribution(&swap, 4);
        assert_eq!(d.support_len(), 1);
        assert!((d.total() - 1.0).abs() < 1e-15);
    }
}
