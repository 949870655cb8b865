//! Verification suites over the identities the walk engines and kernels must satisfy.
//!
//! Each suite returns a [`Report`] of named checks with their worst residual.
//! Checks flagged `informational` record findings and never fail a suite.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{compare_majorization, entropy_series, majorization_deficit, moment, shannon_entropy};
use crate::density::cp_walk;
use crate::distribution::SiteDistribution;
use crate::error::WalkError;
use crate::kernels::{
    binomial_solution, classical_kernel, delayed_kernel, first_step_compatibility, kernel_walk, mixing_matrix,
    phi_matrix, phi_matrix_explicit, pseudo_memory_terms, quantum_kernel, recurrence_residual, reshuffling_matrix,
    ClassicalConvention, KernelKind, RealKernel,
};
use crate::laurent::LaurentOperator;
use crate::walk::{
    build_step_operator, completeness_residuals, global_distribution, global_trajectory, kraus_delayed, kraus_pair,
    prompt_trajectory, WalkConfig,
};

/// Bias values used throughout the parameter grid.
pub const BIAS_GRID: [(f64, &str); 4] = [(0.25, "1/4"), (1.0 / 3.0, "1/3"), (0.5, "1/2"), (0.75, "3/4")];

/// Entropies quoted for steps 6..=9 of the symmetric walk, and their rounding tolerance.
pub const REPORTED_ENTROPIES: [(usize, f64); 4] = [(6, 1.6551), (7, 1.8138), (8, 1.8909), (9, 1.9295)];
pub const REPORTED_ENTROPY_TOL: f64 = 5e-4;

/// Decreasing-entropy cluster quoted for steps 49, 50, 51.
pub const REPORTED_CLUSTER: [(usize, f64); 3] = [(49, 3.3498), (50, 3.3467), (51, 3.3408)];

/// `(iteration, <L²>)` for the two-step traced symmetric walk, from the quoted
/// ratios `σ/σ_C = √(5/2), √3, √(7/2), 2` and `σ_C² = N`.
pub const REPORTED_DELAYED_SECOND_MOMENTS: [(usize, f64); 4] = [(2, 5.0), (3, 9.0), (4, 14.0), (5, 20.0)];

const ALGEBRA_TOL: f64 = 1e-12;
const RECURRENCE_TOL: f64 = 1e-10;
const BINOMIAL_MAX_STEPS: usize = 12;
const MIXING_CASES: usize = 200;
const MIXING_SEED: u64 = 0x005e_ed0f_a110;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Kraus,
    Stochastic,
    Recurrence,
    Memory,
    Prop2,
    Analysis,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Kraus,
        Suite::Stochastic,
        Suite::Recurrence,
        Suite::Memory,
        Suite::Prop2,
        Suite::Analysis,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Kraus => "kraus",
            Suite::Stochastic => "stochastic",
            Suite::Recurrence => "recurrence",
            Suite::Memory => "memory",
            Suite::Prop2 => "prop2",
            Suite::Analysis => "analysis",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    /// True when every non-informational check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.informational || c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.informational && !c.pass)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max_steps: usize,
    /// Replaces the default tolerance of every equality check when set.
    pub tol: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_steps: 12,
            tol: None,
        }
    }
}

impl VerifyOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

struct Checks {
    out: Vec<Check>,
}

impl Checks {
    fn new() -> Self {
        Self { out: Vec::new() }
    }

    fn residual(&mut self, name: &str, params: &[(&str, String)], residual: f64, tolerance: f64) {
        self.out.push(Check {
            name: name.to_string(),
            params: to_params(params),
            max_residual: residual,
            tolerance,
            pass: residual <= tolerance,
            informational: false,
            note: None,
        });
    }

    fn flag(&mut self, name: &str, params: &[(&str, String)], pass: bool, note: String) {
        self.out.push(Check {
            name: name.to_string(),
            params: to_params(params),
            max_residual: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass,
            informational: false,
            note: Some(note),
        });
    }

    fn info(&mut self, name: &str, params: &[(&str, String)], residual: f64, observed: bool, note: String) {
        self.out.push(Check {
            name: name.to_string(),
            params: to_params(params),
            max_residual: residual,
            tolerance: 0.0,
            pass: observed,
            informational: true,
            note: Some(note),
        });
    }
}

fn to_params(params: &[(&str, String)]) -> BTreeMap<String, String> {
    params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// The two initial coin states of the parameter grid.
pub fn coin_grid() -> [(Complex64, Complex64, &'static str); 2] {
    [
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), "(0,1)"),
        (
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
            "(1/sqrt2,i/sqrt2)",
        ),
    ]
}

/// Every `(config, bias label, coin label)` in the grid.
pub fn config_grid() -> Vec<(WalkConfig, &'static str, &'static str)> {
    let mut out = Vec::new();
    for (p, pl) in BIAS_GRID {
        for (c, d, cl) in coin_grid() {
            let cfg = WalkConfig::biased(p, c, d).expect("grid configurations are valid");
            out.push((cfg, pl, cl));
        }
    }
    out
}

fn grid_params(pl: &str, cl: &str, range: String) -> Vec<(&'static str, String)> {
    vec![("p", pl.to_string()), ("coin", cl.to_string()), ("N", range)]
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Report {
    let checks = match suite {
        Suite::Kraus => kraus(opts),
        Suite::Stochastic => stochastic(opts),
        Suite::Recurrence => recurrence(opts),
        Suite::Memory => memory(opts),
        Suite::Prop2 => prop2(opts),
        Suite::Analysis => analysis(opts),
        Suite::All => Suite::EACH.iter().flat_map(|s| run(*s, opts).checks).collect(),
    };
    Report { suite, checks }
}

fn kraus(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Checks::new();
    let tol = opts.tol(ALGEBRA_TOL);
    let n_max = opts.max_steps;
    for (cfg, pl, cl) in config_grid() {
        let (mut left, mut right, mut normal) = (0.0_f64, 0.0_f64, 0.0_f64);
        for n in 0..=n_max {
            let pair = kraus_pair(&cfg, n);
            let (l, r) = completeness_residuals(&pair.as_slice());
            left = left.max(l);
            right = right.max(r);
            for a in pair.as_slice() {
                normal = normal.max((a * &a.adjoint()).max_abs_diff(&(&a.adjoint() * a)));
            }
        }
        let params = grid_params(pl, cl, format!("0..={n_max}"));
        checks.residual("completeness_adjoint_first", &params, left, tol);
        checks.residual("completeness_adjoint_last", &params, right, tol);
        checks.residual("kraus_normality", &params, normal, tol);
    }
    for (p, pl) in [
        (0.0, "0"),
        (0.25, "1/4"),
        (1.0 / 3.0, "1/3"),
        (0.5, "1/2"),
        (0.75, "3/4"),
        (1.0, "1"),
    ] {
        let cfg = WalkConfig::biased(p, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).expect("valid bias");
        let residual = build_step_operator(&cfg).unitarity_residual();
        checks.residual("step_operator_unitarity", &[("p", pl.to_string())], residual, tol);
    }
    checks.out
}

fn stochastic_residual(k: &RealKernel) -> f64 {
    (k.sum() - 1.0).abs().max(-k.min_coeff())
}

fn stochastic(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Checks::new();
    let tol = opts.tol(ALGEBRA_TOL);
    let n_max = opts.max_steps;
    let step_diff = RealKernel::new([(1, 1.0), (-1, -1.0)], KernelKind::NullSum).expect("null sum");
    for (cfg, pl, cl) in config_grid() {
        let p = cfg.bias().expect("grid uses U(p) coins");
        let params = grid_params(pl, cl, format!("0..={n_max}"));
        let quantum = (0..=n_max)
            .map(|n| stochastic_residual(&quantum_kernel(&cfg, n)))
            .fold(0.0, f64::max);
        checks.residual("quantum_kernel_doubly_stochastic", &params, quantum, tol);

        let pair_params = [("p", pl.to_string()), ("coin", cl.to_string())];
        let delayed = delayed_kernel(&cfg).expect("m = 2 is valid");
        checks.residual(
            "delayed_kernel_doubly_stochastic",
            &pair_params,
            stochastic_residual(&delayed),
            tol,
        );

        let phi = phi_matrix(&cfg);
        let phi_sum = phi.as_ref().map(|k| k.sum().abs()).unwrap_or(f64::INFINITY);
        checks.residual("phi_null_sum", &pair_params, phi_sum, tol);
        let explicit = phi_matrix_explicit(&cfg)
            .and_then(|e| phi.clone().map(|k| k.max_abs_diff(&e)))
            .unwrap_or(f64::INFINITY);
        checks.residual("phi_matches_explicit_form", &pair_params, explicit, tol);

        let dc = classical_kernel(p).expect("valid bias");
        let commutator = phi
            .map(|k| (&k * &dc).max_abs_diff(&(&dc * &k)))
            .unwrap_or(f64::INFINITY);
        checks.residual("phi_commutes_with_classical_kernel", &pair_params, commutator, tol);

        let omega = (1..=n_max.max(1))
            .map(|i| {
                reshuffling_matrix(&cfg, i)
                    .map(|w| w.sum().abs())
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max);
        checks.residual(
            "reshuffling_null_sum",
            &grid_params(pl, cl, format!("1..={}", n_max.max(1))),
            omega,
            tol,
        );

        let inhomogeneous = (0..=n_max)
            .map(|n| {
                mixing_matrix(&cfg, n)
                    .map(|m| (&step_diff * &m).sum().abs())
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max);
        checks.residual("inhomogeneous_term_null_sum", &params, inhomogeneous, tol);
    }
    checks.out
}

fn recurrence(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Checks::new();
    let tol = opts.tol(RECURRENCE_TOL);
    let n_max = opts.max_steps.max(1);
    for (cfg, pl, cl) in config_grid() {
        let worst = (1..=n_max)
            .map(|n| recurrence_residual(&cfg, n).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        checks.residual(
            "kernel_recurrence",
            &grid_params(pl, cl, format!("1..={n_max}")),
            worst,
            tol,
        );

        let base = recurrence_residual(&cfg, 0).unwrap_or(f64::INFINITY);
        let params = grid_params(pl, cl, "0".to_string());
        if first_step_compatibility(&cfg).is_ok() {
            checks.residual("kernel_recurrence_base", &params, base, tol);
        } else {
            checks.info(
                "kernel_recurrence_base",
                &params,
                base,
                base > tol,
                "first step incompatible with the classical kernel; M(0) = 0 does not close the base case".into(),
            );
        }
    }
    checks.out
}

fn memory(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Checks::new();
    let tol = opts.tol(RECURRENCE_TOL);
    let n_max = opts.max_steps.max(1);

    let reconstruction_residual = |cfg: &WalkConfig, convention| -> f64 {
        (1..=n_max)
            .map(|n| {
                let global = RealKernel::from_distribution(&global_distribution(cfg, n));
                pseudo_memory_terms(cfg, n, convention)
                    .map(|r| r.max_abs_diff(&global))
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    };

    for (cfg, pl, cl) in config_grid() {
        let params = grid_params(pl, cl, format!("1..={n_max}"));
        let literal = reconstruction_residual(&cfg, ClassicalConvention::Literal);
        match first_step_compatibility(&cfg) {
            Ok(()) => checks.residual("pseudo_memory_reconstruction", &params, literal, tol),
            Err(WalkError::IncompatibleFirstStep { measured, expected }) => {
                let swapped = reconstruction_residual(&cfg, ClassicalConvention::Swapped);
                let verdict = match (literal <= tol, swapped <= tol) {
                    (true, true) => "both conventions reproduce",
                    (true, false) => "literal convention reproduces",
                    (false, true) => "swapped convention reproduces",
                    (false, false) => "neither convention reproduces",
                };
                checks.info(
                    "pseudo_memory_convention_scan",
                    &params,
                    literal.min(swapped),
                    literal <= tol || swapped <= tol,
                    format!(
                        "P(+1) = {measured:.6} vs 1-p = {expected:.6}; literal residual {literal:.3e}, swapped residual {swapped:.3e}: {verdict}"
                    ),
                );
            }
            Err(e) => checks.flag("pseudo_memory_reconstruction", &params, false, e.to_string()),
        }
    }
    checks.out
}

/// `B_0`, `B_1` written out for the two-step tracing scheme.
pub fn delayed_kraus_explicit(cfg: &WalkConfig) -> Option<[LaurentOperator; 2]> {
    let p = cfg.bias()?;
    let (c, d) = (cfg.c(), cfg.d());
    let s = (p * (1.0 - p)).sqrt();
    let q = 1.0 - p;
    Some([
        LaurentOperator::from_coeffs([(2, c * p + d * s), (0, c * q - d * s)]),
        LaurentOperator::from_coeffs([(-2, d * p - c * s), (0, d * q + c * s)]),
    ])
}

fn prop2(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Checks::new();
    let algebra_tol = opts.tol(ALGEBRA_TOL);
    let tol = opts.tol(RECURRENCE_TOL);
    let n_max = opts.max_steps.max(1);

    for (cfg, pl, cl) in config_grid() {
        let pair_params = [("p", pl.to_string()), ("coin", cl.to_string())];
        let generic = kraus_delayed(&cfg, 2).expect("m = 2 is valid");
        let explicit = delayed_kraus_explicit(&cfg).expect("grid uses U(p) coins");
        let residual = generic[0]
            .max_abs_diff(&explicit[0])
            .max(generic[1].max_abs_diff(&explicit[1]));
        checks.residual("delayed_kraus_closed_form", &pair_params, residual, algebra_tol);

        let binomial_max = n_max.min(BINOMIAL_MAX_STEPS);
        let dq = delayed_kernel(&cfg).expect("m = 2 is valid");
        let walk = kernel_walk(&dq, binomial_max, &SiteDistribution::delta(0)).expect("stochastic");
        let worst = (0..=binomial_max)
            .map(|n| {
                binomial_solution(&cfg, n)
                    .map(|b| b.max_abs_diff(&walk[n]))
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max);
        checks.residual(
            "binomial_solution_matches_kernel_walk",
            &grid_params(pl, cl, format!("0..={binomial_max}")),
            worst,
            tol,
        );

        let prompt = prompt_trajectory(&cfg, n_max);
        let worst = cp_walk(&cfg, 1, n_max)
            .map(|traj| {
                traj.iter()
                    .zip(&prompt)
                    .map(|(rho, pc)| rho.diagonal().map(|d| d.max_abs_diff(pc)).unwrap_or(f64::INFINITY))
                    .fold(0.0, f64::max)
            })
            .unwrap_or(f64::INFINITY);
        checks.residual(
            "unit_period_equals_prompt_walk",
            &grid_params(pl, cl, format!("0..={n_max}")),
            worst,
            algebra_tol,
        );

        let worst = (0..=n_max.min(BINOMIAL_MAX_STEPS))
            .map(|n| {
                let global = global_distribution(&cfg, n);
                let via_cp = cp_walk(&cfg, n.max(1), if n == 0 { 0 } else { 1 })
                    .ok()
                    .and_then(|t| t.last().and_then(|r| r.diagonal().ok()));
                via_cp.map(|d| d.max_abs_diff(&global)).unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max);
        checks.residual(
            "global_equals_single_period_channel",
            &grid_params(pl, cl, format!("0..={}", n_max.min(BINOMIAL_MAX_STEPS))),
            worst,
            algebra_tol,
        );
    }

    let sym = WalkConfig::symmetric();
    let iterations = n_max.max(5);
    let cp = cp_walk(&sym, 2, iterations).expect("m = 2 is valid");
    let cp_diag: Vec<SiteDistribution> = cp
        .iter()
        .map(|rho| rho.diagonal().expect("cp walk preserves the trace"))
        .collect();
    let dq = delayed_kernel(&sym).expect("m = 2 is valid");
    let kw = kernel_walk(&dq, iterations, &SiteDistribution::delta(0)).expect("stochastic");

    let worst = REPORTED_DELAYED_SECOND_MOMENTS
        .iter()
        .map(|&(n, want)| (moment(&cp_diag[n], 2) - want).abs())
        .fold(0.0, f64::max);
    checks.residual(
        "cp_walk_second_moments_match_reported",
        &[
            ("p", "1/2".into()),
            ("coin", "(1/sqrt2,i/sqrt2)".into()),
            ("N", "2..=5".into()),
        ],
        worst,
        tol,
    );

    let first = moment(&cp_diag[1], 2);
    checks.info(
        "cp_walk_first_iteration_second_moment",
        &[("N", "1".into())],
        (first - 1.0).abs(),
        (first - 1.0).abs() > tol,
        format!("cp walk gives <L^2> = {first}; the quoted ratio sigma_1 = sigma_1^C implies 1"),
    );

    let sym_params = [("p", "1/2".to_string()), ("coin", "(1/sqrt2,i/sqrt2)".to_string())];
    let kernel_moments: Vec<String> = kw.iter().map(|d| format!("{}", moment(d, 2))).collect();
    let cp_moments: Vec<String> = cp_diag.iter().map(|d| format!("{}", moment(d, 2))).collect();
    let linear = kw
        .iter()
        .enumerate()
        .map(|(n, d)| (moment(d, 2) - 2.0 * n as f64).abs())
        .fold(0.0, f64::max);
    checks.info(
        "kernel_vs_cp_second_moments",
        &sym_params,
        linear,
        linear <= tol,
        format!(
            "kernel walk <L^2> = [{}]; cp walk <L^2> = [{}]",
            kernel_moments.join(", "),
            cp_moments.join(", ")
        ),
    );

    let tv: Vec<f64> = kw.iter().zip(&cp_diag).map(|(a, b)| a.total_variation(b)).collect();
    let agree_early = tv[0] <= tol && tv[1] <= tol;
    let diverge = tv[2] > 1e-6;
    checks.info(
        "kernel_cp_divergence",
        &sym_params,
        tv[2],
        agree_early && diverge,
        format!(
            "total variation per iteration: [{}]",
            tv.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    );
    checks.out
}

/// `C(n, k) q^k (1 - q)^(n - k)` at site `2k - n`.
pub fn binomial_closed_form(n: usize, right: f64) -> SiteDistribution {
    let mut probs = Vec::with_capacity(n + 1);
    let mut binom = 1.0_f64;
    for k in 0..=n {
        let weight = binom * right.powi(k as i32) * (1.0 - right).powi((n - k) as i32);
        probs.push((2 * k as i64 - n as i64, weight));
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    SiteDistribution::new(probs).expect("binomial weights sum to one")
}

fn chain_deficit(traj: &[SiteDistribution]) -> (f64, f64) {
    let mut deficit = 0.0_f64;
    let mut entropy_drop = 0.0_f64;
    for w in traj.windows(2) {
        deficit = deficit.max(majorization_deficit(&w[0], &w[1]));
        entropy_drop = entropy_drop.max(shannon_entropy(&w[0]) - shannon_entropy(&w[1]));
    }
    (deficit, entropy_drop.max(0.0))
}

/// Random stochastic kernel and random distribution for the mixing property.
pub fn random_mixing_case(rng: &mut impl Rng) -> (RealKernel, SiteDistribution) {
    let klen = rng.gen_range(1..=5);
    let kstart = rng.gen_range(-3..=1);
    let kw: Vec<f64> = (0..klen).map(|_| rng.gen::<f64>()).collect();
    let ktotal: f64 = kw.iter().sum();
    let kernel = RealKernel::new(
        kw.iter().enumerate().map(|(i, w)| (kstart + i as i64, w / ktotal)),
        KernelKind::Stochastic,
    )
    .expect("normalized weights");
    let dlen = rng.gen_range(1..=8);
    let dw: Vec<f64> = (0..dlen).map(|_| rng.gen::<f64>().powi(3)).collect();
    let dtotal: f64 = dw.iter().sum();
    let dist = SiteDistribution::new(
        dw.iter()
            .enumerate()
            .map(|(i, w)| (i as i64 * rng.gen_range(1..=3), w / dtotal)),
    )
    .expect("normalized weights");
    (kernel, dist)
}

fn analysis(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Checks::new();
    let algebra_tol = opts.tol(ALGEBRA_TOL);
    let sym = WalkConfig::symmetric();
    let sym_params = [("p", "1/2".to_string()), ("coin", "(1/sqrt2,i/sqrt2)".to_string())];

    let global = global_trajectory(&sym, 100);
    let worst = REPORTED_ENTROPIES
        .iter()
        .map(|&(n, want)| (shannon_entropy(&global[n]) - want).abs())
        .fold(0.0, f64::max);
    checks.residual("entropy_checkpoints", &sym_params, worst, REPORTED_ENTROPY_TOL);

    let window = &global[6..=9];
    let verdicts: Vec<_> = window.windows(2).map(|w| compare_majorization(&w[0], &w[1])).collect();
    let broken = verdicts.iter().any(|v| !v.crossings().is_empty());
    let increasing = window
        .windows(2)
        .all(|w| shannon_entropy(&w[1]) > shannon_entropy(&w[0]));
    checks.flag(
        "majorization_breakdown_with_entropy_increase",
        &[("N", "6..=9".to_string())],
        broken && increasing,
        format!(
            "verdicts: [{}]",
            verdicts
                .iter()
                .map(|v| format!("{}{:?}", v.label(), v.crossings()))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );

    let chain_steps = opts.max_steps.max(30);
    for (p, pl) in [(0.25, "1/4"), (0.5, "1/2")] {
        let dc = classical_kernel(p).expect("valid bias");
        let traj = kernel_walk(&dc, chain_steps, &SiteDistribution::delta(0)).expect("stochastic");
        let (deficit, drop) = chain_deficit(&traj);
        let params = [("p", pl.to_string()), ("N", format!("0..={chain_steps}"))];
        checks.residual("classical_majorization_chain", &params, deficit, algebra_tol);
        checks.residual("classical_entropy_nondecreasing", &params, drop, algebra_tol);

        let cfg = WalkConfig::biased(p, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).expect("valid");
        let worst = prompt_trajectory(&cfg, chain_steps)
            .iter()
            .enumerate()
            .map(|(n, d)| d.max_abs_diff(&binomial_closed_form(n, cfg.right_step_probability())))
            .fold(0.0, f64::max);
        checks.residual("prompt_walk_is_binomial", &params, worst, algebra_tol);
    }

    let dq = delayed_kernel(&sym).expect("m = 2 is valid");
    let kw = kernel_walk(&dq, chain_steps, &SiteDistribution::delta(0)).expect("stochastic");
    let (deficit, drop) = chain_deficit(&kw);
    let params = [("p", "1/2".to_string()), ("N", format!("0..={chain_steps}"))];
    checks.residual("delayed_kernel_majorization_chain", &params, deficit, algebra_tol);
    checks.residual("delayed_kernel_entropy_nondecreasing", &params, drop, algebra_tol);

    let mut schur = 0.0_f64;
    let mut duality = true;
    let mut pairs: Vec<(&SiteDistribution, &SiteDistribution)> = Vec::new();
    for a in &global[..20] {
        for b in &global[..20] {
            pairs.push((a, b));
        }
    }
    for (a, b) in pairs {
        let verdict = compare_majorization(a, b);
        if verdict.first_dominates() {
            schur = schur.max(shannon_entropy(a) - shannon_entropy(b));
        }
        let incomparable = matches!(verdict, crate::analysis::MajorizationVerdict::Incomparable { .. });
        duality &= incomparable == !verdict.crossings().is_empty();
        duality &= verdict.first_dominates() == (majorization_deficit(a, b) <= crate::analysis::ANALYSIS_TOL);
    }
    checks.residual(
        "schur_concavity",
        &[("N", "0..20 pairs".to_string())],
        schur.max(0.0),
        algebra_tol,
    );
    checks.flag(
        "verdict_crossing_duality",
        &[("N", "0..20 pairs".to_string())],
        duality,
        "Incomparable iff crossings".into(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(MIXING_SEED);
    let worst = (0..MIXING_CASES)
        .map(|_| {
            let (k, d) = random_mixing_case(&mut rng);
            let mixed = k.apply(&d).expect("stochastic kernel");
            majorization_deficit(&d, &mixed)
        })
        .fold(0.0, f64::max);
    checks.residual(
        "mixing_monotonicity",
        &[("cases", MIXING_CASES.to_string())],
        worst,
        algebra_tol,
    );

    let classical = entropy_series(&prompt_trajectory(&sym, 100), 0).expect("nonempty");
    for (p, pl) in [(1.0 / 3.0, "1/3"), (0.5, "1/2"), (0.75, "3/4")] {
        let cfg = WalkConfig::symmetric_coin(p).expect("valid");
        let series = entropy_series(&global_trajectory(&cfg, 100), 0).expect("nonempty");
        let ok = series.slope > 0.0 && !series.descents.is_empty() && series.mean_increase > classical.mean_increase;
        checks.flag(
            "entropy_dynamics",
            &[("p", pl.to_string()), ("N", "0..=100".to_string())],
            ok,
            format!(
                "slope {:.5}, {} descents (first {:?}), mean increase {:.5} vs classical {:.5}",
                series.slope,
                series.descents.len(),
                series.descents.first(),
                series.mean_increase,
                classical.mean_increase
            ),
        );
    }

    for (p, pl) in BIAS_GRID {
        let cfg = WalkConfig::symmetric_coin(p).expect("valid");
        let traj = if (p - 0.5).abs() < 1e-15 {
            global.clone()
        } else {
            global_trajectory(&cfg, 51)
        };
        let found: Vec<f64> = REPORTED_CLUSTER
            .iter()
            .map(|&(n, _)| shannon_entropy(&traj[n]))
            .collect();
        let worst = REPORTED_CLUSTER
            .iter()
            .zip(&found)
            .map(|(&(_, want), got)| (got - want).abs())
            .fold(0.0, f64::max);
        checks.info(
            "entropy_cluster_scan",
            &[("p", pl.to_string()), ("N", "49..=51".to_string())],
            worst,
            worst <= REPORTED_ENTROPY_TOL,
            format!("S(49..51) = {:.4}, {:.4}, {:.4}", found[0], found[1], found[2]),
        );
    }

    let n = 200;
    let far = global_trajectory(&sym, n).pop().expect("nonempty");
    let ratio = moment(&far, 2).sqrt() / (n as f64 * ((2.0 - 2f64.sqrt()) / 2.0).sqrt());
    checks.residual(
        "asymptotic_spreading_rate",
        &[("N", n.to_string())],
        (ratio - 1.0).abs(),
        0.05,
    );

    checks.out
}
