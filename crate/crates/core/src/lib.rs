//! Exact simulation and analysis of discrete-time quantum walks on the integer line.
//!
//! The walker lives on `Z`, the coin on `C²`. One step applies
//! `V = P+ U ⊗ E+ + P- U ⊗ E-`, and every operator that appears on the walker
//! side is a Laurent polynomial in the shift, so the whole crate works with
//! exact finite supports instead of truncated matrices.
//!
//! - [`laurent`] and [`coin_block`]: shift-operator algebra.
//! - [`walk`]: the step operator, Kraus generators, prompt and global tracing.
//! - [`density`]: band density matrices and periodic (delayed) tracing.
//! - [`kernels`]: doubly stochastic kernels, reshuffling matrices and the
//!   pseudo-memory decomposition.
//! - [`analysis`]: entropy, moments, Lorenz curves and majorization.
//! - [`verify`]: verification suites over all of the above.
//!
//! ```
//! use qwalk_core::{global_distribution, shannon_entropy, WalkConfig};
//!
//! let walk = WalkConfig::symmetric();
//! let p6 = global_distribution(&walk, 6);
//! assert!((p6.prob(4) - 18.0 / 64.0).abs() < 1e-12);
//! assert!((shannon_entropy(&p6) - 1.6551).abs() < 5e-4);
//! ```

pub mod analysis;
pub mod coin_block;
pub mod density;
pub mod distribution;
pub mod error;
pub mod kernels;
pub mod laurent;
pub mod verify;
pub mod walk;

pub use analysis::{
    compare_majorization, entropy_series, lorenz_curve, lorenz_curve_padded, majorization_deficit, moment,
    shannon_entropy, std_dev, EntropySeries, LorenzCurve, MajorizationVerdict,
};
pub use coin_block::CoinBlock;
pub use density::{cp_apply, cp_walk, DensityMatrix};
pub use distribution::SiteDistribution;
pub use error::WalkError;
pub use kernels::{
    binomial_solution, classical_kernel, delayed_kernel, kernel_walk, mixing_matrix, period_kernel, phi_matrix,
    pseudo_memory_reconstruct, quantum_kernel, reshuffling_matrix, KernelKind, RealKernel,
};
pub use laurent::LaurentOperator;
pub use walk::{
    build_step_operator, global_distribution, global_trajectory, kraus_delayed, kraus_pair, prompt_distribution,
    prompt_trajectory, Coin, KrausPair, TracingScheme, WalkConfig,
};
