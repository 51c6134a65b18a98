//! Adaptive stratified Monte Carlo integration on the unit hypercube.
//!
//! The integration domain `[0,1)^d` is partitioned into boxes (strata).
//! Samples are spread over the strata by empirical optimal allocation
//! (`n_i` proportional to `a_i sigma_i`), and strata whose contribution to
//! the estimator variance is well above average are bisected along every
//! axis. Once the mesh has settled it can be frozen and resampled to
//! measure the variance and efficiency of the adaptive estimator.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.
//!
//! ```
//! use amc::{run_adaptive, AdaptiveConfig, NamedIntegrand};
//!
//! let disc = NamedIntegrand::disc();
//! let cfg = AdaptiveConfig::new(2, 10_000).with_levels(4).with_seed(42);
//! let report = run_adaptive::<f64, _>(&cfg, &disc).unwrap();
//! assert!((report.estimate - std::f64::consts::FRAC_PI_4).abs() < 0.01);
//! ```

pub mod adaptive;
pub mod allocation;
pub mod dump;
pub mod error;
pub mod estimate;
pub mod geometry;
pub mod harness;
pub mod integrand;
pub mod integrands;
pub mod mesh;
pub mod moments;
pub mod rng;
pub mod scalar;

pub use adaptive::{
    crude_essays, efficiency, frozen_estimate, indicators, mark, mean_and_variance, refine,
    run_adaptive, run_essays, split, AdaptiveConfig, EssayReport, IndicatorSet, RunReport,
};
pub use allocation::{
    allocation_variance, largest_remainder, optimal_allocation, proportional_allocation,
    AllocationPlan,
};
pub use dump::{MeshDump, StratumDump};
pub use error::{Error, Result};
pub use estimate::{
    crude_mc, sample_mesh, sample_stratum, stratified_estimate, stratified_variance_estimate,
};
pub use geometry::{sample_uniform, HyperRect};
pub use integrand::{FnIntegrand, Integrand};
pub use integrands::{disc_indicator, gaussian, gaussian_exact, registry_lookup, NamedIntegrand};
pub use mesh::{Mesh, Stratum};
pub use moments::{stratum_moments, MomentAccumulator, StratumMoments};
pub use rng::{RngStream, StreamCounter};
pub use scalar::Scalar;

pub type Rect = HyperRect<f64>;
pub type Stratum64 = Stratum<f64>;
pub type Mesh64 = Mesh<f64>;
pub type Moments64 = StratumMoments<f64>;
pub type Plan64 = AllocationPlan<f64>;
pub type Config64 = AdaptiveConfig<f64>;
pub type Indicators64 = IndicatorSet<f64>;
pub type Report64 = RunReport<f64>;
pub type Essays64 = EssayReport<f64>;
