//! Indicator-driven mesh refinement and frozen-mesh replication.
//!
//! [`run_adaptive`] starts from a regular grid with equal counts and, at
//! each level, reallocates samples optimally from the latest moments,
//! resamples every stratum, computes the per-stratum variance indicators
//! `a_i^2 sigma_i^2 / n_i` and bisects (along every axis) the strata whose
//! indicator exceeds `C_m` times the mean indicator. It stops after `L`
//! levels or once the estimated variance drops to `epsilon`.
//!
//! [`run_essays`] reuses the final mesh and counts of one adaptive run to
//! draw further independent estimates, giving an empirical variance of the
//! adaptive estimator without re-running the refinement.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::{optimal_allocation, AllocationPlan};
use crate::error::{Error, Result};
use crate::estimate::{
    crude_mc, sample_mesh, sample_stratum, stratified_estimate, stratified_variance_estimate,
    variance_term,
};
use crate::integrand::Integrand;
use crate::mesh::{Mesh, Stratum};
use crate::rng::{RngStream, StreamCounter, CRUDE_STREAM_BASE};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveConfig<T> {
    /// Global sample budget per level.
    pub n: usize,
    /// Maximum number of levels.
    pub max_levels: usize,
    /// Variance tolerance.
    pub epsilon: T,
    /// Marking constant, strictly greater than one.
    pub c_m: T,
    /// Minimum number of points per stratum.
    pub m_rp: usize,
    /// Initial grid segments per side.
    pub n0: usize,
    pub dim: usize,
    pub seed: u64,
}

impl<T: Scalar> AdaptiveConfig<T> {
    /// Defaults: `L = 4`, `epsilon = 0`, `C_m = 2`, `M_rp = 2`, `N0 = 4`, seed 0.
    pub fn new(dim: usize, n: usize) -> Self {
        Self {
            n,
            max_levels: 4,
            epsilon: T::zero(),
            c_m: T::of(2.0),
            m_rp: 2,
            n0: 4,
            dim,
            seed: 0,
        }
    }

    pub fn with_levels(mut self, l: usize) -> Self {
        self.max_levels = l;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epsilon(mut self, eps: T) -> Self {
        self.epsilon = eps;
        self
    }

    pub fn initial_cells(&self) -> Option<usize> {
        self.n0.checked_pow(self.dim as u32)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.dim == 0 {
            return bad("dim must be at least 1");
        }
        if self.n0 == 0 {
            return bad("N0 must be at least 1");
        }
        if self.m_rp == 0 {
            return bad("Mrp must be at least 1");
        }
        if self.max_levels == 0 {
            return bad("L must be at least 1");
        }
        if self.c_m.is_nan() || self.c_m <= T::one() {
            return Err(Error::Config(format!("Cm must exceed 1, got {}", self.c_m)));
        }
        if self.epsilon.is_nan() || self.epsilon < T::zero() {
            return Err(Error::Config(format!(
                "eps must be non-negative, got {}",
                self.epsilon
            )));
        }
        let cells = self
            .initial_cells()
            .ok_or_else(|| Error::Config("N0^dim overflows".into()))?;
        match cells.checked_mul(self.m_rp) {
            Some(min) if self.n >= min => Ok(()),
            _ => Err(Error::Config(format!(
                "budget N = {} is below N0^dim * Mrp = {} * {}",
                self.n, cells, self.m_rp
            ))),
        }
    }
}

/// Per-stratum variance indicators with their sum and mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSet<T> {
    pub per_stratum: Vec<T>,
    pub total: T,
    pub mean: T,
}

/// `V_i = a_i^2 sigma2_i / n_i` with `n_i` taken from `plan`.
pub fn indicators<T: Scalar>(mesh: &Mesh<T>, plan: &AllocationPlan<T>) -> Result<IndicatorSet<T>> {
    if mesh.len() != plan.len() {
        return Err(Error::LengthMismatch {
            left: mesh.len(),
            right: plan.len(),
        });
    }
    let per_stratum = mesh
        .strata()
        .iter()
        .zip(&plan.counts)
        .enumerate()
        .map(|(i, (s, &n))| {
            if n == 0 {
                return Err(Error::InsufficientSamples { needed: 1, got: 0 });
            }
            Ok(variance_term(s.measure(), s.moments(i)?.sigma2_bar, n))
        })
        .collect::<Result<Vec<T>>>()?;
    let mut total = T::zero();
    for &v in &per_stratum {
        total += v;
    }
    let mean = total / T::of_usize(per_stratum.len());
    Ok(IndicatorSet {
        per_stratum,
        total,
        mean,
    })
}

/// Indices whose indicator strictly exceeds `c_m` times the mean.
pub fn mark<T: Scalar>(ind: &IndicatorSet<T>, c_m: T) -> Vec<usize> {
    let threshold = c_m * ind.mean;
    ind.per_stratum
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > threshold)
        .map(|(i, _)| i)
        .collect()
}

/// Bisect every axis of `s`, giving `2^d` children with
/// `max(floor(n / 2^d), m_rp)` points each. Children inherit the parent's
/// moments until they are resampled.
pub fn split<T: Scalar>(s: &Stratum<T>, m_rp: usize) -> Vec<Stratum<T>> {
    let rects = s.rect.bisect();
    let n = (s.n / rects.len()).max(m_rp);
    rects
        .into_iter()
        .map(|rect| Stratum {
            rect,
            n,
            depth: s.depth + 1,
            moments: s.moments,
        })
        .collect()
}

/// Replace every marked stratum, in place, by its children.
///
/// Unmarked strata keep their counts from `plan`; the returned plan lists
/// the counts of the new mesh in order.
pub fn refine<T: Scalar>(
    mesh: &Mesh<T>,
    plan: &AllocationPlan<T>,
    marks: &[usize],
    m_rp: usize,
) -> Result<(Mesh<T>, AllocationPlan<T>)> {
    if mesh.len() != plan.len() {
        return Err(Error::LengthMismatch {
            left: mesh.len(),
            right: plan.len(),
        });
    }
    let marked: BTreeSet<usize> = marks.iter().copied().collect();
    if let Some(&bad) = marked.iter().next_back().filter(|&&i| i >= mesh.len()) {
        return Err(Error::Config(format!(
            "mark {bad} out of range for {} strata",
            mesh.len()
        )));
    }
    let children = 1usize << mesh.dim();
    let mut strata = Vec::with_capacity(mesh.len() + marked.len() * (children - 1));
    let mut clamped = plan.clamped;
    for (i, (s, &n)) in mesh.strata().iter().zip(&plan.counts).enumerate() {
        let mut s = s.clone();
        s.n = n;
        if marked.contains(&i) {
            clamped |= n / children < m_rp;
            strata.extend(split(&s, m_rp));
        } else {
            strata.push(s);
        }
    }
    let mesh = Mesh::from_strata(mesh.dim(), strata)?;
    let counts = mesh.counts();
    let plan = AllocationPlan {
        actual_total: counts.iter().sum(),
        counts,
        delta_bar: plan.delta_bar,
        requested_total: plan.requested_total,
        clamped,
    };
    Ok((mesh, plan))
}

/// Outcome of one adaptive run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport<T> {
    /// Stratified estimate over the final sampled mesh.
    pub estimate: T,
    /// Level of the final sampled mesh (1 if the loop never ran).
    pub stop_level: usize,
    /// Estimated variance at each level, `stop_level` entries.
    pub variance_trace: Vec<T>,
    /// Total samples drawn at each level, aligned with `variance_trace`.
    pub samples_trace: Vec<usize>,
    /// Number of strata at each level, aligned with `variance_trace`.
    pub strata_trace: Vec<usize>,
    /// The final sampled mesh, with its moments.
    pub mesh_final: Mesh<T>,
    pub allocation_final: AllocationPlan<T>,
    /// Budget left unused by the equal initial split `floor(N / N0^d)`.
    pub discarded_initial: usize,
    pub wall_time: f64,
}

impl<T: Scalar> RunReport<T> {
    /// Everything except the wall time, for reproducibility checks.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.wall_time = other.wall_time;
        &a == other
    }
}

fn check_dims<T: Scalar, F: Integrand<T> + ?Sized>(cfg: &AdaptiveConfig<T>, f: &F) -> Result<()> {
    cfg.validate()?;
    if f.dim() != cfg.dim {
        return Err(Error::DimensionMismatch {
            expected: cfg.dim,
            got: f.dim(),
        });
    }
    Ok(())
}

fn adaptive_loop<T, F>(cfg: &AdaptiveConfig<T>, f: &F) -> Result<(RunReport<T>, StreamCounter)>
where
    T: Scalar,
    F: Integrand<T> + ?Sized,
{
    check_dims(cfg, f)?;
    let start = Instant::now();
    let cells = cfg.initial_cells().expect("validated");
    let per_cell = cfg.n / cells;
    let mut counter = StreamCounter::new(cfg.seed);

    let mut mesh = Mesh::regular_grid(cfg.dim, cfg.n0, per_cell)?;
    let mut plan = AllocationPlan::from_counts(mesh.counts(), cfg.n);
    sample_mesh(&mut mesh, f, &mut counter)?;
    let mut variance = stratified_variance_estimate(&mesh)?;

    let mut variance_trace = Vec::new();
    let mut samples_trace = Vec::new();
    let mut strata_trace = Vec::new();
    let mut level = 1;
    while level <= cfg.max_levels && variance > cfg.epsilon {
        plan = optimal_allocation(&mesh, cfg.n, cfg.m_rp)?;
        for (s, &n) in mesh.strata_mut().iter_mut().zip(&plan.counts) {
            s.n = n;
        }
        sample_mesh(&mut mesh, f, &mut counter)?;
        let ind = indicators(&mesh, &plan)?;
        variance = ind.total;
        variance_trace.push(variance);
        samples_trace.push(plan.actual_total);
        strata_trace.push(mesh.len());

        // The refinement after the last sampled level would never be used.
        if level < cfg.max_levels && variance > cfg.epsilon {
            let marks = mark(&ind, cfg.c_m);
            (mesh, plan) = refine(&mesh, &plan, &marks, cfg.m_rp)?;
        }
        level += 1;
    }
    if variance_trace.is_empty() {
        variance_trace.push(variance);
        samples_trace.push(plan.actual_total);
        strata_trace.push(mesh.len());
    }

    let report = RunReport {
        estimate: stratified_estimate(&mesh)?,
        stop_level: variance_trace.len(),
        variance_trace,
        samples_trace,
        strata_trace,
        mesh_final: mesh,
        allocation_final: plan,
        discarded_initial: cfg.n - per_cell * cells,
        wall_time: start.elapsed().as_secs_f64(),
    };
    Ok((report, counter))
}

/// One adaptive run from `cfg.seed`.
pub fn run_adaptive<T, F>(cfg: &AdaptiveConfig<T>, f: &F) -> Result<RunReport<T>>
where
    T: Scalar,
    F: Integrand<T> + ?Sized,
{
    adaptive_loop(cfg, f).map(|(r, _)| r)
}

/// Replicated estimates with their empirical mean and variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssayReport<T> {
    pub mean_estimate: T,
    pub variance_estimate: T,
    pub essays: Vec<T>,
    pub wall_time: f64,
    /// `1 / (wall_time * variance_estimate)`, infinite for zero variance.
    pub efficiency: T,
}

impl<T: Scalar> EssayReport<T> {
    /// Summarize replicate estimates taken in `wall_time` seconds.
    pub fn from_essays(essays: Vec<T>, wall_time: f64) -> Result<Self> {
        let (mean, var) = mean_and_variance(&essays)?;
        Ok(Self {
            mean_estimate: mean,
            variance_estimate: var,
            efficiency: efficiency(wall_time, var)?,
            essays,
            wall_time,
        })
    }

    pub fn same_outcome(&self, other: &Self) -> bool {
        self.mean_estimate == other.mean_estimate
            && self.variance_estimate == other.variance_estimate
            && self.essays == other.essays
    }
}

/// Mean and unbiased (`1/(n-1)`) variance, centered on the first value so
/// identical inputs give exactly that value and zero variance.
pub fn mean_and_variance<T: Scalar>(values: &[T]) -> Result<(T, T)> {
    if values.len() < 2 {
        return Err(Error::VarianceUndefined(values.len()));
    }
    let shift = values[0];
    let n = T::of_usize(values.len());
    let dev = values.iter().fold(T::zero(), |acc, &v| acc + (v - shift));
    let mean = shift + dev / n;
    let ss = values
        .iter()
        .fold(T::zero(), |acc, &v| acc + (v - mean) * (v - mean));
    Ok((mean, ss / (n - T::one())))
}

/// `1 / (wall_time * variance)`; infinite when the variance is zero.
pub fn efficiency<T: Scalar>(wall_time: f64, variance: T) -> Result<T> {
    if wall_time.is_nan() || wall_time <= 0.0 {
        return Err(Error::NonPositiveTime(wall_time));
    }
    if variance < T::zero() || variance.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "variance must be non-negative, got {variance}"
        )));
    }
    if variance == T::zero() {
        return Ok(T::infinity());
    }
    Ok(T::one() / (T::of(wall_time) * variance))
}

/// Re-estimate on a frozen mesh with its stored counts, strata drawing
/// from consecutive streams starting at `base`.
pub fn frozen_estimate<T, F>(mesh: &Mesh<T>, f: &F, base: RngStream) -> Result<T>
where
    T: Scalar,
    F: Integrand<T> + ?Sized,
{
    let mut fresh = mesh.clone();
    for (i, s) in fresh.strata_mut().iter_mut().enumerate() {
        s.moments = Some(sample_stratum(&s.rect, s.n, f, base.offset(i as u64))?);
    }
    stratified_estimate(&fresh)
}

/// Adaptive run followed by `n_ess - 1` further essays on its frozen mesh.
///
/// Essay 1 is the adaptive run's own estimate. Essay `e` draws stratum `i`
/// from stream `b + (e - 2) p + i`, where `b` is the first stream id unused
/// by the adaptive run and `p` the final number of strata; essays run in
/// parallel on the current rayon pool.
pub fn run_essays<T, F>(
    cfg: &AdaptiveConfig<T>,
    n_ess: usize,
    f: &F,
) -> Result<(EssayReport<T>, RunReport<T>)>
where
    T: Scalar,
    F: Integrand<T> + ?Sized,
{
    if n_ess < 2 {
        return Err(Error::VarianceUndefined(n_ess));
    }
    let start = Instant::now();
    let (run, mut counter) = adaptive_loop(cfg, f)?;
    let p = run.mesh_final.len();
    let base = counter.take(p * (n_ess - 1));
    let rest = (0..n_ess - 1)
        .into_par_iter()
        .map(|e| frozen_estimate(&run.mesh_final, f, base.offset((e * p) as u64)))
        .collect::<Result<Vec<T>>>()?;
    let mut essays = Vec::with_capacity(n_ess);
    essays.push(run.estimate);
    essays.extend(rest);
    let report = EssayReport::from_essays(essays, start.elapsed().as_secs_f64())?;
    Ok((report, run))
}

/// `n_ess` independent crude Monte Carlo estimates with `n` points each.
/// Replicate `e` uses stream `CRUDE_STREAM_BASE + e` of `seed`.
pub fn crude_essays<T, F>(f: &F, n: usize, n_ess: usize, seed: u64) -> Result<EssayReport<T>>
where
    T: Scalar,
    F: Integrand<T> + ?Sized,
{
    if n_ess < 2 {
        return Err(Error::VarianceUndefined(n_ess));
    }
    let start = Instant::now();
    let essays = (0..n_ess)
        .into_par_iter()
        .map(|e| {
            crude_mc(f, n, RngStream::new(seed, CRUDE_STREAM_BASE + e as u64)).map(|(est, _)| est)
        })
        .collect::<Result<Vec<T>>>()?;
    EssayReport::from_essays(essays, start.elapsed().as_secs_f64())
}
