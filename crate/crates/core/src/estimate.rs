//! Crude and stratified Monte Carlo estimators.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::HyperRect;
use crate::integrand::Integrand;
use crate::mesh::Mesh;
use crate::moments::{MomentAccumulator, StratumMoments};
use crate::rng::{RngStream, StreamCounter};
use crate::scalar::Scalar;

/// Draw `n` uniform points of `rect` from `stream` and accumulate `f`.
pub fn sample_stratum<T, F>(
    rect: &HyperRect<T>,
    n: usize,
    f: &F,
    stream: RngStream,
) -> Result<StratumMoments<T>>
where
    T: Scalar,
    F: Integrand<T> + ?Sized,
{
    let mut rng = stream.rng();
    let mut x = vec![T::zero(); rect.dim()];
    let mut acc = MomentAccumulator::new();
    for _ in 0..n {
        rect.sample_into(&mut rng, &mut x);
        acc.push(f.eval(&x));
    }
    acc.finish()
}

/// Sample every stratum with its allocated count and store the moments.
///
/// Stratum `i` uses stream `counter + i`; the counter advances by the
/// number of strata. Strata are sampled in parallel on the current rayon
/// pool, and the result does not depend on the thread count.
pub fn sample_mesh<T, F>(mesh: &mut Mesh<T>, f: &F, counter: &mut StreamCounter) -> Result<()>
where
    T: Scalar,
    F: Integrand<T> + ?Sized,
{
    if f.dim() != mesh.dim() {
        return Err(Error::DimensionMismatch {
            expected: mesh.dim(),
            got: f.dim(),
        });
    }
    let base = counter.take(mesh.len());
    let moments: Vec<Result<StratumMoments<T>>> = mesh
        .strata()
        .par_iter()
        .with_min_len(16)
        .enumerate()
        .map(|(i, s)| sample_stratum(&s.rect, s.n, f, base.offset(i as u64)))
        .collect();
    for (s, m) in mesh.strata_mut().iter_mut().zip(moments) {
        s.moments = Some(m?);
    }
    Ok(())
}

/// Plain Monte Carlo over `[0,1)^d` with `n` points from one stream.
/// Returns the estimate and the biased sample variance of `f`.
pub fn crude_mc<T, F>(f: &F, n: usize, stream: RngStream) -> Result<(T, T)>
where
    T: Scalar,
    F: Integrand<T> + ?Sized,
{
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let m = sample_stratum(&HyperRect::unit(f.dim()), n, f, stream)?;
    Ok((m.mean_f, m.sigma2_bar))
}

/// `a^2 sigma^2 / n`: one stratum's share of the estimator variance.
#[inline]
pub(crate) fn variance_term<T: Scalar>(measure: T, sigma2: T, n: usize) -> T {
    measure * measure * sigma2 / T::of_usize(n)
}

/// `sum_i a_i * mean_i` over a sampled mesh.
///
/// Evaluated as `m0 * sum_i a_i + sum_i a_i (mean_i - m0)` with `m0` the
/// first stratum's mean, which is exact for a constant integrand whenever
/// the measures sum to exactly one.
pub fn stratified_estimate<T: Scalar>(mesh: &Mesh<T>) -> Result<T> {
    let shift = mesh.strata()[0].moments(0)?.mean_f;
    let mut measure = T::zero();
    let mut dev = T::zero();
    for (i, s) in mesh.strata().iter().enumerate() {
        let a = s.measure();
        measure += a;
        dev += a * (s.moments(i)?.mean_f - shift);
    }
    Ok(shift * measure + dev)
}

/// `sum_i a_i^2 sigma2_i / n_i` over a sampled mesh, with `n_i` the
/// stratum's allocated count.
pub fn stratified_variance_estimate<T: Scalar>(mesh: &Mesh<T>) -> Result<T> {
    let mut total = T::zero();
    for (i, s) in mesh.strata().iter().enumerate() {
        let m = s.moments(i)?;
        if s.n == 0 {
            return Err(Error::InsufficientSamples { needed: 1, got: 0 });
        }
        total += variance_term(s.measure(), m.sigma2_bar, s.n);
    }
    Ok(total)
}
