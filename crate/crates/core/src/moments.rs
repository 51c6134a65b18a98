//! Per-stratum empirical moments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sample mean and biased (`1/n`) sample variance of `f` over one stratum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StratumMoments<T> {
    pub count: usize,
    pub mean_f: T,
    pub sigma2_bar: T,
}

impl<T: Scalar> StratumMoments<T> {
    pub fn sigma_bar(&self) -> T {
        self.sigma2_bar.sqrt()
    }
}

/// Streaming accumulator for [`StratumMoments`].
///
/// Sums are taken relative to the first value seen, so a constant input
/// yields its exact value as the mean and exactly zero variance.
#[derive(Debug, Clone, Copy)]
pub struct MomentAccumulator<T> {
    shift: T,
    count: usize,
    sum: T,
    sum_sq: T,
}

impl<T: Scalar> Default for MomentAccumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> MomentAccumulator<T> {
    pub fn new() -> Self {
        Self {
            shift: T::zero(),
            count: 0,
            sum: T::zero(),
            sum_sq: T::zero(),
        }
    }

    #[inline]
    pub fn push(&mut self, v: T) {
        if self.count == 0 {
            self.shift = v;
        }
        let dv = v - self.shift;
        self.count += 1;
        self.sum += dv;
        self.sum_sq += dv * dv;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(&self) -> Result<StratumMoments<T>> {
        if self.count == 0 {
            return Err(Error::NoSamples);
        }
        let n = T::of_usize(self.count);
        let m = self.sum / n;
        let var = self.sum_sq / n - m * m;
        Ok(StratumMoments {
            count: self.count,
            mean_f: self.shift + m,
            sigma2_bar: var.max(T::zero()),
        })
    }
}

/// Moments of an explicit list of values.
pub fn stratum_moments<T: Scalar>(values: &[T]) -> Result<StratumMoments<T>> {
    let mut acc = MomentAccumulator::new();
    values.iter().for_each(|&v| acc.push(v));
    acc.finish()
}
