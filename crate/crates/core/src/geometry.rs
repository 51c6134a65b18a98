//! Half-open boxes inside the unit hypercube and uniform sampling over them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// Axis-aligned box `[lower, upper)` contained in `[0,1]^d`.
///
/// Membership is half-open on every axis, so the children produced by
/// [`HyperRect::bisect`] tile their parent with no shared points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperRect<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> HyperRect<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        for (axis, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo >= T::zero() && lo < hi && hi <= T::one()) {
                return Err(Error::InvalidRect { axis });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            lower: vec![T::zero(); dim],
            upper: vec![T::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    /// Lebesgue measure: the product of side lengths.
    pub fn measure(&self) -> T {
        self.lower
            .iter()
            .zip(&self.upper)
            .fold(T::one(), |acc, (&lo, &hi)| acc * (hi - lo))
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v < hi)
    }

    pub fn center(&self) -> Vec<T> {
        let half = T::of(0.5);
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| (lo + hi) * half)
            .collect()
    }

    /// True when the interiors overlap.
    pub fn overlaps(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && (0..self.dim())
                .all(|k| self.lower[k] < other.upper[k] && other.lower[k] < self.upper[k])
    }

    /// Cell `(i_1, .., i_d)` of the regular grid with `segments` cells per side.
    pub fn grid_cell(index: &[usize], segments: usize) -> Self {
        let s = T::of_usize(segments);
        let lower = index.iter().map(|&i| T::of_usize(i) / s).collect();
        let upper = index
            .iter()
            .map(|&i| {
                if i + 1 == segments {
                    T::one()
                } else {
                    T::of_usize(i + 1) / s
                }
            })
            .collect();
        Self { lower, upper }
    }

    /// The `2^d` congruent boxes obtained by halving every axis.
    ///
    /// Child `c` takes the upper half on axis `k` iff bit `k` of `c` is set.
    pub fn bisect(&self) -> Vec<Self> {
        let d = self.dim();
        let mid = self.center();
        (0..1usize << d)
            .map(|c| {
                let mut lower = self.lower.clone();
                let mut upper = self.upper.clone();
                for k in 0..d {
                    if c >> k & 1 == 1 {
                        lower[k] = mid[k];
                    } else {
                        upper[k] = mid[k];
                    }
                }
                Self { lower, upper }
            })
            .collect()
    }

    /// Overwrite `out` with one uniform point of the box.
    ///
    /// `lower + u * width` can round up to `upper`; such coordinates are
    /// redrawn so the half-open convention holds exactly.
    #[inline]
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [T]) {
        for (k, slot) in out.iter_mut().enumerate() {
            let (lo, hi) = (self.lower[k], self.upper[k]);
            let width = hi - lo;
            *slot = loop {
                let x = lo + T::sample_unit(rng) * width;
                if x < hi {
                    break x;
                }
            };
        }
    }
}

/// `k` i.i.d. uniform points of `rect`, drawn from `stream`.
pub fn sample_uniform<T: Scalar>(rect: &HyperRect<T>, k: usize, stream: RngStream) -> Vec<Vec<T>> {
    let mut rng = stream.rng();
    (0..k)
        .map(|_| {
            let mut p = vec![T::zero(); rect.dim()];
            rect.sample_into(&mut rng, &mut p);
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(lo: &[f64], hi: &[f64]) -> HyperRect<f64> {
        HyperRect::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    #[test]
    fn measure_examples() {
        assert_eq!(HyperRect::<f64>::unit(3).measure(), 1.0);
        assert_eq!(rect(&[0.0, 0.0], &[0.5, 0.5]).measure(), 0.25);
        assert_eq!(rect(&[0.25, 0.5], &[0.5, 1.0]).measure(), 0.125);
    }

    #[test]
    fn rejects_degenerate_boxes() {
        assert_eq!(
            HyperRect::new(vec![0.5, 0.0], vec![0.5, 1.0]),
            Err(Error::InvalidRect { axis: 0 })
        );
        assert!(HyperRect::new(vec![0.0], vec![1.5]).is_err());
        assert!(HyperRect::new(vec![-0.1], vec![0.5]).is_err());
        assert!(HyperRect::<f64>::new(vec![], vec![]).is_err());
        assert!(HyperRect::new(vec![0.0, 0.0], vec![1.0]).is_err());
    }

    #[test]
    fn half_open_membership() {
        let r = rect(&[0.0, 0.0], &[0.5, 0.5]);
        assert!(r.contains(&[0.0, 0.49]));
        assert!(!r.contains(&[0.5, 0.1]));
        assert!(!r.contains(&[0.1]));
    }

    #[test]
    fn samples_stay_inside() {
        let r = rect(&[0.0, 0.0], &[1.0, 1.0]);
        let pts = sample_uniform(&r, 5, RngStream::new(1, 0));
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|p| r.contains(p)));

        let r = rect(&[0.5, 0.0], &[0.75, 0.25]);
        let pts = sample_uniform(&r, 1000, RngStream::new(1, 1));
        assert!(pts.iter().all(|p| r.contains(p)));
    }

    #[test]
    fn f32_samples_stay_inside_narrow_box() {
        let r = HyperRect::<f32>::new(vec![0.5, 0.999], vec![0.500_061, 1.0]).unwrap();
        let pts = sample_uniform(&r, 20_000, RngStream::new(2, 0));
        assert!(pts.iter().all(|p| r.contains(p)));
    }

    #[test]
    fn empirical_mean_of_first_coordinate() {
        // 3-sigma bound for k = 1e5 is 3 / sqrt(12 k) ~= 0.0027
        let k = 100_000;
        let pts = sample_uniform(&HyperRect::<f64>::unit(2), k, RngStream::new(7, 0));
        let mean = pts.iter().map(|p| p[0]).sum::<f64>() / k as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn bisect_tiles_parent() {
        let r = rect(&[0.0, 0.5, 0.25], &[0.5, 1.0, 0.75]);
        let kids = r.bisect();
        assert_eq!(kids.len(), 8);
        let total: f64 = kids.iter().map(HyperRect::measure).sum();
        assert_eq!(total, r.measure());
        for (i, a) in kids.iter().enumerate() {
            assert_eq!(a.measure(), r.measure() / 8.0);
            for b in &kids[i + 1..] {
                assert!(!a.overlaps(b));
            }
        }
    }

    #[test]
    fn grid_cells_reach_one() {
        let c = HyperRect::<f64>::grid_cell(&[2, 0], 3);
        assert_eq!(c.upper()[0], 1.0);
        assert_eq!(c.lower()[1], 0.0);
    }
}
