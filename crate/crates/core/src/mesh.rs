//! Strata and meshes: exact partitions of the unit hypercube.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HyperRect;
use crate::moments::StratumMoments;
use crate::scalar::Scalar;

/// A box together with its sample budget and, once sampled, its moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratum<T> {
    pub rect: HyperRect<T>,
    /// Allocated sample count.
    pub n: usize,
    /// Number of bisections since the initial grid.
    pub depth: u32,
    pub moments: Option<StratumMoments<T>>,
}

impl<T: Scalar> Stratum<T> {
    pub fn new(rect: HyperRect<T>, n: usize) -> Self {
        Self {
            rect,
            n,
            depth: 0,
            moments: None,
        }
    }

    pub fn measure(&self) -> T {
        self.rect.measure()
    }

    pub fn moments(&self, index: usize) -> Result<&StratumMoments<T>> {
        self.moments
            .as_ref()
            .ok_or(Error::UnsampledStratum { index })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh<T> {
    dim: usize,
    strata: Vec<Stratum<T>>,
}

impl<T: Scalar> Mesh<T> {
    /// Build a mesh from strata, checking dimensions only. Use
    /// [`Mesh::check_partition`] to verify the tiling.
    pub fn from_strata(dim: usize, strata: Vec<Stratum<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if strata.is_empty() {
            return Err(Error::Config("a mesh needs at least one stratum".into()));
        }
        if let Some(s) = strata.iter().find(|s| s.rect.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.rect.dim(),
            });
        }
        Ok(Self { dim, strata })
    }

    /// The single stratum `[0,1)^d`.
    pub fn unit(dim: usize, n: usize) -> Self {
        Self {
            dim,
            strata: vec![Stratum::new(HyperRect::unit(dim), n)],
        }
    }

    /// Regular grid with `segments` cells per side, each allotted `n` samples.
    /// Cells are ordered with the first axis varying fastest.
    pub fn regular_grid(dim: usize, segments: usize, n: usize) -> Result<Self> {
        if dim == 0 || segments == 0 {
            return Err(Error::Config(
                "grid needs dim >= 1 and segments >= 1".into(),
            ));
        }
        let cells = segments
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::Config(format!("{segments}^{dim} cells overflows")))?;
        let mut idx = vec![0usize; dim];
        let mut strata = Vec::with_capacity(cells);
        for _ in 0..cells {
            strata.push(Stratum::new(HyperRect::grid_cell(&idx, segments), n));
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < segments {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(Self { dim, strata })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn strata(&self) -> &[Stratum<T>] {
        &self.strata
    }

    pub fn strata_mut(&mut self) -> &mut [Stratum<T>] {
        &mut self.strata
    }

    pub fn into_strata(self) -> Vec<Stratum<T>> {
        self.strata
    }

    pub fn measures(&self) -> Vec<T> {
        self.strata.iter().map(Stratum::measure).collect()
    }

    pub fn total_measure(&self) -> T {
        self.strata.iter().map(Stratum::measure).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.strata.iter().map(|s| s.n).collect()
    }

    pub fn total_count(&self) -> usize {
        self.strata.iter().map(|s| s.n).sum()
    }

    pub fn max_depth(&self) -> u32 {
        self.strata.iter().map(|s| s.depth).max().unwrap_or(0)
    }

    pub fn is_sampled(&self) -> bool {
        self.strata.iter().all(|s| s.moments.is_some())
    }

    /// Indices of every stratum containing `x`. A valid partition returns
    /// exactly one index for any point of `[0,1)^d`.
    pub fn locate_all(&self, x: &[T]) -> Vec<usize> {
        self.strata
            .iter()
            .enumerate()
            .filter(|(_, s)| s.rect.contains(x))
            .map(|(i, _)| i)
            .collect()
    }

    /// Check the measures sum to one within `tol` and that no two strata
    /// overlap. The overlap check is quadratic in the number of strata.
    pub fn check_partition(&self, tol: T) -> Result<()> {
        let total = self.total_measure();
        if (total - T::one()).abs() > tol {
            return Err(Error::Config(format!("measures sum to {total}, not 1")));
        }
        for (i, a) in self.strata.iter().enumerate() {
            for (j, b) in self.strata.iter().enumerate().skip(i + 1) {
                if a.rect.overlaps(&b.rect) {
                    return Err(Error::Config(format!("strata {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }
}
