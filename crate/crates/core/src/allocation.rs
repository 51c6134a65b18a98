//! Integer sample allocation across strata.
//!
//! Real-valued targets are integerized by largest remainder so the
//! unclamped counts sum to the requested budget exactly (ties go to the
//! lower stratum index). Counts are then raised to the per-stratum minimum,
//! which may push the actual total above the budget.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationPlan<T> {
    pub counts: Vec<usize>,
    /// Normalizer `(1/N) sum_i a_i sigma_i`; zero for proportional plans.
    pub delta_bar: T,
    pub requested_total: usize,
    pub actual_total: usize,
    /// Whether any count was raised to the minimum.
    pub clamped: bool,
}

impl<T: Scalar> AllocationPlan<T> {
    /// Wrap explicit counts, e.g. the equal counts of an initial grid.
    pub fn from_counts(counts: Vec<usize>, requested_total: usize) -> Self {
        let actual_total = counts.iter().sum();
        Self {
            counts,
            delta_bar: T::zero(),
            requested_total,
            actual_total,
            clamped: false,
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Round non-negative `targets` to integers summing to `total`.
///
/// Floors first, then hands the shortfall out one unit at a time in order
/// of decreasing fractional part, lower index first on ties.
pub fn largest_remainder<T: Scalar>(targets: &[T], total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = targets
        .iter()
        .map(|&t| t.max(T::zero()).floor().to_usize().unwrap_or(0))
        .collect();
    let assigned: usize = counts.iter().sum();
    if assigned >= total || counts.is_empty() {
        return counts;
    }
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&i, &j| {
        let fi = targets[i] - targets[i].floor();
        let fj = targets[j] - targets[j].floor();
        fj.partial_cmp(&fi)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut remaining = total - assigned;
    while remaining > 0 {
        for &i in &order {
            if remaining == 0 {
                break;
            }
            counts[i] += 1;
            remaining -= 1;
        }
    }
    counts
}

fn clamp_plan<T: Scalar>(
    counts: Vec<usize>,
    m_rp: usize,
    delta_bar: T,
    n: usize,
) -> AllocationPlan<T> {
    let clamped = counts.iter().any(|&c| c < m_rp);
    let counts: Vec<usize> = counts.into_iter().map(|c| c.max(m_rp)).collect();
    let actual_total = counts.iter().sum();
    AllocationPlan {
        counts,
        delta_bar,
        requested_total: n,
        actual_total,
        clamped,
    }
}

fn check_budget(n: usize, m_rp: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Config("sample budget N must be at least 1".into()));
    }
    if m_rp < 1 {
        return Err(Error::Config(
            "minimum points per stratum must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `n_i = N a_i`, integerized, then raised to `m_rp`.
pub fn proportional_allocation<T: Scalar>(
    mesh: &Mesh<T>,
    n: usize,
    m_rp: usize,
) -> Result<AllocationPlan<T>> {
    check_budget(n, m_rp)?;
    let nn = T::of_usize(n);
    let targets: Vec<T> = mesh.strata().iter().map(|s| nn * s.measure()).collect();
    Ok(clamp_plan(
        largest_remainder(&targets, n),
        m_rp,
        T::zero(),
        n,
    ))
}

/// Empirical optimal allocation `n_i = a_i sigma_i / delta`, with
/// `delta = (1/N) sum_i a_i sigma_i` and `sigma_i` the stratum's sample
/// standard deviation. Falls back to proportional allocation when every
/// stratum has zero sample variance.
pub fn optimal_allocation<T: Scalar>(
    mesh: &Mesh<T>,
    n: usize,
    m_rp: usize,
) -> Result<AllocationPlan<T>> {
    check_budget(n, m_rp)?;
    let weights = mesh
        .strata()
        .iter()
        .enumerate()
        .map(|(i, s)| Ok(s.measure() * s.moments(i)?.sigma_bar()))
        .collect::<Result<Vec<T>>>()?;
    let nn = T::of_usize(n);
    let delta_bar = weights.iter().copied().sum::<T>() / nn;
    if delta_bar <= T::zero() {
        return proportional_allocation(mesh, n, m_rp);
    }
    let targets: Vec<T> = weights.iter().map(|&w| w / delta_bar).collect();
    Ok(clamp_plan(
        largest_remainder(&targets, n),
        m_rp,
        delta_bar,
        n,
    ))
}

/// `V(n) = sum_i a_i^2 sigma2_i / n_i` for arbitrary counts.
pub fn allocation_variance<T: Scalar>(measures: &[T], sigma2: &[T], counts: &[T]) -> T {
    measures
        .iter()
        .zip(sigma2)
        .zip(counts)
        .map(|((&a, &s2), &c)| a * a * s2 / c)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::HyperRect;
    use crate::mesh::Stratum;
    use crate::moments::StratumMoments;

    /// 1-D mesh with the given widths and (optionally) sample deviations.
    fn mesh_1d(widths: &[f64], sigma: Option<&[f64]>) -> Mesh<f64> {
        let mut lo = 0.0;
        let strata = widths
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let hi = if i + 1 == widths.len() { 1.0 } else { lo + w };
                let mut s = Stratum::new(HyperRect::new(vec![lo], vec![hi]).unwrap(), 1);
                if let Some(sig) = sigma {
                    s.moments = Some(StratumMoments {
                        count: 4,
                        mean_f: 0.0,
                        sigma2_bar: sig[i] * sig[i],
                    });
                }
                lo = hi;
                s
            })
            .collect();
        Mesh::from_strata(1, strata).unwrap()
    }

    #[test]
    fn proportional_examples() {
        let p = proportional_allocation(&mesh_1d(&[0.25; 4], None), 100, 2).unwrap();
        assert_eq!(p.counts, vec![25; 4]);
        let p = proportional_allocation(&mesh_1d(&[0.5, 0.25, 0.25], None), 8, 2).unwrap();
        assert_eq!(p.counts, vec![4, 2, 2]);
        let p = proportional_allocation(&mesh_1d(&[0.7, 0.3], None), 10, 2).unwrap();
        assert_eq!(p.counts, vec![7, 3]);
        assert_eq!(p.actual_total, 10);
        assert_eq!(p.delta_bar, 0.0);
        assert!(proportional_allocation(&mesh_1d(&[1.0], None), 0, 2).is_err());
    }

    #[test]
    fn proportional_three_way_split_conserves_total() {
        let widths = [1.0 / 3.0; 3];
        let p = proportional_allocation(&mesh_1d(&widths, None), 10, 1).unwrap();
        assert_eq!(p.actual_total, 10);
        assert!(p.counts.iter().all(|&c| c == 3 || c == 4));
    }

    #[test]
    fn optimal_examples() {
        let p = optimal_allocation(&mesh_1d(&[0.5, 0.5], Some(&[0.3, 0.3])), 10, 2).unwrap();
        assert_eq!(p.counts, vec![5, 5]);

        let p = optimal_allocation(&mesh_1d(&[0.25, 0.75], Some(&[2.0, 1.0])), 10, 2).unwrap();
        assert_eq!(p.delta_bar, 0.125);
        assert_eq!(p.counts, vec![4, 6]);
        assert!(!p.clamped);

        let p = optimal_allocation(&mesh_1d(&[0.5, 0.5], Some(&[0.0, 1.0])), 10, 2).unwrap();
        assert_eq!(p.counts, vec![2, 10]);
        assert_eq!(p.actual_total, 12);
        assert!(p.clamped);
    }

    #[test]
    fn zero_variance_falls_back_to_proportional() {
        let m = mesh_1d(&[0.5, 0.25, 0.25], Some(&[0.0, 0.0, 0.0]));
        let p = optimal_allocation(&m, 8, 1).unwrap();
        assert_eq!(p, proportional_allocation(&m, 8, 1).unwrap());
    }

    #[test]
    fn optimal_requires_moments() {
        assert_eq!(
            optimal_allocation(&mesh_1d(&[0.5, 0.5], None), 10, 2),
            Err(Error::UnsampledStratum { index: 0 })
        );
    }

    #[test]
    fn equal_variance_equal_measure_is_proportional() {
        let m = mesh_1d(&[0.125; 8], Some(&[0.7; 8]));
        assert_eq!(
            optimal_allocation(&m, 1003, 2).unwrap().counts,
            proportional_allocation(&m, 1003, 2).unwrap().counts
        );
    }

    #[test]
    fn largest_remainder_ties_go_to_lower_index() {
        assert_eq!(largest_remainder(&[1.5, 1.5, 1.0], 4), vec![2, 1, 1]);
        assert_eq!(largest_remainder(&[0.2, 0.9, 0.9], 2), vec![0, 1, 1]);
        assert_eq!(largest_remainder::<f64>(&[], 3), Vec::<usize>::new());
    }

    proptest::proptest! {
        #[test]
        fn unclamped_totals_are_exact(
            sig in proptest::collection::vec(0.01f64..5.0, 1..12),
            n in 1usize..5000,
        ) {
            let w = vec![1.0 / sig.len() as f64; sig.len()];
            let p = optimal_allocation(&mesh_1d(&w, Some(&sig)), n, 1).unwrap();
            let raw: usize = p.counts.iter().sum();
            proptest::prop_assert!(p.counts.iter().all(|&c| c >= 1));
            if !p.clamped {
                proptest::prop_assert_eq!(raw, n);
            }
            proptest::prop_assert_eq!(raw, p.actual_total);
        }
    }
}
