#![allow(dead_code)]

use amc::{HyperRect, Mesh, Stratum, StratumMoments};

/// Composite Simpson rule on `[a, b]` with `intervals` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    assert!(intervals.is_multiple_of(2));
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Midpoint rule on `[a, b]` with `k` cells.
pub fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, k: usize) -> f64 {
    let h = (b - a) / k as f64;
    (0..k).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// A 1-D mesh with given interval ends and per-stratum moments.
pub fn mesh_1d(ends: &[f64], moments: &[(usize, f64, f64)]) -> Mesh<f64> {
    let strata = ends
        .windows(2)
        .zip(moments)
        .map(|(w, &(n, mean, s2))| {
            let mut s = Stratum::new(HyperRect::new(vec![w[0]], vec![w[1]]).unwrap(), n);
            s.moments = Some(StratumMoments {
                count: n,
                mean_f: mean,
                sigma2_bar: s2,
            });
            s
        })
        .collect();
    Mesh::from_strata(1, strata).unwrap()
}

/// Every composition of `total` into `parts` positive integers.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=total - (parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Squared distance range `[min, max]` from the origin over a box.
pub fn r2_range(lower: &[f64], upper: &[f64]) -> (f64, f64) {
    let min = lower.iter().map(|l| l * l).sum();
    let max = upper.iter().map(|u| u * u).sum();
    (min, max)
}

/// Print one acceptance line and return whether it passed.
pub fn report(id: usize, name: &str, pass: bool, detail: String) -> bool {
    println!(
        "[{}] criterion {id}: {name} -- {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}
