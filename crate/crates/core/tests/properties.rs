//! Statistical and structural properties of the adaptive integrator.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use amc::{
    indicators, mark, registry_lookup, run_adaptive, run_essays, sample_mesh, sample_uniform,
    stratified_estimate, stratified_variance_estimate, Config64, HyperRect, IndicatorSet, Mesh,
    NamedIntegrand, RngStream, StreamCounter,
};
use proptest::prelude::*;

fn gauss3d() -> NamedIntegrand {
    registry_lookup("gauss3d", &BTreeMap::from([("alpha".to_string(), 50.0)])).unwrap()
}

#[test]
fn partition_holds_at_every_level() {
    // A run capped at L stops on exactly the level-L mesh of a longer run.
    for f in [NamedIntegrand::disc(), gauss3d()] {
        for levels in 1..=6 {
            let cfg = Config64::new(f.dim, 10_000)
                .with_levels(levels)
                .with_seed(3);
            let r = run_adaptive(&cfg, &f).unwrap();
            let m = &r.mesh_final;
            assert!((m.total_measure() - 1.0).abs() <= 1e-12);
            m.check_partition(1e-12).unwrap();
            let probes = sample_uniform(
                &HyperRect::unit(f.dim),
                2_000,
                RngStream::new(levels as u64, 0),
            );
            assert!(probes.iter().all(|p| m.locate_all(p).len() == 1));
        }
    }
}

#[test]
fn capped_runs_are_prefixes_of_longer_runs() {
    let f = NamedIntegrand::disc();
    let long = run_adaptive(&Config64::new(2, 5_000).with_levels(5).with_seed(8), &f).unwrap();
    let short = run_adaptive(&Config64::new(2, 5_000).with_levels(3).with_seed(8), &f).unwrap();
    assert_eq!(&long.variance_trace[..3], &short.variance_trace[..]);
    assert_eq!(&long.strata_trace[..3], &short.strata_trace[..]);
}

#[test]
fn stratified_estimate_is_unbiased_on_fixed_grid() {
    let f = NamedIntegrand::disc();
    let estimates: Vec<f64> = (0..200u64)
        .map(|seed| {
            let mut mesh = Mesh::regular_grid(2, 4, 50).unwrap();
            sample_mesh(&mut mesh, &f, &mut StreamCounter::new(seed)).unwrap();
            stratified_estimate(&mesh).unwrap()
        })
        .collect();
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let sd = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let se = sd / n.sqrt();
    assert!((mean - FRAC_PI_4).abs() < 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn variance_trace_mostly_decreases() {
    let f = NamedIntegrand::disc();
    let good_seeds = (0..10u64)
        .filter(|&seed| {
            let r =
                run_adaptive(&Config64::new(2, 10_000).with_levels(6).with_seed(seed), &f).unwrap();
            assert_eq!(r.variance_trace.len(), 6);
            let down = r.variance_trace.windows(2).filter(|w| w[1] <= w[0]).count();
            down >= 4
        })
        .count();
    assert!(good_seeds >= 8, "{good_seeds}/10 seeds");
}

#[test]
fn indicator_total_matches_variance_estimate() {
    for f in [NamedIntegrand::disc(), gauss3d()] {
        let r = run_adaptive(
            &Config64::new(f.dim, 20_000).with_levels(4).with_seed(1),
            &f,
        )
        .unwrap();
        let ind = indicators(&r.mesh_final, &r.allocation_final).unwrap();
        let v = stratified_variance_estimate(&r.mesh_final).unwrap();
        assert_eq!(ind.total.to_bits(), v.to_bits());
        assert_eq!(
            ind.total.to_bits(),
            r.variance_trace.last().unwrap().to_bits()
        );
        assert!((ind.mean - ind.total / ind.per_stratum.len() as f64).abs() <= 1e-12);
    }
}

#[test]
fn budget_accounting() {
    for f in [NamedIntegrand::disc(), gauss3d()] {
        let cfg = Config64::new(f.dim, 10_000).with_levels(6).with_seed(5);
        let r = run_adaptive(&cfg, &f).unwrap();
        for (&total, &p) in r.samples_trace.iter().zip(&r.strata_trace) {
            assert!(total >= p * cfg.m_rp);
            assert!(total >= cfg.n);
        }
        let plan = &r.allocation_final;
        assert_eq!(plan.actual_total, plan.counts.iter().sum::<usize>());
        assert!(plan.counts.iter().all(|&c| c >= cfg.m_rp));
        if !plan.clamped {
            assert_eq!(plan.actual_total, cfg.n);
        }
        assert_eq!(r.mesh_final.counts(), plan.counts);
    }
}

#[test]
fn essay_mean_is_arithmetic_mean() {
    let f = NamedIntegrand::disc();
    let (rep, run) = run_essays(&Config64::new(2, 4_000).with_seed(2), 25, &f).unwrap();
    assert_eq!(rep.essays.len(), 25);
    assert_eq!(rep.essays[0], run.estimate);
    let mean = rep.essays.iter().sum::<f64>() / 25.0;
    assert!((rep.mean_estimate - mean).abs() < 1e-12);
    assert!(rep.variance_estimate > 0.0 && rep.efficiency.is_finite());
}

#[test]
fn deeper_runs_have_more_strata() {
    let f = NamedIntegrand::disc();
    let strata = |l| {
        run_adaptive(&Config64::new(2, 10_000).with_levels(l).with_seed(42), &f)
            .unwrap()
            .mesh_final
            .len()
    };
    assert!(strata(6) > strata(2));
}

proptest! {
    #[test]
    fn uniform_indicators_never_mark(v in 0.0f64..10.0, p in 1usize..200, c_m in 1.0001f64..5.0) {
        let per_stratum = vec![v; p];
        let total: f64 = per_stratum.iter().sum();
        let ind = IndicatorSet { per_stratum, total, mean: total / p as f64 };
        prop_assert!(mark(&ind, c_m).is_empty());
    }

    #[test]
    fn marks_are_exactly_the_large_indicators(vals in prop::collection::vec(0.0f64..1.0, 1..50), c_m in 1.01f64..4.0) {
        let total: f64 = vals.iter().sum();
        let mean = total / vals.len() as f64;
        let ind = IndicatorSet { per_stratum: vals.clone(), total, mean };
        let marks = mark(&ind, c_m);
        for (i, &v) in vals.iter().enumerate() {
            prop_assert_eq!(marks.contains(&i), v > c_m * mean);
        }
    }
}
