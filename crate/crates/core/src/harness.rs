//! Crude-vs-adaptive sweeps over the sample budget.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::adaptive::{crude_essays, run_essays, AdaptiveConfig, EssayReport};
use crate::error::{Error, Result};
use crate::integrands::NamedIntegrand;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Budgets to sweep, strictly increasing.
    pub n_values: Vec<usize>,
    pub scenario: NamedIntegrand,
    /// Template; `n` is overwritten per row.
    pub cfg: AdaptiveConfig<f64>,
    pub n_ess: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::Config("sweep needs at least one N".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "sweep values must be strictly increasing".into(),
            ));
        }
        if self.n_ess < 2 {
            return Err(Error::VarianceUndefined(self.n_ess));
        }
        Ok(())
    }
}

/// One budget's crude and adaptive results.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub mc: EssayReport<f64>,
    pub amc: EssayReport<f64>,
    pub exact: Option<f64>,
}

pub const CSV_HEADER: &str = "N,I_MC,I_AMC,E_MC,E_AMC,V_MC,V_AMC,T_MC,T_AMC,Eff_MC,Eff_AMC";

/// Relative error `(I - estimate) / I`; undefined for unknown or zero `I`.
pub fn relative_error(exact: Option<f64>, estimate: f64) -> Option<f64> {
    exact.filter(|&i| i != 0.0).map(|i| (i - estimate) / i)
}

impl SweepRow {
    pub fn e_mc(&self) -> Option<f64> {
        relative_error(self.exact, self.mc.mean_estimate)
    }

    pub fn e_amc(&self) -> Option<f64> {
        relative_error(self.exact, self.amc.mean_estimate)
    }
}

/// Run crude replicates and adaptive essays for every budget in the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.n_values
        .iter()
        .map(|&n| {
            let cfg = AdaptiveConfig {
                n,
                ..spec.cfg.clone()
            };
            let mc = crude_essays(&spec.scenario, n, spec.n_ess, cfg.seed)?;
            let (amc, _) = run_essays(&cfg, spec.n_ess, &spec.scenario)?;
            Ok(SweepRow {
                n,
                mc,
                amc,
                exact: spec.scenario.exact_value,
            })
        })
        .collect()
}

/// 17 significant digits, `inf` for infinities.
pub fn fmt_num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        debug_assert!(!x.is_nan(), "NaN reached the output layer");
        format!("{x:.16e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            fmt_num(r.mc.mean_estimate),
            fmt_num(r.amc.mean_estimate),
            fmt_opt(r.e_mc()),
            fmt_opt(r.e_amc()),
            fmt_num(r.mc.variance_estimate),
            fmt_num(r.amc.variance_estimate),
            fmt_num(r.mc.wall_time),
            fmt_num(r.amc.wall_time),
            fmt_num(r.mc.efficiency),
            fmt_num(r.amc.efficiency),
        );
    }
    out
}

fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(fmt_num(x))
    }
}

fn json_opt(x: Option<f64>) -> Value {
    x.map(json_num).unwrap_or(Value::Null)
}

pub fn rows_to_json(rows: &[SweepRow]) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "N": r.n,
                "I_MC": json_num(r.mc.mean_estimate),
                "I_AMC": json_num(r.amc.mean_estimate),
                "E_MC": json_opt(r.e_mc()),
                "E_AMC": json_opt(r.e_amc()),
                "V_MC": json_num(r.mc.variance_estimate),
                "V_AMC": json_num(r.amc.variance_estimate),
                "T_MC": json_num(r.mc.wall_time),
                "T_AMC": json_num(r.amc.wall_time),
                "Eff_MC": json_num(r.mc.efficiency),
                "Eff_AMC": json_num(r.amc.efficiency),
            })
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("rows serialize")
}

pub fn render(rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Csv => rows_to_csv(rows),
        Format::Json => rows_to_json(rows),
    }
}
