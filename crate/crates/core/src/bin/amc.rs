use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use amc::harness::{self, fmt_num, relative_error, Format, SweepSpec};
use amc::{registry_lookup, run_adaptive, run_essays, AdaptiveConfig, MeshDump, NamedIntegrand};

#[derive(Parser)]
#[command(
    name = "amc",
    version,
    about = "Adaptive stratified Monte Carlo integration on [0,1)^d"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the adaptive integrator once and print the estimate.
    Integrate(RunArgs),
    /// Sweep N, comparing crude MC replicates against adaptive essays.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated list of budgets, strictly increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        sweep: Vec<usize>,
        #[arg(long = "Ness", default_value_t = 100)]
        n_ess: usize,
    },
    /// Adaptive run followed by essays on the frozen mesh.
    Essays {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long = "Ness", default_value_t = 100)]
        n_ess: usize,
    },
    /// Run the adaptive integrator and write the final mesh as JSON.
    MeshDump(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Integrand: const, disc, gauss2d, gauss3d, gaussNd.
    #[arg(long = "fn")]
    func: String,
    /// Gaussian width; must be positive.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Value of the constant integrand.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Dimension, for const and gaussNd.
    #[arg(long)]
    dim: Option<usize>,
    /// Sample budget per level.
    #[arg(long = "N", default_value_t = 10_000)]
    n: usize,
    /// Maximum number of refinement levels.
    #[arg(long = "L", default_value_t = 4)]
    levels: usize,
    /// Stop once the variance estimate drops to this.
    #[arg(long = "eps", default_value_t = 0.0, allow_negative_numbers = true)]
    eps: f64,
    /// Marking factor: split strata whose indicator exceeds Cm times the mean.
    #[arg(long = "Cm", default_value_t = 2.0)]
    c_m: f64,
    /// Minimum points per stratum.
    #[arg(long = "Mrp", default_value_t = 2)]
    m_rp: usize,
    /// Initial grid has N0 cells per axis.
    #[arg(long = "N0", default_value_t = 4)]
    n0: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Cap on worker threads; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn integrand(&self) -> anyhow::Result<NamedIntegrand> {
        let mut params = BTreeMap::new();
        if let Some(a) = self.alpha {
            params.insert("alpha".to_string(), a);
        }
        if let Some(c) = self.c {
            params.insert("c".to_string(), c);
        }
        if let Some(d) = self.dim {
            params.insert("dim".to_string(), d as f64);
        }
        let f = registry_lookup(&self.func, &params)?;
        if let Some(d) = self.dim.filter(|&d| d != f.dim) {
            anyhow::bail!("`{}` is {}-dimensional, got --dim {d}", f.name, f.dim);
        }
        Ok(f)
    }

    fn config(&self, dim: usize) -> AdaptiveConfig<f64> {
        AdaptiveConfig {
            n: self.n,
            max_levels: self.levels,
            epsilon: self.eps,
            c_m: self.c_m,
            m_rp: self.m_rp,
            n0: self.n0,
            dim,
            seed: self.seed,
        }
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn trace_line(xs: &[f64]) -> String {
    xs.iter().map(|&v| fmt_num(v)).collect::<Vec<_>>().join(" ")
}

fn integrate(args: &RunArgs) -> anyhow::Result<()> {
    let f = args.integrand()?;
    let report = run_adaptive(&args.config(f.dim), &f)?;
    let err = relative_error(f.exact_value, report.estimate);
    let text = match args.format {
        Some(OutFormat::Json) => {
            let v = json!({
                "fn": f.name,
                "dim": f.dim,
                "estimate": report.estimate,
                "exact": f.exact_value,
                "relative_error": err,
                "stop_level": report.stop_level,
                "variance_trace": report.variance_trace,
                "samples_trace": report.samples_trace,
                "strata": report.mesh_final.len(),
                "discarded_initial": report.discarded_initial,
                "wall_time": report.wall_time,
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        _ => {
            let mut s = format!("fn: {} (dim {})\n", f.name, f.dim);
            s += &format!("estimate: {}\n", fmt_num(report.estimate));
            if let Some(i) = f.exact_value {
                s += &format!("exact: {}\n", fmt_num(i));
            }
            if let Some(e) = err {
                s += &format!("relative_error: {}\n", fmt_num(e));
            }
            s += &format!("stop_level: {}\n", report.stop_level);
            s += &format!("strata: {}\n", report.mesh_final.len());
            s += &format!("variance_trace: {}\n", trace_line(&report.variance_trace));
            s += &format!(
                "samples_trace: {}\n",
                report
                    .samples_trace
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            s += &format!("discarded_initial: {}\n", report.discarded_initial);
            s += &format!("wall_time: {}\n", fmt_num(report.wall_time));
            s
        }
    };
    args.emit(&text)
}

fn essays(args: &RunArgs, n_ess: usize) -> anyhow::Result<()> {
    let f = args.integrand()?;
    let (rep, run) = run_essays(&args.config(f.dim), n_ess, &f)?;
    let err = relative_error(f.exact_value, rep.mean_estimate);
    let text = match args.format {
        Some(OutFormat::Json) => {
            let v = json!({
                "fn": f.name,
                "Ness": n_ess,
                "mean_estimate": rep.mean_estimate,
                "variance_estimate": rep.variance_estimate,
                "relative_error": err,
                "stop_level": run.stop_level,
                "strata": run.mesh_final.len(),
                "wall_time": rep.wall_time,
                "efficiency": fmt_num(rep.efficiency),
                "essays": rep.essays,
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        _ => {
            let mut s = format!("fn: {} (dim {})\nNess: {n_ess}\n", f.name, f.dim);
            s += &format!("mean_estimate: {}\n", fmt_num(rep.mean_estimate));
            s += &format!("variance_estimate: {}\n", fmt_num(rep.variance_estimate));
            if let Some(e) = err {
                s += &format!("relative_error: {}\n", fmt_num(e));
            }
            s += &format!(
                "stop_level: {}\nstrata: {}\n",
                run.stop_level,
                run.mesh_final.len()
            );
            s += &format!("wall_time: {}\n", fmt_num(rep.wall_time));
            s += &format!("efficiency: {}\n", fmt_num(rep.efficiency));
            s
        }
    };
    args.emit(&text)
}

fn compare(args: &RunArgs, sweep: &[usize], n_ess: usize) -> anyhow::Result<()> {
    let f = args.integrand()?;
    let spec = SweepSpec {
        n_values: sweep.to_vec(),
        cfg: args.config(f.dim),
        scenario: f,
        n_ess,
    };
    let rows = harness::run_sweep(&spec)?;
    let format = match args.format {
        Some(OutFormat::Json) => Format::Json,
        _ => Format::Csv,
    };
    args.emit(&harness::render(&rows, format))
}

fn mesh_dump(args: &RunArgs) -> anyhow::Result<()> {
    let f = args.integrand()?;
    let report = run_adaptive(&args.config(f.dim), &f)?;
    args.emit(&(MeshDump::from_report(&report).to_json() + "\n"))
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let args = match &cli.command {
        Command::Integrate(a) | Command::MeshDump(a) => a,
        Command::Compare { run, .. } | Command::Essays { run, .. } => run,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        anyhow::ensure!(t >= 1, "--threads must be at least 1");
        pool = pool.num_threads(t);
    }
    pool.build()?.install(|| match &cli.command {
        Command::Integrate(a) => integrate(a),
        Command::Compare { run, sweep, n_ess } => compare(run, sweep, *n_ess),
        Command::Essays { run, n_ess } => essays(run, *n_ess),
        Command::MeshDump(a) => mesh_dump(a),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
