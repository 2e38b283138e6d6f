//! Head-to-head runs of the solver variants on one specification.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fadmm::apps::{
    build_fda, build_recovery, build_srm, Dataset, FDA_BETA0_PER_RHO, RECOVERY_BETA0, SRM_BETA0,
};
use fadmm::fractional::Problem;
use fadmm::solver::{initial_point, run, Trace, Variant};
use fadmm::Error as SolverError;
use serde::Serialize;

use crate::config::{App, Instance, RunSpec};
use crate::data;
use crate::plot::{emit_svg, Metric};

pub const CSV_HEADER: [&str; 12] = [
    "t",
    "beta",
    "mu",
    "scalar",
    "objective",
    "U",
    "LK",
    "primal_residual",
    "e_plus",
    "crit",
    "flag",
    "wall_ms",
];

#[derive(Debug, Clone, Serialize)]
pub enum Outcome {
    Ok,
    Skipped(String),
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct VariantRun {
    pub variant: Variant,
    pub outcome: Outcome,
    pub trace: Option<Trace>,
}

#[derive(Debug, Clone)]
pub struct InstanceRun {
    pub instance: Instance,
    pub beta0: f64,
    pub runs: Vec<VariantRun>,
}

impl InstanceRun {
    pub fn traces(&self) -> Vec<&Trace> {
        self.runs.iter().filter_map(|r| r.trace.as_ref()).collect()
    }

    pub fn trace(&self, v: Variant) -> Option<&Trace> {
        self.runs.iter().find(|r| r.variant == v)?.trace.as_ref()
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub spec: RunSpec,
    pub instances: Vec<InstanceRun>,
    pub files: Vec<PathBuf>,
}

fn build(spec: &RunSpec, ds: &Dataset, inst: &Instance) -> Result<(Problem, f64)> {
    let p = &spec.params;
    let get = |k: &str| inst.get(k).expect("instances carry every swept key");
    Ok(match spec.app {
        App::Fda => {
            let rho = get("rho");
            let (_, prob) = build_fda(ds, p.r.unwrap_or(crate::config::DEFAULT_FDA_R), rho)?;
            (prob, FDA_BETA0_PER_RHO * rho)
        }
        App::Srm => {
            let count = p.portfolios.unwrap_or(fadmm::apps::SRM_DEFAULT_P);
            let (_, prob) = build_srm(ds, count, spec.dataset.seed)?;
            (prob, SRM_BETA0)
        }
        App::Recovery => {
            let k = p.k.unwrap_or((ds.cols() / 10).max(1));
            let (_, prob) = build_recovery(ds, get("rho0"), get("rho1"), get("rho2"), k)?;
            (prob, RECOVERY_BETA0)
        }
    })
}

/// Runs every variant on every instance of `spec` without writing files.
pub fn run_instances(spec: &RunSpec) -> Result<Vec<InstanceRun>> {
    let ds = data::resolve(&spec.dataset)?;
    let mut out = Vec::new();
    for inst in spec.instances() {
        let (prob, beta0) = build(spec, &ds, &inst).with_context(|| inst.tag.clone())?;
        let (x0, y0, z0) = initial_point(&prob, spec.seed);
        let runs = std::thread::scope(|s| {
            let handles: Vec<_> = spec
                .variants
                .iter()
                .map(|&v| {
                    let cfg = spec.solver_config(v, beta0);
                    let (prob, x0, y0, z0, tag) = (&prob, &x0, &y0, &z0, &inst.tag);
                    s.spawn(move || {
                        let (outcome, trace) = match run(prob, &cfg, x0, y0, z0) {
                            Ok(mut t) => {
                                t.instance = tag.clone();
                                (Outcome::Ok, Some(t))
                            }
                            Err(e @ SolverError::UnsupportedVariant { .. }) => {
                                (Outcome::Skipped(e.to_string()), None)
                            }
                            Err(e) => (Outcome::Failed(e.to_string()), None),
                        };
                        VariantRun {
                            variant: v,
                            outcome,
                            trace,
                        }
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("solver thread panicked"))
                .collect()
        });
        out.push(InstanceRun {
            instance: inst,
            beta0,
            runs,
        });
    }
    Ok(out)
}

fn fmt_f(v: f64) -> String {
    format!("{v}")
}

pub fn write_trace_csv(path: &Path, trace: &Trace) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in &trace.records {
        w.write_record([
            r.t.to_string(),
            fmt_f(r.beta),
            fmt_f(r.mu),
            fmt_f(r.scalar),
            fmt_f(r.objective),
            fmt_f(r.u),
            fmt_f(r.lk),
            fmt_f(r.primal_residual),
            fmt_f(r.e_plus),
            fmt_f(r.crit),
            r.flag.to_string(),
            fmt_f(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn variant_file(v: Variant) -> String {
    v.as_str().to_ascii_lowercase()
}

#[derive(Serialize)]
struct Metadata<'a> {
    version: &'a str,
    seed: u64,
    dataset_seed: u64,
    spec: &'a RunSpec,
    config_toml: String,
    instances: Vec<InstanceMeta<'a>>,
}

#[derive(Serialize)]
struct InstanceMeta<'a> {
    tag: &'a str,
    params: &'a [(String, f64)],
    beta0: f64,
    variants: Vec<VariantMeta>,
}

#[derive(Serialize)]
struct VariantMeta {
    variant: String,
    outcome: Outcome,
    iterations: Option<usize>,
    z0_norm: Option<f64>,
}

/// Runs the spec and writes per-variant CSVs, `summary.csv`, SVG plots and
/// `metadata.json` under `spec.output_dir`.
pub fn run_experiment(spec: &RunSpec) -> Result<Experiment> {
    let instances = run_instances(spec)?;
    let dir = &spec.output_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();

    let summary_path = dir.join("summary.csv");
    let mut summary = csv::Writer::from_path(&summary_path)?;
    summary.write_record([
        "tag",
        "variant",
        "status",
        "iterations",
        "initial_objective",
        "final_objective",
        "final_residual",
        "wall_ms",
        "reason",
    ])?;

    for ir in &instances {
        let tag = &ir.instance.tag;
        for vr in &ir.runs {
            let (status, reason) = match &vr.outcome {
                Outcome::Ok => ("ok", String::new()),
                Outcome::Skipped(r) => ("skipped", r.clone()),
                Outcome::Failed(r) => ("failed", r.clone()),
            };
            let mut row = vec![tag.clone(), vr.variant.to_string(), status.to_string()];
            match &vr.trace {
                Some(t) => {
                    let path = dir.join(format!("{tag}__{}.csv", variant_file(vr.variant)));
                    write_trace_csv(&path, t)?;
                    files.push(path);
                    row.extend([
                        t.last().t.to_string(),
                        fmt_f(t.records[0].objective),
                        fmt_f(t.final_objective()),
                        fmt_f(t.last().primal_residual),
                        fmt_f(t.last().wall_ms),
                    ]);
                }
                None => row.extend(std::iter::repeat_n(String::new(), 5)),
            }
            row.push(reason);
            summary.write_record(&row)?;
        }
        let traces: Vec<Trace> = ir.traces().into_iter().cloned().collect();
        if !traces.is_empty() {
            let mut metrics = vec![(Metric::Objective, false), (Metric::EPlus, true)];
            if spec.solver.record_diagnostics {
                metrics.push((Metric::Crit, true));
            }
            for (m, log_y) in metrics {
                let path = dir.join(format!("{tag}__{}.svg", m.name()));
                emit_svg(&traces, m, &path, log_y)?;
                files.push(path);
            }
        }
    }
    summary.flush()?;
    files.push(summary_path);

    let meta = Metadata {
        version: env!("CARGO_PKG_VERSION"),
        seed: spec.seed,
        dataset_seed: spec.dataset.seed,
        spec,
        config_toml: spec.to_toml(),
        instances: instances
            .iter()
            .map(|ir| InstanceMeta {
                tag: &ir.instance.tag,
                params: &ir.instance.values,
                beta0: ir.beta0,
                variants: ir
                    .runs
                    .iter()
                    .map(|vr| VariantMeta {
                        variant: vr.variant.to_string(),
                        outcome: vr.outcome.clone(),
                        iterations: vr.trace.as_ref().map(|t| t.last().t),
                        z0_norm: vr.trace.as_ref().map(|t| t.z0_norm),
                    })
                    .collect(),
            })
            .collect(),
    };
    let meta_path = dir.join("metadata.json");
    let mut f = File::create(&meta_path)?;
    serde_json::to_writer_pretty(&mut f, &meta)?;
    f.write_all(b"\n")?;
    files.push(meta_path);

    Ok(Experiment {
        spec: spec.clone(),
        instances,
        files,
    })
}
