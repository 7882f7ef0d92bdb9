use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use su11_walk::oracle::{cross_check, CrossCheckReport};
use su11_walk::{su11_overlap, PhaseMode};

use crate::chart;
use crate::config::{
    ChartKind, ChartSpec, CrossCheckSuite, ExperimentConfig, Output, OverlapConfig,
};
use crate::error::{CliError, Result};
use crate::table::{write_atomic, Format, Metadata, ResultTable};

fn echo<T: serde::Serialize>(cfg: &T) -> serde_json::Value {
    serde_json::to_value(cfg).expect("configs serialize")
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// `n` samples of `[−π, π]`; an odd count hits `θ = 0` exactly.
pub fn theta_grid(n: usize) -> Vec<f64> {
    let span = (n - 1) as f64;
    (0..n)
        .map(|j| PI * (2.0 * j as f64 - span) / span)
        .collect()
}

/// Builds every requested table of one experiment, in output order.
pub fn run_tables(cfg: &ExperimentConfig) -> Result<Vec<(Output, ResultTable)>> {
    let traj = su11_walk::run(&cfg.walk_config())?;
    let config = echo(cfg);
    let meta = |out: Output| Metadata::new("run", out.name(), config.clone()).label(cfg.label());
    let mut outputs = cfg.outputs.clone();
    outputs.sort();
    outputs.dedup();

    let mut tables = Vec::new();
    for out in outputs {
        let table = match out {
            Output::Probabilities => {
                let p = &traj.last().probabilities;
                let mut t = ResultTable::new(
                    meta(out).chart(ChartKind::Bar, "site n", "P_n"),
                    &["site", "probability", "raw"],
                );
                for (i, (n, pn)) in p.iter().enumerate() {
                    t.push(vec![n as f64, pn, p.raw[i]]);
                }
                t
            }
            Output::Sigma => {
                let mut t = ResultTable::new(
                    meta(out).chart(ChartKind::Line, "step l", "standard deviation sigma"),
                    &["step", "sigma"],
                );
                for o in &traj.observables {
                    t.push(vec![o.step as f64, o.sigma]);
                }
                t
            }
            Output::Entropy => {
                let mut t = ResultTable::new(
                    meta(out).chart(ChartKind::Line, "step l", "entanglement entropy S_E"),
                    &["step", "entropy", "mx", "my", "mz", "norm"],
                );
                for o in &traj.observables {
                    t.push(vec![
                        o.step as f64,
                        o.entropy,
                        o.bloch.mx,
                        o.bloch.my,
                        o.bloch.mz,
                        o.norm,
                    ]);
                }
                t
            }
            Output::GramRow => {
                let mut t = ResultTable::new(
                    meta(out).chart(ChartKind::Bar, "site n", "|<site_n|site_0>|"),
                    &["site", "theta", "re", "im", "abs"],
                );
                let half = (cfg.sites / 2) as i64;
                for n in -half..cfg.sites as i64 - half {
                    let g = cfg.frame.overlap(n, 0, cfg.sites)?;
                    let theta = 2.0 * PI * n as f64 / cfg.sites as f64;
                    t.push(vec![n as f64, theta, g.re, g.im, g.norm()]);
                }
                t
            }
            Output::OverlapCurve => {
                let mut t = ResultTable::new(
                    meta(out).chart(ChartKind::Line, "theta", "|overlap|"),
                    &["theta", "re", "im", "abs"],
                );
                for theta in theta_grid(cfg.overlap_points) {
                    let g = cfg.frame.overlap_angle(theta)?;
                    t.push(vec![theta, g.re, g.im, g.norm()]);
                }
                t
            }
        };
        tables.push((out, table));
    }
    Ok(tables)
}

pub fn cmd_run(cfg: &ExperimentConfig, out_dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let tables = run_tables(cfg)?;
    ensure_dir(out_dir)?;
    tables
        .iter()
        .map(|(out, t)| t.write(out_dir, &format!("{}.{}", cfg.name, out.name()), format))
        .collect()
}

fn column_name(k: f64, r: f64) -> String {
    format!("k={k},r={r}")
}

/// `|overlap|` on a θ grid for every `(k, r)` pair, with monotonicity flags
/// in the metadata notes.
pub fn overlap_table(cfg: &OverlapConfig) -> Result<ResultTable> {
    let pairs: Vec<(f64, f64)> = cfg
        .k
        .iter()
        .flat_map(|&k| cfg.r.iter().map(move |&r| (k, r)))
        .collect();
    let names: Vec<String> = pairs.iter().map(|&(k, r)| column_name(k, r)).collect();
    let mut columns = vec!["theta"];
    columns.extend(names.iter().map(String::as_str));
    let mut meta = Metadata::new("overlap", "overlap", echo(cfg))
        .chart(ChartKind::Line, "theta_m - theta_n", "|overlap|")
        .label(cfg.name.clone());

    let mut table = ResultTable::new(meta.clone(), &columns);
    let (mut in_k, mut in_r) = (true, true);
    let mut ks = cfg.k.clone();
    ks.sort_by(f64::total_cmp);
    let mut rs = cfg.r.clone();
    rs.sort_by(f64::total_cmp);
    let mag = |k: f64, r: f64, t: f64| su11_overlap(k, r, t).map(|z| z.norm());
    let non_increasing = |a: f64, b: f64| b <= a * (1.0 + 1e-12);
    for theta in theta_grid(cfg.points) {
        let mut row = vec![theta];
        for &(k, r) in &pairs {
            row.push(mag(k, r, theta)?);
        }
        table.push(row);
        if theta == 0.0 {
            continue;
        }
        for &r in &rs {
            for w in ks.windows(2) {
                in_k &= non_increasing(mag(w[0], r, theta)?, mag(w[1], r, theta)?);
            }
        }
        for &k in &ks {
            for w in rs.windows(2) {
                in_r &= non_increasing(mag(k, w[0], theta)?, mag(k, w[1], theta)?);
            }
        }
    }
    meta.notes
        .insert("decreasing_in_k".into(), serde_json::Value::Bool(in_k));
    meta.notes
        .insert("decreasing_in_r".into(), serde_json::Value::Bool(in_r));
    table.metadata = meta;
    Ok(table)
}

pub fn cmd_overlap(cfg: &OverlapConfig, out_dir: &Path, format: Format) -> Result<PathBuf> {
    let table = overlap_table(cfg)?;
    ensure_dir(out_dir)?;
    table.write(out_dir, &cfg.name, format)
}

pub struct CrossCheckOutcome {
    pub reports: Vec<CrossCheckReport>,
    pub path: PathBuf,
}

impl CrossCheckOutcome {
    /// Physical-mode checks that missed tolerance.
    pub fn failures(&self) -> Vec<&CrossCheckReport> {
        self.reports
            .iter()
            .filter(|r| !r.passed && r.config.phase_mode == PhaseMode::Physical)
            .collect()
    }
}

pub fn crosscheck_table(suite: &CrossCheckSuite) -> Result<(Vec<CrossCheckReport>, ResultTable)> {
    let reports = suite
        .cases()
        .iter()
        .map(cross_check)
        .collect::<su11_walk::Result<Vec<_>>>()?;
    let meta = Metadata::new("crosscheck", "crosscheck", echo(suite))
        .chart(ChartKind::Bar, "case", "max |dP_n|")
        .label(suite.name.clone());
    let mut table = ResultTable::new(
        meta,
        &[
            "case",
            "k",
            "r",
            "sites",
            "steps",
            "paper_idealized",
            "cutoff",
            "max_dp",
            "max_dbloch",
            "max_dentropy",
            "engine_norm_dev",
            "oracle_norm_dev",
            "first_divergence_step",
            "passed",
            "expected_divergence",
        ],
    );
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    for (i, rep) in reports.iter().enumerate() {
        let c = &rep.config;
        table.push(vec![
            i as f64,
            c.k,
            c.r,
            c.sites as f64,
            c.steps as f64,
            flag(c.phase_mode == PhaseMode::PaperIdealized),
            rep.cutoff as f64,
            rep.max_probability_deviation,
            rep.max_bloch_deviation,
            rep.max_entropy_deviation,
            rep.max_engine_norm_deviation,
            rep.max_oracle_norm_deviation,
            rep.first_divergence.map_or(-1.0, |d| d.step as f64),
            flag(rep.passed),
            flag(rep.expected_divergence),
        ]);
    }
    Ok((reports, table))
}

pub fn cmd_crosscheck(
    suite: &CrossCheckSuite,
    out_dir: &Path,
    format: Format,
) -> Result<CrossCheckOutcome> {
    let (reports, table) = crosscheck_table(suite)?;
    ensure_dir(out_dir)?;
    let path = table.write(out_dir, &suite.name, format)?;
    Ok(CrossCheckOutcome { reports, path })
}

pub fn cmd_chart(inputs: &[PathBuf], spec: &ChartSpec, out_dir: &Path) -> Result<PathBuf> {
    let tables = inputs
        .iter()
        .map(|p| ResultTable::read(p))
        .collect::<Result<Vec<_>>>()?;
    let svg = chart::render(&tables, spec)?;
    let name = match &spec.name {
        Some(n) => n.clone(),
        None => inputs[0]
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("chart")
            .to_string(),
    };
    ensure_dir(out_dir)?;
    let path = out_dir.join(format!("{name}.svg"));
    write_atomic(&path, svg.as_bytes())?;
    Ok(path)
}
