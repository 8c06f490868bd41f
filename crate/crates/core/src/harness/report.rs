use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::record::{write_atomic, RunPayload};
use crate::bench::{EnvId, ProblemKind};
use crate::error::{Error, Result};
use crate::metrics::{dmigd, dmreact, mean, roc, variance};
use crate::moea::AlgorithmId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::config(
                "format",
                format!("expected csv or json, got `{s}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub problem: String,
    pub algorithm: String,
    pub config: String,
    pub seed: u64,
    pub migd: f64,
    /// Variance of MIGD across the seeds of this cell.
    pub migd_variance: f64,
    pub mreact: Option<f64>,
    pub hv_reference: Vec<f64>,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigdRow {
    pub problem: String,
    pub algorithm: String,
    pub config: String,
    pub seeds: usize,
    pub migd: f64,
    /// Sample variance across seeds.
    pub variance: f64,
    pub mreact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocRow {
    pub problem: String,
    pub algorithm: String,
    pub baseline: String,
    pub config: String,
    pub base_migd: f64,
    pub migd: f64,
    pub roc: f64,
    pub improved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: String,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub epsilon: Vec<f64>,
    pub runs: Vec<RunRow>,
    pub migd: Vec<MigdRow>,
    pub roc: Vec<RocRow>,
    pub dmigd: Vec<SummaryRow>,
    pub dmreact: Vec<SummaryRow>,
    /// Cells or tables that could not be computed, with the reason.
    pub gaps: Vec<String>,
}

type CellKey = (ProblemKind, AlgorithmId, EnvId);
type SeedRuns<'a> = BTreeMap<u64, &'a RunPayload>;
type ConfigCells<'a, 'b> = BTreeMap<EnvId, &'b Cell<'a>>;

struct Cell<'a> {
    runs: Vec<&'a RunPayload>,
    migd: f64,
    variance: f64,
    mreact: Option<f64>,
}

/// Builds every table from run payloads alone. Output order is fixed: problems in
/// registry order, algorithms in id order, configs C1..C8, seeds ascending.
pub fn build_report(records: &[RunPayload]) -> Result<Report> {
    let mut report = Report::default();
    let mut grouped: BTreeMap<(usize, AlgorithmId, EnvId), (ProblemKind, SeedRuns)> = BTreeMap::new();
    for r in records {
        let kind = r.config.problem_kind()?;
        let label = format!(
            "{} {} {} seed {}",
            kind, r.config.algorithm, r.config.config, r.seed
        );
        if !r.complete || r.migd.is_none() {
            report.gaps.push(format!("{label}: run incomplete"));
            continue;
        }
        let entry = grouped
            .entry((kind.index(), r.config.algorithm, r.config.config))
            .or_insert_with(|| (kind, BTreeMap::new()));
        match entry.1.entry(r.seed) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(_) => {
                report.gaps.push(format!("{label}: duplicate record ignored"));
            }
        }
    }

    let mut cells: BTreeMap<(usize, AlgorithmId, EnvId), (CellKey, Cell)> = BTreeMap::new();
    for (key, (kind, runs)) in &grouped {
        let runs: Vec<&RunPayload> = runs.values().copied().collect();
        let migds: Vec<f64> = runs.iter().map(|r| r.migd.expect("filtered above")).collect();
        let reacts: Vec<f64> = runs.iter().filter_map(|r| r.mreact).collect();
        let mreact = if reacts.len() == runs.len() {
            Some(mean(&reacts)?)
        } else {
            None
        };
        cells.insert(
            *key,
            (
                (*kind, key.1, key.2),
                Cell {
                    migd: mean(&migds)?,
                    variance: variance(&migds)?,
                    mreact,
                    runs,
                },
            ),
        );
    }

    let mut eps: Vec<f64> = Vec::new();
    for ((kind, algo, env), cell) in cells.values() {
        for r in &cell.runs {
            if !eps.contains(&r.epsilon) {
                eps.push(r.epsilon);
            }
            report.runs.push(RunRow {
                problem: kind.to_string(),
                algorithm: algo.to_string(),
                config: env.to_string(),
                seed: r.seed,
                migd: r.migd.expect("filtered above"),
                migd_variance: cell.variance,
                mreact: r.mreact,
                hv_reference: r.hv_reference.to_vec(),
                epsilon: r.epsilon,
            });
        }
        report.migd.push(MigdRow {
            problem: kind.to_string(),
            algorithm: algo.to_string(),
            config: env.to_string(),
            seeds: cell.runs.len(),
            migd: cell.migd,
            variance: cell.variance,
            mreact: cell.mreact,
        });
        if algo.transfer {
            let base = algo.baseline();
            match cells.get(&(kind.index(), base, *env)) {
                Some((_, b)) => {
                    let value = roc(b.migd, cell.migd)?;
                    report.roc.push(RocRow {
                        problem: kind.to_string(),
                        algorithm: algo.to_string(),
                        baseline: base.to_string(),
                        config: env.to_string(),
                        base_migd: b.migd,
                        migd: cell.migd,
                        roc: value,
                        improved: value > 0.0,
                    });
                }
                None => report
                    .gaps
                    .push(format!("ROC {kind} {algo} {env}: no {base} records")),
            }
        }
    }
    eps.sort_by(f64::total_cmp);
    report.epsilon = eps;

    let mut by_pair: BTreeMap<(usize, AlgorithmId), (ProblemKind, ConfigCells)> = BTreeMap::new();
    for ((kind, algo, env), cell) in cells.values() {
        by_pair
            .entry((kind.index(), *algo))
            .or_insert_with(|| (*kind, BTreeMap::new()))
            .1
            .insert(*env, cell);
    }
    for ((_, algo), (kind, per)) in &by_pair {
        let missing: Vec<String> = EnvId::ALL
            .iter()
            .filter(|c| !per.contains_key(c))
            .map(|c| c.to_string())
            .collect();
        if !missing.is_empty() {
            report.gaps.push(format!(
                "DMIGD/DMReact {kind} {algo}: missing {}",
                missing.join(", ")
            ));
            continue;
        }
        let migds: BTreeMap<EnvId, f64> = per.iter().map(|(k, c)| (*k, c.migd)).collect();
        report.dmigd.push(SummaryRow {
            problem: kind.to_string(),
            algorithm: algo.to_string(),
            value: dmigd(&migds)?,
        });
        if per.values().all(|c| c.mreact.is_some()) {
            let reacts: BTreeMap<EnvId, f64> = per
                .iter()
                .map(|(k, c)| (*k, c.mreact.expect("checked")))
                .collect();
            report.dmreact.push(SummaryRow {
                problem: kind.to_string(),
                algorithm: algo.to_string(),
                value: dmreact(&reacts)?,
            });
        } else {
            report
                .gaps
                .push(format!("DMReact {kind} {algo}: a cell has no defined MReact"));
        }
    }
    Ok(report)
}

/// `1.2666E-03` style.
pub fn format_sci(v: f64) -> String {
    let s = format!("{v:.4e}");
    match s.split_once('e') {
        Some((mant, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mant}E{sign}{:02}", e.abs())
        }
        None => s,
    }
}

fn opt4(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

fn csv_tables(report: &Report) -> Vec<(&'static str, String)> {
    let mut runs = String::from("problem,algorithm,config,seed,MIGD,MIGD_variance,MReact,HV_ref,epsilon\n");
    for r in &report.runs {
        let hv: Vec<String> = r.hv_reference.iter().map(|v| format!("{v:.6}")).collect();
        let _ = writeln!(
            runs,
            "{},{},{},{},{:.4},{},{},{},{}",
            r.problem,
            r.algorithm,
            r.config,
            r.seed,
            r.migd,
            format_sci(r.migd_variance),
            opt4(r.mreact),
            hv.join(";"),
            r.epsilon
        );
    }
    let mut migd = String::from("problem,algorithm,config,seeds,MIGD,VAR,MReact\n");
    for r in &report.migd {
        let _ = writeln!(
            migd,
            "{},{},{},{},{:.4},{},{}",
            r.problem,
            r.algorithm,
            r.config,
            r.seeds,
            r.migd,
            format_sci(r.variance),
            opt4(r.mreact)
        );
    }
    let mut roc = String::from("problem,algorithm,baseline,config,base_MIGD,MIGD,ROC,improved\n");
    for r in &report.roc {
        let _ = writeln!(
            roc,
            "{},{},{},{},{:.4},{:.4},{:.4},{}",
            r.problem, r.algorithm, r.baseline, r.config, r.base_migd, r.migd, r.roc, r.improved
        );
    }
    let summary = |rows: &[SummaryRow], name: &str| {
        let mut s = format!("problem,algorithm,{name}\n");
        for r in rows {
            let _ = writeln!(s, "{},{},{:.4}", r.problem, r.algorithm, r.value);
        }
        s
    };
    let mut gaps = String::new();
    for g in &report.gaps {
        let _ = writeln!(gaps, "{g}");
    }
    vec![
        ("runs.csv", runs),
        ("migd.csv", migd),
        ("roc.csv", roc),
        ("dmigd.csv", summary(&report.dmigd, "DMIGD")),
        ("dmreact.csv", summary(&report.dmreact, "DMReact")),
        ("gaps.txt", gaps),
    ]
}

/// Writes the report tables into `out_dir` and returns the report with the written paths.
pub fn emit_report(
    records: &[RunPayload],
    format: ReportFormat,
    out_dir: &Path,
) -> Result<(Report, Vec<PathBuf>)> {
    let report = build_report(records)?;
    let mut paths = Vec::new();
    match format {
        ReportFormat::Csv => {
            for (name, body) in csv_tables(&report) {
                let path = out_dir.join(name);
                write_atomic(&path, body.as_bytes())?;
                paths.push(path);
            }
        }
        ReportFormat::Json => {
            let path = out_dir.join("report.json");
            write_atomic(&path, &serde_json::to_vec_pretty(&report)?)?;
            paths.push(path);
        }
    }
    Ok((report, paths))
}
