//! Greedy-efficiency studies over graph collections.
//!
//! [`sweep`] evaluates every graph of an isomorph-free catalog (built in for
//! `n ≤ 7`, otherwise a graph6 file); [`sample_sweep`] evaluates a seeded
//! random sample. Per-graph work runs in parallel and is collected in input
//! order, so results do not depend on the thread count.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{enumerate_connected_graphs, random_connected_graph, MAX_ENUMERATION_NODES};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::{encode_graph6, parse_graph6};
use crate::solver::{efficiency_report, SolverConfig};

/// Tolerance under which two efficiencies count as tied for the argmin.
pub const ETA_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    pub k: usize,
    pub graph6: String,
    #[serde(rename = "R_initial")]
    pub r_initial: f64,
    #[serde(rename = "R_greedy")]
    pub r_greedy: f64,
    #[serde(rename = "R_opt")]
    pub r_opt: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Exhaustive,
    /// `eta_min` is then only an upper bound on the true minimum.
    Sampled { seed: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    pub k: usize,
    /// Graphs evaluated.
    pub n_graphs: usize,
    /// Graphs with fewer than `k` absent links.
    pub n_skipped: usize,
    pub eta_min: Option<f64>,
    pub argmin_graph: Option<String>,
    pub mode: SweepMode,
}

#[derive(Debug, Clone)]
pub enum SweepSource {
    Builtin,
    Catalog(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub summary: SweepSummary,
    pub records: Vec<SweepRecord>,
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 5 {
        return Err(Error::Domain(format!("sweeps need n >= 5, got {n}")));
    }
    if k < 2 {
        return Err(Error::Domain(format!(
            "sweeps need k >= 2 (greedy is optimal for k = 1), got {k}"
        )));
    }
    Ok(())
}

/// Reads a graph6 catalog whose graphs must all have `n` nodes.
pub fn load_catalog(path: &Path, n: usize) -> Result<Vec<Graph>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = parse_graph6(line).map_err(|e| e.at_line(i + 1))?;
        if g.node_count() != n {
            return Err(Error::Parse {
                line: Some(i + 1),
                msg: format!("graph has {} nodes, expected {n}", g.node_count()),
            });
        }
        out.push(g);
    }
    Ok(out)
}

fn evaluate(g: &Graph, k: usize, cfg: &SolverConfig) -> Result<SweepRecord> {
    let rep = efficiency_report(g, k, None, cfg)?;
    Ok(SweepRecord {
        n: g.node_count(),
        k,
        graph6: encode_graph6(g)?,
        r_initial: rep.greedy.initial_r,
        r_greedy: rep.greedy.final_r(),
        r_opt: rep.optimal.r_opt,
        eta: rep.eta,
    })
}

fn evaluate_all(graphs: &[Graph], k: usize, cfg: &SolverConfig) -> Result<Vec<SweepRecord>> {
    graphs.par_iter().map(|g| evaluate(g, k, cfg)).collect()
}

/// Smallest `eta`, ties within [`ETA_TIE_TOL`] broken by smallest graph6.
fn argmin(records: &[SweepRecord]) -> Option<(f64, String)> {
    let min = records.iter().map(|r| r.eta).min_by(f64::total_cmp)?;
    let best = records
        .iter()
        .filter(|r| r.eta - min <= ETA_TIE_TOL)
        .min_by(|a, b| a.graph6.cmp(&b.graph6))?;
    Some((best.eta, best.graph6.clone()))
}

fn summarize(
    n: usize,
    k: usize,
    records: &[SweepRecord],
    n_skipped: usize,
    mode: SweepMode,
) -> SweepSummary {
    let best = argmin(records);
    SweepSummary {
        n,
        k,
        n_graphs: records.len(),
        n_skipped,
        eta_min: best.as_ref().map(|b| b.0),
        argmin_graph: best.map(|b| b.1),
        mode,
    }
}

/// Evaluates every graph of the catalog with at least `k` absent links.
pub fn sweep(n: usize, k: usize, source: &SweepSource, cfg: &SolverConfig) -> Result<SweepOutput> {
    check_nk(n, k)?;
    let graphs = match source {
        SweepSource::Builtin => {
            if n > MAX_ENUMERATION_NODES {
                return Err(Error::Domain(format!(
                    "built-in catalog supports n <= {MAX_ENUMERATION_NODES}; pass a graph6 catalog for n = {n}"
                )));
            }
            enumerate_connected_graphs(n)?
        }
        SweepSource::Catalog(path) => load_catalog(path, n)?,
    };
    sweep_graphs(n, k, &graphs, cfg)
}

/// Exhaustive sweep over an explicit list of `n`-node graphs.
pub fn sweep_graphs(n: usize, k: usize, graphs: &[Graph], cfg: &SolverConfig) -> Result<SweepOutput> {
    check_nk(n, k)?;
    let pairs = n * (n - 1) / 2;
    let (eligible, skipped): (Vec<Graph>, Vec<Graph>) = graphs
        .iter()
        .cloned()
        .partition(|g| pairs - g.link_count() >= k);
    let records = evaluate_all(&eligible, k, cfg)?;
    Ok(SweepOutput {
        summary: summarize(n, k, &records, skipped.len(), SweepMode::Exhaustive),
        records,
    })
}

/// Evaluates exactly `count` graphs drawn with a seeded generator: uniform
/// labelled connected graphs, or uniform draws with replacement from
/// `catalog`. Draws with fewer than `k` absent links are redrawn.
pub fn sample_sweep(
    n: usize,
    k: usize,
    count: usize,
    seed: u64,
    catalog: Option<&Path>,
    cfg: &SolverConfig,
) -> Result<SweepOutput> {
    check_nk(n, k)?;
    let pairs = n * (n - 1) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(count);
    match catalog {
        Some(path) => {
            let pool: Vec<Graph> = load_catalog(path, n)?
                .into_iter()
                .filter(|g| pairs - g.link_count() >= k)
                .collect();
            if pool.is_empty() && count > 0 {
                return Err(Error::Infeasible(format!(
                    "no catalog graph has {k} absent links"
                )));
            }
            for _ in 0..count {
                draws.push(pool[rng.random_range(0..pool.len())].clone());
            }
        }
        None => {
            if pairs < k {
                return Err(Error::Infeasible(format!(
                    "n = {n} has only {pairs} node pairs, k = {k}"
                )));
            }
            while draws.len() < count {
                let g = random_connected_graph(n, &mut rng);
                if pairs - g.link_count() >= k {
                    draws.push(g);
                }
            }
        }
    }
    let records = evaluate_all(&draws, k, cfg)?;
    Ok(SweepOutput {
        summary: summarize(n, k, &records, 0, SweepMode::Sampled { seed, count }),
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Domain(format!("unknown report format {other:?}"))),
        }
    }
}

fn sorted(records: &[SweepRecord]) -> Vec<&SweepRecord> {
    let mut rows: Vec<&SweepRecord> = records.iter().collect();
    rows.sort_by(|a, b| a.eta.total_cmp(&b.eta).then_with(|| a.graph6.cmp(&b.graph6)));
    rows
}

pub const CSV_HEADER: &str = "n,k,graph6,R_initial,R_greedy,R_opt,eta";

/// CSV report. `preamble` lines are written first as `# key=value`; with a
/// summary, a trailing `# eta_min=<v> graph=<g6>` line follows the rows.
pub fn render_csv(
    records: &[SweepRecord],
    summary: Option<&SweepSummary>,
    preamble: &[(String, String)],
) -> String {
    let mut out = String::new();
    for (key, value) in preamble {
        let _ = writeln!(out, "# {key}={value}");
    }
    if let Some(s) = summary {
        match s.mode {
            SweepMode::Exhaustive => {
                let _ = writeln!(out, "# mode=exhaustive graphs={} skipped={}", s.n_graphs, s.n_skipped);
            }
            SweepMode::Sampled { seed, count } => {
                let _ = writeln!(
                    out,
                    "# mode=sampled seed={seed} count={count} (eta_min is an upper bound)"
                );
            }
        }
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in sorted(records) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n, r.k, r.graph6, r.r_initial, r.r_greedy, r.r_opt, r.eta
        );
    }
    if let Some(SweepSummary {
        eta_min: Some(eta),
        argmin_graph: Some(g6),
        ..
    }) = summary
    {
        let _ = writeln!(out, "# eta_min={eta} graph={g6}");
    }
    out
}

/// JSON report with the same fields as the CSV, rows in the same order.
pub fn render_json(
    records: &[SweepRecord],
    summary: Option<&SweepSummary>,
    config: serde_json::Value,
) -> String {
    let value = serde_json::json!({
        "config": config,
        "summary": summary,
        "records": sorted(records),
    });
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_report(
    records: &[SweepRecord],
    summary: Option<&SweepSummary>,
    path: &Path,
    format: ReportFormat,
) -> Result<()> {
    let text = match format {
        ReportFormat::Csv => render_csv(records, summary, &[]),
        ReportFormat::Json => render_json(records, summary, serde_json::Value::Null),
    };
    std::fs::write(path, text)?;
    Ok(())
}
