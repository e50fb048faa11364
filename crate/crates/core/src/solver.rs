//! Greedy link addition, the exhaustive optimum, and greedy efficiency.
//!
//! Every selection uses the same deterministic rule: among candidates whose
//! value is within a relative tolerance of the best one, the
//! lexicographically smallest pair (or subset) wins. Candidate evaluation is
//! parallel; the reduction always runs in candidate order, so results do not
//! depend on the thread count.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodePair};
use crate::resistance::{
    apply_link, kirchhoff_from_laplacian, kirchhoff_index, link_gain, resistance_state, GainQuery,
};

/// Relative tolerance under which two gains (or two objective values) count
/// as tied.
pub const DEFAULT_TIE_TOL: f64 = 1e-12;

/// Default cap on the number of subsets examined by the exhaustive search.
pub const DEFAULT_SUBSET_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GreedyMode {
    /// Recompute `R_G` from scratch for every candidate.
    Naive,
    /// One factorisation, then rank-one gains and updates.
    Incremental,
}

impl std::fmt::Display for GreedyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GreedyMode::Naive => "naive",
            GreedyMode::Incremental => "incremental",
        })
    }
}

impl std::str::FromStr for GreedyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(GreedyMode::Naive),
            "incremental" => Ok(GreedyMode::Incremental),
            other => Err(Error::Domain(format!("unknown greedy mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tie_tol: f64,
    pub subset_budget: u128,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tie_tol: DEFAULT_TIE_TOL,
            subset_budget: DEFAULT_SUBSET_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyStep {
    pub pair: NodePair,
    pub delta_r: f64,
    pub r_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyTrace {
    pub initial_r: f64,
    pub steps: Vec<GreedyStep>,
    pub mode: GreedyMode,
}

impl GreedyTrace {
    /// `R_G` after the last step (the initial value when `k = 0`).
    pub fn final_r(&self) -> f64 {
        self.steps.last().map_or(self.initial_r, |s| s.r_after)
    }

    pub fn pairs(&self) -> Vec<NodePair> {
        self.steps.iter().map(|s| s.pair).collect()
    }

    /// Checks the trace invariants: positive gains, strictly decreasing
    /// resistance, and `r_after[t] = r_after[t-1] − delta_r[t]` within `tol`
    /// (relative to the running value).
    pub fn validate(&self, tol: f64) -> Result<()> {
        let mut prev = self.initial_r;
        for (t, s) in self.steps.iter().enumerate() {
            if !(s.delta_r > 0.0) || !(s.r_after < prev) {
                return Err(Error::Numerical(format!(
                    "greedy step {t} does not decrease resistance ({prev} -> {})",
                    s.r_after
                )));
            }
            if ((prev - s.delta_r) - s.r_after).abs() > tol * prev.abs().max(1.0) {
                return Err(Error::Numerical(format!(
                    "greedy step {t}: gain {} inconsistent with {prev} -> {}",
                    s.delta_r, s.r_after
                )));
            }
            prev = s.r_after;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalResult {
    pub best_set: Vec<NodePair>,
    pub r_opt: f64,
    pub n_evaluated: u128,
}

/// Validated, sorted placeable set.
fn placeable_set(g: &Graph, placeable: Option<&[NodePair]>) -> Result<Vec<NodePair>> {
    let Some(given) = placeable else {
        return Ok(g.complement_links());
    };
    let mut w = given.to_vec();
    w.sort();
    for pair in w.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::Infeasible(format!(
                "placeable link {} listed twice",
                pair[0]
            )));
        }
    }
    for p in &w {
        if p.u == p.v || p.v >= g.node_count() {
            return Err(Error::Infeasible(format!(
                "placeable link {p} invalid for {} nodes",
                g.node_count()
            )));
        }
        if g.contains(*p) {
            return Err(Error::Infeasible(format!(
                "placeable link {p} already present"
            )));
        }
    }
    Ok(w)
}

fn check_problem(g: &Graph, k: usize, w: &[NodePair]) -> Result<()> {
    if g.node_count() < 2 || !g.is_connected() {
        return Err(Error::Infeasible("graph is disconnected".into()));
    }
    if k > w.len() {
        return Err(Error::Infeasible(format!(
            "k = {k} exceeds the {} placeable links",
            w.len()
        )));
    }
    Ok(())
}

/// Index of the largest value under the tie rule; values are in candidate
/// order.
fn select_max(values: &[f64], tol: f64) -> usize {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = best - tol * best.abs();
    values
        .iter()
        .position(|&v| v >= threshold)
        .expect("non-empty candidate list")
}

fn add_to_laplacian(lap: &mut DMatrix<f64>, p: NodePair) {
    lap[(p.u, p.u)] += 1.0;
    lap[(p.v, p.v)] += 1.0;
    lap[(p.u, p.v)] -= 1.0;
    lap[(p.v, p.u)] -= 1.0;
}

pub fn greedy(
    g: &Graph,
    k: usize,
    placeable: Option<&[NodePair]>,
    mode: GreedyMode,
) -> Result<GreedyTrace> {
    greedy_with(g, k, placeable, mode, &SolverConfig::default())
}

pub fn greedy_with(
    g: &Graph,
    k: usize,
    placeable: Option<&[NodePair]>,
    mode: GreedyMode,
    cfg: &SolverConfig,
) -> Result<GreedyTrace> {
    let mut remaining = placeable_set(g, placeable)?;
    check_problem(g, k, &remaining)?;
    match mode {
        GreedyMode::Naive => greedy_naive(g, k, &mut remaining, cfg),
        GreedyMode::Incremental => greedy_incremental(g, k, &mut remaining, cfg),
    }
}

fn greedy_naive(
    g: &Graph,
    k: usize,
    remaining: &mut Vec<NodePair>,
    cfg: &SolverConfig,
) -> Result<GreedyTrace> {
    let initial_r = kirchhoff_index(g)?;
    let mut lap = g.laplacian();
    let mut current = initial_r;
    let mut steps = Vec::with_capacity(k);
    for _ in 0..k {
        let after: Vec<f64> = remaining
            .par_iter()
            .map(|&p| {
                let mut trial = lap.clone();
                add_to_laplacian(&mut trial, p);
                kirchhoff_from_laplacian(trial)
            })
            .collect::<Result<_>>()?;
        let gains: Vec<f64> = after.iter().map(|r| current - r).collect();
        let idx = select_max(&gains, cfg.tie_tol);
        let pair = remaining.remove(idx);
        add_to_laplacian(&mut lap, pair);
        steps.push(GreedyStep {
            pair,
            delta_r: gains[idx],
            r_after: after[idx],
        });
        current = after[idx];
    }
    Ok(GreedyTrace {
        initial_r,
        steps,
        mode: GreedyMode::Naive,
    })
}

fn greedy_incremental(
    g: &Graph,
    k: usize,
    remaining: &mut Vec<NodePair>,
    cfg: &SolverConfig,
) -> Result<GreedyTrace> {
    let mut state = resistance_state(g)?;
    let initial_r = state.r_total();
    let mut steps = Vec::with_capacity(k);
    for _ in 0..k {
        let gains: Vec<f64> = remaining
            .par_iter()
            .map(|p| link_gain(&state, GainQuery::link(p.u, p.v)))
            .collect::<Result<_>>()?;
        let idx = select_max(&gains, cfg.tie_tol);
        let pair = remaining.remove(idx);
        state = apply_link(&state, GainQuery::link(pair.u, pair.v))?;
        steps.push(GreedyStep {
            pair,
            delta_r: gains[idx],
            r_after: state.r_total(),
        });
    }
    Ok(GreedyTrace {
        initial_r,
        steps,
        mode: GreedyMode::Incremental,
    })
}

/// `C(m, k)`, saturating.
pub fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((m - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Subsets whose value lies within the tie tolerance of the running minimum,
/// kept in enumeration order.
struct NearMinimum {
    tol: f64,
    min: f64,
    entries: Vec<(f64, Vec<usize>)>,
}

impl NearMinimum {
    fn new(tol: f64) -> Self {
        NearMinimum {
            tol,
            min: f64::INFINITY,
            entries: Vec::new(),
        }
    }

    fn limit(&self, min: f64) -> f64 {
        min + self.tol * min.abs()
    }

    fn offer(&mut self, value: f64, subset: &[usize]) {
        if value < self.min {
            self.min = value;
            let lim = self.limit(value);
            self.entries.retain(|(v, _)| *v <= lim);
        }
        if value <= self.limit(self.min) {
            self.entries.push((value, subset.to_vec()));
        }
    }
}

/// Visits every `k`-subset of `0..m` whose smallest element is `first`, in
/// lexicographic order.
fn for_each_subset_from(first: usize, m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    debug_assert!(k >= 1);
    let mut idx: Vec<usize> = (0..k).map(|t| first + t).collect();
    if idx[k - 1] >= m {
        return;
    }
    loop {
        visit(&idx);
        // advance positions 1..k
        let mut t = k - 1;
        loop {
            if t == 0 {
                return;
            }
            if idx[t] < m - (k - t) {
                idx[t] += 1;
                for s in t + 1..k {
                    idx[s] = idx[s - 1] + 1;
                }
                break;
            }
            t -= 1;
        }
    }
}

pub fn brute_force_optimal(
    g: &Graph,
    k: usize,
    placeable: Option<&[NodePair]>,
) -> Result<OptimalResult> {
    brute_force_optimal_with(g, k, placeable, &SolverConfig::default())
}

/// Exact minimiser of `R_G(G ∪ B)` over all `k`-subsets `B` of the placeable
/// set. Among subsets within the tie tolerance of the minimum, the
/// lexicographically smallest is returned.
pub fn brute_force_optimal_with(
    g: &Graph,
    k: usize,
    placeable: Option<&[NodePair]>,
    cfg: &SolverConfig,
) -> Result<OptimalResult> {
    let w = placeable_set(g, placeable)?;
    check_problem(g, k, &w)?;
    let total = binomial(w.len(), k);
    if total > cfg.subset_budget {
        return Err(Error::Budget {
            what: "exhaustive subset search",
            needed: total,
            limit: cfg.subset_budget,
        });
    }
    let base = g.laplacian();
    if k == 0 {
        return Ok(OptimalResult {
            best_set: Vec::new(),
            r_opt: kirchhoff_from_laplacian(base)?,
            n_evaluated: 1,
        });
    }

    let eval = |subset: &[usize]| -> Result<f64> {
        let mut lap = base.clone();
        for &i in subset {
            add_to_laplacian(&mut lap, w[i]);
        }
        kirchhoff_from_laplacian(lap)
    };

    let chunks: Vec<NearMinimum> = (0..=w.len() - k)
        .into_par_iter()
        .map(|first| {
            let mut near = NearMinimum::new(cfg.tie_tol);
            let mut failure = None;
            for_each_subset_from(first, w.len(), k, |subset| {
                if failure.is_some() {
                    return;
                }
                match eval(subset) {
                    Ok(v) => near.offer(v, subset),
                    Err(e) => failure = Some(e),
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(near),
            }
        })
        .collect::<Result<_>>()?;

    let global = chunks.iter().map(|c| c.min).fold(f64::INFINITY, f64::min);
    let limit = global + cfg.tie_tol * global.abs();
    let (r_opt, subset) = chunks
        .iter()
        .flat_map(|c| c.entries.iter())
        .find(|(v, _)| *v <= limit)
        .cloned()
        .expect("at least one subset evaluated");
    Ok(OptimalResult {
        best_set: subset.iter().map(|&i| w[i]).collect(),
        r_opt,
        n_evaluated: total,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyReport {
    pub greedy: GreedyTrace,
    pub optimal: OptimalResult,
    pub eta: f64,
}

/// Greedy (incremental) against the exhaustive optimum.
pub fn efficiency_report(
    g: &Graph,
    k: usize,
    placeable: Option<&[NodePair]>,
    cfg: &SolverConfig,
) -> Result<EfficiencyReport> {
    let greedy = greedy_with(g, k, placeable, GreedyMode::Incremental, cfg)?;
    let mut optimal = brute_force_optimal_with(g, k, placeable, cfg)?;
    let ratio = optimal.r_opt / greedy.final_r();
    if ratio > 1.0 + 1e-9 {
        return Err(Error::Numerical(format!(
            "exhaustive optimum {} exceeds greedy value {}",
            optimal.r_opt,
            greedy.final_r()
        )));
    }
    // values tied under the selection rule count as the optimum
    let tied = ratio >= 1.0
        || (greedy.final_r() - optimal.r_opt).abs() <= cfg.tie_tol * optimal.r_opt.abs();
    if tied {
        optimal.r_opt = greedy.final_r();
    }
    let eta = if tied { 1.0 } else { ratio };
    Ok(EfficiencyReport {
        greedy,
        optimal,
        eta,
    })
}

/// `η = R_opt / R_greedy`.
pub fn efficiency(g: &Graph, k: usize) -> Result<f64> {
    Ok(efficiency_report(g, k, None, &SolverConfig::default())?.eta)
}
