//! The two-path counterexample family.
//!
//! For even `N ≥ 4` the graph has `2N` nodes: a complete bipartite
//! `K_{2,N−2}` with hubs `i` and `j`, plus a path of `N/2` nodes hanging off
//! each of two middle nodes `l` and `m`. The probe link is `v = (i, j)`; the
//! set `R` joins `i` to the far end of the path at `l` and `j` to the far end
//! of the path at `m`. Adding `v` after `R` gains roughly `N/6` times more
//! than adding it first, so the submodularity ratio of link addition has no
//! positive lower bound.
//!
//! Labels: `i = 0`, `j = 1`, middle nodes `2..N` with `l = 2` and `m = 3`,
//! left path `N..N+N/2` (first node adjacent to `l`), right path
//! `N+N/2..2N` (first node adjacent to `m`).
//!
//! Closed forms are evaluated in floating point and compared against the
//! dense resistance engine by [`verify_family`].

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodePair};
use crate::resistance::{kirchhoff_index, link_gain, resistance_state, GainQuery};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyGraph {
    pub param_n: usize,
    pub graph: Graph,
    pub label_i: usize,
    pub label_j: usize,
    pub label_l: usize,
    pub label_m: usize,
    /// Path at `l`, starting next to `l` and ending at the far end.
    pub left_path: Vec<usize>,
    /// Path at `m`, starting next to `m` and ending at the far end.
    pub right_path: Vec<usize>,
    pub v_pair: NodePair,
    pub r_pairs: [NodePair; 2],
}

fn check_param(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Infeasible(format!(
            "family parameter N must be even and at least 4, got {n}"
        )));
    }
    Ok(())
}

pub fn build_family_graph(n: usize) -> Result<FamilyGraph> {
    check_param(n)?;
    let half = n / 2;
    let (i, j, l, m) = (0, 1, 2, 3);
    let left_path: Vec<usize> = (n..n + half).collect();
    let right_path: Vec<usize> = (n + half..2 * n).collect();

    let mut links = Vec::with_capacity(3 * n - 4);
    for mid in 2..n {
        links.push(NodePair::of(i, mid));
        links.push(NodePair::of(j, mid));
    }
    for (anchor, path) in [(l, &left_path), (m, &right_path)] {
        links.push(NodePair::of(anchor, path[0]));
        for w in path.windows(2) {
            links.push(NodePair::of(w[0], w[1]));
        }
    }
    let graph = Graph::from_links(2 * n, links)?;
    let r_pairs = [
        NodePair::of(i, *left_path.last().unwrap()),
        NodePair::of(j, *right_path.last().unwrap()),
    ];
    Ok(FamilyGraph {
        param_n: n,
        graph,
        label_i: i,
        label_j: j,
        label_l: l,
        label_m: m,
        left_path,
        right_path,
        v_pair: NodePair::of(i, j),
        r_pairs,
    })
}

impl FamilyGraph {
    /// `G ∪ R`.
    pub fn with_r(&self) -> Graph {
        self.graph.with_links(&self.r_pairs).expect("R links are absent")
    }

    /// Node for path index `k ∈ 1..=N/2+1` on the `i` side: `k = 1` is the far
    /// end joined to `i` by `R`, `k = N/2` is next to `l`, `k = N/2 + 1` is `l`.
    pub fn path_node(&self, k: usize) -> Result<usize> {
        let half = self.param_n / 2;
        if !(1..=half + 1).contains(&k) {
            return Err(Error::Domain(format!("path index {k} outside 1..={}", half + 1)));
        }
        Ok(if k == half + 1 {
            self.label_l
        } else {
            self.left_path[half - k]
        })
    }

    /// Mirror map swapping `i ↔ j`, `l ↔ m` and the two paths.
    pub fn mirror_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..2 * self.param_n).collect();
        perm.swap(self.label_i, self.label_j);
        perm.swap(self.label_l, self.label_m);
        for (&a, &b) in self.left_path.iter().zip(&self.right_path) {
            perm[a] = b;
            perm[b] = a;
        }
        perm
    }

    /// Path nodes of both sides plus `l` and `m`.
    pub fn path_side_nodes(&self) -> Vec<usize> {
        let mut b = vec![self.label_l, self.label_m];
        b.extend(&self.left_path);
        b.extend(&self.right_path);
        b
    }
}

/// Drop of `R_G` when `v` is added to `G`: `4/(N−2)`.
pub fn gain_g_closed(n: usize) -> Result<f64> {
    check_param(n)?;
    Ok(4.0 / (n as f64 - 2.0))
}

/// Same gain assembled as `N ω² / (1 + ω)` with `ω = 2/(N−2)`.
pub fn gain_g_from_omega(n: usize) -> Result<f64> {
    check_param(n)?;
    let nf = n as f64;
    let w = 2.0 / (nf - 2.0);
    Ok(nf * w * w / (1.0 + w))
}

/// Drop of `R_G` when `v` is added to `G ∪ R`:
/// `2N(N+3)(N+4)(N+5) / (3(N+1)(N+2)(N²+N−4))`.
pub fn gain_gr_closed(n: usize) -> Result<f64> {
    check_param(n)?;
    let x = n as f64;
    Ok(2.0 * x * (x + 3.0) * (x + 4.0) * (x + 5.0)
        / (3.0 * (x + 1.0) * (x + 2.0) * (x * x + x - 4.0)))
}

/// The expanded polynomial form `2N(N³+12N²+47N+60) / (3(N⁴+4N³+N²−10N−8))`.
pub fn gain_gr_expanded(n: usize) -> Result<f64> {
    check_param(n)?;
    let x = n as f64;
    Ok(2.0 * x * (x.powi(3) + 12.0 * x * x + 47.0 * x + 60.0)
        / (3.0 * (x.powi(4) + 4.0 * x.powi(3) + x * x - 10.0 * x - 8.0)))
}

/// The factored form as printed without the leading factor `N`; off from the
/// true gain by exactly that factor.
pub fn gain_gr_printed(n: usize) -> Result<f64> {
    Ok(gain_gr_closed(n)? / n as f64)
}

/// Upper bound on the submodularity ratio:
/// `6(N+1)(N+2)(N²+N−4) / ((N−2)N(N+3)(N+4)(N+5))`. Defined for any `N > 2`.
pub fn gamma_upper_bound(n: usize) -> Result<f64> {
    if n <= 2 {
        return Err(Error::Domain(format!("bound undefined for N = {n}")));
    }
    let x = n as f64;
    Ok(6.0 * (x + 1.0) * (x + 2.0) * (x * x + x - 4.0)
        / ((x - 2.0) * x * (x + 3.0) * (x + 4.0) * (x + 5.0)))
}

/// Closed-form resistances on `G ∪ R` for path index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaClosed {
    pub omega_ij: f64,
    pub omega_ik: f64,
    pub omega_jk: f64,
    pub diff: f64,
    /// `Σ_{k=1}^{N/2+1} (ω_ik − ω_jk)²`, independent of `k`.
    pub partial_sum: f64,
}

pub fn omega_closed_forms(n: usize, k: usize) -> Result<OmegaClosed> {
    check_param(n)?;
    if !(1..=n / 2 + 1).contains(&k) {
        return Err(Error::Domain(format!("path index {k} outside 1..={}", n / 2 + 1)));
    }
    let x = n as f64;
    let k = k as f64;
    let q = x * x + x - 4.0;
    let omega_ij = (2.0 * x + 6.0) / q;
    let omega_ik = k
        * (-2.0 * k * x * x - 2.0 * k * x + 10.0 * k + x.powi(3) + 4.0 * x * x - x - 12.0)
        / ((x + 3.0) * q);
    let omega_jk = -(18.0 + 12.0 * x + 2.0 * x * x - 24.0 * k - 5.0 * x * k
        + 4.0 * x * x * k
        + x.powi(3) * k
        + 10.0 * k * k
        - 2.0 * x * k * k
        - 2.0 * x * x * k * k)
        / (12.0 + x - 4.0 * x * x - x.powi(3));
    let diff = 2.0 * (2.0 * k - x - 3.0) / q;
    let partial_sum =
        2.0 * (x.powi(3) + 6.0 * x * x + 11.0 * x + 6.0) / (3.0 * q * q);
    Ok(OmegaClosed {
        omega_ij,
        omega_ik,
        omega_jk,
        diff,
        partial_sum,
    })
}

/// Intermediate resistances of the series/parallel reduction of `G ∪ R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionSteps {
    /// `j`–`m` after folding the right path and `R` link: `(N+2)/(N+4)`.
    pub r_jm: f64,
    /// `i`–`j` after folding every two-hop route except via `l`:
    /// `(2N+6)/(N²−8)`.
    pub r_ij_folded: f64,
    /// `i`–`l` after folding the route via `j`: `(N²+2N−2)/(2N²+2N−10)`.
    pub r_il_folded: f64,
}

pub fn reduction_steps(n: usize) -> Result<ReductionSteps> {
    check_param(n)?;
    let x = n as f64;
    Ok(ReductionSteps {
        r_jm: (x + 2.0) / (x + 4.0),
        r_ij_folded: (2.0 * x + 6.0) / (x * x - 8.0),
        r_il_folded: (x * x + 2.0 * x - 2.0) / (2.0 * x * x + 2.0 * x - 10.0),
    })
}

fn parallel(a: f64, b: f64) -> f64 {
    1.0 / (1.0 / a + 1.0 / b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    /// Known discrepancy in a published form; reported, not gated.
    Flagged,
}

impl std::fmt::Display for RowStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Flagged => "flagged",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyRow {
    pub quantity: String,
    pub closed_form: f64,
    pub numeric: f64,
    pub rel_err: f64,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub param_n: usize,
    pub rows: Vec<FamilyRow>,
}

impl FamilyReport {
    /// True when no row failed (flagged rows do not count as failures).
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != RowStatus::Fail)
    }

    pub fn row(&self, quantity: &str) -> Option<&FamilyRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,quantity,closed_form,numeric,rel_err,status\n");
        self.append_csv_rows(&mut out);
        out
    }

    /// Data rows only, for concatenating several reports under one header.
    pub fn append_csv_rows(&self, out: &mut String) {
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{:e},{}",
                self.param_n, r.quantity, r.closed_form, r.numeric, r.rel_err, r.status
            );
        }
    }
}

struct Rows {
    tol: f64,
    rows: Vec<FamilyRow>,
}

impl Rows {
    fn check(&mut self, quantity: impl Into<String>, closed_form: f64, numeric: f64) {
        let rel_err = if closed_form == 0.0 {
            numeric.abs()
        } else {
            ((numeric - closed_form) / closed_form).abs()
        };
        let status = if rel_err <= self.tol {
            RowStatus::Pass
        } else {
            RowStatus::Fail
        };
        self.rows.push(FamilyRow {
            quantity: quantity.into(),
            closed_form,
            numeric,
            rel_err,
            status,
        });
    }

    fn flag(&mut self, quantity: impl Into<String>, closed_form: f64, numeric: f64) {
        let rel_err = ((numeric - closed_form) / closed_form).abs();
        self.rows.push(FamilyRow {
            quantity: quantity.into(),
            closed_form,
            numeric,
            rel_err,
            status: RowStatus::Flagged,
        });
    }
}

/// Default relative tolerance for [`verify_family`].
pub const DEFAULT_FAMILY_TOL: f64 = 1e-9;

/// Builds the family graph for `n`, computes every quantity numerically and
/// compares it with its closed form.
pub fn verify_family(n: usize, tol: f64) -> Result<FamilyReport> {
    let fam = build_family_graph(n)?;
    let (i, j) = (fam.label_i, fam.label_j);
    let v = GainQuery::link(i, j);
    let mut rows = Rows {
        tol,
        rows: Vec::new(),
    };

    // G and G ∪ {v}
    let g = &fam.graph;
    let s_g = resistance_state(g)?;
    let r_g = s_g.r_total();
    let r_gv = kirchhoff_index(&g.with_links(&[fam.v_pair])?)?;
    let gain_g = r_g - r_gv;
    rows.check("gain_G", gain_g_closed(n)?, gain_g);
    rows.check("gain_G_rank_one", gain_g_closed(n)?, link_gain(&s_g, v)?);
    rows.check("gain_G_from_omega", gain_g_from_omega(n)?, gain_g);
    rows.check("omega_ij_G", 2.0 / (n as f64 - 2.0), s_g.omega(i, j));
    let asym_g = (0..2 * n)
        .filter(|&k| k != i && k != j)
        .map(|k| (s_g.omega(i, k) - s_g.omega(j, k)).abs())
        .fold(0.0, f64::max);
    rows.check("symmetry_G_max_abs", 0.0, asym_g);

    // G ∪ R and G ∪ R ∪ {v}
    let gr = fam.with_r();
    let s_gr = resistance_state(&gr)?;
    let r_gr = s_gr.r_total();
    let r_grv = kirchhoff_index(&gr.with_links(&[fam.v_pair])?)?;
    let gain_gr = r_gr - r_grv;
    let w_ij = s_gr.omega(i, j);
    let first = omega_closed_forms(n, 1)?;
    rows.check("omega_ij_GR", first.omega_ij, w_ij);

    let mut partial = 0.0;
    for k in 1..=n / 2 + 1 {
        let node = fam.path_node(k)?;
        let c = omega_closed_forms(n, k)?;
        let (wik, wjk) = (s_gr.omega(i, node), s_gr.omega(j, node));
        rows.check(format!("omega_ik[k={k}]"), c.omega_ik, wik);
        rows.check(format!("omega_jk[k={k}]"), c.omega_jk, wjk);
        rows.check(format!("diff[k={k}]"), c.diff, wik - wjk);
        rows.check(format!("diff_closed_vs_forms[k={k}]"), c.diff, c.omega_ik - c.omega_jk);
        partial += (wik - wjk).powi(2);
    }
    rows.check("partial_sum", first.partial_sum, partial);

    let b_side: f64 = fam
        .path_side_nodes()
        .iter()
        .map(|&k| (s_gr.omega(i, k) - s_gr.omega(j, k)).powi(2))
        .sum();
    rows.check("b_side_sum_both_paths", 2.0 * first.partial_sum, b_side);
    let asym_a = (4..n)
        .map(|k| (s_gr.omega(i, k) - s_gr.omega(j, k)).abs())
        .fold(0.0, f64::max);
    rows.check("symmetry_A_max_abs", 0.0, asym_a);

    let nn = 2.0 * n as f64;
    let assembled = nn / (4.0 * (1.0 + first.omega_ij))
        * (2.0 * first.omega_ij.powi(2) + 2.0 * first.partial_sum);
    rows.check("gain_GR_assembled", assembled, gain_gr);
    rows.check("gain_GR", gain_gr_closed(n)?, gain_gr);
    rows.check("gain_GR_rank_one", gain_gr_closed(n)?, link_gain(&s_gr, v)?);
    rows.check("gain_GR_expanded", gain_gr_expanded(n)?, gain_gr);
    rows.flag("gain_GR_printed_factored", gain_gr_printed(n)?, gain_gr);
    rows.flag("printed_factored_discrepancy", n as f64, gain_gr / gain_gr_printed(n)?);

    rows.check("gamma_upper_bound", gamma_upper_bound(n)?, gain_g / gain_gr);

    // series/parallel reduction, checked for internal consistency
    let steps = reduction_steps(n)?;
    let x = n as f64;
    rows.check("r_jm", steps.r_jm, parallel(1.0, x / 2.0 + 1.0));
    // N − 4 two-hop routes in parallel, then the route through m
    let via_m = 1.0 + steps.r_jm;
    let folded = 1.0 / ((x - 4.0) / 2.0 + 1.0 / via_m);
    rows.check("r_ij_folded", steps.r_ij_folded, folded);
    rows.check(
        "omega_ij_from_reduction",
        first.omega_ij,
        parallel(steps.r_ij_folded, steps.r_jm + 1.0),
    );
    rows.check(
        "r_il_folded",
        steps.r_il_folded,
        parallel(steps.r_ij_folded + 1.0, 1.0),
    );

    Ok(FamilyReport {
        param_n: n,
        rows: rows.rows,
    })
}

/// Rows of the bound curve for even `N` in `from..=to`:
/// `(N, 2N, bound, 6/N)`.
pub fn gamma_curve(from: usize, to: usize) -> Result<Vec<(usize, usize, f64, f64)>> {
    let start = from.max(4) + from.max(4) % 2;
    (start..=to)
        .step_by(2)
        .map(|n| Ok((n, 2 * n, gamma_upper_bound(n)?, 6.0 / n as f64)))
        .collect()
}

pub fn gamma_curve_csv(rows: &[(usize, usize, f64, f64)]) -> String {
    let mut out = String::from("n,two_n,gamma_bound,asymptote_6_over_n\n");
    for (n, two_n, b, a) in rows {
        let _ = writeln!(out, "{n},{two_n},{b},{a}");
    }
    out
}
