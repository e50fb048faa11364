//! Effective resistances and the Kirchhoff index.
//!
//! Links are unit conductances. The pairwise resistance matrix is obtained
//! from `M = (Q + J/n)⁻¹`, which equals `Q⁺ + J/n²` on a connected graph, via
//! `ω_ij = M_ii + M_jj − 2 M_ij`. The spectral route `R = n Σ 1/μ_i` is kept
//! as an independent cross-check.
//!
//! Adding conductance `δ` between `i` and `j` is a rank-one Laplacian update,
//! so every resistance and the Kirchhoff index change in closed form; see
//! [`link_gain`] and [`apply_link`].

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Relative threshold on `μ₂ / μ_n` below which a graph is treated as
/// disconnected.
pub const CONNECTIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResistanceState {
    n: usize,
    omega: Vec<f64>,
    row_sum: Vec<f64>,
    r_total: f64,
}

impl ResistanceState {
    fn from_omega(n: usize, omega: Vec<f64>) -> Self {
        let row_sum: Vec<f64> = omega.chunks(n).map(|r| r.iter().sum()).collect();
        let r_total = row_sum.iter().sum::<f64>() / 2.0;
        ResistanceState {
            n,
            omega,
            row_sum,
            r_total,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn omega(&self, i: usize, j: usize) -> f64 {
        self.omega[i * self.n + j]
    }

    /// Resistance matrix, row-major.
    pub fn omega_matrix(&self) -> &[f64] {
        &self.omega
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row_sum[i]
    }

    /// Kirchhoff index `R_G`.
    pub fn r_total(&self) -> f64 {
        self.r_total
    }

    /// Pair sum `Σ_{i<j} ω_ij`, accumulated independently of the row sums.
    pub fn pair_sum(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                s += self.omega(i, j);
            }
        }
        s
    }
}

/// Conductance `delta` added between nodes `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainQuery {
    pub i: usize,
    pub j: usize,
    pub delta: f64,
}

impl GainQuery {
    /// Unit-conductance link between `i` and `j`.
    pub fn link(i: usize, j: usize) -> Self {
        GainQuery { i, j, delta: 1.0 }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.i == self.j {
            return Err(Error::Domain(format!("query endpoints coincide at {}", self.i)));
        }
        if self.i >= n || self.j >= n {
            return Err(Error::Domain(format!(
                "query ({},{}) out of range for {n} nodes",
                self.i, self.j
            )));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::Domain(format!(
                "added conductance must be finite and non-negative, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.node_count() < 2 {
        return Err(Error::Infeasible(format!(
            "resistance needs at least 2 nodes, got {}",
            g.node_count()
        )));
    }
    if !g.is_connected() {
        return Err(Error::Infeasible("graph is disconnected".into()));
    }
    Ok(())
}

/// `(L + J/n)⁻¹` for a Laplacian `L` of a connected graph.
fn shifted_inverse(lap: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = lap.nrows();
    let shift = 1.0 / n as f64;
    let shifted = lap.map(|x| x + shift);
    shifted
        .cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| Error::Numerical("shifted Laplacian is not positive definite".into()))
}

/// Resistance state from an arbitrary (possibly weighted) Laplacian. The
/// caller is responsible for connectivity; a singular system surfaces as a
/// numerical failure.
pub fn resistance_from_laplacian(lap: &DMatrix<f64>) -> Result<ResistanceState> {
    let n = lap.nrows();
    let m = shifted_inverse(lap)?;
    let mut omega = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let w = m[(i, i)] + m[(j, j)] - 2.0 * m[(i, j)];
            omega[i * n + j] = w;
            omega[j * n + i] = w;
        }
    }
    Ok(ResistanceState::from_omega(n, omega))
}

pub fn resistance_state(g: &Graph) -> Result<ResistanceState> {
    require_connected(g)?;
    resistance_from_laplacian(&g.laplacian())
}

/// `R_G = n · tr(Q⁺) = n · (tr((Q + J/n)⁻¹) − 1)`. No connectivity check; a
/// disconnected Laplacian fails in the factorisation.
pub fn kirchhoff_from_laplacian(lap: DMatrix<f64>) -> Result<f64> {
    let n = lap.nrows();
    let shift = 1.0 / n as f64;
    let chol = lap
        .map(|x| x + shift)
        .cholesky()
        .ok_or_else(|| Error::Numerical("shifted Laplacian is not positive definite".into()))?;
    // tr(A⁻¹) = ‖L⁻¹‖_F² for A = L Lᵀ
    let linv = chol
        .l()
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let trace = linv.iter().map(|x| x * x).sum::<f64>();
    Ok(n as f64 * (trace - 1.0))
}

/// Kirchhoff index by one dense factorisation.
pub fn kirchhoff_index(g: &Graph) -> Result<f64> {
    require_connected(g)?;
    kirchhoff_from_laplacian(g.laplacian())
}

/// Ascending Laplacian eigenvalues.
pub fn laplacian_spectrum(g: &Graph) -> Vec<f64> {
    let mut mu: Vec<f64> = SymmetricEigen::new(g.laplacian()).eigenvalues.iter().copied().collect();
    mu.sort_by(f64::total_cmp);
    mu
}

/// `R_G = n Σ_{i≥2} 1/μ_i`.
pub fn eigen_kirchhoff(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Infeasible(format!(
            "resistance needs at least 2 nodes, got {n}"
        )));
    }
    let mu = laplacian_spectrum(g);
    let top = mu[n - 1];
    if !(mu[1] > CONNECTIVITY_TOL * top) {
        return Err(Error::Infeasible(format!(
            "algebraic connectivity {:e} below tolerance; graph is disconnected",
            mu[1]
        )));
    }
    Ok(n as f64 * mu[1..].iter().map(|m| 1.0 / m).sum::<f64>())
}

/// Kirchhoff index of the path on `n` nodes, the maximum over connected
/// graphs.
pub fn max_resistance(n: usize) -> f64 {
    let n = n as f64;
    (n * n * n - n) / 6.0
}

/// Maps `R_G` to `[0, 1]`: 1 for the complete graph, 0 for the path.
pub fn normalize(n: usize, r: f64) -> Result<f64> {
    if n <= 2 {
        return Err(Error::Domain(format!(
            "normalized resistance undefined for n = {n} (zero range)"
        )));
    }
    let top = max_resistance(n);
    Ok((top - r) / (top - (n as f64 - 1.0)))
}

pub fn normalized_resistance(g: &Graph) -> Result<f64> {
    normalize(g.node_count(), kirchhoff_index(g)?)
}

/// Decrease of `R_G` when conductance `q.delta` is added between `q.i` and
/// `q.j`.
pub fn link_gain(s: &ResistanceState, q: GainQuery) -> Result<f64> {
    q.check(s.n)?;
    let n = s.n;
    let (ri, rj) = (&s.omega[q.i * n..(q.i + 1) * n], &s.omega[q.j * n..(q.j + 1) * n]);
    let sq: f64 = ri.iter().zip(rj).map(|(a, b)| (a - b) * (a - b)).sum();
    let diff = s.row_sum[q.i] - s.row_sum[q.j];
    let denom = 4.0 * (1.0 + q.delta * s.omega(q.i, q.j));
    Ok((q.delta * n as f64 * sq - q.delta * diff * diff) / denom)
}

/// Resistance state after adding conductance `q.delta` between `q.i` and
/// `q.j`; every pair is updated in `O(n²)`.
pub fn apply_link(s: &ResistanceState, q: GainQuery) -> Result<ResistanceState> {
    q.check(s.n)?;
    let n = s.n;
    let x: Vec<f64> = (0..n).map(|p| s.omega(p, q.i) - s.omega(p, q.j)).collect();
    let scale = q.delta / (4.0 * (1.0 + q.delta * s.omega(q.i, q.j)));
    let mut omega = s.omega.clone();
    for p in 0..n {
        for r in p + 1..n {
            let d = x[p] - x[r];
            let w = s.omega[p * n + r] - scale * d * d;
            omega[p * n + r] = w;
            omega[r * n + p] = w;
        }
    }
    Ok(ResistanceState::from_omega(n, omega))
}
