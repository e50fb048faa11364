//! Exhaustive submodularity ratio and curvature of link addition, greedy
//! guarantee factors, and the search for minimal diminishing-returns
//! violations.
//!
//! Set functions here are evaluated on subsets of a ground set `W` of absent
//! links. The Kirchhoff index of `G ∪ X` is cached for every `X ⊆ W` once per
//! graph; every ratio is then a handful of table lookups. Ratios of gains are
//! the same whether measured on `R_G` or on its affine normalisation `r_G`.

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::enumerate_connected_graphs;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodePair};
use crate::resistance::{kirchhoff_from_laplacian, kirchhoff_index, max_resistance};

/// Default cap on the ground-set size for exhaustive enumeration.
pub const DEFAULT_MAX_GROUND: usize = 12;

/// Gains at or below this fraction of `R_G(G)` are treated as zero.
pub const DEFAULT_GAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubmodConfig {
    pub max_ground: usize,
    pub gain_tol: f64,
}

impl Default for SubmodConfig {
    fn default() -> Self {
        SubmodConfig {
            max_ground: DEFAULT_MAX_GROUND,
            gain_tol: DEFAULT_GAIN_TOL,
        }
    }
}

/// `(S, R, v)` with `S ⊆ R ⊂ W` and `v ∈ W \ R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triple {
    pub s: Vec<NodePair>,
    pub r: Vec<NodePair>,
    pub v: NodePair,
}

/// `|W| · 3^(|W|−1)`.
pub fn triple_count(ground: usize) -> u128 {
    if ground == 0 {
        return 0;
    }
    ground as u128 * 3u128.pow(ground as u32 - 1)
}

/// `|W| · 4^(|W|−1)`: choices of `v`, then each other element in `S`, `Ω`,
/// both or neither.
pub fn curvature_count(ground: usize) -> u128 {
    if ground == 0 {
        return 0;
    }
    ground as u128 * 4u128.pow(ground as u32 - 1)
}

fn check_ground(len: usize, cap: usize, needed: u128) -> Result<()> {
    if len > cap {
        return Err(Error::Budget {
            what: "exhaustive set enumeration",
            needed,
            limit: triple_count(cap),
        });
    }
    Ok(())
}

fn members(ground: &[NodePair], mask: u32) -> Vec<NodePair> {
    (0..ground.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| ground[i])
        .collect()
}

/// Calls `visit(sub)` for every submask of `mask`, starting with `mask`
/// itself and ending with zero.
fn for_each_submask(mask: u32, mut visit: impl FnMut(u32)) {
    let mut sub = mask;
    loop {
        visit(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
}

/// Visits `(s_mask, r_mask, v_index)` for every triple over a ground set of
/// size `m`.
fn for_each_triple_mask(m: usize, mut visit: impl FnMut(u32, u32, usize)) {
    let full = if m == 0 { 0 } else { u32::MAX >> (32 - m) };
    for v in 0..m {
        let others = full & !(1 << v);
        for_each_submask(others, |r| for_each_submask(r, |s| visit(s, r, v)));
    }
}

/// Every `(S, R, v)` over `ground`, refusing ground sets larger than `cap`.
pub fn enumerate_triples(ground: &[NodePair], cap: usize) -> Result<Vec<Triple>> {
    check_ground(ground.len(), cap, triple_count(ground.len()))?;
    let mut out = Vec::with_capacity(triple_count(ground.len()) as usize);
    for_each_triple_mask(ground.len(), |s, r, v| {
        out.push(Triple {
            s: members(ground, s),
            r: members(ground, r),
            v: ground[v],
        })
    });
    Ok(out)
}

/// Which set function the gains are measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Decrease of `R_G`.
    Resistance,
    /// Increase of the normalised resistance `r_G`.
    Normalized,
}

/// `R_G(G ∪ X)` for every `X ⊆ W`, indexed by bitmask.
#[derive(Debug, Clone)]
pub struct SubsetCache {
    n: usize,
    ground: Vec<NodePair>,
    values: Vec<f64>,
}

impl SubsetCache {
    pub fn build(g: &Graph, ground: &[NodePair], cap: usize) -> Result<Self> {
        check_ground(ground.len(), cap, triple_count(ground.len()))?;
        if !g.is_connected() || g.node_count() < 2 {
            return Err(Error::Infeasible("graph is disconnected".into()));
        }
        for p in ground {
            if g.contains(*p) || p.v >= g.node_count() {
                return Err(Error::Infeasible(format!("ground link {p} not absent")));
            }
        }
        let base = g.laplacian();
        let values = (0u32..1 << ground.len())
            .into_par_iter()
            .map(|mask| {
                let mut lap = base.clone();
                for (i, p) in ground.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        lap[(p.u, p.u)] += 1.0;
                        lap[(p.v, p.v)] += 1.0;
                        lap[(p.u, p.v)] -= 1.0;
                        lap[(p.v, p.u)] -= 1.0;
                    }
                }
                kirchhoff_from_laplacian(lap)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubsetCache {
            n: g.node_count(),
            ground: ground.to_vec(),
            values,
        })
    }

    pub fn ground(&self) -> &[NodePair] {
        &self.ground
    }

    pub fn resistance(&self, mask: u32) -> f64 {
        self.values[mask as usize]
    }

    /// Objective value of `G ∪ X`, oriented so that larger is better.
    fn value(&self, objective: Objective, mask: u32) -> f64 {
        let r = self.values[mask as usize];
        match objective {
            Objective::Resistance => -r,
            Objective::Normalized => {
                let top = max_resistance(self.n);
                (top - r) / (top - (self.n as f64 - 1.0))
            }
        }
    }

    /// Zero threshold for gains on `objective`.
    fn tolerance(&self, objective: Objective, rel: f64) -> f64 {
        let base = rel * self.values[0].abs();
        match objective {
            Objective::Resistance => base,
            Objective::Normalized => {
                base / (max_resistance(self.n) - (self.n as f64 - 1.0)).abs().max(f64::MIN_POSITIVE)
            }
        }
    }

    /// Improvement from adding element `v` to subset `x`.
    fn gain(&self, objective: Objective, x: u32, v: usize) -> f64 {
        self.value(objective, x | 1 << v) - self.value(objective, x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioWitness {
    pub triple: Triple,
    pub small_gain: f64,
    pub large_gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaReport {
    pub gamma: f64,
    pub n_triples: u128,
    pub n_skipped: u128,
    /// The triple attaining the minimum ratio (first in enumeration order).
    pub argmin: Option<RatioWitness>,
}

pub fn submodularity_ratio(g: &Graph) -> Result<GammaReport> {
    submodularity_ratio_with(g, None, Objective::Resistance, &SubmodConfig::default())
}

/// Largest `γ ∈ [0,1]` with `gain(S, v) ≥ γ · gain(R, v)` for every triple.
/// `ground` defaults to all absent links.
pub fn submodularity_ratio_with(
    g: &Graph,
    ground: Option<&[NodePair]>,
    objective: Objective,
    cfg: &SubmodConfig,
) -> Result<GammaReport> {
    let ground = ground.map_or_else(|| g.complement_links(), <[NodePair]>::to_vec);
    let cache = SubsetCache::build(g, &ground, cfg.max_ground)?;
    Ok(gamma_from_cache(&cache, objective, cfg.gain_tol))
}

pub fn gamma_from_cache(cache: &SubsetCache, objective: Objective, rel_tol: f64) -> GammaReport {
    let tol = cache.tolerance(objective, rel_tol);
    let mut best = f64::INFINITY;
    let mut arg: Option<(u32, u32, usize, f64, f64)> = None;
    let mut skipped = 0u128;
    for_each_triple_mask(cache.ground.len(), |s, r, v| {
        let large = cache.gain(objective, r, v);
        if large <= tol {
            skipped += 1;
            return;
        }
        let small = cache.gain(objective, s, v);
        let ratio = small / large;
        if ratio < best {
            best = ratio;
            arg = Some((s, r, v, small, large));
        }
    });
    let gamma = if best.is_finite() { best.clamp(0.0, 1.0) } else { 1.0 };
    let ground = &cache.ground;
    GammaReport {
        gamma,
        n_triples: triple_count(ground.len()),
        n_skipped: skipped,
        argmin: arg.map(|(s, r, v, small, large)| RatioWitness {
            triple: Triple {
                s: members(ground, s),
                r: members(ground, r),
                v: ground[v],
            },
            small_gain: small,
            large_gain: large,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureWitness {
    pub omega: Vec<NodePair>,
    pub s: Vec<NodePair>,
    pub v: NodePair,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub alpha: f64,
    pub n_triples: u128,
    pub n_skipped: u128,
    pub argmax: Option<CurvatureWitness>,
}

pub fn curvature(g: &Graph) -> Result<CurvatureReport> {
    curvature_with(g, None, &SubmodConfig::default())
}

/// Smallest `α ∈ [0,1]` with
/// `f(S ∪ Ω) − f((S∖v) ∪ Ω) ≥ (1 − α)(f(S) − f(S∖v))` for all `Ω, S ⊆ W`
/// and `v ∈ S ∖ Ω`.
pub fn curvature_with(
    g: &Graph,
    ground: Option<&[NodePair]>,
    cfg: &SubmodConfig,
) -> Result<CurvatureReport> {
    let ground = ground.map_or_else(|| g.complement_links(), <[NodePair]>::to_vec);
    let cache = SubsetCache::build(g, &ground, cfg.max_ground)?;
    Ok(alpha_from_cache(&cache, cfg.gain_tol))
}

pub fn alpha_from_cache(cache: &SubsetCache, rel_tol: f64) -> CurvatureReport {
    let objective = Objective::Normalized;
    let tol = cache.tolerance(objective, rel_tol);
    let m = cache.ground.len();
    let full = if m == 0 { 0 } else { u32::MAX >> (32 - m) };
    let mut best = f64::NEG_INFINITY;
    let mut arg: Option<(u32, u32, usize, f64)> = None;
    let mut skipped = 0u128;
    for v in 0..m {
        let others = full & !(1 << v);
        // S = rest ∪ {v}; gains below are with respect to v
        for_each_submask(others, |rest| {
            let den = cache.gain(objective, rest, v);
            for_each_submask(others, |omega| {
                if den <= tol {
                    skipped += 1;
                    return;
                }
                let num = cache.gain(objective, rest | omega, v);
                let a = 1.0 - num / den;
                if a > best {
                    best = a;
                    arg = Some((omega, rest | 1 << v, v, num / den));
                }
            });
        });
    }
    let alpha = if best.is_finite() { best.clamp(0.0, 1.0) } else { 0.0 };
    let ground = &cache.ground;
    CurvatureReport {
        alpha,
        n_triples: curvature_count(m),
        n_skipped: skipped,
        argmax: arg.map(|(omega, s, v, ratio)| CurvatureWitness {
            omega: members(ground, omega),
            s: members(ground, s),
            v: ground[v],
            ratio,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// `(1/α)(1 − e^{−γα})`.
    Bian,
    /// `1 − (1 − γ + γα)e^{−γ}`.
    Liu,
}

/// Greedy approximation factor for submodularity ratio `gamma` and
/// curvature `alpha`.
pub fn guarantee_factor(gamma: f64, alpha: f64, which: Bound) -> Result<f64> {
    for (name, x) in [("gamma", gamma), ("alpha", alpha)] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("{name} = {x} outside [0, 1]")));
        }
    }
    Ok(match which {
        Bound::Bian if alpha < 1e-12 => gamma,
        Bound::Bian => -(-gamma * alpha).exp_m1() / alpha,
        Bound::Liu => 1.0 - (1.0 - gamma + gamma * alpha) * (-gamma).exp(),
    })
}

/// A violation of diminishing returns: adding `v` helps more after `r_set`
/// has been added than before.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub graph: Graph,
    pub v: NodePair,
    pub r_set: Vec<NodePair>,
    /// `R_G` of `G`, `G ∪ {v}`, `G ∪ R`, `G ∪ R ∪ {v}`.
    pub values: [f64; 4],
    pub ratio: f64,
}

impl Witness {
    pub fn gains(&self) -> (f64, f64) {
        (
            self.values[0] - self.values[1],
            self.values[2] - self.values[3],
        )
    }
}

/// Number of graphs examined for one `(n, L)` class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanGroup {
    pub n: usize,
    pub links: usize,
    pub graphs: usize,
    pub violating: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSearch {
    pub witness: Option<Witness>,
    pub scanned: Vec<ScanGroup>,
}

/// Minimum-ratio witness with `S = ∅`, `|R| = 1` on one graph, if its ratio
/// is below `1 − tol`.
pub fn single_link_witness(g: &Graph, tol: f64) -> Result<Option<Witness>> {
    let w = g.complement_links();
    if w.len() < 2 {
        return Ok(None);
    }
    let r0 = kirchhoff_index(g)?;
    let single: Vec<f64> = w
        .iter()
        .map(|p| kirchhoff_index(&g.with_links(&[*p])?))
        .collect::<Result<_>>()?;
    let m = w.len();
    let mut double = vec![0.0; m * m];
    for a in 0..m {
        for b in a + 1..m {
            let r = kirchhoff_index(&g.with_links(&[w[a], w[b]])?)?;
            double[a * m + b] = r;
            double[b * m + a] = r;
        }
    }
    let mut best: Option<(f64, usize, usize)> = None;
    for v in 0..m {
        for r in 0..m {
            if r == v {
                continue;
            }
            let ratio = (r0 - single[v]) / (single[r] - double[v * m + r]);
            if ratio < 1.0 - tol && best.is_none_or(|(b, _, _)| ratio < b) {
                best = Some((ratio, v, r));
            }
        }
    }
    Ok(best.map(|(ratio, v, r)| Witness {
        graph: g.clone(),
        v: w[v],
        r_set: vec![w[r]],
        values: [r0, single[v], single[r], double[v * m + r]],
        ratio,
    }))
}

/// Scans connected graphs by increasing `(n, L)` for the first class holding
/// a single-link violation of diminishing returns.
pub fn find_witness(max_nodes: usize) -> Result<WitnessSearch> {
    let mut scanned = Vec::new();
    for n in 2..=max_nodes {
        let graphs = enumerate_connected_graphs(n)?;
        let mut start = 0;
        while start < graphs.len() {
            let l = graphs[start].link_count();
            let end = start + graphs[start..].partition_point(|g| g.link_count() == l);
            let found: Vec<Option<Witness>> = graphs[start..end]
                .par_iter()
                .map(|g| single_link_witness(g, DEFAULT_GAIN_TOL))
                .collect::<Result<_>>()?;
            let violating = found.iter().filter(|w| w.is_some()).count();
            scanned.push(ScanGroup {
                n,
                links: l,
                graphs: end - start,
                violating,
            });
            if let Some(w) = found.into_iter().flatten().next() {
                return Ok(WitnessSearch {
                    witness: Some(w),
                    scanned,
                });
            }
            start = end;
        }
    }
    Ok(WitnessSearch {
        witness: None,
        scanned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resistance::eigen_kirchhoff;

    #[test]
    fn triple_counts() {
        let ground: Vec<NodePair> = (1..=4).map(|v| NodePair::of(0, v)).collect();
        for m in 1..=4 {
            let t = enumerate_triples(&ground[..m], 12).unwrap();
            assert_eq!(t.len() as u128, triple_count(m));
        }
        assert_eq!(triple_count(1), 1);
        assert_eq!(triple_count(2), 6);
        assert_eq!(triple_count(3), 27);
        let one = enumerate_triples(&ground[..1], 12).unwrap();
        assert!(one[0].s.is_empty() && one[0].r.is_empty());
    }

    #[test]
    fn triples_are_distinct_and_well_formed() {
        let ground: Vec<NodePair> = (1..=4).map(|v| NodePair::of(0, v)).collect();
        let t = enumerate_triples(&ground, 12).unwrap();
        let mut seen = std::collections::HashSet::new();
        for x in &t {
            assert!(x.s.iter().all(|p| x.r.contains(p)));
            assert!(!x.r.contains(&x.v));
            assert!(seen.insert(format!("{:?}", x)));
        }
    }

    #[test]
    fn cap_refuses_large_ground() {
        let g = Graph::path(8);
        let err = submodularity_ratio(&g).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }), "{err}");
        let ground: Vec<NodePair> = g.complement_links();
        assert!(enumerate_triples(&ground, 12).is_err());
    }

    #[test]
    fn single_absent_link_is_vacuous() {
        let k4e = Graph::from_links(
            4,
            Graph::complete(4).links().iter().copied().filter(|p| *p != NodePair::of(0, 1)),
        )
        .unwrap();
        assert_eq!(submodularity_ratio(&k4e).unwrap().gamma, 1.0);
        assert_eq!(submodularity_ratio(&Graph::path(3)).unwrap().gamma, 1.0);
        assert_eq!(curvature(&Graph::path(3)).unwrap().alpha, 0.0);
    }

    #[test]
    fn gamma_same_on_both_objectives() {
        for g in [Graph::path(5), Graph::cycle(5), Graph::star(5)] {
            let cfg = SubmodConfig::default();
            let a = submodularity_ratio_with(&g, None, Objective::Resistance, &cfg).unwrap();
            let b = submodularity_ratio_with(&g, None, Objective::Normalized, &cfg).unwrap();
            assert!((a.gamma - b.gamma).abs() < 1e-12, "{} {}", a.gamma, b.gamma);
            assert!((0.0..=1.0).contains(&a.gamma));
        }
    }

    #[test]
    fn gains_are_monotone() {
        let g = Graph::cycle(5);
        let cache = SubsetCache::build(&g, &g.complement_links(), 12).unwrap();
        for_each_triple_mask(cache.ground().len(), |s, r, v| {
            assert!(cache.gain(Objective::Resistance, s, v) > 0.0);
            assert!(cache.gain(Objective::Resistance, r, v) > 0.0);
        });
    }

    #[test]
    fn guarantee_examples() {
        let e = 1.0 - (-1.0f64).exp();
        for b in [Bound::Bian, Bound::Liu] {
            assert!((guarantee_factor(1.0, 1.0, b).unwrap() - e).abs() < 1e-12);
            for a in [0.0, 0.5, 1.0] {
                assert_eq!(guarantee_factor(0.0, a, b).unwrap(), 0.0);
            }
        }
        let g = 0.7;
        assert!((guarantee_factor(g, 1e-9, Bound::Bian).unwrap() - g).abs() < 1e-8);
        assert_eq!(guarantee_factor(g, 0.0, Bound::Bian).unwrap(), g);
        assert!(guarantee_factor(1.5, 0.0, Bound::Liu).is_err());
        assert!(guarantee_factor(0.5, -0.1, Bound::Bian).is_err());
    }

    #[test]
    fn no_witness_up_to_four_nodes() {
        let search = find_witness(4).unwrap();
        assert!(search.witness.is_none());
        assert_eq!(search.scanned.iter().map(|s| s.graphs).sum::<usize>(), 1 + 2 + 6);
    }

    #[test]
    fn witness_values_reproduce_on_eigen_route() {
        let search = find_witness(5).unwrap();
        let w = search.witness.expect("witness on five nodes");
        let g = &w.graph;
        let sets = [
            g.clone(),
            g.with_links(&[w.v]).unwrap(),
            g.with_links(&w.r_set).unwrap(),
            g.with_links(&[w.r_set[0], w.v]).unwrap(),
        ];
        for (h, &val) in sets.iter().zip(&w.values) {
            let e = eigen_kirchhoff(h).unwrap();
            assert!((e - val).abs() <= 1e-9 * val);
        }
    }
}
