//! Isomorph-free enumeration of small connected graphs, plus seeded random
//! connected graph generators.
//!
//! The canonical form of a graph is the lexicographically smallest
//! upper-triangle bit string (graph6 column order) over all node
//! permutations. It is found by a depth-first search that fixes the image of
//! one position at a time; the bits of column `p` are determined as soon as
//! position `p` is fixed, so any branch whose prefix already exceeds the best
//! prefix is cut.
//!
//! Enumeration grows graphs one node at a time: every canonical graph on
//! `m` nodes is extended by a new node with each possible neighbourhood,
//! canonicalised and deduplicated. Connected graphs are filtered at the end.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodePair};

/// Largest `n` handled by the built-in generator.
pub const MAX_ENUMERATION_NODES: usize = 7;

/// Largest `n` for which [`canonical_code`] fits in a `u64`.
pub const MAX_CANONICAL_NODES: usize = 11;

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Small adjacency used during canonicalisation: one bitmask per node.
#[derive(Clone, Copy)]
struct Masks {
    n: usize,
    rows: [u16; MAX_CANONICAL_NODES],
}

impl Masks {
    fn from_graph(g: &Graph) -> Self {
        let mut rows = [0u16; MAX_CANONICAL_NODES];
        for p in g.links() {
            rows[p.u] |= 1 << p.v;
            rows[p.v] |= 1 << p.u;
        }
        Masks {
            n: g.node_count(),
            rows,
        }
    }

    fn from_code(n: usize, code: u64) -> Self {
        let total = pair_count(n);
        let mut rows = [0u16; MAX_CANONICAL_NODES];
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if code >> (total - 1 - k) & 1 == 1 {
                    rows[u] |= 1 << v;
                    rows[v] |= 1 << u;
                }
                k += 1;
            }
        }
        Masks { n, rows }
    }

    #[cfg(test)]
    fn code(&self) -> u64 {
        let total = pair_count(self.n);
        let mut code = 0u64;
        let mut k = 0;
        for v in 1..self.n {
            for u in 0..v {
                if self.rows[u] >> v & 1 == 1 {
                    code |= 1 << (total - 1 - k);
                }
                k += 1;
            }
        }
        code
    }

    fn to_graph(self) -> Graph {
        let mut links = Vec::new();
        for v in 1..self.n {
            for u in 0..v {
                if self.rows[u] >> v & 1 == 1 {
                    links.push(NodePair { u, v });
                }
            }
        }
        Graph::from_links(self.n, links).expect("in range")
    }
}

struct CanonSearch {
    masks: Masks,
    total: usize,
    best: u64,
    perm: [usize; MAX_CANONICAL_NODES],
    used: u16,
}

impl CanonSearch {
    fn run(masks: Masks) -> u64 {
        let total = pair_count(masks.n);
        let mut search = CanonSearch {
            masks,
            total,
            best: u64::MAX,
            perm: [0; MAX_CANONICAL_NODES],
            used: 0,
        };
        if masks.n <= 1 {
            return 0;
        }
        search.extend(0, 0, 0);
        search.best
    }

    /// `prefix` holds the first `bits` bits of the relabelled string.
    fn extend(&mut self, pos: usize, prefix: u64, bits: usize) {
        let n = self.masks.n;
        if pos == n {
            if prefix < self.best {
                self.best = prefix;
            }
            return;
        }
        for w in 0..n {
            if self.used >> w & 1 == 1 {
                continue;
            }
            let mut p = prefix;
            for q in 0..pos {
                p = p << 1 | (self.masks.rows[self.perm[q]] >> w & 1) as u64;
            }
            let nbits = bits + pos;
            if self.best != u64::MAX && p > self.best >> (self.total - nbits) {
                continue;
            }
            self.perm[pos] = w;
            self.used |= 1 << w;
            self.extend(pos + 1, p, nbits);
            self.used &= !(1 << w);
        }
    }
}

/// Canonical upper-triangle code of `g` (first bit most significant).
///
/// Two graphs on the same node count are isomorphic iff their codes are equal.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    if g.node_count() > MAX_CANONICAL_NODES {
        return Err(Error::Domain(format!(
            "canonical form limited to n <= {MAX_CANONICAL_NODES}"
        )));
    }
    Ok(CanonSearch::run(Masks::from_graph(g)))
}

/// Relabels `g` into its canonical representative.
pub fn canonical_graph(g: &Graph) -> Result<Graph> {
    let code = canonical_code(g)?;
    Ok(Masks::from_code(g.node_count(), code).to_graph())
}

/// Canonical codes of all graphs (connected or not) on `n` nodes.
fn all_graph_codes(n: usize) -> HashSet<u64> {
    let mut level: HashSet<u64> = HashSet::from([0u64]);
    for m in 1..n {
        let mut next = HashSet::new();
        for &code in &level {
            let base = Masks::from_code(m, code);
            for nbrs in 0u16..(1 << m) {
                let mut g = base;
                g.n = m + 1;
                g.rows[m] = nbrs;
                for u in 0..m {
                    if nbrs >> u & 1 == 1 {
                        g.rows[u] |= 1 << m;
                    }
                }
                next.insert(CanonSearch::run(g));
            }
        }
        level = next;
    }
    level
}

/// One representative per isomorphism class of connected graphs on `n`
/// nodes, sorted by `(L, canonical code)`.
pub fn enumerate_connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if !(2..=MAX_ENUMERATION_NODES).contains(&n) {
        return Err(Error::Domain(format!(
            "built-in enumeration supports 2 <= n <= {MAX_ENUMERATION_NODES}; \
             use graph6 ingestion for n = {n}"
        )));
    }
    let mut keyed: Vec<(usize, u64, Graph)> = all_graph_codes(n)
        .into_iter()
        .map(|code| {
            let g = Masks::from_code(n, code).to_graph();
            (g.link_count(), code, g)
        })
        .filter(|(_, _, g)| g.is_connected())
        .collect();
    keyed.sort_by_key(|(l, code, _)| (*l, *code));
    Ok(keyed.into_iter().map(|(_, _, g)| g).collect())
}

/// Connected graph drawn uniformly from labelled graphs on `n` nodes
/// (each pair present with probability 1/2, disconnected draws rejected).
pub fn random_connected_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    random_connected_gnp(n, 0.5, rng)
}

/// `G(n, p)` conditioned on connectivity by rejection.
pub fn random_connected_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let mut links = Vec::new();
        for v in 1..n {
            for u in 0..v {
                if rng.random_bool(p) {
                    links.push(NodePair { u, v });
                }
            }
        }
        let g = Graph::from_links(n, links).expect("in range");
        if g.is_connected() {
            return g;
        }
    }
}

/// Random recursive tree plus each remaining pair with probability `extra`.
/// Always connected; useful for sparse test graphs where rejection would
/// rarely succeed.
pub fn random_tree_plus<R: Rng + ?Sized>(n: usize, extra: f64, rng: &mut R) -> Graph {
    let mut links = Vec::new();
    for v in 1..n {
        links.push(NodePair::of(rng.random_range(0..v), v));
    }
    let tree = Graph::from_links(n, links).expect("in range");
    let mut more = Vec::new();
    for p in tree.complement_links() {
        if rng.random_bool(extra) {
            more.push(p);
        }
    }
    tree.with_links(&more).expect("absent pairs")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Exhaustive oracle: minimum code over every relabelling.
    fn brute_canonical(g: &Graph) -> u64 {
        all_perms(g.node_count())
            .iter()
            .map(|perm| Masks::from_graph(&g.relabel(perm)).code())
            .min()
            .unwrap()
    }

    /// Brute-force count of connected isomorphism classes via exhaustive
    /// canonicalisation of every labelled graph.
    fn brute_connected_classes(n: usize) -> usize {
        let total = pair_count(n);
        let mut set = HashSet::new();
        for code in 0u64..(1 << total) {
            let g = Masks::from_code(n, code).to_graph();
            if g.is_connected() {
                set.insert(brute_canonical(&g));
            }
        }
        set.len()
    }

    #[test]
    fn canonical_matches_exhaustive_minimum() {
        let mut rng = rand::rng();
        for _ in 0..60 {
            let n = rng.random_range(2..=6);
            let g = random_connected_gnp(n, 0.4, &mut rng);
            assert_eq!(canonical_code(&g).unwrap(), brute_canonical(&g));
        }
    }

    #[test]
    fn canonical_is_invariant_under_relabelling() {
        let g = Graph::from_links(
            6,
            [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (1, 5)].map(|(a, b)| NodePair::of(a, b)),
        )
        .unwrap();
        let c = canonical_code(&g).unwrap();
        for perm in all_perms(6).iter().step_by(37) {
            assert_eq!(canonical_code(&g.relabel(perm)).unwrap(), c);
        }
    }

    #[test]
    fn small_counts_match_brute_force() {
        assert_eq!(brute_connected_classes(4), 6);
        assert_eq!(enumerate_connected_graphs(2).unwrap().len(), 1);
        assert_eq!(enumerate_connected_graphs(3).unwrap().len(), 2);
        assert_eq!(enumerate_connected_graphs(4).unwrap().len(), 6);
        assert_eq!(
            enumerate_connected_graphs(5).unwrap().len(),
            brute_connected_classes(5)
        );
    }

    #[test]
    fn counts_for_five_and_six() {
        assert_eq!(enumerate_connected_graphs(5).unwrap().len(), 21);
        assert_eq!(enumerate_connected_graphs(6).unwrap().len(), 112);
    }

    #[test]
    fn outputs_are_canonical_and_distinct() {
        let graphs = enumerate_connected_graphs(6).unwrap();
        let codes: HashSet<u64> = graphs.iter().map(brute_canonical).collect();
        assert_eq!(codes.len(), graphs.len());
        for g in &graphs {
            assert!(g.is_connected());
            assert_eq!(Masks::from_graph(g).code(), canonical_code(g).unwrap());
        }
        let keys: Vec<_> = graphs
            .iter()
            .map(|g| (g.link_count(), Masks::from_graph(g).code()))
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn out_of_range_rejected() {
        let err = enumerate_connected_graphs(8).unwrap_err().to_string();
        assert!(err.contains("graph6"), "{err}");
        assert!(enumerate_connected_graphs(1).is_err());
    }

    #[test]
    fn random_generators_are_connected() {
        let mut rng = rand::rng();
        for n in [2, 5, 17] {
            assert!(random_connected_graph(n, &mut rng).is_connected());
            assert!(random_tree_plus(n, 0.1, &mut rng).is_connected());
        }
    }
}
