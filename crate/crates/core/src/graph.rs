//! Undirected simple graphs on `0..n`.
//!
//! A [`Graph`] stores a symmetric adjacency bit matrix together with the sorted
//! list of its links, so both `O(1)` adjacency tests and ordered link iteration
//! are available. Values are immutable once built; [`Graph::with_links`]
//! returns a new graph.

use std::collections::VecDeque;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered node pair stored as `(u, v)` with `u < v`.
///
/// The derived ordering is lexicographic on `(u, v)`, which is the order used
/// for every tie-break in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodePair {
    pub u: usize,
    pub v: usize,
}

impl NodePair {
    /// Builds a pair from two distinct endpoints in either order.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(NodePair { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(NodePair { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(Error::Infeasible(format!("self-loop at node {a}"))),
        }
    }

    /// Panicking constructor for literals in tests and fixed constructions.
    pub fn of(a: usize, b: usize) -> Self {
        Self::new(a, b).expect("distinct endpoints")
    }
}

impl fmt::Display for NodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    links: Vec<NodePair>,
}

impl Graph {
    /// Graph on `n` nodes without links.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
            links: Vec::new(),
        }
    }

    /// Builds a graph from a list of links. Duplicates are stored once.
    pub fn from_links(n: usize, links: impl IntoIterator<Item = NodePair>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for p in links {
            if p.v >= n {
                return Err(Error::Infeasible(format!(
                    "link {p} out of range for {n} nodes"
                )));
            }
            g.set(p.u, p.v);
        }
        g.rebuild_links();
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            for u in 0..v {
                g.set(u, v);
            }
        }
        g.rebuild_links();
        g
    }

    pub fn path(n: usize) -> Self {
        Graph::from_links(n, (1..n).map(|v| NodePair::of(v - 1, v))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let mut links: Vec<_> = (1..n).map(|v| NodePair::of(v - 1, v)).collect();
        if n > 2 {
            links.push(NodePair::of(0, n - 1));
        }
        Graph::from_links(n, links).unwrap()
    }

    /// Star with centre 0.
    pub fn star(n: usize) -> Self {
        Graph::from_links(n, (1..n).map(|v| NodePair::of(0, v))).unwrap()
    }

    fn set(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    fn rebuild_links(&mut self) {
        self.links.clear();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_link(u, v) {
                    self.links.push(NodePair { u, v });
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    /// Links in lexicographic order.
    pub fn links(&self) -> &[NodePair] {
        &self.links
    }

    pub fn has_link(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn contains(&self, p: NodePair) -> bool {
        self.has_link(p.u, p.v)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u * self.words..(u + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_link(u, v))
    }

    /// All absent pairs, lexicographically sorted.
    pub fn complement_links(&self) -> Vec<NodePair> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2 - self.links.len());
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_link(u, v) {
                    out.push(NodePair { u, v });
                }
            }
        }
        out
    }

    /// Returns a new graph with `pairs` added.
    ///
    /// Every pair must be absent from `self` and appear at most once.
    pub fn with_links(&self, pairs: &[NodePair]) -> Result<Graph> {
        let mut g = self.clone();
        for &p in pairs {
            if p.u == p.v {
                return Err(Error::Infeasible(format!("self-loop at node {}", p.u)));
            }
            if p.v >= self.n {
                return Err(Error::Infeasible(format!(
                    "link {p} out of range for {} nodes",
                    self.n
                )));
            }
            if g.has_link(p.u, p.v) {
                return Err(Error::Infeasible(format!("link {p} already present")));
            }
            g.set(p.u, p.v);
        }
        g.rebuild_links();
        Ok(g)
    }

    /// Breadth-first reachability from node 0.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    /// Integer Laplacian `Q = Δ − A`, row-major.
    pub fn laplacian_int(&self) -> Vec<i64> {
        let n = self.n;
        let mut q = vec![0i64; n * n];
        for p in &self.links {
            q[p.u * n + p.v] -= 1;
            q[p.v * n + p.u] -= 1;
            q[p.u * n + p.u] += 1;
            q[p.v * n + p.v] += 1;
        }
        q
    }

    /// Laplacian as a dense real matrix.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.n;
        let q = self.laplacian_int();
        DMatrix::from_fn(n, n, |r, c| q[r * n + c] as f64)
    }

    /// Applies a node relabelling: node `u` of `self` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::from_links(
            self.n,
            self.links.iter().map(|p| NodePair::of(perm[p.u], perm[p.v])),
        )
        .expect("permutation preserves range")
    }
}

/// Serialises as `{n, links}`.
impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Graph", 2)?;
        st.serialize_field("n", &self.node_count())?;
        st.serialize_field("links", self.links())?;
        st.end()
    }
}

/// Parses the edge-list text format.
///
/// One `u v` pair per line, `#` starts a comment line, and an optional first
/// line `n=<count>` fixes the node count. Without it (and without `n`), the
/// node count is the largest index plus one.
pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Graph> {
    let mut declared = n;
    let mut pairs = Vec::new();
    let mut max_index: Option<usize> = None;
    let mut seen_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_content {
            seen_content = true;
            if let Some(rest) = line.strip_prefix("n=") {
                let count: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse_at(lineno, format!("bad node count {rest:?}")))?;
                if let Some(given) = n {
                    if given != count {
                        return Err(Error::parse_at(
                            lineno,
                            format!("node count {count} conflicts with requested {given}"),
                        ));
                    }
                }
                declared = Some(count);
                continue;
            }
        }
        let mut tokens = line.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(Error::parse_at(lineno, format!("expected \"u v\", got {line:?}"))),
        };
        let parse_index = |tok: &str| -> Result<usize> {
            let value: i64 = tok
                .parse()
                .map_err(|_| Error::parse_at(lineno, format!("non-integer token {tok:?}")))?;
            usize::try_from(value)
                .map_err(|_| Error::parse_at(lineno, format!("negative node index {value}")))
        };
        let (u, v) = (parse_index(a)?, parse_index(b)?);
        if u == v {
            return Err(Error::parse_at(lineno, format!("self-loop at node {u}")));
        }
        if let Some(limit) = declared {
            if u.max(v) >= limit {
                return Err(Error::parse_at(
                    lineno,
                    format!("node index {} out of range for {limit} nodes", u.max(v)),
                ));
            }
        }
        max_index = Some(max_index.map_or(u.max(v), |m: usize| m.max(u).max(v)));
        pairs.push(NodePair::of(u, v));
    }

    let count = declared.unwrap_or_else(|| max_index.map_or(0, |m| m + 1));
    Graph::from_links(count, pairs)
}

/// Renders a graph in the edge-list format, including the `n=` header.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("n={}\n", g.node_count());
    for p in g.links() {
        out.push_str(&format!("{} {}\n", p.u, p.v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_path() {
        let g = parse_edge_list("0 1\n1 2", None).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.link_count(), 2);
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn edge_list_duplicates_stored_once() {
        let g = parse_edge_list("0 1\n0 1\n1 0", None).unwrap();
        assert_eq!(g.link_count(), 1);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            parse_edge_list("0 0", None),
            Err(Error::Parse { line: Some(1), .. })
        ));
        assert!(parse_edge_list("0 -1", None).is_err());
        assert!(parse_edge_list("0 x", None).is_err());
        assert!(parse_edge_list("0 1 2", None).is_err());
        assert!(parse_edge_list("0 3", Some(3)).is_err());
        assert!(parse_edge_list("n=3\n# c\n0 3", None).is_err());
    }

    #[test]
    fn edge_list_header_and_comments() {
        let g = parse_edge_list("# comment\nn=5\n0 1\n# more\n3 4\n", None).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.links(), &[NodePair::of(0, 1), NodePair::of(3, 4)]);
        let back = parse_edge_list(&format_edge_list(&g), None).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn complement_examples() {
        assert!(Graph::complete(5).complement_links().is_empty());
        assert_eq!(Graph::path(3).complement_links(), vec![NodePair::of(0, 2)]);
        assert_eq!(
            Graph::cycle(4).complement_links(),
            vec![NodePair::of(0, 2), NodePair::of(1, 3)]
        );
    }

    #[test]
    fn add_links_examples() {
        let p3 = Graph::path(3);
        assert_eq!(p3.with_links(&[NodePair::of(0, 2)]).unwrap(), Graph::complete(3));
        assert_eq!(p3.with_links(&[]).unwrap(), p3);
        assert!(matches!(
            Graph::complete(3).with_links(&[NodePair::of(0, 1)]),
            Err(Error::Infeasible(_))
        ));
        assert!(p3
            .with_links(&[NodePair::of(0, 2), NodePair::of(0, 2)])
            .is_err());
        // original untouched
        assert_eq!(p3.link_count(), 2);
    }

    #[test]
    fn self_loop_pair_rejected() {
        assert!(NodePair::new(2, 2).is_err());
        assert_eq!(NodePair::new(3, 1).unwrap(), NodePair { u: 1, v: 3 });
    }

    #[test]
    fn connectivity() {
        assert!(Graph::path(5).is_connected());
        let two = Graph::from_links(4, [NodePair::of(0, 1), NodePair::of(2, 3)]).unwrap();
        assert!(!two.is_connected());
        assert!(Graph::empty(1).is_connected());
        assert!(Graph::empty(0).is_connected());
    }

    #[test]
    fn laplacian_examples() {
        let k2 = Graph::complete(2).laplacian();
        assert_eq!(k2, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let p3 = Graph::path(3).laplacian_int();
        assert_eq!(p3, vec![1, -1, 0, -1, 2, -1, 0, -1, 1]);
        assert!(Graph::empty(3).laplacian_int().iter().all(|&x| x == 0));
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let g = Graph::from_links(
            6,
            [(0, 1), (1, 2), (2, 3), (0, 3), (3, 4), (4, 5), (1, 5)]
                .map(|(a, b)| NodePair::of(a, b)),
        )
        .unwrap();
        let q = g.laplacian_int();
        for r in 0..6 {
            assert_eq!(q[r * 6..(r + 1) * 6].iter().sum::<i64>(), 0);
            assert_eq!(q[r * 6 + r] as usize, g.degree(r));
        }
    }

    #[test]
    fn wide_graph_bitsets() {
        let g = Graph::path(130);
        assert!(g.has_link(63, 64));
        assert!(g.has_link(128, 129));
        assert!(!g.has_link(0, 129));
        assert_eq!(g.degree(64), 2);
        assert!(g.is_connected());
    }
}
