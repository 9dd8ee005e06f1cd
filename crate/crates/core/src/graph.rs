//! Simple undirected graphs with a fixed total vertex order, plus the
//! distance-two structure (common-neighbor counts, special sets) used by the
//! acyclic families.
//!
//! Vertices are `0..n` internally. Text formats are 1-based.

use std::fmt;

use thiserror::Error;

/// Errors raised while building or parsing a graph.
#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop edge at vertex {0}")]
    Loop(usize),
    #[error("order is not a permutation of the {0} vertices")]
    BadOrder(usize),
    #[error("alpha must lie in (0, 1], got {0}")]
    BadAlpha(f64),
}

/// Simple undirected graph with a total order on its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    /// `rank[v]` is the position of `v` in the order.
    rank: Vec<usize>,
    /// Vertices listed from smallest to largest in the order.
    order: Vec<usize>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from 0-based edges. Duplicates collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w + 1, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u + 1));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let mut edge_list = Vec::new();
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    edge_list.push((u, v));
                }
            }
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph { n, adj, edges: edge_list, rank: (0..n).collect(), order: (0..n).collect(), max_degree })
    }

    /// Replaces the vertex order. `order` lists the vertices from smallest
    /// to largest.
    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self, GraphError> {
        if order.len() != self.n {
            return Err(GraphError::BadOrder(self.n));
        }
        let mut rank = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            if v >= self.n || rank[v] != usize::MAX {
                return Err(GraphError::BadOrder(self.n));
            }
            rank[v] = i;
        }
        self.rank = rank;
        self.order = order;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Maximum degree Δ.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbors of `v`, ascending by index.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted. The position in this list is the
    /// edge index used by the edge-coloring families.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Index of the edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    /// Position of `v` in the vertex order.
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Whether `u` comes strictly before `v` in the vertex order.
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }

    /// Vertices from smallest to largest in the order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Number of common neighbors of `u` and `v`.
    pub fn common_degree(&self, u: usize, v: usize) -> usize {
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// Vertices at distance exactly two from `v`, sorted by the vertex order.
    pub fn neighbors2(&self, v: usize) -> Vec<usize> {
        let mut mark = vec![false; self.n];
        mark[v] = true;
        for &u in &self.adj[v] {
            mark[u] = true;
        }
        let mut out = Vec::new();
        for &u in &self.adj[v] {
            for &w in &self.adj[u] {
                if !mark[w] {
                    mark[w] = true;
                    out.push(w);
                }
            }
        }
        out.sort_by_key(|&w| self.rank[w]);
        out
    }

    /// Largest number of common neighbors over all vertex pairs; the smallest
    /// γ for which the graph has no K_{2,γ+1}.
    pub fn max_codegree(&self) -> usize {
        let mut best = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                best = best.max(self.common_degree(u, v));
            }
        }
        best
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Stable 64-bit FNV-1a fingerprint of the vertex count, edge list and order.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        eat(self.n as u64);
        for &(u, v) in &self.edges {
            eat(u as u64);
            eat(v as u64);
        }
        for &v in &self.order {
            eat(v as u64);
        }
        h
    }
}

impl fmt::Display for Graph {
    /// Writes the edge-list format accepted by [`load_graph`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        if self.order.iter().enumerate().any(|(i, &v)| i != v) {
            let items: Vec<String> = self.order.iter().map(|v| (v + 1).to_string()).collect();
            writeln!(f, "order: {}", items.join(" "))?;
        }
        for &(u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse().map_err(|_| GraphError::Parse { line, msg: format!("expected an integer, found {tok:?}") })
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v`
/// (1-based). `#` starts a comment. An optional `order: v1 v2 ... vn` line
/// fixes the vertex order.
pub fn load_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut order: Option<Vec<usize>> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("order:") {
            let n = header.ok_or(GraphError::Parse { line, msg: "order line before header".into() })?.0;
            let mut perm = Vec::new();
            for tok in rest.split_whitespace() {
                let v = parse_usize(tok, line)?;
                if v == 0 || v > n {
                    return Err(GraphError::Parse { line, msg: format!("vertex {v} out of range 1..={n}") });
                }
                perm.push(v - 1);
            }
            order = Some(perm);
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(GraphError::Parse { line, msg: format!("expected two integers, found {content:?}") });
        }
        let a = parse_usize(toks[0], line)?;
        let b = parse_usize(toks[1], line)?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                for w in [a, b] {
                    if w == 0 || w > n {
                        return Err(GraphError::Parse { line, msg: format!("vertex {w} out of range 1..={n}") });
                    }
                }
                if a == b {
                    return Err(GraphError::Parse { line, msg: format!("loop edge at vertex {a}") });
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (n, m) = header.ok_or(GraphError::Parse { line: last_line.max(1), msg: "missing header".into() })?;
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: last_line.max(1),
            msg: format!("header announces {m} edges but {} were given", edges.len()),
        });
    }
    let g = Graph::new(n, edges)?;
    match order {
        Some(perm) => {
            g.with_order(perm).map_err(|_| GraphError::Parse { line: 0, msg: "order line is not a permutation".into() })
        }
        None => Ok(g),
    }
}

/// Distance-two data of a graph for a given α: N²(v), deg(v,u), the order
/// ≺_v and the special sets S(v).
#[derive(Clone, Debug)]
pub struct SpecialStructure {
    alpha: f64,
    /// Per vertex: N²(v) sorted by ≺, paired with deg(v, u).
    second: Vec<Vec<(usize, usize)>>,
    /// Per vertex: S(v), largest element of ≺_v first.
    special: Vec<Vec<usize>>,
    /// Per vertex: S(v) sorted by index, for membership tests.
    special_sorted: Vec<Vec<usize>>,
}

impl SpecialStructure {
    pub fn new(g: &Graph, alpha: f64) -> Result<Self, GraphError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(GraphError::BadAlpha(alpha));
        }
        let cap = special_capacity(alpha, g.max_degree());
        let mut second = Vec::with_capacity(g.n());
        let mut special = Vec::with_capacity(g.n());
        let mut special_sorted = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            let n2: Vec<(usize, usize)> = g.neighbors2(v).into_iter().map(|u| (u, g.common_degree(v, u))).collect();
            // ≺_v ascending: by deg(v,u), ties by ≺.
            let mut by_v = n2.clone();
            by_v.sort_by_key(|&(u, d)| (d, g.rank(u)));
            let size = cap.min(by_v.len());
            let s: Vec<usize> = by_v.iter().rev().take(size).map(|&(u, _)| u).collect();
            let mut sorted = s.clone();
            sorted.sort_unstable();
            second.push(n2);
            special.push(s);
            special_sorted.push(sorted);
        }
        Ok(SpecialStructure { alpha, second, special, special_sorted })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// N²(v) with deg(v, u), sorted by ≺.
    pub fn second_neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.second[v]
    }

    /// S(v), listed from the largest element of ≺_v downwards.
    pub fn special_set(&self, v: usize) -> &[usize] {
        &self.special[v]
    }

    /// Whether `(v, u)` is special, i.e. `u ∈ S(v)`.
    pub fn is_special(&self, v: usize, u: usize) -> bool {
        self.special_sorted[v].binary_search(&u).is_ok()
    }

    /// Whether `u ∈ N²(v)`.
    pub fn is_second_neighbor(&self, v: usize, u: usize) -> bool {
        self.second[v].iter().any(|&(w, _)| w == u)
    }
}

/// ⌊αΔ^{4/3}⌋, guarded against the float landing just below an integer.
pub fn special_capacity(alpha: f64, delta: usize) -> usize {
    (alpha * (delta as f64).powf(4.0 / 3.0) + 1e-9).floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle() {
        let g = load_graph("3 3\n1 2\n2 3\n1 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn cycle_second_neighbors() {
        let g = load_graph("4 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
        assert_eq!(g.neighbors2(0), vec![2]);
    }

    #[test]
    fn star_has_no_second_neighbors_at_center() {
        let g = load_graph("5 4\n1 2\n1 3\n1 4\n1 5\n").unwrap();
        assert_eq!(g.max_degree(), 4);
        assert!(g.neighbors2(0).is_empty());
    }

    #[test]
    fn duplicates_collapse_and_comments_are_skipped() {
        let g = load_graph("# a path\n3 3\n1 2\n2 1 # again\n2 3\n").unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(load_graph("3 1\n1 1\n"), Err(GraphError::Parse { line: 2, msg: "loop edge at vertex 1".into() }));
        match load_graph("3 2\n1 2\n2 9\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match load_graph("3 1\n1 x\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn order_line_sets_precedence() {
        let g = load_graph("3 2\norder: 3 1 2\n1 2\n2 3\n").unwrap();
        assert!(g.precedes(2, 0));
        assert!(g.precedes(0, 1));
        assert_eq!(g.order(), &[2, 0, 1]);
        let again = load_graph(&g.to_string()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn special_set_on_c4() {
        let g = load_graph("4 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
        let ss = SpecialStructure::new(&g, 0.5).unwrap();
        assert_eq!(special_capacity(0.5, 2), 1);
        assert_eq!(ss.special_set(0), &[2]);
    }

    #[test]
    fn special_set_on_k23() {
        // parts {1,2} (degree 3) and {3,4,5}
        let g = load_graph("5 6\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n").unwrap();
        let ss = SpecialStructure::new(&g, 0.5).unwrap();
        assert_eq!(special_capacity(0.5, 3), 2);
        assert_eq!(ss.second_neighbors(0), &[(1, 3)]);
        assert_eq!(ss.special_set(0), &[1]);
    }

    #[test]
    fn special_set_empty_when_no_second_neighbors() {
        let g = load_graph("5 4\n1 2\n1 3\n1 4\n1 5\n").unwrap();
        let ss = SpecialStructure::new(&g, 1.0).unwrap();
        assert!(ss.special_set(0).is_empty());
    }

    #[test]
    fn rejects_bad_alpha() {
        let g = load_graph("2 1\n1 2\n").unwrap();
        assert!(SpecialStructure::new(&g, 0.0).is_err());
        assert!(SpecialStructure::new(&g, 1.5).is_err());
    }
}
