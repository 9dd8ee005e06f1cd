//! Brute-force checkers for coloring properties. Nothing here calls into the
//! bad-event families; every check enumerates its own structures.
//!
//! Colorings are slices indexed by vertex (or by edge index for the edge
//! scopes). Uncolored entries never take part in a violation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::engine::Color;
use crate::graph::Graph;
use crate::plane::PlaneGraph;

/// Vertex limit for the exhaustive path and cycle enumerations.
pub const ENUMERATION_LIMIT: usize = 14;
/// Vertex limit for patterns in [`check_pair_forbidden`].
pub const PATTERN_LIMIT: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidateError {
    #[error("graph has {n} vertices; exhaustive check is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("pattern has {n} vertices; limit is {limit}")]
    PatternTooLarge { n: usize, limit: usize },
    #[error("coloring has {got} entries, expected {expected}")]
    Length { got: usize, expected: usize },
}

/// What a rejected coloring contains. Vertices and edges are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MonochromaticEdge(usize, usize),
    BicoloredCycle(Vec<usize>),
    /// Elements of a path whose first half repeats as its second half.
    Repetition(Vec<usize>),
    /// A cycle with fewer than min(|C|, r) colors.
    ColorPoorCycle(Vec<usize>),
    /// Image of each pattern vertex in a two-colored copy.
    PatternCopy(Vec<usize>),
    /// A path on four vertices colored a, b, a, b.
    BicoloredPath(Vec<usize>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
        match self {
            Violation::MonochromaticEdge(u, v) => {
                write!(f, "monochromatic edge {} {}", u + 1, v + 1)
            }
            Violation::BicoloredCycle(c) => write!(f, "bicolored cycle {}", list(c)),
            Violation::Repetition(p) => write!(f, "repetition {}", list(p)),
            Violation::ColorPoorCycle(c) => write!(f, "cycle with too few colors {}", list(c)),
            Violation::PatternCopy(m) => write!(f, "two-colored pattern copy {}", list(m)),
            Violation::BicoloredPath(p) => write!(f, "bicolored path {}", list(p)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Violation),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

fn expect_len(colors: &[Option<Color>], expected: usize) -> Result<(), ValidateError> {
    if colors.len() != expected {
        return Err(ValidateError::Length { got: colors.len(), expected });
    }
    Ok(())
}

fn guard(n: usize) -> Result<(), ValidateError> {
    if n > ENUMERATION_LIMIT {
        return Err(ValidateError::TooLarge { n, limit: ENUMERATION_LIMIT });
    }
    Ok(())
}

pub fn check_proper(g: &Graph, colors: &[Option<Color>]) -> Result<Verdict, ValidateError> {
    expect_len(colors, g.n())?;
    for &(u, v) in g.edges() {
        if colors[u].is_some() && colors[u] == colors[v] {
            return Ok(Verdict::Reject(Violation::MonochromaticEdge(u, v)));
        }
    }
    Ok(Verdict::Accept)
}

/// Proper, and every two color classes induce a forest.
pub fn check_acyclic(g: &Graph, colors: &[Option<Color>]) -> Result<Verdict, ValidateError> {
    let proper = check_proper(g, colors)?;
    if !proper.is_accept() {
        return Ok(proper);
    }
    let palette: BTreeSet<Color> = colors.iter().flatten().copied().collect();
    let palette: Vec<Color> = palette.into_iter().collect();
    for (i, &a) in palette.iter().enumerate() {
        for &b in &palette[i + 1..] {
            let inside = |v: usize| matches!(colors[v], Some(c) if c == a || c == b);
            if let Some(cycle) = find_cycle(g, &inside) {
                return Ok(Verdict::Reject(Violation::BicoloredCycle(cycle)));
            }
        }
    }
    Ok(Verdict::Accept)
}

/// A cycle in the subgraph induced by `inside`, via DFS with parent links.
fn find_cycle(g: &Graph, inside: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    for root in (0..n).filter(|&v| inside(v)) {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !inside(w) || w == parent[v] {
                    continue;
                }
                if seen[w] {
                    return Some(tree_cycle(&parent, v, w));
                }
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    None
}

/// Cycle closed by the non-tree edge v–w.
fn tree_cycle(parent: &[usize], v: usize, w: usize) -> Vec<usize> {
    let ancestors = |mut x: usize| {
        let mut out = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            out.push(x);
        }
        out
    };
    let av = ancestors(v);
    let aw = ancestors(w);
    let lca = *av.iter().find(|x| aw.contains(x)).expect("same tree");
    let mut cycle: Vec<usize> = av.iter().copied().take_while(|&x| x != lca).collect();
    cycle.push(lca);
    let tail: Vec<usize> = aw.iter().copied().take_while(|&x| x != lca).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

/// Which sequences a non-repetitiveness check ranges over.
#[derive(Clone, Copy, Debug)]
pub enum Scope<'a> {
    /// Vertex colors along every simple path.
    AllPaths,
    /// Edge colors along every simple path; colors indexed by edge index.
    Edges,
    /// Vertex colors along facial paths.
    FacialVertices(&'a PlaneGraph),
    /// Edge colors along facial paths; colors indexed by edge index.
    FacialEdges(&'a PlaneGraph),
}

fn repeats(seq: &[Option<Color>]) -> bool {
    let h = seq.len() / 2;
    seq.iter().all(Option::is_some) && seq[..h] == seq[h..]
}

/// Rejects on any sequence of even length whose halves coincide.
pub fn check_nonrepetitive(g: &Graph, colors: &[Option<Color>], scope: Scope<'_>) -> Result<Verdict, ValidateError> {
    match scope {
        Scope::AllPaths => {
            expect_len(colors, g.n())?;
            guard(g.n())?;
            Ok(simple_paths_violation(g, &mut |path| {
                (path.len() % 2 == 0 && repeats(&path.iter().map(|&v| colors[v]).collect::<Vec<_>>()))
                    .then(|| Violation::Repetition(path.to_vec()))
            }))
        }
        Scope::Edges => {
            expect_len(colors, g.m())?;
            guard(g.n())?;
            Ok(simple_paths_violation(g, &mut |path| {
                if path.len() % 2 == 0 {
                    return None;
                }
                let edges: Vec<usize> = path.windows(2).map(|w| g.edge_index(w[0], w[1]).expect("path edge")).collect();
                repeats(&edges.iter().map(|&e| colors[e]).collect::<Vec<_>>()).then_some(Violation::Repetition(edges))
            }))
        }
        Scope::FacialVertices(pg) => {
            expect_len(colors, g.n())?;
            Ok(facial_violation(pg, colors, false))
        }
        Scope::FacialEdges(pg) => {
            expect_len(colors, g.m())?;
            Ok(facial_violation(pg, colors, true))
        }
    }
}

/// Runs `test` on every simple path with at least two vertices, in both
/// directions, stopping at the first violation.
fn simple_paths_violation(g: &Graph, test: &mut dyn FnMut(&[usize]) -> Option<Violation>) -> Verdict {
    fn grow(
        g: &Graph,
        path: &mut Vec<usize>,
        on: &mut [bool],
        test: &mut dyn FnMut(&[usize]) -> Option<Violation>,
    ) -> Option<Violation> {
        if path.len() >= 2 {
            if let Some(v) = test(path) {
                return Some(v);
            }
        }
        let last = *path.last().expect("non-empty");
        for &w in g.neighbors(last) {
            if on[w] {
                continue;
            }
            on[w] = true;
            path.push(w);
            let found = grow(g, path, on, test);
            path.pop();
            on[w] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }
    let mut on = vec![false; g.n()];
    for s in 0..g.n() {
        on[s] = true;
        let found = grow(g, &mut vec![s], &mut on, test);
        on[s] = false;
        if let Some(v) = found {
            return Verdict::Reject(v);
        }
    }
    Verdict::Accept
}

fn facial_violation(pg: &PlaneGraph, colors: &[Option<Color>], edges: bool) -> Verdict {
    let g = pg.graph();
    for face in pg.faces() {
        let size = face.len();
        let tails: Vec<usize> = face.iter().map(|&(u, _)| u).collect();
        for start in 0..size {
            let mut len = 2;
            while len <= size {
                let span = if edges { len + 1 } else { len };
                let verts: Vec<usize> = (0..span).map(|i| tails[(start + i) % size]).collect();
                let distinct = verts.iter().collect::<BTreeSet<_>>().len() == span;
                if span <= size && distinct {
                    let elems: Vec<usize> = if edges {
                        verts.windows(2).map(|w| g.edge_index(w[0], w[1]).expect("face edge")).collect()
                    } else {
                        verts
                    };
                    if repeats(&elems.iter().map(|&x| colors[x]).collect::<Vec<_>>()) {
                        return Verdict::Reject(Violation::Repetition(elems));
                    }
                }
                len += 2;
            }
        }
    }
    Verdict::Accept
}

/// Proper, and every cycle C carries at least min(|C|, r) colors.
pub fn check_r_acyclic(g: &Graph, colors: &[Option<Color>], r: usize) -> Result<Verdict, ValidateError> {
    guard(g.n())?;
    let proper = check_proper(g, colors)?;
    if !proper.is_accept() {
        return Ok(proper);
    }
    // Cycles are grown from their smallest vertex.
    fn grow(
        g: &Graph,
        colors: &[Option<Color>],
        r: usize,
        path: &mut Vec<usize>,
        on: &mut [bool],
    ) -> Option<Vec<usize>> {
        let start = path[0];
        let last = *path.last().expect("non-empty");
        for &w in g.neighbors(last) {
            if w == start && path.len() >= 3 && path[1] < last {
                if path.iter().all(|&v| colors[v].is_some()) {
                    let used: BTreeSet<Color> = path.iter().filter_map(|&v| colors[v]).collect();
                    if used.len() < r.min(path.len()) {
                        return Some(path.clone());
                    }
                }
                continue;
            }
            if w <= start || on[w] {
                continue;
            }
            on[w] = true;
            path.push(w);
            let found = grow(g, colors, r, path, on);
            path.pop();
            on[w] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }
    let mut on = vec![false; g.n()];
    for s in 0..g.n() {
        on[s] = true;
        let found = grow(g, colors, r, &mut vec![s], &mut on);
        on[s] = false;
        if let Some(c) = found {
            return Ok(Verdict::Reject(Violation::ColorPoorCycle(c)));
        }
    }
    Ok(Verdict::Accept)
}

/// Proper, and no two color classes together contain a (not necessarily
/// induced) copy of `pattern`.
pub fn check_pair_forbidden(g: &Graph, colors: &[Option<Color>], pattern: &Graph) -> Result<Verdict, ValidateError> {
    guard(g.n())?;
    if pattern.n() > PATTERN_LIMIT {
        return Err(ValidateError::PatternTooLarge { n: pattern.n(), limit: PATTERN_LIMIT });
    }
    let proper = check_proper(g, colors)?;
    if !proper.is_accept() || pattern.n() > g.n() {
        return Ok(proper);
    }
    let palette: Vec<Color> = colors.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    for (i, &a) in palette.iter().enumerate() {
        for &b in &palette[i + 1..] {
            let inside = |v: usize| matches!(colors[v], Some(c) if c == a || c == b);
            let mut map = Vec::with_capacity(pattern.n());
            let mut used = vec![false; g.n()];
            if embed(g, pattern, &inside, &mut map, &mut used) {
                return Ok(Verdict::Reject(Violation::PatternCopy(map)));
            }
        }
    }
    Ok(Verdict::Accept)
}

/// Backtracking: extends `map` (pattern vertex i ↦ map[i]) one vertex at a time.
fn embed(g: &Graph, h: &Graph, inside: &dyn Fn(usize) -> bool, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = map.len();
    if i == h.n() {
        return true;
    }
    for x in 0..g.n() {
        if !inside(x) || used[x] {
            continue;
        }
        let fits = h.neighbors(i).iter().filter(|&&p| p < i).all(|&p| g.has_edge(map[p], x));
        if !fits {
            continue;
        }
        used[x] = true;
        map.push(x);
        if embed(g, h, inside, map, used) {
            return true;
        }
        map.pop();
        used[x] = false;
    }
    false
}

/// Star coloring: proper, and no path on four vertices colored a, b, a, b.
pub fn check_star(g: &Graph, colors: &[Option<Color>]) -> Result<Verdict, ValidateError> {
    let proper = check_proper(g, colors)?;
    if !proper.is_accept() {
        return Ok(proper);
    }
    for b in 0..g.n() {
        for &c in g.neighbors(b) {
            for &a in g.neighbors(b).iter().filter(|&&a| a != c) {
                for &d in g.neighbors(c).iter().filter(|&&d| d != b && d != a) {
                    let col = |v: usize| colors[v];
                    if col(a).is_some() && col(b).is_some() && col(a) == col(c) && col(b) == col(d) {
                        return Ok(Verdict::Reject(Violation::BicoloredPath(vec![a, b, c, d])));
                    }
                }
            }
        }
    }
    Ok(Verdict::Accept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path};
    use crate::plane::plane_cycle;

    fn col(v: &[u32]) -> Vec<Option<Color>> {
        v.iter().map(|&c| (c > 0).then_some(c)).collect()
    }

    #[test]
    fn proper_examples() {
        let k3 = complete(3);
        assert!(check_proper(&k3, &col(&[1, 2, 3])).unwrap().is_accept());
        assert_eq!(check_proper(&k3, &col(&[1, 1, 2])).unwrap(), Verdict::Reject(Violation::MonochromaticEdge(0, 1)));
        assert!(check_proper(&k3, &col(&[1, 0, 0])).unwrap().is_accept());
        assert!(check_proper(&k3, &col(&[1, 2])).is_err());
    }

    #[test]
    fn acyclic_examples() {
        let c4 = cycle(4);
        match check_acyclic(&c4, &col(&[1, 2, 1, 2])).unwrap() {
            Verdict::Reject(Violation::BicoloredCycle(c)) => assert_eq!(c.len(), 4),
            other => panic!("{other:?}"),
        }
        assert!(check_acyclic(&c4, &col(&[1, 2, 1, 3])).unwrap().is_accept());
        assert!(check_acyclic(&path(6), &col(&[1, 2, 1, 2, 1, 2])).unwrap().is_accept());
    }

    #[test]
    fn nonrepetitive_examples() {
        let p4 = path(4);
        assert!(!check_nonrepetitive(&p4, &col(&[1, 2, 1, 2]), Scope::AllPaths).unwrap().is_accept());
        assert!(check_nonrepetitive(&path(3), &col(&[1, 2, 1]), Scope::AllPaths).unwrap().is_accept());
        let pc = plane_cycle(4);
        assert!(check_nonrepetitive(pc.graph(), &col(&[1, 2, 3, 2]), Scope::FacialVertices(&pc)).unwrap().is_accept());
        assert!(!check_nonrepetitive(pc.graph(), &col(&[1, 2, 1, 2]), Scope::FacialVertices(&pc)).unwrap().is_accept());
        assert!(check_nonrepetitive(&path(15), &col(&[1; 15]), Scope::AllPaths).is_err());
    }

    #[test]
    fn edge_scopes() {
        let p5 = path(5);
        assert!(!check_nonrepetitive(&p5, &col(&[1, 2, 1, 2]), Scope::Edges).unwrap().is_accept());
        assert!(check_nonrepetitive(&p5, &col(&[1, 2, 3, 1]), Scope::Edges).unwrap().is_accept());
        let pc = plane_cycle(3);
        assert!(check_nonrepetitive(pc.graph(), &col(&[1, 2, 3]), Scope::FacialEdges(&pc)).unwrap().is_accept());
        assert!(!check_nonrepetitive(pc.graph(), &col(&[1, 1, 2]), Scope::FacialEdges(&pc)).unwrap().is_accept());
    }

    #[test]
    fn r_acyclic_examples() {
        assert!(check_r_acyclic(&cycle(5), &col(&[1, 2, 3, 4, 5]), 5).unwrap().is_accept());
        assert!(!check_r_acyclic(&cycle(6), &col(&[1, 2, 3, 1, 2, 3]), 4).unwrap().is_accept());
        assert!(check_r_acyclic(&cycle(6), &col(&[1, 2, 3, 1, 2, 3]), 3).unwrap().is_accept());
    }

    #[test]
    fn pair_forbidden_examples() {
        let c4 = cycle(4);
        assert!(!check_pair_forbidden(&c4, &col(&[1, 2, 1, 2]), &cycle(4)).unwrap().is_accept());
        assert!(check_pair_forbidden(&path(3), &col(&[1, 2, 1]), &path(5)).unwrap().is_accept());
        assert!(!check_pair_forbidden(&path(4), &col(&[1, 2, 1, 2]), &path(4)).unwrap().is_accept());
        assert!(!check_star(&path(4), &col(&[1, 2, 1, 2])).unwrap().is_accept());
        assert!(check_star(&path(4), &col(&[1, 2, 1, 3])).unwrap().is_accept());
    }
}
