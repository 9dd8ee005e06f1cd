//! Concrete bad-event families: three acyclic-coloring variants, vertex and
//! edge non-repetitive coloring, and facial Thue coloring of vertices and
//! edges of plane graphs.
//!
//! Every family enumerates the candidate witnesses of one event type in a
//! fixed canonical order restricted to the current colored set, so a class
//! index `k` names a unique witness that the decoder can rebuild.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::engine::{BadEventFamily, ColoredSet, EventId, EventTypeMeta, FamilyError, PartialColoring};
use crate::graph::{Graph, GraphError, SpecialStructure};
use crate::plane::{MedialGraph, PlaneGraph};

#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("maximum degree {found} is below the required {required}")]
    DegreeTooSmall { required: usize, found: usize },
    #[error("gamma must be at least 1")]
    ZeroGamma,
    #[error("anchor edge {0} does not exist")]
    NoSuchEdge(usize),
    #[error("medial graph is disconnected")]
    MedialDisconnected,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug)]
enum PairGen {
    Neighbors,
    Special,
}

#[derive(Clone, Copy, Debug)]
enum AltGen {
    /// Cycles of the given length starting at the anchor.
    Cycle(usize),
    /// Induced 4-cycles `(v, a, u, b)` with `u ∈ N²(v) ∖ S(v)`.
    InducedFour,
    /// Paths `(u1, v, u3, u4, u5, u6)` with `u1 ≺ u3`.
    SixPath,
    /// Cycles `(u1, v, u3, ...)` of the given length with `u1 ≺ u3`.
    AnchoredCycle(usize),
}

#[derive(Clone, Copy, Debug)]
enum RepGen {
    VertexPath(usize),
    EdgePath(usize),
    Facial(usize),
}

/// Shape of a witness and how it is uncolored and rebuilt.
#[derive(Clone, Copy, Debug)]
enum Shape {
    /// `[v, u]` with equal colors; uncolor `v`.
    Pair(PairGen),
    /// Alternating two-colored sequence; uncolor all but the last two and
    /// restore from them.
    Alternating(AltGen),
    /// Sequence of length `2j` whose halves repeat; uncolor the anchor's half.
    Repetition(RepGen),
}

enum Selector {
    /// Smallest uncolored element in the given priority list.
    Order(Vec<usize>),
    /// Leaf of a BFS tree of the uncolored part of the medial graph.
    MedialTree { medial: MedialGraph, anchor: usize },
}

/// A bad-event family over vertices or edges of a graph.
pub struct Family {
    name: String,
    graph: Arc<Graph>,
    elements: usize,
    /// Elements are edges of the graph rather than vertices.
    on_edges: bool,
    metas: Vec<EventTypeMeta>,
    shapes: Vec<Shape>,
    special: Option<SpecialStructure>,
    /// `facial[j - 1][x]`: facial windows of `2j` elements through `x`.
    facial: Vec<Vec<Vec<Vec<usize>>>>,
    selector: Selector,
}

fn meta(name: String, cost: f64, uncolor_size: usize) -> EventTypeMeta {
    EventTypeMeta { name, cost, uncolor_size }
}

fn half_count(n: usize) -> usize {
    (n / 2).max(1)
}

/// Acyclic coloring: monochromatic edges and bicolored `2k`-cycles, with
/// cycle costs `½γΔ^{2k−2}` for graphs without `K_{2,γ+1}`.
pub fn acyclic_gamma(g: &Graph, gamma: usize) -> Result<Family, BuildError> {
    if gamma == 0 {
        return Err(BuildError::ZeroGamma);
    }
    let d = g.max_degree() as f64;
    let mut metas = vec![meta("monochromatic edge".into(), d, 1)];
    let mut shapes = vec![Shape::Pair(PairGen::Neighbors)];
    for k in 2..=g.n() / 2 {
        metas.push(meta(
            format!("bicolored {}-cycle", 2 * k),
            0.5 * gamma as f64 * d.powi(2 * k as i32 - 2),
            2 * k - 2,
        ));
        shapes.push(Shape::Alternating(AltGen::Cycle(2 * k)));
    }
    Ok(Family::vertex("acyclic-gamma", g, metas, shapes, None))
}

fn check_degree(g: &Graph) -> Result<(), BuildError> {
    if g.max_degree() < 2 {
        return Err(BuildError::DegreeTooSmall { required: 2, found: g.max_degree() });
    }
    Ok(())
}

fn special_metas(g: &Graph, alpha: f64) -> Vec<EventTypeMeta> {
    let d = g.max_degree() as f64;
    vec![meta("monochromatic edge".into(), d, 1), meta("special pair".into(), alpha * d.powf(4.0 / 3.0), 1)]
}

/// Acyclic coloring with special pairs: events N, S, C (induced 4-cycles
/// avoiding the special set) and P (six-vertex bicolored paths).
pub fn acyclic_v1(g: &Graph, alpha: f64) -> Result<Family, BuildError> {
    check_degree(g)?;
    let ss = SpecialStructure::new(g, alpha)?;
    let d = g.max_degree() as f64;
    let mut metas = special_metas(g, alpha);
    metas.push(meta("induced 4-cycle".into(), d.powf(8.0 / 3.0) / (8.0 * alpha), 2));
    metas.push(meta("bicolored 6-path".into(), 0.5 * d * (d - 1.0).powi(4), 4));
    let shapes = vec![
        Shape::Pair(PairGen::Neighbors),
        Shape::Pair(PairGen::Special),
        Shape::Alternating(AltGen::InducedFour),
        Shape::Alternating(AltGen::SixPath),
    ];
    Ok(Family::vertex("acyclic-v1", g, metas, shapes, Some(ss)))
}

/// Acyclic coloring with special pairs and a ladder of cycle events.
pub fn acyclic_v2(g: &Graph, alpha: f64) -> Result<Family, BuildError> {
    check_degree(g)?;
    let ss = SpecialStructure::new(g, alpha)?;
    let d = g.max_degree() as f64;
    let mut metas = special_metas(g, alpha);
    let mut shapes = vec![Shape::Pair(PairGen::Neighbors), Shape::Pair(PairGen::Special)];
    for k in 2..=g.n() / 2 {
        let cost =
            if k == 2 { d.powf(8.0 / 3.0) / (8.0 * alpha) } else { d.powf(2.0 * k as f64 - 4.0 / 3.0) / (2.0 * alpha) };
        metas.push(meta(format!("bicolored {}-cycle", 2 * k), cost, 2 * k - 2));
        shapes.push(Shape::Alternating(AltGen::AnchoredCycle(2 * k)));
    }
    Ok(Family::vertex("acyclic-v2", g, metas, shapes, Some(ss)))
}

/// Non-repetitive vertex coloring: repetitions on paths of `2j` vertices.
pub fn nonrepetitive_vertex(g: &Graph) -> Family {
    let d = g.max_degree() as f64;
    let (metas, shapes) = (1..=half_count(g.n()))
        .map(|j| {
            let cost = j as f64 * d.powi(2 * j as i32 - 1);
            (meta(format!("{}-vertex repetition", 2 * j), cost, j), Shape::Repetition(RepGen::VertexPath(j)))
        })
        .unzip();
    Family::vertex("nonrep-vertex", g, metas, shapes, None)
}

/// Non-repetitive edge coloring: repetitions on paths of `2j` edges.
pub fn nonrepetitive_edge(g: &Graph) -> Family {
    let d = g.max_degree() as f64;
    let (metas, shapes) = (1..=half_count(g.n()))
        .map(|j| {
            let cost = 2.0 * j as f64 * d.powi(2 * j as i32 - 1);
            (meta(format!("{}-edge repetition", 2 * j), cost, j), Shape::Repetition(RepGen::EdgePath(j)))
        })
        .unzip();
    Family {
        name: "nonrep-edge".into(),
        graph: Arc::new(g.clone()),
        elements: g.m(),
        on_edges: true,
        metas,
        shapes,
        special: None,
        facial: Vec::new(),
        selector: Selector::Order((0..g.m()).collect()),
    }
}

fn dedup_windows(paths: impl IntoIterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in paths {
        let mut rev = p.clone();
        rev.reverse();
        let key = if rev < p { rev } else { p.clone() };
        if seen.insert(key) {
            out.push(p);
        }
    }
    out
}

/// Facial Thue vertex coloring of a plane graph.
pub fn facial_thue_vertex(pg: &PlaneGraph) -> Family {
    let g = pg.graph();
    let d = g.max_degree() as f64;
    let jmax = half_count(g.n());
    let mut metas = Vec::new();
    let mut shapes = Vec::new();
    let mut facial = Vec::new();
    for j in 1..=jmax {
        let cost = if j == 1 { d } else { 2.0 * j as f64 * d };
        metas.push(meta(format!("facial {}-vertex repetition", 2 * j), cost, j));
        shapes.push(Shape::Repetition(RepGen::Facial(j)));
        facial.push(
            (0..g.n())
                .map(|v| dedup_windows(pg.facial_vertex_paths_through(v, 2 * j).into_iter().map(|p| p.elements)))
                .collect(),
        );
    }
    let mut fam = Family::vertex("facial-vertex", g, metas, shapes, None);
    fam.facial = facial;
    fam
}

/// Facial Thue edge coloring of a plane graph with every edge but the
/// anchor `e_star` colored. Edges are chosen as leaves of a BFS tree of the
/// uncolored part of the medial graph, so each anchor keeps an uncolored
/// facial neighbor.
pub fn facial_thue_edge(pg: &PlaneGraph, e_star: usize) -> Result<Family, BuildError> {
    let g = pg.graph();
    if e_star >= g.m() {
        return Err(BuildError::NoSuchEdge(e_star + 1));
    }
    let medial = pg.medial_graph();
    if !medial_connected(&medial, &ColoredSet::new(g.m()), e_star) {
        return Err(BuildError::MedialDisconnected);
    }
    let jmax = half_count(g.n());
    let mut metas = Vec::new();
    let mut shapes = Vec::new();
    let mut facial = Vec::new();
    for j in 1..=jmax {
        metas.push(meta(format!("facial {}-edge repetition", 2 * j), 1.0 + 2.0 * j as f64, j));
        shapes.push(Shape::Repetition(RepGen::Facial(j)));
        facial.push(
            (0..g.m())
                .map(|e| dedup_windows(pg.facial_edge_paths_through(e, 2 * j).into_iter().map(|p| p.elements)))
                .collect(),
        );
    }
    Ok(Family {
        name: "facial-edge".into(),
        graph: Arc::new(g.clone()),
        elements: g.m(),
        on_edges: true,
        metas,
        shapes,
        special: None,
        facial,
        selector: Selector::MedialTree { medial, anchor: e_star },
    })
}

/// Whether the uncolored edges form a connected subgraph of the medial
/// graph containing `anchor`.
fn medial_connected(medial: &MedialGraph, colored: &ColoredSet, anchor: usize) -> bool {
    let n = medial.vertex_count();
    let uncolored = n - colored.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([anchor]);
    seen[anchor] = true;
    let mut count = 1;
    while let Some(e) = queue.pop_front() {
        for &f in medial.neighbors(e) {
            if !seen[f] && !colored.contains(f) {
                seen[f] = true;
                count += 1;
                queue.push_back(f);
            }
        }
    }
    !colored.contains(anchor) && count == uncolored
}

/// Depth-first extension of a simple vertex path whose vertices all lie in
/// `allowed`, visiting neighbors in index order. `step` vets each appended
/// vertex; `leaf` receives complete paths and returns `false` to stop.
fn extend(
    g: &Graph,
    allowed: &dyn Fn(usize) -> bool,
    seq: &mut Vec<usize>,
    len: usize,
    step: &dyn Fn(&[usize]) -> bool,
    leaf: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if seq.len() == len {
        return leaf(seq);
    }
    let last = *seq.last().expect("non-empty prefix");
    for &w in g.neighbors(last) {
        if !allowed(w) || seq.contains(&w) {
            continue;
        }
        seq.push(w);
        let go = !step(seq) || extend(g, allowed, seq, len, step, leaf);
        seq.pop();
        if !go {
            return false;
        }
    }
    true
}

/// Pruning rule for alternating sequences: the newest element matches the
/// one two places back.
fn alternation_step(phi: Option<&PartialColoring>) -> impl Fn(&[usize]) -> bool + '_ {
    move |seq: &[usize]| {
        let i = seq.len() - 1;
        match phi {
            Some(p) if i >= 2 => p.get(seq[i]) == p.get(seq[i - 2]),
            _ => true,
        }
    }
}

impl Family {
    fn vertex(
        name: &str,
        g: &Graph,
        metas: Vec<EventTypeMeta>,
        shapes: Vec<Shape>,
        special: Option<SpecialStructure>,
    ) -> Family {
        Family {
            name: name.into(),
            graph: Arc::new(g.clone()),
            elements: g.n(),
            on_edges: false,
            metas,
            shapes,
            special,
            facial: Vec::new(),
            selector: Selector::Order(g.order().to_vec()),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Whether the colored elements are edges (indexed as in [`Graph::edges`]).
    pub fn colors_edges(&self) -> bool {
        self.on_edges
    }

    /// The anchor edge of the facial edge family.
    pub fn reserved_element(&self) -> Option<usize> {
        match &self.selector {
            Selector::MedialTree { anchor, .. } => Some(*anchor),
            Selector::Order(_) => None,
        }
    }

    /// `(C_j, s_j)` for every event type.
    pub fn terms(&self) -> Vec<(f64, usize)> {
        self.metas.iter().map(|m| (m.cost, m.uncolor_size)).collect()
    }

    /// All candidate witnesses of type `j` through `v` inside `colored`, in
    /// class order.
    pub fn candidates(&self, j: usize, v: usize, colored: &ColoredSet) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.enumerate(self.shapes[j - 1], v, colored, None, &mut |w| {
            out.push(w.to_vec());
            true
        });
        out
    }

    fn special(&self) -> &SpecialStructure {
        self.special.as_ref().expect("family built with special pairs")
    }

    fn enumerate(
        &self,
        shape: Shape,
        v: usize,
        x: &ColoredSet,
        prune: Option<&PartialColoring>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) {
        let g = &*self.graph;
        let inside = |u: usize| x.contains(u);
        let same = |a: usize, b: usize| prune.is_none_or(|p| p.get(a) == p.get(b));
        match shape {
            Shape::Pair(gen) => {
                let list: &[usize] = match gen {
                    PairGen::Neighbors => g.neighbors(v),
                    PairGen::Special => self.special().special_set(v),
                };
                for &u in list {
                    if same(u, v) && !visit(&[v, u]) {
                        return;
                    }
                }
            }
            Shape::Alternating(AltGen::Cycle(len)) => {
                let step = alternation_step(prune);
                let mut leaf = |s: &[usize]| {
                    if g.has_edge(s[len - 1], v) && g.precedes(s[1], s[len - 1]) {
                        visit(s)
                    } else {
                        true
                    }
                };
                extend(g, &inside, &mut vec![v], len, &step, &mut leaf);
            }
            Shape::Alternating(AltGen::InducedFour) => {
                let ss = self.special();
                for &(u, _) in ss.second_neighbors(v) {
                    if ss.is_special(v, u) || !inside(u) || !same(u, v) {
                        continue;
                    }
                    let common: Vec<usize> =
                        g.neighbors(v).iter().copied().filter(|&a| inside(a) && g.has_edge(a, u)).collect();
                    for &a in &common {
                        for &b in &common {
                            if g.precedes(a, b) && !g.has_edge(a, b) && same(a, b) && !visit(&[v, a, u, b]) {
                                return;
                            }
                        }
                    }
                }
            }
            Shape::Alternating(AltGen::SixPath) | Shape::Alternating(AltGen::AnchoredCycle(_)) => {
                let (len, cycle) = match shape {
                    Shape::Alternating(AltGen::AnchoredCycle(l)) => (l, true),
                    _ => (6, false),
                };
                let step = alternation_step(prune);
                let ss = self.special.as_ref();
                let mut leaf = |s: &[usize]| {
                    if !cycle {
                        return visit(s);
                    }
                    let (u1, last) = (s[0], s[len - 1]);
                    if !g.has_edge(last, u1) {
                        return true;
                    }
                    let ss = ss.expect("family built with special pairs");
                    let ok = if len == 4 {
                        !g.has_edge(s[0], s[2]) && !g.has_edge(v, last) && !ss.is_special(v, last)
                    } else {
                        let w = s[len - 2];
                        !g.has_edge(u1, w) && !(ss.is_special(u1, w) && ss.is_special(w, u1))
                    };
                    if ok {
                        visit(s)
                    } else {
                        true
                    }
                };
                for &u1 in g.neighbors(v) {
                    if !inside(u1) {
                        continue;
                    }
                    for &u3 in g.neighbors(v) {
                        if !inside(u3) || !g.precedes(u1, u3) || !same(u1, u3) {
                            continue;
                        }
                        let mut seq = vec![u1, v, u3];
                        if !extend(g, &inside, &mut seq, len, &step, &mut leaf) {
                            return;
                        }
                    }
                }
            }
            Shape::Repetition(RepGen::VertexPath(j)) => self.vertex_paths(v, j, x, prune, visit),
            Shape::Repetition(RepGen::EdgePath(j)) => self.edge_paths(v, j, x, prune, visit),
            Shape::Repetition(RepGen::Facial(j)) => {
                let Some(table) = self.facial.get(j - 1) else {
                    return;
                };
                for w in &table[v] {
                    if !w.iter().all(|&u| inside(u)) {
                        continue;
                    }
                    if prune.is_some_and(|p| !(0..j).all(|i| p.get(w[i]) == p.get(w[i + j]))) {
                        continue;
                    }
                    if !visit(w) {
                        return;
                    }
                }
            }
        }
    }

    /// Paths `a_1..a_{2j}` through `v` with `a_1 < a_{2j}`, ordered by the
    /// position of `v`, then the left part, then the right part.
    fn vertex_paths(
        &self,
        v: usize,
        j: usize,
        x: &ColoredSet,
        prune: Option<&PartialColoring>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) {
        let len = 2 * j;
        let g = &*self.graph;
        for p in 0..len {
            let mut slots = vec![usize::MAX; len];
            slots[p] = v;
            let mut walk = |slots: &mut Vec<usize>| -> bool {
                if slots[0] < slots[len - 1] {
                    visit(slots)
                } else {
                    true
                }
            };
            let same = |a: usize, b: usize| prune.is_none_or(|ph| ph.get(a) == ph.get(b));
            if !fill_path(g, &mut slots, (p, p), j, x, &same, &mut walk) {
                return;
            }
        }
    }

    /// Vertex-simple paths of `2j` edges through edge `e`, reported as edge
    /// index sequences with the first path vertex below the last.
    fn edge_paths(
        &self,
        e: usize,
        j: usize,
        x: &ColoredSet,
        prune: Option<&PartialColoring>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) {
        let g = &*self.graph;
        let len = 2 * j;
        let (a, b) = g.edges()[e];
        let eid = |u: usize, w: usize| g.edge_index(u, w).expect("edge exists");
        for p in 0..len {
            for (s, t) in [(a, b), (b, a)] {
                // vertices w_0..w_len; edge q joins w_q and w_{q+1}
                let mut verts = vec![usize::MAX; len + 1];
                verts[p] = s;
                verts[p + 1] = t;
                let mut edges_seq = vec![usize::MAX; len];
                edges_seq[p] = e;
                if !extend_edge_path(g, &mut verts, &mut edges_seq, p, p + 1, len, j, x, prune, &eid, visit) {
                    return;
                }
            }
        }
    }

    fn is_bad(&self, shape: Shape, w: &[usize], phi: &PartialColoring) -> bool {
        if w.iter().any(|&u| phi.get(u).is_none()) {
            return false;
        }
        match shape {
            Shape::Pair(_) => phi.get(w[0]) == phi.get(w[1]),
            Shape::Alternating(_) => {
                (2..w.len()).all(|i| phi.get(w[i]) == phi.get(w[i - 2])) && phi.get(w[0]) != phi.get(w[1])
            }
            Shape::Repetition(_) => {
                let j = w.len() / 2;
                (0..j).all(|i| phi.get(w[i]) == phi.get(w[i + j]))
            }
        }
    }

    fn uncolor(&self, shape: Shape, v: usize, w: &[usize]) -> Vec<usize> {
        match shape {
            Shape::Pair(_) => vec![v],
            Shape::Alternating(_) => w[..w.len() - 2].to_vec(),
            Shape::Repetition(_) => {
                let j = w.len() / 2;
                if w[..j].contains(&v) {
                    w[..j].to_vec()
                } else {
                    w[j..].to_vec()
                }
            }
        }
    }

    fn restore(
        &self,
        shape: Shape,
        v: usize,
        w: &[usize],
        after: &PartialColoring,
    ) -> Result<PartialColoring, FamilyError> {
        let color = |u: usize| {
            after.get(u).ok_or_else(|| FamilyError::Reconstruct(format!("source element {} is uncolored", u + 1)))
        };
        let mut before = after.clone();
        match shape {
            Shape::Pair(_) => before.set(v, color(w[1])?),
            Shape::Alternating(_) => {
                let l = w.len();
                let (even, odd) = (color(w[l - 2])?, color(w[l - 1])?);
                for (i, &u) in w[..l - 2].iter().enumerate() {
                    before.set(u, if i % 2 == 0 { even } else { odd });
                }
            }
            Shape::Repetition(_) => {
                let j = w.len() / 2;
                let first = w[..j].contains(&v);
                for i in 0..j {
                    let (dst, src) = if first { (w[i], w[i + j]) } else { (w[i + j], w[i]) };
                    before.set(dst, color(src)?);
                }
            }
        }
        Ok(before)
    }

    /// The `k`-th witness (1-based) of type `j` through `v` inside `x`.
    fn kth(&self, v: usize, x: &ColoredSet, ev: EventId) -> Result<(Shape, Vec<usize>), FamilyError> {
        let shape = *self
            .shapes
            .get(ev.j.wrapping_sub(1))
            .ok_or_else(|| FamilyError::Contract(format!("unknown event type {}", ev.j)))?;
        let mut seen = 0;
        let mut found = None;
        self.enumerate(shape, v, x, None, &mut |w| {
            seen += 1;
            if seen == ev.k {
                found = Some(w.to_vec());
                false
            } else {
                true
            }
        });
        let w = found.ok_or_else(|| {
            FamilyError::Contract(format!("type {} has {seen} witnesses, class {} requested", ev.j, ev.k))
        })?;
        Ok((shape, w))
    }
}

/// Fills the empty slots of a vertex path around the occupied range
/// `lo..=hi`, left side first.
fn fill_path(
    g: &Graph,
    slots: &mut Vec<usize>,
    (lo, hi): (usize, usize),
    j: usize,
    x: &ColoredSet,
    same: &dyn Fn(usize, usize) -> bool,
    done: &mut dyn FnMut(&mut Vec<usize>) -> bool,
) -> bool {
    let len = slots.len();
    // grow left to position 0 first, then right to len - 1
    let pos = if lo > 0 {
        lo - 1
    } else if hi + 1 < len {
        hi + 1
    } else {
        return done(slots);
    };
    let from = if pos < lo { slots[lo] } else { slots[hi] };
    for &w in g.neighbors(from) {
        if !x.contains(w) || slots.contains(&w) {
            continue;
        }
        let partner = if pos >= j { pos - j } else { pos + j };
        if slots[partner] != usize::MAX && !same(w, slots[partner]) {
            continue;
        }
        slots[pos] = w;
        let (nlo, nhi) = if pos < lo { (pos, hi) } else { (lo, pos) };
        let go = fill_path(g, slots, (nlo, nhi), j, x, same, done);
        slots[pos] = usize::MAX;
        if !go {
            return false;
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn extend_edge_path(
    g: &Graph,
    verts: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    lo: usize,
    hi: usize,
    len: usize,
    j: usize,
    x: &ColoredSet,
    prune: Option<&PartialColoring>,
    eid: &dyn Fn(usize, usize) -> usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    // edge slot q lies between vertex slots q and q + 1
    let (slot, from, edge_slot) = if lo > 0 {
        (lo - 1, verts[lo], lo - 1)
    } else if hi < len {
        (hi + 1, verts[hi], hi)
    } else {
        if verts[0] < verts[len] {
            return visit(edges);
        }
        return true;
    };
    for &w in g.neighbors(from) {
        if verts.contains(&w) {
            continue;
        }
        let e = eid(from, w);
        if !x.contains(e) {
            continue;
        }
        let partner = if edge_slot >= j { edge_slot - j } else { edge_slot + j };
        if let Some(p) = prune {
            if edges[partner] != usize::MAX && p.get(e) != p.get(edges[partner]) {
                continue;
            }
        }
        verts[slot] = w;
        edges[edge_slot] = e;
        let (nlo, nhi) = if slot < lo { (slot, hi) } else { (lo, slot) };
        let go = extend_edge_path(g, verts, edges, nlo, nhi, len, j, x, prune, eid, visit);
        verts[slot] = usize::MAX;
        edges[edge_slot] = usize::MAX;
        if !go {
            return false;
        }
    }
    true
}

impl BadEventFamily for Family {
    fn name(&self) -> &str {
        &self.name
    }

    fn element_count(&self) -> usize {
        self.elements
    }

    fn metas(&self) -> &[EventTypeMeta] {
        &self.metas
    }

    fn next_uncolored(&self, colored: &ColoredSet) -> Option<usize> {
        match &self.selector {
            Selector::Order(order) => order.iter().copied().find(|&v| !colored.contains(v)),
            Selector::MedialTree { medial, anchor } => {
                let n = medial.vertex_count();
                let mut seen = vec![false; n];
                let mut children = vec![0usize; n];
                let mut queue = VecDeque::from([*anchor]);
                seen[*anchor] = true;
                let mut reached = Vec::new();
                while let Some(e) = queue.pop_front() {
                    for &f in medial.neighbors(e) {
                        if !seen[f] && !colored.contains(f) {
                            seen[f] = true;
                            children[e] += 1;
                            reached.push(f);
                            queue.push_back(f);
                        }
                    }
                }
                reached.into_iter().filter(|&f| children[f] == 0).min()
            }
        }
    }

    fn detect(&self, phi: &PartialColoring, v: usize) -> Result<Option<EventId>, FamilyError> {
        if let Selector::MedialTree { medial, .. } = &self.selector {
            if !medial.neighbors(v).iter().any(|&f| phi.get(f).is_none()) {
                return Err(FamilyError::Contract(format!("edge {} has no uncolored facial neighbor", v + 1)));
            }
        }
        let x = phi.colored_set();
        for (idx, &shape) in self.shapes.iter().enumerate() {
            let mut found = None;
            self.enumerate(shape, v, &x, Some(phi), &mut |w| {
                if self.is_bad(shape, w, phi) {
                    found = Some(w.to_vec());
                    false
                } else {
                    true
                }
            });
            if let Some(w) = found {
                let mut k = 0;
                self.enumerate(shape, v, &x, None, &mut |c| {
                    k += 1;
                    c != w.as_slice()
                });
                return Ok(Some(EventId { j: idx + 1, k }));
            }
        }
        Ok(None)
    }

    fn uncolor_set(&self, v: usize, colored: &ColoredSet, event: EventId) -> Result<Vec<usize>, FamilyError> {
        let (shape, w) = self.kth(v, colored, event)?;
        Ok(self.uncolor(shape, v, &w))
    }

    fn reconstruct(
        &self,
        v: usize,
        colored: &ColoredSet,
        event: EventId,
        after: &PartialColoring,
    ) -> Result<PartialColoring, FamilyError> {
        let (shape, w) = self.kth(v, colored, event)?;
        if self.uncolor(shape, v, &w).iter().any(|&u| after.get(u).is_some()) {
            return Err(FamilyError::Reconstruct("uncolored part of the witness is colored".into()));
        }
        let before = self.restore(shape, v, &w, after)?;
        if !self.is_bad(shape, &w, &before) {
            return Err(FamilyError::Reconstruct(format!("witness of type {} is not bad", event.j)));
        }
        Ok(before)
    }

    fn check_invariant(&self, colored: &ColoredSet) -> Result<(), FamilyError> {
        if let Selector::MedialTree { medial, anchor } = &self.selector {
            if !medial_connected(medial, colored, *anchor) {
                return Err(FamilyError::Invariant("uncolored edges are disconnected in the medial graph".into()));
            }
        }
        Ok(())
    }
}
