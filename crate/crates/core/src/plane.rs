//! Combinatorial plane embeddings given as rotation systems: face tracing,
//! facial paths and the medial graph.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, PartialEq)]
pub enum EmbeddingError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("rotation at vertex {vertex} is not a permutation of its neighbors")]
    Inconsistent { vertex: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A path of consecutive elements (vertices or edge indices) on one face walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacialPath {
    pub face: usize,
    pub offset: usize,
    pub elements: Vec<usize>,
}

/// Graph plus a rotation system and its traced faces.
#[derive(Clone, Debug)]
pub struct PlaneGraph {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    /// Each face is a cyclic sequence of directed edges.
    faces: Vec<Vec<(usize, usize)>>,
}

impl PlaneGraph {
    /// Builds an embedding from per-vertex counterclockwise neighbor lists.
    /// The underlying graph is read off the rotation.
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Result<Self, EmbeddingError> {
        let n = rotation.len();
        let mut edges = Vec::new();
        for (v, list) in rotation.iter().enumerate() {
            for &w in list {
                edges.push((v, w));
            }
        }
        let graph = Graph::new(n, edges)?;
        PlaneGraph::new(graph, rotation)
    }

    pub fn new(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<Self, EmbeddingError> {
        if rotation.len() != graph.n() {
            return Err(EmbeddingError::Inconsistent { vertex: rotation.len().min(graph.n()) + 1 });
        }
        for (v, list) in rotation.iter().enumerate() {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            if sorted != graph.neighbors(v) {
                return Err(EmbeddingError::Inconsistent { vertex: v + 1 });
            }
        }
        let faces = trace_faces(&rotation);
        Ok(PlaneGraph { graph, rotation, faces })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn faces(&self) -> &[Vec<(usize, usize)>] {
        &self.faces
    }

    /// n − m + f.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.n() as i64 - self.graph.m() as i64 + self.faces.len() as i64
    }

    /// Vertex sequence of face `f` (tails of its directed edges).
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&(u, _)| u).collect()
    }

    /// Edge-index sequence of face `f`.
    pub fn face_edges(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&(u, v)| self.graph.edge_index(u, v).expect("face edge exists")).collect()
    }

    /// Simple facial paths on `len` vertices containing `v`, ordered by face
    /// then offset. A path met in both directions on one walk is kept once.
    pub fn facial_vertex_paths_through(&self, v: usize, len: usize) -> Vec<FacialPath> {
        let mut out = Vec::new();
        for f in 0..self.faces.len() {
            let walk = self.face_vertices(f);
            windows_through(&walk, len, v, f, distinct, &mut out);
        }
        out
    }

    /// Facial paths of `len` edges containing edge `e`, with all `len + 1`
    /// vertices distinct.
    pub fn facial_edge_paths_through(&self, e: usize, len: usize) -> Vec<FacialPath> {
        let mut out = Vec::new();
        for f in 0..self.faces.len() {
            let walk = self.face_edges(f);
            let verts = self.face_vertices(f);
            let size = walk.len();
            let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
            for offset in 0..size {
                if len > size {
                    break;
                }
                let elems: Vec<usize> = (0..len).map(|i| walk[(offset + i) % size]).collect();
                if !elems.contains(&e) {
                    continue;
                }
                let path_verts: Vec<usize> = (0..=len).map(|i| verts[(offset + i) % size]).collect();
                if !distinct(&path_verts) {
                    continue;
                }
                if seen.insert(canonical(&elems)) {
                    out.push(FacialPath { face: f, offset, elements: elems });
                }
            }
        }
        out
    }

    /// Whether distinct edges `e` and `f` are consecutive on some face walk.
    pub fn facially_adjacent(&self, e: usize, f: usize) -> bool {
        self.medial_graph().neighbors(e).contains(&f)
    }

    /// Graph on the edge indices with facial adjacency.
    pub fn medial_graph(&self) -> MedialGraph {
        let m = self.graph.m();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
        for f in 0..self.faces.len() {
            let walk = self.face_edges(f);
            let size = walk.len();
            for i in 0..size {
                let (a, b) = (walk[i], walk[(i + 1) % size]);
                if a != b {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        MedialGraph { adj: adj.into_iter().map(|s| s.into_iter().collect()).collect() }
    }
}

fn distinct(xs: &[usize]) -> bool {
    let mut s: Vec<usize> = xs.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

fn canonical(xs: &[usize]) -> Vec<usize> {
    let rev: Vec<usize> = xs.iter().rev().copied().collect();
    if rev < xs.to_vec() {
        rev
    } else {
        xs.to_vec()
    }
}

fn windows_through(
    walk: &[usize],
    len: usize,
    x: usize,
    face: usize,
    ok: impl Fn(&[usize]) -> bool,
    out: &mut Vec<FacialPath>,
) {
    let size = walk.len();
    if len > size || len == 0 {
        return;
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for offset in 0..size {
        let elems: Vec<usize> = (0..len).map(|i| walk[(offset + i) % size]).collect();
        if elems.contains(&x) && ok(&elems) && seen.insert(canonical(&elems)) {
            out.push(FacialPath { face, offset, elements: elems });
        }
    }
}

/// Traces faces with the rule: the successor of `(u, v)` is `(v, w)` where
/// `w` follows `u` in the rotation at `v`.
pub fn trace_faces(rotation: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
    for (v, list) in rotation.iter().enumerate() {
        for (i, &w) in list.iter().enumerate() {
            pos.insert((v, w), i);
        }
    }
    let mut visited: HashMap<(usize, usize), bool> = HashMap::new();
    let mut faces = Vec::new();
    for (u, list) in rotation.iter().enumerate() {
        for &v in list {
            if visited.contains_key(&(u, v)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (u, v);
            while !visited.contains_key(&(a, b)) {
                visited.insert((a, b), true);
                face.push((a, b));
                let rot = &rotation[b];
                let i = pos[&(b, a)];
                let w = rot[(i + 1) % rot.len()];
                a = b;
                b = w;
            }
            faces.push(face);
        }
    }
    faces
}

/// Facial-adjacency graph on the edges of a plane graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MedialGraph {
    adj: Vec<Vec<usize>>,
}

impl MedialGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Facial neighbors of edge `e`, ascending by index.
    pub fn neighbors(&self, e: usize) -> &[usize] {
        &self.adj[e]
    }

    pub fn degree(&self, e: usize) -> usize {
        self.adj[e].len()
    }
}

/// Parses the rotation-system format: header `n m`, then one line
/// `v: w1 w2 ... wk` per vertex giving its counterclockwise neighbor order.
pub fn load_rotation(text: &str) -> Result<PlaneGraph, EmbeddingError> {
    let mut header: Option<(usize, usize)> = None;
    let mut rotation: Vec<Option<Vec<usize>>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let num = |tok: &str| -> Result<usize, EmbeddingError> {
            tok.parse().map_err(|_| EmbeddingError::Parse { line, msg: format!("expected an integer, found {tok:?}") })
        };
        match header {
            None => {
                let toks: Vec<&str> = content.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(EmbeddingError::Parse { line, msg: "expected header \"n m\"".into() });
                }
                let n = num(toks[0])?;
                header = Some((n, num(toks[1])?));
                rotation = vec![None; n];
            }
            Some((n, _)) => {
                let (head, rest) = content
                    .split_once(':')
                    .ok_or(EmbeddingError::Parse { line, msg: "expected \"v: w1 ... wk\"".into() })?;
                let v = num(head.trim())?;
                if v == 0 || v > n {
                    return Err(EmbeddingError::Parse { line, msg: format!("vertex {v} out of range 1..={n}") });
                }
                let mut list = Vec::new();
                for tok in rest.split_whitespace() {
                    let w = num(tok)?;
                    if w == 0 || w > n || w == v {
                        return Err(EmbeddingError::Parse { line, msg: format!("bad neighbor {w} of vertex {v}") });
                    }
                    list.push(w - 1);
                }
                if rotation[v - 1].is_some() {
                    return Err(EmbeddingError::Parse { line, msg: format!("vertex {v} listed twice") });
                }
                rotation[v - 1] = Some(list);
            }
        }
    }
    let (_, m) = header.ok_or(EmbeddingError::Parse { line: 1, msg: "missing header".into() })?;
    let rotation: Vec<Vec<usize>> = rotation.into_iter().map(Option::unwrap_or_default).collect();
    for (v, list) in rotation.iter().enumerate() {
        if !distinct(list) {
            return Err(EmbeddingError::Inconsistent { vertex: v + 1 });
        }
        for &w in list {
            if !rotation[w].contains(&v) {
                return Err(EmbeddingError::Inconsistent { vertex: v + 1 });
            }
        }
    }
    let pg = PlaneGraph::from_rotation(rotation)?;
    if pg.graph().m() != m {
        return Err(EmbeddingError::Parse {
            line: 1,
            msg: format!("header announces {m} edges but the rotation has {}", pg.graph().m()),
        });
    }
    Ok(pg)
}

/// Writes the rotation-system format read by [`load_rotation`].
pub fn write_rotation(pg: &PlaneGraph) -> String {
    let mut s = format!("{} {}\n", pg.graph().n(), pg.graph().m());
    for v in 0..pg.graph().n() {
        let items: Vec<String> = pg.rotation(v).iter().map(|w| (w + 1).to_string()).collect();
        s.push_str(&format!("{}: {}\n", v + 1, items.join(" ")));
    }
    s
}

/// Rotation system from oriented triangular faces: face `(x, y, z)` means
/// that at `y`, `z` follows `x`.
fn rotation_from_triangles(n: usize, faces: &[[usize; 3]]) -> Vec<Vec<usize>> {
    let mut next: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    for &[a, b, c] in faces {
        next[b].insert(a, c);
        next[c].insert(b, a);
        next[a].insert(c, b);
    }
    let mut rotation = Vec::with_capacity(n);
    for map in next.iter() {
        let mut list = Vec::new();
        if let Some(&start) = map.keys().min() {
            let mut cur = start;
            loop {
                list.push(cur);
                cur = map[&cur];
                if cur == start {
                    break;
                }
            }
        }
        rotation.push(list);
    }
    rotation
}

/// Random plane triangulation on `n ≥ 3` vertices: repeated face
/// subdivision followed by `flips` random edge flips.
pub fn random_triangulation<R: Rng>(n: usize, flips: usize, rng: &mut R) -> PlaneGraph {
    assert!(n >= 3, "a triangulation needs at least 3 vertices");
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for x in 3..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(i);
        faces.push([a, b, x]);
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }
    for _ in 0..flips {
        let i = rng.gen_range(0..faces.len());
        let r = rng.gen_range(0..3);
        let f = faces[i];
        let (u, v, x) = (f[r], f[(r + 1) % 3], f[(r + 2) % 3]);
        // the face across the directed edge (u, v) contains (v, u)
        let Some(j) = (0..faces.len()).find(|&j| {
            let g = faces[j];
            (0..3).any(|s| g[s] == v && g[(s + 1) % 3] == u)
        }) else {
            continue;
        };
        let g = faces[j];
        let y = *g.iter().find(|&&w| w != u && w != v).expect("triangle");
        if x == y || faces.iter().any(|h| h.contains(&x) && h.contains(&y)) {
            continue;
        }
        faces[i] = [u, y, x];
        faces[j] = [y, v, x];
    }
    faces.shuffle(rng);
    PlaneGraph::from_rotation(rotation_from_triangles(n, &faces)).expect("triangulation is consistent")
}

/// The cycle C_n drawn in the plane (two faces).
pub fn plane_cycle(n: usize) -> PlaneGraph {
    let rotation = (0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect();
    PlaneGraph::from_rotation(rotation).expect("cycle")
}

/// The path P_n drawn in the plane (one face).
pub fn plane_path(n: usize) -> PlaneGraph {
    let rotation = (0..n)
        .map(|v| {
            let mut l = Vec::new();
            if v > 0 {
                l.push(v - 1);
            }
            if v + 1 < n {
                l.push(v + 1);
            }
            l
        })
        .collect();
    PlaneGraph::from_rotation(rotation).expect("path")
}
