#![allow(dead_code)]

use entropy_coloring::engine::Color;
use entropy_coloring::families::{self, Family};
use entropy_coloring::generators::random_graph;
use entropy_coloring::plane::{plane_cycle, plane_path, random_triangulation, PlaneGraph};
use entropy_coloring::validators::{self, Scope, Verdict};
use entropy_coloring::Graph;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    AcyclicGamma,
    AcyclicV1,
    AcyclicV2,
    NonrepVertex,
    NonrepEdge,
    FacialVertex,
    FacialEdge,
}

pub const ALL: [Kind; 7] = [
    Kind::AcyclicGamma,
    Kind::AcyclicV1,
    Kind::AcyclicV2,
    Kind::NonrepVertex,
    Kind::NonrepEdge,
    Kind::FacialVertex,
    Kind::FacialEdge,
];

pub struct Instance {
    pub kind: Kind,
    pub family: Family,
    pub plane: Option<PlaneGraph>,
}

impl Instance {
    pub fn graph(&self) -> &Graph {
        self.family.graph()
    }
}

/// Connected-ish sparse graph with Δ ≥ 2 on `lo..=hi` vertices.
pub fn sparse_graph<R: Rng>(rng: &mut R, lo: usize, hi: usize, max_degree: usize) -> Graph {
    loop {
        let n = rng.gen_range(lo..=hi);
        let g = random_graph(n, rng.gen_range(0.2..0.7), max_degree, rng);
        if g.max_degree() >= 2 {
            return g;
        }
    }
}

/// Drops a few edges of `pg` while the graph stays connected.
pub fn thin<R: Rng>(pg: PlaneGraph, drops: usize, rng: &mut R) -> PlaneGraph {
    let mut rotation: Vec<Vec<usize>> = (0..pg.graph().n()).map(|v| pg.rotation(v).to_vec()).collect();
    let edges = pg.graph().edges().to_vec();
    for _ in 0..drops {
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        if !rotation[u].contains(&v) || rotation[u].len() < 2 || rotation[v].len() < 2 {
            continue;
        }
        let mut trial = rotation.clone();
        trial[u].retain(|&w| w != v);
        trial[v].retain(|&w| w != u);
        if let Ok(p) = PlaneGraph::from_rotation(trial.clone()) {
            if p.graph().is_connected() {
                rotation = trial;
            }
        }
    }
    PlaneGraph::from_rotation(rotation).expect("still an embedding")
}

pub fn plane_graph<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> PlaneGraph {
    let n = rng.gen_range(lo.max(3)..=hi);
    match rng.gen_range(0..4) {
        0 => plane_cycle(n),
        1 => plane_path(n),
        2 => random_triangulation(n, rng.gen_range(0..2 * n), rng),
        _ => {
            let t = random_triangulation(n, n, rng);
            thin(t, n, rng)
        }
    }
}

pub fn instance<R: Rng>(kind: Kind, rng: &mut R, lo: usize, hi: usize) -> Instance {
    let (family, plane) = match kind {
        Kind::AcyclicGamma => {
            let g = sparse_graph(rng, lo, hi, 4);
            let gamma = g.max_codegree().max(1);
            (families::acyclic_gamma(&g, gamma).unwrap(), None)
        }
        Kind::AcyclicV1 => {
            (families::acyclic_v1(&sparse_graph(rng, lo, hi, 4), rng.gen_range(0.2..=1.0)).unwrap(), None)
        }
        Kind::AcyclicV2 => {
            (families::acyclic_v2(&sparse_graph(rng, lo, hi, 4), rng.gen_range(0.2..=1.0)).unwrap(), None)
        }
        Kind::NonrepVertex => (families::nonrepetitive_vertex(&sparse_graph(rng, lo, hi, 3)), None),
        Kind::NonrepEdge => (families::nonrepetitive_edge(&sparse_graph(rng, lo, hi, 3)), None),
        Kind::FacialVertex => {
            let pg = plane_graph(rng, lo, hi);
            (families::facial_thue_vertex(&pg), Some(pg))
        }
        Kind::FacialEdge => {
            let pg = plane_graph(rng, lo, hi);
            let e = rng.gen_range(0..pg.graph().m());
            (families::facial_thue_edge(&pg, e).unwrap(), Some(pg))
        }
    };
    Instance { kind, family, plane }
}

/// A palette size that completes quickly on these small graphs.
pub fn comfortable_kappa(inst: &Instance) -> u32 {
    let d = inst.graph().max_degree() as u32;
    match inst.kind {
        Kind::AcyclicGamma | Kind::AcyclicV1 | Kind::AcyclicV2 => 2 * d + 2,
        Kind::NonrepVertex => 3 * d + 2,
        Kind::NonrepEdge => 4 * d + 2,
        Kind::FacialVertex => d + 4,
        Kind::FacialEdge => 8,
    }
}

/// The independent validator matching the family.
pub fn validate(inst: &Instance, colors: &[Option<Color>]) -> Verdict {
    let g = inst.graph();
    let r = match inst.kind {
        Kind::AcyclicGamma | Kind::AcyclicV1 | Kind::AcyclicV2 => validators::check_acyclic(g, colors),
        Kind::NonrepVertex => validators::check_nonrepetitive(g, colors, Scope::AllPaths),
        Kind::NonrepEdge => validators::check_nonrepetitive(g, colors, Scope::Edges),
        Kind::FacialVertex => {
            validators::check_nonrepetitive(g, colors, Scope::FacialVertices(inst.plane.as_ref().unwrap()))
        }
        Kind::FacialEdge => {
            validators::check_nonrepetitive(g, colors, Scope::FacialEdges(inst.plane.as_ref().unwrap()))
        }
    };
    r.expect("within enumeration limits")
}
