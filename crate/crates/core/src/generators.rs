//! Small named graphs and seeded random graphs for tests and demos.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path")
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("complete")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("bipartite")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, edges).expect("petersen")
}

/// Random graph: each pair is tried once in random order and kept with
/// probability `p` while both ends have degree below `max_degree`.
pub fn random_graph<R: Rng>(n: usize, p: f64, max_degree: usize, rng: &mut R) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if deg[u] < max_degree && deg[v] < max_degree && rng.gen_bool(p) {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::new(n, edges).expect("valid edges")
}

/// The same graph under a uniformly random vertex order.
pub fn shuffled_order<R: Rng>(g: Graph, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    g.with_order(order).expect("permutation")
}
