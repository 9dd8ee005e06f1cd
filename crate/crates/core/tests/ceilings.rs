//! Witness counts never exceed the cost C_j of their type. Counts are taken
//! on every colored set met during runs, and for vertex families also on
//! the full vertex set. Where possible the family's count is compared with
//! an enumeration written here from scratch.

mod common;

use std::collections::BTreeSet;

use common::{instance, Instance, Kind, ALL};
use entropy_coloring::{replay_colored_sets, run, BadEventFamily, ColoredSet, EngineInput, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn canonical(seq: &[usize]) -> Vec<usize> {
    let rev: Vec<usize> = seq.iter().rev().copied().collect();
    rev.min(seq.to_vec())
}

/// Simple vertex sequences of `len` vertices inside `x`, both directions.
fn sequences(g: &Graph, x: &ColoredSet, len: usize) -> Vec<Vec<usize>> {
    fn go(g: &Graph, x: &ColoredSet, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().unwrap();
        for &w in g.neighbors(last) {
            if x.contains(w) && !cur.contains(&w) {
                cur.push(w);
                go(g, x, len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in x.iter() {
        go(g, x, len, &mut vec![s], &mut out);
    }
    out
}

fn cycles_through(g: &Graph, x: &ColoredSet, v: usize, len: usize) -> usize {
    let set: BTreeSet<BTreeSet<(usize, usize)>> = sequences(g, x, len)
        .into_iter()
        .filter(|s| s.contains(&v) && g.has_edge(s[0], s[len - 1]))
        .map(|s| {
            (0..len)
                .map(|i| {
                    let (a, b) = (s[i], s[(i + 1) % len]);
                    (a.min(b), a.max(b))
                })
                .collect()
        })
        .collect();
    set.len()
}

fn vertex_paths_through(g: &Graph, x: &ColoredSet, v: usize, len: usize) -> usize {
    let set: BTreeSet<Vec<usize>> =
        sequences(g, x, len).into_iter().filter(|s| s.contains(&v)).map(|s| canonical(&s)).collect();
    set.len()
}

fn edge_paths_through(g: &Graph, x: &ColoredSet, e: usize, len: usize) -> usize {
    let all = ColoredSet::from_elements(g.n(), 0..g.n());
    let set: BTreeSet<Vec<usize>> = sequences(g, &all, len + 1)
        .into_iter()
        .map(|s| s.windows(2).map(|w| g.edge_index(w[0], w[1]).unwrap()).collect::<Vec<_>>())
        .filter(|es| es.contains(&e) && es.iter().all(|&f| x.contains(f)))
        .map(|es| canonical(&es))
        .collect();
    set.len()
}

fn facial_through(inst: &Instance, x: &ColoredSet, el: usize, len: usize, edges: bool) -> usize {
    let pg = inst.plane.as_ref().unwrap();
    let g = pg.graph();
    let mut set = BTreeSet::new();
    for face in pg.faces() {
        let size = face.len();
        for start in 0..size {
            let span = if edges { len + 1 } else { len };
            if span > size {
                continue;
            }
            let verts: Vec<usize> = (0..span).map(|i| face[(start + i) % size].0).collect();
            if verts.iter().collect::<BTreeSet<_>>().len() != span {
                continue;
            }
            let elems: Vec<usize> =
                if edges { verts.windows(2).map(|w| g.edge_index(w[0], w[1]).unwrap()).collect() } else { verts };
            if elems.contains(&el) && elems.iter().all(|&y| x.contains(y)) {
                set.insert(canonical(&elems));
            }
        }
    }
    set.len()
}

/// Independent witness count for type `j` at `v` inside `x`, when one exists.
fn oracle(inst: &Instance, j: usize, v: usize, x: &ColoredSet) -> Option<usize> {
    let g = inst.graph();
    match inst.kind {
        Kind::AcyclicGamma if j == 1 => Some(g.neighbors(v).iter().filter(|&&u| x.contains(u)).count()),
        Kind::AcyclicGamma => Some(cycles_through(g, x, v, 2 * j)),
        Kind::NonrepVertex => Some(vertex_paths_through(g, x, v, 2 * j)),
        Kind::NonrepEdge => Some(edge_paths_through(g, x, v, 2 * j)),
        Kind::FacialVertex => Some(facial_through(inst, x, v, 2 * j, false)),
        Kind::FacialEdge => Some(facial_through(inst, x, v, 2 * j, true)),
        _ => None,
    }
}

fn check_at(inst: &Instance, v: usize, x: &ColoredSet, label: &str) {
    for (j, meta) in inst.family.metas().iter().enumerate() {
        let count = inst.family.candidates(j + 1, v, x).len();
        assert!(
            count as f64 <= meta.cost + 1e-9,
            "{label}: {:?} type {} ({}) has {count} witnesses at {v}, ceiling {}",
            inst.kind,
            j + 1,
            meta.name,
            meta.cost
        );
        if let Some(expected) = oracle(inst, j + 1, v, x) {
            // The neighbor list of the pair event is not restricted to X.
            if !(matches!(inst.kind, Kind::AcyclicGamma) && j == 0) {
                assert_eq!(count, expected, "{label}: {:?} type {} at {v}", inst.kind, j + 1);
            }
        }
    }
}

#[test]
fn witness_counts_stay_below_costs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xCE11);
    for kind in ALL {
        for case in 0..30u64 {
            let inst = instance(kind, &mut rng, 3, 12);
            let out = run(&inst.family, &EngineInput::seeded(3, case, 60)).unwrap();
            let replay = replay_colored_sets(&inst.family, &out.record).unwrap();
            let n = inst.family.element_count();
            let mut before = ColoredSet::new(n);
            for step in &replay {
                let mut x = before.clone();
                x.insert(step.element);
                check_at(&inst, step.element, &x, "run");
                before = step.colored_after.clone();
            }
            if inst.family.reserved_element().is_none() {
                let all = ColoredSet::from_elements(n, 0..n);
                for v in 0..n {
                    check_at(&inst, v, &all, "full");
                }
            }
        }
    }
}

#[test]
fn special_sets_respect_capacity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E7);
    for _ in 0..50 {
        let g = common::sparse_graph(&mut rng, 4, 12, 5);
        for alpha in [0.2, 0.5, 1.0] {
            let ss = entropy_coloring::SpecialStructure::new(&g, alpha).unwrap();
            let cap = alpha * (g.max_degree() as f64).powf(4.0 / 3.0);
            for v in 0..g.n() {
                assert!(ss.special_set(v).len() as f64 <= cap + 1e-9);
                for &u in ss.special_set(v) {
                    assert!(!g.has_edge(u, v) && u != v && g.common_degree(u, v) > 0);
                }
            }
        }
    }
}
