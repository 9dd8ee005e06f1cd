//! Structural invariants of the facial edge family on random triangulations.

use std::collections::VecDeque;

use entropy_coloring::families::facial_thue_edge;
use entropy_coloring::plane::{random_triangulation, MedialGraph};
use entropy_coloring::validators::{check_nonrepetitive, Scope};
use entropy_coloring::{replay_colored_sets, run, BadEventFamily, ColoredSet, EngineInput, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn connected_outside(m: &MedialGraph, colored: &ColoredSet, anchor: usize) -> bool {
    let inside = |e: usize| e == anchor || !colored.contains(e);
    let total = (0..m.vertex_count()).filter(|&e| inside(e)).count();
    let mut seen = vec![false; m.vertex_count()];
    let mut queue = VecDeque::from([anchor]);
    seen[anchor] = true;
    let mut reached = 1;
    while let Some(e) = queue.pop_front() {
        for &f in m.neighbors(e) {
            if inside(f) && !seen[f] {
                seen[f] = true;
                reached += 1;
                queue.push_back(f);
            }
        }
    }
    reached == total
}

#[test]
fn uncolored_edges_stay_facially_connected() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACE);
    let mut completed = 0;
    for case in 0..100u64 {
        let n = rng.gen_range(3..=12);
        let pg = random_triangulation(n, rng.gen_range(0..2 * n), &mut rng);
        let anchor = rng.gen_range(0..pg.graph().m());
        let fam = facial_thue_edge(&pg, anchor).unwrap();
        let medial = pg.medial_graph();
        let out = run(&fam, &EngineInput::seeded(8, case, 5000)).unwrap();
        for step in replay_colored_sets(&fam, &out.record).unwrap() {
            assert!(!step.colored_after.contains(anchor));
            assert!(connected_outside(&medial, &step.colored_after, anchor), "case {case}");
        }
        if out.status != Status::Completed {
            continue;
        }
        completed += 1;
        let mut colors = out.coloring.colors().to_vec();
        let missing: Vec<usize> = (0..colors.len()).filter(|&e| colors[e].is_none()).collect();
        assert_eq!(missing, vec![anchor]);
        colors[anchor] = Some(9);
        assert_eq!(fam.element_count(), pg.graph().m());
        let verdict = check_nonrepetitive(pg.graph(), &colors, Scope::FacialEdges(&pg)).unwrap();
        assert!(verdict.is_accept(), "case {case}: {verdict:?}");
    }
    assert_eq!(completed, 100);
}
