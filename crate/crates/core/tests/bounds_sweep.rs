use entropy_coloring::bounds::{
    acyclic_displayed_bounds, characteristic_system, kappa_preset, optimal_alpha, optimize_ratio, pair_forbidden_terms,
    preset_terms, v1_half_chain, BoundsError, Pattern, Problem, QPolynomial,
};

fn grid_min(q: &QPolynomial) -> f64 {
    (1..=20_000).map(|i| q.ratio(i as f64 / 20_000.0)).fold(f64::INFINITY, f64::min)
}

#[test]
fn optimized_kappa_within_displayed_bounds() {
    for delta in 24..=200u64 {
        let alpha = optimal_alpha(delta).unwrap();
        let v1 = kappa_preset(&Problem::AcyclicV1 { delta, alpha }, None).unwrap().optimized.kappa as f64;
        let v2 = kappa_preset(&Problem::AcyclicV2 { delta }, None).unwrap().optimized.kappa as f64;
        let (a, b) = acyclic_displayed_bounds(delta as f64);
        assert!(v1 <= a + 1.0, "delta {delta}: v1 {v1} > {a}");
        assert!(v2 <= b + 1.0, "delta {delta}: v2 {v2} > {b}");
        assert!(v1.min(v2) <= a.min(b) + 1.0, "delta {delta}");
    }
}

#[test]
fn half_chain_starts_at_24() {
    let (lhs, rhs) = v1_half_chain(24.0);
    assert!(lhs < rhs);
    let (lhs, rhs) = v1_half_chain(23.0);
    assert!(lhs >= rhs);
}

#[test]
fn optimizer_beats_a_fine_grid() {
    let problems = [
        Problem::AcyclicV1 { delta: 30, alpha: 0.3 },
        Problem::StarColoring { delta: 5 },
        Problem::RAcyclic { delta: 4, r: 5 },
        Problem::RAcyclic { delta: 4, r: 6 },
    ];
    for p in problems {
        let q = QPolynomial::new(preset_terms(&p, 0).unwrap()).unwrap();
        let r = optimize_ratio(&q);
        assert!(r.ratio <= grid_min(&q) + 1e-9 * r.ratio, "{}", p.name());
        if !r.boundary {
            assert!(r.residual < 1e-9);
        }
    }
}

#[test]
fn surrogate_dominates_finite_sums() {
    // Truncated sums can only lower Q, so the closed-form optimum is an upper bound.
    let cases = [
        Problem::AcyclicGamma { delta: 10, gamma: 1 },
        Problem::NonrepVertex { delta: 4 },
        Problem::NonrepEdge { delta: 5 },
        Problem::FacialVertex { delta: 6 },
        Problem::FacialEdge,
    ];
    for p in cases {
        let surrogate = kappa_preset(&p, None).unwrap().optimized.ratio;
        for n in [2, 6, 12, 30] {
            let exact = kappa_preset(&p, Some(n)).unwrap().optimized.ratio;
            assert!(exact <= surrogate + 1e-9 * surrogate, "{} n={n}: {exact} > {surrogate}", p.name());
        }
    }
}

#[test]
fn gamma_preset_at_delta_10() {
    let rep = kappa_preset(&Problem::AcyclicGamma { delta: 10, gamma: 1 }, None).unwrap();
    assert_eq!(rep.kappa, 35);
    assert!(rep.optimized.ratio <= rep.pinned.unwrap().ratio + 1e-9);
}

#[test]
fn characteristic_system_is_consistent() {
    let q = QPolynomial::new(preset_terms(&Problem::AcyclicGamma { delta: 10, gamma: 1 }, 8).unwrap()).unwrap();
    let cs = characteristic_system(&q).unwrap();
    assert!(cs.residual < 1e-9 * cs.s.max(1.0));
    let ratio = q.ratio(cs.x);
    assert!((cs.r - (1.0 / ratio).powi(cs.d as i32)).abs() < 1e-12);

    let catalan = QPolynomial::from_pairs(&[(1.0, 2)]).unwrap();
    let cs = characteristic_system(&catalan).unwrap();
    assert_eq!(cs.d, 2);
    assert!((cs.x - 1.0).abs() < 1e-12 && (cs.s - 1.0).abs() < 1e-12);
    assert!((cs.r - 0.25).abs() < 1e-12);

    let greedy = QPolynomial::from_pairs(&[(3.0, 1)]).unwrap();
    assert_eq!(characteristic_system(&greedy), Err(BoundsError::NotApplicable));
}

#[test]
fn star_builder_is_the_tight_p4_case() {
    let tight = pair_forbidden_terms(6, 3, &[Pattern::Path(4)], 10, true);
    let star = preset_terms(&Problem::StarColoring { delta: 6 }, 0).unwrap();
    assert_eq!(tight, star);
    let loose = pair_forbidden_terms(6, 3, &[Pattern::Path(4)], 10, false);
    assert_ne!(loose, star);
    let rep = kappa_preset(&Problem::StarColoring { delta: 6 }, None).unwrap();
    assert!(rep.pinned.unwrap().ratio <= rep.stated.unwrap() + 1e-9);
}

#[test]
fn r_acyclic_pinned_below_stated() {
    for delta in [3u64, 5, 10] {
        for r in 4..=9u64 {
            let rep = kappa_preset(&Problem::RAcyclic { delta, r }, None).unwrap();
            let p = rep.pinned.unwrap();
            assert!(p.ratio <= rep.stated.unwrap() * (1.0 + 1e-12), "delta {delta} r {r}");
            assert!(rep.optimized.ratio <= p.ratio + 1e-9 * p.ratio);
        }
    }
    assert!(matches!(kappa_preset(&Problem::RAcyclic { delta: 5, r: 3 }, None), Err(BoundsError::OutOfRange { .. })));
}

#[test]
fn pair_forbidden_rejects_sparse_patterns() {
    let bad = Problem::PairForbidden { delta: 5, m: 4, patterns: vec![Pattern::Path(4)] };
    assert!(kappa_preset(&bad, None).is_err());
    let ok = Problem::PairForbidden {
        delta: 5,
        m: 3,
        patterns: vec![Pattern::Path(4), Pattern::Graph { vertices: 5, edges: 6 }],
    };
    let rep = kappa_preset(&ok, None).unwrap();
    assert!(rep.optimized.ratio <= rep.pinned.unwrap().ratio + 1e-9);
}
