mod common;

use std::collections::HashSet;

use common::*;
use ftrails::certificate::{bound_value, verify_with_trails};
use ftrails::driver::max_f_matching;
use ftrails::engine::{find_trails, EngineOptions, SearchOrder};
use ftrails::expand::{check_alternating, expand_all, rematch};
use ftrails::io::{emit_instance, parse_instance, Instance};
use ftrails::multigraph::{deficiencies, degrees, validate_matching};
use ftrails::oracle::brute_max;
use ftrails::substitute::{build_substitute, BlossomSpec, SubstituteKind};
use ftrails::{DegreeBounds, EdgeId, Matching, Multigraph};
use proptest::prelude::*;

/// Instances with loops and parallel edges; the matching keeps each flagged
/// edge that still fits, in edge order.
fn instance(max_n: usize, max_m: usize, max_f: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec((0..n, 0..n), 0..=max_m),
            prop::collection::vec(1..=max_f, n),
            prop::collection::vec(any::<bool>(), max_m),
        )
            .prop_map(move |(edges, f, flags)| {
                let graph = Multigraph::from_edges(n, &edges).unwrap();
                let mut room = f.clone();
                let mut matching = Matching::empty(edges.len());
                for (i, &(u, v)) in edges.iter().enumerate() {
                    let need_u = if u == v { 2 } else { 1 };
                    if flags[i] && room[u] >= need_u && room[v] >= 1 {
                        room[u] -= 1;
                        room[v] -= 1;
                        matching.insert(EdgeId(i));
                    }
                }
                Instance { graph, f: DegreeBounds::new(f), matching }
            })
    })
}

fn small() -> impl Strategy<Value = Instance> {
    instance(7, 12, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn handshake_and_nonnegative_deficiency(inst in small()) {
        let (g, f, m) = (&inst.graph, &inst.f, &inst.matching);
        prop_assert!(validate_matching(g, f, m).unwrap().is_empty());
        let def = deficiencies(g, f, m);
        let deg = degrees(g, m);
        for v in 0..g.n() {
            prop_assert_eq!(def[v] + deg[v], f.get(v));
        }
        let used: usize = (0..g.n()).map(|v| f.get(v) - def[v]).sum();
        prop_assert_eq!(used, 2 * m.size());
    }

    #[test]
    fn one_phase_is_blocking_and_certified(inst in small()) {
        let p = one_phase(&inst.graph, &inst.f, &inst.matching).map_err(TestCaseError::fail)?;
        phase_matches_oracle(&p).map_err(TestCaseError::fail)?;
        check_complete_blossoms(&inst.graph, &p.result).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn expanded_trails_rematch_cleanly(inst in small()) {
        let (g, f, m) = (&inst.graph, &inst.f, &inst.matching);
        let r = find_trails(g, f, m, &checked()).unwrap();
        let trails = expand_all(g, &r).unwrap();
        let def = deficiencies(g, f, m);
        let mut seen = HashSet::new();
        for t in &trails {
            check_alternating(g, m, t).unwrap();
            prop_assert!(def[t.start] > 0 && def[t.end] > 0);
            if t.start == t.end {
                prop_assert!(def[t.start] >= 2);
            }
            for e in t.edges() {
                prop_assert!(seen.insert(e), "edge {} on two trails", e.0);
            }
        }
        let m2 = rematch(g, f, m, &trails).unwrap();
        prop_assert_eq!(m2.size(), m.size() + trails.len());
        let before: usize = def.iter().sum();
        let after: usize = deficiencies(g, f, &m2).iter().sum();
        prop_assert_eq!(before - after, 2 * trails.len());
        prop_assert_eq!(deficiencies(g, f, &m2), r.def_final);
    }

    #[test]
    fn forest_grows_each_edge_once(inst in small()) {
        let r = find_trails(&inst.graph, &inst.f, &inst.matching, &EngineOptions::default()).unwrap();
        let mut seen = HashSet::new();
        for node in r.forest.iter() {
            if let Some(e) = node.edge.edge() {
                prop_assert!(seen.insert(e), "edge {} grown twice", e.0);
                prop_assert_eq!(node.mtype, inst.matching.mtype(e));
            }
        }
        let mut arcs = HashSet::new();
        for t in &r.trails {
            for &h in &t.arcs {
                prop_assert!(arcs.insert(h), "arc {} on two contracted trails", h.0);
            }
        }
    }

    #[test]
    fn any_search_order_is_blocking(inst in small(), rot in 0usize..8) {
        let n = inst.graph.n();
        let order: Vec<usize> = (0..n).map(|i| (i + rot) % n).rev().collect();
        let opts = EngineOptions { order: SearchOrder::Custom(order), check: true };
        let r = find_trails(&inst.graph, &inst.f, &inst.matching, &opts).unwrap();
        let trails = expand_all(&inst.graph, &r).unwrap();
        let report = verify_with_trails(&inst.graph, &inst.f, &r, &trails).unwrap();
        prop_assert!(report.ok, "{:?}", report.failures);
        let best = brute_max(&report.residual.graph, &report.residual.f).unwrap().0;
        prop_assert_eq!(report.bound, best);
    }

    #[test]
    fn solver_is_maximum(inst in small()) {
        let (g, f) = (&inst.graph, &inst.f);
        let r = max_f_matching(g, f, Some(&inst.matching)).unwrap();
        prop_assert_eq!(r.matching.size(), brute_max(g, f).unwrap().0);
        prop_assert!(r.certificate.ok);
        prop_assert_eq!(r.certificate.bound, r.matching.size());
        let (last, rest) = r.trail_counts.split_last().unwrap();
        prop_assert_eq!(*last, 0);
        prop_assert!(rest.iter().all(|&k| k > 0));
        let phi: usize = f.as_slice().iter().sum();
        prop_assert!(r.phases <= phi / 2 + 1);
    }

    #[test]
    fn weak_duality(inst in small(), labels in prop::collection::vec(0u8..3, 7)) {
        let (g, f) = (&inst.graph, &inst.f);
        let i: Vec<usize> = (0..g.n()).filter(|&v| labels[v] == 0).collect();
        let o: Vec<usize> = (0..g.n()).filter(|&v| labels[v] == 1).collect();
        prop_assert!(bound_value(g, f, &i, &o).unwrap() >= brute_max(g, f).unwrap().0);
    }

    #[test]
    fn brute_max_is_monotone(inst in small(), u in 0usize..7, v in 0usize..7, bump in 0usize..7) {
        let (g, f) = (&inst.graph, &inst.f);
        let n = g.n();
        let base = brute_max(g, f).unwrap().0;
        let mut more = g.clone();
        more.add_edge(u % n, v % n).unwrap();
        prop_assert!(brute_max(&more, f).unwrap().0 >= base);
        let mut f2 = f.clone();
        f2.set(bump % n, f.get(bump % n) + 1);
        prop_assert!(brute_max(g, &f2).unwrap().0 >= base);
    }

    #[test]
    fn instance_text_round_trips(inst in small()) {
        let text = emit_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(emit_instance(&back), text);
    }

    #[test]
    fn substitutes_keep_base_and_shadow_at_degree_one(
        outside in prop::collection::vec((0usize..3, 3usize..6, 0u8..2), 0..6),
        heavy in any::<bool>(),
    ) {
        // blossom {0,1,2} based at 0 with base edge 0-3, outside vertices 3..6
        let mut edges = vec![(0, 1), (1, 2), (2, 0), (0, 3)];
        let mut matched = if heavy { vec![] } else { vec![EdgeId(3)] };
        let mut shadow_used = false;
        for &(b, o, t) in &outside {
            let id = EdgeId(edges.len());
            edges.push((b, o));
            // light: one matched edge may move to the shadow; heavy: none may
            if t == 1 && !heavy && !shadow_used {
                matched.push(id);
                shadow_used = true;
            }
        }
        let g = Multigraph::from_edges(6, &edges).unwrap();
        let f = DegreeBounds::uniform(6, 8);
        let m = Matching::from_edges(g.m(), &matched).unwrap();
        let kind = if heavy { SubstituteKind::Heavy } else { SubstituteKind::Light };
        let spec = BlossomSpec { vertices: vec![0, 1, 2], base: 0, eta: Some(EdgeId(3)), kind };
        let s = build_substitute(&g, &f, &m, &[spec]).unwrap();
        let sb = &s.map.blossoms[0];
        let deg = degrees(&s.graph, &s.matching);
        prop_assert!(deg[sb.base] <= 1 && deg[sb.shadow] <= 1);
        prop_assert_eq!(s.f.get(sb.base), 1);
        prop_assert_eq!(s.f.get(sb.shadow), 1);
        prop_assert_eq!(s.graph.m(), g.m() - 3 + 1);
    }
}
