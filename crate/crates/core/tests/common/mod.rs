#![allow(dead_code)]

use ftrails::certificate::{verify_with_trails, CertificateReport};
use ftrails::engine::{find_trails, BlockingResult, EngineOptions};
use ftrails::expand::{expand_all, GTrail};
use ftrails::io::{random_instance_rng, random_matching, Instance};
use ftrails::oracle::{brute_max, has_augmenting_trail};
use ftrails::{DegreeBounds, Matching, Multigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn checked() -> EngineOptions {
    EngineOptions {
        check: true,
        ..Default::default()
    }
}

/// Small random instance with a random valid starting matching.
pub fn small_instance(seed: u64, nmax: usize, mmax: usize, fmax: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=nmax);
    let m = rng.gen_range(0..=mmax);
    let mut inst = random_instance_rng(n, m, fmax, &mut rng).unwrap();
    let p = rng.gen_range(0.0..1.0);
    inst.matching = random_matching(&inst.graph, &inst.f, p, &mut rng);
    inst
}

pub struct Phase {
    pub result: BlockingResult,
    pub trails: Vec<GTrail>,
    pub report: CertificateReport,
}

pub fn one_phase(g: &Multigraph, f: &DegreeBounds, m: &Matching) -> Result<Phase, String> {
    let result = find_trails(g, f, m, &checked()).map_err(|e| e.to_string())?;
    let trails = expand_all(g, &result).map_err(|e| e.to_string())?;
    let report = verify_with_trails(g, f, &result, &trails).map_err(|e| e.to_string())?;
    Ok(Phase { result, trails, report })
}

/// Blocking and tightness of one phase against the oracle.
pub fn phase_matches_oracle(p: &Phase) -> Result<(), String> {
    let rg = &p.report.residual;
    if has_augmenting_trail(&rg.graph, &rg.f, &rg.matching).unwrap() {
        return Err("residual graph still has an augmenting trail".into());
    }
    let (best, _) = brute_max(&rg.graph, &rg.f).unwrap();
    if best != rg.matching.size() {
        return Err(format!("residual maximum {best} but residual matching {}", rg.matching.size()));
    }
    if !p.report.ok {
        return Err(format!("certificate failed: {:?}", p.report.failures));
    }
    if p.report.bound != best {
        return Err(format!("bound {} but residual maximum {best}", p.report.bound));
    }
    Ok(())
}

use ftrails::engine::RecordId;
use ftrails::expand::{arc_steps, check_alternating, pi_trail};
use ftrails::oracle::brute_alternating_trail;
use ftrails::MType;

/// Compares both parities of every occurrence's trail to the base, for every
/// complete blossom, with the exhaustive search inside the blossom's edges.
/// Returns how many trails were checked.
pub fn check_complete_blossoms(g: &Multigraph, r: &BlockingResult) -> Result<usize, String> {
    let store = &r.blossoms;
    let forest = &r.forest;
    let mut checked = 0;
    for (k, rec) in store.records.iter().enumerate() {
        if !rec.complete {
            continue;
        }
        let rid = RecordId(k);
        let members = store.members(rid);
        let mut allowed = vec![false; g.m()];
        for &u in &members {
            if u != rec.base {
                if let Some(e) = forest.node(u).edge.edge() {
                    allowed[e.0] = true;
                }
            }
        }
        let beta = forest.vertex(rec.base);
        for &v in &members {
            for start in [MType::Matched, MType::Unmatched] {
                let arcs = pi_trail(forest, store, v, rid, start).map_err(|e| e.to_string())?;
                if arcs.is_empty() {
                    if forest.vertex(v) == beta && start != rec.mtype {
                        continue;
                    }
                    return Err(format!("blossom {k}: empty trail from node {} start {start:?}", v.0));
                }
                let steps = arc_steps(g, forest, &arcs).map_err(|e| e.to_string())?;
                let t = GTrail { start: forest.vertex(v), end: beta, steps };
                check_alternating(g, &r.matching, &t).map_err(|e| format!("blossom {k}: {e}"))?;
                let first = r.matching.mtype(t.steps[0].edge);
                let last = r.matching.mtype(t.steps.last().unwrap().edge);
                if first != start || last != rec.mtype {
                    return Err(format!("blossom {k}: trail from node {} has types {first:?}..{last:?}", v.0));
                }
                if t.steps.last().unwrap().to != beta {
                    return Err(format!("blossom {k}: trail from node {} misses the base", v.0));
                }
                if let Some(s) = t.steps.iter().find(|s| !allowed[s.edge.0]) {
                    return Err(format!("blossom {k}: edge {} is outside the blossom", s.edge.0));
                }
                if brute_alternating_trail(g, &r.matching, &allowed, t.start, beta, start, Some(rec.mtype)).is_none() {
                    return Err(format!("blossom {k}: oracle finds no trail from {}", t.start));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}
