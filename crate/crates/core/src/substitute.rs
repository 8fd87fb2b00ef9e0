//! Replacing weighted blossoms by two-vertex substitutes, and mapping trails
//! of the substituted graph back.
//!
//! A blossom with base β keeps β and loses its other vertices. A new shadow
//! vertex b is joined to β, and f(β) = f(b) = 1. The base edge η stays at β.
//! Every other edge leaving the blossom moves to β or b:
//!
//! | kind  | β–b       | matched edge | unmatched edge |
//! |-------|-----------|--------------|----------------|
//! | light | unmatched | b–m          | β–u            |
//! | heavy | matched   | β–m          | b–u            |

use crate::error::{Error, Result};
use crate::expand::GTrail;
use crate::multigraph::{validate_matching, DegreeBounds, EdgeId, Matching, Multigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstituteKind {
    /// Base edge matched (or absent, with β free).
    Light,
    /// Base edge unmatched.
    Heavy,
}

/// A blossom to substitute, given by its vertices in the original graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlossomSpec {
    pub vertices: Vec<usize>,
    pub base: usize,
    pub eta: Option<EdgeId>,
    pub kind: SubstituteKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutedBlossom {
    /// β in the substituted graph.
    pub base: usize,
    pub shadow: usize,
    pub kind: SubstituteKind,
    /// η, as an original edge id.
    pub base_edge: Option<EdgeId>,
    /// The β–b edge in the substituted graph.
    pub link: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstituteMap {
    /// New id of each original vertex; `None` for discarded blossom vertices.
    pub vertex_map: Vec<Option<usize>>,
    /// New id of each original edge; `None` for edges inside a blossom.
    pub edge_map: Vec<Option<EdgeId>>,
    /// Original id of each new edge; `None` for β–b links.
    pub edge_orig: Vec<Option<EdgeId>>,
    pub blossoms: Vec<SubstitutedBlossom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substituted {
    pub graph: Multigraph,
    pub f: DegreeBounds,
    pub matching: Matching,
    pub map: SubstituteMap,
}

fn input(msg: String) -> Error {
    Error::Input(msg)
}

pub fn build_substitute(g: &Multigraph, f: &DegreeBounds, m: &Matching, blossoms: &[BlossomSpec]) -> Result<Substituted> {
    f.check(g)?;
    let n = g.n();
    let mut owner = vec![usize::MAX; n];
    for (k, b) in blossoms.iter().enumerate() {
        if !b.vertices.contains(&b.base) {
            return Err(input(format!("blossom {k} does not contain its base {}", b.base)));
        }
        for &v in &b.vertices {
            if v >= n {
                return Err(input(format!("blossom {k} has vertex {v} out of range")));
            }
            if owner[v] != usize::MAX && owner[v] != k {
                return Err(input(format!("blossoms {} and {k} share vertex {v}", owner[v])));
            }
            owner[v] = k;
        }
        match (b.kind, b.eta) {
            (SubstituteKind::Heavy, None) => {
                return Err(input(format!("heavy blossom {k} has no base edge")));
            }
            (_, Some(e)) => {
                if e.0 >= g.m() {
                    return Err(input(format!("base edge {} out of range", e.0)));
                }
                let (u, v) = g.endpoints(e);
                let other = if u == b.base { v } else if v == b.base { u } else { usize::MAX };
                if other == usize::MAX || owner_of(blossoms, other) == Some(k) {
                    return Err(input(format!("edge {} is not a base edge of blossom {k}", e.0)));
                }
                let want = b.kind == SubstituteKind::Light;
                if m.contains(e) != want {
                    return Err(input(format!(
                        "base edge {} of {:?} blossom {k} has the wrong M-type",
                        e.0, b.kind
                    )));
                }
            }
            _ => {}
        }
    }

    let mut vertex_map = vec![None; n];
    let mut bounds = Vec::new();
    for v in 0..n {
        let keep = owner[v] == usize::MAX || blossoms[owner[v]].base == v;
        if keep {
            vertex_map[v] = Some(bounds.len());
            bounds.push(if owner[v] == usize::MAX { f.get(v) } else { 1 });
        }
    }
    let shadows: Vec<usize> = (0..blossoms.len()).map(|k| bounds.len() + k).collect();
    bounds.extend(std::iter::repeat_n(1, blossoms.len()));
    let mut graph = Multigraph::new(bounds.len());

    let mut edge_map = vec![None; g.m()];
    let mut edge_orig = Vec::new();
    let mut matched = Vec::new();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let e = EdgeId(i);
        if owner[u] != usize::MAX && owner[u] == owner[v] {
            continue;
        }
        let is_m = m.contains(e);
        let end = |x: usize| -> usize {
            let k = owner[x];
            if k == usize::MAX {
                return vertex_map[x].expect("kept");
            }
            let b = &blossoms[k];
            let beta = vertex_map[b.base].expect("base kept");
            if b.eta == Some(e) {
                return beta;
            }
            match (b.kind, is_m) {
                (SubstituteKind::Light, true) | (SubstituteKind::Heavy, false) => shadows[k],
                _ => beta,
            }
        };
        let id = graph.add_edge(end(u), end(v))?;
        edge_map[i] = Some(id);
        edge_orig.push(Some(e));
        if is_m {
            matched.push(id);
        }
    }
    let mut subs = Vec::new();
    for (k, b) in blossoms.iter().enumerate() {
        let beta = vertex_map[b.base].expect("base kept");
        let link = graph.add_edge(beta, shadows[k])?;
        edge_orig.push(None);
        if b.kind == SubstituteKind::Heavy {
            matched.push(link);
        }
        subs.push(SubstitutedBlossom {
            base: beta,
            shadow: shadows[k],
            kind: b.kind,
            base_edge: b.eta,
            link,
        });
    }
    let f2 = DegreeBounds::new(bounds);
    let matching = Matching::from_edges(graph.m(), &matched)?;
    let bad = validate_matching(&graph, &f2, &matching)?;
    if !bad.is_empty() {
        return Err(input(format!(
            "blossom edge pattern does not fit its kind: substituted vertices {bad:?} over their bound"
        )));
    }
    Ok(Substituted {
        graph,
        f: f2,
        matching,
        map: SubstituteMap {
            vertex_map,
            edge_map,
            edge_orig,
            blossoms: subs,
        },
    })
}

fn owner_of(blossoms: &[BlossomSpec], v: usize) -> Option<usize> {
    blossoms.iter().position(|b| b.vertices.contains(&v))
}

/// One passage of a trail through a substitute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub blossom: usize,
    /// Original edge the trail arrives by; `None` if it starts inside.
    pub entry: Option<EdgeId>,
    /// Original edge it leaves by; `None` if it ends inside.
    pub exit: Option<EdgeId>,
    /// Whether the passage uses β–b.
    pub via_link: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PulledBack {
    /// The trail's original edges in order, β–b links dropped.
    pub edges: Vec<EdgeId>,
    pub crossings: Vec<Crossing>,
}

/// Maps a trail of the substituted graph back to original edges and reports
/// how it passes each substitute.
pub fn pull_back_trail(t: &GTrail, g2: &Multigraph, map: &SubstituteMap) -> Result<PulledBack> {
    let at = |v: usize| map.blossoms.iter().position(|b| b.base == v || b.shadow == v);
    let mut edges = Vec::new();
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut open: Option<usize> = None;
    if let Some(k) = at(t.start) {
        crossings.push(Crossing { blossom: k, entry: None, exit: None, via_link: false });
        open = Some(crossings.len() - 1);
    }
    for s in &t.steps {
        let orig = map.edge_orig.get(s.edge.0).copied().flatten();
        match orig {
            Some(e) => edges.push(e),
            None => {
                let c = open
                    .ok_or_else(|| Error::Structural(format!("link {} used outside a passage", s.edge.0)))?;
                crossings[c].via_link = true;
                continue;
            }
        }
        if let Some(c) = open.take() {
            crossings[c].exit = orig;
        }
        if let Some(k) = at(s.to) {
            crossings.push(Crossing { blossom: k, entry: orig, exit: None, via_link: false });
            open = Some(crossings.len() - 1);
        }
    }
    // discipline: a passage never mixes the β side and the b side
    for (k, b) in map.blossoms.iter().enumerate() {
        let mut beta_side = false;
        let mut shadow_side = false;
        for s in &t.steps {
            if map.edge_orig[s.edge.0].is_none() || Some(s.edge) == b.base_edge.and_then(|e| map.edge_map[e.0]) {
                continue;
            }
            let (u, v) = g2.endpoints(s.edge);
            beta_side |= u == b.base || v == b.base;
            shadow_side |= u == b.shadow || v == b.shadow;
        }
        if beta_side && shadow_side {
            return Err(Error::Structural(format!(
                "trail leaves substitute {k} through both its base and its shadow"
            )));
        }
    }
    Ok(PulledBack { edges, crossings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::TrailStep;

    // blossom {0,1,2} based at 0, outside 3 and 4
    fn sample(kind: SubstituteKind) -> (Multigraph, Matching, BlossomSpec) {
        let g = Multigraph::from_edges(
            5,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 3)],
        )
        .unwrap();
        let (matched, eta_matched) = match kind {
            SubstituteKind::Light => (vec![EdgeId(1), EdgeId(3), EdgeId(4)], true),
            SubstituteKind::Heavy => (vec![EdgeId(0), EdgeId(2)], false),
        };
        assert_eq!(matched.contains(&EdgeId(3)), eta_matched);
        let m = Matching::from_edges(6, &matched).unwrap();
        let spec = BlossomSpec { vertices: vec![0, 1, 2], base: 0, eta: Some(EdgeId(3)), kind };
        (g, m, spec)
    }

    #[test]
    fn light_wiring() {
        let (g, m, spec) = sample(SubstituteKind::Light);
        let f = DegreeBounds::new(vec![2, 2, 2, 1, 1]);
        let s = build_substitute(&g, &f, &m, &[spec]).unwrap();
        let (beta, b) = (s.map.vertex_map[0].unwrap(), s.map.blossoms[0].shadow);
        let at = |e: usize| s.graph.endpoints(s.map.edge_map[e].unwrap());
        let three = s.map.vertex_map[3].unwrap();
        let four = s.map.vertex_map[4].unwrap();
        assert_eq!(at(3), (beta, three)); // η stays at β
        assert_eq!(at(4), (b, four)); // matched Bm moves to b
        let (u, v) = at(5);
        assert!((u, v) == (three, beta) || (u, v) == (beta, three)); // unmatched Bu at β
        let link = s.map.blossoms[0].link;
        assert!(!s.matching.contains(link));
        assert_eq!(s.f.get(beta), 1);
        assert_eq!(s.f.get(b), 1);
        assert!(s.map.edge_map[0].is_none());
    }

    #[test]
    fn heavy_wiring() {
        let (g, m, spec) = sample(SubstituteKind::Heavy);
        let f = DegreeBounds::new(vec![2, 2, 2, 1, 1]);
        let s = build_substitute(&g, &f, &m, &[spec]).unwrap();
        let (beta, b) = (s.map.vertex_map[0].unwrap(), s.map.blossoms[0].shadow);
        let (u, v) = s.graph.endpoints(s.map.edge_map[4].unwrap());
        assert!(u == b || v == b); // unmatched Bu moves to b
        assert!(s.matching.contains(s.map.blossoms[0].link));
        let (u, v) = s.graph.endpoints(s.map.edge_map[3].unwrap());
        assert!(u == beta || v == beta);
    }

    #[test]
    fn empty_list_is_identity() {
        let (g, m, _) = sample(SubstituteKind::Light);
        let f = DegreeBounds::new(vec![2, 2, 2, 1, 1]);
        let s = build_substitute(&g, &f, &m, &[]).unwrap();
        assert_eq!(s.graph, g);
        assert_eq!(s.f, f);
        assert_eq!(s.matching, m);
    }

    #[test]
    fn inconsistent_pattern_rejected() {
        let (g, m, mut spec) = sample(SubstituteKind::Light);
        let f = DegreeBounds::new(vec![2, 2, 2, 1, 1]);
        spec.kind = SubstituteKind::Heavy;
        assert!(build_substitute(&g, &f, &m, &[spec]).is_err());
    }

    #[test]
    fn pull_back_through_light() {
        let (g, m, spec) = sample(SubstituteKind::Light);
        let f = DegreeBounds::new(vec![2, 2, 2, 1, 1]);
        let s = build_substitute(&g, &f, &m, &[spec]).unwrap();
        let beta = s.map.vertex_map[0].unwrap();
        let b = s.map.blossoms[0].shadow;
        let (three, four) = (s.map.vertex_map[3].unwrap(), s.map.vertex_map[4].unwrap());
        let t = GTrail {
            start: three,
            end: four,
            steps: vec![
                TrailStep { edge: s.map.edge_map[3].unwrap(), from: three, to: beta },
                TrailStep { edge: s.map.blossoms[0].link, from: beta, to: b },
                TrailStep { edge: s.map.edge_map[4].unwrap(), from: b, to: four },
            ],
        };
        let p = pull_back_trail(&t, &s.graph, &s.map).unwrap();
        assert_eq!(p.edges, vec![EdgeId(3), EdgeId(4)]);
        assert_eq!(
            p.crossings,
            vec![Crossing { blossom: 0, entry: Some(EdgeId(3)), exit: Some(EdgeId(4)), via_link: true }]
        );

        // a trail avoiding the substitute maps to itself
        let plain = GTrail { start: three, end: three, steps: vec![] };
        assert!(pull_back_trail(&plain, &s.graph, &s.map).unwrap().crossings.is_empty());

        // β–u together with b–m breaks the discipline
        let bad = GTrail {
            start: three,
            end: four,
            steps: vec![
                TrailStep { edge: s.map.edge_map[5].unwrap(), from: three, to: beta },
                TrailStep { edge: s.map.blossoms[0].link, from: beta, to: b },
                TrailStep { edge: s.map.edge_map[4].unwrap(), from: b, to: four },
            ],
        };
        assert!(pull_back_trail(&bad, &s.graph, &s.map).is_err());
    }
}
