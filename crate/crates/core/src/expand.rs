//! Expansion of contracted-forest trails into graph trails, and rematching.

use std::collections::HashSet;

use crate::engine::{BlockingResult, BlossomKind, BlossomStore, Item, NodeId, RecordId, SearchForest, TbarTrail};
use crate::error::{Error, Result};
use crate::multigraph::{deficiencies, require_valid, DegreeBounds, EdgeId, MType, Matching, Multigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    /// Parent to child.
    Down,
    /// Child to parent.
    Up,
}

impl Dir {
    fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// A forest arc (named by its head) traversed in a direction.
pub type ArcStep = (NodeId, Dir);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrailStep {
    pub edge: EdgeId,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTrail {
    pub start: usize,
    pub end: usize,
    pub steps: Vec<TrailStep>,
}

impl GTrail {
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.steps.iter().map(|s| s.edge)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
enum Task {
    Arc(NodeId, Dir),
    Pi {
        v: NodeId,
        rec: RecordId,
        start: MType,
        rev: bool,
    },
}

struct Expander<'a> {
    forest: &'a SearchForest,
    store: &'a BlossomStore,
}

fn structural(msg: String) -> Error {
    Error::Structural(msg)
}

impl<'a> Expander<'a> {
    fn ty(&self, h: NodeId) -> MType {
        self.forest.mtype(h)
    }

    fn tail(&self, h: NodeId) -> NodeId {
        self.forest.parent(h).expect("path arcs have tails")
    }

    fn run(&self, tasks: Vec<Task>) -> Result<Vec<ArcStep>> {
        let mut out = Vec::new();
        let mut stack: Vec<Task> = tasks.into_iter().rev().collect();
        while let Some(t) = stack.pop() {
            match t {
                Task::Arc(h, d) => out.push((h, d)),
                Task::Pi { v, rec, start, rev } => {
                    let mut parts = self.decompose(v, rec, start)?;
                    if rev {
                        parts.reverse();
                        for p in parts.iter_mut() {
                            *p = match *p {
                                Task::Arc(h, d) => Task::Arc(h, d.flip()),
                                Task::Pi { v, rec, start, rev } => Task::Pi { v, rec, start, rev: !rev },
                            };
                        }
                    }
                    stack.extend(parts.into_iter().rev());
                }
            }
        }
        Ok(out)
    }

    /// One level of a trail from `v` to the base of `r` starting with `start`.
    fn decompose(&self, v: NodeId, r: RecordId, start: MType) -> Result<Vec<Task>> {
        let first = self
            .store
            .introduced_in(v)
            .ok_or_else(|| structural(format!("node {} is in no blossom", v.0)))?;
        let mut chain = vec![first];
        while *chain.last().unwrap() != r {
            let up = self.store.record(*chain.last().unwrap()).parent.ok_or_else(|| {
                structural(format!("node {} is not inside blossom {}", v.0, r.0))
            })?;
            chain.push(up);
        }
        let mut parts = self.local(v, first, start)?;
        for w in chain.windows(2) {
            self.ascend(w[0], w[1], &mut parts)?;
        }
        Ok(parts)
    }

    /// Trail from an occurrence introduced by `r` to the base of `r`.
    fn local(&self, v: NodeId, r: RecordId, s: MType) -> Result<Vec<Task>> {
        let rec = self.store.record(r);
        let at_base = (rec.kind != BlossomKind::Enlarge && v == rec.base)
            || (rec.kind == BlossomKind::Base && v == rec.closure);
        if at_base {
            let mut parts = Vec::new();
            if s == rec.mtype {
                self.down(r, 0, &mut parts);
            }
            return Ok(parts);
        }
        if rec.kind == BlossomKind::Enlarge && v == rec.closure {
            let Item::Blossom(st) = rec.starter else {
                return Err(structural(format!("enlarged record {} has an atomic starter", r.0)));
            };
            return Ok(vec![Task::Pi { v: rec.anchor, rec: st, start: s, rev: false }]);
        }
        let j = self
            .store
            .path_index(v)
            .ok_or_else(|| structural(format!("node {} has no place in record {}", v.0, r.0)))?;
        let mut parts = Vec::new();
        if self.ty(rec.path[j]) == s {
            parts.push(Task::Arc(rec.path[j], Dir::Up));
            self.up_from(r, j, &mut parts);
        } else if j + 1 < rec.path.len() && self.ty(rec.path[j + 1]) == s {
            self.down(r, j + 1, &mut parts);
        } else {
            return Err(structural(format!(
                "no {s:?} start from node {} in record {}",
                v.0, r.0
            )));
        }
        Ok(parts)
    }

    /// Continue from the base of child `c` of `r` to the base of `r`.
    fn ascend(&self, c: RecordId, r: RecordId, parts: &mut Vec<Task>) -> Result<()> {
        let rec = self.store.record(r);
        if rec.starter == Item::Blossom(c) {
            return Ok(());
        }
        let j = self
            .store
            .path_index(self.store.record(c).base)
            .filter(|&j| rec.items.get(j) == Some(&Item::Blossom(c)))
            .ok_or_else(|| structural(format!("blossom {} is not an item of {}", c.0, r.0)))?;
        parts.push(Task::Arc(rec.path[j], Dir::Up));
        self.up_from(r, j, parts);
        Ok(())
    }

    /// Having climbed path arc `j` of `r`, continue up to the base.
    fn up_from(&self, r: RecordId, j: usize, parts: &mut Vec<Task>) {
        let rec = self.store.record(r);
        for i in (0..j).rev() {
            if let Item::Blossom(c) = rec.items[i] {
                let w = self.tail(rec.path[i + 1]);
                parts.push(Task::Pi { v: w, rec: c, start: self.ty(rec.path[i + 1]).flip(), rev: false });
            }
            parts.push(Task::Arc(rec.path[i], Dir::Up));
        }
        if let Item::Blossom(st) = rec.starter {
            let a = self.tail(rec.path[0]);
            parts.push(Task::Pi { v: a, rec: st, start: self.ty(rec.path[0]).flip(), rev: false });
        }
    }

    /// Walk down path arcs `i0..` of `r` and close the trail at the base.
    fn down(&self, r: RecordId, i0: usize, parts: &mut Vec<Task>) {
        let rec = self.store.record(r);
        let k = rec.path.len();
        for i in i0..k {
            parts.push(Task::Arc(rec.path[i], Dir::Down));
            let last = i + 1 == k;
            match (rec.items[i], last) {
                (Item::Blossom(c), false) => {
                    let w = self.tail(rec.path[i + 1]);
                    parts.push(Task::Pi { v: w, rec: c, start: self.ty(rec.path[i + 1]).flip(), rev: true });
                }
                (Item::Blossom(c), true) => {
                    parts.push(Task::Pi { v: rec.closure, rec: c, start: rec.mtype, rev: true });
                }
                (Item::Atom(_), true) => {
                    if let Item::Blossom(st) = rec.starter {
                        parts.push(Task::Pi { v: rec.anchor, rec: st, start: self.ty(rec.path[i]).flip(), rev: false });
                    }
                }
                (Item::Atom(_), false) => {}
            }
        }
    }
}

/// Trail of forest arcs inside blossom `r` from occurrence `v` to its base,
/// first arc of M-type `start`. Empty when `v` is the base and `start` is not
/// the blossom's M-type.
pub fn pi_trail(forest: &SearchForest, store: &BlossomStore, v: NodeId, r: RecordId, start: MType) -> Result<Vec<ArcStep>> {
    let ex = Expander { forest, store };
    ex.run(vec![Task::Pi { v, rec: r, start, rev: false }])
}

/// Graph steps of an arc sequence.
pub fn arc_steps(g: &Multigraph, forest: &SearchForest, arcs: &[ArcStep]) -> Result<Vec<TrailStep>> {
    arcs.iter()
        .map(|&(h, d)| {
            let node = forest.node(h);
            let e = node
                .edge
                .edge()
                .ok_or_else(|| structural(format!("artificial arc at node {} inside a trail", h.0)))?;
            let p = forest.vertex(node.parent.expect("real arcs have tails"));
            let (from, to) = match d {
                Dir::Down => (p, node.vertex),
                Dir::Up => (node.vertex, p),
            };
            debug_assert!({
                let (a, b) = g.endpoints(e);
                (a, b) == (from, to) || (b, a) == (from, to)
            });
            Ok(TrailStep { edge: e, from, to })
        })
        .collect()
}

/// Checks continuity, alternation under `m`, and edge distinctness.
pub fn check_alternating(g: &Multigraph, m: &Matching, t: &GTrail) -> Result<()> {
    let mut at = t.start;
    let mut seen = HashSet::new();
    let mut prev: Option<MType> = None;
    for s in &t.steps {
        let (a, b) = g.endpoints(s.edge);
        if s.from != at || !((a, b) == (s.from, s.to) || (b, a) == (s.from, s.to)) {
            return Err(structural(format!("trail breaks at edge {}", s.edge.0)));
        }
        if !seen.insert(s.edge) {
            return Err(structural(format!("trail repeats edge {}", s.edge.0)));
        }
        let ty = m.mtype(s.edge);
        if prev == Some(ty) {
            return Err(structural(format!("trail does not alternate at edge {}", s.edge.0)));
        }
        prev = Some(ty);
        at = s.to;
    }
    if at != t.end {
        return Err(structural(format!("trail ends at {at}, expected {}", t.end)));
    }
    Ok(())
}

/// Expands one found trail into an augmenting trail of the graph.
pub fn expand_trail(g: &Multigraph, result: &BlockingResult, trail: &TbarTrail) -> Result<GTrail> {
    let forest = &result.forest;
    let store = &result.blossoms;
    let ex = Expander { forest, store };
    let mut tasks = Vec::new();
    let mut c = trail.terminal;
    let mut s = MType::Unmatched;
    loop {
        if let Some(r) = store.outer_imm(c) {
            tasks.push(Task::Pi { v: c, rec: r, start: s, rev: false });
            c = store.record(r).base;
        }
        match forest.parent(c) {
            Some(p) => {
                tasks.push(Task::Arc(c, Dir::Up));
                s = forest.mtype(c).flip();
                c = p;
            }
            None => break,
        }
    }
    let arcs = ex.run(tasks)?;
    let mut steps = arc_steps(g, forest, &arcs)?;
    steps.reverse();
    for st in steps.iter_mut() {
        std::mem::swap(&mut st.from, &mut st.to);
    }
    let t = GTrail {
        start: trail.root,
        end: trail.end,
        steps,
    };
    check_alternating(g, &result.matching, &t)?;
    let m = &result.matching;
    let ends_ok = t.steps.first().is_some_and(|s| !m.contains(s.edge))
        && t.steps.last().is_some_and(|s| !m.contains(s.edge));
    if !ends_ok {
        return Err(structural(format!(
            "trail from {} to {} does not start and end unmatched",
            t.start, t.end
        )));
    }
    Ok(t)
}

pub fn expand_all(g: &Multigraph, result: &BlockingResult) -> Result<Vec<GTrail>> {
    result.trails.iter().map(|t| expand_trail(g, result, t)).collect()
}

/// M ⊕ (union of trails), after checking each trail is augmenting and the
/// trails are edge-disjoint.
pub fn rematch(g: &Multigraph, f: &DegreeBounds, m: &Matching, trails: &[GTrail]) -> Result<Matching> {
    require_valid(g, f, m)?;
    let mut def = deficiencies(g, f, m);
    let mut used = HashSet::new();
    let mut out = m.clone();
    for t in trails {
        check_alternating(g, m, t)?;
        let free = if t.start == t.end {
            def[t.start] >= 2
        } else {
            def[t.start] >= 1 && def[t.end] >= 1
        };
        if t.is_empty() || !free {
            return Err(structural(format!(
                "trail from {} to {} is not augmenting",
                t.start, t.end
            )));
        }
        if m.contains(t.steps[0].edge) || m.contains(t.steps[t.len() - 1].edge) {
            return Err(structural(format!(
                "trail from {} to {} has a matched end edge",
                t.start, t.end
            )));
        }
        def[t.start] -= 1;
        def[t.end] -= 1;
        for e in t.edges() {
            if !used.insert(e) {
                return Err(structural(format!("trails share edge {}", e.0)));
            }
            out.toggle(e);
        }
    }
    let bad = crate::multigraph::validate_matching(g, f, &out)?;
    if !bad.is_empty() {
        return Err(structural(format!("rematched set exceeds bounds at {bad:?}")));
    }
    Ok(out)
}
