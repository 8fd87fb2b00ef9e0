use crate::error::{Error, Result};
use crate::multigraph::{deficiencies, DegreeBounds, EdgeId, MType, Matching, Multigraph};

use super::blossom::{BlossomKind, BlossomRecord, BlossomStore, Item, RecordId};
use super::forest::{ArcEdge, BlArena, BlEntry, BlHead, Node, NodeId, SearchForest};
use super::{BlockingResult, TbarTrail, TraceEvent};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Start,
    Grow,
    Tests,
    /// Invoking the arcs of a fresh blossom's path, `next` indexes the path.
    Invoke { record: RecordId, next: usize },
}

/// One active d-invocation. `node` is the occurrence it runs at; `edge` and
/// `mtype` describe the arc it entered through (for a blossom invocation this
/// is a path arc taken backwards).
#[derive(Clone, Copy, Debug)]
struct Frame {
    node: NodeId,
    edge: ArcEdge,
    mtype: MType,
    grow: bool,
    stage: Stage,
}

fn slot(t: MType) -> usize {
    match t {
        MType::Matched => 0,
        MType::Unmatched => 1,
    }
}

/// Per-vertex search state, kept together so a visit touches one cache line.
#[derive(Clone, Copy, Debug)]
#[repr(C, align(64))]
struct Vx {
    bl: BlHead,
    // grow list bounds: matched edges in gl[0]..gl[1], unmatched in gl[1]..gl[2]
    gl: [u32; 3],
    cursor: [u32; 2],
    // some occurrence of the vertex that lies in a blossom
    blossom_node: u32,
    // blossom list index of the first returned arc
    e1: u32,
    // forest size when e1 was set
    e1_mark: u32,
    def: usize,
}

pub(crate) struct Engine<'a, 't> {
    matching: &'a Matching,
    check: bool,
    trace: Option<&'t mut (dyn FnMut(&TraceEvent) + 't)>,
    // grow lists: (edge, other end) bucketed by (vertex, M-type), consumed by cursor
    gl_adj: Vec<(u32, u32)>,
    grown: Vec<u64>,
    vx: Vec<Vx>,
    bl: BlArena,
    def_initial: Vec<usize>,
    forest: SearchForest,
    store: BlossomStore,
    trails: Vec<TbarTrail>,
    search: usize,
    root: usize,
    search_first_node: usize,
    stack: Vec<Frame>,
}

impl<'a, 't> Engine<'a, 't> {
    pub(crate) fn new(
        g: &'a Multigraph,
        f: &DegreeBounds,
        matching: &'a Matching,
        check: bool,
        trace: Option<&'t mut (dyn FnMut(&TraceEvent) + 't)>,
    ) -> Self {
        let n = g.n();
        assert!(2 * g.m() < NONE as usize, "edge count exceeds the engine's index width");
        let mut counts = vec![0u32; 2 * n + 1];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            let s = slot(matching.mtype(EdgeId(i)));
            counts[2 * u + s + 1] += 1;
            if u != v {
                counts[2 * v + s + 1] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut gl_adj = vec![(0u32, 0u32); counts[2 * n] as usize];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            let s = slot(matching.mtype(EdgeId(i)));
            gl_adj[fill[2 * u + s] as usize] = (i as u32, v as u32);
            fill[2 * u + s] += 1;
            if u != v {
                gl_adj[fill[2 * v + s] as usize] = (i as u32, u as u32);
                fill[2 * v + s] += 1;
            }
        }
        let def = deficiencies(g, f, matching);
        let vx = (0..n)
            .map(|x| Vx {
                bl: BlHead::default(),
                gl: [counts[2 * x], counts[2 * x + 1], counts[2 * x + 2]],
                cursor: [counts[2 * x], counts[2 * x + 1]],
                blossom_node: NONE,
                e1: NONE,
                e1_mark: NONE,
                def: def[x],
            })
            .collect();
        Engine {
            matching,
            check,
            trace,
            gl_adj,
            grown: vec![0; g.m().div_ceil(64)],
            vx,
            bl: BlArena::with_capacity(g.m() + n),
            def_initial: def,
            // every node but a root consumes an edge
            forest: SearchForest::with_capacity(g.m() + n),
            store: BlossomStore::with_capacity(g.m() + n),
            trails: Vec::new(),
            search: 0,
            root: 0,
            search_first_node: 0,
            stack: Vec::new(),
        }
    }

    pub(crate) fn run(&mut self, order: &[usize]) -> Result<()> {
        for &a in order {
            while self.vx[a].def > 0 && self.vx[a].e1 == NONE {
                self.search_from(a)?;
                self.search += 1;
            }
        }
        if self.check {
            self.check_pendant()?;
        }
        Ok(())
    }

    fn e1(&self, x: usize) -> Option<BlEntry> {
        let i = self.vx[x].e1;
        (i != NONE).then(|| self.bl.entry(i))
    }

    pub(crate) fn into_result(self) -> BlockingResult {
        let e1 = (0..self.vx.len()).map(|x| self.e1(x)).collect();
        let def_final = self.vx.iter().map(|v| v.def).collect();
        BlockingResult {
            trails: self.trails,
            forest: self.forest,
            blossoms: self.store,
            e1,
            def_initial: self.def_initial,
            def_final,
            matching: self.matching.clone(),
            searches: self.search,
        }
    }

    fn emit(&mut self, ev: TraceEvent) {
        if let Some(t) = self.trace.as_mut() {
            t(&ev);
        }
    }

    fn violation(&self, what: String) -> Error {
        let mut dump = self.forest.dump();
        for (i, r) in self.store.records.iter().enumerate() {
            dump.push_str(&format!(
                "record {i}: {:?} base {} {:?} path {:?} closure {} parent {:?} complete {}\n",
                r.kind,
                r.base.0,
                r.mtype,
                r.path.iter().map(|h| h.0).collect::<Vec<_>>(),
                r.closure.0,
                r.parent.map(|p| p.0),
                r.complete
            ));
        }
        Error::Invariant { what, dump }
    }

    fn new_node(&mut self, vertex: usize, parent: Option<NodeId>, edge: ArcEdge, mtype: MType) -> NodeId {
        self.store.add_node();
        self.forest.push(Node {
            vertex,
            parent,
            edge,
            mtype,
            search: self.search,
            children: 0,
        })
    }

    fn is_grown(&self, e: u32) -> bool {
        self.grown[e as usize / 64] >> (e % 64) & 1 == 1
    }

    fn set_grown(&mut self, e: EdgeId) {
        self.grown[e.0 / 64] |= 1 << (e.0 % 64);
    }

    /// Next ungrown edge of M-type `t` at `x`, with its other end.
    fn next_gl(&mut self, x: usize, t: MType) -> Option<(EdgeId, usize)> {
        let s = slot(t);
        let end = self.vx[x].gl[s + 1];
        let mut c = self.vx[x].cursor[s];
        while c < end {
            let (e, y) = self.gl_adj[c as usize];
            c += 1;
            if !self.is_grown(e) {
                self.vx[x].cursor[s] = c;
                return Some((EdgeId(e as usize), y as usize));
            }
        }
        self.vx[x].cursor[s] = c;
        None
    }

    fn gl_is_empty(&self, x: usize) -> bool {
        let v = &self.vx[x];
        (0..2).all(|s| {
            self.gl_adj[v.cursor[s] as usize..v.gl[s + 1] as usize]
                .iter()
                .all(|&(e, _)| self.is_grown(e))
        })
    }

    fn search_from(&mut self, a: usize) -> Result<()> {
        self.root = a;
        self.search_first_node = self.forest.len();
        let r = self.new_node(a, None, ArcEdge::Artificial, MType::Matched);
        self.emit(TraceEvent::SearchStart { search: self.search, root: a });
        self.stack.push(Frame {
            node: r,
            edge: ArcEdge::Artificial,
            mtype: MType::Matched,
            grow: true,
            stage: Stage::Start,
        });
        let found = self.drive()?;
        self.emit(TraceEvent::SearchEnd { search: self.search, found });
        if self.check {
            self.check_search()?;
        }
        Ok(())
    }

    /// Runs frames until the stack empties (search failed) or a trail is found.
    fn drive(&mut self) -> Result<bool> {
        while let Some(&top) = self.stack.last() {
            let idx = self.stack.len() - 1;
            let x = self.forest.vertex(top.node);
            match top.stage {
                Stage::Start => {
                    let a = self.root;
                    if top.mtype == MType::Unmatched
                        && self.vx[x].def > 0
                        && (x != a || self.vx[a].def >= 2)
                    {
                        self.augment(top.node);
                        self.stack.clear();
                        return Ok(true);
                    }
                    self.stack[idx].stage = Stage::Grow;
                }
                Stage::Grow => {
                    let t = top.mtype.flip();
                    match self.next_gl(x, t) {
                        Some((e, y)) => {
                            self.set_grown(e);
                            let c = self.new_node(y, Some(top.node), ArcEdge::Edge(e), t);
                            self.emit(TraceEvent::Grow { from: top.node, to: c, edge: e });
                            self.stack.push(Frame {
                                node: c,
                                edge: ArcEdge::Edge(e),
                                mtype: t,
                                grow: true,
                                stage: Stage::Start,
                            });
                        }
                        None => self.stack[idx].stage = Stage::Tests,
                    }
                }
                Stage::Tests => match self.blossom_test(&top)? {
                    None => {
                        self.stack.pop();
                        self.finish(top);
                    }
                    Some(entry) => {
                        if let Some(record) = self.blossom_step(&top, entry)? {
                            self.stack[idx].stage = Stage::Invoke { record, next: 1 };
                        }
                    }
                },
                Stage::Invoke { record, next } => {
                    let path = &self.store.records[record.0].path;
                    if next < path.len() {
                        let h = path[next];
                        self.stack[idx].stage = Stage::Invoke { record, next: next + 1 };
                        let head = self.forest.node(h);
                        let tail = head.parent.expect("path arcs have tails");
                        self.stack.push(Frame {
                            node: tail,
                            edge: head.edge,
                            mtype: head.mtype,
                            grow: false,
                            stage: Stage::Start,
                        });
                    } else {
                        self.stack[idx].stage = Stage::Tests;
                    }
                }
            }
        }
        Ok(false)
    }

    /// Base and enlarge tests. Returns the popped entry when a blossom step is due.
    fn blossom_test(&mut self, top: &Frame) -> Result<Option<BlEntry>> {
        let u = top.node;
        let x = self.forest.vertex(u);
        let entry = if self.vx[x].blossom_node == NONE {
            if self.vx[x].bl.count_of(top.mtype.flip()) == 0 {
                return Ok(None);
            }
            let e = self.bl.pop(&mut self.vx[x].bl).expect("count is positive");
            if self.check && e.mtype == top.mtype {
                return Err(self.violation(format!(
                    "base test at node {} popped node {} of the same M-type",
                    u.0, e.node.0
                )));
            }
            e
        } else {
            let in_blossom = self.store.outer(u).is_some();
            // a blossom holding x whose base was created after u descends from u
            let below = !in_blossom && {
                let w = NodeId(self.vx[x].blossom_node as usize);
                self.store.set_base(w).0 > u.0
            };
            if !(in_blossom || below) {
                return Ok(None);
            }
            match self.bl.pop(&mut self.vx[x].bl) {
                Some(e) => e,
                None => return Ok(None),
            }
        };
        if self.check {
            if entry.search != self.search {
                return Err(self.violation(format!(
                    "node {} popped node {} left over from search {}",
                    u.0, entry.node.0, entry.search
                )));
            }
            if self.e1(x) == Some(entry) && !self.gl_is_empty(x) {
                return Err(self.violation(format!(
                    "first returned arc of vertex {x} popped while its grow list is nonempty"
                )));
            }
        }
        self.emit(TraceEvent::Pop { at: u, popped: entry.node });
        Ok(Some(entry))
    }

    fn blossom_step(&mut self, top: &Frame, entry: BlEntry) -> Result<Option<RecordId>> {
        let u = top.node;
        let y = entry.node;
        let rz = self.store.dsu.find(u.0);
        let mut heads = Vec::new();
        let mut r = self.store.dsu.find(y.0);
        while r != rz {
            let b = self.store.set_base(NodeId(r));
            match self.forest.parent(b) {
                Some(p) => {
                    heads.push(b);
                    r = self.store.dsu.find(p.0);
                }
                None => {
                    return Err(self.violation(format!(
                        "popped node {} does not descend from the contracted vertex of node {}",
                        y.0, u.0
                    )))
                }
            }
        }
        if heads.is_empty() {
            self.emit(TraceEvent::Noop { at: u, trigger: y });
            return Ok(None);
        }
        heads.reverse();

        let outer_u = self.store.outer(u);
        let kind = match outer_u {
            Some(_) => BlossomKind::Enlarge,
            None if self.store.outer(y).is_some() => BlossomKind::Skew,
            None => BlossomKind::Base,
        };
        let items: Vec<Item> = heads
            .iter()
            .map(|&h| match self.store.outer(h) {
                Some(s) => Item::Blossom(s),
                None => Item::Atom(h),
            })
            .collect();
        let (starter, base, mtype) = match outer_u {
            Some(s) => {
                let rec = &self.store.records[s.0];
                (Item::Blossom(s), rec.base, rec.mtype)
            }
            None => (Item::Atom(u), u, self.forest.mtype(heads[0])),
        };
        let record = self.store.push_record(BlossomRecord {
            kind,
            base,
            mtype,
            starter,
            anchor: u,
            path: heads.clone(),
            items: items.clone(),
            closure: y,
            parent: None,
            complete: false,
            search: self.search,
        });
        for it in std::iter::once(starter).chain(items.iter().copied()) {
            match it {
                Item::Blossom(s) => self.store.records[s.0].parent = Some(record),
                Item::Atom(a) => {
                    self.store.introduce(a, record);
                    let v = self.forest.vertex(a);
                    if self.vx[v].blossom_node == NONE {
                        self.vx[v].blossom_node = a.0 as u32;
                    } else if self.check {
                        let w = NodeId(self.vx[v].blossom_node as usize);
                        let same = self.store.same_set(w, u) || heads.iter().any(|&h| self.store.same_set(w, h));
                        if !same {
                            return Err(self.violation(format!(
                                "vertex {v} would occur in two blossoms (nodes {} and {})",
                                w.0, a.0
                            )));
                        }
                    }
                }
            }
        }
        for &h in &heads {
            self.store.merge_into(u, h, record);
        }
        self.store.label_set(u, record);
        self.emit(TraceEvent::Blossom {
            at: u,
            trigger: y,
            record,
            kind,
            arcs: heads.len(),
        });
        if self.check {
            self.check_record(record)?;
        }
        Ok(Some(record))
    }

    fn finish(&mut self, top: Frame) {
        let x = self.forest.vertex(top.node);
        let entry = BlEntry {
            node: top.node,
            edge: top.edge,
            mtype: top.mtype,
            search: self.search,
        };
        let i = self.bl.push(&mut self.vx[x].bl, entry);
        if self.vx[x].e1 == NONE {
            self.vx[x].e1 = i;
            self.vx[x].e1_mark = self.forest.len() as u32;
        }
        if top.grow {
            if let Some(r) = self.store.outer(top.node) {
                if self.store.records[r.0].base == top.node {
                    self.store.mark_complete(r);
                }
            }
        }
        self.emit(TraceEvent::Return { node: top.node, vertex: x });
    }

    fn augment(&mut self, terminal: NodeId) {
        let a = self.root;
        let x = self.forest.vertex(terminal);
        let mut arcs = Vec::new();
        let mut c = terminal;
        let root_node = loop {
            let b = self.store.set_base(c);
            match self.forest.parent(b) {
                Some(p) => {
                    arcs.push(b);
                    c = p;
                }
                None => break b,
            }
        };
        arcs.reverse();
        self.vx[a].def -= 1;
        self.vx[x].def -= 1;
        self.trails.push(TbarTrail {
            root: a,
            root_node,
            end: x,
            terminal,
            arcs,
            search: self.search,
        });
        self.emit(TraceEvent::Augment {
            search: self.search,
            root: a,
            end: x,
            terminal,
        });
    }

    /// Closed-trail alternation of a fresh record.
    fn check_record(&mut self, r: RecordId) -> Result<()> {
        let rec = self.store.records[r.0].clone();
        let ty = |h: NodeId| self.forest.mtype(h);
        let k = rec.path.len();
        for j in 0..k.saturating_sub(1) {
            if let Item::Atom(_) = rec.items[j] {
                if ty(rec.path[j]) == ty(rec.path[j + 1]) {
                    return Err(self.violation(format!(
                        "record {}: trail does not alternate at atom {}",
                        r.0, rec.path[j].0
                    )));
                }
            }
        }
        if rec.kind != BlossomKind::Enlarge
            && ty(rec.path[0]) == self.forest.mtype(rec.base) {
                return Err(self.violation(format!(
                    "record {}: first trail edge has the base edge's M-type",
                    r.0
                )));
            }
        match rec.kind {
            BlossomKind::Base if ty(rec.path[k - 1]) != rec.mtype => Err(self.violation(format!(
                "record {}: trail ends with the wrong M-type at the base",
                r.0
            ))),
            BlossomKind::Skew => {
                let Item::Blossom(a) = rec.items[k - 1] else {
                    return Err(self.violation(format!("record {}: skew closes at an atom", r.0)));
                };
                let inner = &self.store.records[a.0];
                if rec.closure == inner.base && inner.mtype != rec.mtype && ty(rec.path[k - 1]) != rec.mtype
                {
                    return Err(self.violation(format!(
                        "record {}: skew closure does not alternate",
                        r.0
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Subtree shape and path alternation over the nodes of the finished search.
    fn check_search(&mut self) -> Result<()> {
        for i in self.search_first_node..self.forest.len() {
            let u = NodeId(i);
            let parent = self.forest.parent(u);
            if let Some(r) = self.store.outer(u) {
                if self.store.records[r.0].base != u {
                    let ok = parent.is_some_and(|p| self.store.same_set(p, u));
                    if !ok {
                        return Err(self.violation(format!(
                            "blossom {} is not a subtree: node {} hangs outside it",
                            r.0, i
                        )));
                    }
                }
            }
            if let Some(p) = parent {
                if self.store.outer(p).is_none() && self.forest.mtype(p) == self.forest.mtype(u) {
                    return Err(self.violation(format!(
                        "search path does not alternate at atomic node {}",
                        p.0
                    )));
                }
            }
        }
        Ok(())
    }

    /// Arcs entering a vertex after its first return are pendant leaves of
    /// that arc's M-type.
    fn check_pendant(&self) -> Result<()> {
        for (i, n) in self.forest.iter().enumerate() {
            if n.parent.is_none() {
                continue;
            }
            let x = n.vertex;
            let mark = self.vx[x].e1_mark;
            if mark == NONE || i < mark as usize {
                continue;
            }
            let want = self.e1(x).expect("mark implies e1").mtype;
            if n.children != 0 || n.mtype != want {
                return Err(self.violation(format!(
                    "node {i} entered vertex {x} after its first return but is not a pendant {want:?} leaf"
                )));
            }
        }
        Ok(())
    }
}
