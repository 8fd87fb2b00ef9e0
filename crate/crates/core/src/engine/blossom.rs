use crate::dsu::Dsu;
use crate::multigraph::MType;

use super::forest::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RecordId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlossomKind {
    /// New blossom closed at an atomic occurrence: starts and ends at the base atom.
    Base,
    /// An existing blossom grown by a closed trail leaving and re-entering it.
    Enlarge,
    /// Trail from an atom into a contracted blossom holding another occurrence
    /// of the same vertex, closed through that blossom.
    Skew,
}

/// A piece of a blossom's closed trail: one occurrence or a contracted sub-blossom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Item {
    Atom(NodeId),
    Blossom(RecordId),
}

/// One blossom step. The closed trail runs from `starter` down the forest arcs
/// `path[0..k]` (each arc named by its head node) and closes back at `anchor`.
#[derive(Clone, Debug)]
pub struct BlossomRecord {
    pub kind: BlossomKind,
    pub base: NodeId,
    /// M-type of the trail's extreme edges at the base.
    pub mtype: MType,
    pub starter: Item,
    /// Occurrence the trail closes at: the base for Base and Skew, the
    /// triggering node inside the starter for Enlarge.
    pub anchor: NodeId,
    pub path: Vec<NodeId>,
    pub items: Vec<Item>,
    /// The popped occurrence that triggered the step.
    pub closure: NodeId,
    pub parent: Option<RecordId>,
    pub complete: bool,
    pub search: usize,
}

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, Default)]
pub struct BlossomStore {
    pub(crate) dsu: Dsu,
    set_record: Vec<u32>,
    node_record: Vec<u32>,
    path_pos: Vec<u32>,
    pub records: Vec<BlossomRecord>,
}

impl BlossomStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn with_capacity(nodes: usize) -> Self {
        BlossomStore {
            dsu: Dsu::with_capacity(nodes),
            set_record: Vec::with_capacity(nodes),
            node_record: Vec::with_capacity(nodes),
            path_pos: Vec::with_capacity(nodes),
            records: Vec::new(),
        }
    }

    pub(crate) fn add_node(&mut self) {
        self.dsu.push();
        self.set_record.push(NONE);
        self.node_record.push(NONE);
        self.path_pos.push(NONE);
    }

    pub fn record(&self, r: RecordId) -> &BlossomRecord {
        &self.records[r.0]
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Outermost blossom currently containing `u`, if any.
    pub fn outer(&mut self, u: NodeId) -> Option<RecordId> {
        let r = self.dsu.find(u.0);
        let rec = self.set_record[r];
        (rec != NONE).then_some(RecordId(rec as usize))
    }

    pub fn outer_imm(&self, u: NodeId) -> Option<RecordId> {
        let r = self.dsu.find_imm(u.0);
        let rec = self.set_record[r];
        (rec != NONE).then_some(RecordId(rec as usize))
    }

    /// Base node of the contracted vertex holding `u`.
    pub fn set_base(&mut self, u: NodeId) -> NodeId {
        match self.outer(u) {
            Some(r) => self.records[r.0].base,
            None => u,
        }
    }

    pub fn set_base_imm(&self, u: NodeId) -> NodeId {
        match self.outer_imm(u) {
            Some(r) => self.records[r.0].base,
            None => u,
        }
    }

    pub fn same_set(&mut self, a: NodeId, b: NodeId) -> bool {
        self.dsu.find(a.0) == self.dsu.find(b.0)
    }

    /// Record in which `u` first joined a blossom.
    pub fn introduced_in(&self, u: NodeId) -> Option<RecordId> {
        let r = self.node_record[u.0];
        (r != NONE).then_some(RecordId(r as usize))
    }

    /// Index of the arc entering `h` within the one record path it heads.
    pub fn path_index(&self, h: NodeId) -> Option<usize> {
        let p = self.path_pos[h.0];
        (p != NONE).then_some(p as usize)
    }

    pub(crate) fn push_record(&mut self, rec: BlossomRecord) -> RecordId {
        for (j, h) in rec.path.iter().enumerate() {
            self.path_pos[h.0] = j as u32;
        }
        self.records.push(rec);
        RecordId(self.records.len() - 1)
    }

    pub(crate) fn introduce(&mut self, u: NodeId, r: RecordId) {
        debug_assert_eq!(self.node_record[u.0], NONE);
        self.node_record[u.0] = r.0 as u32;
    }

    pub(crate) fn merge_into(&mut self, keep: NodeId, other: NodeId, r: RecordId) {
        let root = self.dsu.union(keep.0, other.0);
        self.set_record[root] = r.0 as u32;
    }

    pub(crate) fn label_set(&mut self, u: NodeId, r: RecordId) {
        let root = self.dsu.find(u.0);
        self.set_record[root] = r.0 as u32;
    }

    /// Marks `r` complete, together with the earlier versions it enlarged.
    pub(crate) fn mark_complete(&mut self, r: RecordId) {
        let mut cur = Some(r);
        while let Some(c) = cur {
            let rec = &mut self.records[c.0];
            if rec.complete {
                break;
            }
            rec.complete = true;
            cur = match (rec.kind, rec.starter) {
                (BlossomKind::Enlarge, Item::Blossom(s)) => Some(s),
                _ => None,
            };
        }
    }

    /// The enclosing records of `r`, innermost first, excluding `r`.
    pub fn ancestors(&self, r: RecordId) -> impl Iterator<Item = RecordId> + '_ {
        let mut cur = self.records[r.0].parent;
        std::iter::from_fn(move || {
            let c = cur?;
            cur = self.records[c.0].parent;
            Some(c)
        })
    }

    /// Outermost record enclosing `r` (possibly `r`).
    pub fn top(&self, r: RecordId) -> RecordId {
        self.ancestors(r).last().unwrap_or(r)
    }

    /// True if `inner` is `outer` or nested in it.
    pub fn nested_in(&self, inner: RecordId, outer: RecordId) -> bool {
        inner == outer || self.ancestors(inner).any(|a| a == outer)
    }

    /// Every node of the blossom `r`, in no particular order.
    pub fn members(&self, r: RecordId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![r];
        while let Some(c) = stack.pop() {
            let rec = &self.records[c.0];
            for it in std::iter::once(&rec.starter).chain(rec.items.iter()) {
                match *it {
                    Item::Atom(u) => out.push(u),
                    Item::Blossom(s) => stack.push(s),
                }
            }
        }
        out
    }

    /// Records that are complete and not nested in a complete record.
    pub fn maximal_complete(&self) -> Vec<RecordId> {
        let mut out = Vec::new();
        let mut stack: Vec<RecordId> = (0..self.records.len())
            .map(RecordId)
            .filter(|r| self.records[r.0].parent.is_none())
            .collect();
        while let Some(r) = stack.pop() {
            let rec = &self.records[r.0];
            if rec.complete {
                out.push(r);
                continue;
            }
            for it in std::iter::once(&rec.starter).chain(rec.items.iter()) {
                if let Item::Blossom(s) = *it {
                    stack.push(s);
                }
            }
        }
        out.sort();
        out
    }

    /// For every node, the maximal complete blossom containing it.
    pub fn complete_assignment(&self, nodes: usize) -> Vec<Option<RecordId>> {
        let mut out = vec![None; nodes];
        for r in self.maximal_complete() {
            for u in self.members(r) {
                out[u.0] = Some(r);
            }
        }
        out
    }

    /// Number of nodes in the set of `u`.
    pub fn set_size(&mut self, u: NodeId) -> usize {
        self.dsu.set_size(u.0)
    }
}
