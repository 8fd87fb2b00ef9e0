use std::fmt::Write;

use crate::multigraph::{EdgeId, MType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// Edge carried by an arc. Every search root hangs off an artificial matched arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcEdge {
    Artificial,
    Edge(EdgeId),
}

impl ArcEdge {
    pub fn edge(self) -> Option<EdgeId> {
        match self {
            ArcEdge::Artificial => None,
            ArcEdge::Edge(e) => Some(e),
        }
    }
}

/// One occurrence of a vertex, named by the arc entering it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Node {
    pub vertex: usize,
    pub parent: Option<NodeId>,
    pub edge: ArcEdge,
    pub mtype: MType,
    pub search: usize,
    pub children: u32,
}

/// Arc of the forest, from parent occurrence to child occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub edge: ArcEdge,
    pub tail: Option<NodeId>,
    pub head: NodeId,
    pub g_tail: Option<usize>,
    pub g_head: usize,
    pub mtype: MType,
}

const NIL: u32 = u32::MAX;

// Stored form of a node; NIL stands for no parent or the artificial edge.
#[derive(Clone, Copy, Debug)]
struct Packed {
    vertex: u32,
    parent: u32,
    edge: u32,
    search: u32,
    children: u32,
    matched: bool,
}

fn narrow(x: usize) -> u32 {
    u32::try_from(x).ok().filter(|&v| v != NIL).expect("forest index fits in u32")
}

fn opt(i: u32) -> Option<usize> {
    (i != NIL).then_some(i as usize)
}

#[derive(Clone, Debug, Default)]
pub struct SearchForest {
    nodes: Vec<Packed>,
    pub roots: Vec<NodeId>,
}

impl SearchForest {
    pub fn with_capacity(nodes: usize) -> Self {
        SearchForest {
            nodes: Vec::with_capacity(nodes),
            roots: Vec::new(),
        }
    }

    pub fn node(&self, u: NodeId) -> Node {
        let p = self.nodes[u.0];
        Node {
            vertex: p.vertex as usize,
            parent: opt(p.parent).map(NodeId),
            edge: opt(p.edge).map_or(ArcEdge::Artificial, |e| ArcEdge::Edge(EdgeId(e))),
            mtype: MType::of(p.matched),
            search: p.search as usize,
            children: p.children,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Node> + '_ {
        (0..self.nodes.len()).map(|i| self.node(NodeId(i)))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vertex(&self, u: NodeId) -> usize {
        self.nodes[u.0].vertex as usize
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        opt(self.nodes[u.0].parent).map(NodeId)
    }

    pub fn mtype(&self, u: NodeId) -> MType {
        MType::of(self.nodes[u.0].matched)
    }

    /// The arc entering `u`.
    pub fn arc(&self, u: NodeId) -> Arc {
        let n = self.node(u);
        Arc {
            edge: n.edge,
            tail: n.parent,
            head: u,
            g_tail: n.parent.map(|p| self.vertex(p)),
            g_head: n.vertex,
            mtype: n.mtype,
        }
    }

    pub(crate) fn push(&mut self, node: Node) -> NodeId {
        let id = NodeId(self.nodes.len());
        match node.parent {
            Some(p) => self.nodes[p.0].children += 1,
            None => self.roots.push(id),
        }
        self.nodes.push(Packed {
            vertex: narrow(node.vertex),
            parent: node.parent.map_or(NIL, |p| narrow(p.0)),
            edge: node.edge.edge().map_or(NIL, |e| narrow(e.0)),
            search: narrow(node.search),
            children: node.children,
            matched: node.mtype == MType::Matched,
        });
        id
    }

    /// True if `a` is `d` or a proper ancestor of it.
    pub fn is_ancestor(&self, a: NodeId, d: NodeId) -> bool {
        let mut cur = Some(d);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }

    /// Text dump of every node, one per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, n) in self.iter().enumerate() {
            let edge = match n.edge {
                ArcEdge::Artificial => "eps".to_string(),
                ArcEdge::Edge(e) => e.0.to_string(),
            };
            let parent = n.parent.map_or("-".to_string(), |p| p.0.to_string());
            let _ = writeln!(
                s,
                "node {i}: vertex {} parent {parent} edge {edge} {:?} search {}",
                n.vertex, n.mtype, n.search
            );
        }
        s
    }
}

/// An arc returned by a d-invocation, as stored in a blossom list.
/// `node` is the forest occurrence of the vertex; `edge` and `mtype` describe
/// the arc the invocation entered through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlEntry {
    pub node: NodeId,
    pub edge: ArcEdge,
    pub mtype: MType,
    pub search: usize,
}


/// Head of one vertex's FIFO blossom list; the entries live in a `BlArena`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlHead {
    head: u32,
    tail: u32,
    count: [u32; 2],
}

impl Default for BlHead {
    fn default() -> Self {
        BlHead {
            head: NIL,
            tail: NIL,
            count: [0, 0],
        }
    }
}

fn slot(t: MType) -> usize {
    match t {
        MType::Matched => 0,
        MType::Unmatched => 1,
    }
}

impl BlHead {
    pub fn len(&self) -> usize {
        (self.count[0] + self.count[1]) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.head == NIL
    }

    pub fn count_of(&self, t: MType) -> usize {
        self.count[slot(t)] as usize
    }
}

// Stored form of a blossom list entry, with the link to the next one.
#[derive(Clone, Copy, Debug)]
struct PackedEntry {
    node: u32,
    edge: u32,
    search: u32,
    next: u32,
    matched: bool,
}

impl PackedEntry {
    fn unpack(&self) -> BlEntry {
        BlEntry {
            node: NodeId(self.node as usize),
            edge: opt(self.edge).map_or(ArcEdge::Artificial, |e| ArcEdge::Edge(EdgeId(e))),
            mtype: MType::of(self.matched),
            search: self.search as usize,
        }
    }
}

/// Entries of every blossom list, linked in push order.
#[derive(Clone, Debug, Default)]
pub struct BlArena {
    entries: Vec<PackedEntry>,
}

impl BlArena {
    pub fn with_capacity(entries: usize) -> Self {
        BlArena {
            entries: Vec::with_capacity(entries),
        }
    }

    /// Appends `e` to the list at `h` and returns its arena index.
    pub fn push(&mut self, h: &mut BlHead, e: BlEntry) -> u32 {
        let i = self.entries.len() as u32;
        self.entries.push(PackedEntry {
            node: narrow(e.node.0),
            edge: e.edge.edge().map_or(NIL, |e| narrow(e.0)),
            search: narrow(e.search),
            next: NIL,
            matched: e.mtype == MType::Matched,
        });
        if h.tail == NIL {
            h.head = i;
        } else {
            self.entries[h.tail as usize].next = i;
        }
        h.tail = i;
        h.count[slot(e.mtype)] += 1;
        i
    }

    pub fn pop(&mut self, h: &mut BlHead) -> Option<BlEntry> {
        if h.head == NIL {
            return None;
        }
        let p = self.entries[h.head as usize];
        let (e, next) = (p.unpack(), p.next);
        h.head = next;
        if next == NIL {
            h.tail = NIL;
        }
        h.count[slot(e.mtype)] -= 1;
        Some(e)
    }

    pub fn front(&self, h: &BlHead) -> Option<BlEntry> {
        (h.head != NIL).then(|| self.entries[h.head as usize].unpack())
    }

    /// The entry at an index returned by `push`, popped or not.
    pub fn entry(&self, i: u32) -> BlEntry {
        self.entries[i as usize].unpack()
    }
}

/// Per-vertex FIFO blossom lists in one shared arena.
#[derive(Clone, Debug)]
pub struct BlLists {
    heads: Vec<BlHead>,
    arena: BlArena,
}

impl BlLists {
    pub fn new(n: usize) -> Self {
        BlLists {
            heads: vec![BlHead::default(); n],
            arena: BlArena::default(),
        }
    }

    pub fn push(&mut self, x: usize, e: BlEntry) -> u32 {
        self.arena.push(&mut self.heads[x], e)
    }

    pub fn pop(&mut self, x: usize) -> Option<BlEntry> {
        self.arena.pop(&mut self.heads[x])
    }

    pub fn front(&self, x: usize) -> Option<BlEntry> {
        self.arena.front(&self.heads[x])
    }

    pub fn len(&self, x: usize) -> usize {
        self.heads[x].len()
    }

    pub fn is_empty(&self, x: usize) -> bool {
        self.heads[x].is_empty()
    }

    pub fn count_of(&self, x: usize, t: MType) -> usize {
        self.heads[x].count_of(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(i: usize) -> BlEntry {
        BlEntry {
            node: NodeId(i),
            edge: ArcEdge::Edge(EdgeId(i)),
            mtype: if i.is_multiple_of(2) { MType::Matched } else { MType::Unmatched },
            search: 0,
        }
    }

    #[test]
    fn pop_returns_first_pushed() {
        let mut bl = BlLists::new(1);
        bl.push(0, entry(1));
        bl.push(0, entry(2));
        assert_eq!(bl.pop(0), Some(entry(1)));
    }

    #[test]
    fn single_push_pop() {
        let mut bl = BlLists::new(1);
        bl.push(0, entry(1));
        assert_eq!(bl.pop(0), Some(entry(1)));
        assert_eq!(bl.pop(0), None);
        assert!(bl.is_empty(0));
    }

    #[test]
    fn fifo_order_and_counts() {
        let mut bl = BlLists::new(2);
        for i in 0..3 {
            bl.push(1, entry(i));
        }
        assert_eq!(bl.count_of(1, MType::Matched), 2);
        assert_eq!(bl.count_of(1, MType::Unmatched), 1);
        let got: Vec<_> = (0..3).map(|_| bl.pop(1).unwrap().node.0).collect();
        assert_eq!(got, vec![0, 1, 2]);
        assert_eq!(bl.len(1), 0);
        assert!(bl.is_empty(0));
        bl.push(1, entry(5));
        assert_eq!(bl.front(1), Some(entry(5)));
    }
}
