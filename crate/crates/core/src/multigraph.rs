//! Multigraphs with degree bounds, and f-matchings over them.

use crate::error::{Error, Result};

/// Index of one edge copy. Parallel copies get distinct ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Whether an edge is in the matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MType {
    Matched,
    Unmatched,
}

impl MType {
    pub fn flip(self) -> MType {
        match self {
            MType::Matched => MType::Unmatched,
            MType::Unmatched => MType::Matched,
        }
    }

    pub fn of(matched: bool) -> MType {
        if matched {
            MType::Matched
        } else {
            MType::Unmatched
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<EdgeId> {
        if u >= self.n || v >= self.n {
            return Err(Error::Input(format!(
                "edge ({u}, {v}) has an endpoint outside 0..{}",
                self.n
            )));
        }
        self.edges.push((u, v));
        Ok(EdgeId(self.edges.len() - 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e.0]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (u, v) = self.edges[e.0];
        u == v
    }

    /// The endpoint of `e` that is not `x`. For a loop this is `x` itself.
    pub fn other(&self, e: EdgeId, x: usize) -> usize {
        let (u, v) = self.edges[e.0];
        if u == x {
            v
        } else {
            debug_assert_eq!(v, x);
            u
        }
    }

    /// Incident edge ids per vertex, loops listed once, in id order.
    pub fn adjacency(&self) -> Vec<Vec<EdgeId>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push(EdgeId(i));
            if u != v {
                adj[v].push(EdgeId(i));
            }
        }
        adj
    }

    /// Subgraph on the same vertices keeping the listed edges, in the given order.
    /// Returns the subgraph and the original id of each new edge.
    pub fn edge_subgraph(&self, keep: &[EdgeId]) -> (Multigraph, Vec<EdgeId>) {
        let edges = keep.iter().map(|&e| self.edges[e.0]).collect();
        (Multigraph { n: self.n, edges }, keep.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    f: Vec<usize>,
}

impl DegreeBounds {
    pub fn new(f: Vec<usize>) -> Self {
        DegreeBounds { f }
    }

    pub fn uniform(n: usize, b: usize) -> Self {
        DegreeBounds { f: vec![b; n] }
    }

    pub fn get(&self, v: usize) -> usize {
        self.f[v]
    }

    pub fn set(&mut self, v: usize, b: usize) {
        self.f[v] = b;
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.f
    }

    pub fn check(&self, g: &Multigraph) -> Result<()> {
        if self.f.len() != g.n() {
            return Err(Error::Input(format!(
                "degree bounds have length {} but the graph has {} vertices",
                self.f.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// A set of edge ids, stored as a membership mask over the edges of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    member: Vec<bool>,
    size: usize,
}

impl Matching {
    pub fn empty(m: usize) -> Self {
        Matching {
            member: vec![false; m],
            size: 0,
        }
    }

    pub fn from_edges(m: usize, edges: &[EdgeId]) -> Result<Self> {
        let mut mt = Matching::empty(m);
        for &e in edges {
            if e.0 >= m {
                return Err(Error::Input(format!("edge id {} out of range 0..{m}", e.0)));
            }
            mt.insert(e);
        }
        Ok(mt)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.member[e.0]
    }

    pub fn mtype(&self, e: EdgeId) -> MType {
        MType::of(self.member[e.0])
    }

    pub fn insert(&mut self, e: EdgeId) {
        if !self.member[e.0] {
            self.member[e.0] = true;
            self.size += 1;
        }
    }

    pub fn remove(&mut self, e: EdgeId) {
        if self.member[e.0] {
            self.member[e.0] = false;
            self.size -= 1;
        }
    }

    pub fn toggle(&mut self, e: EdgeId) {
        if self.member[e.0] {
            self.remove(e)
        } else {
            self.insert(e)
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of edge slots this mask covers.
    pub fn universe(&self) -> usize {
        self.member.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| EdgeId(i))
    }
}

pub fn matching_size(m: &Matching) -> usize {
    m.size()
}

/// Degree of every vertex in `m`, loops counted twice.
pub fn degrees(g: &Multigraph, m: &Matching) -> Vec<usize> {
    let mut deg = vec![0; g.n()];
    for e in m.edges() {
        let (u, v) = g.endpoints(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// Vertices whose bound `m` exceeds, in increasing order.
pub fn validate_matching(g: &Multigraph, f: &DegreeBounds, m: &Matching) -> Result<Vec<usize>> {
    f.check(g)?;
    if m.universe() != g.m() {
        return Err(Error::Input(format!(
            "matching covers {} edge ids but the graph has {}",
            m.universe(),
            g.m()
        )));
    }
    let deg = degrees(g, m);
    Ok((0..g.n()).filter(|&v| deg[v] > f.get(v)).collect())
}

/// Like `validate_matching`, but turns violations into an input error.
pub fn require_valid(g: &Multigraph, f: &DegreeBounds, m: &Matching) -> Result<()> {
    let bad = validate_matching(g, f, m)?;
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "matching exceeds the degree bound at vertices {bad:?}"
        )))
    }
}

pub fn deficiency(g: &Multigraph, f: &DegreeBounds, m: &Matching, v: usize) -> usize {
    let mut d = 0;
    for e in m.edges() {
        let (a, b) = g.endpoints(e);
        d += usize::from(a == v) + usize::from(b == v);
    }
    f.get(v).saturating_sub(d)
}

pub fn deficiencies(g: &Multigraph, f: &DegreeBounds, m: &Matching) -> Vec<usize> {
    let deg = degrees(g, m);
    (0..g.n()).map(|v| f.get(v).saturating_sub(deg[v])).collect()
}
