//! The blocking-trails search.
//!
//! `find_trails` runs one depth-first search from each free vertex, growing a
//! forest of arc occurrences and contracting blossoms by merging node sets.
//! Every successful search yields one augmenting trail, stored as a path of
//! the contracted forest; `expand` turns these into trails of the graph.

mod blossom;
mod forest;
mod search;

use std::fmt;

pub use blossom::{BlossomKind, BlossomRecord, BlossomStore, Item, RecordId};
pub use forest::{Arc, ArcEdge, BlArena, BlEntry, BlHead, BlLists, Node, NodeId, SearchForest};

use crate::error::{Error, Result};
use crate::multigraph::{require_valid, DegreeBounds, EdgeId, Matching, Multigraph};

/// Order in which free vertices root searches.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum SearchOrder {
    #[default]
    Ascending,
    /// A permutation of the vertices.
    Custom(Vec<usize>),
}

#[derive(Clone, Debug, Default)]
pub struct EngineOptions {
    pub order: SearchOrder,
    /// Verify search invariants as the search runs; a breach becomes
    /// `Error::Invariant` carrying a forest dump.
    pub check: bool,
}

/// An augmenting trail found by one search, as a path of the contracted forest.
#[derive(Clone, Debug)]
pub struct TbarTrail {
    pub root: usize,
    pub root_node: NodeId,
    pub end: usize,
    /// Occurrence whose invocation passed the augment test.
    pub terminal: NodeId,
    /// Forest arcs between contracted vertices from the root down, named by head.
    pub arcs: Vec<NodeId>,
    pub search: usize,
}

#[derive(Clone, Debug)]
pub struct BlockingResult {
    pub trails: Vec<TbarTrail>,
    pub forest: SearchForest,
    pub blossoms: BlossomStore,
    pub e1: Vec<Option<BlEntry>>,
    /// Deficiencies under the input matching.
    pub def_initial: Vec<usize>,
    /// Deficiencies after all trails are augmented.
    pub def_final: Vec<usize>,
    /// The matching the search ran against.
    pub matching: Matching,
    pub searches: usize,
}

/// One step of the search, for the optional trace stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    SearchStart { search: usize, root: usize },
    Grow { from: NodeId, to: NodeId, edge: EdgeId },
    Pop { at: NodeId, popped: NodeId },
    Blossom { at: NodeId, trigger: NodeId, record: RecordId, kind: BlossomKind, arcs: usize },
    Noop { at: NodeId, trigger: NodeId },
    Augment { search: usize, root: usize, end: usize, terminal: NodeId },
    Return { node: NodeId, vertex: usize },
    SearchEnd { search: usize, found: bool },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::SearchStart { search, root } => write!(f, "search {search} root {root}"),
            TraceEvent::Grow { from, to, edge } => {
                write!(f, "grow {} -> {} edge {}", from.0, to.0, edge.0)
            }
            TraceEvent::Pop { at, popped } => write!(f, "pop at {} got {}", at.0, popped.0),
            TraceEvent::Blossom { at, trigger, record, kind, arcs } => write!(
                f,
                "blossom {} {kind:?} at {} trigger {} arcs {arcs}",
                record.0, at.0, trigger.0
            ),
            TraceEvent::Noop { at, trigger } => write!(f, "noop at {} trigger {}", at.0, trigger.0),
            TraceEvent::Augment { search, root, end, terminal } => write!(
                f,
                "augment search {search} from {root} to {end} at node {}",
                terminal.0
            ),
            TraceEvent::Return { node, vertex } => write!(f, "return {} vertex {vertex}", node.0),
            TraceEvent::SearchEnd { search, found } => {
                write!(f, "end search {search} {}", if *found { "found" } else { "failed" })
            }
        }
    }
}

pub fn find_trails(
    g: &Multigraph,
    f: &DegreeBounds,
    m: &Matching,
    opts: &EngineOptions,
) -> Result<BlockingResult> {
    find_trails_traced(g, f, m, opts, None)
}

pub fn find_trails_traced(
    g: &Multigraph,
    f: &DegreeBounds,
    m: &Matching,
    opts: &EngineOptions,
    trace: Option<&mut dyn FnMut(&TraceEvent)>,
) -> Result<BlockingResult> {
    require_valid(g, f, m)?;
    let order: Vec<usize> = match &opts.order {
        SearchOrder::Ascending => (0..g.n()).collect(),
        SearchOrder::Custom(p) => {
            let mut seen = vec![false; g.n()];
            for &v in p {
                if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Input("search order is not a permutation".into()));
                }
            }
            if p.len() != g.n() {
                return Err(Error::Input("search order is not a permutation".into()));
            }
            p.clone()
        }
    };
    let mut engine = search::Engine::new(g, f, m, opts.check, trace);
    engine.run(&order)?;
    Ok(engine.into_result())
}
