//! Phases of blocking trails until none is left.

use crate::certificate::{verify_with_trails, CertificateReport};
use crate::engine::{find_trails_traced, EngineOptions, TraceEvent};
use crate::error::Result;
use crate::expand::{expand_all, rematch};
use crate::multigraph::{DegreeBounds, Matching, Multigraph};

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub matching: Matching,
    /// Number of searches for trails, including the final empty one.
    pub phases: usize,
    pub trail_counts: Vec<usize>,
    /// Certificate of the final phase; its residual graph is the whole graph.
    pub certificate: CertificateReport,
}

pub fn max_f_matching(g: &Multigraph, f: &DegreeBounds, init: Option<&Matching>) -> Result<SolveReport> {
    max_f_matching_with(g, f, init, &EngineOptions::default(), None)
}

pub fn max_f_matching_with(
    g: &Multigraph,
    f: &DegreeBounds,
    init: Option<&Matching>,
    opts: &EngineOptions,
    mut trace: Option<&mut dyn FnMut(&TraceEvent)>,
) -> Result<SolveReport> {
    let mut m = init.cloned().unwrap_or_else(|| Matching::empty(g.m()));
    let mut trail_counts = Vec::new();
    loop {
        let tr = trace.as_mut().map(|t| &mut **t as &mut dyn FnMut(&TraceEvent));
        let res = find_trails_traced(g, f, &m, opts, tr)?;
        let trails = expand_all(g, &res)?;
        trail_counts.push(trails.len());
        if trails.is_empty() {
            let certificate = verify_with_trails(g, f, &res, &trails)?;
            return Ok(SolveReport {
                matching: m,
                phases: trail_counts.len(),
                trail_counts,
                certificate,
            });
        }
        m = rematch(g, f, &m, &trails)?;
    }
}
