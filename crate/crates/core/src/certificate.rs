//! Vertex labels, the residual graph, and the odd-set bound that certifies a
//! blocking phase (and, after the last phase, global maximality).

use crate::engine::{BlockingResult, NodeId, RecordId};
use crate::error::{Error, Result};
use crate::expand::{expand_all, rematch, GTrail};
use crate::multigraph::{DegreeBounds, EdgeId, MType, Matching, Multigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnlabeledKind {
    InCompleteBlossom,
    /// No invocation at the vertex ever returned.
    Orphan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    I,
    O,
    Unlabeled(UnlabeledKind),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub label: Vec<Label>,
}

impl Labeling {
    pub fn set(&self, want: Label) -> Vec<usize> {
        (0..self.label.len()).filter(|&v| self.label[v] == want).collect()
    }
}

/// Residual graph on the same vertex ids, with its own dense edge ids.
#[derive(Clone, Debug)]
pub struct Residual {
    pub graph: Multigraph,
    /// Original id of each residual edge.
    pub orig: Vec<EdgeId>,
    pub f: DegreeBounds,
    pub matching: Matching,
}

/// Value of the bound for one (I, O) choice, with its components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: usize,
    pub components: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub labeling: Labeling,
    pub i: Vec<usize>,
    pub o: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub bound: usize,
    pub residual_size: usize,
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub ok: bool,
    pub bound: usize,
    pub residual_size: usize,
    pub failures: Vec<String>,
    pub certificate: Certificate,
    pub residual: Residual,
}

/// Which vertices occur in some complete blossom.
fn in_complete(result: &BlockingResult, n: usize) -> (Vec<bool>, Vec<Option<RecordId>>) {
    let assign = result.blossoms.complete_assignment(result.forest.len());
    let mut inside = vec![false; n];
    for (i, a) in assign.iter().enumerate() {
        if a.is_some() {
            inside[result.forest.vertex(NodeId(i))] = true;
        }
    }
    (inside, assign)
}

pub fn compute_labels(result: &BlockingResult) -> Labeling {
    let n = result.e1.len();
    let (inside, _) = in_complete(result, n);
    let label = (0..n)
        .map(|x| {
            if inside[x] {
                Label::Unlabeled(UnlabeledKind::InCompleteBlossom)
            } else {
                match result.e1[x] {
                    None => Label::Unlabeled(UnlabeledKind::Orphan),
                    Some(e) if e.mtype == MType::Unmatched => Label::I,
                    Some(_) => Label::O,
                }
            }
        })
        .collect();
    Labeling { label }
}

/// Edges of complete blossoms: the entering arcs of every non-base node.
fn complete_blossom_edges(result: &BlockingResult, assign: &[Option<RecordId>]) -> Vec<bool> {
    let mut keep = vec![false; result.matching.universe()];
    for (i, a) in assign.iter().enumerate() {
        if let Some(r) = a {
            let u = NodeId(i);
            if result.blossoms.record(*r).base != u {
                if let Some(e) = result.forest.node(u).edge.edge() {
                    keep[e.0] = true;
                }
            }
        }
    }
    keep
}

/// RG = (G minus trail edges) plus complete-blossom edges, with
/// f'(x) = deg(x, M_RG) + def(x) after the phase.
pub fn residual_graph(g: &Multigraph, f: &DegreeBounds, result: &BlockingResult, trails: &[GTrail]) -> Result<Residual> {
    let after = rematch(g, f, &result.matching, trails)?;
    let (_, assign) = in_complete(result, g.n());
    let mut keep = complete_blossom_edges(result, &assign);
    let mut on_trail = vec![false; g.m()];
    for t in trails {
        for e in t.edges() {
            on_trail[e.0] = true;
        }
    }
    for (e, k) in keep.iter_mut().enumerate() {
        *k |= !on_trail[e];
    }
    let ids: Vec<EdgeId> = (0..g.m()).filter(|&e| keep[e]).map(EdgeId).collect();
    let (graph, orig) = g.edge_subgraph(&ids);
    let mut matching = Matching::empty(graph.m());
    let mut deg = vec![0usize; g.n()];
    for (i, &e) in orig.iter().enumerate() {
        if after.contains(e) {
            matching.insert(EdgeId(i));
            let (u, v) = g.endpoints(e);
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    let fp = (0..g.n()).map(|x| deg[x] + result.def_final[x]).collect();
    Ok(Residual {
        graph,
        orig,
        f: DegreeBounds::new(fp),
        matching,
    })
}

fn membership(n: usize, set: &[usize], what: &str) -> Result<Vec<bool>> {
    let mut mark = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::Input(format!("{what} vertex {v} out of range")));
        }
        mark[v] = true;
    }
    Ok(mark)
}

/// f(I) + |γ(O)| + Σ_C ⌊(f(C) + |E[C,O]|)/2⌋ over components C of G − I − O.
pub fn bound_value(g: &Multigraph, f: &DegreeBounds, i: &[usize], o: &[usize]) -> Result<usize> {
    Ok(evaluate_bound(g, f, i, o)?.value)
}

pub fn evaluate_bound(g: &Multigraph, f: &DegreeBounds, i: &[usize], o: &[usize]) -> Result<Bound> {
    f.check(g)?;
    let n = g.n();
    let in_i = membership(n, i, "I")?;
    let in_o = membership(n, o, "O")?;
    if let Some(v) = (0..n).find(|&v| in_i[v] && in_o[v]) {
        return Err(Error::Input(format!("vertex {v} is in both I and O")));
    }
    let free = |v: usize| !in_i[v] && !in_o[v];
    let mut dsu = crate::dsu::Dsu::with_capacity(n);
    for _ in 0..n {
        dsu.push();
    }
    for &(u, v) in g.edges() {
        if free(u) && free(v) {
            dsu.union(u, v);
        }
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if free(v) {
            let r = dsu.find(v);
            if comp_of[r] == usize::MAX {
                comp_of[r] = components.len();
                components.push(Vec::new());
            }
            components[comp_of[r]].push(v);
        }
    }
    let mut weight: Vec<usize> = components
        .iter()
        .map(|c| c.iter().map(|&v| f.get(v)).sum())
        .collect();
    let mut value: usize = (0..n).filter(|&v| in_i[v]).map(|v| f.get(v)).sum();
    for &(u, v) in g.edges() {
        if in_o[u] && in_o[v] {
            value += 1;
        } else if in_o[u] && free(v) {
            weight[comp_of[dsu.find(v)]] += 1;
        } else if in_o[v] && free(u) {
            weight[comp_of[dsu.find(u)]] += 1;
        }
    }
    value += weight.iter().map(|w| w / 2).sum::<usize>();
    Ok(Bound { value, components })
}

/// Labels, residual graph and bound of a finished phase, with every check
/// that the bound is tight.
pub fn verify(g: &Multigraph, f: &DegreeBounds, result: &BlockingResult) -> Result<CertificateReport> {
    let trails = expand_all(g, result)?;
    verify_with_trails(g, f, result, &trails)
}

pub fn verify_with_trails(
    g: &Multigraph,
    f: &DegreeBounds,
    result: &BlockingResult,
    trails: &[GTrail],
) -> Result<CertificateReport> {
    let rg = residual_graph(g, f, result, trails)?;
    let labeling = compute_labels(result);
    let i = labeling.set(Label::I);
    let o = labeling.set(Label::O);
    let bound = evaluate_bound(&rg.graph, &rg.f, &i, &o)?;
    let residual_size = rg.matching.size();
    let n = g.n();
    let lab = &labeling.label;
    let is = |v: usize, l: Label| lab[v] == l;
    let mut failures = Vec::new();

    // (a) I vertices are saturated and no matched edge joins two I ends
    for &x in &i {
        if result.def_final[x] != 0 {
            failures.push(format!("I vertex {x} is still free"));
        }
    }
    let rgg = &rg.graph;
    for k in 0..rgg.m() {
        let e = EdgeId(k);
        let (u, v) = rgg.endpoints(e);
        let matched = rg.matching.contains(e);
        if matched && is(u, Label::I) && is(v, Label::I) {
            failures.push(format!("matched edge {} has both ends in I", rg.orig[k].0));
        }
        // (b)
        if !matched && is(u, Label::O) && is(v, Label::O) {
            failures.push(format!("unmatched edge {} joins O vertices", rg.orig[k].0));
        }
    }
    // (c) each component is saturated up to parity
    let mut comp_of = vec![usize::MAX; n];
    for (c, vs) in bound.components.iter().enumerate() {
        for &v in vs {
            comp_of[v] = c;
        }
    }
    let nc = bound.components.len();
    let mut weight: Vec<usize> = bound
        .components
        .iter()
        .map(|c| c.iter().map(|&v| rg.f.get(v)).sum())
        .collect();
    let mut covered = vec![0usize; nc];
    for k in 0..rgg.m() {
        let e = EdgeId(k);
        let (u, v) = rgg.endpoints(e);
        let matched = rg.matching.contains(e);
        let (cu, cv) = (comp_of[u], comp_of[v]);
        if cu != usize::MAX && cu == cv {
            covered[cu] += usize::from(matched);
        } else if cu != usize::MAX && is(v, Label::O) {
            weight[cu] += 1;
            covered[cu] += usize::from(matched);
        } else if cv != usize::MAX && is(u, Label::O) {
            weight[cv] += 1;
            covered[cv] += usize::from(matched);
        }
    }
    for c in 0..nc {
        if covered[c] != weight[c] / 2 {
            failures.push(format!(
                "component {:?} covers {} matched edges, bound allows {}",
                bound.components[c],
                covered[c],
                weight[c] / 2
            ));
        }
    }
    // orphanage edges reach labeled vertices through edges of e1's type, or
    // are base edges of complete blossoms
    let mut base_edges = vec![false; g.m()];
    for r in result.blossoms.maximal_complete() {
        let b = result.blossoms.record(r).base;
        if let Some(e) = result.forest.node(b).edge.edge() {
            base_edges[e.0] = true;
        }
    }
    for k in 0..rgg.m() {
        let e = EdgeId(k);
        let (u, v) = rgg.endpoints(e);
        for (a, b) in [(u, v), (v, u)] {
            if lab[a] != Label::Unlabeled(UnlabeledKind::Orphan) {
                continue;
            }
            let ty = rg.matching.mtype(e);
            let ok = match lab[b] {
                Label::Unlabeled(UnlabeledKind::Orphan) => true,
                Label::Unlabeled(UnlabeledKind::InCompleteBlossom) => base_edges[rg.orig[k].0],
                _ => result.e1[b].is_some_and(|x| x.mtype == ty) || base_edges[rg.orig[k].0],
            };
            if !ok {
                failures.push(format!("edge {} leaves the orphan {a} irregularly", rg.orig[k].0));
            }
        }
    }
    // (d)
    if bound.value != residual_size {
        failures.push(format!("bound {} differs from residual size {residual_size}", bound.value));
    }
    Ok(CertificateReport {
        ok: failures.is_empty(),
        bound: bound.value,
        residual_size,
        failures,
        certificate: Certificate {
            labeling,
            i,
            o,
            components: bound.components,
            bound: bound.value,
            residual_size,
        },
        residual: rg,
    })
}
