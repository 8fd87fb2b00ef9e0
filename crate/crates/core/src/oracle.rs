//! Brute-force ground truth for small instances.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::expand::{GTrail, TrailStep};
use crate::multigraph::{deficiencies, DegreeBounds, EdgeId, MType, Matching, Multigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_edges: usize,
    pub max_trail_len: usize,
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit {
            max_edges: 16,
            max_trail_len: 12,
        }
    }
}

fn refuse(what: &str, m: usize, limit: usize) -> Error {
    Error::OracleLimit(format!("{what} needs at most {limit} edges, got {m}"))
}

/// Maximum f-matching by enumerating edge subsets.
pub fn brute_max(g: &Multigraph, f: &DegreeBounds) -> Result<(usize, Matching)> {
    brute_max_with(g, f, OracleLimit::default())
}

pub fn brute_max_with(g: &Multigraph, f: &DegreeBounds, limit: OracleLimit) -> Result<(usize, Matching)> {
    f.check(g)?;
    if g.m() > limit.max_edges {
        return Err(refuse("brute_max", g.m(), limit.max_edges));
    }
    let m = g.m();
    let mut best = 0usize;
    let mut best_mask = 0u32;
    let mut deg = vec![0usize; g.n()];
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        deg.iter_mut().for_each(|d| *d = 0);
        let mut ok = true;
        for i in 0..m {
            if mask >> i & 1 == 1 {
                let (u, v) = g.edges()[i];
                deg[u] += 1;
                deg[v] += 1;
                if deg[u] > f.get(u) || deg[v] > f.get(v) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            best = size;
            best_mask = mask;
        }
    }
    let ids: Vec<EdgeId> = (0..m).filter(|i| best_mask >> i & 1 == 1).map(EdgeId).collect();
    Ok((best, Matching::from_edges(m, &ids)?))
}

/// Is there an alternating trail between free vertices, starting and ending
/// with unmatched edges, whose endpoints have room for it?
pub fn has_augmenting_trail(g: &Multigraph, f: &DegreeBounds, m: &Matching) -> Result<bool> {
    has_augmenting_trail_with(g, f, m, OracleLimit::default())
}

pub fn has_augmenting_trail_with(g: &Multigraph, f: &DegreeBounds, m: &Matching, limit: OracleLimit) -> Result<bool> {
    if g.m() > limit.max_edges {
        return Err(refuse("has_augmenting_trail", g.m(), limit.max_edges));
    }
    let def = deficiencies(g, f, m);
    let adj = g.adjacency();
    let mut used = vec![false; g.m()];
    for s in 0..g.n() {
        if def[s] == 0 {
            continue;
        }
        if augment_dfs(g, m, &adj, &def, s, s, MType::Unmatched, &mut used) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[allow(clippy::too_many_arguments)]
fn augment_dfs(
    g: &Multigraph,
    m: &Matching,
    adj: &[Vec<EdgeId>],
    def: &[usize],
    s: usize,
    x: usize,
    want: MType,
    used: &mut [bool],
) -> bool {
    for &e in &adj[x] {
        if used[e.0] || m.mtype(e) != want {
            continue;
        }
        let y = g.other(e, x);
        if want == MType::Unmatched && def[y] > 0 && (y != s || def[s] >= 2) {
            return true;
        }
        used[e.0] = true;
        let found = augment_dfs(g, m, adj, def, s, y, want.flip(), used);
        used[e.0] = false;
        if found {
            return true;
        }
    }
    false
}

/// Any nonempty alternating trail from `from` to `to` using only edges with
/// `allowed[e]`, whose first edge has M-type `start` and, if given, whose last
/// edge has M-type `end`.
pub fn brute_alternating_trail(
    g: &Multigraph,
    m: &Matching,
    allowed: &[bool],
    from: usize,
    to: usize,
    start: MType,
    end: Option<MType>,
) -> Option<Vec<TrailStep>> {
    let adj = g.adjacency();
    let mut used = vec![false; g.m()];
    let mut path = Vec::new();
    if trail_dfs(g, m, allowed, &adj, from, to, start, end, &mut used, &mut path) {
        Some(path)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn trail_dfs(
    g: &Multigraph,
    m: &Matching,
    allowed: &[bool],
    adj: &[Vec<EdgeId>],
    x: usize,
    to: usize,
    want: MType,
    end: Option<MType>,
    used: &mut [bool],
    path: &mut Vec<TrailStep>,
) -> bool {
    for &e in &adj[x] {
        if used[e.0] || !allowed[e.0] || m.mtype(e) != want {
            continue;
        }
        let y = g.other(e, x);
        used[e.0] = true;
        path.push(TrailStep { edge: e, from: x, to: y });
        if y == to && end.is_none_or(|t| t == want) {
            return true;
        }
        if trail_dfs(g, m, allowed, adj, y, to, want.flip(), end, used, path) {
            return true;
        }
        path.pop();
        used[e.0] = false;
    }
    false
}

/// Every nonempty trail whose consecutive edges alternate in M-type at each
/// interior vertex not marked `exempt`. Each trail is listed once per
/// direction.
pub fn all_alternating_trails(g: &Multigraph, m: &Matching, exempt: &[bool], limit: OracleLimit) -> Result<Vec<GTrail>> {
    if g.m() > limit.max_edges {
        return Err(refuse("all_alternating_trails", g.m(), limit.max_edges));
    }
    let adj = g.adjacency();
    let mut out = Vec::new();
    let mut used = vec![false; g.m()];
    let mut path = Vec::new();
    for s in 0..g.n() {
        enumerate(g, m, exempt, &adj, limit.max_trail_len, s, s, None, &mut used, &mut path, &mut out);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    g: &Multigraph,
    m: &Matching,
    exempt: &[bool],
    adj: &[Vec<EdgeId>],
    max_len: usize,
    start: usize,
    x: usize,
    want: Option<MType>,
    used: &mut [bool],
    path: &mut Vec<TrailStep>,
    out: &mut Vec<GTrail>,
) {
    if path.len() == max_len {
        return;
    }
    for &e in &adj[x] {
        if used[e.0] || want.is_some_and(|w| w != m.mtype(e)) {
            continue;
        }
        let y = g.other(e, x);
        used[e.0] = true;
        path.push(TrailStep { edge: e, from: x, to: y });
        out.push(GTrail { start, end: y, steps: path.clone() });
        let next = if exempt[y] { None } else { Some(m.mtype(e).flip()) };
        enumerate(g, m, exempt, adj, max_len, start, y, next, used, path, out);
        path.pop();
        used[e.0] = false;
    }
}

/// Maximum matching size of the simple graph underlying `g` (loops ignored,
/// parallel copies collapsed), by Edmonds' blossom algorithm.
pub fn edmonds_matching_size(g: &Multigraph) -> usize {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    const NIL: usize = usize::MAX;
    let mut mate = vec![NIL; n];
    let mut size = 0;
    for root in 0..n {
        if mate[root] != NIL {
            continue;
        }
        // BFS over alternating trees, contracting odd cycles through `base`
        let mut parent = vec![NIL; n];
        let mut base: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let mut q = VecDeque::new();
        used[root] = true;
        q.push_back(root);
        let mut end = NIL;
        'bfs: while let Some(v) = q.pop_front() {
            for &to in &adj[v] {
                if base[v] == base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NIL && parent[mate[to]] != NIL) {
                    let cur = lca(&mate, &base, &parent, v, to);
                    let mut in_blossom = vec![false; n];
                    mark_path(&mate, &base, &mut parent, &mut in_blossom, v, cur, to);
                    mark_path(&mate, &base, &mut parent, &mut in_blossom, to, cur, v);
                    for i in 0..n {
                        if in_blossom[base[i]] {
                            base[i] = cur;
                            if !used[i] {
                                used[i] = true;
                                q.push_back(i);
                            }
                        }
                    }
                } else if parent[to] == NIL {
                    parent[to] = v;
                    if mate[to] == NIL {
                        end = to;
                        break 'bfs;
                    }
                    used[mate[to]] = true;
                    q.push_back(mate[to]);
                }
            }
        }
        if end == NIL {
            continue;
        }
        let mut v = end;
        while v != NIL {
            let pv = parent[v];
            let ppv = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = ppv;
        }
        size += 1;
    }
    size
}

fn lca(mate: &[usize], base: &[usize], parent: &[usize], mut a: usize, mut b: usize) -> usize {
    let mut seen = vec![false; mate.len()];
    loop {
        a = base[a];
        seen[a] = true;
        if mate[a] == usize::MAX {
            break;
        }
        a = parent[mate[a]];
    }
    loop {
        b = base[b];
        if seen[b] {
            return b;
        }
        b = parent[mate[b]];
    }
}

fn mark_path(
    mate: &[usize],
    base: &[usize],
    parent: &mut [usize],
    in_blossom: &mut [bool],
    mut v: usize,
    b: usize,
    mut child: usize,
) {
    while base[v] != b {
        in_blossom[base[v]] = true;
        in_blossom[base[mate[v]]] = true;
        parent[v] = child;
        child = mate[v];
        v = parent[mate[v]];
    }
}
