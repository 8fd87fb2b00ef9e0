//! Text formats: instances, certificates, blossom lists; and seeded instance
//! generation.
//!
//! Instance files look like
//!
//! ```text
//! c comment
//! p ftrails 3 2
//! f 1 2
//! e 1 2
//! e 2 3
//! m 0
//! ```
//!
//! Vertices are 1-based in files. Edge indices (in `m` lines and in all
//! output) count `e` lines from 0. Unlisted bounds default to 1.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::multigraph::{require_valid, DegreeBounds, EdgeId, Matching, Multigraph};
use crate::substitute::{BlossomSpec, SubstituteKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Multigraph,
    pub f: DegreeBounds,
    pub matching: Matching,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let t = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    t.parse().map_err(|_| perr(line, format!("bad {what} `{t}`")))
}

fn vertex(tok: Option<&str>, line: usize, n: usize) -> Result<usize> {
    let v = num(tok, line, "vertex")?;
    if v == 0 || v > n {
        return Err(perr(line, format!("vertex {v} outside 1..{n}")));
    }
    Ok(v - 1)
}

fn no_more<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(perr(line, format!("unexpected `{t}`"))),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut bounds: Vec<Option<usize>> = Vec::new();
    let mut edges = Vec::new();
    let mut matched = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        if kind == "c" {
            continue;
        }
        let Some((n, m)) = header else {
            if kind != "p" || toks.next() != Some("ftrails") {
                return Err(perr(line, "expected header `p ftrails <n> <m>`"));
            }
            let n = num(toks.next(), line, "vertex count")?;
            let m = num(toks.next(), line, "edge count")?;
            no_more(toks, line)?;
            header = Some((n, m));
            bounds = vec![None; n];
            continue;
        };
        match kind {
            "f" => {
                let v = vertex(toks.next(), line, n)?;
                let b = num(toks.next(), line, "bound")?;
                no_more(toks, line)?;
                if bounds[v].replace(b).is_some() {
                    return Err(perr(line, format!("second bound for vertex {}", v + 1)));
                }
            }
            "e" => {
                let u = vertex(toks.next(), line, n)?;
                let v = vertex(toks.next(), line, n)?;
                no_more(toks, line)?;
                if edges.len() == m {
                    return Err(perr(line, format!("more than {m} edges")));
                }
                edges.push((u, v));
            }
            "m" => {
                let k = num(toks.next(), line, "edge index")?;
                no_more(toks, line)?;
                if k >= m {
                    return Err(perr(line, format!("edge index {k} outside 0..{m}")));
                }
                matched.push((line, EdgeId(k)));
            }
            "p" => return Err(perr(line, "second header")),
            other => return Err(perr(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| perr(0, "missing header"))?;
    if edges.len() != m {
        return Err(perr(0, format!("header promises {m} edges, found {}", edges.len())));
    }
    let graph = Multigraph::from_edges(n, &edges)?;
    let f = DegreeBounds::new(bounds.into_iter().map(|b| b.unwrap_or(1)).collect());
    let mut matching = Matching::empty(m);
    for (line, e) in matched {
        if matching.contains(e) {
            return Err(perr(line, format!("edge {} matched twice", e.0)));
        }
        matching.insert(e);
    }
    require_valid(&graph, &f, &matching)?;
    Ok(Instance { graph, f, matching })
}

/// Canonical form: header, every bound, edges, matched edges ascending.
pub fn emit_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut s = String::new();
    let _ = writeln!(s, "p ftrails {} {}", g.n(), g.m());
    for v in 0..g.n() {
        let _ = writeln!(s, "f {} {}", v + 1, inst.f.get(v));
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "e {} {}", u + 1, v + 1);
    }
    for e in inst.matching.edges() {
        let _ = writeln!(s, "m {}", e.0);
    }
    s
}

fn join1(vs: &[usize]) -> String {
    vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

pub fn emit_certificate(c: &Certificate) -> String {
    let mut lines = vec![format!("I {}", join1(&c.i)), format!("O {}", join1(&c.o))];
    for (k, comp) in c.components.iter().enumerate() {
        lines.push(format!("C {k}: {}", join1(comp)));
    }
    lines.push(format!("bound {}", c.bound));
    lines.push(format!("residual {}", c.residual_size));
    lines.iter().map(|l| l.trim_end().to_string() + "\n").collect()
}

/// Reads the `I` and `O` lines of a certificate; other lines are ignored.
pub fn parse_certificate(text: &str, n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut i = Vec::new();
    let mut o = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let mut toks = raw.split_whitespace();
        let target = match toks.next() {
            Some("I") => &mut i,
            Some("O") => &mut o,
            Some("C") | Some("bound") | Some("residual") | Some("c") | None => continue,
            Some(other) => return Err(perr(line, format!("unknown certificate line `{other}`"))),
        };
        for t in toks {
            target.push(vertex(Some(t), line, n)?);
        }
    }
    Ok((i, o))
}

/// Lines `B light|heavy <base> <eta-edge or -> v1 v2 ...`.
pub fn parse_blossoms(text: &str, n: usize, m: usize) -> Result<Vec<BlossomSpec>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("B") => {}
            Some(other) => return Err(perr(line, format!("unknown line type `{other}`"))),
        }
        let kind = match toks.next() {
            Some("light") => SubstituteKind::Light,
            Some("heavy") => SubstituteKind::Heavy,
            other => return Err(perr(line, format!("bad blossom kind {other:?}"))),
        };
        let base = vertex(toks.next(), line, n)?;
        let eta = match toks.next() {
            Some("-") => None,
            tok => {
                let e = num(tok, line, "base edge")?;
                if e >= m {
                    return Err(perr(line, format!("edge index {e} outside 0..{m}")));
                }
                Some(EdgeId(e))
            }
        };
        let vertices = toks.map(|t| vertex(Some(t), line, n)).collect::<Result<Vec<_>>>()?;
        out.push(BlossomSpec { vertices, base, eta, kind });
    }
    Ok(out)
}

/// Uniform random multigraph: endpoints drawn independently (so loops and
/// parallel copies occur), bounds uniform in 1..=fmax, empty matching.
pub fn random_instance(n: usize, m: usize, fmax: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance_rng(n, m, fmax, &mut rng)
}

pub fn random_instance_rng<R: Rng>(n: usize, m: usize, fmax: usize, rng: &mut R) -> Result<Instance> {
    if n == 0 && m > 0 {
        return Err(Error::Input("edges need at least one vertex".into()));
    }
    if fmax == 0 {
        return Err(Error::Input("fmax must be positive".into()));
    }
    let f = DegreeBounds::new((0..n).map(|_| rng.gen_range(1..=fmax)).collect());
    let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    let graph = Multigraph::from_edges(n, &edges)?;
    Ok(Instance {
        graph,
        f,
        matching: Matching::empty(m),
    })
}

/// A valid matching grown by adding each edge, in random order, with
/// probability `p` when it fits.
pub fn random_matching<R: Rng>(g: &Multigraph, f: &DegreeBounds, p: f64, rng: &mut R) -> Matching {
    let mut order: Vec<usize> = (0..g.m()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut room: Vec<usize> = f.as_slice().to_vec();
    let mut m = Matching::empty(g.m());
    for e in order {
        let (u, v) = g.endpoints(EdgeId(e));
        let fits = if u == v { room[u] >= 2 } else { room[u] >= 1 && room[v] >= 1 };
        if fits && rng.gen_bool(p) {
            room[u] -= 1;
            room[v] -= 1;
            m.insert(EdgeId(e));
        }
    }
    m
}
