//! Catalogs of connected graphs with bounded order and maximum degree, up to
//! isomorphism, and the `.repcat` file format.
//!
//! Generation is orderly: every graph on `m + 1` vertices is produced from
//! its canonical parent, the graph left after deleting its canonical
//! deletion vertex (the non-cut vertex of minimum degree with the largest
//! canonical position). A child produced from the wrong parent is rejected,
//! so the only duplicates left are siblings of one parent, removed locally.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6;
use crate::invariants::{profile, DegreeProfile};

/// Largest order the enumerator accepts.
pub const MAX_ORDER: usize = 12;

const FORMAT_VERSION: &str = "v1";

/// Number of connected graphs of maximum degree at most 3 on at most 10
/// vertices, as produced by [`enumerate_connected`]`(10, 3)`.
pub const D10_3_COUNT: usize = 2571;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    /// graph6 of the canonical labelling.
    pub g6: String,
    pub order: usize,
    pub graph: Graph,
    pub profile: Option<DegreeProfile>,
}

impl CatalogEntry {
    fn new(graph: Graph) -> Self {
        CatalogEntry { g6: graph6::encode(&graph), order: graph.order(), graph, profile: None }
    }

    pub fn profile(&self) -> Option<&DegreeProfile> {
        self.profile.as_ref()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub r: usize,
    pub d: usize,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_annotated(&self) -> bool {
        self.entries.iter().all(|e| e.profile.is_some())
    }

    pub fn find(&self, g: &Graph) -> Option<usize> {
        let key = graph6::encode(&canonical_form(g).ok()?.graph);
        self.entries.iter().position(|e| e.g6 == key)
    }

    /// Entries of order at most `r`, as a catalog of its own.
    pub fn truncated(&self, r: usize) -> Catalog {
        Catalog {
            r: r.min(self.r),
            d: self.d,
            entries: self.entries.iter().filter(|e| e.order <= r).cloned().collect(),
        }
    }
}

fn check_envelope(r: usize, d: usize) -> Result<()> {
    if r == 0 || r > MAX_ORDER {
        return Err(Error::Envelope(format!("max order {r} not in 1..={MAX_ORDER}")));
    }
    if d > r - 1 && r > 1 {
        return Err(Error::Envelope(format!("max degree {d} exceeds max order - 1 = {}", r - 1)));
    }
    Ok(())
}

/// Incremental generator; each call to [`Enumerator::next_level`] produces
/// all connected graphs of the next order.
pub struct Enumerator {
    d: usize,
    levels: Vec<Vec<Graph>>,
}

impl Enumerator {
    pub fn new(d: usize) -> Self {
        Enumerator { d, levels: vec![vec![Graph::empty(1)]] }
    }

    pub fn max_order(&self) -> usize {
        self.levels.len()
    }

    /// Graphs of the given order, canonical and sorted by graph6.
    pub fn level(&self, order: usize) -> &[Graph] {
        &self.levels[order - 1]
    }

    pub fn next_level(&mut self) -> &[Graph] {
        let d = self.d;
        let parents = self.levels.last().expect("level 1 always present");
        let mut next: Vec<(String, Graph)> = parents
            .par_iter()
            .flat_map_iter(|p| children(p, d))
            .map(|g| (graph6::encode(&g), g))
            .collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        debug_assert!(next.windows(2).all(|w| w[0].0 != w[1].0), "orderly generation produced a duplicate");
        self.levels.push(next.into_iter().map(|(_, g)| g).collect());
        self.levels.last().unwrap()
    }

    pub fn catalog(&self, r: usize) -> Catalog {
        let entries = self.levels[..r.min(self.levels.len())]
            .iter()
            .flat_map(|lvl| lvl.iter().cloned().map(CatalogEntry::new))
            .collect();
        Catalog { r, d: self.d, entries }
    }
}

/// Canonical children of a canonical parent `p`.
fn children(p: &Graph, d: usize) -> Vec<Graph> {
    let m = p.order();
    let eligible: Vec<usize> = (0..m).filter(|&v| p.degree(v) < d).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for size in 1..=d.min(eligible.len()) {
        for_each_combination(&eligible, size, &mut |nbhd| {
            let mut child = Graph::empty(m + 1);
            for (u, v) in p.edges() {
                child.add_edge(u, v);
            }
            for &u in nbhd {
                child.add_edge(u, m);
            }
            if let Some(canon) = accept(&child, m, p) {
                let key = graph6::encode(&canon);
                if seen.insert(key) {
                    out.push(canon);
                }
            }
        });
    }
    out
}

/// Canonical-deletion test for `child` obtained by appending vertex `new`
/// to `parent`. Returns the child's canonical graph when accepted.
fn accept(child: &Graph, new: usize, parent: &Graph) -> Option<Graph> {
    let noncut = non_cut_vertices(child);
    let min_deg = noncut.iter().map(|&v| child.degree(v)).min()?;
    if child.degree(new) != min_deg {
        return None;
    }
    let cf = canonical_form(child).expect("enumeration orders are within the canonical limit");
    let w = noncut
        .iter()
        .copied()
        .filter(|&v| child.degree(v) == min_deg)
        .max_by_key(|&v| cf.labeling[v])?;
    if w == new {
        return Some(cf.graph);
    }
    let rest: crate::graph::VertexSet = (0..child.order()).filter(|&v| v != w).collect();
    let reduced = child.induced(&rest).ok()?;
    let reduced = canonical_form(&reduced).ok()?.graph;
    (reduced == *parent).then_some(cf.graph)
}

/// Vertices whose removal leaves the graph connected.
fn non_cut_vertices(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let rows: Vec<u64> = (0..n).map(|v| g.row_mask(v)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..n)
        .filter(|&x| {
            let alive = all & !(1 << x);
            if alive == 0 {
                return true;
            }
            let mut reach = 1u64 << alive.trailing_zeros();
            loop {
                let mut grown = reach;
                let mut m = reach;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    m &= m - 1;
                    grown |= rows[v] & alive;
                }
                if grown == reach {
                    break;
                }
                reach = grown;
            }
            reach == alive
        })
        .collect()
}

fn for_each_combination(items: &[usize], size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, size, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut Vec::with_capacity(size), f);
}

/// All connected graphs with at most `r` vertices and maximum degree at most
/// `d`, one per isomorphism class, sorted by (order, canonical graph6).
pub fn enumerate_connected(r: usize, d: usize) -> Result<Catalog> {
    check_envelope(r, d)?;
    let mut en = Enumerator::new(d);
    while en.max_order() < r {
        en.next_level();
    }
    Ok(en.catalog(r))
}

/// Fill every entry's profile with `dmax = d`.
pub fn annotate(catalog: Catalog) -> Result<Catalog> {
    let d = catalog.d;
    let entries = catalog
        .entries
        .into_par_iter()
        .map(|mut e| {
            if e.profile.is_none() {
                e.profile = Some(profile(&e.graph, d)?);
            }
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Catalog { entries, ..catalog })
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Serialise to the `.repcat` text format.
pub fn to_text(catalog: &Catalog) -> Result<String> {
    let mut body = String::new();
    for (i, e) in catalog.entries.iter().enumerate() {
        let p = e.profile.as_ref().ok_or(Error::Unannotated(i))?;
        writeln!(body, "{} c={} r={}", e.g6, join(&p.c), join(&p.r)).unwrap();
    }
    let sha = hex::encode(Sha256::digest(body.as_bytes()));
    Ok(format!(
        "#repcat {FORMAT_VERSION} r={} d={} count={} sha={sha}\n{body}",
        catalog.r,
        catalog.d,
        catalog.entries.len()
    ))
}

fn header_field<'a>(line: &'a str, token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::CatalogFormat { line: 1, msg: format!("missing {key}= in header {line:?}") })
}

fn parse_num(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::CatalogFormat { line, msg: format!("bad number {s:?}") })
}

fn parse_vec(tok: Option<&str>, key: &str, len: usize, line: usize) -> Result<Vec<u32>> {
    let body = tok
        .and_then(|t| t.strip_prefix(key))
        .ok_or_else(|| Error::CatalogFormat { line, msg: format!("expected {key}") })?;
    let v = body
        .split(',')
        .map(|x| x.parse::<u32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::CatalogFormat { line, msg: format!("bad vector {body:?}") })?;
    if v.len() != len {
        return Err(Error::CatalogFormat { line, msg: format!("{key} has {} entries, expected {len}", v.len()) });
    }
    Ok(v)
}

/// Parse and re-verify a `.repcat` file: checksum, count, canonical form,
/// connectivity, degree bound, order bound and sort order of every entry.
pub fn from_text(text: &str) -> Result<Catalog> {
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| Error::CatalogFormat { line: 1, msg: "missing header".into() })?;
    let mut toks = header.split(' ');
    if toks.next() != Some("#repcat") {
        return Err(Error::CatalogFormat { line: 1, msg: format!("not a repcat header: {header:?}") });
    }
    match toks.next() {
        Some(FORMAT_VERSION) => {}
        other => return Err(Error::CatalogVersion(format!("expected {FORMAT_VERSION}, found {other:?}"))),
    }
    let r = parse_num(header_field(header, toks.next(), "r")?, 1)?;
    let d = parse_num(header_field(header, toks.next(), "d")?, 1)?;
    let count = parse_num(header_field(header, toks.next(), "count")?, 1)?;
    let sha = header_field(header, toks.next(), "sha")?;
    if toks.next().is_some() {
        return Err(Error::CatalogFormat { line: 1, msg: "trailing header fields".into() });
    }
    let found = hex::encode(Sha256::digest(body.as_bytes()));
    if found != sha {
        return Err(Error::CatalogChecksum { expected: sha.to_string(), found });
    }

    let mut entries = Vec::with_capacity(count);
    let mut keys = HashSet::new();
    for (i, line) in body.lines().enumerate() {
        let lineno = i + 2;
        let bad = |msg: String| Error::CatalogFormat { line: lineno, msg };
        let mut toks = line.split(' ');
        let g6 = toks.next().unwrap_or_default();
        let graph = graph6::decode(g6).map_err(|e| bad(e.to_string()))?;
        let c = parse_vec(toks.next(), "c=", d + 1, lineno)?;
        let rv = parse_vec(toks.next(), "r=", d + 1, lineno)?;
        if toks.next().is_some() {
            return Err(bad("trailing fields".into()));
        }
        if graph.order() == 0 || graph.order() > r {
            return Err(bad(format!("order {} outside 1..={r}", graph.order())));
        }
        if !graph.is_connected() {
            return Err(bad("graph is not connected".into()));
        }
        if graph.max_degree() > d {
            return Err(bad(format!("maximum degree {} exceeds {d}", graph.max_degree())));
        }
        let canon = canonical_form(&graph).map_err(|e| bad(e.to_string()))?;
        if canon.graph != graph {
            return Err(bad("graph6 is not the canonical labelling".into()));
        }
        if !keys.insert(g6.to_string()) {
            return Err(bad("duplicate isomorphism class".into()));
        }
        let entry = CatalogEntry {
            g6: g6.to_string(),
            order: graph.order(),
            graph,
            profile: Some(DegreeProfile { dmax: d, r: rv, c }),
        };
        if let Some(prev) = entries.last() {
            let prev: &CatalogEntry = prev;
            if (prev.order, &prev.g6) >= (entry.order, &entry.g6) {
                return Err(bad("entries out of order".into()));
            }
        }
        entries.push(entry);
    }
    if entries.len() != count {
        return Err(Error::CatalogFormat {
            line: 1,
            msg: format!("header count {count} but {} entries", entries.len()),
        });
    }
    Ok(Catalog { r, d, entries })
}

pub fn write_catalog(path: &Path, catalog: &Catalog) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, to_text(catalog)?)?;
    Ok(())
}

pub fn read_catalog(path: &Path) -> Result<Catalog> {
    from_text(&std::fs::read_to_string(path)?)
}
