//! Constructive versions of the upper-bound arguments.
//!
//! Each producer takes a graph above a size threshold and returns a vertex
//! subset whose induced subgraph witnesses the bound. Nothing a producer
//! returns is trusted: [`check_certificate`] recomputes it from the graph.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::invariants::Mode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub subset: VertexSet,
    pub degree: usize,
    pub count: usize,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub a1: VertexSet,
    pub a2: VertexSet,
    pub d1: usize,
    pub d2: usize,
    /// Local-search moves performed.
    pub moves: u64,
    /// Potential of the starting partition; bounds `moves`.
    pub initial_potential: u64,
}

/// The producer could not reach its guarantee. This is not a disproof.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("infeasible: {reason}")]
pub struct Infeasible {
    pub reason: String,
    pub best_effort: Option<Certificate>,
}

impl Infeasible {
    fn new(reason: impl Into<String>) -> Self {
        Infeasible { reason: reason.into(), best_effort: None }
    }
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Error)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CheckFailure {
    #[error("subset mentions vertex {vertex} outside the graph")]
    OutOfRange { vertex: usize },
    #[error("{found} vertices of degree {degree}, certificate claims {claimed}")]
    CountTooLow { degree: usize, claimed: usize, found: usize },
    #[error("degree {degree} is not the maximum degree {actual} of the induced subgraph")]
    NotMaxDegree { degree: usize, actual: usize },
    #[error("induced subgraph is not {degree}-regular")]
    NotRegular { degree: usize },
    #[error("parts overlap")]
    Overlap,
    #[error("parts do not cover every vertex")]
    NotCovering,
    #[error("part {part} has maximum degree {found} above its cap {cap}")]
    CapExceeded { part: u8, found: usize, cap: usize },
}

pub fn check_certificate(g: &Graph, cert: &Certificate) -> Result<(), CheckFailure> {
    if cert.subset.bound() > g.order() {
        return Err(CheckFailure::OutOfRange { vertex: cert.subset.bound() - 1 });
    }
    let h = g.induced(&cert.subset).expect("range checked");
    let seq = h.degree_sequence();
    let found = seq.counts.get(&cert.degree).copied().unwrap_or(0);
    match cert.mode {
        Mode::Rep => {}
        Mode::MaxRep => {
            if h.order() > 0 && h.max_degree() != cert.degree {
                return Err(CheckFailure::NotMaxDegree { degree: cert.degree, actual: h.max_degree() });
            }
        }
        Mode::Regular => {
            if found != h.order() {
                return Err(CheckFailure::NotRegular { degree: cert.degree });
            }
        }
    }
    if found < cert.count {
        return Err(CheckFailure::CountTooLow { degree: cert.degree, claimed: cert.count, found });
    }
    Ok(())
}

pub fn check_partition(g: &Graph, cert: &PartitionCertificate) -> Result<(), CheckFailure> {
    for part in [&cert.a1, &cert.a2] {
        if part.bound() > g.order() {
            return Err(CheckFailure::OutOfRange { vertex: part.bound() - 1 });
        }
    }
    if !cert.a1.is_disjoint(&cert.a2) {
        return Err(CheckFailure::Overlap);
    }
    if cert.a1.len() + cert.a2.len() != g.order() {
        return Err(CheckFailure::NotCovering);
    }
    for (part, set, cap) in [(1u8, &cert.a1, cert.d1), (2, &cert.a2, cert.d2)] {
        let found = g.induced(set).expect("range checked").max_degree();
        if found > cap {
            return Err(CheckFailure::CapExceeded { part, found, cap });
        }
    }
    Ok(())
}

/// Induced subgraph under vertex deletion, with degree buckets so the
/// lowest-indexed vertex of a given degree is found quickly.
struct Peel {
    nbrs: Vec<Vec<usize>>,
    alive: Vec<bool>,
    deg: Vec<usize>,
    buckets: Vec<BTreeSet<usize>>,
    size: usize,
}

impl Peel {
    fn new(g: &Graph) -> Self {
        let nbrs = g.adjacency_lists();
        let deg: Vec<usize> = nbrs.iter().map(Vec::len).collect();
        let mut buckets = vec![BTreeSet::new(); g.max_degree() + 1];
        for (v, &d) in deg.iter().enumerate() {
            buckets[d].insert(v);
        }
        Peel { alive: vec![true; g.order()], size: g.order(), nbrs, deg, buckets }
    }

    fn remove(&mut self, v: usize) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        self.size -= 1;
        self.buckets[self.deg[v]].remove(&v);
        for i in 0..self.nbrs[v].len() {
            let u = self.nbrs[v][i];
            if self.alive[u] {
                self.buckets[self.deg[u]].remove(&u);
                self.deg[u] -= 1;
                self.buckets[self.deg[u]].insert(u);
            }
        }
    }

    fn max_degree(&self) -> usize {
        self.buckets.iter().rposition(|b| !b.is_empty()).unwrap_or(0)
    }

    fn count(&self, p: usize) -> usize {
        self.buckets.get(p).map_or(0, BTreeSet::len)
    }

    fn alive_set(&self) -> VertexSet {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }

    fn whole(&self, degree: usize, mode: Mode) -> Certificate {
        Certificate { subset: self.alive_set(), degree, count: self.count(degree), mode }
    }

    /// The largest degree class of the current graph.
    fn best_class(&self) -> (usize, usize) {
        (0..self.buckets.len())
            .map(|p| (self.count(p), p))
            .max_by_key(|&(c, p)| (c, std::cmp::Reverse(p)))
            .map(|(c, p)| (p, c))
            .unwrap_or((0, 0))
    }

    /// Remove the lowest-indexed vertex of degree `q` until none is left.
    fn peel_degree(&mut self, q: usize) {
        while let Some(&v) = self.buckets.get(q).and_then(|b| b.first()) {
            self.remove(v);
        }
    }

    /// For maximum degree at most 1: (edge endpoints, independent set taking
    /// isolated vertices and the lower endpoint of every edge).
    fn matching_split(&self) -> (VertexSet, VertexSet) {
        debug_assert!(self.max_degree() <= 1);
        let mut matched = VertexSet::new();
        let mut indep = VertexSet::new();
        for v in (0..self.alive.len()).filter(|&v| self.alive[v]) {
            if self.deg[v] == 0 {
                indep.insert(v);
            } else {
                matched.insert(v);
                let u = self.nbrs[v].iter().copied().find(|&u| self.alive[u]).unwrap();
                if v < u {
                    indep.insert(v);
                }
            }
        }
        (matched, indep)
    }
}

/// `2n > (k-1)(d+2)`, i.e. `n > (k-1)(d/2+1)`.
fn above_maxrep_threshold(n: usize, k: usize, d: usize) -> bool {
    2 * n > (k - 1) * (d + 2)
}

/// `n > (k-1)(2d+6)/5` for `d >= 2`, `n > 1.5(k-1)` below.
fn above_rep_threshold(n: usize, k: usize, d: usize) -> bool {
    if d >= 2 {
        5 * n > (k - 1) * (2 * d + 6)
    } else {
        2 * n > 3 * (k - 1)
    }
}

fn check_k(k: usize) -> Result<(), Infeasible> {
    if k == 0 {
        return Err(Infeasible::new("k must be at least 1"));
    }
    Ok(())
}

/// An induced subgraph with at least `k` vertices of maximum degree, for
/// `n > (k-1)(d/2+1)` where `d` is the maximum degree of `g`.
pub fn certify_maxrep(g: &Graph, k: usize) -> Result<Certificate, Infeasible> {
    check_k(k)?;
    let d = g.max_degree();
    let mut peel = Peel::new(g);
    if !above_maxrep_threshold(g.order(), k, d) {
        return Err(Infeasible {
            reason: format!("n = {} is not above (k-1)(d/2+1) for k = {k}, d = {d}", g.order()),
            best_effort: maxrep_stages(&mut peel, k).ok(),
        });
    }
    maxrep_stages(&mut peel, k)
}

fn maxrep_stages(peel: &mut Peel, k: usize) -> Result<Certificate, Infeasible> {
    let d = peel.max_degree();
    if peel.count(d) >= k {
        return Ok(peel.whole(d, Mode::MaxRep));
    }
    for q in (2..=d).rev() {
        if peel.max_degree() == q && peel.count(q) >= k {
            return Ok(peel.whole(q, Mode::MaxRep));
        }
        peel.peel_degree(q);
        if above_maxrep_threshold(peel.size, k, q - 1) {
            return maxrep_stages(peel, k);
        }
    }
    let (matched, indep) = peel.matching_split();
    if indep.len() >= k {
        let count = indep.len();
        return Ok(Certificate { subset: indep, degree: 0, count, mode: Mode::MaxRep });
    }
    if matched.len() >= k {
        let count = matched.len();
        return Ok(Certificate { subset: matched, degree: 1, count, mode: Mode::MaxRep });
    }
    Err(Infeasible::new(format!("peeling ended with {} independent vertices", indep.len())))
}

/// An induced subgraph with at least `k` vertices of one degree, for
/// `n > (k-1)(2d+6)/5` (`d >= 2`) or `n > 1.5(k-1)` (`d <= 1`).
pub fn certify_rep(g: &Graph, k: usize) -> Result<Certificate, Infeasible> {
    check_k(k)?;
    let d = g.max_degree();
    let mut peel = Peel::new(g);
    if !above_rep_threshold(g.order(), k, d) {
        return Err(Infeasible {
            reason: format!("n = {} is not above the repetition threshold for k = {k}, d = {d}", g.order()),
            best_effort: rep_stages(&mut peel, k).ok(),
        });
    }
    rep_stages(&mut peel, k)
}

fn rep_stages(peel: &mut Peel, k: usize) -> Result<Certificate, Infeasible> {
    let (p, c) = peel.best_class();
    if c >= k {
        return Ok(peel.whole(p, Mode::Rep));
    }
    let d = peel.max_degree();
    for q in (2..=d).rev() {
        let (p, c) = peel.best_class();
        if c >= k {
            return Ok(peel.whole(p, Mode::Rep));
        }
        peel.peel_degree(q);
        if above_rep_threshold(peel.size, k, q - 1) {
            return rep_stages(peel, k);
        }
    }
    let (matched, indep) = peel.matching_split();
    if matched.len() >= k {
        let count = matched.len();
        return Ok(Certificate { subset: matched, degree: 1, count, mode: Mode::Rep });
    }
    if indep.len() >= k {
        let count = indep.len();
        return Ok(Certificate { subset: indep, degree: 0, count, mode: Mode::Rep });
    }
    Err(Infeasible::new(format!("peeling ended with {} independent vertices", indep.len())))
}

/// Vertices of one path or cycle component in walking order.
fn walk(g: &Graph, comp: &VertexSet, cycle: bool) -> Vec<usize> {
    let start = if cycle {
        comp.iter().next().unwrap()
    } else {
        comp.iter().find(|&v| g.degree(v) <= 1).unwrap()
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = g.neighbours(cur).iter().find(|&u| u != prev && u != start);
        match next {
            Some(u) if order.len() < comp.len() => {
                order.push(u);
                prev = cur;
                cur = u;
            }
            _ => break,
        }
    }
    order
}

/// A regular induced subgraph on at least `k` vertices of a graph with
/// maximum degree at most 2 and `n > 11(k-1)/5`.
pub fn regular_in_deg2(g: &Graph, k: usize) -> Result<Certificate, Infeasible> {
    check_k(k)?;
    if g.max_degree() > 2 {
        return Err(Infeasible::new(format!("maximum degree {} exceeds 2", g.max_degree())));
    }
    let n = g.order();
    if 5 * n <= 11 * (k - 1) {
        return Err(Infeasible {
            reason: format!("n = {n} is not above 11(k-1)/5 for k = {k}"),
            best_effort: Some(deg2_aggregate(g, k)).filter(|c| c.count >= k),
        });
    }
    let cert = deg2_aggregate(g, k);
    if cert.count >= k {
        Ok(cert)
    } else {
        Err(Infeasible { reason: format!("best regular aggregate {} < k", cert.count), best_effort: None })
    }
}

/// All cycles if they hold at least `k` vertices, otherwise the larger of
/// the closed-form independent set and induced matching.
fn deg2_aggregate(g: &Graph, k: usize) -> Certificate {
    let n = g.order();
    let comps = g.connected_components();
    let is_cycle = |c: &VertexSet| c.len() >= 3 && c.iter().all(|v| g.degree(v) == 2);
    let cycles: VertexSet = comps.iter().filter(|c| is_cycle(c)).fold(VertexSet::new(), |s, c| s.union(c));
    let t = cycles.len();
    if t >= k {
        return Certificate { subset: cycles, degree: 2, count: t, mode: Mode::Regular };
    }

    let mut indep = VertexSet::new();
    let mut matching = VertexSet::new();
    for comp in &comps {
        let cyc = is_cycle(comp);
        let order = walk(g, comp, cyc);
        let m = order.len();
        // independent: every other vertex; a cycle loses the last one if odd
        let indep_count = if cyc { m / 2 } else { m.div_ceil(2) };
        for i in 0..indep_count {
            indep.insert(order[2 * i]);
        }
        // induced matching: edges (3i, 3i+1)
        let edges = if cyc { m / 3 } else { (m + 1) / 3 };
        for i in 0..edges {
            matching.insert(order[3 * i]);
            matching.insert(order[3 * i + 1]);
        }
    }
    let (s0, s1) = (indep.len(), matching.len());
    assert!(5 * (s0 + s1) >= 5 * (n - t) + 4 * t, "aggregate bound s0 + s1 >= n - t + 4t/5 violated");
    if s0 >= s1 {
        Certificate { subset: indep, degree: 0, count: s0, mode: Mode::Regular }
    } else {
        Certificate { subset: matching, degree: 1, count: s1, mode: Mode::Regular }
    }
}

fn potential(g: &Graph, side: &[bool], d1: usize, d2: usize) -> u64 {
    let (mut e1, mut e2) = (0u64, 0u64);
    for (u, v) in g.edges() {
        match (side[u], side[v]) {
            (false, false) => e1 += 1,
            (true, true) => e2 += 1,
            _ => {}
        }
    }
    (d2 as u64 + 1) * e1 + (d1 as u64 + 1) * e2
}

/// Split the vertices into `A1`, `A2` with `Δ(G[A1]) <= d1`, `Δ(G[A2]) <= d2`,
/// for graphs of maximum degree at most `d1 + d2 + 1`.
///
/// Local search on `Φ = (d2+1) e(A1) + (d1+1) e(A2)`: moving a vertex that
/// breaks its side's cap lowers `Φ` by at least one, so at most `Φ₀` moves happen.
pub fn lovasz_partition(g: &Graph, d1: usize, d2: usize) -> Result<PartitionCertificate, Infeasible> {
    if g.max_degree() > d1 + d2 + 1 {
        return Err(Infeasible::new(format!(
            "maximum degree {} exceeds d1 + d2 + 1 = {}",
            g.max_degree(),
            d1 + d2 + 1
        )));
    }
    let n = g.order();
    let nbrs = g.adjacency_lists();
    // side[v] == false: A1, true: A2
    let mut side = vec![false; n];
    let mut assigned = vec![false; n];
    for v in 0..n {
        let (mut a, mut b) = (0, 0);
        for &u in &nbrs[v] {
            if assigned[u] {
                if side[u] { b += 1 } else { a += 1 }
            }
        }
        side[v] = (d2 + 1) * a > (d1 + 1) * b;
        assigned[v] = true;
    }
    let initial_potential = potential(g, &side, d1, d2);
    // same-side degrees
    let mut inside: Vec<usize> =
        (0..n).map(|v| nbrs[v].iter().filter(|&&u| side[u] == side[v]).count()).collect();
    let cap = |s: bool| if s { d2 } else { d1 };
    let mut moves = 0u64;
    let mut phi = initial_potential;
    let mut next = 0;
    while let Some(v) = (next..n).chain(0..next).find(|&v| inside[v] > cap(side[v])) {
        let before = inside[v];
        side[v] = !side[v];
        for &u in &nbrs[v] {
            if side[u] == side[v] {
                inside[u] += 1;
            } else {
                inside[u] -= 1;
            }
        }
        inside[v] = nbrs[v].len() - before;
        moves += 1;
        let new_phi = potential_delta(phi, before, inside[v], !side[v], d1, d2);
        debug_assert!(new_phi < phi);
        phi = new_phi;
        next = 0;
    }
    debug_assert_eq!(phi, potential(g, &side, d1, d2));
    let a1 = (0..n).filter(|&v| !side[v]).collect();
    let a2 = (0..n).filter(|&v| side[v]).collect();
    Ok(PartitionCertificate { a1, a2, d1, d2, moves, initial_potential })
}

/// Potential after moving a vertex that had `before` neighbours on its old
/// side (`from_a2` tells which) and now has `after` on the new one.
fn potential_delta(phi: u64, before: usize, after: usize, from_a2: bool, d1: usize, d2: usize) -> u64 {
    let (w_old, w_new) = if from_a2 { (d1 + 1, d2 + 1) } else { (d2 + 1, d1 + 1) };
    phi + (w_new * after) as u64 - (w_old * before) as u64
}

fn regular_threshold_exponent(d: usize) -> u32 {
    let mut r = 0;
    while d > 3 * (1usize << r) - 1 {
        r += 1;
    }
    r
}

/// `5n > 11(k-1) 2^r` with `r` the least integer such that `d <= 3·2^r - 1`.
fn above_regular_threshold(n: usize, k: usize, d: usize) -> bool {
    5 * n > 11 * (k - 1) * (1usize << regular_threshold_exponent(d))
}

/// A regular induced subgraph on at least `k` vertices, via repeated
/// Lovász partitions down to maximum degree 2.
pub fn certify_regular_general(g: &Graph, k: usize) -> Result<Certificate, Infeasible> {
    check_k(k)?;
    let d = g.max_degree();
    if d <= 2 {
        return regular_in_deg2(g, k);
    }
    if !above_regular_threshold(g.order(), k, d) {
        return Err(Infeasible {
            reason: format!(
                "n = {} is not above (11/5)(k-1)2^{} for d = {d}",
                g.order(),
                regular_threshold_exponent(d)
            ),
            best_effort: regular_descent(g, k, false).ok(),
        });
    }
    regular_descent(g, k, true)
}

/// Partition down to maximum degree 2. With `strict`, only a part above its
/// threshold is entered; otherwise the larger part is.
fn regular_descent(g: &Graph, k: usize, strict: bool) -> Result<Certificate, Infeasible> {
    let mut current = VertexSet::full(g.order());
    loop {
        let h = g.induced(&current).expect("subset of g");
        let dh = h.max_degree();
        if dh <= 2 {
            let cert = if strict { regular_in_deg2(&h, k)? } else { deg2_aggregate(&h, k) };
            if cert.count < k {
                return Err(Infeasible::new(format!("best regular aggregate {} < k", cert.count)));
            }
            let verts = current.to_vec();
            let subset = cert.subset.iter().map(|i| verts[i]).collect();
            return Ok(Certificate { subset, ..cert });
        }
        let part = lovasz_partition(&h, (dh - 1) / 2, dh / 2)?;
        let verts = current.to_vec();
        let lift = |s: &VertexSet| s.iter().map(|i| verts[i]).collect::<VertexSet>();
        let pick = if strict {
            [&part.a1, &part.a2].into_iter().find(|s| {
                let sub = h.induced(s).expect("subset of h");
                above_regular_threshold(s.len(), k, sub.max_degree())
            })
        } else {
            Some(if part.a2.len() > part.a1.len() { &part.a2 } else { &part.a1 })
        };
        match pick {
            Some(s) => current = lift(s),
            None => return Err(Infeasible::new("no part of the partition exceeds its threshold")),
        }
    }
}
