//! Simple undirected graphs stored as symmetric adjacency bit-rows.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard limit on the number of vertices a [`Graph`] may carry.
pub const MAX_VERTICES: usize = 512;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A set of vertices of some graph, one bit per vertex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The full vertex set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self { words: vec![u64::MAX; words_for(n)] };
        if n % 64 != 0 {
            if let Some(last) = s.words.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        s
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self { words: vec![mask] };
        s.trim();
        s
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut s = Self { words };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low 64 bits; only meaningful when every member is below 64.
    pub fn as_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if let Some(w) = self.words.get_mut(v / 64) {
            *w &= !(1 << (v % 64));
        }
        self.trim();
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words.get(v / 64).is_some_and(|w| w >> (v % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// One past the largest member, or 0 for the empty set.
    pub fn bound(&self) -> usize {
        match self.words.last() {
            None => 0,
            Some(w) => (self.words.len() - 1) * 64 + 64 - w.leading_zeros() as usize,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let len = self.words.len().max(other.words.len());
        let words = (0..len)
            .map(|i| self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0))
            .collect();
        VertexSet::from_words(words)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        VertexSet::from_words(words)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Undirected simple graph on vertices `0..n`.
///
/// Row `v` has bit `u` set iff `{u, v}` is an edge. Rows are stored
/// contiguously, `stride` words each.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    ///
    /// Panics if `n` exceeds [`MAX_VERTICES`]; use [`Graph::try_empty`] for a
    /// checked constructor.
    pub fn empty(n: usize) -> Self {
        Self::try_empty(n).expect("vertex limit")
    }

    pub fn try_empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, limit: MAX_VERTICES });
        }
        let stride = words_for(n).max(1);
        Ok(Self { n, stride, adj: vec![0; n * stride] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::try_empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 0..n {
            for u in 0..v {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let mut g = Self::path(n);
        g.add_edge(n - 1, 0);
        g
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Self::empty(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).unwrap()
    }

    /// The prism: complement of the 6-cycle.
    pub fn prism() -> Self {
        Self::cycle(6).complement()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.stride..(v + 1) * self.stride]
    }

    /// Neighbourhood of `v` as a mask; only valid for graphs with `n <= 64`.
    #[inline]
    pub fn row_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.adj[v * self.stride]
    }

    pub fn neighbours(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.row(v).to_vec())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.stride + v / 64] |= 1 << (v % 64);
        self.adj[v * self.stride + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        self.adj[u * self.stride + v / 64] &= !(1 << (v % 64));
        self.adj[v * self.stride + u / 64] &= !(1 << (u % 64));
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.n {
            for u in self.neighbours(v).iter().take_while(|&u| u < v) {
                out.push((u, v));
            }
        }
        out.sort_unstable();
        out
    }

    /// Adjacency lists, ascending.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.neighbours(v).to_vec()).collect()
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for v in 0..self.n {
            for u in 0..v {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Relabel so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Number of vertices of each degree.
    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut counts = BTreeMap::new();
        for v in 0..self.n {
            *counts.entry(self.degree(v)).or_insert(0) += 1;
        }
        DegreeSequence { counts }
    }

    /// Maximum multiplicity of a value in the degree sequence; 0 for the empty graph.
    pub fn rep(&self) -> usize {
        self.degree_sequence().counts.values().copied().max().unwrap_or(0)
    }

    /// Number of vertices of maximum degree; 0 for the empty graph.
    pub fn maxrep(&self) -> usize {
        self.degree_sequence().counts.values().next_back().copied().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.degree_sequence().counts.len() <= 1
    }

    /// The induced subgraph on `set`, vertices renumbered in ascending order.
    pub fn induced(&self, set: &VertexSet) -> Result<Graph> {
        if set.bound() > self.n {
            return Err(Error::VertexOutOfRange { vertex: set.bound() - 1, n: self.n });
        }
        let verts = set.to_vec();
        let mut g = Graph::empty(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for (j, &u) in verts.iter().enumerate().take(i) {
                if self.has_edge(u, v) {
                    g.add_edge(j, i);
                }
            }
        }
        Ok(g)
    }

    /// Degree of `v` inside `set`.
    #[inline]
    pub fn degree_in(&self, v: usize, set: &VertexSet) -> usize {
        self.row(v)
            .iter()
            .zip(set.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Maximal connected vertex sets, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for u in self.neighbours(v).iter() {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Disjoint union of `mult` copies of each listed graph, in list order.
    pub fn disjoint_union<'a, I>(parts: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (&'a Graph, usize)>,
    {
        let parts: Vec<_> = parts.into_iter().collect();
        let total: usize = parts.iter().map(|(g, m)| g.order() * m).sum();
        let mut out = Graph::try_empty(total)?;
        let mut offset = 0;
        for (g, mult) in parts {
            for _ in 0..mult {
                for (u, v) in g.edges() {
                    out.add_edge(offset + u, offset + v);
                }
                offset += g.order();
            }
        }
        Ok(out)
    }

    pub fn check_invariants(&self) -> bool {
        (0..self.n).all(|v| {
            !self.has_edge(v, v)
                && self.neighbours(v).bound() <= self.n
                && self.neighbours(v).iter().all(|u| self.has_edge(u, v))
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Degree value -> multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DegreeSequence {
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeSequence {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_sequences() {
        let p4 = Graph::path(4);
        assert_eq!(p4.degree_sequence().counts, BTreeMap::from([(1, 2), (2, 2)]));
        assert_eq!(Graph::cycle(5).degree_sequence().counts, BTreeMap::from([(2, 5)]));
        let u = Graph::disjoint_union([(&Graph::empty(1), 1), (&Graph::complete(2), 1)]).unwrap();
        assert_eq!(u.degree_sequence().counts, BTreeMap::from([(0, 1), (1, 2)]));
    }

    #[test]
    fn rep_and_maxrep() {
        assert_eq!(Graph::cycle(5).rep(), 5);
        assert_eq!(Graph::path(4).rep(), 2);
        assert_eq!(Graph::path(4).maxrep(), 2);
        assert_eq!(Graph::star(3).maxrep(), 1);
        assert_eq!(Graph::prism().maxrep(), 6);
        assert_eq!(Graph::empty(0).rep(), 0);
        assert_eq!(Graph::empty(0).maxrep(), 0);
    }

    #[test]
    fn induced_subgraphs() {
        let c5 = Graph::cycle(5);
        assert_eq!(c5.induced(&VertexSet::full(5)).unwrap(), c5);
        let p4 = Graph::path(4);
        let h = p4.induced(&[0, 1, 3].into_iter().collect()).unwrap();
        assert_eq!(h.order(), 3);
        assert_eq!(h.edges(), vec![(0, 1)]);
        assert_eq!(p4.induced(&VertexSet::new()).unwrap().order(), 0);
        assert!(matches!(
            p4.induced(&[5].into_iter().collect()),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn components() {
        let c5 = Graph::cycle(5);
        let comps = c5.connected_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 5);
        let u = Graph::disjoint_union([
            (&Graph::empty(1), 1),
            (&Graph::complete(2), 1),
            (&Graph::path(4), 1),
        ])
        .unwrap();
        let sizes: Vec<_> = u.connected_components().iter().map(VertexSet::len).collect();
        assert_eq!(sizes, vec![1, 2, 4]);
        assert!(Graph::empty(0).connected_components().is_empty());
    }

    #[test]
    fn unions() {
        let k1 = Graph::empty(1);
        let g = Graph::disjoint_union([(&k1, 3)]).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.rep(), 3);
        let g = Graph::disjoint_union([(&Graph::cycle(5), 2), (&Graph::path(4), 3)]).unwrap();
        assert_eq!(g.order(), 22);
        assert_eq!(g.connected_components().len(), 5);
        assert!(matches!(
            Graph::disjoint_union([(&k1, 600)]),
            Err(Error::TooManyVertices { .. })
        ));
    }

    #[test]
    fn large_rows() {
        let mut g = Graph::empty(300);
        g.add_edge(0, 299);
        g.add_edge(130, 299);
        assert_eq!(g.degree(299), 2);
        assert!(g.has_edge(299, 130));
        assert!(g.check_invariants());
        let s: VertexSet = [0, 130, 299].into_iter().collect();
        assert_eq!(g.induced(&s).unwrap().edge_count(), 2);
        assert_eq!(VertexSet::full(130).len(), 130);
        assert_eq!(VertexSet::full(128).bound(), 128);
    }

    #[test]
    fn named_graphs() {
        let q = Graph::prism();
        assert_eq!(q.degree_sequence().counts, BTreeMap::from([(3, 6)]));
        let p = Graph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!(p.is_regular());
    }
}
