//! Canonical labelling of small graphs by individualisation and refinement.
//!
//! The search tree is the usual one: refine the unit partition to an equitable
//! partition, then repeatedly individualise a vertex of the first non-singleton
//! cell and refine again. Each discrete partition is a labelling, and the
//! canonical labelling is the one whose relabelled adjacency rows are
//! lexicographically largest. Automorphisms discovered along the way (two
//! leaves with identical relabelled graphs) prune sibling subtrees.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6;

/// Largest order accepted by the canonical labeller.
pub const CANON_LIMIT: usize = 64;

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// `labeling[v]` is the canonical position of original vertex `v`.
    pub labeling: Vec<usize>,
    pub graph: Graph,
}

impl CanonicalForm {
    pub fn key(&self) -> Vec<u8> {
        graph6::encode(&self.graph).into_bytes()
    }
}

/// Canonical labelling of `g`. Isomorphic inputs give identical `graph`s.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let n = g.order();
    if n > CANON_LIMIT {
        return Err(Error::SizeLimit { what: "canonical labelling", n, limit: CANON_LIMIT });
    }
    let adj: Vec<u64> = (0..n).map(|v| g.row_mask(v)).collect();
    let mut search = Search { adj: &adj, first: None, best: None, generators: Vec::new() };
    let root = refine(&adj, vec![(0..n).collect()]);
    search.descend(root, &mut Vec::new());

    let labeling = match search.best {
        Some(leaf) => {
            let mut labeling = vec![0; n];
            for (pos, &v) in leaf.lab.iter().enumerate() {
                labeling[v] = pos;
            }
            labeling
        }
        None => Vec::new(),
    };
    let graph = g.permuted(&labeling);
    Ok(CanonicalForm { labeling, graph })
}

/// Byte string that is equal for two graphs iff they are isomorphic.
pub fn canonical_key(g: &Graph) -> Result<Vec<u8>> {
    Ok(canonical_form(g)?.key())
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)?.graph == canonical_form(b)?.graph)
}

type Cells = Vec<Vec<usize>>;

struct Leaf {
    lab: Vec<usize>,
    cert: Vec<u64>,
    prefix: Vec<usize>,
}

struct Search<'a> {
    adj: &'a [u64],
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(level)` when the caller should unwind to tree depth `level`.
    fn descend(&mut self, cells: Cells, prefix: &mut Vec<usize>) -> Option<usize> {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(cells, prefix);
        };
        let depth = prefix.len();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if !explored.is_empty() {
                let orbits = self.orbits(prefix);
                if explored.iter().any(|&u| orbits.same(u, v)) {
                    continue;
                }
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&u| u != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            let child = refine(self.adj, child);

            prefix.push(v);
            let jump = self.descend(child, prefix);
            prefix.pop();
            explored.push(v);
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: Cells, prefix: &[usize]) -> Option<usize> {
        let lab: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
        let cert = certificate(self.adj, &lab);
        let leaf = Leaf { lab, cert, prefix: prefix.to_vec() };
        let Some(first) = &self.first else {
            self.best = Some(Leaf { lab: leaf.lab.clone(), cert: leaf.cert.clone(), prefix: leaf.prefix.clone() });
            self.first = Some(leaf);
            return None;
        };
        if first.cert == leaf.cert {
            self.generators.push(automorphism(&first.lab, &leaf.lab));
            let common = first.prefix.iter().zip(&leaf.prefix).take_while(|(a, b)| a == b).count();
            return Some(common);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.cert.cmp(&best.cert) {
            std::cmp::Ordering::Greater => self.best = Some(leaf),
            std::cmp::Ordering::Equal => {
                let gen = automorphism(&best.lab, &leaf.lab);
                self.generators.push(gen);
            }
            std::cmp::Ordering::Less => {}
        }
        None
    }

    /// Orbits of the group generated by the known automorphisms fixing `prefix` pointwise.
    fn orbits(&self, prefix: &[usize]) -> UnionFind {
        let mut uf = UnionFind::new(self.adj.len());
        for gen in &self.generators {
            if prefix.iter().all(|&p| gen[p] == p) {
                for (v, &w) in gen.iter().enumerate() {
                    uf.union(v, w);
                }
            }
        }
        uf
    }
}

fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut gen = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gen[a] = b;
    }
    gen
}

/// Adjacency rows of the graph relabelled by position.
fn certificate(adj: &[u64], lab: &[usize]) -> Vec<u64> {
    let mut pos = vec![0; lab.len()];
    for (i, &v) in lab.iter().enumerate() {
        pos[v] = i;
    }
    lab.iter()
        .map(|&v| {
            let mut row = 0u64;
            let mut m = adj[v];
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                row |= 1 << pos[u];
            }
            row
        })
        .collect()
}

/// Equitable refinement: split cells by neighbour counts into each splitter
/// cell until nothing changes. Fragments are ordered by ascending count.
fn refine(adj: &[u64], mut cells: Cells) -> Cells {
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let splitter = cells[s].iter().fold(0u64, |m, &v| m | 1 << v);
            let mut next = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(u32, usize)> =
                    cell.iter().map(|&v| ((adj[v] & splitter).count_ones(), v)).collect();
                // stable on ties keeps fragment contents in cell order
                keyed.sort_by_key(|&(k, _)| k);
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
            }
            if next.len() != cells.len() {
                changed = true;
                cells = next;
            }
            s += 1;
        }
        if !changed {
            return cells;
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn same(&self, a: usize, b: usize) -> bool {
        let root = |mut v: usize| {
            while self.parent[v] != v {
                v = self.parent[v];
            }
            v
        };
        root(a) == root(b)
    }
}
