//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's subset sweep, canonical labeller or enumerator.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use repx::Graph;

/// Adjacency matrix copy of `g`.
pub fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.order();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

/// Degree counts of the subgraph induced by `mask`, indexed by degree.
fn induced_degree_counts(m: &[Vec<bool>], mask: u64) -> Vec<usize> {
    let n = m.len();
    let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    let mut counts = vec![0; n.max(1)];
    for &v in &verts {
        let d = verts.iter().filter(|&&u| m[v][u]).count();
        counts[d] += 1;
    }
    counts
}

/// `(r, c, reg)` vectors up to `dmax` by looping over every subset:
/// r[p] = most degree-p vertices in an induced subgraph, c[p] the same over
/// induced subgraphs with maximum degree at most p, reg[p] the largest
/// p-regular induced subgraph.
pub fn naive_vectors(g: &Graph, dmax: usize) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let m = matrix(g);
    let n = g.order();
    let mut r = vec![0u32; dmax + 1];
    let mut c = vec![0u32; dmax + 1];
    let mut reg = vec![0u32; dmax + 1];
    for mask in 0u64..(1u64 << n) {
        let counts = induced_degree_counts(&m, mask);
        let size: usize = counts.iter().sum();
        let top = counts.iter().rposition(|&x| x > 0).unwrap_or(0);
        for p in 0..=dmax.min(counts.len() - 1) {
            let x = counts[p] as u32;
            r[p] = r[p].max(x);
            if top <= p {
                c[p] = c[p].max(x);
            }
            if size > 0 && counts[p] == size {
                reg[p] = reg[p].max(x);
            }
        }
    }
    (r, c, reg)
}

/// Largest rep, maxrep and regular order over all induced subgraphs.
pub fn naive_max(g: &Graph) -> (usize, usize, usize) {
    let m = matrix(g);
    let (mut rep, mut maxrep, mut reg) = (0, 0, 0);
    for mask in 0u64..(1u64 << g.order()) {
        let counts = induced_degree_counts(&m, mask);
        let size: usize = counts.iter().sum();
        rep = rep.max(*counts.iter().max().unwrap());
        if let Some(top) = counts.iter().rposition(|&x| x > 0) {
            maxrep = maxrep.max(counts[top]);
            if counts[top] == size {
                reg = reg.max(size);
            }
        }
    }
    (rep, maxrep, reg)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest upper-triangle bit string over all relabellings.
pub fn brute_key(m: &[Vec<bool>], perms: &[Vec<usize>]) -> Vec<bool> {
    let n = m.len();
    perms
        .iter()
        .map(|p| {
            let mut bits = Vec::with_capacity(n * n / 2);
            for j in 1..n {
                for i in 0..j {
                    bits.push(m[p[i]][p[j]]);
                }
            }
            bits
        })
        .min()
        .unwrap_or_default()
}

fn connected(m: &[Vec<bool>]) -> bool {
    let n = m.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in 0..n {
            if m[v][u] && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Isomorphism classes of connected graphs on exactly `n` vertices with
/// maximum degree at most `d`, as brute-force keys.
pub fn brute_connected_classes(n: usize, d: usize) -> BTreeSet<Vec<bool>> {
    let perms = permutations(n);
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut classes = BTreeSet::new();
    for bits in 0u64..(1u64 << pairs.len()) {
        let mut m = vec![vec![false; n]; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if bits >> b & 1 == 1 {
                m[i][j] = true;
                m[j][i] = true;
            }
        }
        if m.iter().any(|row| row.iter().filter(|&&x| x).count() > d) || !connected(&m) {
            continue;
        }
        classes.insert(brute_key(&m, &perms));
    }
    classes
}

pub fn brute_key_of(g: &Graph) -> Vec<bool> {
    brute_key(&matrix(g), &permutations(g.order()))
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}
