//! Repetition invariants over all induced subgraphs.
//!
//! For a graph `H` and degree `p`:
//! * `r(H,p)` is the largest number of degree-`p` vertices in an induced subgraph of `H`;
//! * `c(H,p)` is the same maximum restricted to induced subgraphs of maximum degree at most `p`.
//!
//! Both are additive over disjoint unions, which is what makes the component
//! LP and the extremal search exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Largest order handled by exhaustive subset enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 30;

/// Components up to this order are solved exactly inside composed searches.
pub const COMPOSED_EXACT_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rep,
    #[serde(rename = "maxrep")]
    MaxRep,
    Regular,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Rep => "rep",
            Mode::MaxRep => "maxrep",
            Mode::Regular => "regular",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rep" => Ok(Mode::Rep),
            "maxrep" => Ok(Mode::MaxRep),
            "regular" => Ok(Mode::Regular),
            other => Err(format!("unknown mode {other:?} (expected rep, maxrep or regular)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-degree contribution of a graph to any disjoint union containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub dmax: usize,
    pub r: Vec<u32>,
    pub c: Vec<u32>,
}

impl DegreeProfile {
    pub fn coefficients(&self, mode: Mode) -> Result<&[u32]> {
        match mode {
            Mode::Rep => Ok(&self.r),
            Mode::MaxRep => Ok(&self.c),
            Mode::Regular => Err(Error::UnsupportedMode("regular")),
        }
    }
}

/// An induced subgraph in which exactly `count` vertices have degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub subset: VertexSet,
    pub degree: usize,
    pub count: usize,
}

impl Witness {
    fn empty() -> Self {
        Witness { subset: VertexSet::new(), degree: 0, count: 0 }
    }

    /// Re-derive the claim from `g` alone.
    pub fn verify(&self, g: &Graph, mode: Mode) -> bool {
        let Ok(h) = g.induced(&self.subset) else { return false };
        let seq = h.degree_sequence();
        match mode {
            Mode::Rep => seq.counts.get(&self.degree).copied().unwrap_or(0) == self.count,
            Mode::MaxRep => {
                self.count == 0
                    || (h.max_degree() == self.degree && seq.counts.get(&self.degree) == Some(&self.count))
            }
            Mode::Regular => {
                self.count == h.order()
                    && (self.count == 0 || (h.is_regular() && h.max_degree() == self.degree))
            }
        }
    }
}

/// Whether a reported value is exact or only a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    LowerBound,
}

/// Degree histogram of the current subset during a Gray-code sweep.
struct Tally {
    mask: u64,
    size: u32,
    distinct: u32,
    cnt: Vec<u32>,
}

impl Tally {
    #[inline]
    fn inc(&mut self, d: u32) {
        let c = &mut self.cnt[d as usize];
        if *c == 0 {
            self.distinct += 1;
        }
        *c += 1;
    }

    #[inline]
    fn dec(&mut self, d: u32) {
        let c = &mut self.cnt[d as usize];
        *c -= 1;
        if *c == 0 {
            self.distinct -= 1;
        }
    }

    #[inline]
    fn max_degree(&self) -> usize {
        self.cnt.iter().rposition(|&c| c > 0).unwrap_or(0)
    }
}

fn check_exhaustive(g: &Graph, what: &'static str) -> Result<()> {
    if g.order() > EXHAUSTIVE_LIMIT {
        return Err(Error::SizeLimit { what, n: g.order(), limit: EXHAUSTIVE_LIMIT });
    }
    Ok(())
}

/// Visit every vertex subset of `g` (including the empty one) in Gray-code
/// order, keeping the degree histogram of the induced subgraph up to date.
/// Each step costs O(degree of the toggled vertex).
fn sweep<F: FnMut(&Tally)>(g: &Graph, slots: usize, mut visit: F) {
    let n = g.order();
    debug_assert!(n <= EXHAUSTIVE_LIMIT.max(32));
    let nbrs = g.adjacency_lists();
    let mut deg = vec![0u32; n];
    let mut t = Tally { mask: 0, size: 0, distinct: 0, cnt: vec![0; slots.max(g.max_degree() + 1)] };
    visit(&t);
    for i in 1..(1u64 << n) {
        let b = i.trailing_zeros() as usize;
        let bit = 1u64 << b;
        if t.mask & bit == 0 {
            for &u in &nbrs[b] {
                if t.mask >> u & 1 == 1 {
                    t.dec(deg[u]);
                    t.inc(deg[u] + 1);
                }
                deg[u] += 1;
            }
            t.inc(deg[b]);
            t.mask |= bit;
            t.size += 1;
        } else {
            t.dec(deg[b]);
            t.mask &= !bit;
            t.size -= 1;
            for &u in &nbrs[b] {
                if t.mask >> u & 1 == 1 {
                    t.dec(deg[u]);
                    t.inc(deg[u] - 1);
                }
                deg[u] -= 1;
            }
        }
        visit(&t);
    }
}

#[derive(Clone, Copy)]
struct Best {
    count: u32,
    mask: u64,
}

impl Best {
    #[inline]
    fn offer(&mut self, count: u32, mask: u64) {
        if count > self.count || (count == self.count && mask < self.mask) {
            self.count = count;
            self.mask = mask;
        }
    }
}

/// Profile plus, for each degree, the lexicographically smallest witnessing subsets.
pub struct ProfileScan {
    pub profile: DegreeProfile,
    pub r_witness: Vec<Witness>,
    pub c_witness: Vec<Witness>,
}

pub fn profile_with_witnesses(g: &Graph, dmax: usize) -> Result<ProfileScan> {
    check_exhaustive(g, "profile")?;
    let slots = dmax.max(g.max_degree()) + 1;
    let mut r = vec![Best { count: 0, mask: 0 }; slots];
    let mut c = r.clone();
    sweep(g, slots, |t| {
        for (p, best) in r.iter_mut().enumerate() {
            best.offer(t.cnt[p], t.mask);
        }
        if t.size > 0 {
            let p = t.max_degree();
            c[p].offer(t.cnt[p], t.mask);
        }
    });
    let witness = |v: &[Best]| -> Vec<Witness> {
        v.iter()
            .take(dmax + 1)
            .enumerate()
            .map(|(p, b)| Witness { subset: VertexSet::from_mask(b.mask), degree: p, count: b.count as usize })
            .collect()
    };
    let profile = DegreeProfile {
        dmax,
        r: r.iter().take(dmax + 1).map(|b| b.count).collect(),
        c: c.iter().take(dmax + 1).map(|b| b.count).collect(),
    };
    Ok(ProfileScan { profile, r_witness: witness(&r), c_witness: witness(&c) })
}

/// `r(G,p)` and `c(G,p)` for `p = 0..=dmax`, by exhaustive enumeration.
pub fn profile(g: &Graph, dmax: usize) -> Result<DegreeProfile> {
    Ok(profile_with_witnesses(g, dmax)?.profile)
}

/// `reg[p]` is the largest order of a `p`-regular induced subgraph (0 if none).
/// Also additive over disjoint unions.
pub fn regular_vector(g: &Graph, dmax: usize) -> Result<Vec<u32>> {
    Ok(regular_scan(g, dmax)?.into_iter().map(|b| b.count).collect())
}

fn regular_scan(g: &Graph, dmax: usize) -> Result<Vec<Best>> {
    check_exhaustive(g, "regular subgraph search")?;
    let slots = dmax.max(g.max_degree()) + 1;
    let mut reg = vec![Best { count: 0, mask: 0 }; slots];
    sweep(g, slots, |t| {
        if t.distinct == 1 {
            reg[t.max_degree()].offer(t.size, t.mask);
        }
    });
    reg.truncate(dmax + 1);
    Ok(reg)
}

fn pick(witnesses: impl IntoIterator<Item = Witness>) -> Witness {
    witnesses
        .into_iter()
        .fold(Witness::empty(), |best, w| {
            let better = w.count > best.count
                || (w.count == best.count && w.count > 0 && w.subset.as_mask() < best.subset.as_mask());
            if better { w } else { best }
        })
}

/// Largest repetition (or max-degree repetition) over induced subgraphs of `g`,
/// with a witness. Exhaustive; `g` must have at most [`EXHAUSTIVE_LIMIT`] vertices.
pub fn max_induced_repetition(g: &Graph, mode: Mode) -> Result<(usize, Witness)> {
    let scan = profile_with_witnesses(g, g.max_degree())?;
    let w = match mode {
        Mode::Rep => pick(scan.r_witness),
        Mode::MaxRep => pick(scan.c_witness),
        Mode::Regular => return max_induced_regular_order(g),
    };
    Ok((w.count, w))
}

/// Order of a largest regular induced subgraph, with a witness.
pub fn max_induced_regular_order(g: &Graph) -> Result<(usize, Witness)> {
    let reg = regular_scan(g, g.max_degree())?;
    let w = pick(reg.iter().enumerate().map(|(p, b)| Witness {
        subset: VertexSet::from_mask(b.mask),
        degree: p,
        count: b.count as usize,
    }));
    Ok((w.count, w))
}

/// Composition law: the best value over a disjoint union, given each
/// component's per-degree vector and multiplicity.
pub fn union_max(vectors: &[(&[u32], usize)]) -> Result<usize> {
    let Some(len) = vectors.first().map(|(v, _)| v.len()) else { return Ok(0) };
    if let Some((v, _)) = vectors.iter().find(|(v, _)| v.len() != len) {
        return Err(Error::DimensionMismatch { expected: len, found: v.len() });
    }
    Ok((0..len)
        .map(|p| vectors.iter().map(|(v, m)| v[p] as usize * m).sum::<usize>())
        .max()
        .unwrap_or(0))
}

/// [`union_max`] over the rep (`r`) or maxrep (`c`) vectors of the profiles.
pub fn union_repetition(profiles: &[(&DegreeProfile, usize)], mode: Mode) -> Result<usize> {
    let vectors = profiles
        .iter()
        .map(|(p, m)| Ok((p.coefficients(mode)?, *m)))
        .collect::<Result<Vec<_>>>()?;
    union_max(&vectors)
}

/// Like [`max_induced_repetition`] but for graphs of any order: components
/// within the exhaustive limit are solved exactly and combined by the union
/// law; larger components contribute greedy lower bounds, in which case the
/// result is flagged [`Exactness::LowerBound`].
pub fn max_induced_repetition_composed(g: &Graph, mode: Mode) -> Result<(usize, Witness, Exactness)> {
    let comps = g.connected_components();
    let dmax = g.max_degree();
    let mut exact = Exactness::Exact;
    // per component: per-degree (count, subset in g's labels)
    let mut tables: Vec<Vec<(u32, VertexSet)>> = Vec::with_capacity(comps.len());
    for comp in &comps {
        let h = g.induced(comp)?;
        let verts = comp.to_vec();
        let lift = |local: &VertexSet| local.iter().map(|i| verts[i]).collect::<VertexSet>();
        let table = if h.order() <= COMPOSED_EXACT_LIMIT {
            match mode {
                Mode::Regular => regular_scan(&h, dmax)?
                    .into_iter()
                    .map(|b| (b.count, lift(&VertexSet::from_mask(b.mask))))
                    .collect(),
                _ => {
                    let scan = profile_with_witnesses(&h, dmax)?;
                    let ws = if mode == Mode::Rep { scan.r_witness } else { scan.c_witness };
                    ws.into_iter().map(|w| (w.count as u32, lift(&w.subset))).collect()
                }
            }
        } else {
            exact = Exactness::LowerBound;
            greedy_table(&h, dmax, mode).into_iter().map(|(c, s)| (c, lift(&s))).collect()
        };
        tables.push(table);
    }
    let mut best = Witness::empty();
    for p in 0..=dmax {
        let count: usize = tables.iter().map(|t| t[p].0 as usize).sum();
        if count > best.count {
            let subset = tables.iter().filter(|t| t[p].0 > 0).fold(VertexSet::new(), |s, t| s.union(&t[p].1));
            best = Witness { subset, degree: p, count };
        }
    }
    Ok((best.count, best, exact))
}

/// Cheap candidates for an oversized component: the component itself and a
/// greedy minimum-degree independent set.
fn greedy_table(h: &Graph, dmax: usize, mode: Mode) -> Vec<(u32, VertexSet)> {
    let mut table = vec![(0u32, VertexSet::new()); dmax + 1];
    let mut candidates = vec![VertexSet::full(h.order())];
    let mut alive = VertexSet::full(h.order());
    let mut indep = VertexSet::new();
    while !alive.is_empty() {
        let v = alive.iter().min_by_key(|&v| (h.degree_in(v, &alive), v)).unwrap();
        indep.insert(v);
        alive.remove(v);
        for u in h.neighbours(v).iter() {
            alive.remove(u);
        }
    }
    candidates.push(indep);
    for s in candidates {
        let sub = h.induced(&s).expect("subset of own vertices");
        let seq = sub.degree_sequence();
        let top = sub.max_degree();
        for (&p, &cnt) in &seq.counts {
            let admissible = match mode {
                Mode::Rep => true,
                Mode::MaxRep => p == top,
                Mode::Regular => seq.counts.len() == 1,
            };
            if admissible && p <= dmax && cnt as u32 > table[p].0 {
                table[p] = (cnt as u32, s.clone());
            }
        }
    }
    table
}
