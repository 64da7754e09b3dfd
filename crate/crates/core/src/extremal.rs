//! Exact g(k,d), h(k,d), f(k,d) for small parameters.
//!
//! A graph of maximum degree at most `d` is a multiset of connected
//! components, and each mode's invariant of a disjoint union is
//! `max_p Σ v_i[p]` over per-component vectors `v_i`. So an `n`-vertex graph
//! avoiding `k` exists iff some multiset of catalog entries with orders
//! summing to `n` keeps every coordinate sum below `k`. The search is a
//! knapsack over (order, capped sum vector) states.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumeration::{Catalog, CatalogEntry, Enumerator, MAX_ORDER};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6;
use crate::invariants::{max_induced_repetition, profile, regular_vector, union_max, Exactness, Mode, EXHAUSTIVE_LIMIT};

/// Realised witnesses up to this order are re-checked by brute force.
pub const BRUTE_FORCE_CHECK_LIMIT: usize = 24;

/// Catalog levels larger than this stop [`compute_value`] with a lower bound.
pub const LEVEL_LIMIT: usize = 250_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub k: usize,
    pub d: usize,
    pub mode: Mode,
    pub value: usize,
    /// Catalog entries and copy counts whose union has `value` vertices.
    pub witness: Vec<(CatalogEntry, usize)>,
    /// `LowerBound` when the envelope was reached before a failing order.
    pub exactness: Exactness,
    /// `(n, witness found)` for every order searched, ascending.
    pub table: Vec<(usize, bool)>,
    pub brute_force_checked: bool,
}

impl SearchResult {
    pub fn realize(&self) -> Result<Graph> {
        realize_multiset(&self.witness)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPart {
    pub g6: String,
    pub copies: usize,
}

pub fn witness_parts(witness: &[(CatalogEntry, usize)]) -> Vec<WitnessPart> {
    witness.iter().map(|(e, m)| WitnessPart { g6: e.g6.clone(), copies: *m }).collect()
}

pub fn realize_multiset(parts: &[(CatalogEntry, usize)]) -> Result<Graph> {
    Graph::disjoint_union(parts.iter().map(|(e, m)| (&e.graph, *m)))
}

/// The per-degree vector the mode sums over components.
pub fn mode_vector(g: &Graph, d: usize, mode: Mode) -> Result<Vec<u32>> {
    match mode {
        Mode::Rep => Ok(profile(g, d)?.r),
        Mode::MaxRep => Ok(profile(g, d)?.c),
        Mode::Regular => regular_vector(g, d),
    }
}

fn entry_vector(e: &CatalogEntry, d: usize, mode: Mode) -> Result<Vec<u32>> {
    match (mode, &e.profile) {
        (Mode::Rep, Some(p)) => Ok(p.r.clone()),
        (Mode::MaxRep, Some(p)) => Ok(p.c.clone()),
        _ => mode_vector(&e.graph, d, mode),
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > u8::MAX as usize {
        return Err(Error::Envelope(format!("k = {k} not in 1..=255")));
    }
    Ok(())
}

/// A multiset of catalog entries with orders summing to `n` whose union keeps
/// the mode's invariant below `k`, or `None` if there is none.
pub fn search_extremal(catalog: &Catalog, k: usize, n: usize, mode: Mode) -> Result<Option<Vec<(CatalogEntry, usize)>>> {
    check_k(k)?;
    if n > MAX_ORDER {
        return Err(Error::Envelope(format!("n = {n} exceeds {MAX_ORDER}")));
    }
    if n > catalog.r {
        return Err(Error::Precondition(format!("catalog covers orders up to {}, need {n}", catalog.r)));
    }
    let items = catalog
        .entries
        .par_iter()
        .filter(|e| e.order <= n)
        .map(|e| Ok((e.clone(), entry_vector(e, catalog.d, mode)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(knapsack(&items, k, n))
}

type Key = Vec<u8>;

fn knapsack(items: &[(CatalogEntry, Vec<u32>)], k: usize, n: usize) -> Option<Vec<(CatalogEntry, usize)>> {
    // one representative per (order, vector), lowest catalog index first
    let mut reps: BTreeMap<(usize, Key), usize> = BTreeMap::new();
    for (i, (e, v)) in items.iter().enumerate() {
        if e.order == 0 || e.order > n || v.iter().any(|&x| x as usize >= k) {
            continue;
        }
        let key: Key = v.iter().map(|&x| x as u8).collect();
        reps.entry((e.order, key)).or_insert(i);
    }
    let reps: Vec<(usize, Key, usize)> = {
        let mut r: Vec<_> = reps.into_iter().map(|((o, key), i)| (o, key, i)).collect();
        r.sort_by_key(|&(_, _, i)| i);
        r
    };
    let width = items.first().map_or(1, |(_, v)| v.len());

    // reach[m]: state -> (predecessor state, representative index)
    let mut reach: Vec<BTreeMap<Key, Option<(Key, usize)>>> = vec![BTreeMap::new(); n + 1];
    reach[0].insert(vec![0; width], None);
    for m in 0..n {
        let states: Vec<Key> = reach[m].keys().cloned().collect();
        for s in &states {
            for (ri, (order, v, _)) in reps.iter().enumerate() {
                if m + order > n {
                    continue;
                }
                let next: Key = s.iter().zip(v).map(|(a, b)| a + b).collect();
                if next.iter().any(|&x| x as usize >= k) {
                    continue;
                }
                reach[m + order].entry(next).or_insert_with(|| Some((s.clone(), ri)));
            }
        }
    }
    let (mut state, _) = reach[n].iter().next()?;
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut m = n;
    while let Some((prev, ri)) = reach[m][state].as_ref() {
        let (order, _, item) = &reps[*ri];
        *counts.entry(*item).or_default() += 1;
        m -= order;
        state = reach[m].get_key_value(prev).unwrap().0;
    }
    Some(counts.into_iter().map(|(i, c)| (items[i].0.clone(), c)).collect())
}

fn check_witness(witness: &[(CatalogEntry, usize)], items_d: usize, k: usize, mode: Mode) -> Result<bool> {
    let vectors = witness
        .iter()
        .map(|(e, _)| mode_vector(&graph6::decode(&e.g6)?, items_d, mode))
        .collect::<Result<Vec<_>>>()?;
    let parts: Vec<(&[u32], usize)> = vectors.iter().zip(witness).map(|(v, (_, m))| (v.as_slice(), *m)).collect();
    assert!(union_max(&parts)? < k, "union law rejects a search witness");
    let g = realize_multiset(witness)?;
    assert!(g.max_degree() <= items_d);
    if g.order() <= BRUTE_FORCE_CHECK_LIMIT.min(EXHAUSTIVE_LIMIT) {
        let (value, _) = max_induced_repetition(&g, mode)?;
        assert!(value < k, "brute force finds {value} >= k = {k} in a search witness");
        return Ok(true);
    }
    Ok(false)
}

/// Largest `n` admitting an `n`-vertex graph with maximum degree at most `d`
/// whose mode invariant stays below `k`, with a witness graph.
pub fn compute_value(k: usize, d: usize, mode: Mode) -> Result<SearchResult> {
    check_k(k)?;
    let mut en = Enumerator::new(d);
    let mut items: Vec<(CatalogEntry, Vec<u32>)> = Vec::new();
    let mut annotated = 0;
    let mut table = Vec::new();
    let mut best: Option<(usize, Vec<(CatalogEntry, usize)>)> = None;
    let mut exactness = Exactness::Exact;

    for n in k - 1.. {
        if n > MAX_ORDER {
            exactness = Exactness::LowerBound;
            break;
        }
        while annotated < n {
            if annotated == en.max_order() {
                if en.level(annotated).len() > LEVEL_LIMIT {
                    exactness = Exactness::LowerBound;
                    break;
                }
                en.next_level();
            }
            annotated += 1;
            let level = en.level(annotated);
            let fresh = level
                .par_iter()
                .map(|g| {
                    let e = CatalogEntry { g6: graph6::encode(g), order: g.order(), graph: g.clone(), profile: None };
                    let v = mode_vector(g, d, mode)?;
                    Ok((e, v))
                })
                .collect::<Result<Vec<_>>>()?;
            items.extend(fresh);
        }
        if exactness == Exactness::LowerBound {
            break;
        }
        match knapsack(&items, k, n) {
            Some(w) => {
                table.push((n, true));
                best = Some((n, w));
            }
            None => {
                table.push((n, false));
                break;
            }
        }
    }

    let (value, witness) = best.expect("k - 1 isolated vertices always avoid k");
    let brute_force_checked = check_witness(&witness, d, k, mode)?;
    Ok(SearchResult { k, d, mode, value, witness, exactness, table, brute_force_checked })
}
