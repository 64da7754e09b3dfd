//! The component-mix linear program, solved in exact rational arithmetic.
//!
//! For a catalog of connected graphs `H` with per-degree coefficients
//! `a(H,p)` (the `c` vector for maxrep, `r` for rep) the program is
//!
//! ```text
//! maximize   sum_H |H| x_H
//! subject to sum_H a(H,p) x_H <= 1   for p = 0..=d
//!            x_H >= 0
//! ```
//!
//! which is the per-`(k-1)` normalisation of "how many vertices can a
//! disjoint union of catalog members have while every degree class stays
//! below `k`".

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::canon::canonical_form;
use crate::enumeration::{Catalog, CatalogEntry};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6;
use crate::invariants::{profile, regular_vector, Mode};

pub type Rational = BigRational;

/// `"num/den"`, also for integers.
pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| Rational::new(n, d))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpInstance {
    pub mode: Mode,
    /// `|H|` per column.
    pub objective: Vec<i64>,
    /// One row per degree `p`, one entry per column.
    pub rows: Vec<Vec<i64>>,
    pub rhs: Vec<Rational>,
}

impl LpInstance {
    pub fn columns(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    /// Basic variables at the optimum; indices `>= columns` are slacks.
    pub basis: Vec<usize>,
}

pub fn build_lp(catalog: &Catalog, mode: Mode) -> Result<LpInstance> {
    if mode == Mode::Regular {
        return Err(Error::UnsupportedMode("regular"));
    }
    let mut rows = vec![Vec::with_capacity(catalog.len()); catalog.d + 1];
    let mut objective = Vec::with_capacity(catalog.len());
    for (i, e) in catalog.entries.iter().enumerate() {
        let p = e.profile.as_ref().ok_or(Error::Unannotated(i))?;
        let coef = p.coefficients(mode)?;
        if coef.len() != rows.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), found: coef.len() });
        }
        for (row, &a) in rows.iter_mut().zip(coef) {
            row.push(a as i64);
        }
        objective.push(e.order as i64);
    }
    let rhs = vec![Rational::one(); catalog.d + 1];
    Ok(LpInstance { mode, objective, rows, rhs })
}

/// Primal simplex on a dense tableau with Bland's rule. The slack basis is
/// feasible because the right-hand side is non-negative.
pub fn solve_exact(lp: &LpInstance) -> Result<LpSolution> {
    let m = lp.rows.len();
    let n = lp.columns();
    for j in 0..n {
        if lp.objective[j] > 0 && lp.rows.iter().all(|row| row[j] <= 0) {
            return Err(Error::Unbounded(j));
        }
    }
    let width = n + m;
    let zero = Rational::zero();
    let mut tab: Vec<Vec<Rational>> = lp
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut t: Vec<Rational> = row.iter().map(|&a| Rational::from_integer(a.into())).collect();
            t.extend((0..m).map(|s| if s == i { Rational::one() } else { zero.clone() }));
            t
        })
        .collect();
    let mut rhs = lp.rhs.clone();
    // reduced costs c_j - z_j
    let mut reduced: Vec<Rational> = lp
        .objective
        .iter()
        .map(|&c| Rational::from_integer(c.into()))
        .chain(std::iter::repeat_n(zero.clone(), m))
        .collect();
    let mut value = zero.clone();
    let mut basis: Vec<usize> = (n..width).collect();

    while let Some(enter) = reduced.iter().position(|r| r.is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &rhs[i] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else { return Err(Error::Unbounded(enter)) };

        let pivot = tab[row][enter].clone();
        for x in tab[row].iter_mut() {
            *x /= &pivot;
        }
        rhs[row] /= &pivot;
        let prow = tab[row].clone();
        let prhs = rhs[row].clone();
        for i in 0..m {
            if i != row && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for (x, p) in tab[i].iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
                rhs[i] -= &f * &prhs;
            }
        }
        let f = reduced[enter].clone();
        for (x, p) in reduced.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
        value += &f * &prhs;
        basis[row] = enter;
    }

    let mut primal = vec![zero.clone(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            primal[b] = rhs[i].clone();
        }
    }
    let dual = (0..m).map(|i| -reduced[n + i].clone()).collect();
    Ok(LpSolution { value, primal, dual, basis })
}

/// Independent certificate check: primal and dual feasibility and equal
/// objectives, all in exact arithmetic.
pub fn check_solution(lp: &LpInstance, sol: &LpSolution) -> bool {
    let int = |a: i64| Rational::from_integer(a.into());
    if sol.primal.len() != lp.columns() || sol.dual.len() != lp.rows.len() {
        return false;
    }
    let primal_ok = sol.primal.iter().all(|x| !x.is_negative())
        && lp.rows.iter().zip(&lp.rhs).all(|(row, b)| {
            row.iter().zip(&sol.primal).map(|(&a, x)| int(a) * x).sum::<Rational>() <= *b
        });
    let dual_ok = sol.dual.iter().all(|y| !y.is_negative())
        && (0..lp.columns()).all(|j| {
            lp.rows.iter().zip(&sol.dual).map(|(row, y)| int(row[j]) * y).sum::<Rational>() >= int(lp.objective[j])
        });
    let primal_value: Rational = lp.objective.iter().zip(&sol.primal).map(|(&c, x)| int(c) * x).sum();
    let dual_value: Rational = lp.rhs.iter().zip(&sol.dual).map(|(b, y)| b * y).sum();
    primal_ok && dual_ok && primal_value == sol.value && dual_value == sol.value
}

/// A weighted mix of connected components. Weight `w` means `w (k-1)` copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub parts: Vec<(CatalogEntry, Rational)>,
    pub ratio: Rational,
}

impl Construction {
    /// Build from explicit graphs, relabelled canonically.
    pub fn from_graphs(parts: &[(Graph, Rational)]) -> Result<Self> {
        let mut out = Vec::with_capacity(parts.len());
        for (g, w) in parts {
            let cg = canonical_form(g)?.graph;
            let entry = CatalogEntry { g6: graph6::encode(&cg), order: cg.order(), graph: cg, profile: None };
            out.push((entry, w.clone()));
        }
        let ratio = out.iter().map(|(e, w)| w * Rational::from_integer(e.order.into())).sum();
        Ok(Construction { parts: out, ratio })
    }

    /// Least common multiple of the weight denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.parts.iter().fold(BigInt::one(), |l, (_, w)| l.lcm(w.denom()))
    }

    pub fn multiplicities(&self, k: u64) -> Result<Vec<u64>> {
        if k == 0 {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        let lcm = self.denominator_lcm();
        let km1 = BigInt::from(k - 1);
        if !km1.is_multiple_of(&lcm) {
            let lcm = lcm.to_u64().unwrap_or(u64::MAX);
            return Err(Error::Divisibility { km1: k - 1, lcm, smallest_k: lcm + 1 });
        }
        self.parts
            .iter()
            .map(|(_, w)| {
                let m = w * Rational::from_integer(km1.clone());
                m.to_integer().to_u64().ok_or_else(|| Error::Precondition("negative or huge weight".into()))
            })
            .collect()
    }
}

pub fn extract_construction(solution: &LpSolution, catalog: &Catalog) -> Construction {
    let parts: Vec<_> = solution
        .primal
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_positive())
        .map(|(j, x)| (catalog.entries[j].clone(), x.clone()))
        .collect();
    let ratio = parts.iter().map(|(e, w)| w * Rational::from_integer(e.order.into())).sum();
    Construction { parts, ratio }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub k: u64,
    pub mode: Mode,
    /// `(graph6, copies)` per part.
    pub multiplicities: Vec<(String, u64)>,
    /// Per degree `p`: the largest number of degree-`p` vertices (under the
    /// mode's rule) over induced subgraphs of the realised union.
    pub sums: Vec<u64>,
    pub total_order: u64,
    pub expected_order: Rational,
    pub passed: bool,
}

/// Recompute every component's coefficients from its graph6 and check that
/// no degree class reaches `k` in the union with `weight (k-1)` copies each.
pub fn verify_construction(c: &Construction, k: u64, mode: Mode) -> Result<VerificationReport> {
    let mults = c.multiplicities(k)?;
    let graphs = c
        .parts
        .iter()
        .map(|(e, _)| graph6::decode(&e.g6))
        .collect::<Result<Vec<_>>>()?;
    let d = graphs.iter().map(Graph::max_degree).max().unwrap_or(0);
    let vectors = graphs
        .iter()
        .map(|g| match mode {
            Mode::Regular => regular_vector(g, d),
            _ => profile(g, d).map(|p| if mode == Mode::Rep { p.r } else { p.c }),
        })
        .collect::<Result<Vec<_>>>()?;
    let sums: Vec<u64> = (0..=d)
        .map(|p| vectors.iter().zip(&mults).map(|(v, &m)| v[p] as u64 * m).sum())
        .collect();
    let total_order: u64 = graphs.iter().zip(&mults).map(|(g, &m)| g.order() as u64 * m).sum();
    let expected_order = &c.ratio * Rational::from_integer(BigInt::from(k - 1));
    let passed = sums.iter().all(|&s| s < k) && Rational::from_integer(total_order.into()) == expected_order;
    Ok(VerificationReport {
        k,
        mode,
        multiplicities: c.parts.iter().map(|(e, _)| e.g6.clone()).zip(mults).collect(),
        sums,
        total_order,
        expected_order,
        passed,
    })
}

/// The disjoint union with `weight (k-1)` copies of each part.
pub fn realize(c: &Construction, k: u64) -> Result<Graph> {
    let mults = c.multiplicities(k)?;
    Graph::disjoint_union(c.parts.iter().zip(mults).map(|((e, _), m)| (&e.graph, m as usize)))
}
