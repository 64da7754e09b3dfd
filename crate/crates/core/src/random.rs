//! The inhomogeneous random graph model and a small experiment harness.
//!
//! Vertex `i` (1-based) carries weight
//! `p_i = (1-ε)/√2 + i(4+√2)ε/(7n)` and the pair `{i, j}` is an edge with
//! probability `p_i p_j`. At the default `ε = 1 - √2/4` this is
//! `p_i = 1/4 + i/(2n)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::{max_induced_repetition, max_induced_repetition_composed, Exactness, Mode};

/// Largest order for which experiments compute exact values.
pub const EXPERIMENT_EXACT_LIMIT: usize = 16;

pub fn default_epsilon() -> f64 {
    1.0 - std::f64::consts::SQRT_2 / 4.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    pub n: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n: usize, seed: u64) -> Self {
        ModelParams { n, epsilon: default_epsilon(), seed }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// `p_i` for `i` in `1..=n`.
    pub fn p(&self, i: usize) -> f64 {
        let (n, e) = (self.n as f64, self.epsilon);
        (1.0 - e) / std::f64::consts::SQRT_2 + i as f64 * (4.0 + std::f64::consts::SQRT_2) * e / (7.0 * n)
    }

    /// Weights of vertices `0..n` (vertex `v` has `p_{v+1}`), validated to lie in (0, 1).
    pub fn weights(&self) -> Result<Vec<f64>> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Model(format!("epsilon {} outside (0, 1]", self.epsilon)));
        }
        let w: Vec<f64> = (1..=self.n).map(|i| self.p(i)).collect();
        if let Some((i, p)) = w.iter().enumerate().find(|(_, &p)| !(p > 0.0 && p < 1.0)) {
            return Err(Error::Model(format!("p_{} = {p} outside (0, 1)", i + 1)));
        }
        Ok(w)
    }

    /// Compare `p_1` and `p_n` against `1/4 + i/(2n)` computed from exact
    /// integers. Only meaningful at the default ε.
    pub fn check_default_endpoints(&self) -> Result<()> {
        for i in [1, self.n] {
            let exact = (self.n + 2 * i) as f64 / (4 * self.n) as f64;
            let got = self.p(i);
            if (got - exact).abs() > 1e-12 {
                return Err(Error::Model(format!("p_{i} = {got}, expected {exact}")));
            }
        }
        Ok(())
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_with(rng: &mut impl Rng, n: usize, prob: impl Fn(usize, usize) -> f64) -> Graph {
    let mut g = Graph::empty(n);
    for j in 1..n {
        for i in 0..j {
            if rng.gen::<f64>() < prob(i, j) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

pub fn sample_nonuniform(params: &ModelParams) -> Result<Graph> {
    let w = params.weights()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok(sample_with(&mut rng, params.n, |i, j| w[i] * w[j]))
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Model(format!("edge probability {p} outside [0, 1]")))
    }
}

pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_with(&mut rng, n, |_, _| p))
}

/// A graph with maximum degree at most `d`: pairs are tried in random
/// order and kept while both ends have room, stopping at a random edge budget.
pub fn sample_bounded_degree(n: usize, d: usize, rng: &mut impl Rng) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    pairs.shuffle(rng);
    let budget = rng.gen_range(0..=n * d / 2);
    let mut g = Graph::empty(n);
    let mut edges = 0;
    for (i, j) in pairs {
        if edges == budget {
            break;
        }
        if g.degree(i) < d && g.degree(j) < d {
            g.add_edge(i, j);
            edges += 1;
        }
    }
    g
}

/// A uniform-ish `d`-regular graph by the pairing model with restarts.
pub fn sample_regular(n: usize, d: usize, rng: &mut impl Rng) -> Result<Graph> {
    if n * d % 2 == 1 || d >= n.max(1) {
        return Err(Error::Model(format!("no {d}-regular graph on {n} vertices")));
    }
    'restart: loop {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        points.shuffle(rng);
        let mut g = Graph::empty(n);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || g.has_edge(u, v) {
                continue 'restart;
            }
            g.add_edge(u, v);
        }
        return Ok(g);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Nonuniform,
    Gnp,
}

/// The graph drawn for trial `t` of an experiment: ChaCha stream `2t` of the
/// master seed for the non-uniform model, `2t+1` for G(n, p).
pub fn trial_graph(params: &ModelParams, gnp_p: f64, model: Model, t: u64) -> Result<Graph> {
    match model {
        Model::Nonuniform => {
            let w = params.weights()?;
            Ok(sample_with(&mut trial_rng(params.seed, 2 * t), params.n, |i, j| w[i] * w[j]))
        }
        Model::Gnp => {
            check_p(gnp_p)?;
            Ok(sample_with(&mut trial_rng(params.seed, 2 * t + 1), params.n, |_, _| gnp_p))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelSummary {
    /// Maximum induced repetition per trial, in trial order.
    pub values: Vec<usize>,
    /// False when some value is only a lower bound.
    pub exact: bool,
    /// Minimum, lower quartile, median, upper quartile, maximum.
    pub quantiles: Option<[usize; 5]>,
}

impl ModelSummary {
    fn new(values: Vec<usize>, exact: bool) -> Self {
        let mut sorted = values.clone();
        sorted.sort_unstable();
        let quantiles = (!sorted.is_empty()).then(|| {
            let at = |q: usize| sorted[(sorted.len() - 1) * q / 4];
            [at(0), at(1), at(2), at(3), at(4)]
        });
        ModelSummary { values, exact, quantiles }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeFrequency {
    pub trials: usize,
    /// Largest |z| over all pairs and the pair attaining it (1-based).
    pub max_abs_z: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// Sum of z² over pairs with 0 < p < 1.
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub within_5_sigma: bool,
}

/// Sample `trials` graphs from the non-uniform model and compare each
/// pair's empirical edge frequency against `p_i p_j`.
pub fn edge_frequencies(params: &ModelParams, trials: usize) -> Result<EdgeFrequency> {
    let w = params.weights()?;
    let n = params.n;
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n * n],
            |mut acc, t| {
                let g = sample_with(&mut trial_rng(params.seed, 2 * t as u64), n, |i, j| w[i] * w[j]);
                for (i, j) in g.edges() {
                    acc[i * n + j] += 1;
                }
                acc
            },
        )
        .reduce(|| vec![0u64; n * n], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());

    let mut freq = EdgeFrequency {
        trials,
        max_abs_z: 0.0,
        worst_pair: None,
        chi_square: 0.0,
        degrees_of_freedom: 0,
        within_5_sigma: true,
    };
    if trials == 0 {
        return Ok(freq);
    }
    let t = trials as f64;
    for j in 1..n {
        for i in 0..j {
            let p = w[i] * w[j];
            let sd = (t * p * (1.0 - p)).sqrt();
            if sd == 0.0 {
                continue;
            }
            let z = (counts[i * n + j] as f64 - t * p) / sd;
            freq.chi_square += z * z;
            freq.degrees_of_freedom += 1;
            if z.abs() > freq.max_abs_z {
                freq.max_abs_z = z.abs();
                freq.worst_pair = Some((i + 1, j + 1));
            }
        }
    }
    freq.within_5_sigma = freq.max_abs_z <= 5.0;
    Ok(freq)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub params: ModelParams,
    pub trials: usize,
    pub gnp_p: f64,
    pub nonuniform: ModelSummary,
    pub gnp: ModelSummary,
    pub edge_frequency: EdgeFrequency,
}

/// Maximum induced repetition of `trials` samples from both models at the
/// same order. Trials are drawn by [`trial_graph`], so the report does not
/// depend on the number of worker threads.
pub fn experiment(params: &ModelParams, trials: usize, gnp_p: f64, exact: bool) -> Result<ExperimentReport> {
    params.weights()?;
    check_p(gnp_p)?;
    let n = params.n;
    if exact && n > EXPERIMENT_EXACT_LIMIT {
        return Err(Error::SizeLimit { what: "exact experiment", n, limit: EXPERIMENT_EXACT_LIMIT });
    }
    let measure = |g: &Graph| -> Result<(usize, bool)> {
        if exact {
            Ok((max_induced_repetition(g, Mode::Rep)?.0, true))
        } else {
            let (v, _, e) = max_induced_repetition_composed(g, Mode::Rep)?;
            Ok((v, e == Exactness::Exact))
        }
    };
    let rows: Vec<((usize, bool), (usize, bool))> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let a = trial_graph(params, gnp_p, Model::Nonuniform, t as u64)?;
            let b = trial_graph(params, gnp_p, Model::Gnp, t as u64)?;
            Ok((measure(&a)?, measure(&b)?))
        })
        .collect::<Result<_>>()?;
    let (a, b): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let summary = |v: Vec<(usize, bool)>| {
        let exact = v.iter().all(|&(_, e)| e);
        ModelSummary::new(v.into_iter().map(|(x, _)| x).collect(), exact)
    };
    Ok(ExperimentReport {
        params: params.clone(),
        trials,
        gnp_p,
        nonuniform: summary(a),
        gnp: summary(b),
        edge_frequency: edge_frequencies(params, trials)?,
    })
}
