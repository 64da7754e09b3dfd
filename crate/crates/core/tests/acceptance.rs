//! One check per acceptance criterion. Each prints a PASS/FAIL line on
//! stderr (uncaptured) and the test fails if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use repx::certify::{certify_maxrep, certify_rep, check_certificate, check_partition, lovasz_partition, regular_in_deg2};
use repx::enumeration::{annotate, enumerate_connected, to_text, D10_3_COUNT};
use repx::extremal::compute_value;
use repx::invariants::{
    max_induced_regular_order, max_induced_repetition, profile, regular_vector, union_max, union_repetition,
};
use repx::lp::{build_lp, check_solution, extract_construction, ratio, solve_exact, verify_construction, Construction};
use repx::random::{edge_frequencies, experiment, sample_bounded_degree, ModelParams};
use repx::{Graph, Mode};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn lp_maxrep_d10() -> Check {
    let catalog = annotate(enumerate_connected(10, 3).map_err(err)?).map_err(err)?;
    ensure(catalog.len() == D10_3_COUNT, || format!("|D(10,3)| = {}", catalog.len()))?;
    let lp = build_lp(&catalog, Mode::MaxRep).map_err(err)?;
    let sol = solve_exact(&lp).map_err(err)?;
    ensure(check_solution(&lp, &sol), || "duality certificate does not verify".into())?;
    ensure(sol.value == ratio(53, 24), || format!("optimum {}", sol.value))?;
    let c = extract_construction(&sol, &catalog);
    let mut got: Vec<(usize, BigRational, Vec<u32>)> = c
        .parts
        .iter()
        .map(|(e, w)| (e.order, w.clone(), e.profile().unwrap().c.clone()))
        .collect();
    got.sort();
    let mut want = vec![
        (1, ratio(7, 24), vec![1, 0, 0, 0]),
        (6, ratio(1, 24), vec![2, 4, 3, 2]),
        (8, ratio(1, 24), vec![3, 4, 5, 2]),
        (8, ratio(1, 6), vec![3, 4, 4, 5]),
    ];
    want.sort();
    ensure(got == want, || format!("support {got:?}"))?;
    let support: Vec<&str> = c.parts.iter().map(|(e, _)| e.g6.as_str()).collect();
    Ok(format!("value 53/24, support {support:?}"))
}

fn lp_rep_d6() -> Check {
    let catalog = annotate(enumerate_connected(6, 3).map_err(err)?).map_err(err)?;
    let lp = build_lp(&catalog, Mode::Rep).map_err(err)?;
    let sol = solve_exact(&lp).map_err(err)?;
    ensure(check_solution(&lp, &sol), || "duality certificate does not verify".into())?;
    ensure(sol.value >= ratio(13, 6), || format!("optimum {} < 13/6", sol.value))?;
    let w = ratio(1, 6);
    let c = Construction::from_graphs(&[
        (Graph::empty(1), w.clone()),
        (Graph::complete(2), w.clone()),
        (Graph::path(4), w.clone()),
        (Graph::prism(), w),
    ])
    .map_err(err)?;
    let rep = verify_construction(&c, 7, Mode::Rep).map_err(err)?;
    ensure(rep.passed && rep.sums == [6, 6, 6, 6] && rep.total_order == 13, || format!("{rep:?}"))?;
    Ok(format!("optimum {}, K1+K2+P4+Q at k = 7: sums {:?}, 13 vertices", sol.value, rep.sums))
}

fn exact_small_values() -> Check {
    let cases = [
        (3, 2, Mode::MaxRep, 4),
        (5, 2, Mode::MaxRep, 8),
        (4, 2, Mode::MaxRep, 5),
        (3, 1, Mode::Rep, 3),
        (3, 1, Mode::Regular, 3),
        (2, 0, Mode::Rep, 1),
        (2, 1, Mode::Rep, 1),
        (2, 2, Mode::Rep, 1),
        (2, 3, Mode::Rep, 1),
    ];
    for (k, d, mode, want) in cases {
        let r = compute_value(k, d, mode).map_err(err)?;
        ensure(r.value == want, || format!("({k},{d},{mode}) = {} want {want}", r.value))?;
    }
    Ok("h(3,2)=4 h(5,2)=8 h(4,2)=5 g(3,1)=f(3,1)=3 g(2,d)=1 for d<=3".into())
}

/// Largest regular induced subgraph by trying every vertex subset.
fn brute_regular_order(g: &Graph) -> usize {
    let rows: Vec<u64> = (0..g.order()).map(|v| g.row_mask(v)).collect();
    let mut best = 0;
    for mask in 1u64..(1u64 << g.order()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let first = mask.trailing_zeros() as usize;
        let d = (rows[first] & mask).count_ones();
        let mut rest = mask & (mask - 1);
        let mut regular = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if (rows[v] & mask).count_ones() != d {
                regular = false;
                break;
            }
            rest &= rest - 1;
        }
        if regular {
            best = size;
        }
    }
    best
}

fn deg2_tightness() -> Check {
    let g = Graph::disjoint_union([(&Graph::cycle(5), 2), (&Graph::path(4), 3)]).map_err(err)?;
    let (best, _) = max_induced_regular_order(&g).map_err(err)?;
    ensure(best == 10, || format!("largest regular induced subgraph has {best} vertices"))?;
    let start = Instant::now();
    let brute = brute_regular_order(&g);
    let secs = start.elapsed().as_secs_f64();
    ensure(brute == 10, || format!("brute force finds {brute} vertices"))?;
    ensure(secs <= 60.0, || format!("brute force took {secs:.1}s"))?;
    let h = Graph::disjoint_union([(&g, 1), (&Graph::empty(1), 1)]).map_err(err)?;
    let c = regular_in_deg2(&h, 11).map_err(err)?;
    ensure(c.count >= 11 && check_certificate(&h, &c).is_ok(), || format!("{c:?}"))?;
    Ok(format!("22 vertices: regular order 10 (2^22 subsets in {secs:.1}s); 23 vertices: certificate with {} vertices", c.count))
}

fn certifier_completeness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut total = 0;
    for k in 3..=10usize {
        for _ in 0..500 {
            let n = 5 * (k - 1) / 2 + 1;
            let g = sample_bounded_degree(n, 3, &mut rng);
            let c = certify_maxrep(&g, k).map_err(|e| format!("maxrep k={k} n={n}: {e}"))?;
            ensure(c.count >= k && check_certificate(&g, &c).is_ok(), || format!("maxrep k={k}: {c:?}"))?;

            let n = 12 * (k - 1) / 5 + 1;
            let g = sample_bounded_degree(n, 3, &mut rng);
            let c = certify_rep(&g, k).map_err(|e| format!("rep k={k} n={n}: {e}"))?;
            ensure(c.count >= k && check_certificate(&g, &c).is_ok(), || format!("rep k={k}: {c:?}"))?;
            total += 2;
        }
    }
    Ok(format!("{total} certificates, all checked"))
}

fn lovasz_partitions() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (d1, d2) in [(0, 1), (1, 1), (1, 2), (2, 2)] {
        for _ in 0..1000 {
            let n = rng.gen_range(1..=60);
            let g = sample_bounded_degree(n, d1 + d2 + 1, &mut rng);
            let p = lovasz_partition(&g, d1, d2).map_err(err)?;
            ensure(check_partition(&g, &p).is_ok(), || format!("({d1},{d2}) invalid partition"))?;
            ensure(p.moves <= p.initial_potential, || format!("{} moves > potential {}", p.moves, p.initial_potential))?;
        }
    }
    Ok("4000 partitions valid, moves within initial potential".into())
}

fn oracle_equivalence() -> Check {
    let mut graphs: Vec<Graph> = enumerate_connected(4, 3).map_err(err)?.entries.into_iter().map(|e| e.graph).collect();
    ensure(graphs.len() == 10, || format!("|D(4,3)| = {}", graphs.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.1..0.9);
        graphs.push(common::random_graph(&mut rng, n, p));
    }
    for g in &graphs {
        let d = g.max_degree();
        let (r, c, reg) = common::naive_vectors(g, d);
        let prof = profile(g, d).map_err(err)?;
        ensure(prof.r == r && prof.c == c, || format!("profile mismatch on {g:?}"))?;
        ensure(regular_vector(g, d).map_err(err)? == reg, || format!("regular vector mismatch on {g:?}"))?;
        let (rep, maxrep, regular) = common::naive_max(g);
        for (mode, want) in [(Mode::Rep, rep), (Mode::MaxRep, maxrep), (Mode::Regular, regular)] {
            let (got, w) = max_induced_repetition(g, mode).map_err(err)?;
            ensure(got == want && w.verify(g, mode), || format!("{mode} mismatch on {g:?}: {got} vs {want}"))?;
        }
    }
    for _ in 0..200 {
        let (a, b) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
        let ga = common::random_graph(&mut rng, a, 0.5);
        let gb = common::random_graph(&mut rng, b, 0.5);
        let u = Graph::disjoint_union([(&ga, 1), (&gb, 1)]).map_err(err)?;
        let d = u.max_degree();
        let (pa, pb) = (profile(&ga, d).map_err(err)?, profile(&gb, d).map_err(err)?);
        let (rep, maxrep, regular) = common::naive_max(&u);
        for (mode, want) in [(Mode::Rep, rep), (Mode::MaxRep, maxrep)] {
            let got = union_repetition(&[(&pa, 1), (&pb, 1)], mode).map_err(err)?;
            ensure(got == want, || format!("union {mode}: {got} vs {want}"))?;
        }
        let (ra, rb) = (regular_vector(&ga, d).map_err(err)?, regular_vector(&gb, d).map_err(err)?);
        let got = union_max(&[(&ra, 1), (&rb, 1)]).map_err(err)?;
        ensure(got == regular, || format!("union regular: {got} vs {regular}"))?;
    }
    Ok(format!("{} graphs and 200 unions agree with the subset-loop oracle", graphs.len()))
}

/// `a + b√2` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq)]
struct Sqrt2(BigRational, BigRational);

impl Sqrt2 {
    fn rat(q: BigRational) -> Self {
        Sqrt2(q, BigRational::zero())
    }
    fn add(&self, o: &Self) -> Self {
        Sqrt2(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn mul(&self, o: &Self) -> Self {
        let two = ratio(2, 1);
        Sqrt2(&self.0 * &o.0 + two * &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn div_sqrt2(&self) -> Self {
        Sqrt2(self.1.clone(), &self.0 / ratio(2, 1))
    }
}

fn sampler_checks() -> Check {
    // p_i in Q(√2) at the default ε = 1 - √2/4
    let n = 20i64;
    let one = Sqrt2::rat(BigRational::one());
    let eps = Sqrt2(BigRational::one(), ratio(-1, 4));
    let one_minus_eps = one.add(&Sqrt2::rat(ratio(-1, 1)).mul(&eps));
    for i in [1, n] {
        let slope = Sqrt2(ratio(4, 1), ratio(1, 1)).mul(&eps).mul(&Sqrt2::rat(ratio(i, 7 * n)));
        let p = one_minus_eps.div_sqrt2().add(&slope);
        let want = Sqrt2::rat(ratio(1, 4) + ratio(i, 2 * n));
        ensure(p == want, || format!("p_{i} = {p:?}"))?;
    }
    ensure(Sqrt2::rat(ratio(1, 4) + ratio(n, 2 * n)) == Sqrt2::rat(ratio(3, 4)), || "p_n".into())?;
    let params = ModelParams::new(n as usize, 11);
    params.check_default_endpoints().map_err(err)?;
    ensure((params.p(n as usize) - 0.75).abs() < 1e-12, || format!("float p_n = {}", params.p(n as usize)))?;

    let small = ModelParams::new(10, 31);
    let a = format!("{:?}", experiment(&small, 50, 0.5, true).map_err(err)?);
    let b = format!("{:?}", experiment(&small, 50, 0.5, true).map_err(err)?);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    let c = pool.install(|| experiment(&small, 50, 0.5, true).map(|r| format!("{r:?}"))).map_err(err)?;
    ensure(a == b && b == c, || "experiment reports differ between runs".into())?;

    let f = edge_frequencies(&params, 100_000).map_err(err)?;
    let p_value = 1.0 - ChiSquared::new(f.degrees_of_freedom as f64).map_err(err)?.cdf(f.chi_square);
    ensure(p_value > 1e-3, || format!("chi-square {} on {} df, p = {p_value}", f.chi_square, f.degrees_of_freedom))?;
    Ok(format!("p_n = 3/4 exactly; reports reproducible; chi-square p = {p_value:.3}"))
}

fn catalog_integrity() -> Check {
    let cat = enumerate_connected(6, 3).map_err(err)?;
    for n in 1..=6 {
        let ours: BTreeSet<_> =
            cat.entries.iter().filter(|e| e.order == n).map(|e| common::brute_key_of(&e.graph)).collect();
        let count = cat.entries.iter().filter(|e| e.order == n).count();
        let brute = common::brute_connected_classes(n, 3);
        ensure(ours == brute && count == brute.len(), || format!("D(6,3) differs at order {n}"))?;
    }
    let build = || annotate(enumerate_connected(10, 3)?).and_then(|c| to_text(&c));
    let a = build().map_err(err)?;
    let b = build().map_err(err)?;
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    let c = one.install(build).map_err(err)?;
    let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().map_err(err)?;
    let d = three.install(build).map_err(err)?;
    ensure(a == b && a == c && a == d, || "D(10,3) bytes differ between builds".into())?;
    Ok(format!("D(r,3), r <= 6 matches brute force; D(10,3) identical over 4 builds ({} bytes)", a.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("maxrep LP over D(10,3)", lp_maxrep_d10),
        ("rep LP over D(6,3) and the K1+K2+P4+Q mix", lp_rep_d6),
        ("exact small values", exact_small_values),
        ("degree-2 regular tightness", deg2_tightness),
        ("certifier completeness at thresholds", certifier_completeness),
        ("Lovász partitions", lovasz_partitions),
        ("oracle equivalence", oracle_equivalence),
        ("sampler determinism and marginals", sampler_checks),
        ("catalog integrity", catalog_integrity),
    ];
    let mut failed = Vec::new();
    let mut stderr = std::io::stderr();
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(detail) => format!("criterion {}: PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed.push(i + 1);
                format!("criterion {}: FAIL  {name} ({secs:.1}s): {detail}", i + 1)
            }
        };
        writeln!(stderr, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
