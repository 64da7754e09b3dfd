use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use repx::certify::{
    certify_maxrep, certify_regular_general, certify_rep, check_certificate, Certificate, Infeasible,
};
use repx::enumeration::{annotate, enumerate_connected, read_catalog, to_text, Catalog, Enumerator};
use repx::extremal::{compute_value, realize_multiset, search_extremal, witness_parts};
use repx::invariants::{
    max_induced_repetition, max_induced_repetition_composed, profile, regular_vector, EXHAUSTIVE_LIMIT,
};
use repx::lp::{build_lp, check_solution, extract_construction, rational_string, solve_exact, verify_construction};
use repx::random::{default_epsilon, experiment, trial_graph, Model, ModelParams};
use repx::{graph6, Exactness, Graph, Mode};

#[derive(Parser, Serialize)]
#[command(name = "repx", version, about = "Degree-repetition invariants of induced subgraphs")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Master seed for every randomized path.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
enum Command {
    /// Enumerate connected graphs of bounded order and degree into a catalog file.
    Enum(EnumArgs),
    /// Solve the component-mix linear program over a catalog.
    Lp(LpArgs),
    /// Run the peeling certifiers on graphs from a graph6 file.
    Certify(CertifyArgs),
    /// Exact extremal values for small parameters.
    Exact(ExactArgs),
    /// Sample the non-uniform random model and G(n, p).
    Sample(SampleArgs),
    /// Invariants of a single graph.
    Invariants(InvariantsArgs),
}

#[derive(Args, Serialize)]
struct EnumArgs {
    #[arg(long)]
    max_order: usize,
    #[arg(long)]
    max_degree: usize,
    /// Output file; a bare file name goes into the cache directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LpArgs {
    /// Catalog file; a bare file name is looked up in the cache directory.
    #[arg(long)]
    catalog: PathBuf,
    #[arg(long, value_parser = parse_lp_mode)]
    mode: Mode,
    /// Build the catalog if the file does not exist.
    #[arg(long)]
    build_missing: bool,
    /// Order bound for --build-missing (default: parsed from d<r>_<d>.repcat).
    #[arg(long)]
    max_order: Option<usize>,
    /// Degree bound for --build-missing (default: parsed from d<r>_<d>.repcat).
    #[arg(long)]
    max_degree: Option<usize>,
    /// Also realise the optimal mix with weight (k-1) copies and re-check it.
    #[arg(long)]
    verify_k: Option<u64>,
}

#[derive(Args, Serialize)]
struct CertifyArgs {
    /// File with one graph6 string per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    mode: Mode,
    /// Same as --format json.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Serialize)]
struct ExactArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    mode: Mode,
    /// Only decide whether an n-vertex witness exists.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModelArg {
    Nonuniform,
    Gnp,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    /// Defaults to 1 - sqrt(2)/4.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Model whose graphs are written by --dump.
    #[arg(long, value_enum, default_value_t = ModelArg::Nonuniform)]
    model: ModelArg,
    /// Edge probability of the G(n, p) comparison model.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Allow n above the exact limit; values become lower bounds.
    #[arg(long)]
    heuristic: bool,
    /// Write the sampled graphs as graph6, one per trial.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct InvariantsArgs {
    #[arg(long)]
    g6: String,
    /// Largest degree in the profile vectors (default: maximum degree).
    #[arg(long)]
    dmax: Option<usize>,
}

fn parse_lp_mode(s: &str) -> Result<Mode, String> {
    match s.parse()? {
        Mode::Regular => Err("the linear program supports rep and maxrep only".into()),
        m => Ok(m),
    }
}

enum Failure {
    /// Exit 1; an optional report still goes to stdout.
    Domain(String, Option<Report>),
    /// Exit 2.
    Usage(String),
}

impl From<repx::Error> for Failure {
    fn from(e: repx::Error) -> Self {
        Failure::Domain(e.to_string(), None)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string(), None)
    }
}

struct Report {
    json: Value,
    csv: Option<String>,
}

type Outcome = Result<Report, Failure>;

fn cache_dir() -> PathBuf {
    std::env::var_os("REPX_CACHE_DIR").map_or_else(|| PathBuf::from(".repx-cache"), PathBuf::from)
}

/// Bare file names live in the cache directory; anything with a directory
/// component is used as given.
fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() && path.components().count() == 1 {
        cache_dir().join(path)
    } else {
        path.to_path_buf()
    }
}

fn parse_catalog_name(path: &Path) -> Option<(usize, usize)> {
    let stem = path.file_name()?.to_str()?.strip_suffix(".repcat")?.strip_prefix('d')?;
    let (r, d) = stem.split_once('_')?;
    Some((r.parse().ok()?, d.parse().ok()?))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn counts_by_order(catalog: &Catalog) -> Vec<usize> {
    let mut counts = vec![0; catalog.r];
    for e in &catalog.entries {
        counts[e.order - 1] += 1;
    }
    counts
}

fn build_catalog(path: &Path, r: usize, d: usize) -> Result<(Catalog, String), Failure> {
    let catalog = annotate(enumerate_connected(r, d)?)?;
    let text = to_text(&catalog)?;
    write_text(path, &text)?;
    Ok((catalog, text))
}

fn header_sha(text: &str) -> &str {
    text.lines().next().and_then(|h| h.rsplit_once("sha=")).map_or("", |(_, s)| s)
}

fn run_enum(args: &EnumArgs) -> Outcome {
    let name = PathBuf::from(format!("d{}_{}.repcat", args.max_order, args.max_degree));
    let path = resolve(args.out.as_deref().unwrap_or(&name));
    let (catalog, text) = build_catalog(&path, args.max_order, args.max_degree)?;
    let counts = counts_by_order(&catalog);
    let csv = counts.iter().enumerate().fold("order,count\n".to_string(), |mut s, (i, c)| {
        writeln!(s, "{},{c}", i + 1).unwrap();
        s
    });
    Ok(Report {
        json: json!({
            "catalog": {
                "path": path,
                "max_order": catalog.r,
                "max_degree": catalog.d,
                "count": catalog.len(),
                "sha256": header_sha(&text),
                "counts_by_order": counts,
            }
        }),
        csv: Some(csv),
    })
}

fn rationals(v: &[repx::Rational]) -> Vec<String> {
    v.iter().map(rational_string).collect()
}

fn run_lp(args: &LpArgs) -> Outcome {
    let path = resolve(&args.catalog);
    let catalog = if path.exists() {
        read_catalog(&path)?
    } else if args.build_missing {
        let parsed = parse_catalog_name(&path);
        let r = args.max_order.or(parsed.map(|p| p.0));
        let d = args.max_degree.or(parsed.map(|p| p.1));
        let (Some(r), Some(d)) = (r, d) else {
            return Err(Failure::Usage(
                "--build-missing needs --max-order and --max-degree or a d<r>_<d>.repcat file name".into(),
            ));
        };
        build_catalog(&path, r, d)?.0
    } else {
        return Err(Failure::Domain(
            format!("catalog {} not found (pass --build-missing to create it)", path.display()),
            None,
        ));
    };
    let lp = build_lp(&catalog, args.mode)?;
    let sol = solve_exact(&lp)?;
    let verified = check_solution(&lp, &sol);
    let construction = extract_construction(&sol, &catalog);
    let support: Vec<Value> = construction
        .parts
        .iter()
        .map(|(e, w)| {
            let coef = e.profile().expect("catalog is annotated").coefficients(args.mode).expect("lp mode");
            json!({"g6": e.g6, "order": e.order, "weight": rational_string(w), "coefficients": coef})
        })
        .collect();
    let mut csv = String::from("g6,order,weight,coefficients\n");
    for s in &support {
        let coef: Vec<String> = s["coefficients"].as_array().unwrap().iter().map(Value::to_string).collect();
        writeln!(csv, "{},{},{},{}", s["g6"].as_str().unwrap(), s["order"], s["weight"].as_str().unwrap(), coef.join(";"))
            .unwrap();
    }
    let mut json = json!({
        "catalog": {"path": path, "max_order": catalog.r, "max_degree": catalog.d, "count": catalog.len()},
        "mode": args.mode,
        "value": rational_string(&sol.value),
        "dual": rationals(&sol.dual),
        "duality_verified": verified,
        "support": support,
    });
    if let Some(k) = args.verify_k {
        let rep = verify_construction(&construction, k, args.mode)?;
        json["verification"] = json!({
            "k": rep.k,
            "multiplicities": rep.multiplicities.iter().map(|(g, m)| json!({"g6": g, "copies": m})).collect::<Vec<_>>(),
            "sums": rep.sums,
            "total_order": rep.total_order,
            "expected_order": rational_string(&rep.expected_order),
            "passed": rep.passed,
        });
    }
    if !verified {
        return Err(Failure::Domain("duality certificate failed to verify".into(), Some(Report { json, csv: Some(csv) })));
    }
    Ok(Report { json, csv: Some(csv) })
}

fn certificate_json(c: &Certificate) -> Value {
    json!({"subset": c.subset.to_vec(), "degree": c.degree, "count": c.count, "mode": c.mode})
}

fn certify_one(g: &Graph, k: usize, mode: Mode) -> Result<Certificate, Infeasible> {
    match mode {
        Mode::Rep => certify_rep(g, k),
        Mode::MaxRep => certify_maxrep(g, k),
        Mode::Regular => certify_regular_general(g, k),
    }
}

fn run_certify(args: &CertifyArgs) -> Outcome {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Domain(format!("{}: {e}", args.input.display()), None))?;
    let mut results = Vec::new();
    let mut csv = String::from("line,g6,status,degree,count\n");
    let mut infeasible = 0;
    for (i, line) in text.lines().enumerate() {
        let g6 = line.trim().trim_start_matches(">>graph6<<");
        if g6.is_empty() {
            continue;
        }
        let g = graph6::decode(g6).map_err(|e| Failure::Domain(format!("line {}: {e}", i + 1), None))?;
        let mut entry = json!({"line": i + 1, "g6": g6, "order": g.order(), "max_degree": g.max_degree()});
        match certify_one(&g, args.k, args.mode) {
            Ok(cert) => {
                let check = check_certificate(&g, &cert);
                entry["status"] = json!("certified");
                entry["certificate"] = certificate_json(&cert);
                entry["check"] = match &check {
                    Ok(()) => json!({"reason": "ok"}),
                    Err(f) => serde_json::to_value(f).unwrap(),
                };
                writeln!(csv, "{},{g6},certified,{},{}", i + 1, cert.degree, cert.count).unwrap();
                if check.is_err() {
                    infeasible += 1;
                }
            }
            Err(inf) => {
                infeasible += 1;
                entry["status"] = json!("infeasible");
                entry["reason"] = json!(inf.reason);
                entry["best_effort"] = inf.best_effort.as_ref().map_or(Value::Null, certificate_json);
                writeln!(csv, "{},{g6},infeasible,,", i + 1).unwrap();
            }
        }
        results.push(entry);
    }
    let report = Report { json: json!({"k": args.k, "mode": args.mode, "results": results}), csv: Some(csv) };
    if infeasible > 0 {
        return Err(Failure::Domain(format!("{infeasible} graph(s) not certified"), Some(report)));
    }
    Ok(report)
}

fn run_exact(args: &ExactArgs) -> Outcome {
    if let Some(n) = args.n {
        if n > repx::enumeration::MAX_ORDER {
            return Err(Failure::Domain(format!("n = {n} exceeds {}", repx::enumeration::MAX_ORDER), None));
        }
        let mut en = Enumerator::new(args.d);
        while en.max_order() < n {
            en.next_level();
        }
        let catalog = en.catalog(n);
        let found = search_extremal(&catalog, args.k, n, args.mode)?;
        let realized = found.as_ref().map(|w| realize_multiset(w)).transpose()?;
        let json = json!({
            "k": args.k,
            "d": args.d,
            "mode": args.mode,
            "n": n,
            "found": found.is_some(),
            "witness": found.as_deref().map(witness_parts),
            "realized_g6": realized.as_ref().map(graph6::encode),
        });
        let csv = format!("n,found\n{n},{}\n", found.is_some());
        return Ok(Report { json, csv: Some(csv) });
    }
    let r = compute_value(args.k, args.d, args.mode)?;
    let realized = r.realize()?;
    let csv = r.table.iter().fold("n,found\n".to_string(), |mut s, (n, f)| {
        writeln!(s, "{n},{f}").unwrap();
        s
    });
    Ok(Report {
        json: json!({
            "k": r.k,
            "d": r.d,
            "mode": r.mode,
            "value": r.value,
            "exact": r.exactness == Exactness::Exact,
            "table": r.table.iter().map(|(n, f)| json!({"n": n, "found": f})).collect::<Vec<_>>(),
            "witness": witness_parts(&r.witness),
            "realized_g6": graph6::encode(&realized),
            "brute_force_checked": r.brute_force_checked,
        }),
        csv: Some(csv),
    })
}

fn run_sample(args: &SampleArgs, seed: u64) -> Outcome {
    let params = ModelParams { n: args.n, epsilon: args.epsilon.unwrap_or_else(default_epsilon), seed };
    let report = experiment(&params, args.trials, args.p, !args.heuristic)?;
    if let Some(path) = &args.dump {
        let model = match args.model {
            ModelArg::Nonuniform => Model::Nonuniform,
            ModelArg::Gnp => Model::Gnp,
        };
        let mut text = String::new();
        for t in 0..args.trials {
            writeln!(text, "{}", graph6::encode(&trial_graph(&params, args.p, model, t as u64)?)).unwrap();
        }
        write_text(path, &text)?;
    }
    let endpoint_check = (args.epsilon.is_none() && args.n > 0).then(|| params.check_default_endpoints().is_ok());
    let mut csv = String::from("trial,nonuniform,gnp\n");
    for (t, (a, b)) in report.nonuniform.values.iter().zip(&report.gnp.values).enumerate() {
        writeln!(csv, "{t},{a},{b}").unwrap();
    }
    let weights = if args.n > 0 { json!({"p_1": params.p(1), "p_n": params.p(args.n)}) } else { Value::Null };
    let mut json = serde_json::to_value(&report).expect("report serialises");
    json["weights"] = weights;
    json["endpoint_check"] = json!(endpoint_check);
    Ok(Report { json, csv: Some(csv) })
}

fn induced_json(g: &Graph, mode: Mode) -> Result<Value, Failure> {
    let (value, w, exact) = if g.order() <= EXHAUSTIVE_LIMIT {
        let (v, w) = max_induced_repetition(g, mode)?;
        (v, w, true)
    } else {
        let (v, w, e) = max_induced_repetition_composed(g, mode)?;
        (v, w, e == Exactness::Exact)
    };
    Ok(json!({"value": value, "degree": w.degree, "subset": w.subset.to_vec(), "exact": exact}))
}

fn run_invariants(args: &InvariantsArgs) -> Outcome {
    let g = graph6::decode(args.g6.trim())?;
    let dmax = args.dmax.unwrap_or(g.max_degree());
    let seq: Vec<[usize; 2]> = g.degree_sequence().counts.into_iter().map(|(d, c)| [d, c]).collect();
    let (prof, reg) = if g.order() <= EXHAUSTIVE_LIMIT {
        let p = profile(&g, dmax)?;
        (json!({"dmax": p.dmax, "r": p.r, "c": p.c}), json!(regular_vector(&g, dmax)?))
    } else {
        (Value::Null, Value::Null)
    };
    let json = json!({
        "g6": args.g6.trim(),
        "order": g.order(),
        "edges": g.edge_count(),
        "max_degree": g.max_degree(),
        "degree_sequence": seq,
        "rep": g.rep(),
        "maxrep": g.maxrep(),
        "profile": prof,
        "regular_vector": reg,
        "induced": {
            "rep": induced_json(&g, Mode::Rep)?,
            "maxrep": induced_json(&g, Mode::MaxRep)?,
            "regular": induced_json(&g, Mode::Regular)?,
        },
    });
    let csv = match (json["profile"]["r"].as_array(), json["profile"]["c"].as_array()) {
        (Some(r), Some(c)) => Some(r.iter().zip(c).enumerate().fold("p,r,c\n".to_string(), |mut s, (p, (r, c))| {
            writeln!(s, "{p},{r},{c}").unwrap();
            s
        })),
        _ => None,
    };
    Ok(Report { json, csv })
}

/// `a.b[2].c=value` lines for `--format text`.
fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => writeln!(out, "{prefix}={s}").unwrap(),
        other => writeln!(out, "{prefix}={other}").unwrap(),
    }
}

fn render(format: Format, name: &str, config: Value, report: Report) -> Result<String, Failure> {
    let mut full = json!({"config": config});
    if let Value::Object(map) = report.json {
        full.as_object_mut().unwrap().extend(map);
    }
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&full).unwrap() + "\n"),
        Format::Text => {
            let mut out = String::new();
            flatten("", &full, &mut out);
            Ok(out)
        }
        Format::Csv => match report.csv {
            Some(csv) => Ok(csv),
            None => Err(Failure::Usage(format!("--format csv is not available for `{name}` here"))),
        },
    }
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Command::Certify(a) = &cli.command {
        if a.json {
            cli.format = Format::Json;
        }
    }
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("repx: {e}");
            return ExitCode::from(2);
        }
    }
    let config = json!({
        "command": cli.command,
        "seed": cli.seed,
        "threads": cli.threads,
        "format": cli.format,
        "cache_dir": cache_dir(),
    });
    let (name, outcome) = match &cli.command {
        Command::Enum(a) => ("enum", run_enum(a)),
        Command::Lp(a) => ("lp", run_lp(a)),
        Command::Certify(a) => ("certify", run_certify(a)),
        Command::Exact(a) => ("exact", run_exact(a)),
        Command::Sample(a) => ("sample", run_sample(a, cli.seed)),
        Command::Invariants(a) => ("invariants", run_invariants(a)),
    };
    let (report, code, message) = match outcome {
        Ok(r) => (Some(r), 0, None),
        Err(Failure::Domain(msg, report)) => (report, 1, Some(msg)),
        Err(Failure::Usage(msg)) => {
            eprintln!("repx {name}: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(report) = report {
        match render(cli.format, name, config, report) {
            Ok(out) => print!("{out}"),
            Err(Failure::Usage(msg)) => {
                eprintln!("repx {name}: {msg}");
                return ExitCode::from(2);
            }
            Err(Failure::Domain(msg, _)) => {
                eprintln!("repx {name}: {msg}");
                return ExitCode::from(1);
            }
        }
    }
    if let Some(msg) = message {
        eprintln!("repx {name}: {msg}");
    }
    ExitCode::from(code)
}
