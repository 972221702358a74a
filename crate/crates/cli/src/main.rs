//! `jewelbox`: command-line front end for jewelbox-core.
//!
//! Every command prints one JSON document on stdout, headed by the command
//! and every parameter that influences the result. With `--out DIR` the same
//! document is written to `DIR/summary.json` next to the command's artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use jewelbox_core::bordmap::{check_commute, check_jacobians, check_nonzero, check_strata};
use jewelbox_core::complexes::{
    build_z, enumerate_v_ideal_edges, homology, sphericity_report, FlagComplex, VDecomposition,
};
use jewelbox_core::freegroup::Marking;
use jewelbox_core::graphs::{valid_graph_corpus, EdgeSet, Graph};
use jewelbox_core::jewel::{face_chains, make_schedule, vertices_oracle, FaceLattice, JewelPolytope};
use jewelbox_core::morse::{
    compare_link_with_z, marking_ball, random_marking, z_rho_escalating, ascending_link_escalating, MarkedRose,
};
use jewelbox_core::ExactJewel;

#[derive(Parser)]
#[command(name = "jewelbox", version, about = "Jewels, ideal-edge complexes and ascending links")]
struct Cli {
    /// Worker threads for the parallel parts.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a graph and list its cores, forests and maximal trees.
    Graph(GraphArgs),
    #[command(subcommand)]
    Jewel(JewelCmd),
    #[command(subcommand)]
    Complex(ComplexCmd),
    #[command(subcommand)]
    Morse(MorseCmd),
    #[command(subcommand)]
    Bordmap(BordmapCmd),
}

#[derive(Args, Serialize)]
struct GraphArgs {
    /// JSON file, or one of `looped-digon`, `theta`, `rose:N`.
    #[arg(long)]
    graph: String,
}

#[derive(Subcommand)]
enum JewelCmd {
    /// H- and V-representation, f-vector and face chains.
    Build(JewelArgs),
}

#[derive(Args, Serialize)]
struct JewelArgs {
    #[arg(long)]
    graph: String,
    /// Only list face chains of this codimension.
    #[arg(long)]
    codim: Option<usize>,
    #[arg(long)]
    skip_oracle: bool,
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Z(V) for sampled block decompositions.
    Zv(ZvArgs),
    /// Z(ρ) for a marked rose.
    Zrho(MarkingArgs),
    /// Reduced homology of a complex in JSON form.
    Homology(HomologyArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Source {
    Dotdata,
    Marking,
}

#[derive(Args, Serialize)]
struct ZvArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "dotdata")]
    source: Source,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    samples: usize,
}

#[derive(Args, Serialize)]
struct MarkingArgs {
    #[arg(long)]
    rank: Option<usize>,
    /// JSON list of petal images, e.g. '["ab","b"]'.
    #[arg(long)]
    marking: String,
}

#[derive(Args, Serialize)]
struct HomologyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    max_dim: Option<usize>,
}

#[derive(Subcommand)]
enum MorseCmd {
    /// Ascending link of marked roses, compared with Z(ρ).
    Asclink(AsclinkArgs),
}

#[derive(Args, Serialize)]
struct AsclinkArgs {
    #[arg(long)]
    rank: Option<usize>,
    /// JSON list of petal images; without it roses are sampled.
    #[arg(long)]
    marking: Option<String>,
    /// Largest word length for μ comparisons.
    #[arg(long, default_value_t = 24)]
    budget: usize,
    /// Every rose within this many Nielsen moves of the identity.
    #[arg(long)]
    radius: Option<usize>,
    /// Random roses, products of 2..=7 Nielsen moves.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum BordmapCmd {
    /// Run one of the bordification checks over a graph or the corpus.
    Check(BordArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum What {
    Nonzero,
    Commute,
    Jacobian,
    Strata,
}

#[derive(Args, Serialize)]
struct BordArgs {
    #[arg(long, value_enum)]
    what: What,
    /// Defaults to every valid graph with 2 to 5 edges.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure kinds, mapped to exit codes.
enum Fail {
    /// Unreadable or malformed input.
    Input(anyhow::Error),
    /// A check failed or could not be decided.
    Check(anyhow::Error),
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        Fail::Check(e)
    }
}

struct Outcome {
    result: Value,
    pass: bool,
    artifacts: Vec<(String, String)>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("JEWELBOX_LOG", "warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (name, params, run) = dispatch(&cli.cmd);
    let outcome = match run {
        Ok(o) => o,
        Err(Fail::Input(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
        Err(Fail::Check(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let doc = json!({
        "header": {
            "tool": "jewelbox",
            "version": env!("CARGO_PKG_VERSION"),
            "command": name,
            "params": params,
        },
        "status": if outcome.pass { "PASS" } else { "FAIL" },
        "result": outcome.result,
    });
    let text = serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n";
    print!("{text}");
    if let Some(dir) = &cli.out {
        if let Err(e) = write_artifacts(dir, &text, &outcome.artifacts) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dispatch(cmd: &Cmd) -> (&'static str, Value, Result<Outcome, Fail>) {
    fn p<T: Serialize>(a: &T) -> Value {
        serde_json::to_value(a).expect("arguments serialize")
    }
    match cmd {
        Cmd::Graph(a) => ("graph", p(a), cmd_graph(a)),
        Cmd::Jewel(JewelCmd::Build(a)) => ("jewel build", p(a), cmd_jewel(a)),
        Cmd::Complex(ComplexCmd::Zv(a)) => ("complex zv", p(a), cmd_zv(a)),
        Cmd::Complex(ComplexCmd::Zrho(a)) => ("complex zrho", p(a), cmd_zrho(a)),
        Cmd::Complex(ComplexCmd::Homology(a)) => ("complex homology", p(a), cmd_homology(a)),
        Cmd::Morse(MorseCmd::Asclink(a)) => ("morse asclink", p(a), cmd_asclink(a)),
        Cmd::Bordmap(BordmapCmd::Check(a)) => ("bordmap check", p(a), cmd_bordmap(a)),
    }
}

fn write_artifacts(dir: &Path, summary: &str, files: &[(String, String)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("summary.json"), summary)?;
    for (name, body) in files {
        fs::write(dir.join(name), body).with_context(|| format!("writing {name}"))?;
    }
    Ok(())
}

fn load_graph(src: &str) -> Result<Graph, Fail> {
    match src {
        "looped-digon" => return Ok(Graph::looped_digon()),
        "theta" => return Ok(Graph::theta()),
        _ => {}
    }
    if let Some(n) = src.strip_prefix("rose:") {
        let n: usize = n.parse().map_err(|_| Fail::Input(anyhow!("bad rose rank {n:?}")))?;
        if n == 0 || n > 32 {
            return Err(Fail::Input(anyhow!("rose rank must be between 1 and 32")));
        }
        return Ok(Graph::rose(n));
    }
    let text = fs::read_to_string(src).map_err(|e| Fail::Input(anyhow!("reading {src}: {e}")))?;
    Graph::from_json(&text).map_err(|e| Fail::Input(e.into()))
}

fn load_valid_graph(src: &str) -> Result<Graph, Fail> {
    let g = load_graph(src)?;
    let v = g.validate();
    if !v.is_valid() {
        return Err(Fail::Check(anyhow!("invalid graph: {}", v.problems().join(", "))));
    }
    Ok(g)
}

fn sets(v: &[EdgeSet]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn rank(g: &Graph) -> usize {
    g.rank_h1(g.all())
}

fn cmd_graph(a: &GraphArgs) -> Result<Outcome, Fail> {
    let g = load_graph(&a.graph)?;
    let v = g.validate();
    let mut result = json!({
        "vertices": g.vertex_count(),
        "edges": g.edges(),
        "rank": rank(&g),
        "valid": v.is_valid(),
        "problems": v.problems(),
    });
    if v.is_valid() {
        let cores = g.enumerate_cores().map_err(anyhow::Error::from)?;
        let forests = g.enumerate_forests().map_err(anyhow::Error::from)?;
        let trees = g.spanning_trees().map_err(anyhow::Error::from)?;
        result["cores"] = json!(sets(&cores));
        result["proper_cores"] = json!(sets(&cores.iter().copied().filter(|&c| c != g.all()).collect::<Vec<_>>()));
        result["forests"] = json!(forests.len());
        result["spanning_trees"] = json!(sets(&trees));
    } else {
        eprintln!("invalid graph: {}", v.problems().join(", "));
    }
    Ok(Outcome { result, pass: v.is_valid(), artifacts: Vec::new() })
}

fn cmd_jewel(a: &JewelArgs) -> Result<Outcome, Fail> {
    let g = load_valid_graph(&a.graph)?;
    let n = rank(&g);
    let sched = make_schedule(n);
    let j: ExactJewel = JewelPolytope::build(&g, &sched).map_err(anyhow::Error::from)?;
    let lattice = FaceLattice::compute(&j);
    let dim = j.dim();
    let codims: Vec<usize> = match a.codim {
        Some(k) if k > dim => return Err(Fail::Input(anyhow!("codimension {k} exceeds the dimension {dim}"))),
        Some(k) => vec![k],
        None => (0..=dim).collect(),
    };
    let mut chains = Vec::new();
    let mut chain_counts_match = true;
    for &k in &codims {
        let fc = face_chains(&g, k);
        chain_counts_match &= fc.len() == lattice.count_codim(k);
        chains.push(json!({
            "codim": k,
            "count": fc.len(),
            "lattice_count": lattice.count_codim(k),
            "chains": fc.iter().map(|c| sets(&c.sets)).collect::<Vec<_>>(),
        }));
    }
    let oracle = if a.skip_oracle {
        json!("skipped")
    } else {
        match vertices_oracle(j.constraints(), g.edge_count()) {
            Ok(o) => {
                let mut a: Vec<String> = o.iter().map(|v| format!("{v:?}")).collect();
                let mut b: Vec<String> = j.vertices().iter().map(|v| format!("{:?}", v.coords)).collect();
                a.sort();
                b.sort();
                json!({ "vertices": o.len(), "agree": a == b })
            }
            Err(e) => json!({ "not_run": e.to_string() }),
        }
    };
    let oracle_ok = oracle.get("agree").is_none_or(|v| v == true);
    let pass = oracle_ok && chain_counts_match;
    if !oracle_ok {
        eprintln!("vertex oracle disagrees with the combinatorial vertices");
    }
    let result = json!({
        "rank": n,
        "dim": dim,
        "schedule": sched.constants().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "vertices": j.vertices().len(),
        "f_vector": lattice.f_vector(),
        "oracle": oracle,
        "face_chains": chains,
    });
    let artifacts = vec![
        ("hrep.txt".to_string(), j.h_rep_text()),
        ("vrep.off".to_string(), j.v_rep_off(&lattice)),
        ("fvector.csv".to_string(), lattice.f_vector_csv()),
    ];
    Ok(Outcome { result, pass, artifacts })
}

fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Attempts per sample before giving up on marking-based decompositions.
const MARKING_ATTEMPTS: usize = 1000;

fn sample_v(a: &ZvArgs, index: u64) -> Result<(VDecomposition, Value), Fail> {
    let mut rng = stream_rng(a.seed, index);
    match a.source {
        Source::Dotdata => Ok((VDecomposition::random(a.m, a.k, 3, &mut rng), json!("dotdata"))),
        Source::Marking => {
            let n = a.m.max((2 * a.m + a.k).div_ceil(2)).max(2);
            for _ in 0..MARKING_ATTEMPTS {
                let rho = random_marking(n, rng.gen_range(0..6), &mut rng);
                if let Some(v) = VDecomposition::sample_from_marking(rho.marking(), a.m, a.k, 5, &mut rng)
                    .map_err(|e| Fail::Input(e.into()))?
                {
                    return Ok((v, json!(rho.marking().to_strings())));
                }
            }
            Err(Fail::Check(anyhow!("no tie-free decomposition after {MARKING_ATTEMPTS} markings")))
        }
    }
}

fn cmd_zv(a: &ZvArgs) -> Result<Outcome, Fail> {
    if a.m == 0 || 2 * a.m + a.k < 4 || a.m + a.k > 12 {
        return Err(Fail::Input(anyhow!("need m ≥ 1, 2m+k ≥ 4 and m+k ≤ 12")));
    }
    let d = (2 * a.m + a.k) as isize - 4;
    let mut rows = Vec::new();
    let mut artifacts = Vec::new();
    let mut pass = true;
    for i in 0..a.samples {
        let (v, source) = sample_v(a, i as u64)?;
        let (z, asc) = build_z(&v).map_err(anyhow::Error::from)?;
        let total = enumerate_v_ideal_edges(&v).len();
        let descending = total - asc.len();
        let rep = sphericity_report(&z, d).map_err(anyhow::Error::from)?;
        // m = 1: full sphere without descending edges, contractible otherwise
        let dichotomy = (a.m == 1).then(|| {
            if descending == 0 {
                z.vertex_count() == total && rep.homology.concentrated_in(d) && rep.homology.reduced_betti(d) == 1
            } else {
                rep.homology.is_acyclic()
            }
        });
        let ok = rep.passes() && dichotomy != Some(false);
        pass &= ok;
        info!("sample {i}: {} vertices, {descending} descending, {}", z.vertex_count(), rep.verdict);
        rows.push(json!({
            "sample": i,
            "source": source,
            "edges": total,
            "descending": descending,
            "vertices": z.vertex_count(),
            "report": rep,
            "verdict": rep.verdict.to_string(),
            "dichotomy": dichotomy,
            "pass": ok,
        }));
        artifacts.push((format!("zv_{i}.json"), z.to_json()));
        artifacts.push((format!("zv_{i}_homology.csv"), rep.homology.to_csv()));
    }
    Ok(Outcome { result: json!({ "expected_dim": d, "samples": rows }), pass, artifacts })
}

fn parse_marking(rank: Option<usize>, s: &str) -> Result<MarkedRose, Fail> {
    let images: Vec<String> = serde_json::from_str(s).map_err(|e| Fail::Input(anyhow!("marking must be a JSON list of words: {e}")))?;
    if let Some(n) = rank {
        if n != images.len() {
            return Err(Fail::Input(anyhow!("--rank {n} but the marking has {} images", images.len())));
        }
    }
    if images.len() < 2 {
        return Err(Fail::Input(anyhow!("rank must be at least 2")));
    }
    let refs: Vec<&str> = images.iter().map(String::as_str).collect();
    Ok(MarkedRose::new(Marking::parse(&refs).map_err(|e| Fail::Input(e.into()))?))
}

fn cmd_zrho(a: &MarkingArgs) -> Result<Outcome, Fail> {
    let rho = parse_marking(a.rank, &a.marking)?;
    let n = rho.rank();
    let z = z_rho_escalating(&rho).map_err(anyhow::Error::from)?;
    let rep = sphericity_report(&z, 2 * n as isize - 4).map_err(anyhow::Error::from)?;
    let result = json!({
        "marking": rho.marking().to_strings(),
        "vertices": z.vertex_count(),
        "report": rep,
        "verdict": rep.verdict.to_string(),
    });
    let artifacts = vec![("zrho.json".to_string(), z.to_json()), ("zrho_homology.csv".to_string(), rep.homology.to_csv())];
    Ok(Outcome { result, pass: rep.passes(), artifacts })
}

fn cmd_homology(a: &HomologyArgs) -> Result<Outcome, Fail> {
    let text = fs::read_to_string(&a.input).map_err(|e| Fail::Input(anyhow!("reading {}: {e}", a.input.display())))?;
    let c = FlagComplex::from_json(&text).map_err(|e| Fail::Input(e.into()))?;
    let top = a.max_dim.unwrap_or(c.dimension().max(0) as usize + 1);
    let h = homology(&c, top).map_err(anyhow::Error::from)?;
    let csv = h.to_csv();
    let result = json!({ "vertices": c.vertex_count(), "dim": c.dimension(), "homology": h, "csv": csv });
    Ok(Outcome { result, pass: true, artifacts: vec![("homology.csv".to_string(), csv)] })
}

fn cmd_asclink(a: &AsclinkArgs) -> Result<Outcome, Fail> {
    let roses: Vec<MarkedRose> = match (&a.marking, a.radius, a.samples) {
        (Some(m), None, None) => vec![parse_marking(a.rank, m)?],
        (None, Some(r), None) => marking_ball(a.rank.unwrap_or(2), r),
        (None, None, Some(s)) => {
            let n = a.rank.unwrap_or(3);
            (0..s).map(|i| random_marking(n, 2 + i % 6, &mut stream_rng(a.seed, i as u64))).collect()
        }
        _ => return Err(Fail::Input(anyhow!("give exactly one of --marking, --radius, --samples"))),
    };
    if roses.iter().any(|r| r.rank() < 2) {
        return Err(Fail::Input(anyhow!("rank must be at least 2")));
    }
    let mut rows = Vec::new();
    let mut artifacts = Vec::new();
    let mut pass = true;
    for (i, rho) in roses.iter().enumerate() {
        let c = compare_link_with_z(rho, a.budget).map_err(|e| Fail::Check(anyhow!("{:?}: {e}", rho.marking().to_strings())))?;
        let ok = c.equal && c.spherical;
        pass &= ok;
        info!("{:?}: link {} Z {} {}", rho.marking().to_strings(), c.link_vertices, c.z_vertices, ok);
        rows.push(json!({ "marking": rho.marking().to_strings(), "comparison": c, "pass": ok }));
        if roses.len() == 1 {
            let link = ascending_link_escalating(rho, a.budget).map_err(anyhow::Error::from)?;
            let z = z_rho_escalating(rho).map_err(anyhow::Error::from)?;
            artifacts.push(("link.json".to_string(), link.complex.to_json()));
            artifacts.push(("link_homology.csv".to_string(), c.link_homology.to_csv()));
            artifacts.push(("zrho.json".to_string(), z.to_json()));
            artifacts.push(("zrho_homology.csv".to_string(), c.z_homology.to_csv()));
        } else {
            artifacts.push((format!("link_{i}_homology.csv"), c.link_homology.to_csv()));
        }
    }
    Ok(Outcome { result: json!({ "roses": rows }), pass, artifacts })
}

fn cmd_bordmap(a: &BordArgs) -> Result<Outcome, Fail> {
    let graphs = match &a.graph {
        Some(s) => vec![load_valid_graph(s)?],
        None => valid_graph_corpus(2, 5),
    };
    let mut rows = Vec::new();
    let mut pass = true;
    for g in &graphs {
        let (report, ok) = match a.what {
            What::Nonzero => {
                let j: ExactJewel = JewelPolytope::build(g, &make_schedule(rank(g))).map_err(anyhow::Error::from)?;
                let r = check_nonzero(&j).map_err(anyhow::Error::from)?;
                (json!(r), r.pass)
            }
            What::Commute => {
                let samples = a.samples.unwrap_or(1000);
                let mut reports = Vec::new();
                let mut ok = true;
                for f in g.enumerate_forests().map_err(anyhow::Error::from)? {
                    if f.is_empty() {
                        continue;
                    }
                    let c = g.collapse(f).map_err(anyhow::Error::from)?;
                    let r = check_commute(&c, samples, a.seed).map_err(anyhow::Error::from)?;
                    ok &= r.pass;
                    reports.push(r);
                }
                (json!(reports), ok)
            }
            What::Jacobian => {
                let r = check_jacobians(g, a.samples.unwrap_or(100), a.seed).map_err(anyhow::Error::from)?;
                (json!(r), r.pass)
            }
            What::Strata => {
                let r = check_strata(g, a.samples.unwrap_or(3), a.seed).map_err(anyhow::Error::from)?;
                (json!(r), r.pass)
            }
        };
        if !ok {
            eprintln!("FAIL on graph {}", g.to_json());
        }
        pass &= ok;
        rows.push(json!({ "graph": serde_json::from_str::<Value>(&g.to_json()).expect("graph json"), "report": report, "pass": ok }));
    }
    if rows.is_empty() {
        return Err(Fail::Check(anyhow!("no graphs to check")));
    }
    Ok(Outcome { result: json!({ "graphs": rows }), pass, artifacts: Vec::new() })
}
