//! `sphertwist`: decomposition of A_d-modules, spherical twists in zig-zag
//! models, pair classification, inequality fuzzing and ping-pong
//! certificates.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sphertwist_core::algebra::GradedAlgebra;
use sphertwist_core::dual::decompose;
use sphertwist_core::formats::{from_json, ADModuleJson, DecompositionJson, ObjectJson};
use sphertwist_core::fuzz::{sweep_corpus, DEFAULT_POWERS};
use sphertwist_core::group::{classify_pair, pingpong_verify, PingPongOptions, DEFAULT_SIZE_CAP};
use sphertwist_core::spherical::{intersection_number, projective_spherical, twist_power};
use sphertwist_core::twisted::{iso_up_to_shift, TwistedComplex};
use sphertwist_core::zigzag::{build_zigzag, corpus, MultiGraph};
use sphertwist_core::{Error, Field, Gf, Rational};

#[derive(Parser)]
#[command(name = "sphertwist", version, about = "Spherical twists and A_d-module decomposition")]
struct Cli {
    /// Coefficient field: `Q` or `GF:p`.
    #[arg(long, global = true, default_value = "GF:32003")]
    field: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    max_word_len: u64,
    /// Abort a word once an object exceeds this many summands.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also write the JSON report (for `pingpong`, the certificate) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an A_d-module (JSON) into shifted B_n's.
    Decompose { file: PathBuf },
    /// Apply T_{P_v}^k to a target object of a zig-zag model.
    Twist {
        graph: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        power: i64,
        /// `P<label>`, `P<label>[shift]`, or a path to an object JSON file.
        #[arg(long)]
        target: String,
    },
    /// Classify the group generated by T_{P_v} and T_{P_w}.
    Classify { graph: PathBuf, v: String, w: String },
    /// Sweep the fundamental inequality over a seeded corpus.
    FuzzInequality {
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
        #[arg(long, default_value_t = 3)]
        max_edges: usize,
        #[arg(long, default_value_t = 6)]
        graphs: usize,
    },
    /// Certify freeness of <T_{P_v}^k1, T_{P_w}^k2> by ping-pong.
    Pingpong {
        graph: PathBuf,
        v: String,
        w: String,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        k1: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        k2: i64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::CertificateFailure { .. } => 1,
            Error::Parse(_)
            | Error::Schema(_)
            | Error::UnknownVertex(_)
            | Error::LoopEdge(_)
            | Error::InvalidParameter(_)
            | Error::ZeroPower => 2,
            Error::NotDistinct(_) => 4,
            Error::Precondition(_) | Error::DNotGreaterThanOne(_) | Error::SizeCap { .. } => 5,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// A rendered result: a table, its JSON form, and the exit code.
struct Report {
    table: String,
    json: Value,
    code: u8,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_model<F: Field>(path: &Path) -> Result<(MultiGraph, Arc<GradedAlgebra<F>>), Failure> {
    let graph: MultiGraph = from_json(&read(path)?)?;
    let alg = Arc::new(build_zigzag::<F>(&graph)?);
    Ok((graph, alg))
}

fn parse_target<F: Field>(
    spec: &str,
    graph: &MultiGraph,
    alg: &Arc<GradedAlgebra<F>>,
) -> Result<TwistedComplex<F>, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let obj: ObjectJson = from_json(&read(path)?)?;
        return Ok(obj.build(alg)?);
    }
    let body = spec.strip_prefix('P').ok_or_else(|| usage(format!("bad target {spec:?}")))?;
    let (label, shift) = match body.split_once('[') {
        Some((l, rest)) => {
            let n = rest
                .strip_suffix(']')
                .and_then(|s| s.trim().parse::<i64>().ok())
                .ok_or_else(|| usage(format!("bad shift in {spec:?}")))?;
            (l, n)
        }
        None => (body, 0),
    };
    let v = graph.vertex_index(label)?;
    Ok(TwistedComplex::projective(alg.clone(), v).shift(shift))
}

fn cmd_decompose<F: Field>(file: &Path) -> Result<Report, Failure> {
    let m = from_json::<ADModuleJson>(&read(file)?)?.build::<F>()?;
    let r = decompose(&m)?;
    Ok(Report { table: r.render(), json: json!(DecompositionJson::from(&r)), code: 0 })
}

fn cmd_twist<F: Field>(graph: &Path, vertex: &str, k: i64, target: &str) -> Result<Report, Failure> {
    if k == 0 {
        return Err(usage("power must be nonzero"));
    }
    let (g, alg) = load_model::<F>(graph)?;
    let v = g.vertex_index(vertex)?;
    let e = projective_spherical(&alg, v)?;
    let m = parse_target(target, &g, &alg)?;
    let t = twist_power(&e, k, &m)?;
    let shift = iso_up_to_shift(&m, &t)?.map(|r| r.0);
    let mut lines = vec![format!("T_P{vertex}^{k}({target}) = {}", t.describe())];
    if let Some(l) = shift {
        lines.push(format!("shift: target[{l}]"));
    }
    let mut profiles = Vec::new();
    for (w, label) in g.vertices.iter().enumerate() {
        let p = intersection_number(&TwistedComplex::projective(alg.clone(), w), &t)?;
        let degs: Vec<String> = p.per_degree.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        lines.push(format!("i(P{label}, -) = {} {{{}}}", p.total, degs.join(", ")));
        profiles.push(json!({ "vertex": label, "profile": p }));
    }
    let json = json!({
        "object": ObjectJson::from_object(&t)?,
        "summary": t.describe(),
        "shift_of_target": shift,
        "profiles": profiles,
    });
    Ok(Report { table: lines.join("\n"), json, code: 0 })
}

fn pair<F: Field>(
    graph: &Path,
    v: &str,
    w: &str,
) -> Result<[sphertwist_core::spherical::SphericalObject<F>; 2], Failure> {
    let (g, alg) = load_model::<F>(graph)?;
    let (iv, iw) = (g.vertex_index(v)?, g.vertex_index(w)?);
    Ok([projective_spherical(&alg, iv)?, projective_spherical(&alg, iw)?])
}

fn cmd_classify<F: Field>(graph: &Path, v: &str, w: &str, opts: &PingPongOptions) -> Result<Report, Failure> {
    let [e1, e2] = pair::<F>(graph, v, w)?;
    let c = classify_pair(&e1, &e2, opts)?;
    Ok(Report { table: format!("{c}"), json: json!(c), code: 0 })
}

fn cmd_fuzz<F: Field>(seed: u64, max_vertices: usize, max_edges: usize, graphs: usize) -> Result<Report, Failure> {
    let entries: Vec<_> = corpus(seed, max_vertices, max_edges, graphs)
        .into_iter()
        .map(|c| (c.graph, c.objects))
        .collect();
    let s = sweep_corpus::<F>(&entries, &DEFAULT_POWERS)?;
    let code = if s.violations.is_empty() { 0 } else { 1 };
    Ok(Report {
        table: format!("{} checks, {} violations", s.checks, s.violations.len()),
        json: json!(s),
        code,
    })
}

fn cmd_pingpong<F: Field>(
    graph: &Path,
    v: &str,
    w: &str,
    k1: i64,
    k2: i64,
    opts: &PingPongOptions,
) -> Result<Report, Failure> {
    let [e1, e2] = pair::<F>(graph, v, w)?;
    let cert = pingpong_verify(&e1, k1, &e2, k2, opts)?;
    let table = format!(
        "certified: {} reduced words up to length {} (k1 = {k1}, k2 = {k2})",
        cert.words.len(),
        cert.max_word_length
    );
    Ok(Report { table, json: json!(cert), code: if cert.certified { 0 } else { 1 } })
}

fn run<F: Field>(cli: &Cli) -> Result<Report, Failure> {
    let opts = PingPongOptions { max_word_length: cli.max_word_len as usize, size_cap: cli.size_cap };
    match &cli.command {
        Command::Decompose { file } => cmd_decompose::<F>(file),
        Command::Twist { graph, vertex, power, target } => cmd_twist::<F>(graph, vertex, *power, target),
        Command::Classify { graph, v, w } => cmd_classify::<F>(graph, v, w, &opts),
        Command::FuzzInequality { max_vertices, max_edges, graphs } => {
            cmd_fuzz::<F>(cli.seed, *max_vertices, *max_edges, *graphs)
        }
        Command::Pingpong { graph, v, w, k1, k2 } => cmd_pingpong::<F>(graph, v, w, *k1, *k2, &opts),
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match cli.field.trim() {
        "Q" => run::<Rational>(cli),
        "GF:2" => run::<Gf<2>>(cli),
        "GF:3" => run::<Gf<3>>(cli),
        "GF:5" => run::<Gf<5>>(cli),
        "GF:7" => run::<Gf<7>>(cli),
        "GF:11" => run::<Gf<11>>(cli),
        "GF:13" => run::<Gf<13>>(cli),
        "GF:101" => run::<Gf<101>>(cli),
        "GF:32003" => run::<Gf<32003>>(cli),
        "GF:65521" => run::<Gf<65521>>(cli),
        other => Err(usage(format!(
            "unsupported field {other:?}; use Q or GF:p with p in 2, 3, 5, 7, 11, 13, 101, 32003, 65521"
        ))),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Table => report.table.clone(),
        Format::Json => serde_json::to_string_pretty(&report.json).expect("serializable report"),
    };
    println!("{text}");
    if let Some(path) = &cli.out {
        let body = serde_json::to_string_pretty(&report.json).expect("serializable report") + "\n";
        fs::write(path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("SPHERTWIST_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = dispatch(&cli).and_then(|r| emit(&cli, &r).map(|_| r.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
