use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use artin_core::certifier::{self, CertifyOptions, ContactSpec, EllipticSpec, FreenessCertificate};
use artin_core::linkgeom::{self, BallOptions, LinkPoint};
use artin_core::oracles;
use artin_core::quasitree::{build_augmented, build_quasitree, check_tree_of_simplices};
use artin_core::{classify_elliptic, garside, AngularValue, Error, PresentationGraph, Word};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod help;

/// Exact computations in two-dimensional Artin groups.
#[derive(Parser)]
#[command(name = "artin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a presentation graph is two-dimensional and report its type.
    Validate {
        /// Presentation graph (JSON).
        graph: PathBuf,
    },
    /// Garside normal form of a word in the dihedral Artin group A_st.
    Nf {
        #[arg(long)]
        m: u32,
        /// Word over s, t (e.g. "s t^-1 s").
        word: String,
    },
    /// Decide whether two words are equal in A_st.
    Eq {
        #[arg(long)]
        m: u32,
        left: String,
        right: String,
    },
    /// Classify an elliptic element of A_st as tree- or vertex-elliptic.
    Classify {
        #[arg(long)]
        m: u32,
        word: String,
        /// Also search for a conjugator up to this length.
        #[arg(long)]
        search: Option<usize>,
    },
    /// Build a ball in the link of a vertex of the Deligne complex.
    Link(LinkArgs),
    /// Build a ball of the quasi-tree of A_st and check that it is a tree of simplices.
    Quasitree {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build the augmented graph on a ball and check its separating edges.
    Augmented {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        depth: usize,
        /// Quotient by the right action of Delta.
        #[arg(long)]
        quotient: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Certify that <a^n, b^n> is a non-abelian free group.
    Certify(CertifyArgs),
    /// Re-verify a certificate from scratch.
    Check {
        certificate: PathBuf,
    },
    /// Export the ping-pong tree of a certificate.
    Pingpong {
        certificate: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Compare the Garside solution of the word problem with the amalgam oracle.
    OracleSweep {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        len: usize,
    },
}

#[derive(Args)]
struct OutArgs {
    /// Write a DOT rendering to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the full JSON export to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct LinkArgs {
    /// Label of the type-2 vertex (link of v_st).
    #[arg(long, conflicts_with = "graph")]
    m: Option<u32>,
    /// Presentation graph, for the link of a type-1 vertex.
    #[arg(long, requires = "vertex")]
    graph: Option<PathBuf>,
    /// Generator whose type-1 vertex is the center.
    #[arg(long)]
    vertex: Option<String>,
    /// Radius as a multiple of pi ("1/2", "pi", "3pi/4").
    #[arg(long, default_value = "1/2")]
    radius: String,
    /// Exponent window |j| along each coset.
    #[arg(long, default_value_t = 2)]
    window: u32,
    /// Quotient by the right action of Delta (m >= 3).
    #[arg(long)]
    quotient: bool,
    /// Exact distance between two link points (JSON), printed instead of the ball.
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    between: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Elliptic spec for a: a JSON file, inline JSON, or a generator name.
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// The two contacts of gamma (JSON array). Built automatically for RAAG generators.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    /// Exponent bound K for vertex-elliptic endpoints with m >= 3.
    #[arg(long, default_value_t = 4)]
    bound_k: u32,
    /// Accept disjointness of the fixed sets as an assumption.
    #[arg(long)]
    assume_disjoint: bool,
    /// Syllable depth of the RAAG oracle sweep.
    #[arg(long, default_value_t = 6)]
    sweep_depth: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verify(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verify(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(msg),
            Error::Syntax(_)
            | Error::Validation(_)
            | Error::Precondition(_)
            | Error::ModulusMismatch { .. }
            | Error::IdentityInput
            | Error::Spec(_)
            | Error::Mode(_)
            | Error::PointOutsideBall(_) => Failure::Usage(msg),
            _ => Failure::Verify(msg),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn budget() -> Result<usize, Failure> {
    match std::env::var("ARTIN_BUDGET") {
        Err(_) => Ok(linkgeom::DEFAULT_BUDGET),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(Failure::Usage(format!("ARTIN_BUDGET must be a positive integer, got {v:?}"))),
        },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

/// Sorted-key JSON of any serializable value.
fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Inline JSON, or the contents of a file.
fn json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with(['{', '[']) { arg.to_string() } else { read(Path::new(arg))? };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn check_m(m: u32) -> Result<(), Failure> {
    if m < 2 {
        return Err(Failure::Usage("m must be at least 2".into()));
    }
    Ok(())
}

fn dihedral_word(text: &str) -> Result<Word, Failure> {
    Ok(Word::parse_dihedral(text)?)
}

fn export(out: &OutArgs, dot: impl FnOnce() -> String, full: impl FnOnce() -> Value) -> Result<(), Failure> {
    if let Some(p) = &out.dot {
        write(p, &dot())?;
    }
    if let Some(p) = &out.json {
        write(p, &pretty(&full()))?;
    }
    Ok(())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { graph } => {
            let g = PresentationGraph::parse_json(&read(&graph)?)?;
            let report = g.validation_report();
            if report["two_dimensional"] == Value::Bool(false) {
                return Err(Failure::Verify(format!("graph is not two-dimensional: {}", report["violations"])));
            }
            Ok(report)
        }
        Command::Nf { m, word } => {
            check_m(m)?;
            let w = dihedral_word(&word)?;
            Ok(match garside::element(&w, m)? {
                garside::DihedralElement::Abelian(a) => json!({
                    "m": m, "input": word, "normal_form": a.to_word().to_dihedral_string(), "s": a.p, "t": a.q,
                }),
                garside::DihedralElement::Garside(g) => json!({
                    "m": m,
                    "input": word,
                    "normal_form": g.to_string(),
                    "atoms": g.atoms().iter().map(|a| a.to_string_dihedral()).collect::<Vec<_>>(),
                    "delta_exp": g.delta_exp(),
                }),
            })
        }
        Command::Eq { m, left, right } => {
            check_m(m)?;
            Ok(json!({ "equal": garside::equals(&dihedral_word(&left)?, &dihedral_word(&right)?, m)? }))
        }
        Command::Classify { m, word, search } => {
            check_m(m)?;
            let w = dihedral_word(&word)?;
            let class = classify_elliptic(&w, m)?;
            let mut out = json!({ "m": m, "input": word, "class": value(&class) });
            if let (Some(bound), garside::EllipticClass::TreeElliptic { class, power }) = (search, class) {
                if m >= 3 {
                    let target = Word::gen_power(class.representative(), power);
                    let c = oracles::brute_conjugacy_search(&w, &target, m, bound)?;
                    out["conjugator"] = json!(c.map(|c| c.to_dihedral_string()));
                }
            }
            Ok(out)
        }
        Command::Link(args) => link(args),
        Command::Quasitree { m, depth, out } => {
            if m < 3 {
                return Err(Failure::Usage("the quasi-tree needs m >= 3".into()));
            }
            let q = build_quasitree(m, depth, budget()?)?;
            let report = check_tree_of_simplices(&q)?;
            export(&out, || q.to_dot(), || q.to_json())?;
            Ok(value(&report))
        }
        Command::Augmented { m, depth, quotient, out } => {
            if m < 3 {
                return Err(Failure::Usage("augmented graphs need m >= 3".into()));
            }
            let k = build_augmented(m, depth, quotient, budget()?)?;
            export(&out, || k.to_dot(), || k.to_json())?;
            let violations = k.separating_edge_violations();
            let report = json!({
                "m": m,
                "depth": depth,
                "quotiented": quotient,
                "vertices": k.vertices.len(),
                "a_edges": k.a_edges.len(),
                "i_edges": k.i_edges.len(),
                "separating_edge_violations": violations,
            });
            if !violations.is_empty() {
                return Err(Failure::Verify(format!("separating-edge violations: {}", pretty(&report))));
            }
            Ok(report)
        }
        Command::Certify(args) => certify(args),
        Command::Check { certificate } => {
            let report = certifier::check_json(&read(&certificate)?)?;
            Ok(json!({ "valid": true, "n": report.n, "mode": value(&report.mode), "undischarged": report.undischarged }))
        }
        Command::Pingpong { certificate, depth } => {
            let cert: FreenessCertificate = json_arg(&certificate.to_string_lossy())?;
            Ok(value(&certifier::pingpong_tree(&cert, depth)?))
        }
        Command::OracleSweep { m, len } => {
            if m < 3 {
                return Err(Failure::Usage("the amalgam oracle needs m >= 3".into()));
            }
            let report = oracles::oracle_sweep(m, len)?;
            if report.disagreements > 0 {
                return Err(Failure::Verify(format!("oracle disagreement: {}", pretty(&value(&report)))));
            }
            Ok(value(&report))
        }
    }
}

fn link(args: LinkArgs) -> Outcome {
    let radius = AngularValue::parse(&args.radius).map_err(Failure::Usage)?;
    let opts = BallOptions { radius, axis_window: args.window, budget: budget()? };
    let (graph, extra) = match (args.m, &args.graph) {
        (Some(m), None) => {
            check_m(m)?;
            if let Some(pq) = &args.between {
                let p: LinkPoint = json_arg(&pq[0])?;
                let q: LinkPoint = json_arg(&pq[1])?;
                let d = if m == 2 {
                    linkgeom::m2_link_distance(&p, &q)?
                } else if args.quotient {
                    linkgeom::quotient_distance(m, &p, &q)?
                } else {
                    return Err(Failure::Usage("exact distances for m >= 3 are computed in the quotient; pass --quotient".into()));
                };
                return Ok(json!({ "m": m, "quotient": args.quotient, "distance": value(&d) }));
            }
            if args.quotient {
                let q = linkgeom::build_quotient_link(m, &opts)?;
                let extra = q.to_json()["tbar"].clone();
                (q.graph, Some(extra))
            } else {
                (linkgeom::build_link_type2(m, &opts)?, None)
            }
        }
        (None, Some(path)) => {
            let g = PresentationGraph::parse_json(&read(path)?)?;
            let v = args.vertex.as_deref().expect("clap enforces --vertex");
            (linkgeom::build_link_type1(&g, v, &opts)?, None)
        }
        _ => return Err(Failure::Usage("pass either --m or --graph with --vertex".into())),
    };
    let mut full = graph.to_json();
    if let Some(t) = extra {
        full["tbar"] = t;
    }
    let text = match args.format {
        Format::Json => pretty(&full),
        Format::Dot => graph.to_dot(),
    };
    let summary = json!({
        "center": value(&graph.center),
        "quotiented": graph.quotiented,
        "radius": value(&graph.radius),
        "vertices": graph.vertices.len(),
        "edges": graph.edges.len(),
        "diameter": graph.diameter().map(|d| value(&d)),
    });
    match &args.out {
        Some(p) => {
            write(p, &text)?;
            Ok(summary)
        }
        None => match args.format {
            Format::Json => Ok(full),
            Format::Dot => {
                emit(&text);
                Ok(Value::Null)
            }
        },
    }
}

fn spec_arg(arg: &str) -> Result<EllipticSpec, Failure> {
    let looks_like_name = !arg.contains(['{', '.', '/']) && !Path::new(arg).exists();
    if looks_like_name {
        Ok(EllipticSpec::generator(arg))
    } else {
        json_arg(arg)
    }
}

fn certify(args: CertifyArgs) -> Outcome {
    let g = PresentationGraph::parse_json(&read(&args.graph)?)?;
    let (a, b) = (spec_arg(&args.a)?, spec_arg(&args.b)?);
    let gamma: [ContactSpec; 2] = match &args.gamma {
        Some(text) => json_arg(text)?,
        None => match (&a, &b) {
            (
                EllipticSpec::TreeElliptic { conjugator: ca, generator: x, power: _ },
                EllipticSpec::TreeElliptic { conjugator: cb, generator: y, power: _ },
            ) if ca.trim().is_empty() && cb.trim().is_empty() => certifier::raag_gamma(&g, x, y)?,
            _ => return Err(Failure::Usage("--gamma is required unless a and b are RAAG generators".into())),
        },
    };
    let opts = CertifyOptions {
        n: args.n,
        bound_k: args.bound_k,
        assume_disjoint: args.assume_disjoint,
        sweep_depth: args.sweep_depth,
    };
    let cert = value(&certifier::certify_free(&g, &a, &b, &gamma, &opts)?);
    match &args.out {
        Some(p) => {
            write(p, &pretty(&cert))?;
            Ok(json!({ "n": cert["n"], "mode": cert["mode"], "written": p.display().to_string() }))
        }
        None => Ok(cert),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    if let Some(v) = help::json_help(&Cli::command(), &argv) {
        emit(&format!("{}\n", pretty(&v)));
        return ExitCode::SUCCESS;
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(v) => {
            emit(&format!("{}\n", pretty(&v)));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
