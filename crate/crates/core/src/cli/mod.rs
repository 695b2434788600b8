//! Command-line surface. [`run`] executes a parsed [`Cli`] against the text
//! of its input document and returns what the binary prints, so the whole
//! tool can be driven from tests.
//!
//! Exit codes: `0` success, `1` a computation's precondition failed, `2`
//! the input could not be parsed.

pub mod document;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::continuation::{u0_matrix_a, u0_via_continuation};
use crate::error::{Error, Result};
use crate::exact_algebra::{smith_diagonal, ExactMatrix, ModuleDecomposition, Scalar};
use crate::families::{self, figures};
use crate::fundamental::{critical_group, eigen_multiplicity, laplacian_charpoly, upsilon};
use crate::layering::{is_completely_reducible, reduce_to_flower, standard_form_filtration, LayerOp, ReductionStep, ReductionTrace};
use crate::network::Network;
use crate::partial_graph::{PartialGraph, SubGraph};
use crate::planar::{dual, harmonic_conjugate, EmbeddedPartialGraph};
use crate::verify::{self, Suite};
use document::{Decoded, NetworkDocument, NumberText};

/// Version of every `--json` payload.
pub const FORMAT: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "upsilon", version, about = "Exact invariants of networks on graphs with boundary")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Network document to read; standard input when absent.
    #[arg(short, long, global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Paper,
    Property,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free rank and invariant factors of Υ.
    Upsilon,
    /// Critical group of the underlying graph.
    Crit,
    /// U₀ with coefficients in ℤ/N or ℚ/ℤ.
    U0 {
        #[arg(long = "mod", value_name = "N", conflicts_with = "qz", required_unless_present = "qz")]
        modulus: Option<String>,
        #[arg(long)]
        qz: bool,
    },
    /// Decide layerability.
    Layerable {
        /// Also print a standard-form filtration.
        #[arg(long)]
        filtration: bool,
    },
    /// Strip as far as possible and print what remains.
    Flower,
    /// Complete-reducibility trace.
    Reduce,
    /// The continuation matrix A for a set of interior vertices.
    U0Matrix {
        #[arg(long, value_delimiter = ',', required = true)]
        interiorize: Vec<u64>,
    },
    /// The dual network of an embedded network.
    Dual,
    /// Harmonic conjugate of a harmonic function on an embedded network.
    Conjugate {
        /// JSON array of values in vertex order.
        #[arg(long)]
        values: PathBuf,
    },
    /// Characteristic polynomial of the Laplacian.
    Charpoly,
    /// Multiplicity of an eigenvalue of the Laplacian.
    Eigmult {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Emit a network document for a named family.
    Family {
        /// complete, complete-bipartite, cycle, cube, wheel, clf, clf-prime, or a figure name
        name: String,
        /// Sizes; complete and cycle take an optional count of boundary vertices
        params: Vec<String>,
        /// Make the hub of a wheel a boundary vertex.
        #[arg(long)]
        hub_boundary: bool,
    },
    /// Graphviz drawing: boundary vertices filled, interior vertices open.
    ExportDot,
    /// Run the acceptance checks.
    Verify {
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Upsilon => "upsilon",
            Command::Crit => "crit",
            Command::U0 { .. } => "u0",
            Command::Layerable { .. } => "layerable",
            Command::Flower => "flower",
            Command::Reduce => "reduce",
            Command::U0Matrix { .. } => "u0-matrix",
            Command::Dual => "dual",
            Command::Conjugate { .. } => "conjugate",
            Command::Charpoly => "charpoly",
            Command::Eigmult { .. } => "eigmult",
            Command::Family { .. } => "family",
            Command::ExportDot => "export-dot",
            Command::Verify { .. } => "verify",
        }
    }

    fn reads_document(&self) -> bool {
        !matches!(self, Command::Family { .. } | Command::Verify { .. })
    }
}

/// What the binary prints and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        _ => 1,
    }
}

/// Execute a command. `read` loads a file, or standard input for `None`.
pub fn run(cli: &Cli, read: &mut dyn FnMut(Option<&PathBuf>) -> std::io::Result<String>) -> Output {
    let name = cli.command.name();
    let result = (|| {
        let decoded = if cli.command.reads_document() {
            let text = read(cli.input.as_ref()).map_err(|e| Error::Parse(format!("cannot read input: {e}")))?;
            Some(NetworkDocument::from_json(&text)?.decode()?)
        } else {
            None
        };
        execute(&cli.command, decoded.as_ref(), read)
    })();
    match result {
        Ok(rep) => {
            let stdout = if cli.json {
                let mut obj = json!({ "format": FORMAT, "command": name });
                if let (Value::Object(o), Value::Object(extra)) = (&mut obj, rep.json) {
                    o.extend(extra);
                }
                format!("{}\n", serde_json::to_string_pretty(&obj).expect("json"))
            } else {
                rep.text
            };
            Output { code: rep.code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = exit_code(&e);
            let stdout = if cli.json {
                let obj = json!({ "format": FORMAT, "command": name, "error": e.to_string(), "exit_code": code });
                format!("{}\n", serde_json::to_string_pretty(&obj).expect("json"))
            } else {
                String::new()
            };
            Output { code, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn parse_arg<T: std::str::FromStr>(what: &str, text: &str) -> Result<T> {
    text.parse().map_err(|_| Error::Parse(format!("invalid {what}: {text:?}")))
}

fn decomposition_json(m: &ModuleDecomposition) -> Value {
    json!({
        "free_rank": m.free_rank,
        "invariant_factors": m.invariant_factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "text": m.to_string(),
    })
}

fn matrix_json(a: &ExactMatrix) -> Value {
    let rows: Vec<Vec<String>> = (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).to_string()).collect()).collect();
    json!(rows)
}

fn scalar_json(values: &[Scalar]) -> Value {
    json!(values.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn edge_id(dec: &Decoded, dart: usize) -> u64 {
    dec.edge_ids[dart / 2]
}

fn op_json(dec: &Decoded, g: &PartialGraph, op: LayerOp) -> Value {
    match op {
        LayerOp::DeleteIsolatedBoundaryVertex(v) => json!({ "op": "delete-isolated-boundary-vertex", "vertex": dec.vertex_ids[v] }),
        LayerOp::ContractBoundarySpike(e) => json!({
            "op": "contract-boundary-spike", "edge": edge_id(dec, e),
            "boundary": dec.vertex_ids[g.tail(e)], "interior": dec.vertex_ids[g.head(e)],
        }),
        LayerOp::DeleteBoundaryEdge(e) => json!({ "op": "delete-boundary-edge", "edge": edge_id(dec, e) }),
    }
}

fn op_text(dec: &Decoded, g: &PartialGraph, op: LayerOp) -> String {
    match op {
        LayerOp::DeleteIsolatedBoundaryVertex(v) => format!("delete isolated boundary vertex {}", dec.vertex_ids[v]),
        LayerOp::ContractBoundarySpike(e) => format!(
            "contract boundary spike {} ({} -> {})",
            edge_id(dec, e),
            dec.vertex_ids[g.tail(e)],
            dec.vertex_ids[g.head(e)]
        ),
        LayerOp::DeleteBoundaryEdge(e) => format!("delete boundary edge {}", edge_id(dec, e)),
    }
}

fn sub_json(dec: &Decoded, sub: &SubGraph) -> Value {
    let vertices: Vec<Value> = sub.vertex_ids().into_iter().map(|x| json!({ "id": dec.vertex_ids[x], "boundary": sub.is_boundary(x) })).collect();
    let mut edges: Vec<u64> = sub.dart_ids().into_iter().filter(|e| e % 2 == 0).map(|e| edge_id(dec, e)).collect();
    edges.dedup();
    json!({ "vertices": vertices, "edges": edges })
}

fn sub_text(dec: &Decoded, sub: &SubGraph) -> String {
    let verts: Vec<String> = sub
        .vertex_ids()
        .into_iter()
        .map(|x| if sub.is_boundary(x) { format!("{}*", dec.vertex_ids[x]) } else { dec.vertex_ids[x].to_string() })
        .collect();
    let edges: Vec<String> = sub.dart_ids().into_iter().filter(|e| e % 2 == 0).map(|e| edge_id(dec, e).to_string()).collect();
    format!("vertices {{{}}} edges {{{}}}", verts.join(", "), edges.join(", "))
}

fn trace_json(dec: &Decoded, g: &PartialGraph, t: &ReductionTrace) -> Value {
    let mut node = sub_json(dec, &t.part);
    let step = match &t.step {
        ReductionStep::Empty => json!({ "kind": "empty" }),
        ReductionStep::Irreducible => json!({ "kind": "irreducible" }),
        ReductionStep::Strip { ops, rest } => json!({
            "kind": "strip",
            "ops": ops.iter().map(|&op| op_json(dec, g, op)).collect::<Vec<_>>(),
            "rest": trace_json(dec, g, rest),
        }),
        ReductionStep::SplitDisjoint(parts) => json!({
            "kind": "split-disjoint",
            "pieces": parts.iter().map(|c| trace_json(dec, g, c)).collect::<Vec<_>>(),
        }),
        ReductionStep::SplitWedge { at, pieces } => json!({
            "kind": "split-wedge", "at": dec.vertex_ids[*at],
            "pieces": pieces.iter().map(|c| trace_json(dec, g, c)).collect::<Vec<_>>(),
        }),
    };
    node["step"] = step;
    node
}

fn trace_text(dec: &Decoded, g: &PartialGraph, t: &ReductionTrace, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let part = sub_text(dec, &t.part);
    match &t.step {
        ReductionStep::Empty => {
            let _ = writeln!(out, "{pad}empty");
        }
        ReductionStep::Irreducible => {
            let _ = writeln!(out, "{pad}irreducible: {part}");
        }
        ReductionStep::Strip { ops, rest } => {
            let _ = writeln!(out, "{pad}strip {} operation(s) from {part}", ops.len());
            for &op in ops {
                let _ = writeln!(out, "{pad}  - {}", op_text(dec, g, op));
            }
            trace_text(dec, g, rest, depth + 1, out);
        }
        ReductionStep::SplitDisjoint(parts) => {
            let _ = writeln!(out, "{pad}split into {} components: {part}", parts.len());
            for c in parts {
                trace_text(dec, g, c, depth + 1, out);
            }
        }
        ReductionStep::SplitWedge { at, pieces } => {
            let _ = writeln!(out, "{pad}split {} pieces at boundary vertex {}: {part}", pieces.len(), dec.vertex_ids[*at]);
            for c in pieces {
                trace_text(dec, g, c, depth + 1, out);
            }
        }
    }
}

/// `z^3 - 6z^2 + 9z - 4` from leading-first coefficients.
pub fn polynomial_text(coeffs: &[BigInt]) -> String {
    let deg = coeffs.len().saturating_sub(1);
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let power = deg - i;
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let mag = c.abs();
        if !mag.is_one() || power == 0 {
            let _ = write!(out, "{mag}");
        }
        match power {
            0 => {}
            1 => out.push('z'),
            p => {
                let _ = write!(out, "z^{p}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The DOT drawing of a network.
pub fn export_dot(dec: &Decoded) -> String {
    let n = &dec.network;
    let g = n.graph();
    let mut out = String::from("graph G {\n  node [shape=circle, fixedsize=true, width=0.3, fontsize=10];\n");
    for x in 0..g.num_vertices() {
        let id = dec.vertex_ids[x];
        let style = if g.is_boundary(x) { "style=filled, fillcolor=black, fontcolor=white" } else { "style=solid" };
        let _ = writeln!(out, "  v{id} [label=\"{id}\", {style}];");
    }
    for (i, e) in g.edges().into_iter().enumerate() {
        let w = n.weight(e);
        let label = if w == &Scalar::int(1) { String::new() } else { format!(" [label=\"{w}\"]") };
        let _ = writeln!(out, "  v{} -- v{}{label}; // edge {}", dec.vertex_ids[g.tail(e)], dec.vertex_ids[g.head(e)], dec.edge_ids[i]);
    }
    out.push_str("}\n");
    out
}

fn document_report(doc: NetworkDocument) -> Report {
    let text = format!("{}\n", doc.to_json());
    let json = json!({ "document": serde_json::to_value(&doc).expect("json") });
    Report::ok(text, json)
}

fn family_document(name: &str, params: &[String], hub_boundary: bool) -> Result<NetworkDocument> {
    let nums = params.iter().map(|p| parse_arg::<usize>("family parameter", p)).collect::<Result<Vec<_>>>()?;
    let arity = |lo: usize, hi: usize| -> Result<()> {
        if nums.len() < lo || nums.len() > hi {
            return Err(Error::Parse(format!("family {name} takes {lo} to {hi} parameter(s), got {}", nums.len())));
        }
        Ok(())
    };
    let first_k = |k: usize| -> Vec<usize> { (0..k).collect() };
    let plain = |g: PartialGraph| -> Result<(PartialGraph, Option<EmbeddedPartialGraph>)> { Ok((g, None)) };
    let (g, emb) = match name {
        "complete" => {
            arity(1, 2)?;
            plain(families::complete_graph(nums[0], &first_k(nums.get(1).copied().unwrap_or(0)))?)?
        }
        "complete-bipartite" => {
            arity(2, 2)?;
            plain(families::complete_bipartite_bi(nums[0], nums[1]))?
        }
        "cycle" => {
            arity(1, 2)?;
            plain(families::cycle(nums[0], &first_k(nums.get(1).copied().unwrap_or(0)))?)?
        }
        "cube" => {
            arity(1, 1)?;
            plain(families::cube(nums[0] as u32)?)?
        }
        "wheel" => {
            arity(1, 1)?;
            let eg = families::wheel(nums[0], hub_boundary)?;
            (eg.graph.clone(), Some(eg))
        }
        "clf" => {
            arity(2, 2)?;
            plain(families::clf(nums[0], nums[1])?)?
        }
        "clf-prime" => {
            arity(2, 2)?;
            plain(families::clf_prime(nums[0], nums[1])?)?
        }
        fig => {
            arity(0, 0)?;
            let g = match fig {
                "torsion-square" => figures::torsion_square(),
                "algorithm-example" => figures::algorithm_example(),
                "flower" => figures::flower(),
                "completely-reducible" => figures::completely_reducible(),
                "spike-before" => figures::spike_before(),
                "spike-after" => figures::spike_after(),
                "layerable-extension" => figures::layerable_extension(),
                _ => return Err(Error::Parse(format!("unknown family {name:?}"))),
            };
            (g, None)
        }
    };
    let mut doc = NetworkDocument::encode(&Network::standard(g)?, emb.as_ref())?;
    let mut meta = std::collections::BTreeMap::new();
    meta.insert("family".to_string(), json!(name));
    meta.insert("params".to_string(), json!(nums));
    if hub_boundary {
        meta.insert("hub_boundary".to_string(), json!(true));
    }
    doc.metadata = Some(meta);
    Ok(doc)
}

fn need_embedding(dec: &Decoded) -> Result<&EmbeddedPartialGraph> {
    dec.embedding.as_ref().ok_or_else(|| Error::Precondition("the document has no embedding".into()))
}

fn execute(cmd: &Command, dec: Option<&Decoded>, read: &mut dyn FnMut(Option<&PathBuf>) -> std::io::Result<String>) -> Result<Report> {
    let doc = || dec.expect("command reads a document");
    match cmd {
        Command::Upsilon => {
            let r = upsilon(&doc().network)?;
            let m = &r.decomposition;
            let text = format!("free rank {}; factors {}\n{m}\n", m.free_rank, m.factors_string());
            let mut j = decomposition_json(m);
            j["nondegenerate"] = json!(r.nondegenerate);
            Ok(Report::ok(text, j))
        }
        Command::Crit => {
            let m = critical_group(&doc().network.graph().all_interior())?;
            Ok(Report::ok(format!("{}\n{m}\n", m.factors_string()), decomposition_json(&m)))
        }
        Command::U0 { modulus, qz } => {
            let n = &doc().network;
            let (m, label) = match modulus {
                Some(t) if !qz => {
                    let modulus: BigInt = parse_arg("modulus", t)?;
                    (n.u0_mod_n(&modulus)?, format!("Z/{modulus}"))
                }
                _ => (n.u0_q_mod_z()?, "Q/Z".to_string()),
            };
            let mut j = decomposition_json(&m);
            j["coefficients"] = json!(label);
            Ok(Report::ok(format!("{m}\n"), j))
        }
        Command::Layerable { filtration } => {
            let d = doc();
            let g = d.network.graph();
            let red = reduce_to_flower(g);
            let layerable = red.is_empty();
            let mut text = format!("{}\n", if layerable { "layerable" } else { "not layerable" });
            let mut j = json!({ "layerable": layerable });
            if *filtration && layerable {
                let f = standard_form_filtration(g)?;
                let _ = writeln!(text, "filtration ({} steps):", f.ops.len());
                for (i, &op) in f.ops.iter().enumerate() {
                    let _ = writeln!(text, "  {}. {}", i + 1, op_text(d, g, op));
                }
                let top: Vec<u64> = f.top_labels().iter().map(|&x| d.vertex_ids[x]).collect();
                let _ = writeln!(text, "boundary labelling: {top:?}");
                j["filtration"] = json!(f.ops.iter().map(|&op| op_json(d, g, op)).collect::<Vec<_>>());
                j["labelling"] = json!(top);
            }
            Ok(Report::ok(text, j))
        }
        Command::Flower => {
            let d = doc();
            let g = d.network.graph();
            let red = reduce_to_flower(g);
            let text = if red.is_empty() { "empty (layerable)\n".to_string() } else { format!("{}\n", sub_text(d, &red.flower)) };
            let mut j = sub_json(d, &red.flower);
            j["empty"] = json!(red.is_empty());
            j["ops"] = json!(red.ops.iter().map(|&op| op_json(d, g, op)).collect::<Vec<_>>());
            Ok(Report::ok(text, j))
        }
        Command::Reduce => {
            let d = doc();
            let g = d.network.graph();
            let (ok, trace) = is_completely_reducible(g);
            let mut text = format!("{}\n", if ok { "completely reducible" } else { "not completely reducible" });
            trace_text(d, g, &trace, 0, &mut text);
            Ok(Report::ok(text, json!({ "completely_reducible": ok, "trace": trace_json(d, g, &trace) })))
        }
        Command::U0Matrix { interiorize } => {
            let d = doc();
            let s = interiorize.iter().map(|&id| d.vertex_index(id)).collect::<Result<Vec<_>>>()?;
            let a = u0_matrix_a(&d.network, &s)?;
            let m = u0_via_continuation(&d.network, &s)?;
            let diag = smith_diagonal(&a.to_integer_matrix()?)?;
            let diag_s: Vec<String> = diag.iter().map(|x| x.to_string()).collect();
            let text = format!("A =\n{a}\nSmith diagonal [{}]\nU0 = {m}\n", diag_s.join(", "));
            let j = json!({ "matrix": matrix_json(&a), "smith_diagonal": diag_s, "u0": decomposition_json(&m) });
            Ok(Report::ok(text, j))
        }
        Command::Dual => {
            let d = doc();
            let dn = dual(&d.network, need_embedding(d)?)?;
            Ok(document_report(NetworkDocument::encode(&dn.network, Some(&dn.embedded))?))
        }
        Command::Conjugate { values } => {
            let d = doc();
            let text = read(Some(values)).map_err(|e| Error::Parse(format!("cannot read values: {e}")))?;
            let raw: Vec<NumberText> = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("values: {e}")))?;
            let u = raw
                .iter()
                .map(|v| match v {
                    NumberText::Int(i) => Ok(Scalar::int(*i)),
                    NumberText::Text(t) => Scalar::parse(t).map_err(|e| Error::Parse(e.to_string())),
                })
                .collect::<Result<Vec<_>>>()?;
            let (dn, v) = harmonic_conjugate(&d.network, need_embedding(d)?, &u)?;
            let mut out = String::new();
            for (k, x) in v.iter().enumerate() {
                let _ = writeln!(out, "dual vertex {k}: {x}");
            }
            let dual_doc = NetworkDocument::encode(&dn.network, Some(&dn.embedded))?;
            Ok(Report::ok(out, json!({ "values": scalar_json(&v), "dual": serde_json::to_value(&dual_doc).expect("json") })))
        }
        Command::Charpoly => {
            let p = laplacian_charpoly(&doc().network)?;
            let coeffs: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            Ok(Report::ok(format!("{}\n", polynomial_text(&p)), json!({ "coefficients": coeffs, "text": polynomial_text(&p) })))
        }
        Command::Eigmult { lambda } => {
            let l: BigRational = match Scalar::parse(lambda).map_err(|e| Error::Parse(e.to_string()))? {
                Scalar::Int(i) => BigRational::from_integer(i),
                Scalar::Rat(r) => r,
                Scalar::Mod { .. } => return Err(Error::Parse("eigenvalue must be rational".into())),
            };
            let k = eigen_multiplicity(&doc().network, &l)?;
            Ok(Report::ok(format!("{k}\n"), json!({ "lambda": l.to_string(), "multiplicity": k })))
        }
        Command::Family { name, params, hub_boundary } => Ok(document_report(family_document(name, params, *hub_boundary)?)),
        Command::ExportDot => {
            let dot = export_dot(doc());
            Ok(Report::ok(dot.clone(), json!({ "dot": dot })))
        }
        Command::Verify { suite } => {
            let suites: Vec<Suite> = match suite {
                Some(SuiteArg::Paper) => vec![Suite::Paper],
                Some(SuiteArg::Property) => vec![Suite::Property],
                None => vec![Suite::Paper, Suite::Property],
            };
            let mut results: Vec<verify::CriterionResult> = suites.into_iter().flat_map(verify::run_suite).collect();
            results.sort_by_key(|r| r.number);
            let mut text = String::new();
            for r in &results {
                let _ = writeln!(text, "{:>2} {} {}{}", r.number, if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail_suffix());
            }
            let passed = results.iter().filter(|r| r.passed).count();
            let _ = writeln!(text, "{passed}/{} passed", results.len());
            let j = json!({
                "results": results.iter().map(|r| json!({ "number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail })).collect::<Vec<_>>(),
                "passed": passed, "total": results.len(),
            });
            Ok(Report { text, json: j, code: if passed == results.len() { 0 } else { 1 } })
        }
    }
}
