//! Command-line front end. Every command is a thin wrapper over the library.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::assign::{Cause, Conflict, Contradiction, ExtremalAssignment, Moduli, Propagation, Seed};
use crate::cache::Cache;
use crate::enumerate::{GraphUniverse, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::piccone::{cone_report_json, curve_cone_faces, face_assignment, nef_cone};
use crate::specialize::{specialization_maps, specialization_relation};
use crate::zmodel::{contract_model, subcurve_invariants, zstable_summary};

pub const BUDGET_ENV: &str = "MODCOMP_BUDGET";
const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "modcomp", version, about = "Stable graphs, extremal assignments, nef cones and contracted models")]
struct Cli {
    /// Output format; defaults to json when writing to a file, table otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report to this file instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the stable graphs of type (g, n).
    Graphs {
        #[command(flatten)]
        ty: TypeArgs,
        /// Only the graphs whose vertices are all rational with three special points.
        #[arg(long)]
        zero_strata: bool,
    },
    /// Contraction maps between two graphs, or the whole relation for a type.
    Specialize {
        /// The generic graph (JSON file).
        #[arg(long, requires = "to")]
        from: Option<PathBuf>,
        /// The special graph (JSON file).
        #[arg(long, requires = "from")]
        to: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["from", "to"], requires = "markings")]
        genus: Option<u32>,
        #[arg(long, conflicts_with_all = ["from", "to"], requires = "genus")]
        markings: Option<u32>,
    },
    /// Extremal assignments.
    #[command(subcommand)]
    Assign(AssignCommand),
    /// Relative nef cone of the universal curve and faces of its dual.
    Cone {
        #[arg(value_enum)]
        report: ConeReport,
        #[command(flatten)]
        ty: TypeArgs,
        /// Face index for `face-assignment`.
        #[arg(long)]
        index: Option<usize>,
        /// Use only the zero-strata inequalities.
        #[arg(long)]
        zero_strata_only: bool,
    },
    /// Contracted singular models.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Manage the graph cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Args, Debug, Clone, Copy)]
struct TypeArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    markings: u32,
}

#[derive(Subcommand, Debug)]
enum AssignCommand {
    /// A named assignment: trivial, elliptic-tails, rational-tails, unmarked.
    Builtin {
        name: String,
        #[command(flatten)]
        ty: TypeArgs,
        /// Largest number of markings on a rational tail.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check an assignment file against the axioms.
    Check { file: PathBuf },
    /// Selected vertices of one graph.
    Evaluate {
        file: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// All assignments of a type.
    Enumerate {
        #[command(flatten)]
        ty: TypeArgs,
        /// Search node budget.
        #[arg(long)]
        node_budget: Option<usize>,
    },
    /// Force the consequences of seed values.
    Propagate {
        #[command(flatten)]
        ty: TypeArgs,
        /// GRAPH:VERTEX or GRAPH:VERTEX=false, using universe indices.
        #[arg(long = "seed", value_parser = parse_seed)]
        seeds: Vec<Seed>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConeReport {
    Rays,
    Faces,
    FaceAssignment,
}

#[derive(Subcommand, Debug)]
enum ModelCommand {
    /// Contract a set of vertices of a graph.
    Contract {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated vertex indices.
        #[arg(long, value_delimiter = ',')]
        select: Vec<usize>,
    },
    /// Point types produced by an assignment.
    Summary {
        #[arg(long)]
        assignment: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CacheCommand {
    Clear,
    Status,
}

fn parse_seed(s: &str) -> std::result::Result<Seed, String> {
    let (loc, value) = match s.split_once('=') {
        Some((l, v)) => (l, v.parse::<bool>().map_err(|e| e.to_string())?),
        None => (s, true),
    };
    let (g, v) = loc.split_once(':').ok_or("expected GRAPH:VERTEX")?;
    Ok(Seed {
        graph: g.parse().map_err(|e| format!("graph index: {}", e))?,
        vertex: v.parse().map_err(|e| format!("vertex index: {}", e))?,
        value,
    })
}

/// A rendered report and its exit status.
struct Report {
    text: String,
    code: i32,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: EXIT_OK }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let format = cli.format.unwrap_or(if cli.output.is_some() { Format::Json } else { Format::Table });
    match execute(&cli.command, format) {
        Ok(report) => {
            let mut text = report.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let written = match &cli.output {
                Some(path) => fs::write(path, &text),
                None => {
                    print!("{}", text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => report.code,
                Err(e) => {
                    eprintln!("error: {}", e);
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        Error::InvalidGraph(_) | Error::NotOrbitClosed { .. } | Error::Consistency(_) => EXIT_CHECK,
        _ => EXIT_USAGE,
    }
}

fn budget() -> Result<u32> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("{} must be a non-negative integer, got {:?}", BUDGET_ENV, s))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn universe(ty: TypeArgs) -> Result<GraphUniverse> {
    Cache::from_env().universe(ty.genus, ty.markings, budget()?)
}

fn moduli(g: u32, n: u32) -> Result<Moduli> {
    Moduli::from_universe(universe(TypeArgs { genus: g, markings: n })?)
}

fn read_graph(path: &Path) -> Result<DualGraph> {
    DualGraph::from_json(&fs::read_to_string(path)?)
}

/// Reads an assignment file together with the moduli data of its type.
fn read_assignment(path: &Path) -> Result<(Moduli, ExtremalAssignment)> {
    let text = fs::read_to_string(path)?;
    let head: Value = serde_json::from_str(&text)?;
    let field = |k: &str| {
        head.get(k)
            .and_then(Value::as_u64)
            .and_then(|x| u32::try_from(x).ok())
            .ok_or_else(|| Error::Input(format!("assignment file lacks an integer {:?}", k)))
    };
    let m = moduli(field("g")?, field("n")?)?;
    let a = ExtremalAssignment::from_json(&text, m.universe())?;
    Ok((m, a))
}

fn graph_value(g: &DualGraph) -> Value {
    serde_json::from_str(&g.to_json()).expect("graph JSON is valid")
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("value serializes")
}

fn execute(command: &Command, format: Format) -> Result<Report> {
    let json = format == Format::Json;
    match command {
        Command::Graphs { ty, zero_strata } => graphs(*ty, *zero_strata, json),
        Command::Specialize { from, to, genus, markings } => match (from, to, genus, markings) {
            (Some(f), Some(t), _, _) => specialize_pair(f, t, json),
            (_, _, Some(g), Some(n)) => specialize_relation(*g, *n, json),
            _ => Err(Error::Input("give either --from/--to or --genus/--markings".into())),
        },
        Command::Assign(cmd) => assign(cmd, json),
        Command::Cone {
            report,
            ty,
            index,
            zero_strata_only,
        } => cone(*report, *ty, *index, *zero_strata_only, json),
        Command::Model(cmd) => model(cmd, json),
        Command::Cache(cmd) => cache(cmd, json),
    }
}

fn graphs(ty: TypeArgs, zero_only: bool, json: bool) -> Result<Report> {
    let u = universe(ty)?;
    let indices: Vec<usize> = if zero_only { u.zero_strata() } else { (0..u.len()).collect() };
    if json {
        let entries: Vec<Value> = indices
            .iter()
            .map(|&i| {
                json!({
                    "index": i,
                    "graph": graph_value(u.graph(i)),
                    "automorphisms": u.automorphisms(i).len(),
                    "orbits": u.orbits(i),
                })
            })
            .collect();
        return Ok(Report::ok(compact(&json!({
            "g": ty.genus,
            "n": ty.markings,
            "zero_strata_only": zero_only,
            "count": entries.len(),
            "graphs": entries,
            "version": VERSION,
        }))));
    }
    let mut s = String::new();
    writeln!(s, "stable graphs of type ({}, {}){}", ty.genus, ty.markings, if zero_only { ", zero strata" } else { "" }).unwrap();
    writeln!(s, "{:>5}  {:>5}  {:>5}  graph", "index", "edges", "|Aut|").unwrap();
    for &i in &indices {
        let g = u.graph(i);
        writeln!(s, "{:>5}  {:>5}  {:>5}  {}", i, g.edge_count(), u.automorphisms(i).len(), g).unwrap();
    }
    write!(s, "{} graph(s)", indices.len()).unwrap();
    Ok(Report::ok(s))
}

fn specialize_pair(from: &Path, to: &Path, json: bool) -> Result<Report> {
    let generic = read_graph(from)?;
    let special = read_graph(to)?;
    let maps = specialization_maps(&generic, &special)?;
    if json {
        let list: Vec<Value> = maps
            .iter()
            .map(|m| json!({"contracted_edges": m.contracted_edges, "fibers": m.fibers}))
            .collect();
        return Ok(Report::ok(compact(&json!({
            "generic": graph_value(&generic),
            "special": graph_value(&special),
            "maps": list,
            "version": VERSION,
        }))));
    }
    let mut s = String::new();
    writeln!(s, "generic {}", generic).unwrap();
    writeln!(s, "special {}", special).unwrap();
    for (k, m) in maps.iter().enumerate() {
        writeln!(s, "map {}: contract edges {:?}, fibers {:?}", k, m.contracted_edges, m.fibers).unwrap();
    }
    write!(s, "{} map(s)", maps.len()).unwrap();
    Ok(Report::ok(s))
}

fn specialize_relation(g: u32, n: u32, json: bool) -> Result<Report> {
    let u = universe(TypeArgs { genus: g, markings: n })?;
    let rel = specialization_relation(&u)?;
    if json {
        let mut buf = Vec::new();
        rel.write_jsonl(&u, &mut buf)?;
        let text = String::from_utf8(buf).map_err(|e| Error::Consistency(e.to_string()))?;
        return Ok(Report::ok(text));
    }
    let mut s = String::new();
    writeln!(s, "{:>6}  {:>6}  {:>4}", "target", "source", "maps").unwrap();
    for e in rel.entries() {
        writeln!(s, "{:>6}  {:>6}  {:>4}", e.target, e.source, e.maps.len()).unwrap();
    }
    write!(s, "{} pair(s), {} map(s)", rel.entries().len(), rel.map_count()).unwrap();
    Ok(Report::ok(s))
}

fn assignment_table(m: &Moduli, a: &ExtremalAssignment) -> String {
    let u = m.universe();
    let mut s = String::new();
    let mut any = false;
    for i in 0..u.len() {
        if !a.selected(i).is_empty() {
            any = true;
            writeln!(s, "{:>5}  {}  selected {:?}", i, u.graph(i), a.selected(i)).unwrap();
        }
    }
    if !any {
        writeln!(s, "nothing selected").unwrap();
    }
    s
}

fn assignment_value(m: &Moduli, a: &ExtremalAssignment) -> Value {
    serde_json::from_str(&a.to_json(m.universe())).expect("assignment JSON is valid")
}

fn assign(cmd: &AssignCommand, json: bool) -> Result<Report> {
    match cmd {
        AssignCommand::Builtin { name, ty, k } => {
            let m = moduli(ty.genus, ty.markings)?;
            let a = m.builtin(name, *k)?;
            if json {
                return Ok(Report::ok(a.to_json(m.universe())));
            }
            Ok(Report::ok(format!("{} on type ({}, {})\n{}", name, ty.genus, ty.markings, assignment_table(&m, &a))))
        }
        AssignCommand::Check { file } => {
            let (m, a) = read_assignment(file)?;
            let report = m.check_axioms(&a)?;
            let code = if report.passed() { EXIT_OK } else { EXIT_CHECK };
            let text = if json {
                let violations: Vec<Value> = report
                    .violations
                    .iter()
                    .map(|v| json!({"axiom": v.axiom(), "description": v.describe(&m)}))
                    .collect();
                compact(&json!({
                    "g": m.genus(),
                    "n": m.marking_count(),
                    "passed": report.passed(),
                    "violations": violations,
                    "version": VERSION,
                }))
            } else {
                let mut s = String::new();
                for v in &report.violations {
                    writeln!(s, "{}", v.describe(&m)).unwrap();
                }
                write!(s, "{}", report).unwrap();
                s
            };
            Ok(Report { text, code })
        }
        AssignCommand::Evaluate { file, graph } => {
            let (m, a) = read_assignment(file)?;
            let g = read_graph(graph)?;
            let selected = m.evaluate(&a, &g)?;
            if json {
                return Ok(Report::ok(compact(&json!({"graph": graph_value(&g), "selected": selected}))));
            }
            Ok(Report::ok(format!("{}\nselected {:?}", g, selected)))
        }
        AssignCommand::Enumerate { ty, node_budget } => {
            let m = moduli(ty.genus, ty.markings)?;
            let all = match node_budget {
                Some(b) => m.enumerate_assignments_with_budget(*b)?,
                None => m.enumerate_assignments()?,
            };
            if json {
                let list: Vec<Value> = all.iter().map(|a| assignment_value(&m, a)).collect();
                return Ok(Report::ok(compact(&json!({
                    "g": ty.genus,
                    "n": ty.markings,
                    "count": list.len(),
                    "assignments": list,
                    "version": VERSION,
                }))));
            }
            let mut s = String::new();
            for (k, a) in all.iter().enumerate() {
                writeln!(s, "assignment {}", k).unwrap();
                s.push_str(&assignment_table(&m, a));
            }
            write!(s, "{} assignment(s) of type ({}, {})", all.len(), ty.genus, ty.markings).unwrap();
            Ok(Report::ok(s))
        }
        AssignCommand::Propagate { ty, seeds } => {
            let m = moduli(ty.genus, ty.markings)?;
            match m.propagate(seeds)? {
                Propagation::Consistent { assignment, undetermined } => {
                    let text = if json {
                        compact(&json!({
                            "status": "consistent",
                            "assignment": assignment_value(&m, &assignment),
                            "undetermined": undetermined,
                            "version": VERSION,
                        }))
                    } else {
                        format!(
                            "consistent; {} orbit(s) undetermined\n{}",
                            undetermined.len(),
                            assignment_table(&m, &assignment)
                        )
                    };
                    Ok(Report::ok(text))
                }
                Propagation::Contradiction(list) => {
                    let text = if json {
                        let items: Vec<Value> = list.iter().map(contradiction_value).collect();
                        compact(&json!({"status": "contradiction", "contradictions": items, "version": VERSION}))
                    } else {
                        contradiction_table(&m, &list)
                    };
                    Ok(Report { text, code: EXIT_CHECK })
                }
            }
        }
    }
}

fn cause_value(c: &Cause) -> Value {
    match c {
        Cause::Seed => json!({"kind": "seed"}),
        Cause::WholeCurve { graph } => json!({"kind": "whole_curve", "graph": graph}),
        Cause::Specialization {
            target,
            source,
            contracted_edges,
            fibers,
            vertex,
        } => json!({
            "kind": "specialization",
            "target": target,
            "source": source,
            "contracted_edges": contracted_edges,
            "fibers": fibers,
            "vertex": vertex,
        }),
    }
}

fn conflict_value(c: &Conflict) -> Value {
    match *c {
        Conflict::WholeCurve { graph } => json!({"kind": "whole_curve", "graph": graph}),
        Conflict::Clash { graph, orbit } => json!({"kind": "clash", "graph": graph, "orbit": orbit}),
    }
}

fn contradiction_value(c: &Contradiction) -> Value {
    let chain: Vec<Value> = c
        .chain
        .iter()
        .map(|s| {
            json!({
                "graph": s.graph,
                "orbit": s.orbit,
                "vertices": s.vertices,
                "value": s.value,
                "cause": cause_value(&s.cause),
            })
        })
        .collect();
    json!({"chain": chain, "conflict": conflict_value(&c.conflict), "graphs": c.graphs()})
}

fn contradiction_table(m: &Moduli, list: &[Contradiction]) -> String {
    let u = m.universe();
    let mut s = String::new();
    writeln!(s, "contradiction; {} conflicting chain(s)", list.len()).unwrap();
    for (k, c) in list.iter().enumerate() {
        writeln!(s, "chain {}:", k).unwrap();
        for step in &c.chain {
            let why = match &step.cause {
                Cause::Seed => "seed".to_string(),
                Cause::WholeCurve { .. } => "otherwise the whole curve is selected".to_string(),
                Cause::Specialization { target, source, vertex, .. } => {
                    format!("contracting graph {} onto vertex {} of graph {}", source, vertex, target)
                }
            };
            writeln!(
                s,
                "  graph {} {} vertices {:?} = {} ({})",
                step.graph,
                u.graph(step.graph),
                step.vertices,
                step.value,
                why
            )
            .unwrap();
        }
        match c.conflict {
            Conflict::WholeCurve { graph } => writeln!(s, "  conflict: every vertex of graph {} selected", graph).unwrap(),
            Conflict::Clash { graph, orbit } => {
                writeln!(s, "  conflict: orbit {} of graph {} forced both ways", orbit, graph).unwrap()
            }
        }
    }
    s
}

fn cone(report: ConeReport, ty: TypeArgs, index: Option<usize>, zero_only: bool, json: bool) -> Result<Report> {
    let u = universe(ty)?;
    let cone = nef_cone(&u, zero_only)?;
    let symbols = cone.basis.symbols();
    match report {
        ConeReport::Rays => {
            if json {
                return Ok(Report::ok(compact(&cone_report_json(&cone, None))));
            }
            let mut s = String::new();
            writeln!(s, "basis [{}]", symbols.join(", ")).unwrap();
            for (k, r) in cone.rays.iter().enumerate() {
                writeln!(s, "ray {}: {:?}", k, r).unwrap();
            }
            write!(s, "{} ray(s), {} facet(s)", cone.rays.len(), cone.facets.len()).unwrap();
            Ok(Report::ok(s))
        }
        ConeReport::Faces => {
            let faces = curve_cone_faces(&cone)?;
            if json {
                return Ok(Report::ok(compact(&cone_report_json(&cone, Some(&faces)))));
            }
            let mut s = String::new();
            writeln!(s, "basis [{}]", symbols.join(", ")).unwrap();
            writeln!(s, "{:>5}  {:>5}  {:<12}  witness", "face", "codim", "rays").unwrap();
            for (k, f) in faces.iter().enumerate() {
                writeln!(s, "{:>5}  {:>5}  {:<12}  {:?}", k, f.codimension, format!("{:?}", f.rays), f.witness).unwrap();
            }
            write!(s, "{} face(s)", faces.len()).unwrap();
            Ok(Report::ok(s))
        }
        ConeReport::FaceAssignment => {
            let k = index.ok_or_else(|| Error::Input("face-assignment needs --index".into()))?;
            let faces = curve_cone_faces(&cone)?;
            let face = faces
                .get(k)
                .ok_or_else(|| Error::Input(format!("face index {} out of range ({} faces)", k, faces.len())))?;
            let m = Moduli::from_universe(u)?;
            let a = face_assignment(&m, &cone.basis, face)?;
            if json {
                return Ok(Report::ok(a.to_json(m.universe())));
            }
            Ok(Report::ok(format!(
                "face {} witness {:?} in basis [{}]\n{}",
                k,
                face.witness,
                symbols.join(", "),
                assignment_table(&m, &a)
            )))
        }
    }
}

fn model(cmd: &ModelCommand, json: bool) -> Result<Report> {
    match cmd {
        ModelCommand::Contract { graph, select } => {
            let g = read_graph(graph)?;
            let model = contract_model(&g, select)?;
            let inv = if select.is_empty() { None } else { Some(subcurve_invariants(&g, select)?) };
            if json {
                let model_value: Value = serde_json::from_str(&model.to_json()).expect("model JSON is valid");
                let inv_value = inv.map(|i| json!({"p_a": i.p_a, "attachments": i.attachments, "markings": i.markings}));
                return Ok(Report::ok(compact(&json!({
                    "graph": graph_value(&g),
                    "selected": select,
                    "invariants": inv_value,
                    "model": model_value,
                    "arithmetic_genus": model.arithmetic_genus(),
                    "version": VERSION,
                }))));
            }
            let mut s = String::new();
            writeln!(s, "{}", g).unwrap();
            if let Some(i) = inv {
                writeln!(s, "subcurve: p_a {}, {} attachment(s), {} marking(s)", i.p_a, i.attachments, i.markings).unwrap();
            }
            s.push_str(&model.to_string());
            write!(s, "arithmetic genus {}", model.arithmetic_genus()).unwrap();
            Ok(Report::ok(s))
        }
        ModelCommand::Summary { assignment } => {
            let (m, a) = read_assignment(assignment)?;
            let summary = zstable_summary(&m, &a)?;
            if json {
                let types: Vec<Value> = summary
                    .types
                    .iter()
                    .map(|(t, graphs)| {
                        json!({
                            "g": t.g,
                            "m": t.m,
                            "markings": t.markings,
                            "graphs": graphs,
                            "catalog": crate::zmodel::singularity_catalog(t.g, t.m),
                        })
                    })
                    .collect();
                return Ok(Report::ok(compact(&json!({
                    "g": m.genus(),
                    "n": m.marking_count(),
                    "types": types,
                    "version": VERSION,
                }))));
            }
            let mut s = String::new();
            for (t, graphs) in &summary.types {
                writeln!(
                    s,
                    "type ({}, {}) with {} marking(s): {} [graphs {:?}]",
                    t.g,
                    t.m,
                    t.markings,
                    crate::zmodel::singularity_catalog(t.g, t.m).summary(),
                    graphs
                )
                .unwrap();
            }
            write!(s, "{} point type(s)", summary.types.len()).unwrap();
            Ok(Report::ok(s))
        }
    }
}

fn cache(cmd: &CacheCommand, json: bool) -> Result<Report> {
    let cache = Cache::from_env();
    match cmd {
        CacheCommand::Status => {
            let entries = cache.status()?;
            if json {
                let list: Vec<Value> = entries
                    .iter()
                    .map(|e| json!({"g": e.g, "n": e.n, "graphs": e.graphs, "path": e.path}))
                    .collect();
                return Ok(Report::ok(compact(&json!({"root": cache.root(), "entries": list}))));
            }
            let mut s = String::new();
            writeln!(s, "cache at {}", cache.root().display()).unwrap();
            for e in &entries {
                writeln!(s, "({}, {}): {} graph(s)", e.g, e.n, e.graphs).unwrap();
            }
            write!(s, "{} file(s)", entries.len()).unwrap();
            Ok(Report::ok(s))
        }
        CacheCommand::Clear => {
            let removed = cache.clear()?;
            if json {
                return Ok(Report::ok(compact(&json!({"removed": removed}))));
            }
            Ok(Report::ok(format!("removed {} file(s)", removed)))
        }
    }
}
