//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 no match, 3 unreadable
//! input (I/O, JSON or usage error). Results go to standard output as JSON
//! (DOT for `export-dot`), diagnostics to standard error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::enumerate_instances;
use crate::graph::{GraphMap, TypedGraph};
use crate::io::{export_dot, parse_graph, parse_rule, to_json, GraphDocument, IoError, ParsedGraph, ParsedRule};
use crate::matching::{find_pattern_matchings, MatchConfig};
use crate::pattern::Instantiation;
use crate::rewriting::{normalize, rewrite_with_pattern, DpoTrace, NormalizeOptions, Outcome, RewritePattern};

#[derive(Parser, Debug)]
#[command(name = "bangbox", version, about = "String graphs with !-boxes: matching and rewriting")]
struct Cli {
    /// Write results into this directory instead of standard output.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph or rule document.
    Validate { file: PathBuf },
    /// List the concrete instances of a pattern, up to isomorphism.
    Instances {
        file: PathBuf,
        /// Largest instance, in node- and wire-vertices.
        #[arg(long)]
        bound: usize,
    },
    /// Find matches of a pattern in a host graph.
    Match {
        pattern: PathBuf,
        host: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Rewrite a host graph with a rule.
    Rewrite {
        rule: PathBuf,
        host: PathBuf,
        /// Rewrite at every match instead of the first.
        #[arg(long)]
        all: bool,
        /// Write the double-pushout traces to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Rewrite until no rule applies.
    Normalize {
        host: PathBuf,
        /// Directory of rule documents, applied in file-name order.
        #[arg(long)]
        rules: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        /// Contract wires to minimal length before each step.
        #[arg(long)]
        normalize_wires: bool,
    },
    /// Render a graph document as Graphviz DOT.
    ExportDot { file: PathBuf },
}

enum Failure {
    Invalid(String),
    NoMatch,
    Unreadable(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e.exit_code() {
            3 => Failure::Unreadable(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

struct Output {
    name: &'static str,
    text: String,
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

fn load_graph(path: &Path) -> Result<ParsedGraph, Failure> {
    let parsed = parse_graph(&read(path)?).map_err(|e| with_path(path, e))?;
    for c in &parsed.completions {
        eprintln!("{}: note: {c}", path.display());
    }
    Ok(parsed)
}

fn load_rule(path: &Path) -> Result<ParsedRule, Failure> {
    let parsed = parse_rule(&read(path)?).map_err(|e| with_path(path, e))?;
    for c in &parsed.completions {
        eprintln!("{}: note: {c}", path.display());
    }
    Ok(parsed)
}

fn with_path(path: &Path, e: IoError) -> Failure {
    let text = format!("{}: {e}", path.display());
    match e.exit_code() {
        3 => Failure::Unreadable(text),
        _ => Failure::Invalid(text),
    }
}

fn load_host(path: &Path) -> Result<TypedGraph, Failure> {
    let g = load_graph(path)?.graph;
    if !g.is_concrete() {
        return Err(Failure::Invalid(format!("{}: host graph has !-boxes", path.display())));
    }
    Ok(g.into_graph())
}

#[derive(Serialize)]
struct MatchDoc<'a> {
    instantiation: &'a Instantiation,
    matching: &'a GraphMap,
}

fn trace_doc(t: &DpoTrace, s: &Instantiation) -> Value {
    json!({
        "rule": t.rule,
        "step": t.step,
        "instantiation": s,
        "matching": t.matching,
        "complement": GraphDocument::encode(&t.complement),
        "interface_to_complement": t.interface_to_complement,
        "rhs_to_result": t.rhs_to_result,
        "result": GraphDocument::encode(&t.result),
    })
}

fn validate(file: &Path) -> Result<Output, Failure> {
    let text = read(file)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        Failure::Unreadable(format!("{}: line {}, column {}: {e}", file.display(), e.line(), e.column()))
    })?;
    let report = if value.get("lhs").is_some() {
        let r = load_rule(file)?;
        json!({
            "valid": true,
            "kind": "rewrite-pattern",
            "boxes": r.rule.interface.bangs().count(),
            "completions": r.completions,
        })
    } else {
        let g = load_graph(file)?;
        json!({
            "valid": true,
            "kind": if g.graph.is_concrete() { "string-graph" } else { "pattern-graph" },
            "vertices": g.graph.graph().vertex_count(),
            "edges": g.graph.graph().edge_count(),
            "boundary": g.graph.graph().boundary(),
            "completions": g.completions,
        })
    };
    Ok(Output { name: "validate.json", text: to_json(&report) })
}

fn instances(file: &Path, bound: usize) -> Result<Output, Failure> {
    let p = load_graph(file)?.graph;
    let docs: Vec<Value> = enumerate_instances(&p, bound)
        .map(|(g, s)| json!({ "instantiation": s, "graph": GraphDocument::encode(&g) }))
        .collect();
    Ok(Output { name: "instances.json", text: to_json(&docs) })
}

fn find_matches(pattern: &Path, host: &Path, limit: Option<usize>) -> Result<Output, Failure> {
    let p = load_graph(pattern)?.graph;
    let h = load_host(host)?;
    let found: Vec<_> =
        find_pattern_matchings(&p, &h, MatchConfig::default()).take(limit.unwrap_or(usize::MAX)).collect();
    if found.is_empty() {
        return Err(Failure::NoMatch);
    }
    let docs: Vec<MatchDoc> =
        found.iter().map(|m| MatchDoc { instantiation: &m.instantiation, matching: &m.matching }).collect();
    Ok(Output { name: "matches.json", text: to_json(&docs) })
}

fn rewrite(
    rule: &Path,
    host: &Path,
    all: bool,
    trace: Option<&Path>,
    out_dir: Option<&Path>,
) -> Result<Output, Failure> {
    let rp = load_rule(rule)?.rule;
    let h = load_host(host)?;
    let mut results = Vec::new();
    let mut traces = Vec::new();
    for item in rewrite_with_pattern(&rp, &h, 0).take(if all { usize::MAX } else { 1 }) {
        let (pm, t) = item.map_err(|e| Failure::Invalid(e.to_string()))?;
        results.push(GraphDocument::encode(&t.result));
        traces.push(trace_doc(&t, &pm.instantiation));
    }
    if results.is_empty() {
        return Err(Failure::NoMatch);
    }
    if let Some(path) = trace {
        write_file(&resolve(out_dir, path), &to_json(&traces))?;
    }
    let text = if all { to_json(&results) } else { to_json(&results[0]) };
    Ok(Output { name: "rewrite.json", text })
}

fn load_rules(dir: &Path) -> Result<Vec<RewritePattern>, Failure> {
    let entries = fs::read_dir(dir).map_err(|source| IoError::File { path: dir.display().to_string(), source })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_rule(p).map(|r| r.rule)).collect()
}

fn run_normalize(host: &Path, rules: &Path, max_steps: usize, normalize_wires: bool) -> Result<Output, Failure> {
    let h = load_host(host)?;
    let rules = load_rules(rules)?;
    let opts = NormalizeOptions { max_steps, normalize_wires, ..Default::default() };
    let d = normalize(&h, &rules, opts).map_err(|e| Failure::Invalid(e.to_string()))?;
    let report = json!({
        "steps": d.steps.len(),
        "outcome": match d.outcome {
            Outcome::NormalForm => "normal-form",
            Outcome::StepLimit => "step-limit",
        },
        "rules_applied": d.steps.iter().map(|t| t.rule.as_str()).collect::<Vec<_>>(),
        "graph": GraphDocument::encode(&d.graph),
    });
    if d.outcome == Outcome::StepLimit {
        eprintln!("note: stopped after {max_steps} steps with rules still applicable");
    }
    Ok(Output { name: "normalize.json", text: to_json(&report) })
}

fn resolve(out_dir: Option<&Path>, path: &Path) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Failure::Unreadable(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure::Unreadable(format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Instances { file, bound } => instances(file, *bound),
        Command::Match { pattern, host, limit } => find_matches(pattern, host, *limit),
        Command::Rewrite { rule, host, all, trace } => rewrite(rule, host, *all, trace.as_deref(), out_dir),
        Command::Normalize { host, rules, max_steps, normalize_wires } => {
            run_normalize(host, rules, *max_steps, *normalize_wires)
        }
        Command::ExportDot { file } => {
            let g = load_graph(file)?.graph;
            Ok(Output { name: "graph.dot", text: export_dot(g.graph()) })
        }
    }
}

/// Run the command line `args` (program name first) and return the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(out) => match &cli.out_dir {
            Some(dir) => match write_file(&dir.join(out.name), &out.text) {
                Ok(()) => {
                    eprintln!("wrote {}", dir.join(out.name).display());
                    0
                }
                Err(f) => report(f),
            },
            None => {
                print!("{}", out.text);
                0
            }
        },
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> i32 {
    match f {
        Failure::Invalid(msg) => {
            eprintln!("error: {msg}");
            1
        }
        Failure::NoMatch => {
            println!("[]");
            eprintln!("no match");
            2
        }
        Failure::Unreadable(msg) => {
            eprintln!("error: {msg}");
            3
        }
    }
}
