//! The batch driver behind the `hotg` binary: resolves imports, checks
//! articles in dependency order, and emits reports, digests and canonical
//! exports. Also usable as a library (see `examples/check_stdlib.rs`).

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::canonical::{self, decl_record, sha256_hex};
use crate::kernel::{Decl, Signature};
use crate::script::elaborate;
use crate::syntax::ast::{ADecl, Article};
use crate::syntax::desugar::{desugar, desugar_type, Env};
use crate::syntax::parse_article;
use crate::term::Type;

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub root: PathBuf,
    pub export_dir: Option<PathBuf>,
    pub digest: bool,
    pub trust_imports: bool,
    pub jobs: usize,
    pub json: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            root: PathBuf::from("."),
            export_dir: None,
            digest: false,
            trust_imports: false,
            jobs: 1,
            json: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ArticleStatus {
    Ok,
    Failed { at: String, error: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ArticleReport {
    pub name: String,
    #[serde(flatten)]
    pub status: ArticleStatus,
    pub proved: usize,
    pub trusted: Vec<String>,
    pub digest: Option<String>,
    pub wall_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub articles: Vec<ArticleReport>,
    pub proved: usize,
    pub trusted: Vec<TrustedEntry>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrustedEntry {
    pub name: String,
    pub article: String,
}

impl CheckReport {
    /// Line-oriented text rendering; identical across runs except for the
    /// wall-time fields.
    pub fn render_text(&self, digests: bool) -> String {
        let mut out = String::new();
        for a in &self.articles {
            match &a.status {
                ArticleStatus::Ok => {
                    let _ = writeln!(
                        out,
                        "article {}: ok ({} proved, {} trusted) [{} ms]",
                        a.name,
                        a.proved,
                        a.trusted.len(),
                        a.wall_ms
                    );
                }
                ArticleStatus::Failed { at, error } => {
                    let _ = writeln!(out, "article {}: FAILED at {at}: {error}", a.name);
                }
            }
        }
        let ok = self.articles.iter().filter(|a| a.status == ArticleStatus::Ok).count();
        let _ = writeln!(
            out,
            "checked {} articles: {} ok, {} failed",
            self.articles.len(),
            ok,
            self.articles.len() - ok
        );
        let _ = writeln!(out, "proved theorems: {}", self.proved);
        if self.trusted.is_empty() {
            let _ = writeln!(out, "trusted imports: none");
        } else {
            let list: Vec<String> = self
                .trusted
                .iter()
                .map(|t| format!("{} ({})", t.name, t.article))
                .collect();
            let _ = writeln!(out, "trusted imports ({}): {}", list.len(), list.join(", "));
        }
        if digests {
            for a in &self.articles {
                if let Some(d) = &a.digest {
                    let _ = writeln!(out, "{} {}", a.name, d);
                }
            }
        }
        out
    }
}

/// A failure while checking one declaration.
#[derive(Clone, Debug)]
pub struct DeclFailure {
    pub decl: String,
    pub message: String,
}

pub struct ArticleStats {
    pub proved: usize,
    pub trusted: Vec<String>,
}

/// Checks every declaration of a parsed article against (and into) `sig`.
pub fn check_decls(sig: &mut Signature, article: &Article) -> Result<ArticleStats, DeclFailure> {
    let mut proved = 0;
    let mut trusted = Vec::new();
    for decl in &article.decls {
        match decl {
            ADecl::Import(..) => {}
            ADecl::Definition { name, ty_vars, ty, body, opacity, .. } => {
                let fail = |m: String| DeclFailure {
                    decl: format!("Definition {name}"),
                    message: m,
                };
                let mut env = Env::new(sig, ty_vars);
                let declared = desugar_type(&env, ty).map_err(|e| fail(e.to_string()))?;
                let (b, _) = desugar(&mut env, body).map_err(|e| fail(e.to_string()))?;
                sig.add_definition(name, ty_vars.len() as u8, declared, b, *opacity)
                    .map_err(|e| fail(e.to_string()))?;
            }
            ADecl::Theorem { name, ty_vars, statement, script, pos } => {
                let fail = |m: String| DeclFailure {
                    decl: format!("Theorem {name}"),
                    message: m,
                };
                let mut env = Env::new(sig, ty_vars);
                let (stmt, ty) =
                    desugar(&mut env, statement).map_err(|e| fail(e.to_string()))?;
                if ty != Type::Prop {
                    return Err(fail(format!("{}: statement is not a proposition", pos)));
                }
                let proof = elaborate(sig, ty_vars, stmt.clone(), script)
                    .map_err(|e| fail(e.to_string()))?;
                sig.add_theorem(name, ty_vars.len() as u8, stmt, proof)
                    .map_err(|e| fail(e.to_string()))?;
                proved += 1;
            }
            ADecl::Trusted { name, ty_vars, statement, .. } => {
                let fail = |m: String| DeclFailure {
                    decl: format!("Trusted {name}"),
                    message: m,
                };
                let mut env = Env::new(sig, ty_vars);
                let (stmt, _) = desugar(&mut env, statement).map_err(|e| fail(e.to_string()))?;
                sig.add_trusted_import(name, ty_vars.len() as u8, stmt)
                    .map_err(|e| fail(e.to_string()))?;
                trusted.push(name.clone());
            }
        }
    }
    Ok(ArticleStats { proved, trusted })
}

/// A fully checked article: its own declarations plus report data.
#[derive(Clone, Debug)]
pub struct CheckedArticle {
    pub name: String,
    pub decls: Vec<Decl>,
    pub canonical: Vec<u8>,
    pub digest: String,
    pub report: ArticleReport,
}

enum Loaded {
    Parsed(Article),
    Broken(String),
}

struct Graph {
    names: Vec<String>, // discovery order (requested first, depth-first imports)
    loaded: HashMap<String, Loaded>,
    edges: HashMap<String, Vec<String>>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn article_name(path: &Path) -> Result<String, UsageError> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(|s| s.to_string())
        .ok_or_else(|| UsageError(format!("cannot derive an article name from {}", path.display())))
}

fn gather(paths: &[PathBuf], root: &Path) -> Result<Graph, UsageError> {
    let mut graph = Graph {
        names: Vec::new(),
        loaded: HashMap::new(),
        edges: HashMap::new(),
    };
    let mut queue: Vec<(String, PathBuf, bool)> = Vec::new();
    for p in paths {
        queue.push((article_name(p)?, p.clone(), true));
    }
    while let Some((name, path, requested)) = queue.pop() {
        if graph.loaded.contains_key(&name) {
            continue;
        }
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if requested => {
                return Err(UsageError(format!("cannot read {}: {e}", path.display())));
            }
            Err(e) => {
                graph.names.push(name.clone());
                graph
                    .loaded
                    .insert(name.clone(), Loaded::Broken(format!("missing import: {e}")));
                graph.edges.insert(name, Vec::new());
                continue;
            }
        };
        graph.names.push(name.clone());
        match parse_article(&text) {
            Ok(article) => {
                let imports: Vec<String> = article.imports().map(|s| s.to_string()).collect();
                for imp in &imports {
                    queue.push((imp.clone(), root.join(format!("{imp}.hotg")), false));
                }
                graph.edges.insert(name.clone(), imports);
                graph.loaded.insert(name, Loaded::Parsed(article));
            }
            Err(e) => {
                graph.loaded.insert(name.clone(), Loaded::Broken(format!("parse error: {e}")));
                graph.edges.insert(name, Vec::new());
            }
        }
    }
    Ok(graph)
}

/// Topological order, dependencies first. Articles on an import cycle are
/// reported broken rather than ordered.
fn topo_order(graph: &mut Graph) -> Vec<String> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    let mut marks: HashMap<String, Mark> =
        graph.names.iter().map(|n| (n.clone(), Mark::White)).collect();
    let mut order = Vec::new();
    let mut broken_cycles: Vec<String> = Vec::new();

    // Iterative DFS with an explicit stack to keep cycles detectable.
    fn visit(
        n: &str,
        graph: &Graph,
        marks: &mut HashMap<String, Mark>,
        order: &mut Vec<String>,
        cycles: &mut Vec<String>,
    ) {
        match marks.get(n).copied() {
            Some(Mark::Black) => return,
            Some(Mark::Gray) => {
                cycles.push(n.to_string());
                return;
            }
            _ => {}
        }
        marks.insert(n.to_string(), Mark::Gray);
        if let Some(deps) = graph.edges.get(n) {
            for d in deps {
                visit(d, graph, marks, order, cycles);
            }
        }
        marks.insert(n.to_string(), Mark::Black);
        order.push(n.to_string());
    }

    let names = graph.names.clone();
    for n in &names {
        visit(n, graph, &mut marks, &mut order, &mut broken_cycles);
    }
    for n in broken_cycles {
        graph
            .loaded
            .insert(n.clone(), Loaded::Broken("import cycle detected".to_string()));
    }
    order
}

fn transitive_imports(
    name: &str,
    edges: &HashMap<String, Vec<String>>,
    order_index: &HashMap<String, usize>,
) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut stack: Vec<&str> = edges.get(name).map(|v| v.iter().map(|s| s.as_str()).collect()).unwrap_or_default();
    while let Some(n) = stack.pop() {
        if seen.insert(n.to_string()) {
            if let Some(deps) = edges.get(n) {
                stack.extend(deps.iter().map(|s| s.as_str()));
            }
        }
    }
    let mut v: Vec<String> = seen.into_iter().collect();
    v.sort_by_key(|n| order_index.get(n).copied().unwrap_or(usize::MAX));
    v
}

fn check_one(
    name: &str,
    article: &Article,
    closure: &[String],
    direct: &[String],
    checked: &HashMap<String, CheckedArticle>,
    trust: bool,
) -> CheckedArticle {
    let start = Instant::now();
    let mut failed: Option<(String, String)> = None;

    // Assemble the import closure. Every declaration appended here was
    // verified when its own article was checked against a prefix of the
    // same closure.
    let mut sig = Signature::new(trust);
    'base: for dep in closure {
        match checked.get(dep) {
            Some(c) if c.report.status == ArticleStatus::Ok => {
                for d in &c.decls {
                    if let Err(e) = sig.push_unchecked(d.clone()) {
                        failed = Some((format!("Import {dep}"), e.to_string()));
                        break 'base;
                    }
                }
            }
            _ => {
                failed = Some((format!("Import {dep}"), format!("import {dep} failed")));
                break 'base;
            }
        }
    }

    let before = sig.decls().len();
    let mut stats = ArticleStats { proved: 0, trusted: Vec::new() };
    if failed.is_none() {
        match check_decls(&mut sig, article) {
            Ok(s) => stats = s,
            Err(e) => failed = Some((e.decl, e.message)),
        }
    }

    let wall_ms = start.elapsed().as_millis();
    match failed {
        Some((at, error)) => CheckedArticle {
            name: name.to_string(),
            decls: Vec::new(),
            canonical: Vec::new(),
            digest: String::new(),
            report: ArticleReport {
                name: name.to_string(),
                status: ArticleStatus::Failed { at, error },
                proved: 0,
                trusted: Vec::new(),
                digest: None,
                wall_ms,
            },
        },
        None => {
            let own: Vec<Decl> = sig.decls()[before..].to_vec();
            let mut bytes = format!("{}\narticle {name}\n", canonical::HEADER);
            for dep in direct {
                let dep_digest = checked
                    .get(dep)
                    .map(|c| c.digest.clone())
                    .unwrap_or_default();
                let _ = writeln!(bytes, "import {dep} {dep_digest}");
            }
            for d in &own {
                bytes.push_str(&decl_record(d));
                bytes.push('\n');
            }
            let bytes = bytes.into_bytes();
            let digest = sha256_hex(&bytes);
            CheckedArticle {
                name: name.to_string(),
                decls: own,
                canonical: bytes,
                digest: digest.clone(),
                report: ArticleReport {
                    name: name.to_string(),
                    status: ArticleStatus::Ok,
                    proved: stats.proved,
                    trusted: stats.trusted,
                    digest: Some(digest),
                    wall_ms,
                },
            }
        }
    }
}

/// Checks the requested articles and their imports. Returns the report and
/// the process exit code (0 full success, 1 check failure, 2 usage/IO).
pub fn run_check(paths: &[PathBuf], opts: &CheckOptions) -> Result<(CheckReport, i32), UsageError> {
    if paths.is_empty() {
        return Err(UsageError("no input articles given".into()));
    }
    let mut graph = gather(paths, &opts.root)?;
    let order = topo_order(&mut graph);
    let order_index: HashMap<String, usize> =
        order.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();

    // Depth in the import DAG, for wave-parallel checking.
    let mut depth: HashMap<String, usize> = HashMap::new();
    for n in &order {
        let d = graph
            .edges
            .get(n)
            .map(|deps| deps.iter().map(|d| depth.get(d).map_or(0, |x| x + 1)).max().unwrap_or(0))
            .unwrap_or(0);
        depth.insert(n.clone(), d);
    }
    let max_depth = depth.values().copied().max().unwrap_or(0);

    let mut checked: HashMap<String, CheckedArticle> = HashMap::new();
    let jobs = opts.jobs.max(1);
    for level in 0..=max_depth {
        let wave: Vec<&String> = order.iter().filter(|n| depth[n.as_str()] == level).collect();
        for chunk in wave.chunks(jobs) {
            let results: Vec<CheckedArticle> = std::thread::scope(|scope| {
                let handles: Vec<_> = chunk
                    .iter()
                    .map(|name| {
                        let checked = &checked;
                        let graph = &graph;
                        let order_index = &order_index;
                        scope.spawn(move || match graph.loaded.get(name.as_str()) {
                            Some(Loaded::Parsed(article)) => {
                                let closure = transitive_imports(name, &graph.edges, order_index);
                                let direct = graph.edges.get(name.as_str()).cloned().unwrap_or_default();
                                check_one(name, article, &closure, &direct, checked, opts.trust_imports)
                            }
                            Some(Loaded::Broken(err)) => CheckedArticle {
                                name: name.to_string(),
                                decls: Vec::new(),
                                canonical: Vec::new(),
                                digest: String::new(),
                                report: ArticleReport {
                                    name: name.to_string(),
                                    status: ArticleStatus::Failed {
                                        at: "load".into(),
                                        error: err.clone(),
                                    },
                                    proved: 0,
                                    trusted: Vec::new(),
                                    digest: None,
                                    wall_ms: 0,
                                },
                            },
                            None => unreachable!("article in order but not loaded"),
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("checker thread panicked")).collect()
            });
            for c in results {
                checked.insert(c.name.clone(), c);
            }
        }
    }

    // Report in dependency order, stable across runs.
    let mut articles = Vec::new();
    let mut proved = 0;
    let mut trusted = Vec::new();
    for n in &order {
        let c = &checked[n.as_str()];
        proved += c.report.proved;
        for t in &c.report.trusted {
            trusted.push(TrustedEntry { name: t.clone(), article: n.clone() });
        }
        articles.push(c.report.clone());
    }
    let ok = articles.iter().all(|a| a.status == ArticleStatus::Ok);

    if let Some(dir) = &opts.export_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| UsageError(format!("cannot create {}: {e}", dir.display())))?;
        for n in &order {
            let c = &checked[n.as_str()];
            if c.report.status == ArticleStatus::Ok {
                let path = dir.join(format!("{n}.hotgc"));
                std::fs::write(&path, &c.canonical)
                    .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
            }
        }
    }

    let report = CheckReport { articles, proved, trusted, ok };
    let code = if ok { 0 } else { 1 };
    Ok((report, code))
}

/// Convenience for tests and examples: checks a list of stdlib articles from
/// a root directory and returns the final signature on success.
pub fn check_chain(
    root: &Path,
    names: &[&str],
    trust: bool,
) -> Result<(Signature, CheckReport), String> {
    let paths: Vec<PathBuf> = names.iter().map(|n| root.join(format!("{n}.hotg"))).collect();
    let opts = CheckOptions {
        root: root.to_path_buf(),
        trust_imports: trust,
        ..CheckOptions::default()
    };
    let (report, code) = run_check(&paths, &opts).map_err(|e| e.to_string())?;
    if code != 0 {
        return Err(report.render_text(false));
    }
    // Rebuild one cumulative signature in dependency order.
    let mut graph = gather(&paths, root).map_err(|e| e.to_string())?;
    let order = topo_order(&mut graph);
    let mut sig = Signature::new(trust);
    for n in &order {
        if let Some(Loaded::Parsed(article)) = graph.loaded.get(n.as_str()) {
            check_decls(&mut sig, article).map_err(|e| format!("{n}: {}: {}", e.decl, e.message))?;
        }
    }
    Ok((sig, report))
}
