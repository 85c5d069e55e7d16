//! Canonical line-based serialization of checked signatures.
//!
//! The format is deliberately small so an independent checker can parse it:
//! UTF-8, LF line endings, one declaration per line, terms in fully
//! parenthesized prefix notation with de Bruijn indices. Importing re-checks
//! every proof from scratch; the importer is itself a verifier.
//!
//! ```text
//! hotg-canonical 1
//! article set_defs
//! import prelude_logic 6fe2...
//! def Subq 0 T (ar i (ar i o)) (Lam i (Lam i ...))
//! thm Subq_refl 0 (All i ...) (AllIntro i ...)
//! trusted EM 0 (All o ...)
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::kernel::{Decl, KernelError, Proof, Provenance, Signature};
use crate::term::{ConstName, Name, Opacity, Term, Type};

pub const HEADER: &str = "hotg-canonical 1";

pub fn type_sexpr(ty: &Type) -> String {
    let mut s = String::new();
    write_type(&mut s, ty);
    s
}

fn write_type(out: &mut String, ty: &Type) {
    match ty {
        Type::Prop => out.push('o'),
        Type::Ind => out.push('i'),
        Type::TVar(i) => {
            let _ = write!(out, "(tv {i})");
        }
        Type::Arrow(a, b) => {
            out.push_str("(ar ");
            write_type(out, a);
            out.push(' ');
            write_type(out, b);
            out.push(')');
        }
    }
}

pub fn term_sexpr(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(k) => {
            let _ = write!(out, "(v {k})");
        }
        Term::Const(c, tys) => {
            let _ = write!(out, "(c {}", c.name());
            for ty in tys {
                out.push(' ');
                write_type(out, ty);
            }
            out.push(')');
        }
        Term::Ref(n, tys) => {
            let _ = write!(out, "(r {n}");
            for ty in tys {
                out.push(' ');
                write_type(out, ty);
            }
            out.push(')');
        }
        Term::App(f, a) => {
            out.push_str("(App ");
            write_term(out, f);
            out.push(' ');
            write_term(out, a);
            out.push(')');
        }
        Term::Lam(d, b) => {
            out.push_str("(Lam ");
            write_type(out, d);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        Term::Imp(a, b) => {
            out.push_str("(Imp ");
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        Term::All(d, b) => {
            out.push_str("(All ");
            write_type(out, d);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
    }
}

pub fn proof_sexpr(p: &Proof) -> String {
    let mut s = String::new();
    write_proof(&mut s, p);
    s
}

fn write_proof(out: &mut String, p: &Proof) {
    match p {
        Proof::Hyp(n) => {
            let _ = write!(out, "(Hyp {n})");
        }
        Proof::Known(n, tys) => {
            let _ = write!(out, "(Known {n}");
            for ty in tys {
                out.push(' ');
                write_type(out, ty);
            }
            out.push(')');
        }
        Proof::ImpIntro(n, assumed, body) => {
            let _ = write!(out, "(ImpIntro {n} ");
            write_term(out, assumed);
            out.push(' ');
            write_proof(out, body);
            out.push(')');
        }
        Proof::ImpElim(a, b) => {
            out.push_str("(ImpElim ");
            write_proof(out, a);
            out.push(' ');
            write_proof(out, b);
            out.push(')');
        }
        Proof::AllIntro(d, b) => {
            out.push_str("(AllIntro ");
            write_type(out, d);
            out.push(' ');
            write_proof(out, b);
            out.push(')');
        }
        Proof::AllElim(f, w) => {
            out.push_str("(AllElim ");
            write_proof(out, f);
            out.push(' ');
            write_term(out, w);
            out.push(')');
        }
    }
}

/// One declaration as a single canonical record line (no trailing newline).
pub fn decl_record(decl: &Decl) -> String {
    match decl {
        Decl::Def { name, ty_arity, ty, body, opacity } => {
            let op = match opacity {
                Opacity::Transparent => "T",
                Opacity::Opaque => "O",
            };
            format!(
                "def {name} {ty_arity} {op} {} {}",
                type_sexpr(ty),
                term_sexpr(body)
            )
        }
        Decl::Thm { name, ty_arity, statement, provenance } => match provenance {
            Provenance::Proved(p) => format!(
                "thm {name} {ty_arity} {} {}",
                term_sexpr(statement),
                proof_sexpr(p)
            ),
            Provenance::Trusted => {
                format!("trusted {name} {ty_arity} {}", term_sexpr(statement))
            }
        },
    }
}

/// Serializes the whole signature. Byte-identical across runs and platforms
/// for equal signatures.
pub fn export_canonical(sig: &Signature) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for decl in sig.decls() {
        out.push_str(&decl_record(decl));
        out.push('\n');
    }
    out.into_bytes()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Theorem identity digest: name, type-variable arity and canonical
/// statement bytes. Proofs contribute to article digests but not to this.
pub fn theorem_digest(name: &str, ty_arity: u8, statement: &Term) -> String {
    sha256_hex(format!("{name} {ty_arity} {}", term_sexpr(statement)).as_bytes())
}

#[derive(Debug)]
pub enum ImportError {
    Parse { line: usize, message: String },
    Check { line: usize, name: String, error: KernelError },
}

impl std::fmt::Display for ImportError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ImportError::Parse { line, message } => {
                write!(f, "canonical parse error at line {line}: {message}")
            }
            ImportError::Check { line, name, error } => {
                write!(f, "re-check failed at line {line} ({name}): {error}")
            }
        }
    }
}

impl std::error::Error for ImportError {}

/// Metadata records found alongside declarations.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ImportMeta {
    pub article: Option<String>,
    pub imports: Vec<(String, String)>,
}

/// Replays canonical records into `sig`, re-checking every definition and
/// proof. `article`/`import` metadata lines are collected, not interpreted.
pub fn import_into(bytes: &[u8], sig: &mut Signature) -> Result<ImportMeta, ImportError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ImportError::Parse {
        line: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    let mut meta = ImportMeta::default();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == HEADER => {}
        _ => {
            return Err(ImportError::Parse {
                line: 1,
                message: format!("missing header `{HEADER}`"),
            })
        }
    }
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let mut toks = Tokens::new(line, lineno);
        let kind = toks.atom()?;
        match kind.as_str() {
            "article" => {
                meta.article = Some(toks.atom()?);
                toks.finish()?;
            }
            "import" => {
                let name = toks.atom()?;
                let digest = toks.atom()?;
                toks.finish()?;
                meta.imports.push((name, digest));
            }
            "def" => {
                let name = toks.atom()?;
                let arity = toks.nat()? as u8;
                let op = match toks.atom()?.as_str() {
                    "T" => Opacity::Transparent,
                    "O" => Opacity::Opaque,
                    other => {
                        return Err(toks.fail(format!("bad opacity flag {other}")));
                    }
                };
                let ty = toks.ty()?;
                let body = toks.term()?;
                toks.finish()?;
                sig.add_definition(&name, arity, ty, body, op)
                    .map_err(|error| ImportError::Check { line: lineno, name, error })?;
            }
            "thm" => {
                let name = toks.atom()?;
                let arity = toks.nat()? as u8;
                let stmt = toks.term()?;
                let proof = toks.proof()?;
                toks.finish()?;
                sig.add_theorem(&name, arity, stmt, proof)
                    .map_err(|error| ImportError::Check { line: lineno, name, error })?;
            }
            "trusted" => {
                let name = toks.atom()?;
                let arity = toks.nat()? as u8;
                let stmt = toks.term()?;
                toks.finish()?;
                sig.add_trusted_import(&name, arity, stmt)
                    .map_err(|error| ImportError::Check { line: lineno, name, error })?;
            }
            other => {
                return Err(ImportError::Parse {
                    line: lineno,
                    message: format!("unknown record kind {other}"),
                });
            }
        }
    }
    Ok(meta)
}

/// Reconstructs a signature from canonical bytes, re-checking everything.
pub fn import_canonical(bytes: &[u8], trust: bool) -> Result<Signature, ImportError> {
    let mut sig = Signature::new(trust);
    import_into(bytes, &mut sig)?;
    Ok(sig)
}

struct Tokens<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> Tokens<'a> {
    fn new(line: &'a str, lineno: usize) -> Self {
        Tokens { rest: line, line: lineno }
    }

    fn fail(&self, message: String) -> ImportError {
        ImportError::Parse { line: self.line, message }
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches(' ');
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest.chars().next()
    }

    fn eat(&mut self, c: char) -> Result<(), ImportError> {
        self.skip_ws();
        if let Some(r) = self.rest.strip_prefix(c) {
            self.rest = r;
            Ok(())
        } else {
            Err(self.fail(format!("expected `{c}` at `{}`", truncate(self.rest))))
        }
    }

    fn atom(&mut self) -> Result<String, ImportError> {
        self.skip_ws();
        let end = self
            .rest
            .find(|c: char| c == ' ' || c == '(' || c == ')')
            .unwrap_or(self.rest.len());
        if end == 0 {
            return Err(self.fail(format!("expected atom at `{}`", truncate(self.rest))));
        }
        let (tok, rest) = self.rest.split_at(end);
        self.rest = rest;
        Ok(tok.to_string())
    }

    fn nat(&mut self) -> Result<u32, ImportError> {
        let a = self.atom()?;
        a.parse::<u32>()
            .map_err(|_| self.fail(format!("expected a number, got `{a}`")))
    }

    fn finish(&mut self) -> Result<(), ImportError> {
        self.skip_ws();
        if self.rest.is_empty() {
            Ok(())
        } else {
            Err(self.fail(format!("trailing content `{}`", truncate(self.rest))))
        }
    }

    fn ty(&mut self) -> Result<Type, ImportError> {
        self.skip_ws();
        if self.rest.starts_with('(') {
            self.eat('(')?;
            let head = self.atom()?;
            let ty = match head.as_str() {
                "tv" => {
                    let i = self.nat()?;
                    Type::TVar(i as u8)
                }
                "ar" => {
                    let a = self.ty()?;
                    let b = self.ty()?;
                    Type::arrow(a, b)
                }
                other => return Err(self.fail(format!("unknown type tag {other}"))),
            };
            self.eat(')')?;
            Ok(ty)
        } else {
            match self.atom()?.as_str() {
                "o" => Ok(Type::Prop),
                "i" => Ok(Type::Ind),
                other => Err(self.fail(format!("unknown type atom {other}"))),
            }
        }
    }

    fn ty_list_until_paren(&mut self) -> Result<Vec<Type>, ImportError> {
        let mut tys = Vec::new();
        while self.peek() != Some(')') {
            tys.push(self.ty()?);
        }
        Ok(tys)
    }

    fn term(&mut self) -> Result<Term, ImportError> {
        self.eat('(')?;
        let head = self.atom()?;
        let t = match head.as_str() {
            "v" => Term::Var(self.nat()?),
            "c" => {
                let name = self.atom()?;
                let c = ConstName::from_name(&name)
                    .ok_or_else(|| self.fail(format!("unknown constant {name}")))?;
                Term::Const(c, self.ty_list_until_paren()?)
            }
            "r" => {
                let name = self.atom()?;
                Term::Ref(Name::from(name.as_str()), self.ty_list_until_paren()?)
            }
            "App" => Term::app(self.term()?, self.term()?),
            "Lam" => {
                let d = self.ty()?;
                Term::lam(d, self.term()?)
            }
            "Imp" => Term::imp(self.term()?, self.term()?),
            "All" => {
                let d = self.ty()?;
                Term::all(d, self.term()?)
            }
            other => return Err(self.fail(format!("unknown term tag {other}"))),
        };
        self.eat(')')?;
        Ok(t)
    }

    fn proof(&mut self) -> Result<Proof, ImportError> {
        self.eat('(')?;
        let head = self.atom()?;
        let p = match head.as_str() {
            "Hyp" => Proof::Hyp(Name::from(self.atom()?.as_str())),
            "Known" => {
                let name = self.atom()?;
                Proof::Known(Name::from(name.as_str()), self.ty_list_until_paren()?)
            }
            "ImpIntro" => {
                let name = self.atom()?;
                let assumed = self.term()?;
                let body = self.proof()?;
                Proof::ImpIntro(Name::from(name.as_str()), assumed, Arc::new(body))
            }
            "ImpElim" => Proof::imp_elim(self.proof()?, self.proof()?),
            "AllIntro" => {
                let d = self.ty()?;
                Proof::AllIntro(d, Arc::new(self.proof()?))
            }
            "AllElim" => {
                let f = self.proof()?;
                let w = self.term()?;
                Proof::AllElim(Arc::new(f), w)
            }
            other => return Err(self.fail(format!("unknown proof tag {other}"))),
        };
        self.eat(')')?;
        Ok(p)
    }
}

fn truncate(s: &str) -> &str {
    if s.len() > 40 {
        &s[..40]
    } else {
        s
    }
}
