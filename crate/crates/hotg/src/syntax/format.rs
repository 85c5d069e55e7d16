//! Formats surface ASTs back to article text. Formatting then parsing
//! yields an equal AST (positions aside), which is what makes this usable
//! as a reformatter.

use super::ast::*;
use crate::term::Opacity;

const LVL_TERM: u8 = 0;
const LVL_IMP: u8 = 1;
const LVL_IFF: u8 = 2;
const LVL_OR: u8 = 3;
const LVL_AND: u8 = 4;
const LVL_NOT: u8 = 5;
const LVL_CMP: u8 = 6;
const LVL_APP: u8 = 7;
const LVL_ATOM: u8 = 8;

pub fn format_type(t: &SType) -> String {
    fn go(t: &SType, atom: bool, out: &mut String) {
        match t {
            SType::Prop => out.push_str("prop"),
            SType::Set => out.push_str("set"),
            SType::Name(n, _) => out.push_str(n),
            SType::Arrow(a, b) => {
                if atom {
                    out.push('(');
                }
                go(a, true, out);
                out.push_str(" -> ");
                go(b, false, out);
                if atom {
                    out.push(')');
                }
            }
        }
    }
    let mut s = String::new();
    go(t, false, &mut s);
    s
}

fn binder_kw(k: BinderKind) -> (&'static str, &'static str) {
    match k {
        BinderKind::Fun => ("fun", " => "),
        BinderKind::Forall => ("forall", ", "),
        BinderKind::Exists => ("exists", ", "),
        BinderKind::Choice => ("some", ", "),
    }
}

fn bin_op(op: BinOp) -> (&'static str, u8) {
    match op {
        BinOp::Imp => ("->", LVL_IMP),
        BinOp::Iff => ("<->", LVL_IFF),
        BinOp::Or => ("\\/", LVL_OR),
        BinOp::And => ("/\\", LVL_AND),
        BinOp::Eq => ("=", LVL_CMP),
        BinOp::Ne => ("<>", LVL_CMP),
        BinOp::In => (":e", LVL_CMP),
        BinOp::Notin => ("/:e", LVL_CMP),
        BinOp::Subq => ("c=", LVL_CMP),
    }
}

pub fn format_term(t: &STerm) -> String {
    let mut s = String::new();
    go(t, LVL_TERM, &mut s);
    s
}

fn paren(out: &mut String, need: bool, f: impl FnOnce(&mut String)) {
    if need {
        out.push('(');
    }
    f(out);
    if need {
        out.push(')');
    }
}

fn go(t: &STerm, level: u8, out: &mut String) {
    match &t.kind {
        SKind::Name(n, tys) => {
            out.push_str(n);
            if let Some(tys) = tys {
                out.push_str("@[");
                for (i, ty) in tys.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&format_type(ty));
                }
                out.push(']');
            }
        }
        SKind::App(f, a) => paren(out, level > LVL_APP, |out| {
            go(f, LVL_APP, out);
            out.push(' ');
            go(a, LVL_ATOM, out);
        }),
        SKind::Bin(op, a, b) => {
            let (sym, lvl) = bin_op(*op);
            paren(out, level > lvl, |out| {
                let (ll, rl) = if lvl == LVL_CMP { (LVL_APP, LVL_APP) } else { (lvl + 1, lvl) };
                go(a, ll, out);
                out.push(' ');
                out.push_str(sym);
                out.push(' ');
                go(b, rl, out);
            });
        }
        SKind::Not(a) => paren(out, level > LVL_NOT, |out| {
            out.push('~');
            go(a, LVL_NOT, out);
        }),
        SKind::Binder(kind, group, body) => {
            let (kw, sep) = binder_kw(*kind);
            paren(out, level > LVL_TERM, |out| {
                out.push_str(kw);
                for (n, _) in &group.names {
                    out.push(' ');
                    out.push_str(n);
                }
                match &group.ann {
                    SAnn::Default => {}
                    SAnn::Ty(ty) => {
                        out.push(':');
                        out.push_str(&format_type(ty));
                    }
                    SAnn::InSet(s) => {
                        out.push_str(" :e ");
                        go(s, LVL_APP, out);
                    }
                }
                out.push_str(sep);
                go(body, LVL_TERM, out);
            });
        }
        SKind::Repl { elem, var, domain } => {
            out.push('{');
            go(elem, LVL_TERM, out);
            out.push_str(" | ");
            out.push_str(&var.0);
            out.push_str(" :e ");
            go(domain, LVL_APP, out);
            out.push('}');
        }
        SKind::Sep { var, domain, pred } => {
            out.push('{');
            out.push_str(&var.0);
            out.push_str(" :e ");
            go(domain, LVL_APP, out);
            out.push_str(" | ");
            go(pred, LVL_TERM, out);
            out.push('}');
        }
        SKind::ReplSep { elem, var, domain, pred } => {
            out.push('{');
            go(elem, LVL_TERM, out);
            out.push_str(" | ");
            out.push_str(&var.0);
            out.push_str(" :e ");
            go(domain, LVL_APP, out);
            out.push_str(" such that ");
            go(pred, LVL_TERM, out);
            out.push('}');
        }
        SKind::UPair(a, b) => {
            out.push('{');
            go(a, LVL_TERM, out);
            out.push_str(", ");
            go(b, LVL_TERM, out);
            out.push('}');
        }
        SKind::Sing(a) => {
            out.push('{');
            go(a, LVL_TERM, out);
            out.push('}');
        }
    }
}

fn format_steps(steps: &[SStep], indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    for step in steps {
        match step {
            SStep::Let(names, ann, _) => {
                out.push_str(&pad);
                out.push_str("let");
                for (n, _) in names {
                    out.push(' ');
                    out.push_str(n);
                }
                if let Some(ty) = ann {
                    out.push(':');
                    out.push_str(&format_type(ty));
                }
                out.push_str(".\n");
            }
            SStep::Assume(name, prop, _) => {
                out.push_str(&pad);
                out.push_str("assume ");
                out.push_str(name);
                out.push_str(": ");
                out.push_str(&format_term(prop));
                out.push_str(".\n");
            }
            SStep::Claim(name, prop, sub, _) => {
                out.push_str(&pad);
                out.push_str("claim ");
                out.push_str(name);
                out.push_str(": ");
                out.push_str(&format_term(prop));
                out.push_str(".\n");
                out.push_str(&pad);
                out.push_str("{\n");
                format_steps(sub, indent + 1, out);
                out.push_str(&pad);
                out.push_str("}\n");
            }
            SStep::SetLocal(name, ty, body, _) => {
                out.push_str(&pad);
                out.push_str("set ");
                out.push_str(name);
                out.push_str(" : ");
                out.push_str(&format_type(ty));
                out.push_str(" := ");
                out.push_str(&format_term(body));
                out.push_str(".\n");
            }
            SStep::Exact(pe, _) => {
                out.push_str(&pad);
                out.push_str("exact ");
                out.push_str(&format_term(pe));
                out.push_str(".\n");
            }
            SStep::Apply(pe, _) => {
                out.push_str(&pad);
                out.push_str("apply ");
                out.push_str(&format_term(pe));
                out.push_str(".\n");
            }
            SStep::Witness(w, _) => {
                out.push_str(&pad);
                out.push_str("witness ");
                out.push_str(&format_term(w));
                out.push_str(".\n");
            }
            SStep::Cases(pe, h1, h2, left, right, _) => {
                out.push_str(&pad);
                out.push_str("cases ");
                out.push_str(&format_term(pe));
                out.push_str(" with ");
                out.push_str(h1);
                out.push(' ');
                out.push_str(h2);
                out.push('\n');
                for block in [left, right] {
                    out.push_str(&pad);
                    out.push_str("{\n");
                    format_steps(block, indent + 1, out);
                    out.push_str(&pad);
                    out.push_str("}\n");
                }
            }
            SStep::Prove(p, _) => {
                out.push_str(&pad);
                out.push_str("prove ");
                out.push_str(&format_term(p));
                out.push_str(".\n");
            }
        }
    }
}

fn ty_vars_header(ty_vars: &[String]) -> String {
    if ty_vars.is_empty() {
        String::new()
    } else {
        format!(" [{}]", ty_vars.join(" "))
    }
}

pub fn format_article(article: &Article) -> String {
    let mut out = String::new();
    for decl in &article.decls {
        match decl {
            ADecl::Import(name, _) => {
                out.push_str("Import ");
                out.push_str(name);
                out.push_str(".\n\n");
            }
            ADecl::Definition { name, ty_vars, ty, body, opacity, .. } => {
                out.push_str(match opacity {
                    Opacity::Transparent => "Definition ",
                    Opacity::Opaque => "Opaque ",
                });
                out.push_str(name);
                out.push_str(&ty_vars_header(ty_vars));
                out.push_str(" : ");
                out.push_str(&format_type(ty));
                out.push_str(" := ");
                out.push_str(&format_term(body));
                out.push_str(".\n\n");
            }
            ADecl::Theorem { name, ty_vars, statement, script, .. } => {
                out.push_str("Theorem ");
                out.push_str(name);
                out.push_str(&ty_vars_header(ty_vars));
                out.push_str(" : ");
                out.push_str(&format_term(statement));
                out.push_str(".\nProof.\n");
                format_steps(script, 0, &mut out);
                out.push_str("Qed.\n\n");
            }
            ADecl::Trusted { name, ty_vars, statement, .. } => {
                out.push_str("Trusted ");
                out.push_str(name);
                out.push_str(&ty_vars_header(ty_vars));
                out.push_str(" : ");
                out.push_str(&format_term(statement));
                out.push_str(".\n\n");
            }
        }
    }
    out
}
