//! Pretty-printer: kernel terms back to parseable surface syntax.
//!
//! Printing then parsing then desugaring is the identity on well-typed
//! terms (property-tested). Binder names are generated deterministically
//! (`x`, `x0`, `x1`, ...) and never collide with names occurring in the
//! term or in the ambient scope.

use std::collections::HashSet;

use crate::term::{ConstName, Term, Type};

const LVL_TERM: u8 = 0;
const LVL_IMP: u8 = 1;
const LVL_IFF: u8 = 2;
const LVL_OR: u8 = 3;
const LVL_AND: u8 = 4;
const LVL_NOT: u8 = 5;
const LVL_CMP: u8 = 6;
const LVL_APP: u8 = 7;
const LVL_ATOM: u8 = 8;

const DEFAULT_TY_NAMES: [&str; 3] = ["A", "B", "C"];

pub fn print_type(ty: &Type, ty_names: &[String]) -> String {
    let mut s = String::new();
    fmt_type(&mut s, ty, ty_names, false);
    s
}

fn fmt_type(out: &mut String, ty: &Type, ty_names: &[String], atom_pos: bool) {
    match ty {
        Type::Prop => out.push_str("prop"),
        Type::Ind => out.push_str("set"),
        Type::TVar(i) => match ty_names.get(*i as usize) {
            Some(n) => out.push_str(n),
            None => out.push_str(DEFAULT_TY_NAMES[(*i as usize).min(2)]),
        },
        Type::Arrow(a, b) => {
            if atom_pos {
                out.push('(');
            }
            fmt_type(out, a, ty_names, true);
            out.push_str(" -> ");
            fmt_type(out, b, ty_names, false);
            if atom_pos {
                out.push(')');
            }
        }
    }
}

/// Prints a term whose free variables are named by `names` (innermost
/// last). `ty_names` names the type variables in scope.
pub fn print_term(t: &Term, names: &[String], ty_names: &[String]) -> String {
    let mut forbidden: HashSet<String> = names.iter().cloned().collect();
    collect_names(t, &mut forbidden);
    let mut pr = Printer {
        stack: names.to_vec(),
        forbidden,
        counter: 0,
        ty_names,
    };
    let mut out = String::new();
    pr.fmt(&mut out, t, LVL_TERM, true);
    out
}

/// Prints a closed monomorphic term.
pub fn print_closed(t: &Term) -> String {
    print_term(t, &[], &[])
}

fn collect_names(t: &Term, out: &mut HashSet<String>) {
    match t {
        Term::Var(_) => {}
        Term::Const(c, _) => {
            out.insert(c.name().to_string());
        }
        Term::Ref(n, _) => {
            out.insert(n.to_string());
        }
        Term::App(a, b) | Term::Imp(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        Term::Lam(_, b) | Term::All(_, b) => collect_names(b, out),
    }
}

struct Printer<'a> {
    stack: Vec<String>,
    forbidden: HashSet<String>,
    counter: usize,
    ty_names: &'a [String],
}

impl<'a> Printer<'a> {
    fn fresh(&mut self) -> String {
        loop {
            let cand = if self.counter == 0 {
                "x".to_string()
            } else {
                format!("x{}", self.counter - 1)
            };
            self.counter += 1;
            if !self.forbidden.contains(&cand) && !self.stack.contains(&cand) {
                return cand;
            }
        }
    }

    fn var(&self, k: u32) -> String {
        let n = self.stack.len();
        match n.checked_sub(1 + k as usize) {
            Some(i) => self.stack[i].clone(),
            // Open term printed without enough names; keep it readable.
            None => format!("_v{}", k as usize - n),
        }
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

    /// `level`: the loosest level allowed without parentheses.
    /// `rightmost`: a binder here may extend to the end without parens.
    fn fmt(&mut self, out: &mut String, t: &Term, level: u8, rightmost: bool) {
        match t {
            Term::Var(k) => out.push_str(&self.var(*k)),
            Term::Const(c, tys) => {
                if let (ConstName::Eps, [ty]) = (c, tys.as_slice()) {
                    out.push_str("Eps@[");
                    out.push_str(&print_type(ty, self.ty_names));
                    out.push(']');
                } else {
                    out.push_str(c.name());
                }
            }
            Term::Ref(n, tys) => {
                out.push_str(n);
                if !tys.is_empty() {
                    out.push_str("@[");
                    for (i, ty) in tys.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        out.push_str(&print_type(ty, self.ty_names));
                    }
                    out.push(']');
                }
            }
            Term::Imp(a, b) => {
                let need = level > LVL_IMP;
                Self::paren(out, need, |out| {
                    self.fmt(out, a, LVL_IFF, false);
                    out.push_str(" -> ");
                    self.fmt(out, b, LVL_IMP, !need || rightmost);
                });
            }
            Term::All(d, b) => self.fmt_binder(out, "forall", ", ", d, b, level, rightmost),
            Term::Lam(d, b) => self.fmt_binder(out, "fun", " => ", d, b, level, rightmost),
            Term::App(..) => self.fmt_app(out, t, level, rightmost),
        }
    }

    fn fmt_binder(
        &mut self,
        out: &mut String,
        kw: &str,
        sep: &str,
        dom: &Type,
        body: &Term,
        level: u8,
        rightmost: bool,
    ) {
        let need = !(level == LVL_TERM || rightmost);
        let name = self.fresh();
        Self::paren(out, need, |out| {
            out.push_str(kw);
            out.push(' ');
            out.push_str(&name);
            out.push(':');
            out.push_str(&print_type(dom, self.ty_names));
            out.push_str(sep);
            self.stack.push(name.clone());
            self.fmt(out, body, LVL_TERM, true);
            self.stack.pop();
        });
    }

    fn fmt_app(&mut self, out: &mut String, t: &Term, level: u8, rightmost: bool) {
        // Unroll the application spine for notation detection.
        let mut spine: Vec<&Term> = Vec::new();
        let mut head = t;
        while let Term::App(f, a) = head {
            spine.push(a);
            head = f;
        }
        spine.reverse();

        let infix: Option<(&str, u8)> = match (head, spine.len()) {
            (Term::Const(ConstName::In, _), 2) => Some((":e", LVL_CMP)),
            (Term::Ref(n, tys), 2) if &**n == "Subq" && tys.is_empty() => Some(("c=", LVL_CMP)),
            (Term::Ref(n, _), 2) if &**n == "eq" => Some(("=", LVL_CMP)),
            (Term::Ref(n, tys), 2) if &**n == "and" && tys.is_empty() => Some(("/\\", LVL_AND)),
            (Term::Ref(n, tys), 2) if &**n == "or" && tys.is_empty() => Some(("\\/", LVL_OR)),
            (Term::Ref(n, tys), 2) if &**n == "iff" && tys.is_empty() => Some(("<->", LVL_IFF)),
            _ => None,
        };
        if let Some((op, op_level)) = infix {
            let need = level > op_level;
            Self::paren(out, need, |out| {
                // Comparison operands sit at application level; the lattice
                // connectives chain to the right.
                let (ll, rl) = if op_level == LVL_CMP {
                    (LVL_APP, LVL_APP)
                } else {
                    (op_level + 1, op_level)
                };
                self.fmt(out, spine[0], ll, false);
                out.push(' ');
                out.push_str(op);
                out.push(' ');
                self.fmt(out, spine[1], rl, (!need || rightmost) && op_level != LVL_CMP);
            });
            return;
        }

        if let (Term::Ref(n, tys), 1) = (head, spine.len()) {
            if &**n == "not" && tys.is_empty() {
                let need = level > LVL_NOT;
                Self::paren(out, need, |out| {
                    out.push('~');
                    self.fmt(out, spine[0], LVL_NOT, false);
                });
                return;
            }
            if &**n == "Sing" && tys.is_empty() {
                out.push('{');
                self.fmt(out, spine[0], LVL_TERM, true);
                out.push('}');
                return;
            }
            if &**n == "ex" && tys.len() == 1 {
                if let Term::Lam(d, b) = spine[0] {
                    if *d == tys[0] {
                        self.fmt_binder(out, "exists", ", ", d, b, level, rightmost);
                        return;
                    }
                }
            }
        }
        if let (Term::Const(ConstName::Eps, tys), 1) = (head, spine.len()) {
            if let Term::Lam(d, b) = spine[0] {
                if tys.len() == 1 && *d == tys[0] {
                    self.fmt_binder(out, "some", ", ", d, b, level, rightmost);
                    return;
                }
            }
        }
        if let (Term::Ref(n, tys), 2) = (head, spine.len()) {
            if &**n == "UPair" && tys.is_empty() {
                out.push('{');
                self.fmt(out, spine[0], LVL_TERM, true);
                out.push_str(", ");
                self.fmt(out, spine[1], LVL_TERM, true);
                out.push('}');
                return;
            }
            if &**n == "Sep" && tys.is_empty() {
                if let Term::Lam(d, b) = spine[1] {
                    if *d == Type::Ind {
                        let name = self.fresh();
                        out.push('{');
                        out.push_str(&name);
                        out.push_str(" :e ");
                        self.fmt(out, spine[0], LVL_APP, false);
                        out.push_str(" | ");
                        self.stack.push(name);
                        self.fmt(out, b, LVL_TERM, true);
                        self.stack.pop();
                        out.push('}');
                        return;
                    }
                }
            }
        }
        if let (Term::Const(ConstName::Repl, _), 2) = (head, spine.len()) {
            if let Term::Lam(d, b) = spine[1] {
                if *d == Type::Ind {
                    let name = self.fresh();
                    out.push('{');
                    self.stack.push(name.clone());
                    self.fmt(out, b, LVL_TERM, true);
                    self.stack.pop();
                    out.push_str(" | ");
                    out.push_str(&name);
                    out.push_str(" :e ");
                    self.fmt(out, spine[0], LVL_APP, false);
                    out.push('}');
                    return;
                }
            }
        }
        if let (Term::Ref(n, tys), 3) = (head, spine.len()) {
            if &**n == "ReplSep" && tys.is_empty() {
                if let (Term::Lam(dp, bp), Term::Lam(de, be)) = (spine[1], spine[2]) {
                    if *dp == Type::Ind && *de == Type::Ind {
                        let name = self.fresh();
                        out.push('{');
                        self.stack.push(name.clone());
                        self.fmt(out, be, LVL_TERM, true);
                        self.stack.pop();
                        out.push_str(" | ");
                        out.push_str(&name);
                        out.push_str(" :e ");
                        // The domain sits outside the binder.
                        self.fmt(out, spine[0], LVL_APP, false);
                        out.push_str(" such that ");
                        self.stack.push(name);
                        self.fmt(out, bp, LVL_TERM, true);
                        self.stack.pop();
                        out.push('}');
                        return;
                    }
                }
            }
        }

        // Plain application.
        let need = level > LVL_APP;
        Self::paren(out, need, |out| {
            self.fmt(out, head, LVL_APP, false);
            for (i, a) in spine.iter().enumerate() {
                out.push(' ');
                let last = i + 1 == spine.len();
                self.fmt(out, a, LVL_ATOM, (!need || rightmost) && last && false);
            }
        });
    }
}
