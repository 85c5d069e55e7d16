//! Desugaring of surface terms into kernel terms.
//!
//! Every notation node rewrites locally to one fixed term shape. The
//! desugarer synthesizes types as it goes (all binders are annotated, so
//! this is plain bottom-up synthesis); the type is needed to pick the
//! instantiation for `=`, `<>`, `exists` and `some`. The kernel re-checks
//! everything afterwards, so none of this is trusted.

use super::ast::*;
use super::lex::{err, Pos, SyntaxError};
use crate::kernel::Signature;
use crate::term::{lift, ConstName, Name, SigView, Term, Type};

/// Script-local transparent abbreviation, recorded with the binder depth at
/// which its body was desugared.
#[derive(Clone, Debug)]
pub struct Local {
    pub name: String,
    pub ty: Type,
    pub body: Term,
    pub depth: usize,
}

/// Name-resolution environment for desugaring.
pub struct Env<'a> {
    pub sig: &'a Signature,
    /// Declared type-variable names of the current declaration.
    pub ty_vars: &'a [String],
    /// Term binder stack, innermost last.
    pub vars: Vec<(String, Type)>,
    /// Script locals, in declaration order.
    pub locals: Vec<Local>,
}

impl<'a> Env<'a> {
    pub fn new(sig: &'a Signature, ty_vars: &'a [String]) -> Env<'a> {
        Env { sig, ty_vars, vars: Vec::new(), locals: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.vars.len()
    }

    fn lookup_var(&self, name: &str) -> Option<(u32, Type)> {
        self.vars
            .iter()
            .rev()
            .enumerate()
            .find(|(_, (n, _))| n == name)
            .map(|(k, (_, ty))| (k as u32, ty.clone()))
    }

    fn lookup_local(&self, name: &str) -> Option<&Local> {
        self.locals.iter().rev().find(|l| l.name == name)
    }
}

pub fn desugar_type(env: &Env<'_>, sty: &SType) -> Result<Type, SyntaxError> {
    match sty {
        SType::Prop => Ok(Type::Prop),
        SType::Set => Ok(Type::Ind),
        SType::Arrow(a, b) => Ok(Type::arrow(desugar_type(env, a)?, desugar_type(env, b)?)),
        SType::Name(n, pos) => match env.ty_vars.iter().position(|v| v == n) {
            Some(i) => Ok(Type::TVar(i as u8)),
            None => err(*pos, format!("unknown type name {n}")),
        },
    }
}

/// A `Ref` to a prelude definition, erroring with a helpful message when the
/// prelude has not been loaded.
fn prelude_ref(
    env: &Env<'_>,
    pos: Pos,
    name: &str,
    ty_args: Vec<Type>,
) -> Result<(Term, Type), SyntaxError> {
    match env.sig.lookup_def(name) {
        Some(def) => {
            if ty_args.len() != def.ty_arity as usize {
                return err(
                    pos,
                    format!("{name} expects {} type argument(s)", def.ty_arity),
                );
            }
            let ty = def.ty.instantiate(&ty_args);
            Ok((Term::Ref(Name::from(name), ty_args), ty))
        }
        None => err(pos, format!("this notation needs the definition {name}, which is not in scope")),
    }
}

fn expect_set(t: &STerm, ty: &Type) -> Result<(), SyntaxError> {
    if *ty != Type::Ind {
        return err(t.pos, format!("expected a set, found a term of type {}", ty_str(ty)));
    }
    Ok(())
}

fn expect_prop(t: &STerm, ty: &Type) -> Result<(), SyntaxError> {
    if *ty != Type::Prop {
        return err(
            t.pos,
            format!("expected a proposition, found a term of type {}", ty_str(ty)),
        );
    }
    Ok(())
}

fn ty_str(ty: &Type) -> String {
    super::print::print_type(ty, &[])
}

/// Desugars a surface term, returning the kernel term and its type.
pub fn desugar(env: &mut Env<'_>, t: &STerm) -> Result<(Term, Type), SyntaxError> {
    match &t.kind {
        SKind::Name(name, ty_args) => desugar_name(env, t.pos, name, ty_args.as_deref()),
        SKind::App(f, a) => {
            let (tf, tyf) = desugar(env, f)?;
            let (ta, tya) = desugar(env, a)?;
            match tyf {
                Type::Arrow(dom, cod) => {
                    if *dom != tya {
                        return err(
                            a.pos,
                            format!(
                                "argument has type {}, expected {}",
                                ty_str(&tya),
                                ty_str(&dom)
                            ),
                        );
                    }
                    Ok((Term::app(tf, ta), *cod))
                }
                other => err(
                    f.pos,
                    format!("applied term has type {}, not a function type", ty_str(&other)),
                ),
            }
        }
        SKind::Not(a) => {
            let (ta, tya) = desugar(env, a)?;
            expect_prop(a, &tya)?;
            let (not_ref, _) = prelude_ref(env, t.pos, "not", vec![])?;
            Ok((Term::app(not_ref, ta), Type::Prop))
        }
        SKind::Bin(op, a, b) => desugar_bin(env, t.pos, *op, a, b),
        SKind::Binder(kind, group, body) => desugar_binder(env, t.pos, *kind, group, body),
        SKind::Repl { elem, var, domain } => {
            let (dom, dty) = desugar(env, domain)?;
            expect_set(domain, &dty)?;
            env.vars.push((var.0.clone(), Type::Ind));
            let res = desugar(env, elem);
            env.vars.pop();
            let (el, ety) = res?;
            expect_set(elem, &ety)?;
            Ok((
                Term::apps(Term::cst(ConstName::Repl), [dom, Term::lam(Type::Ind, el)]),
                Type::Ind,
            ))
        }
        SKind::Sep { var, domain, pred } => {
            let (dom, dty) = desugar(env, domain)?;
            expect_set(domain, &dty)?;
            env.vars.push((var.0.clone(), Type::Ind));
            let res = desugar(env, pred);
            env.vars.pop();
            let (p, pty) = res?;
            expect_prop(pred, &pty)?;
            let (sep, _) = prelude_ref(env, t.pos, "Sep", vec![])?;
            Ok((Term::apps(sep, [dom, Term::lam(Type::Ind, p)]), Type::Ind))
        }
        SKind::ReplSep { elem, var, domain, pred } => {
            let (dom, dty) = desugar(env, domain)?;
            expect_set(domain, &dty)?;
            env.vars.push((var.0.clone(), Type::Ind));
            let pres = desugar(env, pred);
            let eres = desugar(env, elem);
            env.vars.pop();
            let (p, pty) = pres?;
            let (el, ety) = eres?;
            expect_prop(pred, &pty)?;
            expect_set(elem, &ety)?;
            let (replsep, _) = prelude_ref(env, t.pos, "ReplSep", vec![])?;
            Ok((
                Term::apps(replsep, [dom, Term::lam(Type::Ind, p), Term::lam(Type::Ind, el)]),
                Type::Ind,
            ))
        }
        SKind::UPair(a, b) => {
            let (ta, tya) = desugar(env, a)?;
            expect_set(a, &tya)?;
            let (tb, tyb) = desugar(env, b)?;
            expect_set(b, &tyb)?;
            let (upair, _) = prelude_ref(env, t.pos, "UPair", vec![])?;
            Ok((Term::apps(upair, [ta, tb]), Type::Ind))
        }
        SKind::Sing(a) => {
            let (ta, tya) = desugar(env, a)?;
            expect_set(a, &tya)?;
            let (sing, _) = prelude_ref(env, t.pos, "Sing", vec![])?;
            Ok((Term::app(sing, ta), Type::Ind))
        }
    }
}

fn desugar_name(
    env: &mut Env<'_>,
    pos: Pos,
    name: &str,
    ty_args: Option<&[SType]>,
) -> Result<(Term, Type), SyntaxError> {
    let args = match ty_args {
        Some(stys) => Some(
            stys.iter()
                .map(|s| desugar_type(env, s))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    if args.is_none() {
        if let Some((k, ty)) = env.lookup_var(name) {
            return Ok((Term::Var(k), ty));
        }
        if let Some(local) = env.lookup_local(name) {
            let amount = (env.depth() - local.depth) as i64;
            let body = lift(&local.body, 0, amount).expect("positive lift");
            return Ok((body, local.ty.clone()));
        }
    }
    if let Some(c) = ConstName::from_name(name) {
        let args = args.unwrap_or_default();
        if args.len() != c.ty_arity() {
            return err(
                pos,
                format!("{name} expects {} type argument(s), got {}", c.ty_arity(), args.len()),
            );
        }
        let ty = c.schema().instantiate(&args);
        return Ok((Term::Const(c, args), ty));
    }
    if let Some(def) = env.sig.lookup_def(name) {
        let args = args.unwrap_or_default();
        if args.len() != def.ty_arity as usize {
            return err(
                pos,
                format!(
                    "{name} expects {} type argument(s), got {}",
                    def.ty_arity,
                    args.len()
                ),
            );
        }
        let ty = def.ty.instantiate(&args);
        return Ok((Term::Ref(Name::from(name), args), ty));
    }
    if env.sig.theorem(name).is_some() || crate::kernel::AxiomName::from_name(name).is_some() {
        return err(pos, format!("{name} is a theorem or axiom; it cannot appear in a term"));
    }
    err(pos, format!("unknown name {name}"))
}

fn desugar_bin(
    env: &mut Env<'_>,
    pos: Pos,
    op: BinOp,
    a: &STerm,
    b: &STerm,
) -> Result<(Term, Type), SyntaxError> {
    let (ta, tya) = desugar(env, a)?;
    let (tb, tyb) = desugar(env, b)?;
    match op {
        BinOp::Imp => {
            expect_prop(a, &tya)?;
            expect_prop(b, &tyb)?;
            Ok((Term::imp(ta, tb), Type::Prop))
        }
        BinOp::And | BinOp::Or | BinOp::Iff => {
            expect_prop(a, &tya)?;
            expect_prop(b, &tyb)?;
            let name = match op {
                BinOp::And => "and",
                BinOp::Or => "or",
                _ => "iff",
            };
            let (r, _) = prelude_ref(env, pos, name, vec![])?;
            Ok((Term::apps(r, [ta, tb]), Type::Prop))
        }
        BinOp::In | BinOp::Notin => {
            expect_set(a, &tya)?;
            expect_set(b, &tyb)?;
            let m = Term::apps(Term::cst(ConstName::In), [ta, tb]);
            if op == BinOp::In {
                Ok((m, Type::Prop))
            } else {
                let (not_ref, _) = prelude_ref(env, pos, "not", vec![])?;
                Ok((Term::app(not_ref, m), Type::Prop))
            }
        }
        BinOp::Subq => {
            expect_set(a, &tya)?;
            expect_set(b, &tyb)?;
            let (subq, _) = prelude_ref(env, pos, "Subq", vec![])?;
            Ok((Term::apps(subq, [ta, tb]), Type::Prop))
        }
        BinOp::Eq | BinOp::Ne => {
            if tya != tyb {
                return err(
                    pos,
                    format!(
                        "cannot equate a {} with a {}",
                        ty_str(&tya),
                        ty_str(&tyb)
                    ),
                );
            }
            let (eq, _) = prelude_ref(env, pos, "eq", vec![tya])?;
            let m = Term::apps(eq, [ta, tb]);
            if op == BinOp::Eq {
                Ok((m, Type::Prop))
            } else {
                let (not_ref, _) = prelude_ref(env, pos, "not", vec![])?;
                Ok((Term::app(not_ref, m), Type::Prop))
            }
        }
    }
}

fn desugar_binder(
    env: &mut Env<'_>,
    pos: Pos,
    kind: BinderKind,
    group: &SBinderGroup,
    body: &STerm,
) -> Result<(Term, Type), SyntaxError> {
    desugar_binder_names(env, pos, kind, &group.names, &group.ann, body)
}

fn desugar_binder_names(
    env: &mut Env<'_>,
    pos: Pos,
    kind: BinderKind,
    names: &[(String, Pos)],
    ann: &SAnn,
    body: &STerm,
) -> Result<(Term, Type), SyntaxError> {
    let Some(((name, _npos), rest)) = names.split_first() else {
        return desugar(env, body);
    };

    // A set bound is desugared before the binder goes on the stack, then
    // lifted under it; an inner occurrence of the same name must not
    // capture it.
    let bound = match ann {
        SAnn::InSet(s) => {
            if kind == BinderKind::Fun {
                return err(pos, "`fun` binders take a type annotation, not a set bound");
            }
            let (bt, bty) = desugar(env, s)?;
            expect_set(s, &bty)?;
            Some(lift(&bt, 0, 1).expect("positive lift"))
        }
        _ => None,
    };
    let var_ty = match ann {
        SAnn::Ty(sty) => desugar_type(env, sty)?,
        SAnn::Default | SAnn::InSet(_) => Type::Ind,
    };

    env.vars.push((name.clone(), var_ty.clone()));
    let inner = desugar_binder_names(env, pos, kind, rest, ann, body);
    env.vars.pop();
    let (inner_t, inner_ty) = inner?;

    match kind {
        BinderKind::Fun => Ok((
            Term::lam(var_ty.clone(), inner_t),
            Type::arrow(var_ty, inner_ty),
        )),
        BinderKind::Forall => {
            if inner_ty != Type::Prop {
                return err(body.pos, "the body of a forall must be a proposition");
            }
            let inner_t = match bound {
                Some(b) => Term::imp(
                    Term::apps(Term::cst(ConstName::In), [Term::Var(0), b]),
                    inner_t,
                ),
                None => inner_t,
            };
            Ok((Term::all(var_ty, inner_t), Type::Prop))
        }
        BinderKind::Exists => {
            if inner_ty != Type::Prop {
                return err(body.pos, "the body of an exists must be a proposition");
            }
            let inner_t = match bound {
                Some(b) => {
                    let (and_ref, _) = prelude_ref(env, pos, "and", vec![])?;
                    Term::apps(
                        and_ref,
                        [
                            Term::apps(Term::cst(ConstName::In), [Term::Var(0), b]),
                            inner_t,
                        ],
                    )
                }
                None => inner_t,
            };
            let (ex_ref, _) = prelude_ref(env, pos, "ex", vec![var_ty.clone()])?;
            Ok((Term::app(ex_ref, Term::lam(var_ty, inner_t)), Type::Prop))
        }
        BinderKind::Choice => {
            if inner_ty != Type::Prop {
                return err(body.pos, "the body of a choice binder must be a proposition");
            }
            let inner_t = match bound {
                Some(b) => {
                    let (and_ref, _) = prelude_ref(env, pos, "and", vec![])?;
                    Term::apps(
                        and_ref,
                        [
                            Term::apps(Term::cst(ConstName::In), [Term::Var(0), b]),
                            inner_t,
                        ],
                    )
                }
                None => inner_t,
            };
            Ok((
                Term::app(
                    Term::Const(ConstName::Eps, vec![var_ty.clone()]),
                    Term::lam(var_ty.clone(), inner_t),
                ),
                var_ty,
            ))
        }
    }
}
