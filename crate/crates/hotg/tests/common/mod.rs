//! Shared helpers for the integration suites: a seeded generator of
//! well-typed terms, independent reference implementations used as oracles,
//! and stdlib locations.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use hotg::cli::{check_chain, CheckReport};
use hotg::kernel::{check_proof, AxiomName, Proof, Signature};
use hotg::term::{
    beta_eta_nf, conv_unchecked, lift, subst, type_of, ConstName, Name, NoDefs, Term, Type,
    TypingContext, Unfold,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn stdlib_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../stdlib")
}

/// The articles making up the required chain, in a valid check order.
pub const REQUIRED: &[&str] = &[
    "prelude_logic",
    "classical",
    "set_defs",
    "constructions",
    "inrec",
    "regularity_ordinals",
    "fo_bridge",
    "v_hierarchy",
    "fo_instances",
];

/// Required chain plus the stretch articles that extend it.
pub const WITH_STRETCH: &[&str] = &[
    "prelude_logic",
    "classical",
    "set_defs",
    "constructions",
    "inrec",
    "regularity_ordinals",
    "fo_bridge",
    "v_hierarchy",
    "fo_instances",
    "v_facts_extra",
    "tarski_a",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The required chain, checked once per test binary.
pub fn required_chain() -> &'static (Signature, CheckReport) {
    static CELL: OnceLock<(Signature, CheckReport)> = OnceLock::new();
    CELL.get_or_init(|| check_chain(&stdlib_dir(), REQUIRED, true).expect("required chain checks"))
}

/// Required plus stretch articles, checked once per test binary.
pub fn stretch_chain() -> &'static (Signature, CheckReport) {
    static CELL: OnceLock<(Signature, CheckReport)> = OnceLock::new();
    CELL.get_or_init(|| {
        check_chain(&stdlib_dir(), WITH_STRETCH, true).expect("stretch chain checks")
    })
}

// ---- random well-typed terms ----

pub fn gen_type(rng: &mut ChaCha8Rng, depth: u32) -> Type {
    if depth == 0 {
        return if rng.gen_bool(0.6) { Type::Ind } else { Type::Prop };
    }
    match rng.gen_range(0..10) {
        0..=4 => Type::Ind,
        5..=6 => Type::Prop,
        _ => Type::arrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1)),
    }
}

/// A closed fallback inhabitant of any type: `Eps (fun _:ty => False)`.
fn eps_leaf(ty: &Type) -> Term {
    Term::app(
        Term::Const(ConstName::Eps, vec![ty.clone()]),
        Term::lam(ty.clone(), Term::all(Type::Prop, Term::Var(0))),
    )
}

fn const_leaves(target: &Type) -> Vec<Term> {
    let mut out = Vec::new();
    for c in [
        ConstName::In,
        ConstName::Empty,
        ConstName::Union,
        ConstName::Power,
        ConstName::Repl,
        ConstName::UnivOf,
    ] {
        if c.schema() == *target {
            out.push(Term::cst(c));
        }
    }
    out
}

/// Generates a well-typed term of the target type, consuming fuel roughly
/// per constructor. Terms stay within `fuel` constructors.
pub fn gen_term(
    rng: &mut ChaCha8Rng,
    ctx: &mut Vec<Type>,
    target: &Type,
    fuel: &mut i64,
) -> Term {
    *fuel -= 1;
    let leafy = *fuel <= 1;

    // Leaf choices always available.
    let mut leaves: Vec<Term> = Vec::new();
    for (i, ty) in ctx.iter().rev().enumerate() {
        if ty == target {
            leaves.push(Term::Var(i as u32));
        }
    }
    leaves.extend(const_leaves(target));
    if leafy {
        if leaves.is_empty() {
            return eps_leaf(target);
        }
        return leaves[rng.gen_range(0..leaves.len())].clone();
    }

    let roll = rng.gen_range(0..100);
    if roll < 25 && !leaves.is_empty() {
        return leaves[rng.gen_range(0..leaves.len())].clone();
    }
    match target {
        Type::Arrow(dom, cod) if roll < 65 => {
            ctx.push((**dom).clone());
            let body = gen_term(rng, ctx, cod, fuel);
            ctx.pop();
            Term::lam((**dom).clone(), body)
        }
        Type::Prop if roll < 55 => {
            let a = gen_term(rng, ctx, &Type::Prop, fuel);
            let b = gen_term(rng, ctx, &Type::Prop, fuel);
            Term::imp(a, b)
        }
        Type::Prop if roll < 70 => {
            let dom = gen_type(rng, 1);
            ctx.push(dom.clone());
            let body = gen_term(rng, ctx, &Type::Prop, fuel);
            ctx.pop();
            Term::all(dom, body)
        }
        _ if roll < 90 => {
            // Application at a small random argument type.
            let arg_ty = gen_type(rng, 1);
            let f = gen_term(rng, ctx, &Type::arrow(arg_ty.clone(), target.clone()), fuel);
            let a = gen_term(rng, ctx, &arg_ty, fuel);
            Term::app(f, a)
        }
        _ => {
            if leaves.is_empty() {
                eps_leaf(target)
            } else {
                leaves[rng.gen_range(0..leaves.len())].clone()
            }
        }
    }
}

/// A random context of up to three variables.
pub fn gen_ctx(rng: &mut ChaCha8Rng) -> TypingContext {
    let n = rng.gen_range(0..=3);
    let mut ctx = TypingContext::default();
    for _ in 0..n {
        ctx.vars.push(gen_type(rng, 1));
    }
    ctx
}

// ---- oracle: capture-avoiding substitution on named terms ----

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NTerm {
    Var(String),
    Const(ConstName, Vec<Type>),
    Ref(String, Vec<Type>),
    App(Box<NTerm>, Box<NTerm>),
    Lam(String, Type, Box<NTerm>),
    Imp(Box<NTerm>, Box<NTerm>),
    All(String, Type, Box<NTerm>),
}

pub fn to_named(t: &Term, stack: &mut Vec<String>, counter: &mut usize) -> NTerm {
    match t {
        Term::Var(k) => NTerm::Var(stack[stack.len() - 1 - *k as usize].clone()),
        Term::Const(c, tys) => NTerm::Const(*c, tys.clone()),
        Term::Ref(n, tys) => NTerm::Ref(n.to_string(), tys.clone()),
        Term::App(f, a) => NTerm::App(
            Box::new(to_named(f, stack, counter)),
            Box::new(to_named(a, stack, counter)),
        ),
        Term::Imp(a, b) => NTerm::Imp(
            Box::new(to_named(a, stack, counter)),
            Box::new(to_named(b, stack, counter)),
        ),
        Term::Lam(d, b) => {
            let name = format!("n{}", *counter);
            *counter += 1;
            stack.push(name.clone());
            let body = to_named(b, stack, counter);
            stack.pop();
            NTerm::Lam(name, d.clone(), Box::new(body))
        }
        Term::All(d, b) => {
            let name = format!("n{}", *counter);
            *counter += 1;
            stack.push(name.clone());
            let body = to_named(b, stack, counter);
            stack.pop();
            NTerm::All(name, d.clone(), Box::new(body))
        }
    }
}

pub fn from_named(t: &NTerm, stack: &mut Vec<String>) -> Term {
    match t {
        NTerm::Var(n) => {
            let idx = stack
                .iter()
                .rev()
                .position(|s| s == n)
                .expect("named term is closed under the stack");
            Term::Var(idx as u32)
        }
        NTerm::Const(c, tys) => Term::Const(*c, tys.clone()),
        NTerm::Ref(n, tys) => Term::Ref(Name::from(n.as_str()), tys.clone()),
        NTerm::App(f, a) => Term::app(from_named(f, stack), from_named(a, stack)),
        NTerm::Imp(a, b) => Term::imp(from_named(a, stack), from_named(b, stack)),
        NTerm::Lam(n, d, b) => {
            stack.push(n.clone());
            let body = from_named(b, stack);
            stack.pop();
            Term::lam(d.clone(), body)
        }
        NTerm::All(n, d, b) => {
            stack.push(n.clone());
            let body = from_named(b, stack);
            stack.pop();
            Term::all(d.clone(), body)
        }
    }
}

fn nfree(t: &NTerm, x: &str) -> bool {
    match t {
        NTerm::Var(n) => n == x,
        NTerm::Const(..) | NTerm::Ref(..) => false,
        NTerm::App(a, b) | NTerm::Imp(a, b) => nfree(a, x) || nfree(b, x),
        NTerm::Lam(n, _, b) | NTerm::All(n, _, b) => n != x && nfree(b, x),
    }
}

/// Textbook capture-avoiding substitution with on-the-fly renaming.
pub fn nsubst(t: &NTerm, x: &str, repl: &NTerm, counter: &mut usize) -> NTerm {
    match t {
        NTerm::Var(n) => {
            if n == x {
                repl.clone()
            } else {
                t.clone()
            }
        }
        NTerm::Const(..) | NTerm::Ref(..) => t.clone(),
        NTerm::App(a, b) => NTerm::App(
            Box::new(nsubst(a, x, repl, counter)),
            Box::new(nsubst(b, x, repl, counter)),
        ),
        NTerm::Imp(a, b) => NTerm::Imp(
            Box::new(nsubst(a, x, repl, counter)),
            Box::new(nsubst(b, x, repl, counter)),
        ),
        NTerm::Lam(n, d, b) => {
            if n == x {
                return t.clone();
            }
            if nfree(repl, n) {
                let fresh = format!("r{}", *counter);
                *counter += 1;
                let renamed = nsubst(b, n, &NTerm::Var(fresh.clone()), counter);
                NTerm::Lam(fresh, d.clone(), Box::new(nsubst(&renamed, x, repl, counter)))
            } else {
                NTerm::Lam(n.clone(), d.clone(), Box::new(nsubst(b, x, repl, counter)))
            }
        }
        NTerm::All(n, d, b) => {
            if n == x {
                return t.clone();
            }
            if nfree(repl, n) {
                let fresh = format!("r{}", *counter);
                *counter += 1;
                let renamed = nsubst(b, n, &NTerm::Var(fresh.clone()), counter);
                NTerm::All(fresh, d.clone(), Box::new(nsubst(&renamed, x, repl, counter)))
            } else {
                NTerm::All(n.clone(), d.clone(), Box::new(nsubst(b, x, repl, counter)))
            }
        }
    }
}

// ---- oracle: small-step interleaved beta-eta normalizer ----

/// One reduction step, picking the rightmost-innermost beta or eta redex.
/// Interleaves eta with beta rather than phasing them.
pub fn smallstep(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) | Term::Const(..) | Term::Ref(..) => None,
        Term::App(f, a) => {
            if let Some(a2) = smallstep(a) {
                return Some(Term::app((**f).clone(), a2));
            }
            if let Some(f2) = smallstep(f) {
                return Some(Term::app(f2, (**a).clone()));
            }
            if let Term::Lam(_, body) = &**f {
                return Some(subst(body, 0, a));
            }
            None
        }
        Term::Imp(a, b) => {
            if let Some(b2) = smallstep(b) {
                return Some(Term::imp((**a).clone(), b2));
            }
            smallstep(a).map(|a2| Term::imp(a2, (**b).clone()))
        }
        Term::Lam(d, b) => {
            if let Some(b2) = smallstep(b) {
                return Some(Term::lam(d.clone(), b2));
            }
            if let Term::App(f, a) = &**b {
                if matches!(**a, Term::Var(0)) && !f.free_in(0) {
                    return Some(lift(f, 0, -1).expect("eta head has no var 0"));
                }
            }
            None
        }
        Term::All(d, b) => smallstep(b).map(|b2| Term::all(d.clone(), b2)),
    }
}

pub fn smallstep_nf(t: &Term, max_steps: usize) -> Term {
    let mut cur = t.clone();
    for _ in 0..max_steps {
        match smallstep(&cur) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
    panic!("small-step normalizer exceeded {max_steps} steps");
}

// ---- oracle: natural-deduction rule replay ----

/// Re-derives the proposition of a proof by replaying the deduction rules
/// one node at a time, checking each against the rule shapes directly.
/// Returns the derived proposition and the rule label trace.
pub fn replay(
    sig: &Signature,
    ctx: &TypingContext,
    hyps: &[(Name, Term)],
    p: &Proof,
    trace: &mut Vec<&'static str>,
) -> Result<Term, String> {
    match p {
        Proof::Hyp(n) => {
            let prop = hyps
                .iter()
                .rev()
                .find(|(h, _)| h == n)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| format!("Hyp: {n} not in context"))?;
            trace.push("Hyp");
            Ok(prop)
        }
        Proof::Known(n, tys) => {
            let prop = sig.known_statement(n, tys).map_err(|e| e.to_string())?;
            trace.push(if AxiomName::from_name(n).is_some() { "Ax" } else { "Known" });
            Ok(prop)
        }
        Proof::ImpIntro(n, a, b) => {
            if hyps.iter().any(|(h, _)| h == n) {
                return Err("ImpIntro: shadowed name".into());
            }
            let mut h2 = hyps.to_vec();
            h2.push((n.clone(), a.clone()));
            let c = replay(sig, ctx, &h2, b, trace)?;
            trace.push("ImpI");
            Ok(Term::imp(a.clone(), c))
        }
        Proof::ImpElim(maj, min) => {
            let mp = replay(sig, ctx, hyps, maj, trace)?;
            let np = replay(sig, ctx, hyps, min, trace)?;
            // The implicit beta rule: expose the implication up to
            // beta-eta conversion with transparent unfolding.
            let w = hotg::kernel::whnf_unfold(sig, &mp);
            let Term::Imp(a, b) = w else {
                return Err("ImpElim: major is not an implication".into());
            };
            if !conv_unchecked(&a, &np, sig, Unfold::Transparent) {
                return Err("ImpElim: minor does not match".into());
            }
            trace.push("Beta");
            trace.push("ImpE");
            Ok((*b).clone())
        }
        Proof::AllIntro(d, b) => {
            let inner = ctx.pushed(d.clone());
            let lifted: Vec<(Name, Term)> = hyps
                .iter()
                .map(|(n, t)| (n.clone(), lift(t, 0, 1).expect("lift")))
                .collect();
            let body = replay(sig, &inner, &lifted, b, trace)?;
            trace.push("AllI");
            Ok(Term::all(d.clone(), body))
        }
        Proof::AllElim(f, w) => {
            let fp = replay(sig, ctx, hyps, f, trace)?;
            let nf = hotg::kernel::whnf_unfold(sig, &fp);
            let Term::All(d, b) = nf else {
                return Err("AllElim: not a universal".into());
            };
            let wty = type_of(ctx, sig, w).map_err(|e| e.to_string())?;
            if wty != d {
                return Err("AllElim: witness type mismatch".into());
            }
            trace.push("Beta");
            trace.push("AllE");
            Ok(subst(&b, 0, w))
        }
    }
}

/// Replays and confirms agreement with the kernel on the derived
/// proposition, up to conversion.
pub fn replay_agrees(sig: &Signature, ty_arity: u8, p: &Proof, statement: &Term) -> bool {
    let ctx = TypingContext::new(ty_arity);
    let mut trace = Vec::new();
    let Ok(derived) = replay(sig, &ctx, &[], p, &mut trace) else {
        return false;
    };
    let Ok(kernel_prop) = check_proof(sig, &ctx, &[], p) else {
        return false;
    };
    conv_unchecked(&derived, &kernel_prop, sig, Unfold::Transparent)
        && conv_unchecked(&derived, statement, sig, Unfold::Transparent)
        && !trace.is_empty()
}

// ---- proof mutation for the rejection harness ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationKind {
    SwapKnown,
    PerturbWitness,
    DropImpIntro,
}

fn count_nodes(p: &Proof, kind: MutationKind) -> usize {
    let self_count = match (kind, p) {
        (MutationKind::SwapKnown, Proof::Known(..)) => 1,
        (MutationKind::PerturbWitness, Proof::AllElim(..)) => 1,
        (MutationKind::DropImpIntro, Proof::ImpIntro(..)) => 1,
        _ => 0,
    };
    self_count
        + match p {
            Proof::Hyp(_) | Proof::Known(..) => 0,
            Proof::ImpIntro(_, _, b) | Proof::AllIntro(_, b) => count_nodes(b, kind),
            Proof::ImpElim(a, b) => count_nodes(a, kind) + count_nodes(b, kind),
            Proof::AllElim(f, _) => count_nodes(f, kind),
        }
}

fn mutate_at(p: &Proof, kind: MutationKind, idx: &mut usize, names: &[Name]) -> Option<Proof> {
    let here = matches!(
        (kind, p),
        (MutationKind::SwapKnown, Proof::Known(..))
            | (MutationKind::PerturbWitness, Proof::AllElim(..))
            | (MutationKind::DropImpIntro, Proof::ImpIntro(..))
    );
    if here {
        if *idx == 0 {
            return Some(match (kind, p) {
                (MutationKind::SwapKnown, Proof::Known(n, tys)) => {
                    let pos = names.iter().position(|m| m == n).unwrap_or(0);
                    let next = names[(pos + 1) % names.len()].clone();
                    Proof::Known(next, tys.clone())
                }
                (MutationKind::PerturbWitness, Proof::AllElim(f, w)) => {
                    let new_w = if *w == Term::cst(ConstName::Empty) {
                        Term::app(Term::cst(ConstName::Power), Term::cst(ConstName::Empty))
                    } else {
                        Term::cst(ConstName::Empty)
                    };
                    Proof::AllElim(f.clone(), new_w)
                }
                (MutationKind::DropImpIntro, Proof::ImpIntro(_, _, b)) => (**b).clone(),
                _ => unreachable!(),
            });
        }
        *idx -= 1;
    }
    match p {
        Proof::Hyp(_) | Proof::Known(..) => None,
        Proof::ImpIntro(n, a, b) => mutate_at(b, kind, idx, names)
            .map(|b2| Proof::ImpIntro(n.clone(), a.clone(), b2.into())),
        Proof::AllIntro(d, b) => {
            mutate_at(b, kind, idx, names).map(|b2| Proof::AllIntro(d.clone(), b2.into()))
        }
        Proof::ImpElim(a, b) => {
            let left = count_nodes(a, kind);
            if *idx < left {
                mutate_at(a, kind, idx, names).map(|a2| Proof::imp_elim(a2, (**b).clone()))
            } else {
                *idx -= left;
                mutate_at(b, kind, idx, names).map(|b2| Proof::imp_elim((**a).clone(), b2))
            }
        }
        Proof::AllElim(f, w) => {
            mutate_at(f, kind, idx, names).map(|f2| Proof::AllElim(f2.into(), w.clone()))
        }
    }
}

/// Applies one random single-node mutation; `None` when the proof has no
/// node of the drawn kind.
pub fn mutate(p: &Proof, rng: &mut ChaCha8Rng, known_names: &[Name]) -> Option<(Proof, MutationKind)> {
    let kind = match rng.gen_range(0..3) {
        0 => MutationKind::SwapKnown,
        1 => MutationKind::PerturbWitness,
        _ => MutationKind::DropImpIntro,
    };
    let n = count_nodes(p, kind);
    if n == 0 {
        return None;
    }
    let mut idx = rng.gen_range(0..n);
    mutate_at(p, kind, &mut idx, known_names).map(|p2| (p2, kind))
}

/// Normal-form sanity used across suites.
pub fn nf(t: &Term) -> Term {
    beta_eta_nf(t, &NoDefs, Unfold::None)
}
