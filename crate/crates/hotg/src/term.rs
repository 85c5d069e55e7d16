//! The syntactic core: simple types, de Bruijn terms, substitution,
//! beta-eta normalization and convertibility.
//!
//! Everything here is pure and immutable; terms share subtrees via `Arc`.

use std::fmt;
use std::sync::Arc;

/// Interned-ish name type. Cloning is cheap.
pub type Name = Arc<str>;

/// Maximum number of type variables in any declaration.
pub const MAX_TYPE_VARS: u8 = 3;

/// Simple types over `o` (propositions), `i` (sets/individuals), arrows and
/// up to three type variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Type {
    Prop,
    Ind,
    Arrow(Box<Type>, Box<Type>),
    /// Index < 3; validity in a context with `n` type variables requires index < n.
    TVar(u8),
}

impl Type {
    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// True iff every `TVar` index is below `n`.
    pub fn valid_in(&self, n: u8) -> bool {
        match self {
            Type::Prop | Type::Ind => true,
            Type::Arrow(a, b) => a.valid_in(n) && b.valid_in(n),
            Type::TVar(i) => *i < n,
        }
    }

    /// Substitutes `args` for the type variables.
    pub fn instantiate(&self, args: &[Type]) -> Type {
        match self {
            Type::Prop => Type::Prop,
            Type::Ind => Type::Ind,
            Type::Arrow(a, b) => Type::arrow(a.instantiate(args), b.instantiate(args)),
            Type::TVar(i) => args
                .get(*i as usize)
                .cloned()
                .unwrap_or_else(|| Type::TVar(*i)),
        }
    }
}

/// The fixed primitive constants. `Eps` is the only polymorphic one; its
/// type argument is stored at each occurrence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ConstName {
    Eps,
    In,
    Empty,
    Union,
    Power,
    Repl,
    UnivOf,
}

impl ConstName {
    pub const ALL: [ConstName; 7] = [
        ConstName::Eps,
        ConstName::In,
        ConstName::Empty,
        ConstName::Union,
        ConstName::Power,
        ConstName::Repl,
        ConstName::UnivOf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstName::Eps => "Eps",
            ConstName::In => "In",
            ConstName::Empty => "Empty",
            ConstName::Union => "Union",
            ConstName::Power => "Power",
            ConstName::Repl => "Repl",
            ConstName::UnivOf => "UnivOf",
        }
    }

    pub fn from_name(s: &str) -> Option<ConstName> {
        ConstName::ALL.iter().copied().find(|c| c.name() == s)
    }

    /// Number of type arguments the constant takes.
    pub fn ty_arity(self) -> usize {
        match self {
            ConstName::Eps => 1,
            _ => 0,
        }
    }

    /// Type schema; `Eps`'s schema mentions `TVar 0`.
    pub fn schema(self) -> Type {
        use Type::{Ind, Prop};
        match self {
            // (nu0 -> o) -> nu0
            ConstName::Eps => Type::arrow(Type::arrow(Type::TVar(0), Prop), Type::TVar(0)),
            ConstName::In => Type::arrow(Ind, Type::arrow(Ind, Prop)),
            ConstName::Empty => Ind,
            ConstName::Union => Type::arrow(Ind, Ind),
            ConstName::Power => Type::arrow(Ind, Ind),
            ConstName::Repl => Type::arrow(Ind, Type::arrow(Type::arrow(Ind, Ind), Ind)),
            ConstName::UnivOf => Type::arrow(Ind, Ind),
        }
    }
}

/// De Bruijn terms. `Imp` and `All` are primitive connectives; everything
/// else in the logic is a definition (`Ref`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    /// Bound or context variable, innermost binder = 0.
    Var(u32),
    /// Primitive constant; `ty_args` nonempty only for `Eps`.
    Const(ConstName, Vec<Type>),
    /// A defined name from a signature, with explicit type instantiation.
    Ref(Name, Vec<Type>),
    App(Arc<Term>, Arc<Term>),
    Lam(Type, Arc<Term>),
    Imp(Arc<Term>, Arc<Term>),
    All(Type, Arc<Term>),
}

impl Term {
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lam(dom: Type, body: Term) -> Term {
        Term::Lam(dom, Arc::new(body))
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn all(dom: Type, body: Term) -> Term {
        Term::All(dom, Arc::new(body))
    }

    pub fn var(k: u32) -> Term {
        Term::Var(k)
    }

    pub fn cst(c: ConstName) -> Term {
        Term::Const(c, vec![])
    }

    pub fn rf(name: &str) -> Term {
        Term::Ref(Name::from(name), vec![])
    }

    pub fn rf_at(name: &str, args: Vec<Type>) -> Term {
        Term::Ref(Name::from(name), args)
    }

    /// True iff `Var(index)` occurs free in the term.
    pub fn free_in(&self, index: u32) -> bool {
        match self {
            Term::Var(k) => *k == index,
            Term::Const(..) | Term::Ref(..) => false,
            Term::App(f, a) | Term::Imp(f, a) => f.free_in(index) || a.free_in(index),
            Term::Lam(_, b) | Term::All(_, b) => b.free_in(index + 1),
        }
    }

    /// Size in constructors, for test budgets.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(..) | Term::Ref(..) => 1,
            Term::App(f, a) | Term::Imp(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, b) | Term::All(_, b) => 1 + b.size(),
        }
    }
}

/// Typing context: number of type variables in scope plus the de Bruijn
/// typing stack (innermost binder last).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TypingContext {
    pub ty_vars: u8,
    pub vars: Vec<Type>,
}

impl TypingContext {
    pub fn new(ty_vars: u8) -> Self {
        TypingContext { ty_vars, vars: Vec::new() }
    }

    pub fn lookup(&self, index: u32) -> Option<&Type> {
        let n = self.vars.len();
        if (index as usize) < n {
            Some(&self.vars[n - 1 - index as usize])
        } else {
            None
        }
    }

    pub fn pushed(&self, ty: Type) -> TypingContext {
        let mut c = self.clone();
        c.vars.push(ty);
        c
    }
}

/// Whether conversion may unfold transparent definitions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Unfold {
    None,
    Transparent,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Opacity {
    Transparent,
    Opaque,
}

/// Read-only view of a definition table, as needed by typing and conversion.
pub struct DefView<'a> {
    pub ty_arity: u8,
    pub ty: &'a Type,
    pub body: &'a Term,
    pub opacity: Opacity,
}

pub trait SigView {
    fn lookup_def(&self, name: &str) -> Option<DefView<'_>>;
}

/// The empty definition table.
pub struct NoDefs;

impl SigView for NoDefs {
    fn lookup_def(&self, _name: &str) -> Option<DefView<'_>> {
        None
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TermError {
    IndexUnderflow,
    UnboundVar(u32),
    ArityMismatch { name: String, expected: usize, got: usize },
    IllTypedApp { fn_ty: Type, arg_ty: Option<Type> },
    NonPropConnective(Type),
    TVarOutOfScope(u8),
    UnknownRef(String),
    TypeMismatch(Type, Type),
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::IndexUnderflow => write!(f, "lift would make a variable index negative"),
            TermError::UnboundVar(k) => write!(f, "unbound variable {k}"),
            TermError::ArityMismatch { name, expected, got } => {
                write!(f, "{name} expects {expected} type argument(s), got {got}")
            }
            TermError::IllTypedApp { fn_ty, arg_ty } => match arg_ty {
                Some(t) => write!(f, "cannot apply value of type {fn_ty:?} to argument of type {t:?}"),
                None => write!(f, "application head of non-arrow type {fn_ty:?}"),
            },
            TermError::NonPropConnective(t) => {
                write!(f, "connective child has type {t:?}, expected o")
            }
            TermError::TVarOutOfScope(i) => write!(f, "type variable {i} out of scope"),
            TermError::UnknownRef(n) => write!(f, "unknown reference {n}"),
            TermError::TypeMismatch(a, b) => write!(f, "type mismatch: {a:?} vs {b:?}"),
        }
    }
}

impl std::error::Error for TermError {}

/// Shifts every free `Var(k)` with `k >= cutoff` by `amount`.
///
/// Negative amounts are used internally by substitution and eta contraction;
/// the call errors rather than produce a negative index.
pub fn lift(t: &Term, cutoff: u32, amount: i64) -> Result<Term, TermError> {
    if amount == 0 {
        return Ok(t.clone());
    }
    match t {
        Term::Var(k) => {
            if *k >= cutoff {
                let shifted = *k as i64 + amount;
                if shifted < 0 {
                    return Err(TermError::IndexUnderflow);
                }
                Ok(Term::Var(shifted as u32))
            } else {
                Ok(t.clone())
            }
        }
        Term::Const(..) | Term::Ref(..) => Ok(t.clone()),
        Term::App(f, a) => Ok(Term::app(lift(f, cutoff, amount)?, lift(a, cutoff, amount)?)),
        Term::Imp(a, b) => Ok(Term::imp(lift(a, cutoff, amount)?, lift(b, cutoff, amount)?)),
        Term::Lam(d, b) => Ok(Term::lam(d.clone(), lift(b, cutoff + 1, amount)?)),
        Term::All(d, b) => Ok(Term::all(d.clone(), lift(b, cutoff + 1, amount)?)),
    }
}

/// Capture-avoiding substitution of `repl` for `Var(target)`; free indices
/// above `target` are decremented (beta-style substitution).
pub fn subst(t: &Term, target: u32, repl: &Term) -> Term {
    match t {
        Term::Var(k) => {
            if *k == target {
                repl.clone()
            } else if *k > target {
                Term::Var(k - 1)
            } else {
                t.clone()
            }
        }
        Term::Const(..) | Term::Ref(..) => t.clone(),
        Term::App(f, a) => Term::app(subst(f, target, repl), subst(a, target, repl)),
        Term::Imp(a, b) => Term::imp(subst(a, target, repl), subst(b, target, repl)),
        Term::Lam(d, b) => {
            let repl1 = lift(repl, 0, 1).expect("positive lift cannot underflow");
            Term::lam(d.clone(), subst(b, target + 1, &repl1))
        }
        Term::All(d, b) => {
            let repl1 = lift(repl, 0, 1).expect("positive lift cannot underflow");
            Term::all(d.clone(), subst(b, target + 1, &repl1))
        }
    }
}

/// Replaces type variables by `args` in every type annotation of the term.
pub fn instantiate_types(t: &Term, args: &[Type], declared_arity: u8) -> Result<Term, TermError> {
    if args.len() != declared_arity as usize {
        return Err(TermError::ArityMismatch {
            name: "instantiation".into(),
            expected: declared_arity as usize,
            got: args.len(),
        });
    }
    Ok(instantiate_types_raw(t, args))
}

pub(crate) fn instantiate_types_raw(t: &Term, args: &[Type]) -> Term {
    if args.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(_) => t.clone(),
        Term::Const(c, tys) => {
            Term::Const(*c, tys.iter().map(|ty| ty.instantiate(args)).collect())
        }
        Term::Ref(n, tys) => {
            Term::Ref(n.clone(), tys.iter().map(|ty| ty.instantiate(args)).collect())
        }
        Term::App(f, a) => Term::app(instantiate_types_raw(f, args), instantiate_types_raw(a, args)),
        Term::Imp(a, b) => Term::imp(instantiate_types_raw(a, args), instantiate_types_raw(b, args)),
        Term::Lam(d, b) => Term::lam(d.instantiate(args), instantiate_types_raw(b, args)),
        Term::All(d, b) => Term::all(d.instantiate(args), instantiate_types_raw(b, args)),
    }
}

/// Synthesizes the unique type of `t` in `ctx`, or the reason it has none.
pub fn type_of(ctx: &TypingContext, sig: &dyn SigView, t: &Term) -> Result<Type, TermError> {
    let mut stack: Vec<Type> = ctx.vars.clone();
    type_of_rec(ctx.ty_vars, &mut stack, sig, t)
}

fn type_of_rec(
    ty_vars: u8,
    stack: &mut Vec<Type>,
    sig: &dyn SigView,
    t: &Term,
) -> Result<Type, TermError> {
    match t {
        Term::Var(k) => {
            let n = stack.len();
            if (*k as usize) < n {
                Ok(stack[n - 1 - *k as usize].clone())
            } else {
                Err(TermError::UnboundVar(*k))
            }
        }
        Term::Const(c, tys) => {
            if tys.len() != c.ty_arity() {
                return Err(TermError::ArityMismatch {
                    name: c.name().into(),
                    expected: c.ty_arity(),
                    got: tys.len(),
                });
            }
            for ty in tys {
                check_type_valid(ty, ty_vars)?;
            }
            Ok(c.schema().instantiate(tys))
        }
        Term::Ref(name, tys) => {
            let def = sig
                .lookup_def(name)
                .ok_or_else(|| TermError::UnknownRef(name.to_string()))?;
            if tys.len() != def.ty_arity as usize {
                return Err(TermError::ArityMismatch {
                    name: name.to_string(),
                    expected: def.ty_arity as usize,
                    got: tys.len(),
                });
            }
            for ty in tys {
                check_type_valid(ty, ty_vars)?;
            }
            Ok(def.ty.instantiate(tys))
        }
        Term::App(f, a) => {
            let tf = type_of_rec(ty_vars, stack, sig, f)?;
            let ta = type_of_rec(ty_vars, stack, sig, a)?;
            match tf {
                Type::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok(*cod)
                    } else {
                        Err(TermError::IllTypedApp {
                            fn_ty: Type::Arrow(dom, cod),
                            arg_ty: Some(ta),
                        })
                    }
                }
                other => Err(TermError::IllTypedApp { fn_ty: other, arg_ty: Some(ta) }),
            }
        }
        Term::Lam(d, b) => {
            check_type_valid(d, ty_vars)?;
            stack.push(d.clone());
            let tb = type_of_rec(ty_vars, stack, sig, b);
            stack.pop();
            Ok(Type::arrow(d.clone(), tb?))
        }
        Term::Imp(a, b) => {
            let ta = type_of_rec(ty_vars, stack, sig, a)?;
            if ta != Type::Prop {
                return Err(TermError::NonPropConnective(ta));
            }
            let tb = type_of_rec(ty_vars, stack, sig, b)?;
            if tb != Type::Prop {
                return Err(TermError::NonPropConnective(tb));
            }
            Ok(Type::Prop)
        }
        Term::All(d, b) => {
            check_type_valid(d, ty_vars)?;
            stack.push(d.clone());
            let tb = type_of_rec(ty_vars, stack, sig, b);
            stack.pop();
            let tb = tb?;
            if tb != Type::Prop {
                return Err(TermError::NonPropConnective(tb));
            }
            Ok(Type::Prop)
        }
    }
}

fn check_type_valid(ty: &Type, ty_vars: u8) -> Result<(), TermError> {
    if ty.valid_in(ty_vars) {
        Ok(())
    } else {
        let bad = first_bad_tvar(ty, ty_vars).unwrap_or(0);
        Err(TermError::TVarOutOfScope(bad))
    }
}

fn first_bad_tvar(ty: &Type, n: u8) -> Option<u8> {
    match ty {
        Type::Prop | Type::Ind => None,
        Type::Arrow(a, b) => first_bad_tvar(a, n).or_else(|| first_bad_tvar(b, n)),
        Type::TVar(i) => (*i >= n).then_some(*i),
    }
}

/// Full beta normalization. Transparent `Ref`s are unfolded first when the
/// policy allows; opaque ones never unfold.
fn beta_nf(t: &Term, sig: &dyn SigView, unfold: Unfold) -> Term {
    match t {
        Term::Var(_) | Term::Const(..) => t.clone(),
        Term::Ref(name, tys) => {
            if unfold == Unfold::Transparent {
                if let Some(def) = sig.lookup_def(name) {
                    if def.opacity == Opacity::Transparent {
                        let body = instantiate_types_raw(def.body, tys);
                        return beta_nf(&body, sig, unfold);
                    }
                }
            }
            t.clone()
        }
        Term::App(f, a) => {
            let fnf = beta_nf(f, sig, unfold);
            let anf = beta_nf(a, sig, unfold);
            if let Term::Lam(_, body) = &fnf {
                beta_nf(&subst(body, 0, &anf), sig, unfold)
            } else {
                Term::app(fnf, anf)
            }
        }
        Term::Lam(d, b) => Term::lam(d.clone(), beta_nf(b, sig, unfold)),
        Term::Imp(a, b) => Term::imp(beta_nf(a, sig, unfold), beta_nf(b, sig, unfold)),
        Term::All(d, b) => Term::all(d.clone(), beta_nf(b, sig, unfold)),
    }
}

/// Bottom-up eta contraction; on beta-normal input the result is
/// beta-eta-normal.
fn eta_nf(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(..) | Term::Ref(..) => t.clone(),
        Term::App(f, a) => Term::app(eta_nf(f), eta_nf(a)),
        Term::Imp(a, b) => Term::imp(eta_nf(a), eta_nf(b)),
        Term::All(d, b) => Term::all(d.clone(), eta_nf(b)),
        Term::Lam(d, b) => {
            let b2 = eta_nf(b);
            if let Term::App(f, a) = &b2 {
                if matches!(**a, Term::Var(0)) && !f.free_in(0) {
                    return lift(f, 0, -1).expect("var 0 not free, lift cannot underflow");
                }
            }
            Term::lam(d.clone(), b2)
        }
    }
}

/// Beta-eta normal form: beta to completion, then eta contraction to
/// completion. Terminates on all well-typed terms.
pub fn beta_eta_nf(t: &Term, sig: &dyn SigView, unfold: Unfold) -> Term {
    eta_nf(&beta_nf(t, sig, unfold))
}

/// Beta-eta convertibility of two terms of the same type in `ctx`.
///
/// Alpha equivalence is free under de Bruijn, so this is structural equality
/// of normal forms. Errors if the terms do not share a type.
pub fn conv(
    ctx: &TypingContext,
    s: &Term,
    t: &Term,
    sig: &dyn SigView,
    unfold: Unfold,
) -> Result<bool, TermError> {
    let ts = type_of(ctx, sig, s)?;
    let tt = type_of(ctx, sig, t)?;
    if ts != tt {
        return Err(TermError::TypeMismatch(ts, tt));
    }
    Ok(conv_unchecked(s, t, sig, unfold))
}

/// Convertibility without the shared-type precondition check. Kernel-internal
/// callers compare propositions already known to have type `o`.
pub fn conv_unchecked(s: &Term, t: &Term, sig: &dyn SigView, unfold: Unfold) -> bool {
    if s == t {
        return true;
    }
    beta_eta_nf(s, sig, unfold) == beta_eta_nf(t, sig, unfold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Type::{Ind, Prop};

    fn ty_i() -> Type {
        Ind
    }

    #[test]
    fn lift_free_variable() {
        assert_eq!(lift(&Term::Var(0), 0, 2).unwrap(), Term::Var(2));
    }

    #[test]
    fn lift_bound_variable_untouched() {
        let t = Term::lam(ty_i(), Term::Var(0));
        assert_eq!(lift(&t, 0, 5).unwrap(), t);
    }

    #[test]
    fn lift_free_under_binder_shifts() {
        let t = Term::lam(ty_i(), Term::Var(1));
        assert_eq!(lift(&t, 0, 1).unwrap(), Term::lam(ty_i(), Term::Var(2)));
    }

    #[test]
    fn lift_underflow_detected() {
        assert_eq!(lift(&Term::Var(0), 0, -1), Err(TermError::IndexUnderflow));
    }

    #[test]
    fn subst_var_directly() {
        assert_eq!(
            subst(&Term::Var(0), 0, &Term::cst(ConstName::Empty)),
            Term::cst(ConstName::Empty)
        );
    }

    #[test]
    fn subst_decrements_higher_indices() {
        let t = Term::app(Term::Var(0), Term::Var(1));
        assert_eq!(
            subst(&t, 0, &Term::cst(ConstName::Empty)),
            Term::app(Term::cst(ConstName::Empty), Term::Var(0))
        );
    }

    #[test]
    fn subst_lifts_under_binder() {
        // subst(Lam(i, App(Var 0, Var 1)), 0, Lam(i, Var 0))
        let t = Term::lam(ty_i(), Term::app(Term::Var(0), Term::Var(1)));
        let r = Term::lam(ty_i(), Term::Var(0));
        let expect = Term::lam(ty_i(), Term::app(Term::Var(0), Term::lam(ty_i(), Term::Var(0))));
        assert_eq!(subst(&t, 0, &r), expect);
    }

    #[test]
    fn type_of_identity() {
        let ctx = TypingContext::default();
        let t = Term::lam(ty_i(), Term::Var(0));
        assert_eq!(type_of(&ctx, &NoDefs, &t).unwrap(), Type::arrow(Ind, Ind));
    }

    #[test]
    fn type_of_in_constant() {
        let ctx = TypingContext::default();
        assert_eq!(
            type_of(&ctx, &NoDefs, &Term::cst(ConstName::In)).unwrap(),
            Type::arrow(Ind, Type::arrow(Ind, Prop))
        );
    }

    #[test]
    fn type_of_ill_typed_app() {
        let ctx = TypingContext::default();
        let t = Term::app(Term::cst(ConstName::Empty), Term::cst(ConstName::Empty));
        assert!(matches!(
            type_of(&ctx, &NoDefs, &t),
            Err(TermError::IllTypedApp { .. })
        ));
    }

    #[test]
    fn type_of_eps_instance() {
        let ctx = TypingContext::default();
        let t = Term::Const(ConstName::Eps, vec![Ind]);
        assert_eq!(
            type_of(&ctx, &NoDefs, &t).unwrap(),
            Type::arrow(Type::arrow(Ind, Prop), Ind)
        );
    }

    #[test]
    fn type_of_rejects_nonprop_connective() {
        let ctx = TypingContext::default();
        let t = Term::imp(Term::cst(ConstName::Empty), Term::cst(ConstName::Empty));
        assert!(matches!(
            type_of(&ctx, &NoDefs, &t),
            Err(TermError::NonPropConnective(_))
        ));
    }

    #[test]
    fn type_of_tvar_scope() {
        let ctx = TypingContext::new(1);
        let t = Term::lam(Type::TVar(0), Term::Var(0));
        assert!(type_of(&ctx, &NoDefs, &t).is_ok());
        let ctx0 = TypingContext::default();
        assert!(matches!(
            type_of(&ctx0, &NoDefs, &t),
            Err(TermError::TVarOutOfScope(0))
        ));
    }

    #[test]
    fn nf_beta_redex() {
        let t = Term::app(Term::lam(ty_i(), Term::Var(0)), Term::cst(ConstName::Empty));
        assert_eq!(
            beta_eta_nf(&t, &NoDefs, Unfold::None),
            Term::cst(ConstName::Empty)
        );
    }

    #[test]
    fn nf_eta_contraction() {
        let t = Term::lam(ty_i(), Term::app(Term::cst(ConstName::Power), Term::Var(0)));
        assert_eq!(
            beta_eta_nf(&t, &NoDefs, Unfold::None),
            Term::cst(ConstName::Power)
        );
    }

    #[test]
    fn nf_combined_redex() {
        // (fun f : i->i => f Empty) (fun x => Power x)  ~>  Power Empty
        let t = Term::app(
            Term::lam(
                Type::arrow(Ind, Ind),
                Term::app(Term::Var(0), Term::cst(ConstName::Empty)),
            ),
            Term::lam(ty_i(), Term::app(Term::cst(ConstName::Power), Term::Var(0))),
        );
        assert_eq!(
            beta_eta_nf(&t, &NoDefs, Unfold::None),
            Term::app(Term::cst(ConstName::Power), Term::cst(ConstName::Empty))
        );
    }

    #[test]
    fn nf_no_eta_when_var_free_in_head() {
        // fun x => x x is not well typed, use fun x => (f x) x shape instead:
        // fun x:i => In x x  must stay as is (no eta: head mentions var 0).
        let t = Term::lam(
            ty_i(),
            Term::apps(Term::cst(ConstName::In), [Term::Var(0), Term::Var(0)]),
        );
        assert_eq!(beta_eta_nf(&t, &NoDefs, Unfold::None), t);
    }

    #[test]
    fn nf_nested_eta() {
        // fun x y => In x y  ~>  In
        let t = Term::lam(
            ty_i(),
            Term::lam(
                ty_i(),
                Term::apps(Term::cst(ConstName::In), [Term::Var(1), Term::Var(0)]),
            ),
        );
        assert_eq!(beta_eta_nf(&t, &NoDefs, Unfold::None), Term::cst(ConstName::In));
    }

    #[test]
    fn conv_reflexive_and_eta() {
        let ctx = TypingContext::default();
        let s = Term::lam(ty_i(), Term::app(Term::cst(ConstName::Union), Term::Var(0)));
        let t = Term::cst(ConstName::Union);
        assert!(conv(&ctx, &s, &s, &NoDefs, Unfold::None).unwrap());
        assert!(conv(&ctx, &s, &t, &NoDefs, Unfold::None).unwrap());
    }

    #[test]
    fn conv_distinct_normal_forms() {
        let ctx = TypingContext::default();
        let s = Term::cst(ConstName::Empty);
        let t = Term::app(Term::cst(ConstName::Union), Term::cst(ConstName::Empty));
        assert!(!conv(&ctx, &s, &t, &NoDefs, Unfold::None).unwrap());
    }

    #[test]
    fn conv_type_mismatch_detected() {
        let ctx = TypingContext::default();
        let s = Term::cst(ConstName::Empty);
        let t = Term::cst(ConstName::Union);
        assert!(matches!(
            conv(&ctx, &s, &t, &NoDefs, Unfold::None),
            Err(TermError::TypeMismatch(..))
        ));
    }

    #[test]
    fn instantiate_monomorphic_unchanged() {
        let t = Term::cst(ConstName::Empty);
        assert_eq!(instantiate_types(&t, &[], 0).unwrap(), t);
    }

    #[test]
    fn instantiate_arity_mismatch() {
        let t = Term::lam(Type::TVar(0), Term::Var(0));
        assert!(matches!(
            instantiate_types(&t, &[Ind, Prop], 1),
            Err(TermError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn instantiate_replaces_tvars() {
        let t = Term::Const(ConstName::Eps, vec![Type::TVar(0)]);
        assert_eq!(
            instantiate_types(&t, &[Ind], 1).unwrap(),
            Term::Const(ConstName::Eps, vec![Ind])
        );
    }

    #[test]
    fn subst_lift_coherence() {
        let t = Term::lam(ty_i(), Term::apps(Term::cst(ConstName::In), [Term::Var(0), Term::Var(1)]));
        let u = Term::cst(ConstName::Empty);
        let s = subst(&t, 0, &u);
        assert_eq!(lift(&s, 0, 0).unwrap(), s);
        assert_eq!(subst(&lift(&t, 0, 1).unwrap(), 0, &u), t);
    }
}
