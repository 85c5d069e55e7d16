//! The trusted checker: the fixed axiom set, natural-deduction proof term
//! verification, and the append-only signature of definitions and theorems.
//!
//! Nothing outside this module and [`crate::term`] has to be trusted;
//! parsing and script elaboration always hand their results back here for
//! re-checking.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::term::{
    beta_eta_nf, conv_unchecked, instantiate_types, lift, subst, type_of, ConstName, DefView,
    Name, Opacity, SigView, Term, TermError, Type, TypingContext, Unfold, MAX_TYPE_VARS,
};

/// Builders for the impredicative encodings of the defined connectives.
///
/// The builtin axioms must be closed terms over the primitive constants
/// alone, so the connectives appearing in them are spelled out here once.
/// The formal library defines the same connectives by name; transparent
/// unfolding makes both spellings convertible.
pub mod enc {
    use super::*;
    use crate::term::Term::Var;

    fn up(t: &Term) -> Term {
        lift(t, 0, 1).expect("positive lift")
    }

    /// `False` as `forall p:o. p`.
    pub fn false_() -> Term {
        Term::all(Type::Prop, Var(0))
    }

    pub fn not(a: Term) -> Term {
        Term::imp(a, false_())
    }

    /// `a /\ b` as `forall r:o. (a -> b -> r) -> r`.
    pub fn and(a: Term, b: Term) -> Term {
        Term::all(
            Type::Prop,
            Term::imp(Term::imp(up(&a), Term::imp(up(&b), Var(0))), Var(0)),
        )
    }

    /// `a \/ b` as `forall r:o. (a -> r) -> (b -> r) -> r`.
    pub fn or(a: Term, b: Term) -> Term {
        Term::all(
            Type::Prop,
            Term::imp(
                Term::imp(up(&a), Var(0)),
                Term::imp(Term::imp(up(&b), Var(0)), Var(0)),
            ),
        )
    }

    pub fn iff(a: Term, b: Term) -> Term {
        and(Term::imp(a.clone(), b.clone()), Term::imp(b, a))
    }

    /// `exists x:ty. body` as `forall q:o. (forall x:ty. body -> q) -> q`.
    /// `body` is de Bruijn relative to the `x` binder.
    pub fn ex(ty: Type, body: Term) -> Term {
        let body_in = lift(&body, 1, 1).expect("positive lift");
        Term::all(
            Type::Prop,
            Term::imp(Term::all(ty, Term::imp(body_in, Var(1))), Var(0)),
        )
    }

    /// Leibniz equality `a = b` at `ty`: `forall Q:ty->o. Q a -> Q b`.
    pub fn eq(ty: Type, a: Term, b: Term) -> Term {
        Term::all(
            Type::arrow(ty, Type::Prop),
            Term::imp(Term::app(Var(0), up(&a)), Term::app(Var(0), up(&b))),
        )
    }

    pub fn in_(a: Term, b: Term) -> Term {
        Term::apps(Term::cst(ConstName::In), [a, b])
    }

    /// `a c= b` spelled out as `forall x. x :e a -> x :e b`.
    pub fn subq(a: Term, b: Term) -> Term {
        Term::all(Type::Ind, Term::imp(in_(Var(0), up(&a)), in_(Var(0), up(&b))))
    }

    /// `TransSet u`: `forall X :e u, X c= u`.
    pub fn transset(u: Term) -> Term {
        Term::all(
            Type::Ind,
            Term::imp(in_(Var(0), up(&u)), subq(Var(0), up(&u))),
        )
    }

    /// `Union_closed u`: `forall X :e u, Union X :e u`.
    pub fn union_closed(u: Term) -> Term {
        Term::all(
            Type::Ind,
            Term::imp(
                in_(Var(0), up(&u)),
                in_(Term::app(Term::cst(ConstName::Union), Var(0)), up(&u)),
            ),
        )
    }

    /// `Power_closed u`: `forall X :e u, Power X :e u`.
    pub fn power_closed(u: Term) -> Term {
        Term::all(
            Type::Ind,
            Term::imp(
                in_(Var(0), up(&u)),
                in_(Term::app(Term::cst(ConstName::Power), Var(0)), up(&u)),
            ),
        )
    }

    /// `Repl_closed u`:
    /// `forall X :e u, forall F:i->i, (forall x :e X, F x :e u) -> {F x|x :e X} :e u`.
    pub fn repl_closed(u: Term) -> Term {
        let u1 = up(&u);
        let u2 = up(&u1);
        let u3 = up(&u2);
        let pointwise = Term::all(
            Type::Ind,
            Term::imp(in_(Var(0), Var(2)), in_(Term::app(Var(1), Var(0)), u3)),
        );
        let image = Term::apps(
            Term::cst(ConstName::Repl),
            [Var(1), Term::lam(Type::Ind, Term::app(Var(1), Var(0)))],
        );
        Term::all(
            Type::Ind,
            Term::imp(
                in_(Var(0), u1),
                Term::all(
                    Type::arrow(Type::Ind, Type::Ind),
                    Term::imp(pointwise, in_(image, u2)),
                ),
            ),
        )
    }

    /// `ZF_closed u` as the conjunction of the three closure properties.
    pub fn zf_closed(u: Term) -> Term {
        and(
            union_closed(u.clone()),
            and(power_closed(u.clone()), repl_closed(u)),
        )
    }
}

/// The fixed axiom set. `FuncExt` and `Choice` are the only schematic
/// members.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AxiomName {
    PropExt,
    FuncExt,
    Choice,
    SetExt,
    InInduction,
    EmptyAx,
    UnionAx,
    PowerAx,
    ReplacementAx,
    UnivIn,
    UnivTrans,
    UnivZFClosed,
    UnivMin,
}

impl AxiomName {
    pub const ALL: [AxiomName; 13] = [
        AxiomName::PropExt,
        AxiomName::FuncExt,
        AxiomName::Choice,
        AxiomName::SetExt,
        AxiomName::InInduction,
        AxiomName::EmptyAx,
        AxiomName::UnionAx,
        AxiomName::PowerAx,
        AxiomName::ReplacementAx,
        AxiomName::UnivIn,
        AxiomName::UnivTrans,
        AxiomName::UnivZFClosed,
        AxiomName::UnivMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomName::PropExt => "PropExt",
            AxiomName::FuncExt => "FuncExt",
            AxiomName::Choice => "Choice",
            AxiomName::SetExt => "SetExt",
            AxiomName::InInduction => "InInduction",
            AxiomName::EmptyAx => "EmptyAx",
            AxiomName::UnionAx => "UnionAx",
            AxiomName::PowerAx => "PowerAx",
            AxiomName::ReplacementAx => "ReplacementAx",
            AxiomName::UnivIn => "UnivIn",
            AxiomName::UnivTrans => "UnivTrans",
            AxiomName::UnivZFClosed => "UnivZFClosed",
            AxiomName::UnivMin => "UnivMin",
        }
    }

    pub fn from_name(s: &str) -> Option<AxiomName> {
        AxiomName::ALL.iter().copied().find(|a| a.name() == s)
    }

    pub fn ty_arity(self) -> u8 {
        match self {
            AxiomName::FuncExt => 2,
            AxiomName::Choice => 1,
            _ => 0,
        }
    }

    /// The axiom's statement, with `TVar`s for the schematic parameters.
    pub fn schema(self) -> Term {
        use Term::Var;
        use Type::{Ind, Prop};
        match self {
            // forall P Q:o. (P <-> Q) -> P = Q
            AxiomName::PropExt => Term::all(
                Prop,
                Term::all(
                    Prop,
                    Term::imp(enc::iff(Var(1), Var(0)), enc::eq(Prop, Var(1), Var(0))),
                ),
            ),
            // forall f g:nu0->nu1. (forall x:nu0. f x = g x) -> f = g
            AxiomName::FuncExt => {
                let ft = Type::arrow(Type::TVar(0), Type::TVar(1));
                Term::all(
                    ft.clone(),
                    Term::all(
                        ft.clone(),
                        Term::imp(
                            Term::all(
                                Type::TVar(0),
                                enc::eq(
                                    Type::TVar(1),
                                    Term::app(Var(2), Var(0)),
                                    Term::app(Var(1), Var(0)),
                                ),
                            ),
                            enc::eq(ft, Var(1), Var(0)),
                        ),
                    ),
                )
            }
            // forall p:nu0->o. forall x:nu0. p x -> p (eps (fun y => p y))
            AxiomName::Choice => Term::all(
                Type::arrow(Type::TVar(0), Prop),
                Term::all(
                    Type::TVar(0),
                    Term::imp(
                        Term::app(Var(1), Var(0)),
                        Term::app(
                            Var(1),
                            Term::app(
                                Term::Const(ConstName::Eps, vec![Type::TVar(0)]),
                                Term::lam(Type::TVar(0), Term::app(Var(2), Var(0))),
                            ),
                        ),
                    ),
                ),
            ),
            // forall X Y. X c= Y -> Y c= X -> X = Y
            AxiomName::SetExt => Term::all(
                Ind,
                Term::all(
                    Ind,
                    Term::imp(
                        enc::subq(Var(1), Var(0)),
                        Term::imp(enc::subq(Var(0), Var(1)), enc::eq(Ind, Var(1), Var(0))),
                    ),
                ),
            ),
            // forall P:i->o. (forall X. (forall x :e X, P x) -> P X) -> forall X. P X
            AxiomName::InInduction => Term::all(
                Type::arrow(Ind, Prop),
                Term::imp(
                    Term::all(
                        Ind,
                        Term::imp(
                            Term::all(
                                Ind,
                                Term::imp(enc::in_(Var(0), Var(1)), Term::app(Var(2), Var(0))),
                            ),
                            Term::app(Var(1), Var(0)),
                        ),
                    ),
                    Term::all(Ind, Term::app(Var(1), Var(0))),
                ),
            ),
            // ~ exists x. x :e Empty
            AxiomName::EmptyAx => enc::not(enc::ex(
                Ind,
                enc::in_(Var(0), Term::cst(ConstName::Empty)),
            )),
            // forall X x. x :e Union X <-> exists Y. x :e Y /\ Y :e X
            AxiomName::UnionAx => Term::all(
                Ind,
                Term::all(
                    Ind,
                    enc::iff(
                        enc::in_(Var(0), Term::app(Term::cst(ConstName::Union), Var(1))),
                        enc::ex(
                            Ind,
                            enc::and(enc::in_(Var(1), Var(0)), enc::in_(Var(0), Var(2))),
                        ),
                    ),
                ),
            ),
            // forall X Y. Y :e Power X <-> Y c= X
            AxiomName::PowerAx => Term::all(
                Ind,
                Term::all(
                    Ind,
                    enc::iff(
                        enc::in_(Var(0), Term::app(Term::cst(ConstName::Power), Var(1))),
                        enc::subq(Var(0), Var(1)),
                    ),
                ),
            ),
            // forall X. forall F:i->i. forall y.
            //   y :e {F x|x :e X} <-> exists x :e X, y = F x
            AxiomName::ReplacementAx => Term::all(
                Ind,
                Term::all(
                    Type::arrow(Ind, Ind),
                    Term::all(
                        Ind,
                        enc::iff(
                            enc::in_(
                                Var(0),
                                Term::apps(
                                    Term::cst(ConstName::Repl),
                                    [Var(2), Term::lam(Ind, Term::app(Var(2), Var(0)))],
                                ),
                            ),
                            enc::ex(
                                Ind,
                                enc::and(
                                    enc::in_(Var(0), Var(3)),
                                    enc::eq(Ind, Var(1), Term::app(Var(2), Var(0))),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
            // forall N. N :e UnivOf N
            AxiomName::UnivIn => Term::all(
                Ind,
                enc::in_(Var(0), Term::app(Term::cst(ConstName::UnivOf), Var(0))),
            ),
            // forall N. TransSet (UnivOf N)
            AxiomName::UnivTrans => Term::all(
                Ind,
                enc::transset(Term::app(Term::cst(ConstName::UnivOf), Var(0))),
            ),
            // forall N. ZF_closed (UnivOf N)
            AxiomName::UnivZFClosed => Term::all(
                Ind,
                enc::zf_closed(Term::app(Term::cst(ConstName::UnivOf), Var(0))),
            ),
            // forall N U. N :e U -> TransSet U -> ZF_closed U -> UnivOf N c= U
            AxiomName::UnivMin => Term::all(
                Ind,
                Term::all(
                    Ind,
                    Term::imp(
                        enc::in_(Var(1), Var(0)),
                        Term::imp(
                            enc::transset(Var(0)),
                            Term::imp(
                                enc::zf_closed(Var(0)),
                                enc::subq(
                                    Term::app(Term::cst(ConstName::UnivOf), Var(1)),
                                    Var(0),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        }
    }
}

/// Returns the named axiom instantiated at the given types.
pub fn builtin_axiom(name: AxiomName, ty_args: &[Type]) -> Result<Term, KernelError> {
    if ty_args.len() != name.ty_arity() as usize {
        return Err(KernelError::ArityMismatch {
            name: name.name().into(),
            expected: name.ty_arity() as usize,
            got: ty_args.len(),
        });
    }
    Ok(instantiate_types(&name.schema(), ty_args, name.ty_arity())
        .expect("arity checked above"))
}

/// Curry-Howard proof terms, one constructor per non-beta rule of the
/// deduction system. Conversion is implicit at every place two propositions
/// are compared, which realizes the beta rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Proof {
    /// A named hypothesis.
    Hyp(Name),
    /// An axiom or previously established theorem, with explicit type
    /// instantiation.
    Known(Name, Vec<Type>),
    /// Implication introduction: assumes `1` (a proposition) as hypothesis
    /// named `0` while proving the body.
    ImpIntro(Name, Term, Arc<Proof>),
    /// Modus ponens; the minor premise must be convertible with the major's
    /// antecedent.
    ImpElim(Arc<Proof>, Arc<Proof>),
    /// Universal introduction, binding a fresh term variable of the given
    /// type. Eigenvariable freshness is structural under de Bruijn.
    AllIntro(Type, Arc<Proof>),
    /// Universal elimination at a witness term.
    AllElim(Arc<Proof>, Term),
}

impl Proof {
    pub fn hyp(n: &str) -> Proof {
        Proof::Hyp(Name::from(n))
    }

    pub fn known(n: &str, tys: Vec<Type>) -> Proof {
        Proof::Known(Name::from(n), tys)
    }

    pub fn imp_intro(n: &str, assumed: Term, body: Proof) -> Proof {
        Proof::ImpIntro(Name::from(n), assumed, Arc::new(body))
    }

    pub fn imp_elim(major: Proof, minor: Proof) -> Proof {
        Proof::ImpElim(Arc::new(major), Arc::new(minor))
    }

    pub fn all_intro(dom: Type, body: Proof) -> Proof {
        Proof::AllIntro(dom, Arc::new(body))
    }

    pub fn all_elim(f: Proof, witness: Term) -> Proof {
        Proof::AllElim(Arc::new(f), witness)
    }

    pub fn size(&self) -> usize {
        match self {
            Proof::Hyp(_) | Proof::Known(..) => 1,
            Proof::ImpIntro(_, _, b) => 1 + b.size(),
            Proof::ImpElim(a, b) => 1 + a.size() + b.size(),
            Proof::AllIntro(_, b) => 1 + b.size(),
            Proof::AllElim(f, _) => 1 + f.size(),
        }
    }
}

/// The hypothesis context: named propositions, innermost last.
pub type HypContext = Vec<(Name, Term)>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KernelError {
    UnknownHyp(String),
    UnknownRef(String),
    NotAnImplication(Term),
    NotAForall(Term),
    PropMismatch { expected: Term, got: Term },
    IllTypedWitness(TermError),
    ShadowedHyp(String),
    DuplicateName(String),
    IllTyped(TermError),
    ArityTooLarge(u8),
    ArityMismatch { name: String, expected: usize, got: usize },
    ProofDoesNotMatchStatement { statement: Term, proved: Term },
    TrustDisabled(String),
    NotAProposition(Type),
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::canonical::term_sexpr;
        match self {
            KernelError::UnknownHyp(n) => write!(f, "unknown hypothesis {n}"),
            KernelError::UnknownRef(n) => write!(f, "unknown theorem or axiom {n}"),
            KernelError::NotAnImplication(t) => {
                write!(f, "not an implication: {}", term_sexpr(t))
            }
            KernelError::NotAForall(t) => write!(f, "not a universal: {}", term_sexpr(t)),
            KernelError::PropMismatch { expected, got } => write!(
                f,
                "propositions not convertible: expected {}, got {}",
                term_sexpr(expected),
                term_sexpr(got)
            ),
            KernelError::IllTypedWitness(e) => write!(f, "ill-typed witness: {e}"),
            KernelError::ShadowedHyp(n) => write!(f, "hypothesis name {n} already in use"),
            KernelError::DuplicateName(n) => write!(f, "name {n} already declared"),
            KernelError::IllTyped(e) => write!(f, "ill-typed: {e}"),
            KernelError::ArityTooLarge(n) => {
                write!(f, "{n} type variables requested, at most {MAX_TYPE_VARS} allowed")
            }
            KernelError::ArityMismatch { name, expected, got } => {
                write!(f, "{name} expects {expected} type argument(s), got {got}")
            }
            KernelError::ProofDoesNotMatchStatement { statement, proved } => write!(
                f,
                "proof proves {}, which is not convertible with the statement {}",
                term_sexpr(proved),
                term_sexpr(statement)
            ),
            KernelError::TrustDisabled(n) => write!(
                f,
                "trusted import {n} rejected: session started without --trust-imports"
            ),
            KernelError::NotAProposition(t) => {
                write!(f, "statement has type {t:?}, expected o")
            }
        }
    }
}

impl std::error::Error for KernelError {}

impl From<TermError> for KernelError {
    fn from(e: TermError) -> Self {
        KernelError::IllTyped(e)
    }
}

/// How a theorem entered the signature.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Provenance {
    Proved(Arc<Proof>),
    Trusted,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decl {
    Def {
        name: Name,
        ty_arity: u8,
        ty: Type,
        body: Term,
        opacity: Opacity,
    },
    Thm {
        name: Name,
        ty_arity: u8,
        statement: Term,
        provenance: Provenance,
    },
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Def { name, .. } | Decl::Thm { name, .. } => name,
        }
    }
}

/// The checked environment: an append-only sequence of definitions and
/// theorems over the fixed axiom base. Later entries may reference only
/// earlier ones, so the store is acyclic by construction.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    decls: Vec<Decl>,
    index: HashMap<Name, usize>,
    trust_enabled: bool,
}

impl SigView for Signature {
    fn lookup_def(&self, name: &str) -> Option<DefView<'_>> {
        match self.decls.get(*self.index.get(name)?)? {
            Decl::Def { ty_arity, ty, body, opacity, .. } => Some(DefView {
                ty_arity: *ty_arity,
                ty,
                body,
                opacity: *opacity,
            }),
            Decl::Thm { .. } => None,
        }
    }
}

impl Signature {
    pub fn new(trust_enabled: bool) -> Signature {
        Signature { trust_enabled, ..Signature::default() }
    }

    pub fn trust_enabled(&self) -> bool {
        self.trust_enabled
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Names of every trusted import, in declaration order.
    pub fn trusted_names(&self) -> Vec<Name> {
        self.decls
            .iter()
            .filter_map(|d| match d {
                Decl::Thm { name, provenance: Provenance::Trusted, .. } => Some(name.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn proved_count(&self) -> usize {
        self.decls
            .iter()
            .filter(|d| matches!(d, Decl::Thm { provenance: Provenance::Proved(_), .. }))
            .count()
    }

    pub fn theorem(&self, name: &str) -> Option<(&Term, u8, &Provenance)> {
        match self.decls.get(*self.index.get(name)?)? {
            Decl::Thm { statement, ty_arity, provenance, .. } => {
                Some((statement, *ty_arity, provenance))
            }
            _ => None,
        }
    }

    pub fn definition(&self, name: &str) -> Option<(&Type, &Term, u8, Opacity)> {
        match self.decls.get(*self.index.get(name)?)? {
            Decl::Def { ty, body, ty_arity, opacity, .. } => {
                Some((ty, body, *ty_arity, *opacity))
            }
            _ => None,
        }
    }

    /// The instantiated statement behind a `Known` reference: a builtin
    /// axiom or a recorded theorem.
    pub fn known_statement(&self, name: &str, ty_args: &[Type]) -> Result<Term, KernelError> {
        if let Some(ax) = AxiomName::from_name(name) {
            return builtin_axiom(ax, ty_args);
        }
        match self.theorem(name) {
            Some((statement, ty_arity, _)) => {
                if ty_args.len() != ty_arity as usize {
                    return Err(KernelError::ArityMismatch {
                        name: name.into(),
                        expected: ty_arity as usize,
                        got: ty_args.len(),
                    });
                }
                Ok(instantiate_types(statement, ty_args, ty_arity).expect("arity checked"))
            }
            None => Err(KernelError::UnknownRef(name.into())),
        }
    }

    fn check_fresh(&self, name: &str) -> Result<(), KernelError> {
        if AxiomName::from_name(name).is_some()
            || ConstName::from_name(name).is_some()
            || self.contains(name)
        {
            return Err(KernelError::DuplicateName(name.into()));
        }
        Ok(())
    }

    fn check_statement(&self, ty_arity: u8, statement: &Term) -> Result<(), KernelError> {
        if ty_arity > MAX_TYPE_VARS {
            return Err(KernelError::ArityTooLarge(ty_arity));
        }
        let ctx = TypingContext::new(ty_arity);
        let ty = type_of(&ctx, self, statement)?;
        if ty != Type::Prop {
            return Err(KernelError::NotAProposition(ty));
        }
        Ok(())
    }

    /// Adds a definition after checking the body against the declared type
    /// in an empty variable context with `ty_arity` type variables.
    pub fn add_definition(
        &mut self,
        name: &str,
        ty_arity: u8,
        ty: Type,
        body: Term,
        opacity: Opacity,
    ) -> Result<(), KernelError> {
        self.check_fresh(name)?;
        if ty_arity > MAX_TYPE_VARS {
            return Err(KernelError::ArityTooLarge(ty_arity));
        }
        let ctx = TypingContext::new(ty_arity);
        if !ty.valid_in(ty_arity) {
            return Err(KernelError::IllTyped(TermError::TVarOutOfScope(ty_arity)));
        }
        let actual = type_of(&ctx, self, &body)?;
        if actual != ty {
            return Err(KernelError::IllTyped(TermError::TypeMismatch(ty, actual)));
        }
        self.push(Decl::Def { name: Name::from(name), ty_arity, ty, body, opacity });
        Ok(())
    }

    /// Adds a theorem after verifying its proof synthesizes a proposition
    /// convertible with the statement.
    pub fn add_theorem(
        &mut self,
        name: &str,
        ty_arity: u8,
        statement: Term,
        proof: Proof,
    ) -> Result<(), KernelError> {
        self.check_fresh(name)?;
        self.check_statement(ty_arity, &statement)?;
        let ctx = TypingContext::new(ty_arity);
        let proved = check_proof(self, &ctx, &[], &proof)?;
        if !conv_unchecked(&proved, &statement, self, Unfold::Transparent) {
            return Err(KernelError::ProofDoesNotMatchStatement { statement, proved });
        }
        self.push(Decl::Thm {
            name: Name::from(name),
            ty_arity,
            statement,
            provenance: Provenance::Proved(Arc::new(proof)),
        });
        Ok(())
    }

    /// Records a statement without proof. Only permitted when the session
    /// explicitly enabled trust; every such name is reported.
    pub fn add_trusted_import(
        &mut self,
        name: &str,
        ty_arity: u8,
        statement: Term,
    ) -> Result<(), KernelError> {
        if !self.trust_enabled {
            return Err(KernelError::TrustDisabled(name.into()));
        }
        self.check_fresh(name)?;
        self.check_statement(ty_arity, &statement)?;
        self.push(Decl::Thm {
            name: Name::from(name),
            ty_arity,
            statement,
            provenance: Provenance::Trusted,
        });
        Ok(())
    }

    /// Appends an already-verified declaration without re-checking.
    ///
    /// Session-internal: used to assemble an article's import closure from
    /// declarations that were each verified in a prefix of the same closure.
    /// The public construction path is `add_definition`/`add_theorem`/
    /// `add_trusted_import`.
    pub(crate) fn push_unchecked(&mut self, decl: Decl) -> Result<(), KernelError> {
        self.check_fresh(decl.name())?;
        if matches!(&decl, Decl::Thm { provenance: Provenance::Trusted, .. })
            && !self.trust_enabled
        {
            return Err(KernelError::TrustDisabled(decl.name().to_string()));
        }
        self.push(decl);
        Ok(())
    }

    fn push(&mut self, decl: Decl) {
        self.index.insert(decl.name().clone(), self.decls.len());
        self.decls.push(decl);
    }
}

/// Exposes the head `Imp` of a proposition, unfolding transparent
/// definitions as needed.
pub fn dest_imp(sig: &Signature, prop: &Term) -> Result<(Term, Term), KernelError> {
    let w = whnf_unfold(sig, prop);
    match w {
        Term::Imp(a, b) => Ok(((*a).clone(), (*b).clone())),
        other => Err(KernelError::NotAnImplication(other)),
    }
}

/// Exposes the head `All` of a proposition, unfolding transparent
/// definitions as needed.
pub fn dest_all(sig: &Signature, prop: &Term) -> Result<(Type, Term), KernelError> {
    let w = whnf_unfold(sig, prop);
    match w {
        Term::All(d, b) => Ok((d, (*b).clone())),
        other => Err(KernelError::NotAForall(other)),
    }
}

/// Normalizes without unfolding, then unfolds head references one at a time
/// until an `Imp`, `All` or `Lam` (or an un-unfoldable head) surfaces.
pub fn whnf_unfold(sig: &dyn SigView, t: &Term) -> Term {
    let mut cur = beta_eta_nf(t, sig, Unfold::None);
    loop {
        match &cur {
            Term::Imp(..) | Term::All(..) | Term::Lam(..) => return cur,
            _ => {}
        }
        let mut head = &cur;
        while let Term::App(f, _) = head {
            head = f;
        }
        let Term::Ref(name, tys) = head else { return cur };
        let Some(def) = sig.lookup_def(name) else { return cur };
        if def.opacity != Opacity::Transparent {
            return cur;
        }
        let body = crate::term::instantiate_types_raw(def.body, tys);
        cur = beta_eta_nf(&replace_head(&cur, body), sig, Unfold::None);
    }
}

fn replace_head(t: &Term, new_head: Term) -> Term {
    match t {
        Term::App(f, a) => Term::app(replace_head(f, new_head), (**a).clone()),
        _ => new_head,
    }
}

/// Verifies a proof term and synthesizes the proposition it proves.
pub fn check_proof(
    sig: &Signature,
    ctx: &TypingContext,
    hyps: &[(Name, Term)],
    p: &Proof,
) -> Result<Term, KernelError> {
    match p {
        Proof::Hyp(name) => hyps
            .iter()
            .rev()
            .find(|(h, _)| h == name)
            .map(|(_, prop)| prop.clone())
            .ok_or_else(|| KernelError::UnknownHyp(name.to_string())),
        Proof::Known(name, ty_args) => {
            for ty in ty_args {
                if !ty.valid_in(ctx.ty_vars) {
                    return Err(KernelError::IllTyped(TermError::TVarOutOfScope(
                        ctx.ty_vars,
                    )));
                }
            }
            sig.known_statement(name, ty_args)
        }
        Proof::ImpIntro(name, assumed, body) => {
            if hyps.iter().any(|(h, _)| h == name) {
                return Err(KernelError::ShadowedHyp(name.to_string()));
            }
            let ty = type_of(ctx, sig, assumed)?;
            if ty != Type::Prop {
                return Err(KernelError::NotAProposition(ty));
            }
            let mut extended = hyps.to_vec();
            extended.push((name.clone(), assumed.clone()));
            let consequent = check_proof(sig, ctx, &extended, body)?;
            Ok(Term::imp(assumed.clone(), consequent))
        }
        Proof::ImpElim(major, minor) => {
            let major_prop = check_proof(sig, ctx, hyps, major)?;
            let (antecedent, consequent) = dest_imp(sig, &major_prop)?;
            let minor_prop = check_proof(sig, ctx, hyps, minor)?;
            if !conv_unchecked(&antecedent, &minor_prop, sig, Unfold::Transparent) {
                return Err(KernelError::PropMismatch {
                    expected: antecedent,
                    got: minor_prop,
                });
            }
            Ok(consequent)
        }
        Proof::AllIntro(dom, body) => {
            if !dom.valid_in(ctx.ty_vars) {
                return Err(KernelError::IllTyped(TermError::TVarOutOfScope(
                    ctx.ty_vars,
                )));
            }
            let inner_ctx = ctx.pushed(dom.clone());
            // The new bound variable shifts every hypothesis up by one;
            // this is what makes the eigenvariable condition structural.
            let lifted: HypContext = hyps
                .iter()
                .map(|(n, t)| Ok((n.clone(), lift(t, 0, 1)?)))
                .collect::<Result<_, TermError>>()?;
            let body_prop = check_proof(sig, &inner_ctx, &lifted, body)?;
            Ok(Term::all(dom.clone(), body_prop))
        }
        Proof::AllElim(f, witness) => {
            let f_prop = check_proof(sig, ctx, hyps, f)?;
            let (dom, body) = dest_all(sig, &f_prop)?;
            let wty = type_of(ctx, sig, witness).map_err(KernelError::IllTypedWitness)?;
            if wty != dom {
                return Err(KernelError::IllTypedWitness(TermError::TypeMismatch(
                    dom, wty,
                )));
            }
            Ok(subst(&body, 0, witness))
        }
    }
}
