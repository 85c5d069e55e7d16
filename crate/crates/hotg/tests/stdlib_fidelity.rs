//! The bundled library against the mathematical source: every basic
//! definition must normalize, under transparent unfolding, to exactly the
//! lambda-term it abbreviates, and the builtin axioms must be reachable
//! from the surface notations.

mod common;

use common::*;
use hotg::cli::check_chain;
use hotg::kernel::{builtin_axiom, enc, AxiomName, Signature};
use hotg::syntax::desugar::{desugar, Env};
use hotg::syntax::parse_term;
use hotg::term::Term::Var;
use hotg::term::{conv, ConstName, Term, Type, TypingContext, Unfold};
use Type::{Ind, Prop};

fn chain() -> &'static Signature {
    &stretch_chain().0
}

fn assert_def_is(sig: &Signature, name: &str, expected: Term) {
    let ctx = TypingContext::default();
    let ok = conv(&ctx, &Term::rf(name), &expected, sig, Unfold::Transparent)
        .unwrap_or_else(|e| panic!("{name}: type disagreement with expected term: {e}"));
    assert!(ok, "{name} does not unfold to its defining lambda-term");
}

#[test]
fn set_defs_match_their_lambda_terms() {
    let sig = chain();
    assert_def_is(&sig, "Subq", Term::lam(Ind, Term::lam(Ind, enc::subq(Var(1), Var(0)))));
    assert_def_is(&sig, "TransSet", Term::lam(Ind, enc::transset(Var(0))));
    assert_def_is(&sig, "Union_closed", Term::lam(Ind, enc::union_closed(Var(0))));
    assert_def_is(&sig, "Power_closed", Term::lam(Ind, enc::power_closed(Var(0))));
    assert_def_is(&sig, "Repl_closed", Term::lam(Ind, enc::repl_closed(Var(0))));
    assert_def_is(&sig, "ZF_closed", Term::lam(Ind, enc::zf_closed(Var(0))));
    // ordinal alpha = TransSet alpha /\ forall beta :e alpha, TransSet beta
    assert_def_is(
        &sig,
        "ordinal",
        Term::lam(
            Ind,
            enc::and(
                enc::transset(Var(0)),
                Term::all(
                    Ind,
                    Term::imp(enc::in_(Var(0), Var(1)), enc::transset(Var(0))),
                ),
            ),
        ),
    );
    // famunion X F = Union {F x | x :e X}
    assert_def_is(
        &sig,
        "famunion",
        Term::lam(
            Ind,
            Term::lam(
                Type::arrow(Ind, Ind),
                Term::app(
                    Term::cst(ConstName::Union),
                    Term::apps(
                        Term::cst(ConstName::Repl),
                        [Var(1), Term::lam(Ind, Term::app(Var(1), Var(0)))],
                    ),
                ),
            ),
        ),
    );
}

#[test]
fn prelude_connectives_match_their_encodings() {
    let sig = chain();
    assert_def_is(&sig, "False", enc::false_());
    assert_def_is(&sig, "not", Term::lam(Prop, enc::not(Var(0))));
    assert_def_is(&sig, "and", Term::lam(Prop, Term::lam(Prop, enc::and(Var(1), Var(0)))));
    assert_def_is(&sig, "or", Term::lam(Prop, Term::lam(Prop, enc::or(Var(1), Var(0)))));
    assert_def_is(&sig, "iff", Term::lam(Prop, Term::lam(Prop, enc::iff(Var(1), Var(0)))));

    // Polymorphic ones, compared at an instance.
    let ctx = TypingContext::default();
    let ex_inst = Term::Ref("ex".into(), vec![Ind]);
    let ex_expected = Term::lam(
        Type::arrow(Ind, Prop),
        enc::ex(Ind, Term::app(Var(1), Var(0))),
    );
    assert!(conv(&ctx, &ex_inst, &ex_expected, sig, Unfold::Transparent).unwrap());
    let eq_inst = Term::Ref("eq".into(), vec![Ind]);
    let eq_expected = Term::lam(Ind, Term::lam(Ind, enc::eq(Ind, Var(1), Var(0))));
    assert!(conv(&ctx, &eq_inst, &eq_expected, sig, Unfold::Transparent).unwrap());
}

/// Surface statements of the axioms are convertible with the builtin terms.
#[test]
fn surface_axioms_bridge_to_builtins() {
    let sig = chain();
    let ctx = TypingContext::default();
    let cases: &[(AxiomName, &[Type], &str)] = &[
        (AxiomName::EmptyAx, &[], "~exists x:set, x :e Empty"),
        (AxiomName::UnionAx, &[], "forall X x:set, x :e Union X <-> exists Y:set, x :e Y /\\ Y :e X"),
        (AxiomName::PowerAx, &[], "forall X Y:set, Y :e Power X <-> Y c= X"),
        (
            AxiomName::ReplacementAx,
            &[],
            "forall X:set, forall F:set -> set, forall y:set, y :e {F x | x :e X} <-> exists x :e X, y = F x",
        ),
        (AxiomName::UnivIn, &[], "forall N:set, N :e UnivOf N"),
        (AxiomName::UnivTrans, &[], "forall N:set, TransSet (UnivOf N)"),
        (AxiomName::UnivZFClosed, &[], "forall N:set, ZF_closed (UnivOf N)"),
        (
            AxiomName::UnivMin,
            &[],
            "forall N U:set, N :e U -> TransSet U -> ZF_closed U -> UnivOf N c= U",
        ),
        (
            AxiomName::SetExt,
            &[],
            "forall X Y:set, X c= Y -> Y c= X -> X = Y",
        ),
        (
            AxiomName::Choice,
            &[Ind],
            "forall p:set -> prop, forall x:set, p x -> p (some y:set, p y)",
        ),
        (
            AxiomName::PropExt,
            &[],
            "forall P Q:prop, (P <-> Q) -> P = Q",
        ),
        (
            AxiomName::InInduction,
            &[],
            "forall P:set -> prop, (forall X:set, (forall x :e X, P x) -> P X) -> forall X:set, P X",
        ),
    ];
    for (ax, args, src) in cases {
        let builtin = builtin_axiom(*ax, args).unwrap();
        let st = parse_term(src).unwrap_or_else(|e| panic!("{}: {e}", ax.name()));
        let mut env = Env::new(sig, &[]);
        let (surface, ty) = desugar(&mut env, &st).unwrap_or_else(|e| panic!("{}: {e}", ax.name()));
        assert_eq!(ty, Prop);
        assert!(
            conv(&ctx, &surface, &builtin, sig, Unfold::Transparent).unwrap(),
            "{} surface statement does not match the builtin axiom",
            ax.name()
        );
    }
}

/// FuncExt needs its two type parameters; checked at (set, set).
#[test]
fn func_ext_bridge_at_set_set() {
    let sig = chain();
    let ctx = TypingContext::default();
    let builtin = builtin_axiom(AxiomName::FuncExt, &[Ind, Ind]).unwrap();
    let st = parse_term(
        "forall f g:set -> set, (forall x:set, f x = g x) -> f = g",
    )
    .unwrap();
    let mut env = Env::new(sig, &[]);
    let (surface, _) = desugar(&mut env, &st).unwrap();
    assert!(conv(&ctx, &surface, &builtin, sig, Unfold::Transparent).unwrap());
}

#[test]
fn choice_instantiates_per_type() {
    // The polymorphic choice schema instantiated at set matches the
    // instance used throughout the constructions article.
    let inst = builtin_axiom(AxiomName::Choice, &[Ind]).unwrap();
    let ctx = TypingContext::default();
    assert_eq!(
        hotg::term::type_of(&ctx, &hotg::term::NoDefs, &inst).unwrap(),
        Prop
    );
    assert!(builtin_axiom(AxiomName::Choice, &[]).is_err());
    assert!(builtin_axiom(AxiomName::Choice, &[Ind, Ind]).is_err());
}

#[test]
fn trusted_accounting_is_exact() {
    let (sig, report) = stretch_chain();
    let trusted = sig.trusted_names();
    assert_eq!(trusted.len(), 3);
    assert_eq!(report.trusted.len(), 3);
    // A signature built without trusted imports reports an empty list.
    let (sig2, report2) = check_chain(&stdlib_dir(), &["prelude_logic", "diaconescu"], false).unwrap();
    assert!(sig2.trusted_names().is_empty());
    assert!(report2.trusted.is_empty());
}

#[test]
fn diaconescu_chain_proves_classical_principles_without_trust() {
    let (sig, _) = check_chain(&stdlib_dir(), &["prelude_logic", "diaconescu"], false).unwrap();
    for name in ["EM", "DN"] {
        let (_, _, prov) = sig.theorem(name).unwrap();
        assert!(matches!(prov, hotg::kernel::Provenance::Proved(_)));
    }
}

#[test]
fn script_set_local_example_rechecks() {
    // The paper's `set lambda := {alpha :e U | ordinal alpha}` device:
    // a local abbreviation is expanded during elaboration and the result
    // still passes the kernel.
    let sig = chain();
    let src = "forall U:set, {alpha :e U | ordinal alpha} c= U";
    let st = parse_term(src).unwrap();
    let mut env = Env::new(sig, &[]);
    let (goal, _) = desugar(&mut env, &st).unwrap();
    let script = "let U.\n\
                  set lambda : set := {alpha :e U | ordinal alpha}.\n\
                  let a. assume Ha: a :e lambda.\n\
                  exact SepE1 U ordinal a Ha.";
    let steps = hotg::syntax::Parser::new(script).unwrap().parse_steps().unwrap();
    let proof = hotg::script::elaborate(&sig, &[], goal.clone(), &steps).expect("elaborates");
    hotg::script::recheck(&sig, 0, &proof, &goal).expect("kernel re-checks the elaborated proof");
}
