//! Builds and checks proofs directly against the kernel API, with no
//! parser or elaborator involved: the way an independent tool would drive
//! the trusted core.
//!
//! ```sh
//! cargo run --example prove_with_the_kernel
//! ```

use hotg::canonical::term_sexpr;
use hotg::kernel::{check_proof, enc, Proof, Signature};
use hotg::term::{ConstName, Opacity, Term, Type, TypingContext};

fn main() {
    let mut sig = Signature::new(false);
    let ctx = TypingContext::default();

    // forall N. N :e UnivOf N, instantiated at Empty by universal
    // elimination.
    let univ_at_empty = Proof::all_elim(
        Proof::known("UnivIn", vec![]),
        Term::cst(ConstName::Empty),
    );
    let prop = check_proof(&sig, &ctx, &[], &univ_at_empty).unwrap();
    println!("UnivIn Empty proves:   {}", term_sexpr(&prop));

    // An implication introduction: (Empty :e Empty) -> (Empty :e Empty).
    let e_in_e = enc::in_(Term::cst(ConstName::Empty), Term::cst(ConstName::Empty));
    let refl = Proof::imp_intro("H", e_in_e.clone(), Proof::hyp("H"));
    let prop = check_proof(&sig, &ctx, &[], &refl).unwrap();
    println!("imp_intro proves:      {}", term_sexpr(&prop));

    // Record it; the signature re-checks the proof against the statement.
    sig.add_theorem("imp_refl_empty", 0, Term::imp(e_in_e.clone(), e_in_e), refl)
        .unwrap();
    println!("recorded imp_refl_empty; proved = {}", sig.proved_count());

    // A definition participates in conversion when transparent.
    sig.add_definition(
        "TransSet",
        0,
        Type::arrow(Type::Ind, Type::Prop),
        Term::lam(Type::Ind, enc::transset(Term::Var(0))),
        Opacity::Transparent,
    )
    .unwrap();
    let stmt_with_ref = Term::all(
        Type::Ind,
        Term::app(
            Term::rf("TransSet"),
            Term::app(Term::cst(ConstName::UnivOf), Term::Var(0)),
        ),
    );
    // The axiom's statement is fully expanded; conversion bridges the gap.
    sig.add_theorem(
        "univ_trans_restated",
        0,
        stmt_with_ref,
        Proof::known("UnivTrans", vec![]),
    )
    .unwrap();
    println!("recorded univ_trans_restated via transparent unfolding");

    // The kernel rejects what does not check.
    let bad = Proof::all_elim(Proof::known("EmptyAx", vec![]), Term::cst(ConstName::Empty));
    match check_proof(&sig, &ctx, &[], &bad) {
        Err(e) => println!("rejected as expected:  {e}"),
        Ok(_) => unreachable!("the Empty axiom is not a universal"),
    }
}
