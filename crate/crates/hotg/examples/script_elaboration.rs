//! Elaborates a proof script into a kernel proof term, then lets the kernel
//! re-check it. The elaborator is untrusted sugar; the kernel has the final
//! word.
//!
//! ```sh
//! cargo run --example script_elaboration
//! ```

use std::path::PathBuf;

use hotg::canonical::proof_sexpr;
use hotg::cli::check_chain;
use hotg::script::{elaborate, recheck};
use hotg::syntax::desugar::{desugar, Env};
use hotg::syntax::{parse_term, Parser};

fn main() {
    let stdlib = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../stdlib");
    let (sig, _) = check_chain(
        &stdlib,
        &["prelude_logic", "classical", "set_defs", "constructions"],
        true,
    )
    .expect("stdlib prefix checks");

    let goal_src = "forall p q:prop, p /\\ q -> q /\\ p";
    let script_src = "\
        let p q:prop.\n\
        assume H: p /\\ q.\n\
        claim Hp: p. { exact andEL p q H. }\n\
        claim Hq: q. { exact andER p q H. }\n\
        exact andI q p Hq Hp.";

    let st = parse_term(goal_src).unwrap();
    let mut env = Env::new(&sig, &[]);
    let (goal, _) = desugar(&mut env, &st).unwrap();
    let steps = Parser::new(script_src).unwrap().parse_steps().unwrap();

    println!("goal:   {goal_src}");
    println!("script:\n{script_src}\n");
    match elaborate(&sig, &[], goal.clone(), &steps) {
        Ok(proof) => {
            println!("proof term:\n{}\n", proof_sexpr(&proof));
            recheck(&sig, 0, &proof, &goal).expect("kernel agrees");
            println!("kernel re-check: ok");
        }
        Err(e) => println!("elaboration failed at {e}"),
    }

    // A wrong step is reported with its position and both sides.
    let broken = "let p q:prop.\nassume H: p /\\ q.\nexact andEL q p H.";
    let steps = Parser::new(broken).unwrap().parse_steps().unwrap();
    match elaborate(&sig, &[], goal, &steps) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nbroken script rejected at {e}"),
    }
}
