//! Parses article-language terms, desugars them to kernel terms, and prints
//! them back. Round trips are the identity on the desugared form.
//!
//! ```sh
//! cargo run --example parse_and_print
//! ```

use std::path::PathBuf;

use hotg::cli::check_chain;
use hotg::syntax::desugar::{desugar, Env};
use hotg::syntax::parse_term;
use hotg::syntax::print::{print_closed, print_term};

fn main() {
    let stdlib = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../stdlib");
    // Notations like `c=`, `=`, set builders and `exists` resolve against
    // the prelude, so load the library first.
    let (sig, _) = check_chain(
        &stdlib,
        &["prelude_logic", "classical", "set_defs", "constructions"],
        true,
    )
    .expect("stdlib prefix checks");

    let samples = [
        "fun x:set => x",
        "forall X:set, X c= UnivOf X -> X :e UnivOf X",
        "{alpha :e U | ordinal alpha} c= U",
        "forall x y:set, exists z:set, x :e z /\\ y :e z",
        "{Power x | x :e Union X such that x = x}",
        "some f:set -> set, forall x:set, f x = x",
    ];
    for src in samples {
        let st = match parse_term(src) {
            Ok(st) => st,
            Err(e) => {
                println!("{src}\n  parse error at {e}\n");
                continue;
            }
        };
        let mut env = Env::new(&sig, &[]);
        // Free names like U above need a binding; give them one.
        env.vars = vec![("U".into(), hotg::term::Type::Ind)];
        match desugar(&mut env, &st) {
            Ok((term, ty)) => {
                let back = print_term(&term, &["U".to_string()], &[]);
                println!("{src}");
                println!("  type:    {}", hotg::syntax::print::print_type(&ty, &[]));
                println!("  sexpr:   {}", hotg::canonical::term_sexpr(&term));
                println!("  printed: {back}\n");
            }
            Err(e) => println!("{src}\n  desugar error at {e}\n"),
        }
    }

    // Errors carry positions into the original text.
    let bad = "forall X:set, X c= ";
    if let Err(e) = parse_term(bad) {
        println!("`{bad}`\n  error at {}: {}", e.pos, e.message);
    }

    // A closed kernel term prints without any environment.
    let t = hotg::term::Term::lam(hotg::term::Type::Ind, hotg::term::Term::Var(0));
    println!("\nclosed term prints as: {}", print_closed(&t));
}
