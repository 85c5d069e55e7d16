//! Evaluates first-order sentences in the hereditarily finite model: the
//! test suite's independent oracle for the characteristic membership
//! properties.
//!
//! ```sh
//! cargo run --example hf_oracle
//! ```

use std::path::PathBuf;

use hotg::cli::check_chain;
use hotg::hf::{fo_sentence_of, hf_eval, universe, HfError};
use hotg::syntax::desugar::{desugar, Env};
use hotg::syntax::parse_term;

fn main() {
    for rank in 0..=4 {
        println!("|V_{rank}| = {}", universe(rank).unwrap().len());
    }
    match universe(6) {
        Err(HfError::BudgetExceeded(r)) => println!("rank {r} refused: beyond the budget"),
        _ => unreachable!(),
    }

    // Sentences are written in the article language; sugar like `{x, y}`
    // resolves against the library, so load the prefix that defines it.
    let stdlib = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../stdlib");
    let (sig, _) = check_chain(
        &stdlib,
        &["prelude_logic", "classical", "set_defs", "constructions"],
        true,
    )
    .expect("stdlib prefix checks");

    let samples = [
        ("~Empty :e Empty", 3),
        ("forall z:set, z :e {Empty, {Empty}} <-> z = Empty \\/ z = {Empty}", 4),
        ("Union (Power Empty) = Empty", 3),
        ("exists z:set, z :e Power Empty", 3),
        ("Power Empty :e Power Empty", 3),
    ];
    println!();
    for (src, rank) in samples {
        let st = parse_term(src).unwrap();
        let mut env = Env::new(&sig, &[]);
        let (term, _) = desugar(&mut env, &st).unwrap();
        let sentence = fo_sentence_of(&term).unwrap();
        let value = hf_eval(&sentence, rank).unwrap();
        println!("[rank {rank}] {src}  ~>  {value}");
    }
}
