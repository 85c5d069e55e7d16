//! Checks the bundled formal library and prints the report, exactly as the
//! `hotg check` binary would.
//!
//! ```sh
//! cargo run --example check_stdlib
//! ```

use std::path::PathBuf;

use hotg::cli::{run_check, CheckOptions};

fn main() {
    let stdlib = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../stdlib");
    let articles = [
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
    let paths: Vec<PathBuf> = articles
        .iter()
        .map(|n| stdlib.join(format!("{n}.hotg")))
        .collect();

    let opts = CheckOptions {
        root: stdlib,
        trust_imports: true,
        digest: true,
        jobs: 2,
        ..CheckOptions::default()
    };
    match run_check(&paths, &opts) {
        Ok((report, code)) => {
            print!("{}", report.render_text(true));
            if report
                .articles
                .iter()
                .any(|a| a.name == "tarski_a" && a.status == hotg::cli::ArticleStatus::Ok)
            {
                println!("HOTG ⊢ Tarski A: proved");
            }
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
