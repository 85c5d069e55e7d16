use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hotg::cli::{run_check, CheckOptions};

#[derive(Parser)]
#[command(name = "hotg", version, about = "Proof checker for higher-order Tarski-Grothendieck set theory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check articles (and everything they import) in dependency order.
    Check {
        /// Article files to check (`.hotg`).
        files: Vec<PathBuf>,
        /// Directory imports are resolved against.
        #[arg(long, default_value = ".")]
        root: PathBuf,
        /// Write canonical exports of every checked article here.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
        /// Print one `digest <name> <sha256>` line per article.
        #[arg(long)]
        digest: bool,
        /// Permit `Trusted` declarations; every trusted name is reported.
        #[arg(long)]
        trust_imports: bool,
        /// Check independent articles in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Machine-readable report.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Check { files, root, export, digest, trust_imports, jobs, json } => {
            let opts = CheckOptions {
                root,
                export_dir: export,
                digest,
                trust_imports,
                jobs,
                json,
            };
            match run_check(&files, &opts) {
                Ok((report, code)) => {
                    if opts.json {
                        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
                    } else {
                        print!("{}", report.render_text(opts.digest));
                    }
                    ExitCode::from(code as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
