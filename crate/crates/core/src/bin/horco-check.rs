use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use horco::check::{compare, run_check, CheckConfig, Criterion, Format};
use horco::enumerate::enumerate_first_order;
use horco::fo::{rco_fixpoint_oracle, FixpointOptions};
use horco::report::{emit_report, revalidate};
use horco::syntax::{parse_term, parse_trs, term_to_string_in};
use horco::term::Var;
use horco::{Budget, Trs};

/// Termination checking with path orderings and computability-closure
/// orderings.
#[derive(Parser)]
#[command(name = "horco-check", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orient every rule of a system.
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
        /// Try every precedence and status assignment over the defined symbols.
        #[arg(long)]
        search_precedence: bool,
    },
    /// Decide LEFT > RIGHT for one pair of terms.
    Compare {
        file: PathBuf,
        left: String,
        right: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print the first-order fixpoint relation over all terms up to a size.
    Oracle {
        file: PathBuf,
        /// Largest term size, counting application nodes.
        #[arg(long, default_value_t = 5)]
        universe_size: usize,
        #[command(flatten)]
        opts: Opts,
    },
    /// Re-check the derivations of a JSON report or a single JSON derivation.
    Validate { file: PathBuf, report: PathBuf },
}

#[derive(Args)]
struct Opts {
    #[arg(long, default_value = "horco")]
    criterion: Criterion,
    #[arg(long, default_value_t = 12)]
    depth: usize,
    #[arg(long, default_value_t = 4)]
    red_steps: usize,
    #[arg(long, default_value_t = 6)]
    size_slack: usize,
    /// Longest chain of horco steps tried by `compare`.
    #[arg(long, default_value_t = 3)]
    chain: usize,
    #[arg(long, default_value = "text")]
    format: Format,
}

impl Opts {
    fn budget(&self) -> Result<Budget, String> {
        Budget::new(self.depth, self.red_steps, self.size_slack).map_err(|e| e.to_string())
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Trs, String> {
    parse_trs(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Check { file, opts, search_precedence } => {
            let trs = load(&file)?;
            let config =
                CheckConfig { criterion: opts.criterion, budget: opts.budget()?, search_precedence, format: opts.format };
            let report = run_check(&trs, &config).map_err(|e| e.to_string())?;
            print!("{}", emit_report(&report, opts.format, trs.vars()));
            Ok(report.exit_code() as u8)
        }
        Command::Compare { file, left, right, opts } => {
            let trs = load(&file)?;
            let parse = |s: &str| parse_term(s, trs.sig(), trs.vars()).map_err(|e| format!("`{s}`: {e}"));
            let (t, u) = (parse(&left)?, parse(&right)?);
            let found = compare(&trs, opts.criterion, &t, &u, opts.budget()?, opts.chain).map_err(|e| e.to_string())?;
            let declared = trs.vars();
            match opts.format {
                Format::Json => {
                    let chain: Option<Vec<_>> = found.as_ref().map(|ds| ds.iter().map(|d| d.to_json(declared)).collect());
                    let v =
                        serde_json::json!({ "criterion": opts.criterion.as_str(), "greater": found.is_some(), "chain": chain });
                    println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
                }
                Format::Text => match &found {
                    Some(ds) => {
                        println!("{left} > {right}: yes ({})", opts.criterion);
                        for d in ds {
                            print!("{}", d.render_tree(declared));
                        }
                    }
                    None => println!("{left} > {right}: no ({}, within budget)", opts.criterion),
                },
            }
            Ok(if found.is_some() { 0 } else { 1 })
        }
        Command::Oracle { file, universe_size, opts } => {
            let trs = load(&file)?;
            if !trs.is_first_order() {
                return Err("the oracle needs a first-order system".into());
            }
            let vars: Vec<Var> = trs.vars().iter().map(|(n, ty)| Var { name: n.clone(), ty: ty.clone() }).collect();
            let universe: BTreeSet<_> =
                trs.sig().sorts().iter().flat_map(|s| enumerate_first_order(trs.sig(), s, universe_size, &vars)).collect();
            let universe: Vec<_> = universe.into_iter().collect();
            let rel = rco_fixpoint_oracle(trs.sig(), trs.order(), &universe, opts.budget()?, FixpointOptions::default());
            let p = |t| term_to_string_in(t, trs.vars());
            for (t, u) in &rel {
                println!("{} > {}", p(t), p(u));
            }
            eprintln!("{} pairs over {} terms", rel.len(), universe.len());
            Ok(0)
        }
        Command::Validate { file, report } => {
            let trs = load(&file)?;
            let results = revalidate(&trs, &read(&report)?)?;
            let mut ok = true;
            for (i, r) in results.iter().enumerate() {
                match r {
                    Ok(()) => println!("derivation {}: valid", i + 1),
                    Err(e) => {
                        ok = false;
                        println!("derivation {}: INVALID: {e}", i + 1);
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("horco-check: {e}");
            ExitCode::from(2)
        }
    }
}
