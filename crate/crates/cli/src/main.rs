use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lscale_core::relative::check_relative_batch;
use lscale_core::rewrite::{equiv_detailed, DEFAULT_EQUIV_BUDGET, DEFAULT_NORMALIZE_BUDGET};
use lscale_core::{
    check_irq_batch, check_lambda_batch, normalize, parse_term_with, to_dot, translate,
    translate_simplified, CheckReport, EquivVerdict, RelContext, RelTerm, Scale, Term,
};

mod repl;

#[derive(Debug, Parser)]
#[command(
    name = "lscale",
    version,
    about = "Rewriting engine for the lambda-Scale calculus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a term and print its canonical form.
    Parse {
        expr: String,
        /// Also write the syntactic tree as GraphViz DOT.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Normalize a term with the forward rules.
    Reduce {
        expr: String,
        #[arg(long, default_value_t = DEFAULT_NORMALIZE_BUDGET)]
        budget: usize,
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Try to prove two terms equivalent. Exits 0 when proved, 2 otherwise.
    Equiv {
        lhs: String,
        rhs: String,
        #[arg(long, default_value_t = DEFAULT_EQUIV_BUDGET)]
        budget: usize,
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Translate a relative term over the base term and scale.
    Translate {
        #[arg(long)]
        base: String,
        #[arg(long)]
        scale: String,
        rel: String,
        /// Use the short form for an abstraction.
        #[arg(long)]
        simplified: bool,
    },
    /// Run a batch of checks. Exits 0 iff every check is proved.
    Check {
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value = "a")]
        base: String,
        #[arg(long, default_value = "e")]
        scale: String,
    },
    /// Interactive loop over the same commands, with `let name = expr`.
    Repl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Irq,
    Lambda,
    Relative,
}

fn parse_expr(src: &str, macros: &HashMap<String, Term>) -> Result<Term> {
    parse_term_with(src, macros).with_context(|| format!("cannot parse `{src}`"))
}

fn parse_scale(src: &str) -> Result<Scale> {
    src.parse()
        .with_context(|| format!("cannot parse scale `{src}`"))
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn print_reports(reports: &[CheckReport]) -> i32 {
    for r in reports {
        println!("{r}");
    }
    let unknown = reports.iter().filter(|r| !r.is_proved()).count();
    eprintln!(
        "{} checks, {} proved, {} unknown",
        reports.len(),
        reports.len() - unknown,
        unknown
    );
    if unknown == 0 {
        0
    } else {
        2
    }
}

/// Runs one command and returns the process exit code.
pub fn run(command: Command, macros: &HashMap<String, Term>) -> Result<i32> {
    match command {
        Command::Parse { expr, dot } => {
            let t = parse_expr(&expr, macros)?;
            println!("{t}");
            if let Some(path) = dot {
                write_file(&path, &to_dot(&t))?;
            }
            Ok(0)
        }
        Command::Reduce {
            expr,
            budget,
            trace,
        } => {
            let t = parse_expr(&expr, macros)?;
            let out = normalize(&t, budget);
            println!("{}", out.result);
            println!("status {:?} steps {}", out.status, out.trace.len());
            if let Some(path) = trace {
                write_file(&path, &out.trace.to_string())?;
            }
            Ok(0)
        }
        Command::Equiv {
            lhs,
            rhs,
            budget,
            trace,
        } => {
            let a = parse_expr(&lhs, macros)?;
            let b = parse_expr(&rhs, macros)?;
            let out = equiv_detailed(&a, &b, budget);
            match &out.verdict {
                EquivVerdict::Proved(t) => {
                    println!("Proved steps={} explored={}", t.len(), out.explored);
                    if let Some(path) = trace {
                        write_file(&path, &t.to_string())?;
                    }
                    Ok(0)
                }
                EquivVerdict::Unknown => {
                    println!("Unknown explored={}", out.explored);
                    Ok(2)
                }
            }
        }
        Command::Translate {
            base,
            scale,
            rel,
            simplified,
        } => {
            let ctx = RelContext::new(parse_expr(&base, macros)?, parse_scale(&scale)?);
            let b = RelTerm::lift(&parse_expr(&rel, macros)?);
            let t = if simplified {
                let RelTerm::Abs(u, body) = &b else {
                    bail!("--simplified needs an abstraction, got `{b}`");
                };
                translate_simplified(&ctx, u, body)?
            } else {
                translate(&ctx, &b)?
            };
            println!("{t}");
            Ok(0)
        }
        Command::Check {
            suite,
            seed,
            count,
            depth,
            budget,
            base,
            scale,
        } => {
            let reports = match suite {
                Suite::Irq => check_irq_batch(
                    seed,
                    count.unwrap_or(200),
                    depth.unwrap_or(4),
                    budget.unwrap_or(DEFAULT_EQUIV_BUDGET),
                ),
                Suite::Lambda => check_lambda_batch(budget.unwrap_or(DEFAULT_NORMALIZE_BUDGET)),
                Suite::Relative => {
                    let ctx = RelContext::new(parse_expr(&base, macros)?, parse_scale(&scale)?);
                    check_relative_batch(
                        &ctx,
                        seed,
                        count.unwrap_or(100),
                        depth.unwrap_or(3),
                        budget.unwrap_or(DEFAULT_EQUIV_BUDGET),
                    )?
                }
            };
            Ok(print_reports(&reports))
        }
        Command::Repl => repl::run(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command, &HashMap::new()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
