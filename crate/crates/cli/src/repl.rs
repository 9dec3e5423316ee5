use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use anyhow::Result;
use clap::Parser;

use lscale_core::{parse_term_with, Term};

use crate::{run as run_command, Cli, Command};

const HELP: &str = "commands: parse, reduce, equiv, translate, check (same flags as the CLI)\n\
                    let <name> = <expr>   bind a macro\n\
                    quit                  leave";

/// Reads commands from stdin until end of input or `quit`.
pub fn run() -> Result<i32> {
    let stdin = io::stdin();
    let mut macros: HashMap<String, Term> = HashMap::new();
    let mut out = io::stdout();
    loop {
        write!(out, "> ")?;
        out.flush()?;
        let mut line = String::new();
        if stdin.lock().read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(0);
        }
        match eval_line(line.trim(), &mut macros) {
            Ok(Flow::Continue) => {}
            Ok(Flow::Quit) => return Ok(0),
            Err(e) => eprintln!("error: {e:#}"),
        }
    }
}

pub enum Flow {
    Continue,
    Quit,
}

pub fn eval_line(line: &str, macros: &mut HashMap<String, Term>) -> Result<Flow> {
    if line.is_empty() || line.starts_with('#') {
        return Ok(Flow::Continue);
    }
    if matches!(line, "quit" | "exit") {
        return Ok(Flow::Quit);
    }
    if line == "help" {
        println!("{HELP}");
        return Ok(Flow::Continue);
    }
    if let Some(rest) = line.strip_prefix("let ") {
        let (lhs, rhs) = rest
            .split_once('=')
            .ok_or_else(|| anyhow::anyhow!("expected `let <name> = <expr>`"))?;
        let name = lhs.trim();
        let term = parse_term_with(rhs.trim(), macros)?;
        lscale_core::VarName::new(name)?;
        println!("{name} = {term}");
        macros.insert(name.to_string(), term);
        return Ok(Flow::Continue);
    }
    let words = shlex::split(line).ok_or_else(|| anyhow::anyhow!("unbalanced quotes"))?;
    let cli = match Cli::try_parse_from(std::iter::once("lscale".to_string()).chain(words)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return Ok(Flow::Continue);
        }
    };
    if matches!(cli.command, Command::Repl) {
        println!("already in the repl");
        return Ok(Flow::Continue);
    }
    let code = run_command(cli.command, macros)?;
    if code != 0 {
        println!("exit {code}");
    }
    Ok(Flow::Continue)
}
