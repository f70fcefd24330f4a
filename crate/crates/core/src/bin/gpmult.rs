//! Command-line front end: `gpmult <command> --config <file> ...`.
//!
//! Exit codes: 0 pass, 1 check failure, 2 config error, 3 budget exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gpmult_core::config::{parse_word, LoadedScenario, ScenarioConfig};
use gpmult_core::multipliers::gp_multiplier;
use gpmult_core::verifier::{check_setup, run_all, Status, Suite};
use gpmult_core::wordcraft::normalize;
use gpmult_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "gpmult", version, about = "Graph products of positive definite multipliers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `verify.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Prints canonical forms of words given as `[[vertex, element], ...]`.
    Normalize {
        #[command(flatten)]
        common: Common,
        /// File with one word per line.
        #[arg(long)]
        words: Option<PathBuf>,
        word: Vec<String>,
    },
    /// Validates the actions and multipliers.
    CheckSetup {
        #[command(flatten)]
        common: Common,
    },
    /// Prints the graph-product multiplier at a word as a K-vector.
    Eval {
        #[command(flatten)]
        common: Common,
        word: String,
    },
    /// Runs a verification suite and emits a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("{msg}");
    ExitCode::from(code)
}

fn load(common: &Common) -> Result<LoadedScenario, ExitCode> {
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return Err(fail(EXIT_CONFIG, format!("ThreadPool: {e}")));
        }
    }
    let text = fs::read_to_string(&common.config)
        .map_err(|e| fail(EXIT_CONFIG, format!("IoError: {}: {e}", common.config.display())))?;
    let mut cfg = ScenarioConfig::from_json(&text).map_err(|e| fail(EXIT_CONFIG, e))?;
    if let Some(s) = common.seed {
        cfg.verify.seed = s;
    }
    cfg.build().map_err(|e| fail(EXIT_CONFIG, e))
}

fn error_exit(e: &Error) -> u8 {
    if matches!(e, Error::BudgetExceeded(_)) {
        EXIT_BUDGET
    } else {
        EXIT_CONFIG
    }
}

fn cmd_normalize(common: &Common, file: Option<&PathBuf>, args: &[String]) -> ExitCode {
    let loaded = match load(common) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let mut words: Vec<String> = Vec::new();
    if let Some(f) = file {
        match fs::read_to_string(f) {
            Ok(t) => words.extend(t.lines().filter(|l| !l.trim().is_empty()).map(String::from)),
            Err(e) => return fail(EXIT_CONFIG, format!("IoError: {}: {e}", f.display())),
        }
    }
    words.extend(args.iter().cloned());
    let gp = loaded.scenario.ctx.system().gp();
    for (i, w) in words.iter().enumerate() {
        let raw = match parse_word(w) {
            Ok(r) => r,
            Err(msg) => return fail(EXIT_CONFIG, format!("ParseError in word {i}: {msg}")),
        };
        match normalize(&raw, gp) {
            Ok(x) => println!("{x} (length {})", x.len()),
            Err(e) => return fail(error_exit(&e), format!("{} in word {i}: {e}", e.code())),
        }
    }
    ExitCode::SUCCESS
}

fn cmd_check_setup(common: &Common) -> ExitCode {
    let loaded = match load(common) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let problems = loaded.setup_problems();
    for p in &problems {
        println!("{p}");
    }
    let sc = &loaded.scenario;
    for (v, p) in sc.ctx.system().gp().graph().vertices().iter().zip(sc.vertex_positivity()) {
        let verdict = if p.positive { "positive definite" } else { "not positive definite" };
        println!("vertex {v}: {verdict} (lambda_min = {:e})", p.lambda_min);
    }
    match check_setup(sc) {
        Ok(o) if o.status == Status::Pass && problems.is_empty() => {
            println!("setup ok");
            ExitCode::SUCCESS
        }
        Ok(_) => ExitCode::from(EXIT_FAIL),
        Err(e) => fail(error_exit(&e), format!("{}: {e}", e.code())),
    }
}

fn cmd_eval(common: &Common, word: &str) -> ExitCode {
    let loaded = match load(common) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let raw = match parse_word(word) {
        Ok(r) => r,
        Err(msg) => return fail(EXIT_CONFIG, format!("ParseError: {msg}")),
    };
    let ctx = &loaded.scenario.ctx;
    let value = normalize(&raw, ctx.system().gp()).and_then(|x| gp_multiplier(&x, ctx));
    match value {
        Ok(c) => {
            println!("{}", serde_json::to_string(c.scalars()).expect("scalars serialize"));
            ExitCode::SUCCESS
        }
        Err(e) => fail(error_exit(&e), format!("{}: {e}", e.code())),
    }
}

fn cmd_verify(common: &Common, suite: &str, out: Option<&PathBuf>) -> ExitCode {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", Error::code(&e))),
    };
    let loaded = match load(common) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let report = match run_all(&loaded.scenario, suite) {
        Ok(r) => r,
        Err(e) => return fail(error_exit(&e), format!("{}: {e}", e.code())),
    };
    for c in &report.checks {
        let tag = match c.outcome.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        eprintln!("{tag} {}", c.name);
    }
    let text = serde_json::to_string_pretty(&loaded.report_json(&report)).expect("report serializes");
    match out {
        Some(p) => {
            if let Err(e) = fs::write(p, text + "\n") {
                return fail(EXIT_CONFIG, format!("IoError: {}: {e}", p.display()));
            }
        }
        None => println!("{text}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Normalize { common, words, word } => cmd_normalize(common, words.as_ref(), word),
        Command::CheckSetup { common } => cmd_check_setup(common),
        Command::Eval { common, word } => cmd_eval(common, word),
        Command::Verify { common, suite, out } => cmd_verify(common, suite, out.as_ref()),
    }
}
