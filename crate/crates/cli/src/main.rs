mod diff;
mod step;

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ct_core::explorer::{
    self, find_terminating_trace, generate, reachable_bounded, GenConfig, Reachable, SearchError, Trace,
};
use ct_core::lts::{self, Label, LtsError, State};
use ct_core::syntax::{parse_hypersequent, parse_process, Process};
use ct_core::typing::{derivation_json, hypersequent_json, infer};

/// Type, step and explore Classical Transitions processes.
#[derive(Parser)]
#[command(name = "ct", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// A `.ct` process file.
    #[arg(required_unless_present = "expr", conflicts_with = "expr")]
    path: Option<PathBuf>,
    /// The process text itself, instead of a file.
    #[arg(long, short)]
    expr: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the synthesized hypersequent.
    Check {
        #[command(flatten)]
        input: Input,
        /// Compare against this hypersequent and print a diff on mismatch.
        #[arg(long, value_name = "TYPE")]
        expect: Option<String>,
    },
    /// Print every enabled transition as `label  ==>  process`.
    Trans {
        #[command(flatten)]
        input: Input,
    },
    /// Fire transitions chosen by label.
    Step {
        #[command(flatten)]
        input: Input,
        /// Choose from a numbered menu on standard input.
        #[arg(long, conflicts_with = "script")]
        interactive: bool,
        /// Fire this label; repeat the flag for a sequence.
        #[arg(long, value_name = "LABEL")]
        script: Vec<String>,
    },
    /// Fire silent transitions until none is enabled.
    Run {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = Policy::First)]
        policy: Policy,
        /// Seed of the random policy.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Search for a terminating trace, or build the reachable graph.
    Explore {
        #[command(flatten)]
        input: Input,
        /// Expanded states for `terminate`, kept states for `graph`.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Goal::Terminate)]
        goal: Goal,
    },
    /// Print generated well-typed processes.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximal derivation height.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=64))]
        depth: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Write the reachable transition graph in DOT.
    Graph {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        max_states: u64,
        #[arg(long, short, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    First,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Goal {
    Terminate,
    Graph,
}

#[derive(Debug)]
pub enum Failure {
    Type(String),
    Parse(String),
    Budget(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Type(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Usage(_) => 4,
        }
    }

    fn class(&self) -> &'static str {
        match self {
            Failure::Type(_) => "type",
            Failure::Parse(_) => "parse",
            Failure::Budget(_) => "budget",
            Failure::Usage(_) => "usage",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Type(m) | Failure::Parse(m) | Failure::Budget(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

impl From<LtsError> for Failure {
    fn from(e: LtsError) -> Self {
        match e {
            LtsError::NoSuchTransition { .. } => Failure::Usage(e.to_string()),
            LtsError::InternalInvariantViolation { .. } => Failure::Type(e.to_string()),
        }
    }
}

pub type Out<'a> = &'a mut dyn Write;

/// ANSI styling, off unless the stream is a terminal and `CT_COLOR` is
/// not `0`.
#[derive(Clone, Copy)]
pub struct Style {
    on: bool,
}

impl Style {
    fn detect(terminal: bool) -> Self {
        let disabled = std::env::var("CT_COLOR").is_ok_and(|v| v == "0");
        Style { on: terminal && !disabled }
    }

    pub fn paint(self, code: &str, text: &str) -> String {
        if self.on {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

pub struct Ctx {
    pub json: bool,
    pub style: Style,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("CT-ERR:usage: {first}");
            eprint!("{text}");
            return ExitCode::from(4);
        }
    };
    let ctx = Ctx { json: cli.json, style: Style::detect(io::stdout().is_terminal()) };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(&ctx, cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let first = f.message().lines().next().unwrap_or("");
            eprintln!("CT-ERR:{}: {first}", f.class());
            for line in f.message().lines().skip(1) {
                eprintln!("{line}");
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(ctx: &Ctx, command: Command, out: Out) -> Result<(), Failure> {
    match command {
        Command::Check { input, expect } => {
            let expected = expect
                .map(|t| parse_hypersequent(&t).map_err(|e| Failure::Parse(format!("--expect: {e}"))))
                .transpose()?;
            let d = load_state(&input)?;
            match expected {
                Some(e) => diff::check_against(ctx, &d, &e, out),
                None if ctx.json => Ok(writeln!(out, "{}", derivation_json(&d))?),
                None => Ok(writeln!(out, "{}", d.hypersequent())?),
            }
        }
        Command::Trans { input } => {
            let s = load_state(&input)?;
            for t in explorer::successors(&s)? {
                if ctx.json {
                    writeln!(out, "{}", step_json(&t.label, &t.target))?;
                } else {
                    writeln!(out, "{}  ==>  {}", t.label, t.target.process())?;
                }
            }
            Ok(())
        }
        Command::Step { input, interactive, script } => {
            let labels = step::parse_script(&script)?;
            let s = load_state(&input)?;
            if interactive {
                let stdin = io::stdin();
                step::interactive(ctx, s, &mut stdin.lock(), out)
            } else {
                step::scripted(ctx, s, &labels, out)
            }
        }
        Command::Run { input, max_steps, policy, seed } => {
            if seed.is_some() && matches!(policy, Policy::First) {
                return Err(Failure::Usage("--seed only applies to --policy random".into()));
            }
            let s = load_state(&input)?;
            run_silent(ctx, s, max_steps, policy, seed.unwrap_or(0), out)
        }
        Command::Explore { input, budget, goal } => {
            let s = load_state(&input)?;
            let budget = budget as usize;
            match goal {
                Goal::Terminate => terminate(ctx, &s, budget, out),
                Goal::Graph => {
                    let r = reachable_bounded(&s, usize::MAX, budget)?;
                    if ctx.json {
                        writeln!(out, "{}", graph_json(&r))?;
                    } else {
                        write_graph_text(&r, out)?;
                    }
                    truncation(&r)
                }
            }
        }
        Command::Gen { seed, depth, count } => {
            for i in 0..count {
                let d = generate(&GenConfig::new(seed.wrapping_add(i), depth as usize));
                if ctx.json {
                    writeln!(out, "{}", derivation_json(&d))?;
                } else {
                    writeln!(out, "{} |- {}", d.process(), d.hypersequent())?;
                }
            }
            Ok(())
        }
        Command::Graph { input, max_states, out: path } => {
            let s = load_state(&input)?;
            let r = reachable_bounded(&s, usize::MAX, max_states as usize)?;
            let text = if ctx.json { format!("{}\n", graph_json(&r)) } else { r.to_dot() };
            match path {
                Some(p) => fs::write(&p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
            truncation(&r)
        }
    }
}

fn load_process(input: &Input) -> Result<Process, Failure> {
    let (origin, text) = match (&input.path, &input.expr) {
        (_, Some(e)) => ("--expr".to_string(), e.clone()),
        (Some(p), None) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            (p.display().to_string(), text)
        }
        (None, None) => return Err(Failure::Usage("no process given".into())),
    };
    parse_process(&text).map_err(|e| Failure::Parse(format!("{origin}: {e}")))
}

fn load_state(input: &Input) -> Result<State, Failure> {
    let p = load_process(input)?;
    infer(&p).map_err(|e| Failure::Type(e.to_string()))
}

pub fn step_json(label: &Label, s: &State) -> Value {
    json!({
        "label": label.to_string(),
        "process": s.process().to_string(),
        "type": hypersequent_json(s.hypersequent()),
    })
}

pub fn write_trace(ctx: &Ctx, trace: &Trace, extra: Value, out: Out) -> Result<(), Failure> {
    if ctx.json {
        let mut v = trace.to_json();
        if let (Value::Object(v), Value::Object(extra)) = (&mut v, extra) {
            v.extend(extra);
        }
        writeln!(out, "{v}")?;
    } else {
        for (l, s) in &trace.steps {
            writeln!(out, "{l}  ==>  {}", s.process())?;
        }
    }
    Ok(())
}

fn run_silent(ctx: &Ctx, start: State, max_steps: usize, policy: Policy, seed: u64, out: Out) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Trace { start, steps: Vec::new() };
    loop {
        let ts = lts::transitions(trace.last())?;
        let (taus, observable): (Vec<_>, Vec<_>) = ts.into_iter().partition(|t| t.label == Label::Tau);
        if taus.is_empty() {
            let enabled: Vec<String> = observable.iter().map(|t| t.label.to_string()).collect();
            let inputs: Vec<String> =
                lts::type_inputs(trace.last()).into_iter().map(|(x, _)| format!("{x}(type _)")).collect();
            let enabled: Vec<String> = enabled.into_iter().chain(inputs).collect();
            write_trace(ctx, &trace, json!({"quiescent": true, "enabled": enabled}), out)?;
            if !ctx.json {
                let last = trace.last();
                let steps = if trace.len() == 1 { "step" } else { "steps" };
                writeln!(
                    out,
                    "quiescent after {} {steps}: {} |- {}",
                    trace.len(),
                    last.process(),
                    last.hypersequent()
                )?;
                for l in &enabled {
                    writeln!(out, "enabled: {l}")?;
                }
            }
            return Ok(());
        }
        if trace.len() >= max_steps {
            write_trace(ctx, &trace, json!({"quiescent": false}), out)?;
            return Err(Failure::Budget(format!("still not quiescent after {max_steps} silent steps")));
        }
        let t = match policy {
            Policy::First => taus.into_iter().next().expect("non-empty"),
            Policy::Random => taus.choose(&mut rng).expect("non-empty").clone(),
        };
        trace.steps.push((t.label, t.target));
    }
}

fn terminate(ctx: &Ctx, s: &State, budget: usize, out: Out) -> Result<(), Failure> {
    match find_terminating_trace(s, budget) {
        Ok(trace) => {
            write_trace(ctx, &trace, json!({}), out)?;
            if !ctx.json {
                writeln!(out, "terminated after {} steps", trace.len())?;
            }
            Ok(())
        }
        Err(e @ SearchError::Exhausted(_)) => Err(Failure::Budget(e.to_string())),
        Err(SearchError::Lts(e)) => Err(Failure::Type(e)),
    }
}

fn graph_json(r: &Reachable) -> Value {
    json!({
        "states": r.states.iter().map(|s| json!({
            "process": s.process().canonical().to_string(),
            "type": hypersequent_json(s.hypersequent()),
        })).collect::<Vec<_>>(),
        "edges": r.edges.iter().map(|(a, l, b)| json!({"from": a, "label": l.to_string(), "to": b})).collect::<Vec<_>>(),
        "truncated": r.truncated,
    })
}

fn write_graph_text(r: &Reachable, out: Out) -> Result<(), Failure> {
    writeln!(out, "{} states, {} edges", r.states.len(), r.edges.len())?;
    for (i, s) in r.states.iter().enumerate() {
        writeln!(out, "n{i}  {} |- {}", s.process().canonical(), s.hypersequent())?;
    }
    for (a, l, b) in &r.edges {
        writeln!(out, "n{a}  {l}  n{b}")?;
    }
    Ok(())
}

fn truncation(r: &Reachable) -> Result<(), Failure> {
    if r.truncated {
        Err(Failure::Budget(format!("graph truncated at {} states", r.states.len())))
    } else {
        Ok(())
    }
}
