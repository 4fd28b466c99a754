use std::io::{self, BufRead};

use serde_json::json;

use ct_core::explorer::{self, Trace};
use ct_core::lts::{self, parse_label, Label, LtsError, State};

use crate::{write_trace, Ctx, Failure, Out};

pub fn parse_script(script: &[String]) -> Result<Vec<Label>, Failure> {
    script.iter().map(|l| parse_label(l).map_err(|e| Failure::Parse(format!("--script `{l}`: {e}")))).collect()
}

/// The first enabled transition matching `label`. A type input fires with
/// the witness written in the label.
fn fire(s: &State, label: &Label) -> Result<(Label, State), Failure> {
    if let Label::RecvType { subject, witness } = label {
        let t = lts::recv_type_step(s, subject, witness)?;
        return Ok((t.label, t.target));
    }
    let ts = explorer::successors(s)?;
    let available = ts.iter().map(|t| t.label.clone()).collect();
    match ts.into_iter().find(|t| t.label.matches(label)) {
        Some(t) => Ok((t.label, t.target)),
        None => Err(LtsError::NoSuchTransition { label: label.clone(), available }.into()),
    }
}

fn write_final(ctx: &Ctx, trace: &Trace, out: Out) -> Result<(), Failure> {
    if ctx.json {
        write_trace(ctx, trace, json!({}), out)
    } else {
        let s = trace.last();
        Ok(writeln!(out, "final: {} |- {}", s.process(), s.hypersequent())?)
    }
}

pub fn scripted(ctx: &Ctx, start: State, labels: &[Label], out: Out) -> Result<(), Failure> {
    if labels.is_empty() && !ctx.json {
        menu(ctx, &start, &explorer::successors(&start)?, out)?;
        return Ok(());
    }
    let mut trace = Trace { start, steps: Vec::new() };
    for l in labels {
        let (label, next) = fire(trace.last(), l)?;
        if !ctx.json {
            writeln!(out, "{label}  ==>  {}", next.process())?;
        }
        trace.steps.push((label, next));
    }
    write_final(ctx, &trace, out)
}

fn menu(ctx: &Ctx, s: &State, ts: &[lts::Transition], ui: Out) -> Result<(), Failure> {
    writeln!(ui, "{} |- {}", s.process(), s.hypersequent())?;
    for (i, t) in ts.iter().enumerate() {
        let n = ctx.style.paint("1", &format!("{:>3}", i + 1));
        writeln!(ui, "{n}  {}  ==>  {}", t.label, t.target.process())?;
    }
    Ok(())
}

/// Reads menu numbers or label texts until the process terminates, gets
/// stuck, or the input says `q` or ends.
pub fn interactive(ctx: &Ctx, start: State, input: &mut dyn BufRead, out: Out) -> Result<(), Failure> {
    let trace =
        if ctx.json { session(ctx, start, input, &mut io::stderr())? } else { session(ctx, start, input, out)? };
    write_final(ctx, &trace, out)
}

fn session(ctx: &Ctx, start: State, input: &mut dyn BufRead, ui: Out) -> Result<Trace, Failure> {
    let mut trace = Trace { start, steps: Vec::new() };
    loop {
        let cur = trace.last().clone();
        if cur.process().is_terminated() {
            writeln!(ui, "terminated")?;
            break;
        }
        let ts = explorer::successors(&cur)?;
        if ts.is_empty() {
            writeln!(ui, "stuck")?;
            break;
        }
        menu(ctx, &cur, &ts, ui)?;
        write!(ui, "> ")?;
        ui.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(ui)?;
            break;
        }
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "q" || line == "quit" {
            break;
        }
        let chosen = match line.parse::<usize>() {
            Ok(n) => match ts.get(n.wrapping_sub(1)) {
                Some(t) => (t.label.clone(), t.target.clone()),
                None => {
                    writeln!(ui, "no entry {n}")?;
                    continue;
                }
            },
            Err(_) => match parse_label(line).map_err(|e| Failure::Parse(e.to_string())).and_then(|l| fire(&cur, &l)) {
                Ok(c) => c,
                Err(f) => {
                    writeln!(ui, "{}", f.message())?;
                    continue;
                }
            },
        };
        writeln!(ui, "{}  ==>  {}", chosen.0, chosen.1.process())?;
        trace.steps.push(chosen);
    }
    Ok(trace)
}
