use std::collections::BTreeSet;

use serde_json::{json, Value};

use ct_core::lts::State;
use ct_core::types::{hs_equal, Hypersequent};
use ct_core::typing::{derivation_json, hypersequent_json};

use crate::{Ctx, Failure, Out};

/// One line per name whose type differs; `None` where a side lacks it.
fn entries(expected: &Hypersequent, actual: &Hypersequent) -> Vec<(String, Option<String>, Option<String>)> {
    let names: BTreeSet<_> = expected.names().into_iter().chain(actual.names()).collect();
    names
        .into_iter()
        .filter_map(|n| {
            let e = expected.lookup(&n);
            let a = actual.lookup(&n);
            match (e, a) {
                (Some(e), Some(a)) if e.alpha_eq(a) => None,
                _ => Some((n.to_string(), e.map(|p| p.to_string()), a.map(|p| p.to_string()))),
            }
        })
        .collect()
}

pub fn check_against(ctx: &Ctx, d: &State, expected: &Hypersequent, out: Out) -> Result<(), Failure> {
    let actual = d.hypersequent();
    if hs_equal(actual, expected) {
        if ctx.json {
            writeln!(out, "{}", derivation_json(d))?;
        } else {
            writeln!(out, "{actual}")?;
        }
        return Ok(());
    }
    let diff = entries(expected, actual);
    if ctx.json {
        let lines: Vec<Value> = diff.iter().map(|(n, e, a)| json!({"name": n, "expected": e, "found": a})).collect();
        let v = json!({
            "expected": hypersequent_json(expected),
            "found": hypersequent_json(actual),
            "diff": lines,
        });
        writeln!(out, "{v}")?;
    } else {
        let s = ctx.style;
        writeln!(out, "expected: {expected}")?;
        writeln!(out, "found:    {actual}")?;
        for (n, e, a) in &diff {
            if let Some(e) = e {
                writeln!(out, "{}", s.paint("31", &format!("- {n} : {e}")))?;
            }
            if let Some(a) = a {
                writeln!(out, "{}", s.paint("32", &format!("+ {n} : {a}")))?;
            }
        }
        if diff.is_empty() {
            writeln!(out, "same entries, grouped into different sequents")?;
        }
    }
    Err(Failure::Type(format!("expected `{expected}`, found `{actual}`")))
}
