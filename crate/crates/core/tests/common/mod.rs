#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use ct_core::lts::{self, parse_label, Label, LtsError, SosRule};
use ct_core::syntax::{parse_hypersequent, parse_process, Process};
use ct_core::types::{hs_equal, Hypersequent};
use ct_core::typing::{infer, Rule};

/// A corpus file: a process preceded by `-- expect-type:` and
/// `-- expect-trans:` comment lines.
pub struct Case {
    pub path: PathBuf,
    pub process: Process,
    pub expect_type: Hypersequent,
    pub expect_trans: Vec<(Label, Process)>,
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn load_corpus() -> Vec<Case> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "ct"))
        .collect();
    paths.sort();
    paths.into_iter().map(|p| load(&p)).collect()
}

fn load(path: &Path) -> Case {
    let text = std::fs::read_to_string(path).expect("readable corpus file");
    let mut expect_type = None;
    let mut expect_trans = Vec::new();
    for line in text.lines() {
        if let Some(t) = line.strip_prefix("-- expect-type:") {
            expect_type = Some(parse_hypersequent(t.trim()).unwrap_or_else(|e| panic!("{}: {e}", path.display())));
        } else if let Some(t) = line.strip_prefix("-- expect-trans:") {
            let t = t.trim();
            if t == "none" {
                continue;
            }
            let (l, p) = t.split_once("  ==>  ").unwrap_or_else(|| panic!("{}: bad transition line", path.display()));
            let label = parse_label(l).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            let target = parse_process(p).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            expect_trans.push((label, target));
        }
    }
    Case {
        path: path.to_path_buf(),
        process: parse_process(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display())),
        expect_type: expect_type.unwrap_or_else(|| panic!("{}: no expect-type line", path.display())),
        expect_trans,
    }
}

/// What a corpus file exercised.
#[derive(Default, Debug)]
pub struct Outcome {
    pub typing_rules: BTreeSet<Rule>,
    pub sos_rules: BTreeSet<SosRule>,
    pub invariant_violations: usize,
}

/// Checks one file exactly: the type up to α and the transitions as a
/// multiset, labels up to α with equal binders and targets up to α.
pub fn check_case(case: &Case) -> Result<Outcome, String> {
    let name = case.path.file_name().expect("file").to_string_lossy().to_string();
    let d = infer(&case.process).map_err(|e| format!("{name}: {e}"))?;
    if !hs_equal(d.hypersequent(), &case.expect_type) {
        return Err(format!("{name}: type `{}`, expected `{}`", d.hypersequent(), case.expect_type));
    }
    let mut out = Outcome { typing_rules: d.rules().into_iter().collect(), ..Outcome::default() };
    let ts = match lts::transitions(&d) {
        Ok(ts) => ts,
        Err(e @ LtsError::InternalInvariantViolation { .. }) => {
            out.invariant_violations += 1;
            return Err(format!("{name}: {e}"));
        }
        Err(e) => return Err(format!("{name}: {e}")),
    };
    let mut unmatched: Vec<&(Label, Process)> = case.expect_trans.iter().collect();
    for t in &ts {
        let found = unmatched
            .iter()
            .position(|(l, p)| l.matches(&t.label) && l.binder() == t.label.binder() && p.alpha_eq(t.target.process()));
        match found {
            Some(i) => {
                unmatched.remove(i);
            }
            None => return Err(format!("{name}: unexpected `{}  ==>  {}`", t.label, t.target.process())),
        }
    }
    if let Some((l, p)) = unmatched.first() {
        return Err(format!("{name}: missing `{l}  ==>  {p}`"));
    }
    out.sos_rules = lts::rules_used(&ts);
    Ok(out)
}

/// The CP-style terms, with disposal and duplication written out.
pub const CP_TERMS: [&str; 10] = [
    "new (x,y){ x[a].(close a | close x) | y(b).wait b.wait y.0 }",
    "new (x,y){ !x(u).close u | spawn y[y'].?y[a].wait a.?y'[b].wait b.0 }",
    "new (x,y){ !x(u).close u | dispose [bot] y.0 }",
    "new (x,y){ x[inl: 1].close x | case y {inl: wait y.0; inr: wait y.0} }",
    "new (x,y){ x[type 1 as ex X.(X * ~X)].x[w].(close w | wait x.0) | y(type X).y(v).link [X] v y }",
    "new (x,y){ link [bot] z x | close y }",
    "x(a).y[b].(link [1] a b | link [bot] y x)",
    "!x(u).?w[a].wait a.close u",
    "spawn x[x'].?x[a].?x'[b].wait a.wait b.0",
    "x(type X).x(a).x[b].(link [X] a b | close x)",
];
