//! Labelled transitions over typed states.
//!
//! A state is a typing derivation. Prefixes fire as axioms, parallel
//! composition propagates or synchronises the transitions of its
//! components, and restrictions turn synchronisations on their two names
//! into silent cut reductions.

mod label;
mod moves;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use label::{label_dual, parse_label, Label};

use crate::syntax::{Name, Process, TypeVar};
use crate::types::Proposition;
use crate::typing::{infer, Derivation, TypeError};

/// A state of the transition system.
pub type State = Derivation;

/// The rules of the transition system, recorded per transition so that
/// coverage can be measured.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SosRule {
    /// One of the prefix axioms.
    Axiom,
    Par1,
    Par2,
    Syn,
    Res,
    CutOne,
    CutTensor,
    CutPlus1,
    CutPlus2,
    CutBang,
    CutWeaken,
    CutContract,
    CutExists,
    Ax1,
    Ax2,
}

impl SosRule {
    pub const ALL: [SosRule; 15] = [
        SosRule::Axiom,
        SosRule::Par1,
        SosRule::Par2,
        SosRule::Syn,
        SosRule::Res,
        SosRule::CutOne,
        SosRule::CutTensor,
        SosRule::CutPlus1,
        SosRule::CutPlus2,
        SosRule::CutBang,
        SosRule::CutWeaken,
        SosRule::CutContract,
        SosRule::CutExists,
        SosRule::Ax1,
        SosRule::Ax2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SosRule::Axiom => "axiom",
            SosRule::Par1 => "Par1",
            SosRule::Par2 => "Par2",
            SosRule::Syn => "Syn",
            SosRule::Res => "Res",
            SosRule::CutOne => "1bot",
            SosRule::CutTensor => "*par",
            SosRule::CutPlus1 => "+1&",
            SosRule::CutPlus2 => "+2&",
            SosRule::CutBang => "!?",
            SosRule::CutWeaken => "!W",
            SosRule::CutContract => "!C",
            SosRule::CutExists => "exall",
            SosRule::Ax1 => "Ax1",
            SosRule::Ax2 => "Ax2",
        }
    }
}

impl fmt::Display for SosRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct Transition {
    pub source: Arc<State>,
    pub label: Label,
    pub target: State,
    /// The renaming `z -> z'` performed by a server duplication, including
    /// the server's own name.
    pub spawn_map: Option<BTreeMap<Name, Name>>,
    /// Every rule used to derive the transition, innermost first.
    pub rules: Vec<SosRule>,
}

#[derive(Debug, Clone, Error)]
pub enum LtsError {
    #[error("internal invariant violated: `{source_process}` --{label}--> `{target}` does not type: {error}")]
    InternalInvariantViolation { source_process: String, label: Label, target: String, error: Box<TypeError> },
    #[error("no transition labelled `{label}`; available: {}", list(.available))]
    NoSuchTransition { label: Label, available: Vec<Label> },
}

fn list(labels: &[Label]) -> String {
    if labels.is_empty() {
        return "none".to_string();
    }
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
}

fn root_moves(s: &State) -> moves::Moves {
    let all = s.process().all_names();
    let avoid = s.process().free_names();
    moves::moves(s, &avoid, &all)
}

fn finish(source: &Arc<State>, m: moves::Move) -> Result<Transition, LtsError> {
    let target = type_target(source, &m.label, &m.target)?;
    Ok(Transition { source: source.clone(), label: m.label, target, spawn_map: m.spawn_map, rules: m.rules })
}

/// Every transition of `s`, with re-inferred targets. Type inputs are not
/// listed on their own, since they may receive any type; see
/// [`recv_type_step`].
pub fn transitions(s: &State) -> Result<Vec<Transition>, LtsError> {
    let source = Arc::new(s.clone());
    root_moves(s).moves.into_iter().map(|m| finish(&source, m)).collect()
}

/// A transition whose target has not been typed yet.
#[derive(Clone, Debug)]
pub struct RawTransition {
    pub label: Label,
    pub target: Process,
    pub rules: Vec<SosRule>,
}

/// The transitions of `s` without re-inference, followed by its type
/// inputs fired with `witness` if one is given. Exploration uses this to
/// type each distinct target once; see [`type_target`].
pub fn raw_transitions(s: &State, witness: Option<&Proposition>) -> Vec<RawTransition> {
    let ms = root_moves(s);
    let mut out: Vec<RawTransition> =
        ms.moves.into_iter().map(|m| RawTransition { label: m.label, target: m.target, rules: m.rules }).collect();
    if let Some(w) = witness {
        for c in ms.inputs {
            out.push(RawTransition {
                label: Label::RecvType { subject: c.subject.clone(), witness: w.clone() },
                target: c.fire(s.process(), w),
                rules: c.rules,
            });
        }
    }
    out
}

/// Infers the target of a transition from `source`.
pub fn type_target(source: &State, label: &Label, target: &Process) -> Result<State, LtsError> {
    infer(target).map_err(|error| LtsError::InternalInvariantViolation {
        source_process: source.process().to_string(),
        label: label.clone(),
        target: target.to_string(),
        error: Box::new(error),
    })
}

/// The target of the first transition whose label matches `label` up to
/// bound names.
pub fn step(s: &State, label: &Label) -> Result<State, LtsError> {
    let ts = transitions(s)?;
    match ts.iter().position(|t| t.label.matches(label)) {
        Some(i) => Ok(ts.into_iter().nth(i).expect("index").target),
        None => Err(LtsError::NoSuchTransition {
            label: label.clone(),
            available: ts.into_iter().map(|t| t.label).collect(),
        }),
    }
}

/// Subjects and variables of the enabled type inputs.
pub fn type_inputs(s: &State) -> Vec<(Name, TypeVar)> {
    root_moves(s).inputs.into_iter().map(|c| (c.subject, c.var)).collect()
}

/// Fires the type input on `x`, receiving `witness`.
pub fn recv_type_step(s: &State, x: &Name, witness: &Proposition) -> Result<Transition, LtsError> {
    let label = Label::RecvType { subject: x.clone(), witness: witness.clone() };
    let Some(c) = root_moves(s).inputs.into_iter().find(|c| c.subject == *x) else {
        return Err(LtsError::NoSuchTransition {
            label,
            available: transitions(s)?.into_iter().map(|t| t.label).collect(),
        });
    };
    let target = c.fire(s.process(), witness);
    let source = Arc::new(s.clone());
    finish(&source, moves::Move { label, target, rules: c.rules, spawn_map: None, anchor: None })
}

/// The set of distinct rules appearing in `ts`.
pub fn rules_used<'a>(ts: impl IntoIterator<Item = &'a Transition>) -> BTreeSet<SosRule> {
    ts.into_iter().flat_map(|t| t.rules.iter().copied()).collect()
}

#[cfg(test)]
mod tests;
