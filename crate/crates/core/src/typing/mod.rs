//! Type synthesis: one structural pass over a process builds its typing
//! derivation.

mod error;
mod infer;
mod json;
mod validate;

use std::fmt;

pub use error::{TypeError, TypeErrorKind};
pub use infer::{check, infer};
pub use json::{derivation_json, hypersequent_json};
pub use validate::{validate, Validation};

use crate::syntax::Process;
use crate::types::Hypersequent;

/// The typing rules.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rule {
    Ax,
    Cut,
    Mix0,
    Mix,
    One,
    Bot,
    Tensor,
    Parr,
    Plus1,
    Plus2,
    With,
    Exists,
    Forall,
    Bang,
    Quest,
    Weaken,
    Contract,
}

impl Rule {
    pub const ALL: [Rule; 17] = [
        Rule::Ax,
        Rule::Cut,
        Rule::Mix0,
        Rule::Mix,
        Rule::One,
        Rule::Bot,
        Rule::Tensor,
        Rule::Parr,
        Rule::Plus1,
        Rule::Plus2,
        Rule::With,
        Rule::Exists,
        Rule::Forall,
        Rule::Bang,
        Rule::Quest,
        Rule::Weaken,
        Rule::Contract,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Ax => "Ax",
            Rule::Cut => "Cut",
            Rule::Mix0 => "Mix0",
            Rule::Mix => "Mix",
            Rule::One => "1",
            Rule::Bot => "bot",
            Rule::Tensor => "*",
            Rule::Parr => "par",
            Rule::Plus1 => "+1",
            Rule::Plus2 => "+2",
            Rule::With => "&",
            Rule::Exists => "ex",
            Rule::Forall => "all",
            Rule::Bang => "!",
            Rule::Quest => "?",
            Rule::Weaken => "W",
            Rule::Contract => "C",
        }
    }

    /// The rule whose conclusion has `p` as its subject.
    pub fn for_process(p: &Process) -> Rule {
        match p {
            Process::Send { .. } => Rule::Tensor,
            Process::Recv { .. } => Rule::Parr,
            Process::SelectLeft { .. } => Rule::Plus1,
            Process::SelectRight { .. } => Rule::Plus2,
            Process::Case { .. } => Rule::With,
            Process::SendType { .. } => Rule::Exists,
            Process::RecvType { .. } => Rule::Forall,
            Process::Close { .. } => Rule::One,
            Process::Wait { .. } => Rule::Bot,
            Process::Link { .. } => Rule::Ax,
            Process::Server { .. } => Rule::Bang,
            Process::ClientUse { .. } => Rule::Quest,
            Process::ClientSpawn { .. } => Rule::Contract,
            Process::ClientDispose { .. } => Rule::Weaken,
            Process::Res { .. } => Rule::Cut,
            Process::Par(..) => Rule::Mix,
            Process::Nil => Rule::Mix0,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `process ⊢ hypersequent`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Judgement {
    pub process: Process,
    pub hypersequent: Hypersequent,
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.process, self.hypersequent)
    }
}

/// A typing derivation; the premises type the immediate subterms in order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub rule: Rule,
    pub premises: Vec<Derivation>,
    pub conclusion: Judgement,
}

impl Derivation {
    pub fn process(&self) -> &Process {
        &self.conclusion.process
    }

    pub fn hypersequent(&self) -> &Hypersequent {
        &self.conclusion.hypersequent
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Leaves have height 1.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Every rule used, with multiplicity, in pre-order.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    /// The sub-derivation reached by following premise indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.at_path(rest),
        }
    }

    /// An indented rendering, conclusion first.
    pub fn tree(&self) -> String {
        let mut out = String::new();
        self.tree_into(0, &mut out);
        out
    }

    fn tree_into(&self, indent: usize, out: &mut String) {
        use fmt::Write;
        let _ = writeln!(out, "{:indent$}[{}] {}", "", self.rule, self.conclusion, indent = indent);
        for p in &self.premises {
            p.tree_into(indent + 2, out);
        }
    }
}
