use std::fmt;

use super::Process;

/// Renders a prefix continuation, parenthesising a parallel composition.
struct Cont<'a>(&'a Process);

impl fmt::Display for Cont<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Process::Par(..) => write!(f, "({})", self.0),
            p => write!(f, "{p}"),
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Process::Send { subject, object, cont } => write!(f, "{subject}[{object}].{}", Cont(cont)),
            Process::Recv { subject, object, cont } => write!(f, "{subject}({object}).{}", Cont(cont)),
            Process::SelectLeft { subject, right, cont } => {
                write!(f, "{subject}[inl: {right}].{}", Cont(cont))
            }
            Process::SelectRight { subject, left, cont } => {
                write!(f, "{subject}[inr: {left}].{}", Cont(cont))
            }
            Process::Case { subject, left, right } => {
                write!(f, "case {subject} {{inl: {left}; inr: {right}}}")
            }
            Process::SendType { subject, witness, var, scheme, cont } => {
                write!(f, "{subject}[type {witness} as ex {var}.{scheme}].{}", Cont(cont))
            }
            Process::RecvType { subject, var, cont } => {
                write!(f, "{subject}(type {var}).{}", Cont(cont))
            }
            Process::Close { subject } => write!(f, "close {subject}"),
            Process::Wait { subject, cont } => write!(f, "wait {subject}.{}", Cont(cont)),
            Process::Link { ty, from, to } => write!(f, "link [{ty}] {from} {to}"),
            Process::Server { subject, object, body } => {
                write!(f, "!{subject}({object}).{}", Cont(body))
            }
            Process::ClientUse { subject, object, cont } => {
                write!(f, "?{subject}[{object}].{}", Cont(cont))
            }
            Process::ClientSpawn { subject, copy, cont } => {
                write!(f, "spawn {subject}[{copy}].{}", Cont(cont))
            }
            Process::ClientDispose { subject, ty, cont } => {
                write!(f, "dispose [{ty}] {subject}.{}", Cont(cont))
            }
            Process::Res { left, right, body } => write!(f, "new ({left},{right}){{ {body} }}"),
            Process::Par(l, r) => match **r {
                // `|` associates to the left.
                Process::Par(..) => write!(f, "{l} | ({r})"),
                _ => write!(f, "{l} | {r}"),
            },
            Process::Nil => f.write_str("0"),
        }
    }
}

/// The canonical text of a process.
pub fn print(p: &Process) -> String {
    p.to_string()
}
