use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::parse::{Parser, Tok};
use crate::syntax::{Name, ParseError};
use crate::types::Proposition;

/// A transition label.
///
/// Output-form labels (square brackets in the text syntax) are those of
/// `close`, output, selection, type output and the three client requests;
/// the others are input-form. Each output form is dual to one input form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Label {
    /// `x[]`
    Close(Name),
    /// `x()`
    Wait(Name),
    /// `x[x':A;B]`, from `x : A * B`.
    Send {
        subject: Name,
        object: Name,
        a: Proposition,
        b: Proposition,
    },
    /// `x(x':A;B)`, from `x : A par B`.
    Recv {
        subject: Name,
        object: Name,
        a: Proposition,
        b: Proposition,
    },
    /// `x[inl:A+B]`
    InlSel {
        subject: Name,
        a: Proposition,
        b: Proposition,
    },
    /// `x(inl:A&B)`
    InlOff {
        subject: Name,
        a: Proposition,
        b: Proposition,
    },
    /// `x[inr:A+B]`
    InrSel {
        subject: Name,
        a: Proposition,
        b: Proposition,
    },
    /// `x(inr:A&B)`
    InrOff {
        subject: Name,
        a: Proposition,
        b: Proposition,
    },
    /// `x[type A]`
    SendType {
        subject: Name,
        witness: Proposition,
    },
    /// `x(type A)`
    RecvType {
        subject: Name,
        witness: Proposition,
    },
    /// `?x[x':A]`, from `x : ?A`.
    UseReq {
        subject: Name,
        object: Name,
        a: Proposition,
    },
    /// `!x(x':A)`, from `x : !A`.
    UseAcc {
        subject: Name,
        object: Name,
        a: Proposition,
    },
    /// `?x[+x':A]`
    SpawnReq {
        subject: Name,
        copy: Name,
        a: Proposition,
    },
    /// `!x(+x':A)`
    SpawnAcc {
        subject: Name,
        copy: Name,
        a: Proposition,
    },
    /// `?x[-:A]`
    DispReq {
        subject: Name,
        a: Proposition,
    },
    /// `!x(-:A)`
    DispAcc {
        subject: Name,
        a: Proposition,
    },
    /// `x<->y:A`, from `link [A] x y`.
    Link {
        from: Name,
        to: Name,
        a: Proposition,
    },
    /// `<out,in>`: an output-form label paired with a dual input-form one.
    Sync(Box<Label>, Box<Label>),
    Tau,
}

use Label as L;

impl Label {
    pub fn sync(out: Label, inp: Label) -> Label {
        L::Sync(Box::new(out), Box::new(inp))
    }

    /// The channel the action happens on; `None` for links, syncs and τ.
    pub fn subject(&self) -> Option<&Name> {
        match self {
            L::Close(x) | L::Wait(x) => Some(x),
            L::Send { subject, .. }
            | L::Recv { subject, .. }
            | L::InlSel { subject, .. }
            | L::InlOff { subject, .. }
            | L::InrSel { subject, .. }
            | L::InrOff { subject, .. }
            | L::SendType { subject, .. }
            | L::RecvType { subject, .. }
            | L::UseReq { subject, .. }
            | L::UseAcc { subject, .. }
            | L::SpawnReq { subject, .. }
            | L::SpawnAcc { subject, .. }
            | L::DispReq { subject, .. }
            | L::DispAcc { subject, .. } => Some(subject),
            L::Link { .. } | L::Sync(..) | L::Tau => None,
        }
    }

    /// The name bound by the label, if any.
    pub fn binder(&self) -> Option<&Name> {
        match self {
            L::Send { object, .. } | L::Recv { object, .. } | L::UseReq { object, .. } | L::UseAcc { object, .. } => {
                Some(object)
            }
            L::SpawnReq { copy, .. } | L::SpawnAcc { copy, .. } => Some(copy),
            _ => None,
        }
    }

    pub(crate) fn binder_mut(&mut self) -> Option<&mut Name> {
        match self {
            L::Send { object, .. } | L::Recv { object, .. } | L::UseReq { object, .. } | L::UseAcc { object, .. } => {
                Some(object)
            }
            L::SpawnReq { copy, .. } | L::SpawnAcc { copy, .. } => Some(copy),
            _ => None,
        }
    }

    pub fn bound_names(&self) -> BTreeSet<Name> {
        match self {
            L::Sync(a, b) => a.bound_names().union(&b.bound_names()).cloned().collect(),
            l => l.binder().into_iter().cloned().collect(),
        }
    }

    /// Every name occurring in the label, bound or not.
    pub fn names(&self) -> BTreeSet<Name> {
        match self {
            L::Sync(a, b) => a.names().union(&b.names()).cloned().collect(),
            L::Link { from, to, .. } => [from.clone(), to.clone()].into(),
            L::Tau => BTreeSet::new(),
            l => l.subject().into_iter().chain(l.binder()).cloned().collect(),
        }
    }

    /// Square-bracket labels.
    pub fn is_output(&self) -> bool {
        matches!(
            self,
            L::Close(_)
                | L::Send { .. }
                | L::InlSel { .. }
                | L::InrSel { .. }
                | L::SendType { .. }
                | L::UseReq { .. }
                | L::SpawnReq { .. }
                | L::DispReq { .. }
        )
    }

    /// Round-bracket labels.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            L::Wait(_)
                | L::Recv { .. }
                | L::InlOff { .. }
                | L::InrOff { .. }
                | L::RecvType { .. }
                | L::UseAcc { .. }
                | L::SpawnAcc { .. }
                | L::DispAcc { .. }
        )
    }

    /// Equality with bound names ignored and types compared up to α.
    pub fn matches(&self, other: &Label) -> bool {
        let eq = |a: &Proposition, b: &Proposition| a.alpha_eq(b);
        match (self, other) {
            (L::Close(x), L::Close(y)) | (L::Wait(x), L::Wait(y)) => x == y,
            (L::Send { subject: x, a, b, .. }, L::Send { subject: y, a: c, b: d, .. })
            | (L::Recv { subject: x, a, b, .. }, L::Recv { subject: y, a: c, b: d, .. })
            | (L::InlSel { subject: x, a, b }, L::InlSel { subject: y, a: c, b: d })
            | (L::InlOff { subject: x, a, b }, L::InlOff { subject: y, a: c, b: d })
            | (L::InrSel { subject: x, a, b }, L::InrSel { subject: y, a: c, b: d })
            | (L::InrOff { subject: x, a, b }, L::InrOff { subject: y, a: c, b: d }) => x == y && eq(a, c) && eq(b, d),
            (L::SendType { subject: x, witness: a }, L::SendType { subject: y, witness: b })
            | (L::RecvType { subject: x, witness: a }, L::RecvType { subject: y, witness: b })
            | (L::UseReq { subject: x, a, .. }, L::UseReq { subject: y, a: b, .. })
            | (L::UseAcc { subject: x, a, .. }, L::UseAcc { subject: y, a: b, .. })
            | (L::SpawnReq { subject: x, a, .. }, L::SpawnReq { subject: y, a: b, .. })
            | (L::SpawnAcc { subject: x, a, .. }, L::SpawnAcc { subject: y, a: b, .. })
            | (L::DispReq { subject: x, a }, L::DispReq { subject: y, a: b })
            | (L::DispAcc { subject: x, a }, L::DispAcc { subject: y, a: b }) => x == y && eq(a, b),
            (L::Link { from: x1, to: y1, a }, L::Link { from: x2, to: y2, a: b }) => x1 == x2 && y1 == y2 && eq(a, b),
            (L::Sync(a1, b1), L::Sync(a2, b2)) => a1.matches(a2) && b1.matches(b2),
            (L::Tau, L::Tau) => true,
            _ => false,
        }
    }
}

/// Whether `a` and `b` describe dual actions, in either order. Names are
/// irrelevant; type payloads must be dual, except for type communication
/// where both sides carry the same witness.
pub fn label_dual(a: &Label, b: &Label) -> bool {
    out_in_dual(a, b) || out_in_dual(b, a)
}

fn out_in_dual(out: &Label, inp: &Label) -> bool {
    let d = |a: &Proposition, b: &Proposition| a.dual().alpha_eq(b);
    match (out, inp) {
        (L::Close(_), L::Wait(_)) => true,
        (L::Send { a, b, .. }, L::Recv { a: c, b: e, .. })
        | (L::InlSel { a, b, .. }, L::InlOff { a: c, b: e, .. })
        | (L::InrSel { a, b, .. }, L::InrOff { a: c, b: e, .. }) => d(a, c) && d(b, e),
        (L::SendType { witness: a, .. }, L::RecvType { witness: b, .. }) => a.alpha_eq(b),
        (L::UseReq { a, .. }, L::UseAcc { a: b, .. })
        | (L::SpawnReq { a, .. }, L::SpawnAcc { a: b, .. })
        | (L::DispReq { a, .. }, L::DispAcc { a: b, .. }) => d(a, b),
        _ => false,
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L::Close(x) => write!(f, "{x}[]"),
            L::Wait(x) => write!(f, "{x}()"),
            L::Send { subject, object, a, b } => write!(f, "{subject}[{object}:{a};{b}]"),
            L::Recv { subject, object, a, b } => write!(f, "{subject}({object}:{a};{b})"),
            L::InlSel { subject, a, b } => {
                write!(f, "{subject}[inl:{}]", Proposition::plus(a.clone(), b.clone()))
            }
            L::InlOff { subject, a, b } => {
                write!(f, "{subject}(inl:{})", Proposition::with(a.clone(), b.clone()))
            }
            L::InrSel { subject, a, b } => {
                write!(f, "{subject}[inr:{}]", Proposition::plus(a.clone(), b.clone()))
            }
            L::InrOff { subject, a, b } => {
                write!(f, "{subject}(inr:{})", Proposition::with(a.clone(), b.clone()))
            }
            L::SendType { subject, witness } => write!(f, "{subject}[type {witness}]"),
            L::RecvType { subject, witness } => write!(f, "{subject}(type {witness})"),
            L::UseReq { subject, object, a } => write!(f, "?{subject}[{object}:{a}]"),
            L::UseAcc { subject, object, a } => write!(f, "!{subject}({object}:{a})"),
            L::SpawnReq { subject, copy, a } => write!(f, "?{subject}[+{copy}:{a}]"),
            L::SpawnAcc { subject, copy, a } => write!(f, "!{subject}(+{copy}:{a})"),
            L::DispReq { subject, a } => write!(f, "?{subject}[-:{a}]"),
            L::DispAcc { subject, a } => write!(f, "!{subject}(-:{a})"),
            L::Link { from, to, a } => write!(f, "{from}<->{to}:{a}"),
            L::Sync(a, b) => write!(f, "<{a},{b}>"),
            L::Tau => f.write_str("tau"),
        }
    }
}

/// Parses the text form produced by `Display`.
pub fn parse_label(text: &str) -> Result<Label, ParseError> {
    let mut p = Parser::new(text)?;
    let l = label(&mut p)?;
    p.end()?;
    Ok(l)
}

impl std::str::FromStr for Label {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_label(s)
    }
}

type PResult<T> = Result<T, ParseError>;

fn label(p: &mut Parser) -> PResult<Label> {
    if *p.peek() == Tok::Ident("tau".to_string()) {
        p.advance();
        return Ok(L::Tau);
    }
    if p.eat_sym("<") {
        let out = label(p)?;
        p.expect_sym(",")?;
        let inp = label(p)?;
        p.expect_sym(">")?;
        return Ok(L::sync(out, inp));
    }
    if p.eat_sym("?") {
        let subject = p.name()?;
        p.expect_sym("[")?;
        let l = exponential(p, subject, true)?;
        p.expect_sym("]")?;
        return Ok(l);
    }
    if p.eat_sym("!") {
        let subject = p.name()?;
        p.expect_sym("(")?;
        let l = exponential(p, subject, false)?;
        p.expect_sym(")")?;
        return Ok(l);
    }
    let subject = p.name()?;
    if p.eat_sym("<->") {
        let to = p.name()?;
        p.expect_sym(":")?;
        let a = p.prop()?;
        return Ok(L::Link { from: subject, to, a });
    }
    let output = if p.eat_sym("[") {
        true
    } else {
        p.expect_sym("(")?;
        false
    };
    let close = if output { "]" } else { ")" };
    let l = if p.eat_sym(close) {
        return Ok(if output { L::Close(subject) } else { L::Wait(subject) });
    } else if p.eat_kw("type") {
        let witness = p.prop()?;
        if output {
            L::SendType { subject, witness }
        } else {
            L::RecvType { subject, witness }
        }
    } else if p.is_kw("inl") || p.is_kw("inr") {
        let left = p.eat_kw("inl");
        if !left {
            p.expect_kw("inr")?;
        }
        p.expect_sym(":")?;
        let choice = p.prop()?;
        let (a, b) = match (output, choice) {
            (true, Proposition::Plus(a, b)) | (false, Proposition::With(a, b)) => (*a, *b),
            _ => return Err(p.error()),
        };
        match (output, left) {
            (true, true) => L::InlSel { subject, a, b },
            (false, true) => L::InlOff { subject, a, b },
            (true, false) => L::InrSel { subject, a, b },
            (false, false) => L::InrOff { subject, a, b },
        }
    } else {
        let object = p.name()?;
        p.expect_sym(":")?;
        let a = p.prop()?;
        p.expect_sym(";")?;
        let b = p.prop()?;
        if output {
            L::Send { subject, object, a, b }
        } else {
            L::Recv { subject, object, a, b }
        }
    };
    if output {
        p.expect_sym("]")?;
    } else {
        p.expect_sym(")")?;
    }
    Ok(l)
}

fn exponential(p: &mut Parser, subject: Name, request: bool) -> PResult<Label> {
    if p.eat_sym("-") {
        p.expect_sym(":")?;
        let a = p.prop()?;
        return Ok(if request { L::DispReq { subject, a } } else { L::DispAcc { subject, a } });
    }
    if p.eat_sym("+") {
        let copy = p.name()?;
        p.expect_sym(":")?;
        let a = p.prop()?;
        return Ok(if request { L::SpawnReq { subject, copy, a } } else { L::SpawnAcc { subject, copy, a } });
    }
    let object = p.name()?;
    p.expect_sym(":")?;
    let a = p.prop()?;
    Ok(if request { L::UseReq { subject, object, a } } else { L::UseAcc { subject, object, a } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        Name::from(s)
    }

    #[test]
    fn duality_examples() {
        assert!(label_dual(&L::Close(n("x")), &L::Wait(n("y"))));
        assert!(!label_dual(&L::Close(n("x")), &L::Close(n("x"))));
        let send = L::Send { subject: n("x"), object: n("x'"), a: Proposition::One, b: Proposition::Bot };
        let recv = L::Recv { subject: n("y"), object: n("y'"), a: Proposition::Bot, b: Proposition::One };
        assert!(label_dual(&send, &recv));
        let wrong = L::Recv { subject: n("y"), object: n("y'"), a: Proposition::One, b: Proposition::One };
        assert!(!label_dual(&send, &wrong));
        let t = Proposition::atom("X");
        assert!(label_dual(
            &L::SendType { subject: n("x"), witness: t.clone() },
            &L::RecvType { subject: n("y"), witness: t }
        ));
    }

    #[test]
    fn names_and_binders() {
        let l = L::UseReq { subject: n("x"), object: n("v"), a: Proposition::One };
        assert_eq!(l.bound_names(), [n("v")].into());
        assert_eq!(l.names(), [n("x"), n("v")].into());
        assert!(L::Tau.names().is_empty());
        assert!(L::Close(n("x")).bound_names().is_empty());
    }

    #[test]
    fn text_round_trip() {
        for text in [
            "x[]",
            "x()",
            "x[x':1;bot]",
            "x(x':1 * 1;bot)",
            "x[inl:1 + bot]",
            "x(inl:1 & bot)",
            "x[inr:(1 + 1) + bot]",
            "x(inr:bot & 1)",
            "x[type ex X.X]",
            "x(type 1)",
            "?x[x':1]",
            "!x(x':1)",
            "?x[+x':?1]",
            "!x(+x':!1)",
            "?x[-:bot]",
            "!x(-:1)",
            "x<->y:1 par X",
            "<x[],y()>",
            "tau",
        ] {
            let l = parse_label(text).unwrap();
            assert_eq!(l.to_string(), text);
        }
    }

    #[test]
    fn matching_ignores_binders() {
        let a = parse_label("x[x':1;bot]").unwrap();
        let b = parse_label("x[w:1;bot]").unwrap();
        assert!(a.matches(&b));
        assert!(!a.matches(&parse_label("z[w:1;bot]").unwrap()));
    }
}
