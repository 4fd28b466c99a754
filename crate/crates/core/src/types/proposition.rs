use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::TypeVar;

/// A classical linear logic proposition, read as a session type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Proposition {
    /// `A * B`: send an `A`, continue as `B`.
    Tensor(Box<Proposition>, Box<Proposition>),
    /// `A par B`: receive an `A`, continue as `B`.
    Par(Box<Proposition>, Box<Proposition>),
    /// `A + B`: select one of two branches.
    Plus(Box<Proposition>, Box<Proposition>),
    /// `A & B`: offer two branches.
    With(Box<Proposition>, Box<Proposition>),
    One,
    Bot,
    Zero,
    Top,
    /// `!A`: a server.
    OfCourse(Box<Proposition>),
    /// `?A`: a client.
    WhyNot(Box<Proposition>),
    Exists(TypeVar, Box<Proposition>),
    Forall(TypeVar, Box<Proposition>),
    Atom(TypeVar),
    DualAtom(TypeVar),
}

use Proposition as P;

impl Proposition {
    pub fn tensor(a: Proposition, b: Proposition) -> Self {
        P::Tensor(Box::new(a), Box::new(b))
    }
    pub fn par(a: Proposition, b: Proposition) -> Self {
        P::Par(Box::new(a), Box::new(b))
    }
    pub fn plus(a: Proposition, b: Proposition) -> Self {
        P::Plus(Box::new(a), Box::new(b))
    }
    pub fn with(a: Proposition, b: Proposition) -> Self {
        P::With(Box::new(a), Box::new(b))
    }
    pub fn of_course(a: Proposition) -> Self {
        P::OfCourse(Box::new(a))
    }
    pub fn why_not(a: Proposition) -> Self {
        P::WhyNot(Box::new(a))
    }
    pub fn exists(var: impl Into<TypeVar>, body: Proposition) -> Self {
        P::Exists(var.into(), Box::new(body))
    }
    pub fn forall(var: impl Into<TypeVar>, body: Proposition) -> Self {
        P::Forall(var.into(), Box::new(body))
    }
    pub fn atom(var: impl Into<TypeVar>) -> Self {
        P::Atom(var.into())
    }
    pub fn dual_atom(var: impl Into<TypeVar>) -> Self {
        P::DualAtom(var.into())
    }

    /// Linear negation: swaps every connective with its partner on the same
    /// row of the grammar. Quantifiers keep their bound variable.
    pub fn dual(&self) -> Proposition {
        match self {
            P::Tensor(a, b) => P::par(a.dual(), b.dual()),
            P::Par(a, b) => P::tensor(a.dual(), b.dual()),
            P::Plus(a, b) => P::with(a.dual(), b.dual()),
            P::With(a, b) => P::plus(a.dual(), b.dual()),
            P::One => P::Bot,
            P::Bot => P::One,
            P::Zero => P::Top,
            P::Top => P::Zero,
            P::OfCourse(a) => P::why_not(a.dual()),
            P::WhyNot(a) => P::of_course(a.dual()),
            P::Exists(x, b) => P::Forall(x.clone(), Box::new(b.dual())),
            P::Forall(x, b) => P::Exists(x.clone(), Box::new(b.dual())),
            P::Atom(x) => P::DualAtom(x.clone()),
            P::DualAtom(x) => P::Atom(x.clone()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<TypeVar> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free_vars(&self, bound: &mut Vec<TypeVar>, out: &mut BTreeSet<TypeVar>) {
        match self {
            P::Tensor(a, b) | P::Par(a, b) | P::Plus(a, b) | P::With(a, b) => {
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            P::OfCourse(a) | P::WhyNot(a) => a.collect_free_vars(bound, out),
            P::Exists(x, b) | P::Forall(x, b) => {
                bound.push(x.clone());
                b.collect_free_vars(bound, out);
                bound.pop();
            }
            P::Atom(x) | P::DualAtom(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            P::One | P::Bot | P::Zero | P::Top => {}
        }
    }

    pub fn has_free_var(&self, var: &TypeVar) -> bool {
        match self {
            P::Tensor(a, b) | P::Par(a, b) | P::Plus(a, b) | P::With(a, b) => {
                a.has_free_var(var) || b.has_free_var(var)
            }
            P::OfCourse(a) | P::WhyNot(a) => a.has_free_var(var),
            P::Exists(x, b) | P::Forall(x, b) => x != var && b.has_free_var(var),
            P::Atom(x) | P::DualAtom(x) => x == var,
            P::One | P::Bot | P::Zero | P::Top => false,
        }
    }

    /// Capture-avoiding substitution of `witness` for the free occurrences
    /// of `var`. A dual atom `~var` becomes the dual of the witness.
    pub fn subst(&self, witness: &Proposition, var: &TypeVar) -> Proposition {
        if !self.has_free_var(var) {
            return self.clone();
        }
        match self {
            P::Tensor(a, b) => P::tensor(a.subst(witness, var), b.subst(witness, var)),
            P::Par(a, b) => P::par(a.subst(witness, var), b.subst(witness, var)),
            P::Plus(a, b) => P::plus(a.subst(witness, var), b.subst(witness, var)),
            P::With(a, b) => P::with(a.subst(witness, var), b.subst(witness, var)),
            P::OfCourse(a) => P::of_course(a.subst(witness, var)),
            P::WhyNot(a) => P::why_not(a.subst(witness, var)),
            P::Exists(x, b) | P::Forall(x, b) => {
                let (x, b) = avoid_capture(x, b, witness, var);
                let body = Box::new(b.subst(witness, var));
                if matches!(self, P::Exists(..)) {
                    P::Exists(x, body)
                } else {
                    P::Forall(x, body)
                }
            }
            P::Atom(x) if x == var => witness.clone(),
            P::DualAtom(x) if x == var => witness.dual(),
            other => other.clone(),
        }
    }

    /// Renames the free variable `from` to `to`. Assumes `to` is not
    /// captured, i.e. it is fresh for `self`.
    pub(crate) fn rename_var(&self, from: &TypeVar, to: &TypeVar) -> Proposition {
        self.subst(&P::Atom(to.clone()), from)
    }

    /// Nesting depth: constants and atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            P::Tensor(a, b) | P::Par(a, b) | P::Plus(a, b) | P::With(a, b) => 1 + a.depth().max(b.depth()),
            P::OfCourse(a) | P::WhyNot(a) | P::Exists(_, a) | P::Forall(_, a) => 1 + a.depth(),
            _ => 1,
        }
    }

    pub fn is_why_not(&self) -> bool {
        matches!(self, P::WhyNot(_))
    }

    /// Equality up to renaming of bound type variables.
    pub fn alpha_eq(&self, other: &Proposition) -> bool {
        alpha_eq_in(self, other, &mut Vec::new())
    }

    /// The α-normal representative: bound variables are renumbered in
    /// binding order, with a prefix that cannot clash with a free variable.
    pub fn canonical(&self) -> Proposition {
        let free = self.free_vars();
        let mut canon = Canonicalizer::new(free.iter());
        canon.proposition(self)
    }
}

fn avoid_capture(x: &TypeVar, body: &Proposition, witness: &Proposition, var: &TypeVar) -> (TypeVar, Proposition) {
    if x == var || !witness.has_free_var(x) {
        return (x.clone(), body.clone());
    }
    let mut avoid = witness.free_vars();
    avoid.extend(body.free_vars());
    avoid.insert(var.clone());
    let fresh = x.fresh_prime(&avoid);
    let body = body.rename_var(x, &fresh);
    (fresh, body)
}

fn alpha_eq_in(a: &Proposition, b: &Proposition, env: &mut Vec<(TypeVar, TypeVar)>) -> bool {
    match (a, b) {
        (P::Tensor(a1, a2), P::Tensor(b1, b2))
        | (P::Par(a1, a2), P::Par(b1, b2))
        | (P::Plus(a1, a2), P::Plus(b1, b2))
        | (P::With(a1, a2), P::With(b1, b2)) => alpha_eq_in(a1, b1, env) && alpha_eq_in(a2, b2, env),
        (P::OfCourse(a), P::OfCourse(b)) | (P::WhyNot(a), P::WhyNot(b)) => alpha_eq_in(a, b, env),
        (P::Exists(x, a), P::Exists(y, b)) | (P::Forall(x, a), P::Forall(y, b)) => {
            env.push((x.clone(), y.clone()));
            let eq = alpha_eq_in(a, b, env);
            env.pop();
            eq
        }
        (P::Atom(x), P::Atom(y)) | (P::DualAtom(x), P::DualAtom(y)) => {
            // The innermost binder of either variable decides.
            for (bx, by) in env.iter().rev() {
                if bx == x || by == y {
                    return bx == x && by == y;
                }
            }
            x == y
        }
        (P::One, P::One) | (P::Bot, P::Bot) | (P::Zero, P::Zero) | (P::Top, P::Top) => true,
        _ => false,
    }
}

/// Renames bound variables to `<prefix><n>` in binding order.
static COMMON: std::sync::LazyLock<Vec<Name>> =
    std::sync::LazyLock::new(|| (0..64).map(|i| Name::new(format!("_{i}"))).collect());

pub(crate) struct Canonicalizer {
    prefix: String,
    next: usize,
    scope: Vec<(Name, Name)>,
}

use crate::syntax::Name;

impl Canonicalizer {
    pub(crate) fn new<'a>(free: impl Iterator<Item = &'a Name>) -> Self {
        let bases: Vec<&str> = free.map(|n| n.base()).collect();
        let mut prefix = String::from("_");
        while bases.iter().any(|b| {
            b.strip_prefix(prefix.as_str())
                .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|c| c.is_ascii_digit()))
        }) {
            prefix.push('_');
        }
        Canonicalizer { prefix, next: 0, scope: Vec::new() }
    }

    pub(crate) fn bind(&mut self, name: &Name) -> Name {
        let fresh = if self.prefix == "_" && self.next < COMMON.len() {
            COMMON[self.next].clone()
        } else {
            Name::new(format!("{}{}", self.prefix, self.next))
        };
        self.next += 1;
        self.scope.push((name.clone(), fresh.clone()));
        fresh
    }

    pub(crate) fn unbind(&mut self, count: usize) {
        for _ in 0..count {
            self.scope.pop();
        }
    }

    pub(crate) fn lookup(&self, name: &Name) -> Name {
        self.scope.iter().rev().find(|(from, _)| from == name).map(|(_, to)| to.clone()).unwrap_or_else(|| name.clone())
    }

    pub(crate) fn proposition(&mut self, p: &Proposition) -> Proposition {
        match p {
            P::Tensor(a, b) => P::tensor(self.proposition(a), self.proposition(b)),
            P::Par(a, b) => P::par(self.proposition(a), self.proposition(b)),
            P::Plus(a, b) => P::plus(self.proposition(a), self.proposition(b)),
            P::With(a, b) => P::with(self.proposition(a), self.proposition(b)),
            P::OfCourse(a) => P::of_course(self.proposition(a)),
            P::WhyNot(a) => P::why_not(self.proposition(a)),
            P::Exists(x, b) | P::Forall(x, b) => {
                let fresh = self.bind(x);
                let body = Box::new(self.proposition(b));
                self.unbind(1);
                if matches!(p, P::Exists(..)) {
                    P::Exists(fresh, body)
                } else {
                    P::Forall(fresh, body)
                }
            }
            P::Atom(x) => P::Atom(self.lookup(x)),
            P::DualAtom(x) => P::DualAtom(self.lookup(x)),
            other => other.clone(),
        }
    }
}

// Precedence levels for printing: binders < additives < multiplicatives < unary < atoms.
const BINDER: u8 = 0;
const ADDITIVE: u8 = 1;
const MULTIPLICATIVE: u8 = 2;
const UNARY: u8 = 3;
const ATOMIC: u8 = 4;

impl Proposition {
    fn level(&self) -> u8 {
        match self {
            P::Exists(..) | P::Forall(..) => BINDER,
            P::Plus(..) | P::With(..) => ADDITIVE,
            P::Tensor(..) | P::Par(..) => MULTIPLICATIVE,
            P::OfCourse(_) | P::WhyNot(_) => UNARY,
            _ => ATOMIC,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.level() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            P::Tensor(a, b) | P::Par(a, b) | P::Plus(a, b) | P::With(a, b) => {
                let op = match self {
                    P::Tensor(..) => "*",
                    P::Par(..) => "par",
                    P::Plus(..) => "+",
                    _ => "&",
                };
                let lvl = self.level();
                a.fmt_at(f, lvl + 1)?;
                write!(f, " {op} ")?;
                // Binary connectives associate to the right.
                b.fmt_at(f, lvl.max(ADDITIVE))?;
            }
            P::OfCourse(a) => {
                f.write_str("!")?;
                a.fmt_at(f, UNARY)?;
            }
            P::WhyNot(a) => {
                f.write_str("?")?;
                a.fmt_at(f, UNARY)?;
            }
            P::Exists(x, b) => {
                write!(f, "ex {x}.")?;
                b.fmt_at(f, BINDER)?;
            }
            P::Forall(x, b) => {
                write!(f, "all {x}.")?;
                b.fmt_at(f, BINDER)?;
            }
            P::One => f.write_str("1")?,
            P::Bot => f.write_str("bot")?,
            P::Zero => f.write_str("0")?,
            P::Top => f.write_str("top")?,
            P::Atom(x) => write!(f, "{x}")?,
            P::DualAtom(x) => write!(f, "~{x}")?,
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, BINDER)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Proposition {
        P::atom("X")
    }

    #[test]
    fn dual_swaps_rows() {
        let a = P::tensor(P::One, x());
        assert_eq!(a.dual(), P::par(P::Bot, P::dual_atom("X")));
        let b = P::of_course(P::par(x(), P::One));
        assert_eq!(b.dual(), P::why_not(P::tensor(P::dual_atom("X"), P::Bot)));
        assert_eq!(P::Zero.dual(), P::Top);
    }

    #[test]
    fn subst_examples() {
        assert_eq!(x().subst(&P::One, &"X".into()), P::One);
        let body = P::forall("Y", P::par(x(), P::atom("Y")));
        let w = P::tensor(P::One, P::One);
        assert_eq!(body.subst(&w, &"X".into()), P::forall("Y", P::par(w.clone(), P::atom("Y"))));
        assert_eq!(P::One.subst(&x(), &"X".into()), P::One);
        assert_eq!(P::dual_atom("X").subst(&P::One, &"X".into()), P::Bot);
    }

    #[test]
    fn subst_avoids_capture() {
        // (all Y. X * Y){Y/X} must not capture the witness.
        let body = P::forall("Y", P::tensor(x(), P::atom("Y")));
        let out = body.subst(&P::atom("Y"), &"X".into());
        match &out {
            P::Forall(bound, inner) => {
                assert_ne!(bound, &Name::from("Y"));
                assert_eq!(**inner, P::tensor(P::atom("Y"), P::Atom(bound.clone())));
            }
            _ => panic!("unexpected {out}"),
        }
    }

    #[test]
    fn shadowed_var_untouched() {
        let body = P::exists("X", x());
        assert_eq!(body.subst(&P::One, &"X".into()), body);
    }

    #[test]
    fn alpha_equality() {
        assert!(P::forall("X", x()).alpha_eq(&P::forall("Y", P::atom("Y"))));
        assert!(!P::forall("X", P::atom("Y")).alpha_eq(&P::forall("Y", P::atom("Y"))));
        assert!(!P::forall("X", x()).alpha_eq(&P::exists("X", x())));
        let a = P::forall("X", P::forall("Y", P::tensor(x(), P::atom("Y"))));
        let b = P::forall("Y", P::forall("X", P::tensor(P::atom("Y"), x())));
        assert!(a.alpha_eq(&b));
        assert_eq!(a.canonical(), b.canonical());
    }

    #[test]
    fn canonical_prefix_avoids_free_vars() {
        let a = P::forall("Y", P::tensor(P::atom("_0"), P::atom("Y")));
        let c = a.canonical();
        assert!(c.alpha_eq(&a));
        assert_eq!(c.free_vars(), a.free_vars());
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        let a = P::tensor(P::plus(P::One, P::Bot), P::tensor(x(), P::One));
        assert_eq!(a.to_string(), "(1 + bot) * X * 1");
        let b = P::of_course(P::exists("X", x()));
        assert_eq!(b.to_string(), "!(ex X.X)");
        let c = P::plus(P::exists("X", x()), P::One);
        assert_eq!(c.to_string(), "(ex X.X) + 1");
        let d = P::tensor(P::One, P::exists("X", x()));
        assert_eq!(d.to_string(), "1 * (ex X.X)");
        assert_eq!(P::par(P::One, P::Bot).to_string(), "1 par bot");
    }
}
